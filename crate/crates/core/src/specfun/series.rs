//! Power-series summation for the Mittag-Leffler family.
//!
//! Two tiers share one description of the coefficients. The double tier
//! runs the series in f64 and returns a rounding + truncation estimate.
//! When that estimate is too large (cancellation on the negative axis),
//! the coefficients are regenerated in multiprecision and the sum is
//! carried with enough bits to absorb the largest term.

use rayon::prelude::*;

use super::bigfloat::{BigFloat, MpContext};
use super::gamma::{gamma_sign, is_nonpositive_integer, ln_gamma, ln_gamma_ratio, rgamma};
use super::{EvalResult, Tolerance};
use crate::error::{Error, Result};

const U: f64 = f64::EPSILON * 0.5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub(crate) enum Kind {
    /// c_j = (j+d)!/j! / Γ(β + α(j+d)): the d-th derivative of E_{α,β}.
    Ml { alpha: f64, beta: f64, deriv: u32 },
    /// c_0 = 1, c_{j+1} = c_j Γ(a_j)/Γ(a_j + α), a_j = α(jm+n)+1.
    Kilbas { alpha: f64, m: f64, n: f64 },
}

#[derive(Clone, Copy, Debug)]
enum Coef {
    Zero,
    Term { sign: f64, ln_abs: f64 },
}

/// Coefficients as (sign, ln|c_j|) in double precision. Ends only when a
/// Kilbas product hits a pole, after which every coefficient vanishes.
struct LogCoeffs {
    kind: Kind,
    j: u64,
    sign: f64,
    ln_c: f64,
    ended: bool,
}

impl LogCoeffs {
    fn new(kind: Kind) -> Self {
        LogCoeffs { kind, j: 0, sign: 1.0, ln_c: 0.0, ended: false }
    }
}

fn ln_falling(j: u64, d: u32) -> f64 {
    (1..=d as u64).map(|i| ((j + i) as f64).ln()).sum()
}

impl Iterator for LogCoeffs {
    type Item = Coef;

    fn next(&mut self) -> Option<Coef> {
        if self.ended {
            return None;
        }
        let j = self.j;
        self.j += 1;
        match self.kind {
            Kind::Ml { alpha, beta, deriv } => {
                let arg = beta + alpha * (j + deriv as u64) as f64;
                if is_nonpositive_integer(arg) {
                    return Some(Coef::Zero);
                }
                Some(Coef::Term { sign: gamma_sign(arg), ln_abs: ln_falling(j, deriv) - ln_gamma(arg) })
            }
            Kind::Kilbas { alpha, m, n } => {
                let out = Coef::Term { sign: self.sign, ln_abs: self.ln_c };
                let a = alpha * (j as f64 * m + n) + 1.0;
                let b = a + alpha;
                if is_nonpositive_integer(b) {
                    self.ended = true;
                } else if a > 0.0 && b > 0.0 {
                    self.ln_c -= ln_gamma_ratio(a, alpha);
                } else {
                    self.ln_c += ln_gamma(a) - ln_gamma(b);
                    self.sign *= gamma_sign(a) * gamma_sign(b);
                }
                Some(out)
            }
        }
    }
}

fn first_coefficient(kind: Kind) -> f64 {
    match kind {
        Kind::Ml { alpha, beta, deriv } => {
            let fact: f64 = (1..=deriv).map(f64::from).product();
            fact * rgamma(beta + alpha * deriv as f64)
        }
        Kind::Kilbas { .. } => 1.0,
    }
}

pub(crate) struct F64Sum {
    pub value: f64,
    pub est_abs_error: f64,
    pub terms: usize,
    /// false when a term overflowed or the term budget ran out
    pub complete: bool,
}

struct Neumaier {
    sum: f64,
    comp: f64,
}

impl Neumaier {
    fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

/// The double-precision tier.
pub(crate) fn sum_f64(kind: Kind, z: f64, tol: &Tolerance) -> F64Sum {
    if z == 0.0 {
        return F64Sum { value: first_coefficient(kind), est_abs_error: 0.0, terms: 1, complete: true };
    }
    let lz = z.abs().ln();
    let zsign = z.signum();
    let mut acc = Neumaier { sum: 0.0, comp: 0.0 };
    let mut term_err = 0.0;
    let mut abs_sum = 0.0;
    let mut prev = f64::INFINITY;
    let mut decreasing = 0;
    let mut terms = 0;
    let mut tail = f64::INFINITY;
    for (j, coef) in LogCoeffs::new(kind).enumerate() {
        terms = j + 1;
        if j >= tol.max_terms {
            return F64Sum { value: acc.value(), est_abs_error: f64::INFINITY, terms, complete: false };
        }
        let Coef::Term { sign, ln_abs } = coef else { continue };
        let ln_t = ln_abs + j as f64 * lz;
        if ln_t > 700.0 {
            return F64Sum { value: f64::NAN, est_abs_error: f64::INFINITY, terms, complete: false };
        }
        let mag = ln_t.exp();
        let t = if j % 2 == 1 && zsign < 0.0 { -sign * mag } else { sign * mag };
        acc.add(t);
        abs_sum += mag;
        let jf = j as f64;
        term_err += mag * U * (4.0 * ln_abs.abs() + 2.0 * jf * lz.abs() + 4.0 * jf + 16.0);
        if mag < prev {
            decreasing += 1;
        } else {
            decreasing = 0;
        }
        let q = mag / prev;
        prev = mag;
        if decreasing >= 3 && q < 1.0 {
            tail = mag * q / (1.0 - q);
            let target = tol.abs.max(tol.rel * acc.value().abs());
            if tail <= 0.01 * target || tail <= U * U * acc.value().abs() {
                break;
            }
        }
        tail = f64::INFINITY;
    }
    if tail.is_infinite() {
        // the Kilbas product terminated
        tail = 0.0;
    }
    F64Sum { value: acc.value(), est_abs_error: term_err + 2.0 * U * abs_sum + tail, terms, complete: true }
}

/// Size of the multiprecision sum for |z| ≤ `zmax`.
#[derive(Clone, Copy, Debug)]
struct Plan {
    terms: usize,
    /// ln of the largest term magnitude at zmax
    ln_max: f64,
    /// largest |ln c_j| seen
    ln_coef_span: f64,
    tail: f64,
}

fn plan(kind: Kind, zmax: f64, target_abs: f64, max_terms: usize) -> Result<Plan> {
    let lz = if zmax > 0.0 { zmax.ln() } else { f64::NEG_INFINITY };
    let ln_target = target_abs.ln();
    let mut ln_max = f64::NEG_INFINITY;
    let mut span: f64 = 0.0;
    let mut prev = f64::INFINITY;
    let mut decreasing = 0;
    let mut terms = 0;
    for (j, coef) in LogCoeffs::new(kind).enumerate() {
        if j >= max_terms {
            return Err(Error::Accuracy { operation: "series", achieved: ((prev + 1.0).min(700.0)).exp(), requested: target_abs });
        }
        terms = j + 1;
        let Coef::Term { ln_abs, .. } = coef else { continue };
        span = span.max(ln_abs.abs());
        let ln_t = if j == 0 { ln_abs } else { ln_abs + j as f64 * lz };
        ln_max = ln_max.max(ln_t);
        if ln_t < prev {
            decreasing += 1;
        } else {
            decreasing = 0;
        }
        let dq = ln_t - prev;
        prev = ln_t;
        if zmax == 0.0 {
            return Ok(Plan { terms: 1, ln_max, ln_coef_span: span, tail: 0.0 });
        }
        if decreasing >= 3 && dq < 0.0 {
            let q = dq.exp();
            let ln_tail = ln_t + dq - (-q).ln_1p();
            if ln_tail < ln_target - 4.0 {
                return Ok(Plan { terms, ln_max, ln_coef_span: span, tail: ln_tail.exp() });
            }
        }
    }
    Ok(Plan { terms, ln_max, ln_coef_span: span, tail: 0.0 })
}

/// Multiprecision coefficients c_0..c_{K-1}, ready to be summed at any
/// |z| ≤ `zmax` with an absolute error near `target_abs`.
#[derive(Clone, Debug)]
pub struct PreparedSeries {
    coeffs: Vec<BigFloat>,
    prec: u64,
    zmax: f64,
    rounding: f64,
    tail: f64,
}

impl PreparedSeries {
    pub(crate) fn new(kind: Kind, zmax: f64, target_abs: f64, tol: &Tolerance) -> Result<Self> {
        let zmax = zmax.abs();
        let p = plan(kind, zmax, target_abs, tol.max_terms)?;
        let k = p.terms as f64;
        let ln2 = std::f64::consts::LN_2;
        let need = (p.ln_max - target_abs.ln()) / ln2 + 2.0 * (2.0 * k + 4.0).log2() + 16.0;
        let prec = need.max(64.0).ceil() as u64;
        if prec > tol.max_bits {
            return Err(Error::Accuracy {
                operation: "series",
                achieved: (p.ln_max - tol.max_bits as f64 * ln2).exp(),
                requested: target_abs,
            });
        }
        let guard = 2.0 * (k + 1.0).log2() + (p.ln_coef_span + k.ln() * 2.0 + 2.0).log2() + 24.0;
        let ctx = MpContext::new(prec + guard.ceil() as u64);
        let coeffs = mp_coefficients(kind, p.terms, &ctx).into_iter().map(|c| c.round(prec)).collect();
        let rounding = (p.ln_max - prec as f64 * ln2).exp() * (2.0 * k + 4.0);
        Ok(PreparedSeries { coeffs, prec, zmax, rounding, tail: p.tail })
    }

    pub fn terms(&self) -> usize {
        self.coeffs.len()
    }

    pub fn zmax(&self) -> f64 {
        self.zmax
    }

    /// Σ c_j z^j by Horner's rule; |z| must not exceed `zmax`.
    pub fn eval(&self, z: f64) -> EvalResult {
        assert!(z.abs() <= self.zmax * (1.0 + 4.0 * f64::EPSILON), "prepared series evaluated outside its range");
        let zb = BigFloat::from_f64(z);
        let mut acc = BigFloat::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(&zb, self.prec).add(c, self.prec);
        }
        let tail = if z == 0.0 { 0.0 } else { self.tail };
        EvalResult { value: acc.to_f64(), est_abs_error: self.rounding + tail + U * acc.to_f64().abs(), terms_used: self.terms() }
    }
}

fn exact(x: f64) -> BigFloat {
    BigFloat::from_f64(x)
}

fn mp_coefficients(kind: Kind, terms: usize, ctx: &MpContext) -> Vec<BigFloat> {
    let p = ctx.prec;
    match kind {
        Kind::Ml { alpha, beta, deriv } => (0..terms as u64)
            .into_par_iter()
            .map(|j| {
                let arg = exact(beta).add(&exact(alpha).mul_int((j + deriv as u64) as i64, p + 64), p + 64);
                match ctx.ln_gamma(&arg) {
                    None => BigFloat::zero(),
                    Some((lg, sign)) => {
                        let mut c = ctx.exp(&lg.neg());
                        for i in 1..=deriv as i64 {
                            c = c.mul_int(j as i64 + i, p);
                        }
                        if sign < 0.0 {
                            c.neg()
                        } else {
                            c
                        }
                    }
                }
            })
            .collect(),
        Kind::Kilbas { alpha, m, n } => {
            if let Some((num, den)) = rational_step(alpha * m) {
                return kilbas_by_recurrence(alpha, n, num, den, terms, ctx);
            }
            // ln|Γ(a_j)/Γ(a_j+α)| and its sign, then a running sum
            let steps: Vec<Option<(BigFloat, f64)>> = (0..terms.saturating_sub(1) as u64)
                .into_par_iter()
                .map(|j| {
                    let wide = p + 128;
                    let jm = exact(m).mul_int(j as i64, wide);
                    let a = exact(alpha).mul(&jm.add(&exact(n), wide), wide).add(&BigFloat::one(), wide);
                    let b = a.add(&exact(alpha), wide);
                    let (lb, sb) = ctx.ln_gamma(&b)?;
                    let (la, sa) = ctx.ln_gamma(&a).expect("existence condition excludes poles of a_j");
                    Some((la.sub(&lb, p), sa * sb))
                })
                .collect();
            let mut logs = Vec::with_capacity(terms);
            let mut run = (BigFloat::zero(), 1.0);
            logs.push(Some(run.clone()));
            for s in steps {
                match s {
                    None => {
                        // every later coefficient is zero
                        break;
                    }
                    Some((d, sg)) => {
                        run = (run.0.add(&d, p), run.1 * sg);
                        logs.push(Some(run.clone()));
                    }
                }
            }
            logs.resize(terms, None);
            logs.into_par_iter()
                .map(|l| match l {
                    None => BigFloat::zero(),
                    Some((lc, s)) => {
                        let c = ctx.exp(&lc);
                        if s < 0.0 {
                            c.neg()
                        } else {
                            c
                        }
                    }
                })
                .collect()
        }
    }
}

/// p/q with q ≤ 32, p ≤ 48 when x agrees with it to a few ulps.
fn rational_step(x: f64) -> Option<(u64, u64)> {
    (1..=32u64).find_map(|q| {
        let pf = (x * q as f64).round();
        let close = (x * q as f64 - pf).abs() <= 8.0 * f64::EPSILON * x * q as f64;
        ((1.0..=48.0).contains(&pf) && close).then_some((pf as u64, q))
    })
}

/// Kilbas coefficients when the step α·m equals p/q. With a_j = α(jm+n)+1
/// one has a_{j+q} = a_j + p, so the ratio r_j = Γ(a_j)/Γ(a_j+α) obeys
/// r_{j+q} = r_j Π_{i<p} (a_j+i)/(a_j+α+i) and only q log-gammas are needed.
fn kilbas_by_recurrence(alpha: f64, n: f64, p: u64, q: u64, terms: usize, ctx: &MpContext) -> Vec<BigFloat> {
    let prec = ctx.prec;
    let wide = prec + 64;
    let nsteps = terms.saturating_sub(1);
    let a0 = exact(alpha).mul(&exact(n), wide).add(&BigFloat::one(), wide);
    let al = exact(alpha);
    let seeds: Vec<(BigFloat, Option<BigFloat>)> = (0..(q as usize).min(nsteps) as u64)
        .into_par_iter()
        .map(|j| {
            let a = a0.add(&BigFloat::from_int((j * p) as i64).div_int(q as i64, wide), wide);
            let b = a.add(&al, wide);
            let r = ctx.ln_gamma(&b).map(|(lb, sb)| {
                let (la, sa) = ctx.ln_gamma(&a).expect("existence condition excludes poles of a_j");
                let r = ctx.exp(&la.sub(&lb, wide));
                if sa * sb < 0.0 {
                    r.neg()
                } else {
                    r
                }
            });
            (a, r)
        })
        .collect();
    let mut out = Vec::with_capacity(terms);
    out.push(BigFloat::one());
    let mut a: Vec<BigFloat> = seeds.iter().map(|s| s.0.clone()).collect();
    let mut r: Vec<BigFloat> = Vec::with_capacity(seeds.len());
    for (j, (_, rj)) in seeds.into_iter().enumerate() {
        match rj {
            Some(v) => r.push(v),
            None => {
                // Γ(a_j+α) has a pole: the product vanishes from here on
                out.truncate(j + 1);
                out.resize(terms, BigFloat::zero());
                return out;
            }
        }
    }
    let mut c = BigFloat::one();
    for j in 0..nsteps {
        let s = j % q as usize;
        if j >= q as usize {
            let mut num = a[s].clone();
            let mut den = a[s].add(&al, wide);
            for i in 1..p as i64 {
                let ai = a[s].add(&BigFloat::from_int(i), wide);
                den = den.mul(&ai.add(&al, wide), wide);
                num = num.mul(&ai, wide);
            }
            r[s] = r[s].mul(&num, wide).div(&den, wide);
            a[s] = a[s].add(&BigFloat::from_int(p as i64), wide);
        }
        c = c.mul(&r[s], wide);
        out.push(c.clone());
    }
    out
}

/// Absolute accuracy asked of the multiprecision tier: the tolerance, and
/// far below half an ulp of a value of size `guess`, so that the batched and
/// single-point routes to the same z round to the same double.
fn mp_target(tol: &Tolerance, guess: f64) -> f64 {
    (tol.abs.max(tol.rel * guess) * 0.5).min(guess * f64::EPSILON * 2f64.powi(-24))
}

/// Evaluate at many points. Points the double tier cannot resolve share one
/// multiprecision coefficient table sized for the largest of their |z|;
/// anything still unresolved falls back to `evaluate`.
pub(crate) fn evaluate_many(kind: Kind, zs: &[f64], tol: &Tolerance, operation: &'static str) -> Result<Vec<EvalResult>> {
    let first: Vec<F64Sum> = zs.par_iter().map(|&z| sum_f64(kind, z, tol)).collect();
    let accepted = |f: &F64Sum| f.complete && f.value.is_finite() && tol.accepts(f.value, f.est_abs_error);
    let mut out: Vec<Option<EvalResult>> = first
        .iter()
        .map(|f| accepted(f).then_some(EvalResult { value: f.value, est_abs_error: f.est_abs_error, terms_used: f.terms }))
        .collect();
    let hard: Vec<usize> = (0..zs.len()).filter(|&i| out[i].is_none()).collect();
    if hard.len() > 1 {
        let zmax = hard.iter().map(|&i| zs[i].abs()).fold(0.0, f64::max);
        let guess = hard
            .iter()
            .map(|&i| {
                let f = &first[i];
                if f.complete && f.value.is_finite() && f.est_abs_error < 0.25 * f.value.abs() {
                    f.value.abs()
                } else {
                    1e-20
                }
            })
            .fold(f64::INFINITY, f64::min);
        let target = mp_target(tol, guess);
        if let Ok(prepared) = PreparedSeries::new(kind, zmax, target, tol) {
            let done: Vec<(usize, EvalResult)> = hard.par_iter().map(|&i| (i, prepared.eval(zs[i]))).collect();
            for (i, r) in done {
                if tol.accepts(r.value, r.est_abs_error) {
                    out[i] = Some(r);
                }
            }
        }
    }
    out.into_iter()
        .zip(zs)
        .map(|(r, &z)| match r {
            Some(r) => Ok(r),
            None => evaluate(kind, z, tol, operation),
        })
        .collect()
}

/// Evaluate at one point: double tier first, multiprecision when needed.
pub(crate) fn evaluate(kind: Kind, z: f64, tol: &Tolerance, operation: &'static str) -> Result<EvalResult> {
    let f = sum_f64(kind, z, tol);
    if f.complete && f.value.is_finite() && tol.accepts(f.value, f.est_abs_error) {
        return Ok(EvalResult { value: f.value, est_abs_error: f.est_abs_error, terms_used: f.terms });
    }
    if z > 0.0 && f.complete {
        // all terms share one sign when z > 0 and c_j > 0; no cancellation to fix
        if !f.value.is_finite() {
            return Err(Error::Domain(format!("{operation}: result overflows at z = {z}")));
        }
    }
    let mut guess = if f.complete && f.value.is_finite() && f.est_abs_error < 0.25 * f.value.abs() { f.value.abs() } else { 1e-20 };
    let mut last = f.est_abs_error;
    for _ in 0..8 {
        let target = mp_target(tol, guess);
        let series = match PreparedSeries::new(kind, z, target, tol) {
            Ok(s) => s,
            Err(Error::Accuracy { achieved, requested, .. }) => return Err(Error::Accuracy { operation, achieved, requested }),
            Err(e) => return Err(e),
        };
        let r = series.eval(z);
        if !r.value.is_finite() {
            return Err(Error::Domain(format!("{operation}: result overflows at z = {z}")));
        }
        if tol.accepts(r.value, r.est_abs_error) {
            return Ok(r);
        }
        last = r.est_abs_error;
        guess = if r.est_abs_error < 0.5 * r.value.abs() { 0.5 * r.value.abs() } else { guess * 1e-30 };
    }
    Err(Error::Accuracy { operation, achieved: last, requested: tol.rel * guess })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exp_by_both_tiers() {
        let kind = Kind::Ml { alpha: 1.0, beta: 1.0, deriv: 0 };
        let tol = Tolerance::default();
        let f = sum_f64(kind, 1.0, &tol);
        assert!((f.value - std::f64::consts::E).abs() < 1e-15);
        let s = PreparedSeries::new(kind, 20.0, 1e-25, &tol).unwrap();
        let r = s.eval(-20.0);
        assert!(((r.value - (-20f64).exp()) / (-20f64).exp()).abs() < 1e-15);
        assert!(r.est_abs_error < 1e-23);
    }

    #[test]
    fn kilbas_terminates_at_a_pole() {
        // a_0 + α = 0 for α = 1, n = -2: only c_0 survives
        let kind = Kind::Kilbas { alpha: 1.0, m: 1.0, n: -2.0 };
        let f = sum_f64(kind, 3.0, &Tolerance::default());
        assert_eq!(f.value, 1.0);
    }
}
