//! Inverse source problem for the time-degenerate equation
//! D^α_RL ū = t^β ū_xx + h̄(x) on (0, 1) with zero boundary values, initial
//! trace I^{1−α}ū(0+, ·) = φ̄ and final observation ū(T, ·) = ψ̄.
//!
//! Mode k of the sine series solves D^α u − λ t^β u = h with λ = −(kπ)²,
//! whose solution is written with the Kilbas functions
//! E_{α,1+β/α,1+β/α} and E_{α,1+β/α,1+(β−1)/α} of −(kπ)² t^{α+β}.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::GridFunction;
use crate::fracops::{rl_deriv_all, rl_integral_fn, ResidualGrid, ResidualReport};
use crate::legendre::gauss_legendre_rule;
use crate::specfun::{gamma_fn, gen_mittag_leffler_many, gen_mittag_leffler_with, EvalResult, GenMLParams, Tolerance};

/// Number of sine coefficients inspected when the mode count is automatic.
pub const AUTO_MODE_SCAN: usize = 64;
const SNAP: f64 = 64.0 * f64::EPSILON;
const COMPAT_TOL: f64 = 1e-12;

/// Scaling of the φ̄ term t^{α−1} E_{α,1+β/α,1+(β−1)/α}(−(kπ)² t^{α+β}).
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiScaling {
    /// multiplied by 1/Γ(α), so that I^{1−α}ū → φ̄ as t → 0
    #[default]
    MatchTrace,
    /// no 1/Γ(α); the initial trace is then Γ(α)φ̄
    Unit,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Problem2Spec {
    pub alpha: f64,
    pub beta: f64,
    pub t_final: f64,
    /// None picks the largest mode count the precision budget allows
    pub modes: Option<usize>,
    #[serde(default)]
    pub scaling: PhiScaling,
}

impl Problem2Spec {
    pub fn new(alpha: f64, beta: f64, t_final: f64, modes: Option<usize>) -> Result<Self> {
        let s = Problem2Spec { alpha, beta, t_final, modes, scaling: PhiScaling::default() };
        s.validate()?;
        Ok(s)
    }

    pub fn with_scaling(self, scaling: PhiScaling) -> Self {
        Problem2Spec { scaling, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::InvalidParams(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if !(self.beta >= 0.0 && self.beta.is_finite()) {
            return Err(Error::InvalidParams(format!("beta must be nonnegative, got {}", self.beta)));
        }
        // the solution formula needs β > −{α}
        if !(self.beta > -self.alpha.fract()) {
            return Err(Error::InvalidParams("beta must exceed minus the fractional part of alpha".into()));
        }
        if !(self.t_final > 0.0 && self.t_final.is_finite()) {
            return Err(Error::InvalidParams(format!("T must be positive, got {}", self.t_final)));
        }
        if self.modes == Some(0) {
            return Err(Error::InvalidParams("at least one sine mode is required".into()));
        }
        Ok(())
    }

    /// Kilbas parameters of the h̄ term (m, m) and the φ̄ term (m, 1 + (β−1)/α).
    pub fn kilbas_params(&self) -> Result<(GenMLParams, GenMLParams)> {
        let m = 1.0 + self.beta / self.alpha;
        Ok((GenMLParams::new(self.alpha, m, m)?, GenMLParams::new(self.alpha, m, 1.0 + (self.beta - 1.0) / self.alpha)?))
    }
}

/// 2∫_0^1 f(x) sin(kπx) dx for k = 1..=K (entry k−1), by Gauss–Legendre
/// of order max(4K, 64) mapped to [0, 1].
pub fn sine_analyze<F: Fn(f64) -> f64>(f: F, k: usize) -> Result<Vec<f64>> {
    if k == 0 {
        return Err(Error::InvalidParams("need at least one sine mode".into()));
    }
    let rule = gauss_legendre_rule((4 * k).max(64))?;
    let mut c = vec![0.0; k];
    for (&xr, &w) in rule.nodes.iter().zip(&rule.weights) {
        let x = 0.5 * (xr + 1.0);
        let fx = w * f(x);
        for (i, ci) in c.iter_mut().enumerate() {
            *ci += fx * ((i + 1) as f64 * PI * x).sin();
        }
    }
    Ok(c)
}

/// Σ c_{k} sin(kπx), entry k−1 of `c` multiplying sin(kπx).
pub fn sine_synthesize(c: &[f64], x: f64) -> f64 {
    c.iter().enumerate().map(|(i, &ci)| if ci == 0.0 { 0.0 } else { ci * ((i + 1) as f64 * PI * x).sin() }).sum()
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Problem2Solution {
    pub alpha: f64,
    pub beta: f64,
    pub t_final: f64,
    pub scaling: PhiScaling,
    /// sine coefficients of φ̄, ψ̄ and h̄; entry k−1 is mode k
    pub phi: Vec<f64>,
    pub psi: Vec<f64>,
    pub h: Vec<f64>,
    pub warnings: Vec<String>,
    /// largest relative error estimate among the Kilbas values used in solve
    pub max_est_error: f64,
}

fn snap(c: &mut [f64], scale: f64) {
    for x in c.iter_mut() {
        if x.abs() <= SNAP * scale {
            *x = 0.0;
        }
    }
}

fn check_compat<F: Fn(f64) -> f64>(name: &str, f: &F) -> Result<()> {
    for x in [0.0, 1.0] {
        let v = f(x);
        if !(v.abs() <= COMPAT_TOL) {
            return Err(Error::InvalidParams(format!("{name}({x}) = {v}, but the data must vanish at x = 0 and x = 1")));
        }
    }
    Ok(())
}

/// Sine coefficients of φ̄ and ψ̄, then h̄_k mode by mode:
/// h_k = Γ(α+1)/(T^α E_1(z_T)) · [ψ_k − c φ_k T^{α−1} E_2(z_T)], z_T = −(kπ)²T^{α+β},
/// with c = 1/Γ(α) under `PhiScaling::MatchTrace` and c = 1 otherwise.
pub fn solve_problem2<P, S>(spec: &Problem2Spec, phi: P, psi: S) -> Result<Problem2Solution>
where
    P: Fn(f64) -> f64,
    S: Fn(f64) -> f64,
{
    spec.validate()?;
    check_compat("phi", &phi)?;
    check_compat("psi", &psi)?;
    let scan = spec.modes.unwrap_or(AUTO_MODE_SCAN);
    let mut phic = sine_analyze(phi, scan)?;
    let mut psic = sine_analyze(psi, scan)?;
    if phic.iter().chain(&psic).any(|c| !c.is_finite()) {
        return Err(Error::Domain("data is not finite at a quadrature node".into()));
    }
    let scale = phic.iter().chain(&psic).fold(0.0f64, |m, c| m.max(c.abs()));
    snap(&mut phic, scale);
    snap(&mut psic, scale);

    let (p1, p2) = spec.kilbas_params()?;
    let (a, b, t) = (spec.alpha, spec.beta, spec.t_final);
    let g1 = gamma_fn(a + 1.0)?;
    let c = phi_factor(spec.scaling, a)?;
    let tol = Tolerance::default();
    let mut h = Vec::with_capacity(scan);
    let mut warnings = Vec::new();
    let mut max_est_error: f64 = 0.0;
    for k in 1..=scan {
        let (fk, sk) = (phic[k - 1], psic[k - 1]);
        if fk == 0.0 && sk == 0.0 {
            h.push(0.0);
            continue;
        }
        let z = -(k as f64 * PI).powi(2) * t.powf(a + b);
        let e1 = gen_mittag_leffler_with(p1, z, &tol);
        let e2 = if fk != 0.0 { gen_mittag_leffler_with(p2, z, &tol).map(Some) } else { Ok(None) };
        let (e1, e2) = match (e1, e2) {
            (Ok(e1), Ok(e2)) => (e1, e2),
            (Err(e), _) | (_, Err(e)) => {
                if spec.modes.is_some() || !matches!(e, Error::Accuracy { .. }) {
                    return Err(e);
                }
                let dropped = phic[k - 1..].iter().chain(&psic[k - 1..]).fold(0.0f64, |m, c| m.max(c.abs()));
                warnings.push(format!(
                    "mode cap: modes from k = {k} on exceed the precision budget and were dropped (largest dropped data coefficient {dropped:.3e})"
                ));
                break;
            }
        };
        if !(e1.value != 0.0 && e1.value.is_finite()) {
            return Err(Error::Denominator { operation: "solve_problem2", value: e1.value });
        }
        max_est_error = max_est_error.max(rel_err(&e1));
        let mut rhs = sk;
        if let Some(e2) = e2 {
            max_est_error = max_est_error.max(rel_err(&e2));
            rhs -= c * fk * t.powf(a - 1.0) * e2.value;
        }
        h.push(g1 / (t.powf(a) * e1.value) * rhs);
    }
    // trailing modes with no data carry nothing
    let last = h.iter().enumerate().filter(|(i, &hk)| hk != 0.0 || phic[*i] != 0.0).map(|(i, _)| i + 1).max().unwrap_or(0);
    let keep = if spec.modes.is_some() { scan } else { last.min(h.len()) };
    h.truncate(keep);
    phic.truncate(keep);
    psic.truncate(keep);
    Ok(Problem2Solution { alpha: a, beta: b, t_final: t, scaling: spec.scaling, phi: phic, psi: psic, h, warnings, max_est_error })
}

fn rel_err(r: &EvalResult) -> f64 {
    if r.value == 0.0 {
        r.est_abs_error
    } else {
        r.est_abs_error / r.value.abs()
    }
}

fn phi_factor(s: PhiScaling, alpha: f64) -> Result<f64> {
    Ok(match s {
        PhiScaling::MatchTrace => 1.0 / gamma_fn(alpha)?,
        PhiScaling::Unit => 1.0,
    })
}

impl Problem2Solution {
    /// Number of sine modes carried.
    pub fn modes(&self) -> usize {
        self.h.len()
    }

    fn spec(&self) -> Problem2Spec {
        Problem2Spec { alpha: self.alpha, beta: self.beta, t_final: self.t_final, modes: Some(self.modes().max(1)), scaling: self.scaling }
    }

    fn has_phi(&self) -> bool {
        self.phi.iter().any(|&c| c != 0.0)
    }

    fn check_t(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t <= self.t_final) {
            return Err(Error::Domain(format!("t = {t} outside (0, {}]", self.t_final)));
        }
        if t == 0.0 && self.has_phi() {
            return Err(Error::Singular("eval_u2 at t = 0 with nonzero initial trace"));
        }
        Ok(())
    }

    /// u_k(t) for every mode at each of `ts`, with summed absolute error estimates.
    pub fn mode_amplitudes_many(&self, ts: &[f64]) -> Result<Vec<(Vec<f64>, f64)>> {
        for &t in ts {
            self.check_t(t)?;
        }
        let (p1, p2) = self.spec().kilbas_params()?;
        let a = self.alpha;
        let tol = Tolerance::default();
        let c = phi_factor(self.scaling, a)?;
        let g1 = gamma_fn(a + 1.0)?;
        let mut out: Vec<(Vec<f64>, f64)> = ts.iter().map(|_| (vec![0.0; self.modes()], 0.0)).collect();
        for k in 1..=self.modes() {
            let (fk, hk) = (self.phi[k - 1], self.h[k - 1]);
            if fk == 0.0 && hk == 0.0 {
                continue;
            }
            let lam = (k as f64 * PI).powi(2);
            let zs: Vec<f64> = ts.iter().map(|&t| -lam * t.powf(a + self.beta)).collect();
            if hk != 0.0 {
                let e1 = gen_mittag_leffler_many(p1, &zs, &tol)?;
                for ((o, &t), e) in out.iter_mut().zip(ts).zip(e1) {
                    let s = hk / g1 * t.powf(a);
                    o.0[k - 1] += s * e.value;
                    o.1 += s.abs() * e.est_abs_error;
                }
            }
            if fk != 0.0 {
                let e2 = gen_mittag_leffler_many(p2, &zs, &tol)?;
                for ((o, &t), e) in out.iter_mut().zip(ts).zip(e2) {
                    let s = c * fk * t.powf(a - 1.0);
                    o.0[k - 1] += s * e.value;
                    o.1 += s.abs() * e.est_abs_error;
                }
            }
        }
        Ok(out)
    }

    pub fn mode_amplitudes(&self, t: f64) -> Result<Vec<f64>> {
        Ok(self.mode_amplitudes_many(&[t])?.pop().map(|m| m.0).unwrap_or_default())
    }

    pub fn eval_u2(&self, t: f64, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(sine_synthesize(&self.mode_amplitudes(t)?, x))
    }

    pub fn eval_h2(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        Ok(sine_synthesize(&self.h, x))
    }

    pub fn h_profile(&self, x: &[f64]) -> Result<Vec<f64>> {
        x.iter().map(|&xi| self.eval_h2(xi)).collect()
    }

    /// ū on a tensor grid; returns the field and the largest row error estimate.
    pub fn u_grid(&self, t: &[f64], x: &[f64]) -> Result<(GridFunction, f64)> {
        for &xi in x {
            check_x(xi)?;
        }
        let rows: Vec<(Vec<f64>, f64)> = self
            .mode_amplitudes_many(t)?
            .into_par_iter()
            .map(|(m, e)| (x.iter().map(|&xi| sine_synthesize(&m, xi)).collect(), e))
            .collect();
        let err = rows.iter().fold(0.0f64, |a, r| a.max(r.1));
        let values = rows.into_iter().flat_map(|r| r.0).collect();
        Ok((GridFunction::new(t.to_vec(), x.to_vec(), values)?, err))
    }

    /// I^{1−α}ū(t, x) by quadrature on the solution itself; tends to φ̄(x)
    /// as t → 0 when the scaling is `MatchTrace`.
    pub fn initial_trace(&self, t: f64, x: f64) -> Result<f64> {
        check_x(x)?;
        if !(t > 0.0 && t <= self.t_final) {
            return Err(Error::Domain(format!("t = {t} outside (0, {}]", self.t_final)));
        }
        let cell = std::cell::RefCell::new(None);
        let v = rl_integral_fn(
            |s| match self.eval_u2(s, x) {
                Ok(v) => v,
                Err(e) => {
                    cell.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            1.0 - self.alpha,
            t,
        )?;
        match cell.into_inner() {
            Some(e) => Err(e),
            None => Ok(v),
        }
    }
}

fn check_x(x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain(format!("x = {x} outside [0, 1]")))
    }
}

/// max |D^α_RL ū − t^β ū_xx − h̄| over the residual grid, with the RL
/// derivative from the L1-based oracle on sampled mode amplitudes and
/// ū_xx = −Σ (kπ)² u_k sin kπx. Needs φ̄ = 0, since otherwise ū is unbounded at t = 0.
pub fn residual_problem2(sol: &Problem2Solution, grid: &ResidualGrid) -> Result<ResidualReport> {
    if sol.has_phi() {
        return Err(Error::Singular("residual_problem2 needs zero initial trace"));
    }
    let time = grid.time;
    if (time.t_end - sol.t_final).abs() > 1e-12 * sol.t_final {
        return Err(Error::InvalidParams("residual grid must end at T".into()));
    }
    let nodes = time.nodes();
    let amps = sol.mode_amplitudes_many(&nodes)?;
    let kmax = sol.modes();
    let mut res = vec![vec![0.0; kmax]; time.steps + 1];
    for k in 1..=kmax {
        if sol.h[k - 1] == 0.0 {
            continue;
        }
        let lam = (k as f64 * PI).powi(2);
        let samples: Vec<f64> = amps.iter().map(|a| a.0[k - 1]).collect();
        let d = rl_deriv_all(&samples, &time, sol.alpha)?;
        for j in grid.first_index()..=time.steps {
            let t = nodes[j];
            res[j][k - 1] = d[j] + lam * t.powf(sol.beta) * samples[j] - sol.h[k - 1];
        }
    }
    Ok(ResidualReport::from_modes(grid, &res, sine_synthesize))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sine_coefficients_of_a_parabola() {
        let c = sine_analyze(|x| x * (1.0 - x), 7).unwrap();
        for (i, &ck) in c.iter().enumerate() {
            let k = (i + 1) as f64;
            let want = if (i + 1) % 2 == 1 { 8.0 / (k * PI).powi(3) } else { 0.0 };
            assert!((ck - want).abs() < 1e-15, "k={k}");
        }
    }

    #[test]
    fn final_observation_is_reproduced() {
        let spec = Problem2Spec::new(0.5, 0.5, 1.0, None).unwrap();
        let psi = |x: f64| (PI * x).sin() - 0.3 * (2.0 * PI * x).sin();
        let sol = solve_problem2(&spec, |_| 0.0, psi).unwrap();
        assert_eq!(sol.modes(), 2);
        for x in [0.1, 0.5, 0.77] {
            assert!((sol.eval_u2(1.0, x).unwrap() - psi(x)).abs() < 1e-12);
        }
    }

    #[test]
    fn compatibility_is_enforced() {
        let spec = Problem2Spec::new(0.5, 0.5, 1.0, None).unwrap();
        assert!(solve_problem2(&spec, |_| 0.0, |x| x).is_err());
    }
}
