//! Numerical Riemann–Liouville and Caputo operators on uniform grids.
//!
//! These are deliberately simple discretizations (product trapezoid for
//! the integral, L1 for the Caputo derivative) used as independent
//! oracles for the closed-form solutions.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::specfun::gamma_fn;

/// Uniform grid t_j = j·Δt, j = 0..=steps, on [0, t_end].
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub t_end: f64,
    pub steps: usize,
}

impl TimeGrid {
    pub fn new(t_end: f64, steps: usize) -> Result<Self> {
        if !(t_end > 0.0 && t_end.is_finite()) || steps == 0 {
            return Err(Error::InvalidParams(format!("bad time grid: t_end = {t_end}, steps = {steps}")));
        }
        Ok(TimeGrid { t_end, steps })
    }

    /// Grid on [0, t_end] with spacing as close as possible to `dt`.
    pub fn with_spacing(t_end: f64, dt: f64) -> Result<Self> {
        Self::new(t_end, (t_end / dt).round().max(1.0) as usize)
    }

    pub fn dt(&self) -> f64 {
        self.t_end / self.steps as f64
    }

    pub fn node(&self, j: usize) -> f64 {
        if j == self.steps {
            self.t_end
        } else {
            j as f64 * self.dt()
        }
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..=self.steps).map(|j| self.node(j)).collect()
    }

    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> Vec<f64> {
        (0..=self.steps).map(|j| f(self.node(j))).collect()
    }
}

fn check_samples(f: &[f64], grid: &TimeGrid, j: usize) -> Result<()> {
    if f.len() != grid.steps + 1 {
        return Err(Error::InvalidParams(format!("{} samples for a grid of {} steps", f.len(), grid.steps)));
    }
    if j == 0 || j > grid.steps {
        return Err(Error::Domain(format!("time index {j} outside 1..={}", grid.steps)));
    }
    Ok(())
}

fn check_order(alpha: f64, upper_inclusive: bool) -> Result<()> {
    let ok = alpha > 0.0 && if upper_inclusive { alpha <= 1.0 } else { alpha < 1.0 };
    if ok {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("fractional order {alpha} out of range")))
    }
}

/// (m+1)^p − m^p without cancellation for large m.
fn forward_diff_pow(m: f64, p: f64) -> f64 {
    if m == 0.0 {
        return 1.0;
    }
    m.powf(p) * (p * (1.0 / m).ln_1p()).exp_m1()
}

/// (m+1)^p − 2m^p + (m−1)^p for m ≥ 1.
fn second_diff_pow(m: f64, p: f64) -> f64 {
    if m < 8.0 {
        return (m + 1.0).powf(p) - 2.0 * m.powf(p) + (m - 1.0).powf(p);
    }
    let r = 1.0 / m;
    m.powf(p) * ((p * r.ln_1p()).exp_m1() + (p * (-r).ln_1p()).exp_m1())
}

/// Product-trapezoid weights for I^α: w_k multiplies f(t_k) in the value at t_j.
fn rl_integral_weights(alpha: f64, j: usize) -> Vec<f64> {
    let p = alpha + 1.0;
    let jf = j as f64;
    let mut w = Vec::with_capacity(j + 1);
    w.push((jf - 1.0).powf(p) - (jf - p) * jf.powf(alpha));
    for k in 1..j {
        w.push(second_diff_pow((j - k) as f64, p));
    }
    w.push(1.0);
    w
}

/// (I^α f)(t_j) = (1/Γ(α)) ∫_0^{t_j} f(s)(t_j − s)^{α−1} ds, with f linearly
/// interpolated between samples and the kernel integrated exactly.
/// Second order for smooth f; α = 1 is the trapezoid rule.
pub fn rl_integral_num(f: &[f64], grid: &TimeGrid, alpha: f64, j: usize) -> Result<f64> {
    check_order(alpha, true)?;
    check_samples(f, grid, j)?;
    let w = rl_integral_weights(alpha, j);
    let s: f64 = w.iter().zip(f).map(|(w, f)| w * f).sum();
    Ok(s * grid.dt().powf(alpha) / gamma_fn(alpha + 2.0)?)
}

/// L1 weights b_m = (m+1)^{1−α} − m^{1−α}, m = 0..steps−1.
#[derive(Clone, Debug)]
pub struct L1Weights {
    alpha: f64,
    scale: f64,
    b: Vec<f64>,
}

impl L1Weights {
    pub fn new(alpha: f64, grid: &TimeGrid) -> Result<Self> {
        check_order(alpha, false)?;
        let b = (0..grid.steps).map(|m| forward_diff_pow(m as f64, 1.0 - alpha)).collect();
        let scale = grid.dt().powf(-alpha) / gamma_fn(2.0 - alpha)?;
        Ok(L1Weights { alpha, scale, b })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    fn apply(&self, f: &[f64], j: usize) -> f64 {
        let mut s = 0.0;
        for k in 0..j {
            s += self.b[j - k - 1] * (f[k + 1] - f[k]);
        }
        self.scale * s
    }
}

/// Caputo derivative at t_j by the L1 scheme, O(Δt^{2−α}) for smooth f.
pub fn caputo_deriv_num(f: &[f64], grid: &TimeGrid, alpha: f64, j: usize) -> Result<f64> {
    check_samples(f, grid, j)?;
    Ok(L1Weights::new(alpha, grid)?.apply(f, j))
}

/// Caputo derivative at every node t_1..t_steps (index 0 of the output is 0).
pub fn caputo_deriv_all(f: &[f64], grid: &TimeGrid, alpha: f64) -> Result<Vec<f64>> {
    check_samples(f, grid, 1)?;
    let w = L1Weights::new(alpha, grid)?;
    let mut out = vec![0.0; grid.steps + 1];
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        *o = w.apply(f, j);
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RlDerivMethod {
    /// Caputo (L1) plus f(0) t^{−α}/Γ(1−α)
    #[default]
    CaputoCorrection,
    /// central difference of the numerical I^{1−α} f
    DifferentiatedIntegral,
}

/// Riemann–Liouville derivative of order α ∈ (0,1) at t_j, j ≥ 1.
pub fn rl_deriv_num(f: &[f64], grid: &TimeGrid, alpha: f64, j: usize) -> Result<f64> {
    rl_deriv_num_with(f, grid, alpha, j, RlDerivMethod::CaputoCorrection)
}

pub fn rl_deriv_num_with(f: &[f64], grid: &TimeGrid, alpha: f64, j: usize, method: RlDerivMethod) -> Result<f64> {
    check_order(alpha, false)?;
    if j == 0 {
        return Err(Error::Singular("rl_deriv_num"));
    }
    check_samples(f, grid, j)?;
    match method {
        RlDerivMethod::CaputoCorrection => {
            let t = grid.node(j);
            Ok(caputo_deriv_num(f, grid, alpha, j)? + f[0] * t.powf(-alpha) / gamma_fn(1.0 - alpha)?)
        }
        RlDerivMethod::DifferentiatedIntegral => {
            let i = |k: usize| -> Result<f64> {
                if k == 0 {
                    Ok(0.0)
                } else {
                    rl_integral_num(f, grid, 1.0 - alpha, k)
                }
            };
            let dt = grid.dt();
            if j < grid.steps {
                Ok((i(j + 1)? - i(j - 1)?) / (2.0 * dt))
            } else {
                Ok((3.0 * i(j)? - 4.0 * i(j - 1)? + i(j - 2)?) / (2.0 * dt))
            }
        }
    }
}

/// RL derivative at every node t_1..t_steps by the Caputo correction.
pub fn rl_deriv_all(f: &[f64], grid: &TimeGrid, alpha: f64) -> Result<Vec<f64>> {
    let mut out = caputo_deriv_all(f, grid, alpha)?;
    let g = gamma_fn(1.0 - alpha)?;
    for (j, o) in out.iter_mut().enumerate().skip(1) {
        *o += f[0] * grid.node(j).powf(-alpha) / g;
    }
    Ok(out)
}

/// (I^α f)(t) for a callable f that may have an integrable algebraic
/// singularity at s = 0, by tanh-sinh quadrature on [0, t].
///
/// Node distances to both endpoints are formed without cancellation, so
/// s^γ (γ > −1) and (t − s)^{α−1} are resolved to near working precision.
pub fn rl_integral_fn<F: Fn(f64) -> f64>(f: F, alpha: f64, t: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha.is_finite()) {
        return Err(Error::InvalidParams(format!("fractional order {alpha} out of range")));
    }
    if !(t > 0.0 && t.is_finite()) {
        return Err(Error::Domain(format!("t = {t} must be positive")));
    }
    const H: f64 = 1.0 / 64.0;
    const U_MAX: f64 = 6.0;
    let n = (U_MAX / H) as i64;
    let mut sum = 0.0;
    for k in -n..=n {
        let u = k as f64 * H;
        let v = std::f64::consts::FRAC_PI_2 * u.sinh();
        // distance from the nearer endpoint
        let d = t / ((2.0 * v.abs()).exp() + 1.0);
        if d == 0.0 {
            continue;
        }
        let (s, r) = if k < 0 { (d, t - d) } else { (t - d, d) };
        let w = H * std::f64::consts::FRAC_PI_2 * u.cosh() / (v.cosh() * v.cosh()) * 0.5 * t;
        let term = w * f(s) * r.powf(alpha - 1.0);
        if term.is_finite() {
            sum += term;
        }
    }
    Ok(sum / gamma_fn(alpha)?)
}

/// Where a PDE residual is sampled: every node of `time` with t ≥ `t_from`,
/// crossed with the points `x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualGrid {
    pub time: TimeGrid,
    pub t_from: f64,
    pub x: Vec<f64>,
}

impl ResidualGrid {
    pub fn new(time: TimeGrid, t_from: f64, x: Vec<f64>) -> Result<Self> {
        if !(t_from > 0.0 && t_from <= time.t_end) {
            return Err(Error::Domain(format!("residual window must start in (0, {}], got {t_from}", time.t_end)));
        }
        if x.is_empty() {
            return Err(Error::InvalidParams("residual grid has no x points".into()));
        }
        Ok(ResidualGrid { time, t_from, x })
    }

    /// Uniform x points on [a, b], endpoints included.
    pub fn uniform(time: TimeGrid, t_from: f64, a: f64, b: f64, nx: usize) -> Result<Self> {
        let x = (0..nx).map(|i| a + (b - a) * i as f64 / (nx.max(2) - 1) as f64).collect();
        Self::new(time, t_from, x)
    }

    pub fn first_index(&self) -> usize {
        ((self.t_from / self.time.dt() - 1e-9).ceil() as usize).max(1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub max_residual: f64,
    pub at_t: f64,
    pub at_x: f64,
    pub dt: f64,
}

impl ResidualReport {
    /// Maximize |synth(res[j], x)| over the window, where `res[j]` holds the
    /// per-mode residuals at node j.
    pub(crate) fn from_modes<S: Fn(&[f64], f64) -> f64>(grid: &ResidualGrid, res: &[Vec<f64>], synth: S) -> Self {
        let mut best = ResidualReport { max_residual: 0.0, at_t: grid.t_from, at_x: grid.x[0], dt: grid.time.dt() };
        for j in grid.first_index()..=grid.time.steps {
            for &x in &grid.x {
                let r = synth(&res[j], x).abs();
                if r > best.max_residual || r.is_nan() {
                    best.max_residual = r;
                    best.at_t = grid.time.node(j);
                    best.at_x = x;
                }
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_reduce_to_trapezoid_at_order_one() {
        let grid = TimeGrid::new(1.0, 10).unwrap();
        let f = grid.sample(|t| t * t);
        let trap: f64 = (0..10).map(|k| 0.5 * (f[k] + f[k + 1]) * 0.1).sum();
        assert!((rl_integral_num(&f, &grid, 1.0, 10).unwrap() - trap).abs() < 1e-15);
    }

    #[test]
    fn caputo_of_constant_is_zero() {
        let grid = TimeGrid::new(1.0, 100).unwrap();
        let f = vec![3.5; 101];
        assert_eq!(caputo_deriv_num(&f, &grid, 0.4, 57).unwrap(), 0.0);
        assert!(matches!(rl_deriv_num(&f, &grid, 0.4, 0), Err(Error::Singular(_))));
    }

    #[test]
    fn singular_integrand_quadrature() {
        // I^{1-a} s^{a-1} = Γ(a)
        for a in [0.05, 0.35, 0.9] {
            let v = rl_integral_fn(|s| s.powf(a - 1.0), 1.0 - a, 0.7).unwrap();
            let g = gamma_fn(a).unwrap();
            assert!(((v - g) / g).abs() < 1e-13, "a={a}: {v} vs {g}");
        }
    }
}
