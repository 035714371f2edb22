//! Legendre polynomials, Gauss–Legendre quadrature and Fourier–Legendre
//! analysis/synthesis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const NEWTON_TOL: f64 = 1e-15;
const NEWTON_MAX_ITER: usize = 100;

fn check_x(x: f64) -> Result<()> {
    if x.abs() <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("Legendre argument {x} outside [-1, 1]")))
    }
}

/// (P_n(x), P_{n-1}(x)) by the three-term recurrence; P_{-1} is taken as 0.
fn p_pair(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut prev, mut cur) = (1.0, x);
    for k in 1..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0) * x * cur - kf * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// P_n(x).
pub fn legendre_p(n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(p_pair(n, x).0)
}

/// (P_n(x), P_n'(x)) using P_k' = x P_{k-1}' + k P_{k-1}, finite at x = ±1.
fn p_and_deriv(n: usize, x: f64) -> (f64, f64) {
    let (mut p_prev, mut p) = (0.0, 1.0);
    let mut dp = 0.0;
    for k in 1..=n {
        let kf = k as f64;
        dp = x * dp + kf * p;
        let next = if k == 1 { x } else { ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf };
        p_prev = p;
        p = next;
    }
    (p, dp)
}

/// P_n'(x).
pub fn legendre_p_deriv(n: usize, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(p_and_deriv(n, x).1)
}

/// P_0(x), ..., P_nmax(x).
pub fn legendre_all(nmax: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(nmax + 1);
    out.push(1.0);
    if nmax >= 1 {
        out.push(x);
    }
    for k in 1..nmax {
        let kf = k as f64;
        out.push(((2.0 * kf + 1.0) * x * out[k] - kf * out[k - 1]) / (kf + 1.0));
    }
    out
}

/// Gauss–Legendre rule on [−1, 1].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

impl QuadRule {
    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }

    /// ∫_a^b f by the affine image of the rule.
    pub fn integrate_on<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let (h, c) = (0.5 * (b - a), 0.5 * (a + b));
        h * self.integrate(|x| f(h * x + c))
    }
}

/// Nodes are the roots of P_order found by Newton iteration from
/// Chebyshev-type initial guesses; w_i = 2 / ((1 − x_i²) P'(x_i)²).
pub fn gauss_legendre_rule(order: usize) -> Result<QuadRule> {
    if order == 0 {
        return Err(Error::InvalidParams("quadrature order must be at least 1".into()));
    }
    let n = order;
    let nf = n as f64;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut converged = false;
        for _ in 0..NEWTON_MAX_ITER {
            let (p, p_prev) = p_pair(n, x);
            let dp = nf * (x * p - p_prev) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= NEWTON_TOL {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::Accuracy { operation: "gauss_legendre_rule", achieved: f64::NAN, requested: NEWTON_TOL });
        }
        if 2 * i + 1 == n {
            x = 0.0;
        }
        let (p, p_prev) = p_pair(n, x);
        let dp = nf * (x * p - p_prev) / (x * x - 1.0);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // ascending order, mirrored pairs exactly symmetric
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    Ok(QuadRule { nodes, weights, order })
}

/// Quadrature order used to analyze a truncation N.
pub fn default_quad_order(n: usize) -> usize {
    (2 * n + 16).max(64)
}

/// Fourier–Legendre coefficients c_0..c_N.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FLCoeffs {
    pub coeffs: Vec<f64>,
}

impl FLCoeffs {
    pub fn truncation(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }
}

/// c_n = (2n+1)/2 ∫ f P_n for n = 0..=N.
pub fn fl_analyze<F: Fn(f64) -> f64>(f: F, n: usize, rule: &QuadRule) -> FLCoeffs {
    let mut coeffs = vec![0.0; n + 1];
    for (&x, &w) in rule.nodes.iter().zip(&rule.weights) {
        let fx = w * f(x);
        for (c, p) in coeffs.iter_mut().zip(legendre_all(n, x)) {
            *c += fx * p;
        }
    }
    for (k, c) in coeffs.iter_mut().enumerate() {
        *c *= (2 * k + 1) as f64 / 2.0;
    }
    FLCoeffs { coeffs }
}

/// Σ c_n P_n(x) by Clenshaw's backward recurrence.
pub fn fl_synthesize(c: &FLCoeffs, x: f64) -> Result<f64> {
    check_x(x)?;
    Ok(clenshaw(&c.coeffs, x))
}

pub(crate) fn clenshaw(c: &[f64], x: f64) -> f64 {
    // P_{k+1} = a_k P_k + b_k P_{k-1}, a_k = (2k+1)x/(k+1), b_k = -k/(k+1)
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for k in (0..c.len()).rev() {
        let kf = k as f64;
        let a = (2.0 * kf + 1.0) * x / (kf + 1.0);
        let b_next = -(kf + 1.0) / (kf + 2.0);
        let b0 = c[k] + a * b1 + b_next * b2;
        b2 = b1;
        b1 = b0;
    }
    b1
}

/// Σ c_n P_n'(x).
pub fn fl_synthesize_deriv(c: &FLCoeffs, x: f64) -> Result<f64> {
    check_x(x)?;
    let (mut p_prev, mut p, mut dp) = (0.0, 1.0, 0.0);
    let mut sum = 0.0;
    for (k, &ck) in c.coeffs.iter().enumerate().skip(1) {
        let kf = k as f64;
        dp = x * dp + kf * p;
        let next = if k == 1 { x } else { ((2.0 * kf - 1.0) * x * p - (kf - 1.0) * p_prev) / kf };
        p_prev = p;
        p = next;
        sum += ck * dp;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_order_values() {
        assert_eq!(legendre_p(0, 0.3).unwrap(), 1.0);
        assert_eq!(legendre_p(1, 0.3).unwrap(), 0.3);
        assert!((legendre_p(2, 0.5).unwrap() + 0.125).abs() < 1e-16);
        assert_eq!(legendre_p_deriv(1, -0.7).unwrap(), 1.0);
        assert!((legendre_p_deriv(2, 0.5).unwrap() - 1.5).abs() < 1e-15);
        assert!(legendre_p(3, 1.5).is_err());
    }

    #[test]
    fn endpoint_values() {
        for n in 0..=50 {
            assert!((legendre_p(n, 1.0).unwrap() - 1.0).abs() < 1e-14);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((legendre_p(n, -1.0).unwrap() - sign).abs() < 1e-14);
            // P_n'(1) = n(n+1)/2
            let d = legendre_p_deriv(n, 1.0).unwrap();
            assert!((d - (n * (n + 1)) as f64 / 2.0).abs() < 1e-10 * d.max(1.0));
        }
    }

    #[test]
    fn small_rules() {
        let r1 = gauss_legendre_rule(1).unwrap();
        assert_eq!((r1.nodes[0], r1.weights[0]), (0.0, 2.0));
        let r2 = gauss_legendre_rule(2).unwrap();
        let s = 1.0 / 3f64.sqrt();
        assert!((r2.nodes[1] - s).abs() < 1e-15 && (r2.nodes[0] + s).abs() < 1e-15);
        assert!((r2.weights[0] - 1.0).abs() < 1e-15 && (r2.weights[1] - 1.0).abs() < 1e-15);
        let r4 = gauss_legendre_rule(4).unwrap();
        assert!((r4.integrate(|x| x.powi(6)) - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn clenshaw_matches_direct_sum() {
        let c = FLCoeffs { coeffs: vec![0.3, -1.2, 0.5, 0.0, 2.0, -0.25] };
        for &x in &[-1.0, -0.4, 0.0, 0.77, 1.0] {
            let direct: f64 = c.coeffs.iter().enumerate().map(|(n, &cn)| cn * legendre_p(n, x).unwrap()).sum();
            assert!((fl_synthesize(&c, x).unwrap() - direct).abs() < 1e-14);
        }
    }
}
