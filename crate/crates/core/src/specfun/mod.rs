//! Gamma, Mittag-Leffler and Kilbas generalized Mittag-Leffler functions.

pub mod bigfloat;
pub mod gamma;
mod mittag;
mod series;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use gamma::{gamma_fn, gamma_ratio, gamma_sign, ln_gamma, ln_gamma_ratio, rgamma, GAMMA_MIN_ABSCISSA};
pub use mittag::{
    caputo_ode_solution, gen_mittag_leffler, gen_mittag_leffler_many, gen_mittag_leffler_with, mittag_leffler, mittag_leffler_asymptotic,
    mittag_leffler_deriv, mittag_leffler_deriv_with, mittag_leffler_many, mittag_leffler_series, mittag_leffler_series_many,
    mittag_leffler_with,
};
pub use series::PreparedSeries;

/// Parameters of E_{α,β}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MLParams {
    pub alpha: f64,
    pub beta: f64,
}

impl MLParams {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        let p = MLParams { alpha, beta };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {}", self.alpha)));
        }
        if !self.beta.is_finite() {
            return Err(Error::InvalidParams(format!("beta must be finite, got {}", self.beta)));
        }
        Ok(())
    }
}

/// Parameters of the Kilbas function E_{α,m,n}.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenMLParams {
    pub alpha: f64,
    pub m: f64,
    pub n: f64,
}

impl GenMLParams {
    pub fn new(alpha: f64, m: f64, n: f64) -> Result<Self> {
        let p = GenMLParams { alpha, m, n };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let GenMLParams { alpha, m, n } = *self;
        if !(alpha > 0.0 && alpha.is_finite()) {
            return Err(Error::InvalidParams(format!("alpha must be positive, got {alpha}")));
        }
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::InvalidParams(format!("m must be positive, got {m}")));
        }
        if !n.is_finite() {
            return Err(Error::InvalidParams(format!("n must be finite, got {n}")));
        }
        // α(jm+n) increases with j, so only finitely many j can hit a negative integer
        let mut j = 0u64;
        loop {
            let v = alpha * (j as f64 * m + n);
            if v >= 0.0 {
                break;
            }
            if v == v.floor() {
                return Err(Error::InvalidParams(format!("alpha*(j*m+n) = {v} is a negative integer at j = {j}")));
            }
            j += 1;
        }
        Ok(())
    }
}

/// A function value with an estimate of its absolute error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EvalResult {
    pub value: f64,
    pub est_abs_error: f64,
    pub terms_used: usize,
}

/// Accuracy request for the series evaluators.
///
/// A result is accepted when `est_abs_error ≤ max(abs, rel·|value|)`.
/// `max_bits` caps the multiprecision tier and `max_terms` the series length.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub max_bits: u64,
    pub max_terms: usize,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { rel: 1e-14, abs: 0.0, max_bits: 4096, max_terms: 250_000 }
    }
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Tolerance { rel, ..Default::default() }
    }

    pub fn with_abs(self, abs: f64) -> Self {
        Tolerance { abs, ..self }
    }

    pub fn with_max_bits(self, max_bits: u64) -> Self {
        Tolerance { max_bits, ..self }
    }

    pub fn accepts(&self, value: f64, est_abs_error: f64) -> bool {
        est_abs_error <= self.abs.max(self.rel * value.abs())
    }
}
