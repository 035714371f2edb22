//! Double-precision gamma, log-gamma and gamma ratios.
//!
//! Stirling series for x ≥ 10, upward recurrence below that and
//! reflection for arguments below one half.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// The positive minimum of Γ on (0, ∞).
pub const GAMMA_MIN_ABSCISSA: f64 = 1.461_632_144_968_362_3;

const STIRLING_MIN: f64 = 10.0;
const SQRT_2PI: f64 = 2.506_628_274_631_000_5;
const HALF_LN_2PI: f64 = 0.918_938_533_204_672_8;

/// B_2j / (2j(2j-1)), j = 1..8
const STIRLING: [f64; 8] =
    [1.0 / 12.0, -1.0 / 360.0, 1.0 / 1260.0, -1.0 / 1680.0, 1.0 / 1188.0, -691.0 / 360_360.0, 1.0 / 156.0, -3617.0 / 122_400.0];

/// ln Γ(x) − [(x−½) ln x − x + ½ ln 2π], accurate to double precision for x ≥ 10.
fn stirling_correction(x: f64) -> f64 {
    let y = 1.0 / (x * x);
    STIRLING.iter().rev().fold(0.0, |acc, &c| acc * y + c) / x
}

/// True when `x` is 0, -1, -2, ...
pub fn is_nonpositive_integer(x: f64) -> bool {
    x <= 0.0 && x == x.floor()
}

/// sin(πx) with exact argument reduction.
pub fn sin_pi(x: f64) -> f64 {
    if x.is_infinite() || x.is_nan() {
        return f64::NAN;
    }
    // x - 2*round(x/2) is exact in binary floating point
    let r = x - 2.0 * (0.5 * x).round();
    let r = if r > 0.5 {
        1.0 - r
    } else if r < -0.5 {
        -1.0 - r
    } else {
        r
    };
    if r == 0.0 {
        return 0.0;
    }
    (PI * r).sin()
}

/// Γ(x). Poles at the nonpositive integers are reported as errors.
pub fn gamma_fn(x: f64) -> Result<f64> {
    if x.is_nan() {
        return Err(Error::Domain("gamma of NaN".into()));
    }
    if is_nonpositive_integer(x) {
        return Err(Error::Pole(x));
    }
    Ok(gamma_unchecked(x))
}

/// Γ(x) without the pole check (returns ±inf or NaN at poles).
pub(crate) fn gamma_unchecked(x: f64) -> f64 {
    if x == x.floor() && (1.0..=171.0).contains(&x) {
        let n = x as u32;
        return (2..n).fold(1.0, |acc, k| acc * k as f64);
    }
    if x < 0.5 {
        let s = sin_pi(x);
        if s == 0.0 {
            return f64::NAN;
        }
        return PI / (s * gamma_unchecked(1.0 - x));
    }
    if x > 171.7 {
        return f64::INFINITY;
    }
    if x >= STIRLING_MIN {
        // split x^(x-1/2) to keep it finite up to x ≈ 171.6
        let p = x.powf((x - 0.5) * 0.5);
        return SQRT_2PI * p * (p * (-x).exp()) * stirling_correction(x).exp();
    }
    // Γ(x) = Γ(x+n) / (x(x+1)...(x+n-1))
    let mut prod = 1.0;
    let mut y = x;
    while y < STIRLING_MIN {
        prod *= y;
        y += 1.0;
    }
    gamma_unchecked(y) / prod
}

/// 1/Γ(x), entire: zero at the nonpositive integers.
pub fn rgamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return 0.0;
    }
    if x > 171.0 {
        return (-ln_gamma(x)).exp();
    }
    if x < -170.0 {
        // reflection in log form: 1/Γ(x) = sin(πx) Γ(1-x) / π
        let s = sin_pi(x);
        return s.signum() * (ln_gamma(1.0 - x) + s.abs().ln() - PI.ln()).exp();
    }
    1.0 / gamma_unchecked(x)
}

/// ln|Γ(x)|.
pub fn ln_gamma(x: f64) -> f64 {
    if is_nonpositive_integer(x) {
        return f64::INFINITY;
    }
    if x < 0.5 {
        return PI.ln() - sin_pi(x).abs().ln() - ln_gamma(1.0 - x);
    }
    if x < STIRLING_MIN {
        return gamma_unchecked(x).ln();
    }
    (x - 0.5) * x.ln() - x + HALF_LN_2PI + stirling_correction(x)
}

/// Sign of Γ(x) (0 at poles).
pub fn gamma_sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if is_nonpositive_integer(x) {
        0.0
    } else if (x.floor() as i64) % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// ln Γ(a+δ) − ln Γ(a) for a > 0, a + δ > 0, without the cancellation of
/// subtracting two large log-gammas.
pub fn ln_gamma_ratio(a: f64, delta: f64) -> f64 {
    let b = a + delta;
    if a < STIRLING_MIN || b < STIRLING_MIN {
        if a < 150.0 && b < 150.0 {
            return (gamma_unchecked(b) / gamma_unchecked(a)).abs().ln();
        }
        return ln_gamma(b) - ln_gamma(a);
    }
    (a - 0.5) * (delta / a).ln_1p() + delta * (b.ln() - 1.0) + (stirling_correction(b) - stirling_correction(a))
}

/// Γ(a)/Γ(a+δ), defined wherever a is not a pole; zero when a+δ is a pole.
pub fn gamma_ratio(a: f64, delta: f64) -> f64 {
    let b = a + delta;
    if is_nonpositive_integer(b) {
        return 0.0;
    }
    if a > 0.0 && b > 0.0 {
        return (-ln_gamma_ratio(a, delta)).exp();
    }
    gamma_sign(a) * gamma_sign(b) * (ln_gamma(a) - ln_gamma(b)).exp()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn small_known_values() {
        assert_eq!(gamma_fn(1.0).unwrap(), 1.0);
        assert_eq!(gamma_fn(5.0).unwrap(), 24.0);
        assert!(rel(gamma_fn(0.5).unwrap(), PI.sqrt()) < 1e-15);
    }

    #[test]
    fn poles_are_errors() {
        for x in [0.0, -1.0, -2.0, -37.0] {
            assert!(matches!(gamma_fn(x), Err(Error::Pole(_))));
            assert_eq!(rgamma(x), 0.0);
        }
    }

    #[test]
    fn sin_pi_is_exact_at_integers() {
        for k in -50..50 {
            assert_eq!(sin_pi(k as f64), 0.0);
        }
        assert!((sin_pi(0.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(-1.5) - 1.0).abs() < 1e-16);
        assert!((sin_pi(1e6 + 0.25) - (PI / 4.0).sin()).abs() < 1e-15);
    }

    #[test]
    fn ratio_matches_direct_quotient() {
        for &(a, d) in &[(25.3, 0.7), (60.0, 0.3), (140.5, 1.1), (3.2, 0.45)] {
            let direct = gamma_unchecked(a) / gamma_unchecked(a + d);
            assert!(rel(gamma_ratio(a, d), direct) < 1e-13, "a={a} d={d}");
        }
    }

    #[test]
    fn gamma_sign_alternates() {
        assert_eq!(gamma_sign(-0.5), -1.0);
        assert_eq!(gamma_sign(-1.5), 1.0);
        assert_eq!(gamma_sign(-2.5), -1.0);
        assert!(gamma_unchecked(-0.5) < 0.0 && gamma_unchecked(-1.5) > 0.0);
    }
}
