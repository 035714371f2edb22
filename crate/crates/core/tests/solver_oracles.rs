//! Solution values computed independently with 40 to 1000 digit arithmetic
//! from the one- and two-mode closed forms.

#![allow(clippy::excessive_precision)]

use fracinv::inverse1::{solve_problem1, Problem1Spec};
use fracinv::inverse2::{solve_problem2, Problem2Spec};

fn w(x: f64) -> f64 {
    1.0 + (3.0 * x * x - 1.0)
}

// α, U(0.5, 0.5), h(0.5) with v = 0, w = 1 + (3x² − 1), T = 1
const P1: &[(f64, f64, f64)] = &[
    (0.3, 0.56897447175573110855, -0.80024748418339084647),
    (0.5, 0.46724266931037534363, -0.76716952217141537048),
    (0.6, 0.42114476643691218436, -0.73486378222068038217),
    (0.7, 0.37782224802778473291, -0.69266166801883637349),
    (0.9, 0.29832057557284319337, -0.57793183855685874112),
];

// α, ū(0.5, 0.5), h_1 with φ̄ = 0, ψ̄ = sin πx, β = 0.5, T = 1
const P2: &[(f64, f64, f64)] = &[
    (0.3, 1.3527859982633734598, 10.395128396666516637),
    (0.5, 1.3588842558364588303, 10.076185519994763752),
    (0.7, 1.3820306595374882004, 9.7520548055678122071),
    (0.9, 1.4343563376805930834, 9.4213307741546523086),
];

// ū(t, 0.5) at t = 0.1, …, 1 for α = β = 0.5
const FIG3: [f64; 10] = [
    1.9613048089534368,
    1.8248817506072356,
    1.6383223297958157,
    1.4829158779287423,
    1.3588842558364588,
    1.2589593414523365,
    1.1769641585139679,
    1.1084303291820253,
    1.0501956100181388,
    1.0,
];

#[test]
fn space_degenerate_values() {
    for &(a, u, h) in P1 {
        let sol = solve_problem1(&Problem1Spec::new(a, 1.0, 16).unwrap(), |_| 0.0, w).unwrap();
        assert!((sol.eval_u(0.5, 0.5).unwrap() - u).abs() < 1e-13, "α = {a}");
        assert!((sol.eval_h(0.5).unwrap() - h).abs() < 1e-13, "α = {a}");
    }
}

#[test]
fn time_degenerate_values() {
    let psi = |x: f64| (std::f64::consts::PI * x).sin();
    for &(a, u, h1) in P2 {
        let sol = solve_problem2(&Problem2Spec::new(a, 0.5, 1.0, Some(1)).unwrap(), |_| 0.0, psi).unwrap();
        assert!((sol.eval_u2(0.5, 0.5).unwrap() - u).abs() < 1e-12, "α = {a}");
        assert!((sol.h[0] - h1).abs() < 1e-11 * h1, "α = {a}");
    }
    let sol = solve_problem2(&Problem2Spec::new(0.5, 0.5, 1.0, None).unwrap(), |_| 0.0, psi).unwrap();
    for (i, &u) in FIG3.iter().enumerate() {
        let t = (i + 1) as f64 / 10.0;
        assert!((sol.eval_u2(t, 0.5).unwrap() - u).abs() < 1e-13, "t = {t}");
    }
}
