use fracinv::legendre::*;
use fracinv::verify::{run_suite, Suite};

#[test]
fn legendre_suite_passes() {
    let results = run_suite(Suite::Legendre, 42);
    let failed: Vec<_> = results.iter().filter(|r| !r.passed).collect();
    assert!(failed.is_empty(), "{failed:#?}");
    for name in ["derivative_recurrence_a", "invariant_g", "bound_h", "orthogonality_j", "monomial_expansion_l"] {
        assert!(results.iter().any(|r| r.name == name), "missing {name}");
    }
}

#[test]
fn classical_values() {
    // P_5(0.3) = (63x⁵ − 70x³ + 15x)/8
    let x: f64 = 0.3;
    let p5 = (63.0 * x.powi(5) - 70.0 * x.powi(3) + 15.0 * x) / 8.0;
    assert!((legendre_p(5, x).unwrap() - p5).abs() < 1e-15);
    // three-point rule: nodes ±√(3/5), 0; weights 5/9, 8/9
    let r = gauss_legendre_rule(3).unwrap();
    let s = (0.6f64).sqrt();
    let mut nodes = r.nodes.clone();
    nodes.sort_by(f64::total_cmp);
    assert!((nodes[0] + s).abs() < 1e-15 && nodes[1].abs() < 1e-15 && (nodes[2] - s).abs() < 1e-15);
    let mut w = r.weights.clone();
    w.sort_by(f64::total_cmp);
    assert!((w[0] - 5.0 / 9.0).abs() < 1e-15 && (w[2] - 8.0 / 9.0).abs() < 1e-15);
}

#[test]
fn printed_one_over_n_form_of_the_invariant_is_not_invariant() {
    // (1−x²)/n (P'_n)² + P_n² changes between n = 2 and n = 1 at x = 0.7,
    // while the 1/n² form does not
    let x: f64 = 0.7;
    let f = |n: usize, m: usize, pow: i32| {
        let d = legendre_p_deriv(m, x).unwrap();
        (1.0 - x * x) / (n as f64).powi(pow) * d * d + legendre_p(m, x).unwrap().powi(2)
    };
    assert!((f(2, 2, 1) - f(2, 1, 1)).abs() > 0.1);
    assert!((f(2, 2, 2) - f(2, 1, 2)).abs() < 1e-15);
}
