use fracinv::legendre::{legendre_all, legendre_p, legendre_p_deriv};
use fracinv::specfun::*;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, ..ProptestConfig::default() })]

    #[test]
    fn gamma_recurrence(x in 0.05f64..60.0) {
        let (g, g1) = (gamma_fn(x).unwrap(), gamma_fn(x + 1.0).unwrap());
        prop_assert!(((g1 - x * g) / g1).abs() < 1e-13);
    }

    #[test]
    fn ml_shift_relation(alpha in 0.2f64..1.0, beta in 0.5f64..2.0, z in -30.0f64..3.0) {
        let e = mittag_leffler(MLParams { alpha, beta }, z).unwrap().value;
        let e2 = mittag_leffler(MLParams { alpha, beta: alpha + beta }, z).unwrap().value;
        let scale = 1f64.max(e.abs()).max((z * e2).abs());
        prop_assert!((e - z * e2 - rgamma(beta)).abs() / scale < 1e-12);
    }

    #[test]
    fn ml_decreasing_on_negative_axis(alpha in 0.1f64..1.0, a in 0.0f64..50.0, d in 0.01f64..5.0) {
        let p = MLParams { alpha, beta: 1.0 };
        let (lo, hi) = (mittag_leffler(p, -a - d).unwrap().value, mittag_leffler(p, -a).unwrap().value);
        prop_assert!(lo <= hi && lo > 0.0);
    }

    #[test]
    fn legendre_bonnet(n in 1usize..60, x in -1.0f64..1.0) {
        let p = legendre_all(n + 1, x);
        let k = n as f64;
        let r = (k + 1.0) * p[n + 1] - (2.0 * k + 1.0) * x * p[n] + k * p[n - 1];
        prop_assert!(r.abs() < 1e-12 * (k + 1.0));
        prop_assert!(p[n].abs() <= 1.0 + 1e-14);
        prop_assert_eq!(p[n], legendre_p(n, x).unwrap());
    }

    #[test]
    fn legendre_derivative_identity(n in 1usize..40, x in -0.99f64..0.99) {
        // (1 − x²) P_n' = n (P_{n−1} − x P_n)
        let k = n as f64;
        let lhs = (1.0 - x * x) * legendre_p_deriv(n, x).unwrap();
        let rhs = k * (legendre_p(n - 1, x).unwrap() - x * legendre_p(n, x).unwrap());
        prop_assert!((lhs - rhs).abs() < 1e-11 * k * k);
    }
}
