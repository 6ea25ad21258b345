use lowlying::arith::{chi4, frobenius_trace_t, legendre_symbol};
use lowlying::hecke::{chebyshev_u, linearization_coeffs};
use lowlying::lfunc::coefficients;
use lowlying::ratios::{euler_factor_family2, ComplexShift};
use lowlying::special::{gamma_ratio, zeta};
use lowlying::{primes, Complex64, QuadSurd, WashingtonCurve};
use num_integer::Integer;
use proptest::prelude::*;
use std::sync::LazyLock;

static LAMBDA_13: LazyLock<Vec<f64>> = LazyLock::new(|| coefficients(WashingtonCurve::new(13), 90_000).unwrap());

const SMALL_PRIMES: [u64; 12] = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43];

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn legendre_is_multiplicative(a in -500i64..500, b in -500i64..500, i in 0usize..12) {
        let p = SMALL_PRIMES[i];
        let ab = legendre_symbol(a * b, p).unwrap();
        prop_assert_eq!(ab, legendre_symbol(a, p).unwrap() * legendre_symbol(b, p).unwrap());
    }

    #[test]
    fn chi4_is_a_character(m in -10_000i64..10_000, n in -10_000i64..10_000) {
        prop_assert_eq!(chi4(m * n), chi4(m) * chi4(n));
        prop_assert_eq!(chi4(m + 4), chi4(m));
    }

    #[test]
    fn hasse_bound(t in -1000i64..1000, k in 1usize..300) {
        let p = primes::sieve(2000)[k];
        let c = WashingtonCurve::new(t);
        prop_assume!(c.is_good_at(p));
        let a = frobenius_trace_t(t, p).unwrap();
        prop_assert!((a * a) as u64 <= 4 * p);
    }

    #[test]
    fn chebyshev_linearization(m1 in 0usize..10, m2 in 0usize..3, theta in 0.0f64..std::f64::consts::PI) {
        let x = theta.cos();
        let lhs = chebyshev_u(m1, x) * chebyshev_u(m2, x);
        let c = linearization_coeffs(m1, m2);
        let rhs: f64 = (0..=m1 + m2).map(|l| c.get(l) as f64 * chebyshev_u(l, x)).sum();
        prop_assert!((lhs - rhs).abs() < 1e-9 * (1.0 + lhs.abs()));
    }

    #[test]
    fn quad_surd_ring_laws(a in -50i64..50, b in 1i64..50, c in -50i64..50, k in -4i64..4, i in 0usize..12) {
        let p = SMALL_PRIMES[i];
        let x = &QuadSurd::from_frac(p, a, b) * &QuadSurd::half_power(p, k);
        let y = &QuadSurd::from_int(p, c) * &QuadSurd::half_power(p, k + 1);
        prop_assert_eq!(&(&x + &y) - &y, x.clone());
        prop_assert_eq!(&x * &y, &y * &x);
        prop_assert!(((&x * &y).to_f64() - x.to_f64() * y.to_f64()).abs() < 1e-9 * (1.0 + (x.to_f64() * y.to_f64()).abs()));
    }

    #[test]
    fn washington_factors_on_diagonal(re in 0.0f64..0.2, im in -1.0f64..1.0, i in 0usize..12) {
        let s = ComplexShift::diagonal(Complex64::new(re, im)).unwrap();
        let f = euler_factor_family2(SMALL_PRIMES[i], &s, 14).unwrap();
        prop_assert!((f - 1.0).norm() < 1e-12);
    }

    #[test]
    fn washington_factor_conjugation(a in -0.2f64..0.2, b in -0.2f64..0.2, ia in -1.0f64..1.0, ib in -1.0f64..1.0) {
        let s = ComplexShift::new(Complex64::new(a, ia), Complex64::new(b, ib)).unwrap();
        let f = euler_factor_family2(13, &s, 14).unwrap();
        let g = euler_factor_family2(13, &s.conj(), 14).unwrap();
        prop_assert!((f - g.conj()).norm() < 1e-13);
    }

    #[test]
    fn gamma_reflection_on_imaginary_axis(t in -40.0f64..40.0) {
        let r = gamma_ratio(Complex64::new(1.0, -t), Complex64::new(1.0, t)).unwrap();
        prop_assert!((r.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn zeta_conjugate_symmetry(re in 0.1f64..3.0, im in 0.5f64..30.0) {
        let a = zeta(Complex64::new(re, im)).unwrap().value();
        let b = zeta(Complex64::new(re, -im)).unwrap().value();
        prop_assert!((a - b.conj()).norm() < 1e-11 * (1.0 + a.norm()));
    }

    #[test]
    fn coefficients_are_multiplicative(m in 1usize..300, n in 1usize..300) {
        prop_assume!(m.gcd(&n) == 1);
        let lam = &*LAMBDA_13;
        prop_assert!((lam[m * n] - lam[m] * lam[n]).abs() < 1e-10);
    }
}
