use lowlying::hecke::*;
use lowlying::primes;
use num_rational::BigRational;
use num_traits::Zero;
#[test]
fn chebyshev_examples() {
    assert_eq!(chebyshev_u(2, 1.0), 3.0);
    assert!((chebyshev_u(3, 0.5) + 1.0).abs() < 1e-15);
    for n in 0..=20 {
        assert!((chebyshev_u(n, 1.0) - (n as f64 + 1.0)).abs() < 1e-12);
    }
    assert_eq!(chebyshev_u_poly(3), vec![0, -4, 0, 8]);
}

#[test]
fn linearization_examples() {
    let c = linearization_coeffs(1, 1);
    assert_eq!(c.get(0), 1);
    assert_eq!(c.get(2), 1);
    for m in 1..8 {
        let c = linearization_coeffs(m, 1);
        assert_eq!(c.coeffs.len(), 2);
        assert_eq!(c.get(m - 1), 1);
        assert_eq!(c.get(m + 1), 1);
        let c = linearization_coeffs(m, 0);
        assert_eq!(c.coeffs.len(), 1);
        assert_eq!(c.get(m), 1);
    }
}

#[test]
fn hurwitz_examples() {
    assert_eq!(hurwitz_class_number(3).unwrap(), BigRational::new(1.into(), 3.into()));
    assert_eq!(hurwitz_class_number(4).unwrap(), BigRational::new(1.into(), 2.into()));
    assert_eq!(hurwitz_class_number(0).unwrap(), BigRational::new((-1).into(), 12.into()));
    assert!(hurwitz_class_number(5).is_err());
    let table = hurwitz_table_times_12(2000);
    for n in 0..=2000u64 {
        assert_eq!(table[n as usize], hurwitz_times_12(n), "N = {n}");
    }
}

#[test]
fn hecke_power_int_matches_float() {
    let p = 13u64;
    for a in -7i64..=7 {
        for j in 0..8 {
            let lam = a as f64 / (p as f64).sqrt();
            let f = lambda_prime_power(lam, j, true);
            let v = hecke_power_int(a, p, j, true) as f64 / (p as f64).powf(j as f64 / 2.0);
            assert!((f - v).abs() < 1e-12);
        }
    }
}

#[test]
fn small_weight_traces_vanish() {
    for p in primes::sieve(50) {
        for j in (2..12).step_by(2) {
            assert!(trace_hecke_selberg(j, p).unwrap().is_zero(), "j={j} p={p}");
        }
    }
}

#[test]
fn tau_small() {
    let tau = tau_oracle(10).unwrap();
    assert_eq!(&tau[1..=10], &[1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]);
}
