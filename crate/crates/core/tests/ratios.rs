use lowlying::ratios::*;
use lowlying::{primes, Complex64, TraceTable};
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn diagonal_factors_are_one() {
    let traces = TraceTable::build(16, 100);
    for r in [c(0.0, 0.0), c(0.1, 0.2), c(0.0, 0.2)] {
        let s = ComplexShift::diagonal(r).unwrap();
        for p in primes::sieve(100).into_iter().filter(|&p| p > 3) {
            assert!((euler_factor_family1(p, &s, &traces, 14).unwrap() - 1.0).norm() < 1e-12);
            assert!((euler_factor_family2(p, &s, 14).unwrap() - 1.0).norm() < 1e-12);
        }
        // large primes go through the truncated moment series
        for p in [1009u64, 4001] {
            assert!((euler_factor_family2(p, &s, 14).unwrap() - 1.0).norm() < 1e-12);
        }
    }
}

#[test]
fn y_values() {
    let s = ComplexShift::diagonal(c(0.1, 0.3)).unwrap();
    assert!((y_family1(&s).unwrap() - 1.0).norm() < 1e-13);
    assert!((y_family2(&s).unwrap() - 1.0).norm() < 1e-13);
    let s = ComplexShift::new(c(-0.1, 0.0), c(0.1, 0.0)).unwrap();
    assert!(y_family1(&s).unwrap().norm() < 1e-15);
}

#[test]
fn small_primes() {
    let s = ComplexShift::diagonal(c(0.05, 0.0)).unwrap();
    assert!((euler_factor_23(3, &s, 1, 1).unwrap() - 1.0).norm() < 1e-14);
    assert_eq!(euler_factor_23(2, &s, 1, 1).unwrap(), c(1.0, 0.0));
    assert!(euler_factor_23(5, &s, 1, 1).is_err());
}
