use lowlying::exact::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
#[test]
fn half_powers_multiply() {
    let p = 7;
    for a in -6..6 {
        for b in -6..6 {
            let lhs = &QuadSurd::half_power(p, a) * &QuadSurd::half_power(p, b);
            assert_eq!(lhs, QuadSurd::half_power(p, a + b));
        }
    }
}

#[test]
fn sqrt_squared_is_p() {
    let s = QuadSurd::half_power(11, 1);
    assert_eq!(&s * &s, QuadSurd::from_int(11, 11));
    assert!((s.to_f64() - 11f64.sqrt()).abs() < 1e-15);
}

#[test]
fn huge_ratio_to_f64() {
    let big = num_traits::pow(BigInt::from(10), 400);
    let q = BigRational::new(big.clone() * 3, big * 7);
    assert!((ratio_to_f64(&q) - 3.0 / 7.0).abs() < 1e-15);
    let tiny = BigRational::new(BigInt::one(), num_traits::pow(BigInt::from(2), 1000));
    assert_eq!(ratio_to_f64(&tiny), 0.0f64.max(2f64.powi(-1000)));
}
