use lowlying::special::*;
use lowlying::Complex64;
use std::f64::consts::PI;
fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn bernoulli_values() {
    assert!((bernoulli_over_factorial(1) - 1.0 / 12.0).abs() < 1e-17);
    assert!((bernoulli_over_factorial(2) + 1.0 / 720.0).abs() < 1e-18);
    assert!((bernoulli_over_factorial(3) - 1.0 / 30240.0).abs() < 1e-19);
}

#[test]
fn zeta_values() {
    let z = zeta(c(2.0, 0.0)).unwrap();
    assert!((z.re - PI * PI / 6.0).abs() < 1e-14);
    assert!(z.im.abs() < 1e-15);
    let z = zeta(c(0.5, 14.134725141734693)).unwrap();
    assert!(z.value().norm() < 1e-9);
    assert!(zeta(c(1.0, 0.0)).is_err());
    let (r, _) = zeta_regular(c(0.0, 0.0)).unwrap();
    assert!((r.re - 0.5772156649015329).abs() < 1e-13);
}

#[test]
fn logderiv_values() {
    let v = zeta_logderiv(c(2.0, 0.0)).unwrap();
    assert!((v.re + 0.5699609930945).abs() < 1e-11);
    let v = zeta_logderiv_regular(c(0.0, 0.0)).unwrap();
    assert!((v.re - 0.5772156649015329).abs() < 1e-13);
    let a = zeta_logderiv(c(0.7, 3.0)).unwrap().value();
    let b = zeta_logderiv(c(0.7, -3.0)).unwrap().value();
    assert!((a - b.conj()).norm() < 1e-13);
}

#[test]
fn chi4_values() {
    let l = dirichlet_l_chi4(c(1.0, 0.0)).unwrap();
    assert!((l.re - PI / 4.0).abs() < 1e-14);
    let l = dirichlet_l_chi4(c(2.0, 0.0)).unwrap();
    assert!((l.re - 0.915965594177219).abs() < 1e-14);
}

#[test]
fn gamma_values() {
    let g0 = 0.5772156649015329;
    assert!((digamma(c(1.0, 0.0)).unwrap().re + g0).abs() < 1e-14);
    assert!((digamma(c(2.0, 0.0)).unwrap().re - (1.0 - g0)).abs() < 1e-14);
    assert!((log_gamma(c(5.0, 0.0)).unwrap().re - 24f64.ln()).abs() < 1e-13);
    assert!((log_gamma(c(0.5, 0.0)).unwrap().re - 0.5 * PI.ln()).abs() < 1e-14);
    let r = gamma_ratio(c(1.0, -3.0), c(1.0, 3.0)).unwrap();
    assert!((r.norm() - 1.0).abs() < 1e-13);
}

#[test]
fn stieltjes_values() {
    assert!((stieltjes(0).unwrap() - 0.5772156649015329).abs() < 1e-13);
    assert!((stieltjes(1).unwrap() + 0.0728158454836767).abs() < 1e-13);
    assert!(stieltjes(2).is_err());
}
