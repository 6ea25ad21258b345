use lowlying::quad::*;
#[test]
fn polynomials_and_gaussian() {
    let r = integrate(|x| x * x, 0.0, 3.0, 1e-14, 0.0).unwrap();
    assert!((r.value - 9.0).abs() < 1e-12);
    let r = integrate(|x| (-std::f64::consts::PI * x * x).exp(), -6.0, 6.0, 1e-13, 0.0).unwrap();
    assert!((r.value - 1.0).abs() < 1e-12);
    let r = integrate(|x| x.abs().sqrt(), -1.0, 1.0, 1e-10, 0.0).unwrap();
    assert!((r.value - 4.0 / 3.0).abs() < 1e-9);
}
