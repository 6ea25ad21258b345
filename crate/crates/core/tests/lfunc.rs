use lowlying::lfunc::*;
use lowlying::WashingtonCurve;
#[test]
fn coefficient_basics() {
    let c = WashingtonCurve::new(13);
    let lam = coefficients(c, 2000).unwrap();
    assert_eq!(lam[1], 1.0);
    assert_eq!(lam[2], 0.0);
    assert_eq!(lam[4], 0.0);
    for &p in &[3usize, 5, 11, 19] {
        assert!((lam[p * p] - (lam[p] * lam[p] - 1.0)).abs() < 1e-12);
        assert!((lam[p * 7] - lam[p] * lam[7]).abs() < 1e-12 || p == 7);
    }
}

#[test]
fn central_order_rules() {
    assert_eq!(central_order(&[1e-12, 0.5, 0.0, 1.0]), (1, false));
    assert_eq!(central_order(&[1e-12, 1e-5, 0.0, 1.0]), (3, true));
    assert_eq!(central_order(&[2.0]), (0, false));
}

// Arithmetic in F_p[i]/(i² − n) for a non-residue n.
#[derive(Clone, Copy, PartialEq)]
struct Fp2 {
    a: u64,
    b: u64,
}

fn mul(x: Fp2, y: Fp2, p: u64, n: u64) -> Fp2 {
    Fp2 { a: (x.a * y.a + x.b * y.b % p * n) % p, b: (x.a * y.b + x.b * y.a) % p }
}

fn pow(mut x: Fp2, mut e: u64, p: u64, n: u64) -> Fp2 {
    let mut r = Fp2 { a: 1, b: 0 };
    while e > 0 {
        if e & 1 == 1 {
            r = mul(r, x, p, n);
        }
        x = mul(x, x, p, n);
        e >>= 1;
    }
    r
}

/// p² + 1 − #E(F_{p²}) by Euler's criterion over the quadratic extension.
fn trace_over_fp2(t: i64, p: u64) -> i64 {
    let n = (2..p).find(|&v| lowlying::arith::legendre_symbol(v as i64, p).unwrap() == -1).unwrap();
    let tt = t.rem_euclid(p as i64) as u64;
    let a4 = (-(t + 3)).rem_euclid(p as i64) as u64;
    let mut affine = 0i64;
    for xa in 0..p {
        for xb in 0..p {
            let x = Fp2 { a: xa, b: xb };
            let x2 = mul(x, x, p, n);
            let x3 = mul(x2, x, p, n);
            let v = Fp2 {
                a: (x3.a + tt * x2.a + a4 * x.a + 1) % p,
                b: (x3.b + tt * x2.b + a4 * x.b) % p,
            };
            affine += if v.a == 0 && v.b == 0 {
                1
            } else if pow(v, (p * p - 1) / 2, p, n) == (Fp2 { a: 1, b: 0 }) {
                2
            } else {
                0
            };
        }
    }
    (p * p) as i64 - affine
}

#[test]
fn prime_squares_match_extension_counts() {
    let t = 13;
    let lam = coefficients(WashingtonCurve::new(t), 400).unwrap();
    for p in [3u64, 5, 7, 11, 13, 17, 19] {
        if !WashingtonCurve::new(t).is_good_at(p) {
            continue;
        }
        // p·λ(p²) = a_p² − p = a_{p²} + p
        let direct = (trace_over_fp2(t, p) + p as i64) as f64 / p as f64;
        assert!((lam[(p * p) as usize] - direct).abs() < 1e-12, "p = {p}");
    }
}

#[test]
fn coefficients_against_point_counts() {
    for t in [1i64, -11, 13] {
        let c = WashingtonCurve::new(t);
        let lam = coefficients(c, 3000).unwrap();
        for p in lowlying::primes::sieve(3000).into_iter().skip(1).step_by(17) {
            let (a2, a4, a6) = c.cubic();
            let ap = if c.is_good_at(p) { lowlying::arith::point_count_trace(a2, a4, a6, p) } else { 0 };
            assert!((lam[p as usize] * (p as f64).sqrt() - ap as f64).abs() < 1e-9);
        }
    }
}

#[test]
fn divisor_bound_and_multiplicativity() {
    const N: usize = 10_000;
    let lam = coefficients(WashingtonCurve::new(-11), N).unwrap();
    let mut d = vec![0u32; N + 1];
    for i in 1..=N {
        for j in (i..=N).step_by(i) {
            d[j] += 1;
        }
    }
    for n in 1..=N {
        assert!(lam[n].abs() <= d[n] as f64 + 1e-9, "n = {n}");
    }
    for (m, n) in [(9usize, 25usize), (7, 64), (11, 13), (27, 5)] {
        assert!((lam[m * n] - lam[m] * lam[n]).abs() < 1e-12);
    }
    // 97 = (−11)² − 33 + 9 is the bad odd prime
    assert_eq!(lam[97], 0.0);
    assert_eq!(lam[97 * 97], 0.0);
}

#[test]
fn functional_equation_and_central_zero_t1() {
    let ls = LSeries::for_height(WashingtonCurve::new(1), 12.0, false).unwrap();
    for s in [(0.5, 0.0), (0.5, 3.0), (0.8, 6.0), (0.25, 11.0)] {
        let s = lowlying::Complex64::new(s.0, s.1);
        let (abs, rel) = ls.fe_residual(s, 1.0, 1.3).unwrap();
        assert!(abs < 1e-8 && rel < 1e-8, "s = {s}: {abs:e} {rel:e}");
    }
    let c = ls.completed_l_with(lowlying::Complex64::new(0.5, 0.0), 1.3).unwrap();
    assert!(c.norm() < 1e-8);
    let z = find_zeros(&ls, 10.0).unwrap();
    assert_eq!(z.central_multiplicity, 1);
    assert!(z.central_derivatives[1].abs() > 1e-3);
    assert!((z.ordinates.len() as f64 - z.count_estimate).abs() <= 2.0);
    assert!(z.ordinates.windows(2).all(|w| w[0] < w[1]) && z.ordinates[0] > 0.0);
    assert!(z.max_imag_residual < 1e-8);
    for &g in &z.ordinates {
        assert!(ls.hardy_z(g).unwrap().0.abs() < 1e-6);
    }
}

#[test]
fn wrong_conductor_is_detected() {
    // t = 2 has t²+3t+9 = 19 squarefree but its conductor is not 8·19²
    let ls = LSeries::for_height(WashingtonCurve::new(2), 5.0, true).unwrap();
    let (abs, _) = ls.fe_residual(lowlying::Complex64::new(0.5, 1.0), 1.0, 1.3).unwrap();
    assert!(abs > 1e-4);
    assert!(LSeries::new(WashingtonCurve::new(2), 100).is_err());
}

#[test]
fn short_tables_are_rejected() {
    let ls = LSeries::new(WashingtonCurve::new(13), 500).unwrap();
    assert!(matches!(
        ls.completed_l(lowlying::Complex64::new(0.5, 0.0)),
        Err(lowlying::Error::InsufficientTerms { .. })
    ));
}

#[test]
fn empirical_central_mass() {
    let ls = LSeries::for_height(WashingtonCurve::new(1), 4.0, false).unwrap();
    let tf = lowlying::TestFunction::gaussian();
    let x = 1352.0;
    let need = required_height(&tf, x).unwrap();
    let z = find_zeros(&ls, need.max(1.0)).unwrap();
    let e = empirical_one_level(std::slice::from_ref(&z), &tf, x).unwrap();
    assert_eq!(e.curves[0].central, tf.psi(0.0));
    let manual: f64 = z.ordinates.iter().map(|g| 2.0 * tf.psi(g * e.l / std::f64::consts::PI)).sum();
    assert!((e.mean_off_central - manual).abs() < 1e-15);
    let short = ZeroList { height: need / 2.0, ..z };
    assert!(empirical_one_level(&[short], &tf, x).is_err());
}
