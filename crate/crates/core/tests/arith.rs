use lowlying::arith::*;
use lowlying::primes::{jacobi, Squarefree};
#[test]
fn char_table_matches_jacobi() {
    for &p in &[3u64, 5, 7, 13, 101] {
        let c = CharTable::new(p);
        for a in 0..p {
            assert_eq!(c.get(a), jacobi(a as i128, p));
        }
    }
}

#[test]
fn legendre_examples() {
    assert_eq!(legendre_symbol(4, 7).unwrap(), 1);
    assert_eq!(legendre_symbol(0, 5).unwrap(), 0);
    assert_eq!(legendre_symbol(3, 7).unwrap(), -1);
    assert!(legendre_symbol(3, 2).is_err());
    assert!(legendre_symbol(3, 9).is_err());
}

#[test]
fn chi4_values() {
    assert_eq!(chi4(5), 1);
    assert_eq!(chi4(7), -1);
    assert_eq!(chi4(2), 0);
    assert_eq!(chi4(-1), -1);
}

#[test]
fn conductor_examples() {
    let c = washington_conductor(1);
    assert_eq!(c.value, 1352);
    assert!(c.exact);
    let c = washington_conductor(13);
    assert_eq!(c.value, 376_712);
    assert!(c.exact);
    // 5² + 15 + 9 = 49
    let c = washington_conductor(5);
    assert!(!c.exact);
    assert_eq!(c.squarefree, Squarefree::No);
    assert!(!washington_conductor(2).exact);
}

#[test]
fn fft_sweep_matches_direct() {
    for &p in &[67u64, 101, 211, 499, 1009] {
        let chi = CharTable::new(p);
        let all = washington_traces_all_t(p).unwrap();
        for t in 0..p as i64 {
            assert_eq!(all[t as usize], legendre_sum_trace(t, -(t + 3), 1, &chi));
        }
    }
}

#[test]
fn bsgs_matches_naive() {
    for &p in &[37u64, 41, 229, 233, 1009, 7919, 10007] {
        let chi = CharTable::new(p);
        for (a, b) in [(1i64, 1i64), (-1, 0), (0, 1), (2, 3), (-7, 11)] {
            if !(CurveAB { a, b }).is_good_at(p) {
                continue;
            }
            let naive = legendre_sum_trace(0, a, b, &chi);
            if let Some(fast) = bsgs_trace(0, a, b, p) {
                assert_eq!(fast, naive, "p={p} a={a} b={b}");
            }
        }
    }
}

#[test]
fn family1_count_grows_like_x_five_sixths() {
    let xs = [1e4, 1e5, 1e6, 1e7];
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .map(|&x| (f64::ln(x), (count_family1(x as u64, 1, 1).unwrap() as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let (mx, my) = (pts.iter().map(|p| p.0).sum::<f64>() / n, pts.iter().map(|p| p.1).sum::<f64>() / n);
    let slope = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum::<f64>() / pts.iter().map(|p| (p.0 - mx).powi(2)).sum::<f64>();
    assert!((slope - 5.0 / 6.0).abs() < 0.05, "fitted exponent {slope}");
}

#[test]
fn family1_enumeration_yields_members_in_order() {
    let all: Vec<_> = enumerate_family1(5000, 1, 1).unwrap().collect();
    assert!(!all.is_empty());
    for c in &all {
        assert!(is_family1_member(c.a, c.b, 5000, 1, 1).unwrap());
    }
    let key = |v: i64| (v.unsigned_abs(), v < 0);
    assert!(all.windows(2).all(|w| (key(w[0].a), key(w[0].b)) < (key(w[1].a), key(w[1].b))));
    assert_eq!(all.len(), count_family1(5000, 1, 1).unwrap());
    assert!(enumerate_family1(100, 3, 1).is_err());
}
