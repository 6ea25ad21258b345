use lowlying::primes::*;
#[test]
fn sieve_small() {
    assert_eq!(sieve(30), vec![2, 3, 5, 7, 11, 13, 17, 19, 23, 29]);
    assert_eq!(sieve(1_000_000).len(), 78_498);
}

#[test]
fn primality_agrees_with_sieve() {
    let ps = sieve(20_000);
    let mut it = ps.iter().peekable();
    for n in 0..20_000u64 {
        let expected = it.peek().is_some_and(|&&p| p == n);
        if expected {
            it.next();
        }
        assert_eq!(is_prime(n), expected, "n = {n}");
    }
    assert!(is_prime_u128(1_000_000_000_000_000_003));
    assert!(!is_prime_u128(1_000_000_007u128 * 998_244_353));
}

#[test]
fn jacobi_matches_euler() {
    for &p in &[3u64, 5, 7, 11, 97, 101, 9973] {
        for a in -50i128..50 {
            let e = pow_mod(a.rem_euclid(p as i128) as u64, (p - 1) / 2, p);
            let expected = if e == 0 { 0 } else if e == 1 { 1 } else { -1 };
            assert_eq!(jacobi(a, p), expected);
        }
    }
}

#[test]
fn squarefree_cases() {
    assert_eq!(squarefree(217), Squarefree::Yes);
    assert_eq!(squarefree(49), Squarefree::No);
    assert_eq!(squarefree(1_000_003u128 * 1_000_003), Squarefree::No);
    assert_eq!(squarefree(1_000_003u128 * 1_000_033), Squarefree::Yes);
    assert_eq!(squarefree(1), Squarefree::Yes);
}

#[test]
fn factorize_roundtrip() {
    for n in 1..2000u64 {
        let f = factorize(n);
        let prod: u64 = f.iter().map(|&(p, e)| p.pow(e)).product();
        assert_eq!(prod, n);
    }
}
