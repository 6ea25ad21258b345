use lowlying::averages::*;
use lowlying::{QuadSurd, TraceTable};
use num_rational::BigRational;
use num_traits::{One, Zero};
#[test]
fn small_examples() {
    assert_eq!(q_star_bruteforce(1, 1, 5).unwrap().value, QuadSurd::from_frac(5, -4, 5));
    assert_eq!(q_star_bruteforce(0, 2, 5).unwrap().value, QuadSurd::from_frac(5, 4, 5));
    assert!(q_star_bruteforce(2, 1, 7).unwrap().value.is_zero());
    let expect = &QuadSurd::from_int(5, -2) * &QuadSurd::half_power(5, -1);
    assert_eq!(q_t_bruteforce(1, 0, 5).unwrap().value, expect);
    assert_eq!(q_t_bruteforce(0, 2, 7).unwrap().value, QuadSurd::from_frac(7, 5, 7));
}

#[test]
fn closed_matches_brute_small() {
    let table = TraceTable::build(12, 23);
    for p in [5u64, 7, 11, 13, 17, 19, 23] {
        for v in q_star_bruteforce_grid(8, p).unwrap() {
            let c = q_star_closed(v.m1, v.m2, p, &table).unwrap();
            assert_eq!(c.value, v.value, "p={p} m1={} m2={}", v.m1, v.m2);
        }
    }
}

#[test]
fn q_rt_examples() {
    let one = q_rt(1, 1, 1, 1).unwrap();
    assert_eq!(one.coeff, BigRational::one());
    assert!(q_rt(2, 1, 1, 1).unwrap().coeff.is_zero());
    assert!(q_rt(5, 1, 1, 1).unwrap().coeff.is_zero());
}
