//! Exact family averages of λ(p^{m1})·μ(p^{m2}) over residues mod p.
//!
//! Every average is an integer sum S scaled by a power of √p, so values are
//! carried in ℚ(√p) and compared with no rounding.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::arith::{self, CharTable};
use crate::error::{invalid, Result};
use crate::exact::{ratio_to_f64, QuadSurd};
use crate::hecke::{hecke_power_int, TraceTable};
use crate::primes;

/// Largest |p(Q̃_t(p,p)+1)| over odd primes p ≤ 199 (attained at p = 7, 29/7), rounded up.
pub const C_DIAG: f64 = 4.15;

/// An exact family average at a single prime.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AverageValue {
    pub m1: usize,
    pub m2: usize,
    pub p: u64,
    pub value: QuadSurd,
}

impl AverageValue {
    pub fn to_f64(&self) -> f64 {
        self.value.to_f64()
    }
}

/// Integer numerator of μ(p^k)·p^{k/2}: 1, −a, ψ·p.
fn mu_int(a: i64, p: u64, k: usize, good: bool) -> i128 {
    match k {
        0 => 1,
        1 => -(a as i128),
        2 => {
            if good {
                p as i128
            } else {
                0
            }
        }
        _ => 0,
    }
}

/// (a_p, multiplicity, good) triples summarizing all curves of a family mod p.
fn histogram(entries: impl Iterator<Item = (i64, bool)>) -> Vec<(i64, bool, i128)> {
    let mut map = std::collections::BTreeMap::new();
    for (a, g) in entries {
        *map.entry((a, g)).or_insert(0i128) += 1;
    }
    map.into_iter().map(|((a, g), c)| (a, g, c)).collect()
}

fn family1_histogram(p: u64) -> Vec<(i64, bool, i128)> {
    let chi = CharTable::new(p);
    let pi = p as i64;
    histogram((0..pi).flat_map(|a| {
        let chi = &chi;
        (0..pi).map(move |b| {
            let good = (4 * a * a % pi * a + 27 * b * b) % pi != 0;
            (arith::legendre_sum_trace(0, a, b, chi), good)
        })
    }))
}

fn family2_histogram(p: u64) -> Result<Vec<(i64, bool, i128)>> {
    let traces = arith::washington_traces_all_t(p)?;
    let pi = p as i64;
    Ok(histogram(
        traces.into_iter().enumerate().map(|(t, a)| {
            let t = t as i64;
            (a, (t * t + 3 * t + 9) % pi != 0)
        }),
    ))
}

fn weighted_sum(hist: &[(i64, bool, i128)], p: u64, m1: usize, m2: usize) -> BigInt {
    let mut s = BigInt::zero();
    for &(a, good, count) in hist {
        let term = hecke_power_int(a, p, m1, good) * mu_int(a, p, m2, good);
        s += BigInt::from(term) * BigInt::from(count);
    }
    s
}

fn scaled(p: u64, s: BigInt, base: i64, m1: usize, m2: usize) -> QuadSurd {
    // S · p^{base} · p^{−(m1+m2)/2}
    let v = QuadSurd::from_int(p, s);
    &v * &QuadSurd::half_power(p, 2 * base - (m1 + m2) as i64)
}

fn check_f1(m1: usize, m2: usize, p: u64) -> Result<()> {
    if m2 > 2 {
        return invalid(format!("m2 must be at most 2, got {m2}"));
    }
    if m1 > 20 {
        return invalid(format!("m1 must be at most 20, got {m1}"));
    }
    if p <= 3 || !primes::is_prime(p) {
        return invalid(format!("p must be a prime above 3, got {p}"));
    }
    Ok(())
}

/// Q̃*(p^{m1}, p^{m2}) as the full double sum over (a, b) mod p.
///
/// Any prime p > 3 is accepted; the cost is O(p³).
pub fn q_star_bruteforce(m1: usize, m2: usize, p: u64) -> Result<AverageValue> {
    check_f1(m1, m2, p)?;
    let hist = family1_histogram(p);
    let s = weighted_sum(&hist, p, m1, m2);
    Ok(AverageValue { m1, m2, p, value: scaled(p, s, -2, m1, m2) })
}

/// All Q̃*(p^{m1}, p^{m2}) with m1 ≤ `m1_max`, m2 ≤ 2, sharing one sweep.
pub fn q_star_bruteforce_grid(m1_max: usize, p: u64) -> Result<Vec<AverageValue>> {
    check_f1(m1_max, 0, p)?;
    let hist = family1_histogram(p);
    let mut out = Vec::new();
    for m1 in 0..=m1_max {
        for m2 in 0..=2 {
            let s = weighted_sum(&hist, p, m1, m2);
            out.push(AverageValue { m1, m2, p, value: scaled(p, s, -2, m1, m2) });
        }
    }
    Ok(out)
}

fn tr_star(traces: &TraceTable, j: usize, p: u64) -> Result<QuadSurd> {
    traces
        .normalized_exact(j as u32, p)
        .ok_or_else(|| crate::Error::InvalidArgument(format!("trace table lacks weight {j} at p = {p}")))
}

/// Q̃*(p^{m1}, p^{m2}) from the closed forms in terms of normalized traces.
pub fn q_star_closed(m1: usize, m2: usize, p: u64, traces: &TraceTable) -> Result<AverageValue> {
    check_f1(m1, m2, p)?;
    let wrap = |value| Ok(AverageValue { m1, m2, p, value });
    if (m1 + m2) % 2 == 1 {
        return wrap(QuadSurd::zero(p));
    }
    let pm1 = QuadSurd::from_int(p, p as i64 - 1);
    // (p−1)/p^{3/2} and (p−1)/p²
    let c32 = &pm1 * &QuadSurd::half_power(p, -3);
    let c2 = &pm1 * &QuadSurd::half_power(p, -4);
    let value = match (m1, m2) {
        (0, 0) => QuadSurd::one(p),
        (_, 0) => -(&c32 * &tr_star(traces, m1 + 2, p)?),
        (1, 1) => QuadSurd::from_frac(p, 1 - p as i64, p as i64),
        (_, 1) => {
            let t = &tr_star(traces, m1 + 1, p)? + &tr_star(traces, m1 + 3, p)?;
            &(&c2 * &QuadSurd::half_power(p, 1 - m1 as i64)) + &(&c32 * &t)
        }
        (0, 2) => QuadSurd::from_frac(p, p as i64 - 1, p as i64),
        _ => {
            let t = &c32 * &tr_star(traces, m1 + 2, p)?;
            &(-t) - &(&c2 * &QuadSurd::half_power(p, -(m1 as i64)))
        }
    };
    wrap(value)
}

/// λ_{r,t}(n)·μ_{r,t}(n')·Q̃*(…) products have the shape coeff·√radicand.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RtAverage {
    pub coeff: BigRational,
    pub radicand: u64,
}

impl RtAverage {
    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.coeff) * (self.radicand as f64).sqrt()
    }
}

/// a_3 of y² = x³ + rx + t.
pub fn a3(r: i64, t: i64) -> i64 {
    let mut s = 0;
    for x in 0..3i64 {
        s += match (x * x * x + r * x + t).rem_euclid(3) {
            0 => 0,
            1 => 1,
            _ => -1,
        };
    }
    -s
}

/// Q̃*_{r,t}(m1, m2) for composite arguments.
///
/// The 2- and 3-parts are evaluated at the representative y² = x³ + rx + t;
/// the coprime part is a product of per-prime averages with the (1−p^{−10})^{−1}
/// correction for each prime p > 3 dividing m1·m2.
pub fn q_rt(m1: u64, m2: u64, r: i64, t: i64) -> Result<RtAverage> {
    if m1 == 0 || m2 == 0 {
        return invalid("m1 and m2 must be positive");
    }
    arith::check_residues(r, t)?;
    let f1 = primes::factorize(m1);
    let f2 = primes::factorize(m2);
    let exp = |f: &[(u64, u32)], p: u64| f.iter().find(|e| e.0 == p).map_or(0, |e| e.1 as usize);
    // the representative has a cusp at 2 and good reduction at 3
    if exp(&f1, 2) > 0 || exp(&f2, 2) > 0 {
        return Ok(RtAverage { coeff: BigRational::zero(), radicand: 1 });
    }
    let (k1, k2) = (exp(&f1, 3), exp(&f2, 3));
    let a = a3(r, t);
    let s3 = hecke_power_int(a, 3, k1, true) * mu_int(a, 3, k2, true);
    let three = QuadSurd::from_int(3, s3);
    let three = &three * &QuadSurd::half_power(3, -((k1 + k2) as i64));
    let (mut coeff, radicand) = match three.as_rational_times_sqrt() {
        Some((q, 0)) => (q, 1),
        Some((q, _)) => (q, 3),
        None => unreachable!("single power of √3"),
    };
    let mut ps: Vec<u64> = f1.iter().chain(&f2).map(|e| e.0).filter(|&p| p > 3).collect();
    ps.sort();
    ps.dedup();
    let jmax = ps.iter().map(|&p| exp(&f1, p)).max().unwrap_or(0) as u32 + 4;
    let table = TraceTable::build(jmax.max(4), ps.last().copied().unwrap_or(5));
    for &p in &ps {
        let (e1, e2) = (exp(&f1, p), exp(&f2, p));
        let q = if e2 > 2 {
            QuadSurd::zero(p)
        } else {
            q_star_closed(e1, e2, p, &table)?.value
        };
        let (qr, _) = q
            .as_rational_times_sqrt()
            .filter(|&(_, k)| k == 0)
            .expect("per-prime averages are rational");
        let p10 = BigInt::from(p).pow(10);
        let delta = BigRational::new(p10.clone(), p10 - BigInt::one());
        coeff = coeff * qr * delta;
    }
    Ok(RtAverage { coeff, radicand })
}

fn check_f2(m1: usize, m2: usize, p: u64) -> Result<()> {
    if m2 > 2 {
        return invalid(format!("m2 must be at most 2, got {m2}"));
    }
    if m1 > 20 {
        return invalid(format!("m1 must be at most 20, got {m1}"));
    }
    if !primes::is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    Ok(())
}

/// Q̃_t(p^{m1}, p^{m2}) as the sum over t mod p.
pub fn q_t_bruteforce(m1: usize, m2: usize, p: u64) -> Result<AverageValue> {
    check_f2(m1, m2, p)?;
    if p == 2 {
        let v = if m1 == 0 && m2 == 0 { QuadSurd::one(2) } else { QuadSurd::zero(2) };
        return Ok(AverageValue { m1, m2, p, value: v });
    }
    let hist = family2_histogram(p)?;
    let s = weighted_sum(&hist, p, m1, m2);
    Ok(AverageValue { m1, m2, p, value: scaled(p, s, -1, m1, m2) })
}

/// #{t mod p : p | t² + 3t + 9}.
pub fn rho(p: u64) -> u32 {
    let pi = p as i64;
    (0..pi).filter(|t| (t * t + 3 * t + 9) % pi == 0).count() as u32
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IdentityKind {
    First,
    Diagonal,
    SecondMoment,
}

#[derive(Clone, Debug)]
pub struct IdentityReport {
    pub p: u64,
    pub kind: IdentityKind,
    pub computed: QuadSurd,
    pub expected: Option<QuadSurd>,
    /// |computed − expected|, or |p(Q̃_t(p,p)+1)| for the diagonal.
    pub residual: f64,
    pub pass: bool,
}

/// Checks one of the Washington-family identities at an odd prime.
pub fn q_t_identity_check(p: u64, kind: IdentityKind) -> Result<IdentityReport> {
    if p == 2 || !primes::is_prime(p) {
        return invalid(format!("p must be an odd prime, got {p}"));
    }
    let report = |computed: QuadSurd, expected: QuadSurd| {
        let diff = &computed - &expected;
        IdentityReport { p, kind, residual: diff.to_f64().abs(), pass: diff.is_zero(), computed, expected: Some(expected) }
    };
    Ok(match kind {
        IdentityKind::First => {
            let v = q_t_bruteforce(1, 0, p)?.value;
            let c = 1 + arith::chi4(p as i64) as i64;
            report(v, &QuadSurd::from_int(p, -c) * &QuadSurd::half_power(p, -1))
        }
        IdentityKind::SecondMoment => {
            let v = q_t_bruteforce(0, 2, p)?.value;
            report(v, QuadSurd::from_frac(p, p as i64 - rho(p) as i64, p as i64))
        }
        IdentityKind::Diagonal => {
            let v = q_t_bruteforce(1, 1, p)?.value;
            let scaled = (&v + &QuadSurd::one(p)).scale(&BigRational::from_integer(p.into()));
            let residual = scaled.to_f64().abs();
            IdentityReport { p, kind, computed: v, expected: None, residual, pass: residual <= C_DIAG }
        }
    })
}
