//! Chebyshev algebra, Hecke relations and traces of Hecke operators on
//! level-one cusp forms.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::averages;
use crate::error::{domain, invalid, Result};
use crate::exact::{ratio_to_f64, QuadSurd};
use crate::primes;

/// U_n(x) by the three-term recursion.
pub fn chebyshev_u(n: usize, x: f64) -> f64 {
    let (mut prev, mut cur) = (1.0, 2.0 * x);
    if n == 0 {
        return prev;
    }
    for _ in 1..n {
        (prev, cur) = (cur, 2.0 * x * cur - prev);
    }
    cur
}

/// Monomial coefficients of U_n, lowest degree first.
pub fn chebyshev_u_poly(n: usize) -> Vec<i128> {
    let mut prev = vec![1i128];
    if n == 0 {
        return prev;
    }
    let mut cur = vec![0i128, 2];
    for _ in 1..n {
        let mut next = vec![0i128; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// U_{m1}·U_{m2} = Σ_ℓ c_ℓ U_ℓ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChebCoeffs {
    pub m1: usize,
    pub m2: usize,
    pub coeffs: BTreeMap<usize, i128>,
}

impl ChebCoeffs {
    pub fn get(&self, l: usize) -> i128 {
        self.coeffs.get(&l).copied().unwrap_or(0)
    }
}

/// Exact linearization by polynomial multiplication and peeling off leading
/// terms in the U basis.
pub fn linearization_coeffs(m1: usize, m2: usize) -> ChebCoeffs {
    let a = chebyshev_u_poly(m1);
    let b = chebyshev_u_poly(m2);
    let mut prod = vec![0i128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            prod[i + j] += x * y;
        }
    }
    let mut coeffs = BTreeMap::new();
    for l in (0..prod.len()).rev() {
        if prod[l] == 0 {
            continue;
        }
        let lead = 1i128 << l;
        assert_eq!(prod[l] % lead, 0, "U basis change is integral");
        let c = prod[l] / lead;
        for (i, &u) in chebyshev_u_poly(l).iter().enumerate() {
            prod[i] -= c * u;
        }
        coeffs.insert(l, c);
    }
    ChebCoeffs { m1, m2, coeffs }
}

/// λ(p^j) from λ(p): U_j(λ/2) at good primes, λ^j at bad ones.
pub fn lambda_prime_power(lambda_p: f64, j: usize, good: bool) -> f64 {
    if good {
        chebyshev_u(j, lambda_p / 2.0)
    } else {
        lambda_p.powi(j as i32)
    }
}

/// Integer V_j with λ(p^j) = p^{−j/2}·V_j, for a_p = `a`.
pub fn hecke_power_int(a: i64, p: u64, j: usize, good: bool) -> i128 {
    let a = a as i128;
    if !good {
        return a.pow(j as u32);
    }
    let (mut prev, mut cur) = (1i128, a);
    if j == 0 {
        return 1;
    }
    for _ in 1..j {
        (prev, cur) = (cur, a * cur - p as i128 * prev);
    }
    cur
}

/// Weighted count of reduced forms (a, b, c) of discriminant −N, scaled by 12.
pub fn hurwitz_times_12(n: u64) -> i64 {
    if n == 0 {
        return -1;
    }
    if n % 4 == 1 || n % 4 == 2 {
        return 0;
    }
    let mut total = 0i64;
    let mut a = 1i64;
    let n = n as i64;
    while 3 * a * a <= n {
        for b in (-a + 1)..=a {
            let num = b * b + n;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            total += if a == b && b == c {
                4
            } else if b == 0 && a == c {
                6
            } else {
                12
            };
        }
        a += 1;
    }
    total
}

/// Hurwitz class number H(N), with H(0) = −1/12.
pub fn hurwitz_class_number(n: u64) -> Result<BigRational> {
    if n % 4 == 1 || n % 4 == 2 {
        return domain(format!("H(N) needs N ≡ 0, 3 mod 4, got {n}"));
    }
    Ok(BigRational::new(hurwitz_times_12(n).into(), 12.into()))
}

/// 12·H(N) for all N ≤ `nmax`, by sweeping reduced forms.
pub fn hurwitz_table_times_12(nmax: u64) -> Vec<i64> {
    let mut out = vec![0i64; nmax as usize + 1];
    out[0] = -1;
    let nmax = nmax as i64;
    let mut a = 1i64;
    while 3 * a * a <= nmax {
        for b in (-a + 1)..=a {
            let mut c = a;
            loop {
                let d = 4 * a * c - b * b;
                if d > nmax {
                    break;
                }
                if !(c == a && b < 0) {
                    out[d as usize] += if a == b && b == c {
                        4
                    } else if b == 0 && a == c {
                        6
                    } else {
                        12
                    };
                }
                c += 1;
            }
        }
        a += 1;
    }
    out
}

trait Ring: Clone + Zero + From<i64> + std::ops::Mul<Output = Self> + std::ops::Sub<Output = Self> {}
impl Ring for i128 {}
impl Ring for BigInt {}

/// 24·Tr_k(n) for k = 2, 4, …, kmax via Eichler–Selberg.
fn eichler_selberg_24<T: Ring>(kmax: u32, n: u64, h12: &dyn Fn(u64) -> i64) -> Vec<T> {
    let nk = (kmax / 2) as usize;
    let mut acc: Vec<T> = vec![T::zero(); nk];
    let nn = T::from(n as i64);
    let tmax = primes::isqrt(4 * n) as i64;
    for t in 0..=tmax {
        let disc = 4 * n - (t * t) as u64;
        let h = h12(disc);
        if h == 0 {
            continue;
        }
        let w = T::from(if t == 0 { h } else { 2 * h });
        let tt = T::from(t);
        let (mut prev, mut cur) = (T::zero(), T::from(1));
        // cur = c_{k-2}, starting at k = 2
        for idx in 0..nk {
            acc[idx] = acc[idx].clone() - w.clone() * cur.clone();
            for _ in 0..2 {
                let next = tt.clone() * cur.clone() - nn.clone() * prev.clone();
                prev = cur;
                cur = next;
            }
        }
    }
    let divisors: Vec<u64> = (1..=n).filter(|d| d * d <= n && n % d == 0).collect();
    for (idx, slot) in acc.iter_mut().enumerate() {
        let k = 2 * (idx as u32 + 1);
        let mut hyper = T::zero();
        for &d in &divisors {
            let mult = if d * d == n { 1 } else { 2 };
            let mut pw = T::from(1);
            for _ in 0..k - 1 {
                pw = pw * T::from(d as i64);
            }
            hyper = hyper - T::from(-12 * mult) * pw;
        }
        // hyper now holds 12·Σ_{dd'=n} min(d,d')^{k−1}
        *slot = slot.clone() - hyper;
        if k == 2 {
            let sigma: i64 = (1..=n).filter(|d| n % d == 0).map(|d| d as i64).sum();
            *slot = slot.clone() - T::from(-24 * sigma);
        }
    }
    acc
}

/// Tr_j(n) on S_j(SL₂(ℤ)) by the Eichler–Selberg trace formula.
pub fn trace_hecke_selberg(j: u32, n: u64) -> Result<BigRational> {
    if j % 2 == 1 || j < 2 {
        return invalid(format!("weight must be even and ≥ 2, got {j}"));
    }
    if n == 0 {
        return invalid("n must be positive");
    }
    let v: Vec<BigInt> = eichler_selberg_24(j, n, &hurwitz_times_12);
    let t24 = v[(j / 2 - 1) as usize].clone();
    Ok(BigRational::new(t24, BigInt::from(24)))
}

/// dim S_j(SL₂(ℤ)) for even j ≥ 0.
pub fn dim_cusp_forms(j: u32) -> u32 {
    if j < 12 || j % 2 == 1 {
        return 0;
    }
    if j % 12 == 2 {
        j / 12 - 1
    } else {
        j / 12
    }
}

/// Cached traces Tr_j(p) for even j ≤ `jmax` and primes p ≤ `pmax`.
#[derive(Clone, Debug)]
pub struct TraceTable {
    pub jmax: u32,
    pub pmax: u64,
    exact: HashMap<(u32, u64), BigInt>,
    normalized: HashMap<(u32, u64), f64>,
}

impl TraceTable {
    pub fn build(jmax: u32, pmax: u64) -> Self {
        let jmax = jmax - jmax % 2;
        let ps = primes::sieve(pmax);
        let h = hurwitz_table_times_12(4 * pmax);
        let hf = |n: u64| h[n as usize];
        let mut exact = HashMap::new();
        let mut normalized = HashMap::new();
        for &p in &ps {
            // |c_k| ≤ (k+1)p^{k/2}; the sum carries at most ~4p·12·√(4p) more
            let bits = ((jmax as f64) - 2.0) / 2.0 * (p as f64).log2() + (jmax as f64).log2() + (p as f64).log2() * 1.5 + 12.0;
            let vals: Vec<BigInt> = if bits < 118.0 {
                eichler_selberg_24::<i128>(jmax, p, &hf).into_iter().map(BigInt::from).collect()
            } else {
                eichler_selberg_24::<BigInt>(jmax, p, &hf)
            };
            for (idx, v) in vals.into_iter().enumerate() {
                let j = 2 * (idx as u32 + 1);
                let (q, r) = num_integer::Integer::div_rem(&v, &BigInt::from(24));
                assert!(r.is_zero(), "trace formula not integral at j={j}, p={p}");
                normalized.insert((j, p), normalized_trace(&q, j, p));
                exact.insert((j, p), q);
            }
        }
        TraceTable { jmax, pmax, exact, normalized }
    }

    /// Exact Tr_j(p).
    pub fn trace(&self, j: u32, p: u64) -> Option<&BigInt> {
        self.exact.get(&(j, p))
    }

    /// Tr*_j(p) = p^{(1−j)/2}·Tr_j(p).
    pub fn normalized(&self, j: u32, p: u64) -> Option<f64> {
        self.normalized.get(&(j, p)).copied()
    }

    /// Tr*_j(p) as an exact element of ℚ(√p).
    pub fn normalized_exact(&self, j: u32, p: u64) -> Option<QuadSurd> {
        let t = self.trace(j, p)?;
        let v = QuadSurd::from_int(p, t.clone());
        Some(&v * &QuadSurd::half_power(p, 1 - j as i64))
    }

    /// Rows (j, p, numerator, denominator) sorted by (j, p).
    pub fn rows(&self) -> Vec<(u32, u64, BigInt, BigInt)> {
        let mut keys: Vec<_> = self.exact.keys().copied().collect();
        keys.sort();
        keys.into_iter().map(|(j, p)| (j, p, self.exact[&(j, p)].clone(), BigInt::one())).collect()
    }
}

// Accurate p^{(1−j)/2}·Tr without overflowing intermediate f64 values.
fn normalized_trace(tr: &BigInt, j: u32, p: u64) -> f64 {
    let shift = (tr.bits() as i64 - 60).max(0);
    let mant = (tr >> (shift as usize)).to_f64().unwrap_or(0.0);
    let log2 = (shift as f64) + ((1.0 - j as f64) / 2.0) * (p as f64).log2();
    mant * log2.exp2()
}

/// Ramanujan τ(n) for 1 ≤ n ≤ n_max from the q-expansion of q∏(1−qⁿ)²⁴.
///
/// The 24th power of the pentagonal series is expanded with the recurrence
/// n·b_n = Σ_k ((m+1)k − n)·a_k·b_{n−k} for f^m, exact in i128.
pub fn tau_oracle(n_max: usize) -> Result<Vec<i128>> {
    if n_max > 10_000 {
        return invalid("n_max ≤ 10⁴");
    }
    let len = n_max.max(1);
    // pentagonal: Σ (−1)^k q^{k(3k−1)/2}
    let mut pent: Vec<(usize, i128)> = Vec::new();
    let mut k: i64 = 1;
    loop {
        let e1 = (k * (3 * k - 1) / 2) as usize;
        let e2 = (k * (3 * k + 1) / 2) as usize;
        if e1 >= len {
            break;
        }
        let s = if k % 2 == 0 { 1 } else { -1 };
        pent.push((e1, s));
        if e2 < len {
            pent.push((e2, s));
        }
        k += 1;
    }
    pent.sort();
    let m: i128 = 24;
    let mut b = vec![0i128; len];
    b[0] = 1;
    for n in 1..len {
        let mut s = 0i128;
        for &(k, a) in &pent {
            if k > n {
                break;
            }
            s += ((m + 1) * k as i128 - n as i128) * a * b[n - k];
        }
        assert_eq!(s % n as i128, 0);
        b[n] = s / n as i128;
    }
    let mut tau = vec![0i128; n_max + 1];
    for n in 1..=n_max {
        tau[n] = b[n - 1];
    }
    Ok(tau)
}

/// Tr_j(p) recovered from curve moments of the all-curves family.
#[derive(Clone, Debug)]
pub struct MomentTrace {
    pub j: u32,
    pub p: u64,
    pub exact: BigRational,
    pub normalized: f64,
}

/// Inverts Q̃*(p^{j−2}, 1) = −((p−1)/p^{3/2})·Tr*_j(p).
pub fn trace_from_moments(j: u32, p: u64) -> Result<MomentTrace> {
    if j % 2 == 1 || j < 4 {
        return invalid(format!("weight must be even and ≥ 4, got {j}"));
    }
    if p <= 3 {
        return invalid("p must exceed 3");
    }
    let avg = averages::q_star_bruteforce(j as usize - 2, 0, p)?;
    // Tr_j = −Q̃*·p^{j/2+1}/(p−1)
    let scale = BigRational::new(-BigInt::from(p).pow(j / 2 + 1), BigInt::from(p - 1));
    let tr = avg.value.scale(&scale);
    if !tr.is_rational() {
        return domain("moment inversion produced an irrational trace");
    }
    let normalized = ratio_to_f64(&tr.rat) * (p as f64).powf((1.0 - j as f64) / 2.0);
    Ok(MomentTrace { j, p, exact: tr.rat, normalized })
}
