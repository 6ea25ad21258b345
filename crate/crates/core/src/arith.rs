//! Finite-field arithmetic: Legendre symbols, Frobenius traces, family
//! membership and conductors.

use std::collections::HashMap;

use crate::error::{domain, invalid, Result};
use crate::primes::{self, jacobi, Squarefree};

/// Quadratic character of F_p as a lookup table.
#[derive(Clone, Debug)]
pub struct CharTable {
    pub p: u64,
    chi: Vec<i8>,
}

impl CharTable {
    pub fn new(p: u64) -> Self {
        let n = p as usize;
        let mut chi = vec![-1i8; n];
        chi[0] = 0;
        let mut s = 0u64;
        for y in 1..=(p - 1) / 2 {
            s += 2 * y - 1;
            while s >= p {
                s -= p;
            }
            chi[s as usize] = 1;
        }
        CharTable { p, chi }
    }

    #[inline]
    pub fn get(&self, v: u64) -> i8 {
        self.chi[v as usize]
    }

    #[inline]
    pub fn of(&self, v: i64) -> i8 {
        self.chi[v.rem_euclid(self.p as i64) as usize]
    }
}

fn require_odd_prime(p: u64) -> Result<()> {
    if p == 2 {
        return invalid("p = 2 is excluded; λ(2^k) = 0 must be inserted by the caller");
    }
    if !primes::is_prime(p) {
        return Err(crate::Error::NotPrime(p));
    }
    Ok(())
}

/// Legendre symbol (a/p) for an odd prime p.
pub fn legendre_symbol(a: i64, p: u64) -> Result<i8> {
    require_odd_prime(p)?;
    Ok(jacobi(a as i128, p))
}

/// The non-principal character modulo 4.
pub fn chi4(n: i64) -> i8 {
    match n.rem_euclid(4) {
        1 => 1,
        3 => -1,
        _ => 0,
    }
}

/// y² = x³ + ax + b.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CurveAB {
    pub a: i64,
    pub b: i64,
}

impl CurveAB {
    pub fn new(a: i64, b: i64) -> Result<Self> {
        let c = CurveAB { a, b };
        if c.discriminant() == 0 {
            return domain(format!("singular curve a={a}, b={b}"));
        }
        Ok(c)
    }

    /// −16(4a³ + 27b²).
    pub fn discriminant(&self) -> i128 {
        let a = self.a as i128;
        let b = self.b as i128;
        -16 * (4 * a * a * a + 27 * b * b)
    }

    pub fn is_good_at(&self, p: u64) -> bool {
        let p = p as i128;
        (4 * (self.a as i128).pow(3) + 27 * (self.b as i128).pow(2)).rem_euclid(p) != 0 && p != 2
    }
}

/// y² = x³ + tx² − (t+3)x + 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct WashingtonCurve {
    pub t: i64,
}

impl WashingtonCurve {
    pub fn new(t: i64) -> Self {
        WashingtonCurve { t }
    }

    /// t² + 3t + 9, always positive.
    pub fn disc_core(&self) -> i128 {
        let t = self.t as i128;
        t * t + 3 * t + 9
    }

    /// 2⁴(t²+3t+9)².
    pub fn discriminant(&self) -> i128 {
        16 * self.disc_core() * self.disc_core()
    }

    /// Coefficients (a2, a4, a6) of the cubic.
    pub fn cubic(&self) -> (i64, i64, i64) {
        (self.t, -(self.t + 3), 1)
    }

    pub fn is_good_at(&self, p: u64) -> bool {
        p != 2 && self.disc_core().rem_euclid(p as i128) != 0
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FrobeniusTrace {
    pub p: u64,
    pub a_p: i64,
}

impl FrobeniusTrace {
    pub fn lambda(&self) -> f64 {
        self.a_p as f64 / (self.p as f64).sqrt()
    }

    pub fn within_hasse(&self) -> bool {
        (self.a_p * self.a_p) as u64 <= 4 * self.p
    }
}

/// −Σ_x ((x³ + a2x² + a4x + a6)/p) by a forward-difference sweep.
pub fn legendre_sum_trace(a2: i64, a4: i64, a6: i64, chi: &CharTable) -> i64 {
    let p = chi.p;
    let m = |v: i64| v.rem_euclid(p as i64) as u64;
    let mut f = m(a6);
    let mut d1 = m(1 + a2 + a4);
    let mut d2 = m(6 + 2 * a2);
    let d3 = 6 % p;
    let mut sum = 0i64;
    for _ in 0..p {
        sum += chi.get(f) as i64;
        f += d1;
        if f >= p {
            f -= p;
        }
        d1 += d2;
        if d1 >= p {
            d1 -= p;
        }
        d2 += d3;
        if d2 >= p {
            d2 -= p;
        }
    }
    -sum
}

/// p + 1 − #E(F_p) where the affine points are counted by enumerating x and
/// looking up the number of square roots of the cubic's value.
pub fn point_count_trace(a2: i64, a4: i64, a6: i64, p: u64) -> i64 {
    let mut roots = vec![0u32; p as usize];
    for y in 0..p {
        roots[primes::mul_mod(y, y, p) as usize] += 1;
    }
    let r = |v: i64| v.rem_euclid(p as i64) as u64;
    let (a2, a4, a6) = (r(a2), r(a4), r(a6));
    let mut affine = 0u64;
    for x in 0..p {
        let x2 = primes::mul_mod(x, x, p);
        let x3 = primes::mul_mod(x2, x, p);
        let v = (x3 + primes::mul_mod(a2, x2, p) + primes::mul_mod(a4, x, p) + a6) % p;
        affine += roots[v as usize] as u64;
    }
    p as i64 + 1 - (affine as i64 + 1)
}

// Affine Weierstrass arithmetic over F_p for y² = x³ + a2x² + a4x + a6.
#[derive(Clone, Copy)]
struct FpCurve {
    p: u64,
    a2: u64,
    a4: u64,
}

type Pt = Option<(u64, u64)>;

impl FpCurve {
    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }

    fn inv(&self, a: u64) -> u64 {
        primes::inv_mod(a, self.p).expect("nonzero element")
    }

    fn neg(&self, q: Pt) -> Pt {
        q.map(|(x, y)| (x, if y == 0 { 0 } else { self.p - y }))
    }

    fn add(&self, u: Pt, v: Pt) -> Pt {
        let (x1, y1) = match u {
            None => return v,
            Some(q) => q,
        };
        let (x2, y2) = match v {
            None => return u,
            Some(q) => q,
        };
        let p = self.p;
        let lam = if x1 == x2 {
            if (y1 + y2) % p == 0 {
                return None;
            }
            let num = (3 * self.mul(x1, x1) + 2 * self.mul(self.a2, x1) + self.a4) % p;
            self.mul(num, self.inv(2 * y1 % p))
        } else {
            self.mul(self.sub(y2, y1), self.inv(self.sub(x2, x1)))
        };
        let x3 = self.sub(self.sub(self.sub(self.mul(lam, lam), self.a2), x1), x2);
        let y3 = self.sub(self.mul(lam, self.sub(x1, x3)), y1);
        Some((x3, y3))
    }

    fn scalar(&self, k: i64, q: Pt) -> Pt {
        let mut base = if k < 0 { self.neg(q) } else { q };
        let mut k = k.unsigned_abs();
        let mut acc = None;
        while k > 0 {
            if k & 1 == 1 {
                acc = self.add(acc, base);
            }
            base = self.add(base, base);
            k >>= 1;
        }
        acc
    }
}

/// Candidate traces a with |a| ≤ ⌊2√p⌋ and (p+1−a)·P = O, or `None` when the
/// point's order is too small for the baby-step table to be trusted.
fn bsgs_candidates(e: &FpCurve, pt: Pt) -> Option<Vec<i64>> {
    let p = e.p;
    let bound = primes::isqrt(4 * p) as i64;
    let m = ((2 * bound + 1) as f64).sqrt().ceil() as i64;
    let mut table: HashMap<u64, (i64, u64)> = HashMap::with_capacity(m as usize * 2);
    let mut cur = None;
    for j in 1..=m {
        cur = e.add(cur, pt);
        match cur {
            None => return None,
            Some((x, y)) => {
                if table.insert(x, (j, y)).is_some() {
                    return None;
                }
            }
        }
    }
    let q = e.scalar(p as i64 + 1, pt);
    let step = e.scalar(2 * m + 1, pt);
    let neg_step = e.neg(step);
    let mut c = -bound + m;
    let mut r = e.add(q, e.neg(e.scalar(c, pt)));
    let mut out = Vec::new();
    while c - m <= bound {
        match r {
            None => out.push(c),
            Some((x, y)) => {
                if let Some(&(j, yj)) = table.get(&x) {
                    if yj == y {
                        out.push(c + j);
                    } else {
                        out.push(c - j);
                    }
                }
            }
        }
        c += 2 * m + 1;
        r = e.add(r, neg_step);
    }
    out.retain(|a| a.abs() <= bound);
    Some(out)
}

/// Trace of Frobenius by Shanks–Mestre baby-step giant-step on the curve and
/// its quadratic twists; `None` if no point pins the trace down.
pub fn bsgs_trace(a2: i64, a4: i64, a6: i64, p: u64) -> Option<i64> {
    if p < 37 {
        return None;
    }
    let r = |v: i64| v.rem_euclid(p as i64) as u64;
    let (a2, a4, a6) = (r(a2), r(a4), r(a6));
    let f = |x: u64| {
        let x2 = x * x % p;
        (x2 * x % p + a2 * x2 % p + a4 * x % p + a6) % p
    };
    let mut candidates: Option<Vec<i64>> = None;
    let mut tries = 0;
    for x0 in 0..p {
        let d = f(x0);
        if d == 0 {
            continue;
        }
        tries += 1;
        if tries > 40 {
            break;
        }
        let sign = jacobi(d as i128, p) as i64;
        // (d·x0, d²) lies on Y² = X³ + d·a2·X² + d²·a4·X + d³·a6
        let d2 = d * d % p;
        let tw = FpCurve { p, a2: a2 * d % p, a4: a4 * d2 % p };
        let pt = Some((d * x0 % p, d2));
        match &mut candidates {
            None => {
                if let Some(c) = bsgs_candidates(&tw, pt) {
                    candidates = Some(c.into_iter().map(|a| a * sign).collect());
                }
            }
            Some(c) => {
                c.retain(|&a| tw.scalar(p as i64 + 1 - a * sign, pt).is_none());
            }
        }
        if let Some(c) = &candidates {
            if c.len() == 1 {
                let a = c[0];
                // two further independent confirmations
                let mut confirmed = 0;
                for x1 in (x0 + 1)..p {
                    let d = f(x1);
                    if d == 0 {
                        continue;
                    }
                    let sign = jacobi(d as i128, p) as i64;
                    let d2 = d * d % p;
                    let tw = FpCurve { p, a2: a2 * d % p, a4: a4 * d2 % p };
                    if tw.scalar(p as i64 + 1 - a * sign, Some((d * x1 % p, d2))).is_some() {
                        return None;
                    }
                    confirmed += 1;
                    if confirmed == 2 {
                        break;
                    }
                }
                return Some(a);
            }
            if c.is_empty() {
                return None;
            }
        }
    }
    None
}

const NAIVE_LIMIT: u64 = 3000;

fn generic_trace(a2: i64, a4: i64, a6: i64, p: u64, good: bool) -> i64 {
    if good && p > NAIVE_LIMIT {
        if let Some(a) = bsgs_trace(a2, a4, a6, p) {
            return a;
        }
    }
    legendre_sum_trace(a2, a4, a6, &CharTable::new(p))
}

/// a_p = −Σ_x ((x³+ax+b)/p).
pub fn frobenius_trace_ab(a: i64, b: i64, p: u64) -> Result<i64> {
    require_odd_prime(p)?;
    let good = CurveAB { a, b }.is_good_at(p);
    Ok(generic_trace(0, a, b, p, good))
}

/// a_p(E_t) = −Σ_x ((x³+tx²−(t+3)x+1)/p).
pub fn frobenius_trace_t(t: i64, p: u64) -> Result<i64> {
    require_odd_prime(p)?;
    let c = WashingtonCurve::new(t);
    let (a2, a4, a6) = c.cubic();
    Ok(generic_trace(a2, a4, a6, p, c.is_good_at(p)))
}

/// Traces a_t(p) for every residue t mod p.
///
/// Writing the cubic as t(x²−x) + (x³−3x+1), each x ∉ {0,1} contributes
/// χ(x²−x)·χ(t + s_x), so the sweep is a cyclic correlation evaluated by FFT.
pub fn washington_traces_all_t(p: u64) -> Result<Vec<i64>> {
    require_odd_prime(p)?;
    let chi = CharTable::new(p);
    if p < 64 {
        return Ok((0..p as i64).map(|t| legendre_sum_trace(t, -(t + 3), 1, &chi)).collect());
    }
    use rustfft::num_complex::Complex;
    use rustfft::FftPlanner;
    let n = p as usize;
    let mut w = vec![0f64; n];
    for x in 2..p {
        let ax = x * (x - 1) % p;
        let bx = (x * x % p * x % p + 1 + p * 3 - 3 * x % p) % p;
        let s = bx * primes::inv_mod(ax, p).unwrap() % p;
        w[s as usize] += chi.get(ax) as f64;
    }
    let mut planner = FftPlanner::<f64>::new();
    let fwd = planner.plan_fft_forward(n);
    let inv = planner.plan_fft_inverse(n);
    let mut wh: Vec<Complex<f64>> = w.iter().map(|&v| Complex::new(v, 0.0)).collect();
    let mut ch: Vec<Complex<f64>> = (0..n).map(|u| Complex::new(chi.get(u as u64) as f64, 0.0)).collect();
    fwd.process(&mut wh);
    fwd.process(&mut ch);
    let mut prod: Vec<Complex<f64>> = wh.iter().zip(&ch).map(|(a, b)| a.conj() * b).collect();
    inv.process(&mut prod);
    let base = -1 - chi.of(-1) as i64;
    let mut out = Vec::with_capacity(n);
    for c in prod {
        let v = c.re / n as f64;
        let r = v.round();
        if (v - r).abs() > 0.25 {
            return Ok((0..p as i64).map(|t| legendre_sum_trace(t, -(t + 3), 1, &chi)).collect());
        }
        out.push(base - r as i64);
    }
    Ok(out)
}

/// Membership in the all-curves family with parameter X and residues (r, t).
pub fn is_family1_member(a: i64, b: i64, x: u64, r: i64, t: i64) -> Result<bool> {
    check_residues(r, t)?;
    Ok(member_unchecked(a, b, x, r, t))
}

pub(crate) fn check_residues(r: i64, t: i64) -> Result<()> {
    if r.rem_euclid(3) == 0 || t.rem_euclid(2) == 0 {
        return invalid(format!("residues need gcd(r,3)=1 and gcd(t,2)=1, got r={r}, t={t}"));
    }
    Ok(())
}

fn member_unchecked(a: i64, b: i64, x: u64, r: i64, t: i64) -> bool {
    let aa = a.unsigned_abs() as u128;
    let bb = b.unsigned_abs() as u128;
    if aa * aa * aa > x as u128 || bb * bb > x as u128 {
        return false;
    }
    if (a - r).rem_euclid(6) != 0 || (b - t).rem_euclid(6) != 0 {
        return false;
    }
    if (CurveAB { a, b }).discriminant() == 0 {
        return false;
    }
    let mut p = 2u64;
    while (p as u128).pow(4) <= aa {
        if a % (p.pow(4) as i64) == 0 && (b as i128) % (p as i128).pow(6) == 0 {
            return false;
        }
        p += 1;
    }
    true
}

/// Members of the family in the order (|a|, sign of a, |b|, sign of b), with
/// positive values preceding negative ones.
pub fn enumerate_family1(x: u64, r: i64, t: i64) -> Result<impl Iterator<Item = CurveAB>> {
    check_residues(r, t)?;
    let amax = icbrt(x) as i64;
    let bmax = primes::isqrt(x) as i64;
    let signed = |v: i64| if v == 0 { vec![0] } else { vec![v, -v] };
    Ok((0..=amax)
        .flat_map(move |aa| signed(aa))
        .flat_map(move |a| (0..=bmax).flat_map(move |bb| signed(bb)).map(move |b| (a, b)))
        .filter(move |&(a, b)| member_unchecked(a, b, x, r, t))
        .map(|(a, b)| CurveAB { a, b }))
}

pub fn count_family1(x: u64, r: i64, t: i64) -> Result<usize> {
    Ok(enumerate_family1(x, r, t)?.count())
}

fn icbrt(x: u64) -> u64 {
    let mut c = (x as f64).cbrt() as u64;
    while (c as u128).pow(3) > x as u128 {
        c -= 1;
    }
    while ((c + 1) as u128).pow(3) <= x as u128 {
        c += 1;
    }
    c
}

/// Conductor of a Washington curve, with the metadata of how it was decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Conductor {
    pub value: u128,
    /// True only when t ≡ 1 (mod 12) and t²+3t+9 is provably squarefree.
    pub exact: bool,
    pub congruence_ok: bool,
    pub squarefree: Squarefree,
}

/// 2³(t²+3t+9)², guarded by t = 12u+1 and squarefreeness of 144u²+60u+13.
pub fn washington_conductor(t: i64) -> Conductor {
    let core = WashingtonCurve::new(t).disc_core() as u128;
    let congruence_ok = t.rem_euclid(12) == 1;
    let sf = primes::squarefree(core);
    Conductor {
        value: 8 * core * core,
        exact: congruence_ok && sf == Squarefree::Yes,
        congruence_ok,
        squarefree: sf,
    }
}
