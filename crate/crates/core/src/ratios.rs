//! Truncated Euler products for the arithmetic factors A(α,γ) and Ã(α,γ).
//!
//! Each local factor is divided by the local factors of the zeta quotient
//! that the product is normalized against, so factors are 1 + O(p^{−κ}) with
//! κ > 1 and the truncated product converges absolutely.
//!
//! Family 2 convention. The raw local factor has first-order part
//! (1+χ₄(p))(p^{−1−γ} − p^{−1−α}) + p^{−1−2γ} − p^{−1−α−γ}, which matches
//! ζ(1+2γ)ζ_K(1+γ)/(ζ(1+α+γ)ζ_K(1+α)) with ζ_K(s) = ζ(s)L(s,χ₄). We divide
//! by those local factors and put the leftover L(1+γ,χ₄)/L(1+α,χ₄) into Ã, so
//! that H̃ = Y₂·Ã with Y₂ = ζ(1+2γ)ζ(1+γ)/(ζ(1+α+γ)ζ(1+α)).

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{self, chi4};
use crate::averages::a3;
use crate::error::{domain, invalid, Error, Result};
use crate::hecke::{dim_cusp_forms, TraceTable};
use crate::primes;
use crate::special;
use crate::Family;

/// A pair of shifts (α, γ) with Re α, Re γ > −1/4.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ComplexShift {
    pub alpha: Complex64,
    pub gamma: Complex64,
}

impl ComplexShift {
    pub fn new(alpha: Complex64, gamma: Complex64) -> Result<Self> {
        if !(alpha.re > -0.25 && gamma.re > -0.25) {
            return domain(format!("shift ({alpha}, {gamma}) leaves Re > −1/4"));
        }
        Ok(ComplexShift { alpha, gamma })
    }

    pub fn diagonal(r: Complex64) -> Result<Self> {
        Self::new(r, r)
    }

    pub fn conj(&self) -> Self {
        ComplexShift { alpha: self.alpha.conj(), gamma: self.gamma.conj() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerProductValue {
    pub value: Complex64,
    pub prime_cutoff: u64,
    pub series_order: usize,
    pub tail_bound: f64,
}

fn pw(p: f64, z: Complex64) -> Complex64 {
    // p^{−z}
    (-z * p.ln()).exp()
}

/// Local factor of ζ(1+2γ)/ζ(1+α+γ) at p, inverted: (1−p^{−1−2γ})/(1−p^{−1−α−γ}).
fn renorm1(p: f64, s: &ComplexShift) -> Complex64 {
    (1.0 - pw(p, 1.0 + 2.0 * s.gamma)) / (1.0 - pw(p, 1.0 + s.alpha + s.gamma))
}

fn renorm2(p: u64, s: &ComplexShift) -> Complex64 {
    let pf = p as f64;
    let c = chi4(p as i64) as f64;
    let num = (1.0 - pw(pf, 1.0 + 2.0 * s.gamma)) * (1.0 - pw(pf, 1.0 + s.gamma)) * (1.0 - c * pw(pf, 1.0 + s.gamma));
    let den = (1.0 - pw(pf, 1.0 + s.alpha + s.gamma)) * (1.0 - pw(pf, 1.0 + s.alpha)) * (1.0 - c * pw(pf, 1.0 + s.alpha));
    num / den
}

static TRACE_CACHE: LazyLock<Mutex<HashMap<(u32, u64), Arc<TraceTable>>>> = LazyLock::new(Default::default);

fn cached_traces(jmax: u32, pmax: u64) -> Arc<TraceTable> {
    let mut cache = TRACE_CACHE.lock().unwrap();
    if let Some(t) = cache.iter().find(|((j, p), _)| *j >= jmax && *p >= pmax).map(|e| e.1.clone()) {
        return t;
    }
    let t = Arc::new(TraceTable::build(jmax, pmax));
    cache.insert((jmax, pmax), t.clone());
    t
}

/// Distribution of λ_t(p) over t mod p for the Washington family.
#[derive(Clone, Debug)]
struct PrimeHistogram {
    p: u64,
    bad: u64,
    /// (λ, multiplicity) for good t
    good: Vec<(f64, f64)>,
}

static HIST_CACHE: LazyLock<Mutex<HashMap<u64, Arc<PrimeHistogram>>>> = LazyLock::new(Default::default);

fn build_histogram(p: u64) -> Result<PrimeHistogram> {
    let traces = arith::washington_traces_all_t(p)?;
    let pi = p as i64;
    let mut counts: std::collections::BTreeMap<i64, u64> = Default::default();
    let mut bad = 0;
    for (t, a) in traces.into_iter().enumerate() {
        let t = t as i64;
        if (t * t + 3 * t + 9) % pi == 0 {
            bad += 1;
        } else {
            *counts.entry(a).or_default() += 1;
        }
    }
    let sp = (p as f64).sqrt();
    Ok(PrimeHistogram { p, bad, good: counts.into_iter().map(|(a, c)| (a as f64 / sp, c as f64)).collect() })
}

fn histograms(ps: &[u64]) -> Result<Vec<Arc<PrimeHistogram>>> {
    let missing: Vec<u64> = {
        let cache = HIST_CACHE.lock().unwrap();
        ps.iter().copied().filter(|p| !cache.contains_key(p)).collect()
    };
    let built: Vec<PrimeHistogram> = missing.par_iter().map(|&p| build_histogram(p)).collect::<Result<_>>()?;
    let mut cache = HIST_CACHE.lock().unwrap();
    for h in built {
        cache.insert(h.p, Arc::new(h));
    }
    Ok(ps.iter().map(|p| cache[p].clone()).collect())
}

/// Q̃_t(p^{m1}, p^{m2}) for m1 ≤ M, m2 ≤ 2 in floating point.
fn family2_moments(h: &PrimeHistogram, m: usize) -> Vec<[f64; 3]> {
    let pf = h.p as f64;
    let mut q = vec![[0.0; 3]; m + 1];
    q[0] = [1.0, 0.0, (pf - h.bad as f64) / pf];
    for &(lam, count) in &h.good {
        let w = count / pf;
        q[0][1] -= w * lam;
        let (mut prev, mut cur) = (0.0, 1.0);
        for row in q.iter_mut().skip(1) {
            (prev, cur) = (cur, lam * cur - prev);
            row[0] += w * cur;
            row[1] -= w * cur * lam;
            row[2] += w * cur;
        }
    }
    // bad t contribute only at m1 = m2 = 0
    q
}

/// Precomputed per-prime data for one family at a given (P, M).
pub struct EulerProduct {
    family: Family,
    cutoff: u64,
    order: usize,
    primes: Vec<u64>,
    traces: Option<Arc<TraceTable>>,
    hist: Vec<Arc<PrimeHistogram>>,
    moments: Vec<Vec<[f64; 3]>>,
    r: i64,
    t: i64,
}

impl EulerProduct {
    /// Family-1 products use the residues (r, t) = (1, 1); see [`Self::with_residues`].
    pub fn new(family: Family, cutoff: u64, order: usize) -> Result<Self> {
        Self::with_residues(family, cutoff, order, 1, 1)
    }

    pub fn with_residues(family: Family, cutoff: u64, order: usize, r: i64, t: i64) -> Result<Self> {
        if cutoff < 5 {
            return invalid(format!("prime cutoff must be at least 5, got {cutoff}"));
        }
        if cutoff > 200_000 {
            return invalid(format!("prime cutoff above 2·10⁵ is not supported, got {cutoff}"));
        }
        if order > 40 {
            return invalid(format!("series order must be at most 40, got {order}"));
        }
        let primes = primes::sieve(cutoff);
        match family {
            Family::AllCurves => {
                if order < 10 {
                    return invalid(format!("series order must be at least 10, got {order}"));
                }
                arith::check_residues(r, t)?;
                let traces = cached_traces(order as u32 + 2, cutoff);
                Ok(EulerProduct { family, cutoff, order, primes, traces: Some(traces), hist: vec![], moments: vec![], r, t })
            }
            Family::Washington => {
                if order < 2 {
                    return invalid(format!("series order must be at least 2, got {order}"));
                }
                let odd: Vec<u64> = primes.iter().copied().filter(|&p| p > 2).collect();
                let hist = histograms(&odd)?;
                let moments = hist.iter().map(|h| family2_moments(h, order)).collect();
                Ok(EulerProduct { family, cutoff, order, primes, traces: None, hist, moments, r, t })
            }
        }
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// Renormalized local factor at a prime p ≤ P.
    pub fn factor(&self, p: u64, s: &ComplexShift) -> Result<Complex64> {
        if p > self.cutoff || !primes::is_prime(p) {
            return invalid(format!("{p} is not a prime ≤ {}", self.cutoff));
        }
        Ok(self.factor_with_tail(p, s).0)
    }

    fn factor_with_tail(&self, p: u64, s: &ComplexShift) -> (Complex64, f64) {
        match self.family {
            Family::AllCurves => {
                let pf = p as f64;
                if p <= 3 {
                    let raw = euler_factor_23(p, s, self.r, self.t).expect("p ∈ {2, 3}");
                    return (raw * renorm1(pf, s), 0.0);
                }
                family1_factor(p, s, self.traces.as_ref().unwrap(), self.order)
            }
            Family::Washington => {
                if p == 2 {
                    return (renorm2(2, s), 0.0);
                }
                let idx = self.primes.binary_search(&p).unwrap() - 1;
                family2_factor(&self.hist[idx], &self.moments[idx], s, self.order)
            }
        }
    }

    /// The truncated product with its tail estimate.
    pub fn value(&self, s: &ComplexShift) -> Result<EulerProductValue> {
        let parts: Vec<(Complex64, f64)> = self.primes.par_iter().map(|&p| self.factor_with_tail(p, s)).collect();
        let mut value = Complex64::new(1.0, 0.0);
        let mut series_tail = 0.0;
        for (f, t) in &parts {
            value *= f;
            series_tail += t;
        }
        let kappa = match self.family {
            Family::AllCurves => 2.0,
            Family::Washington => 1.5,
        } + 2.0 * 0f64.min(s.alpha.re).min(s.gamma.re);
        if self.family == Family::Washington {
            let l = special::dirichlet_l_chi4(1.0 + s.gamma)?.value() / special::dirichlet_l_chi4(1.0 + s.alpha)?.value();
            value *= l;
        }
        // c = max |f_p − 1|·p^κ over (P/2, P]
        let c = self
            .primes
            .iter()
            .zip(&parts)
            .filter(|(&p, _)| 2 * p > self.cutoff)
            .map(|(&p, (f, _))| (f - 1.0).norm() * (p as f64).powf(kappa))
            .fold(0.0, f64::max);
        let pf = self.cutoff as f64;
        // Σ_{p>P} p^{−κ} ≤ ∫_P^∞ dx/(x^κ log x) ≤ P^{1−κ}/((κ−1) log P)
        let prime_tail = c * pf.powf(1.0 - kappa) / ((kappa - 1.0) * pf.ln());
        let rounding = self.primes.len() as f64 * 8.0 * f64::EPSILON * value.norm();
        let tail_bound = value.norm() * ((prime_tail + series_tail).exp() - 1.0) + rounding;
        Ok(EulerProductValue { value, prime_cutoff: self.cutoff, series_order: self.order, tail_bound })
    }

    /// ∂A/∂α at α = γ = r.
    pub fn a_alpha(&self, r: Complex64) -> Result<Derivative> {
        self.partial(r, Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
    }

    /// ∂A/∂γ at α = γ = r.
    pub fn a_gamma(&self, r: Complex64) -> Result<Derivative> {
        self.partial(r, Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0))
    }

    /// Directional derivative of α ↦ A(r + h·da, r + h·dg) at h = 0.
    pub fn partial(&self, r: Complex64, da: Complex64, dg: Complex64) -> Result<Derivative> {
        self.partial_at(r, r, da, dg)
    }

    pub fn partial_at(&self, alpha: Complex64, gamma: Complex64, da: Complex64, dg: Complex64) -> Result<Derivative> {
        let f = |h: f64| -> Result<Complex64> {
            let s = ComplexShift::new(alpha + h * da, gamma + h * dg)?;
            Ok(self.value(&s)?.value)
        };
        richardson(|h| Ok((f(h)? - f(-h)?) / (2.0 * h)), 2)
    }

    /// A_αα + A_αγ at α = γ = r.
    pub fn a_second(&self, r: Complex64) -> Result<Derivative> {
        let one = Complex64::new(1.0, 0.0);
        let f = |a: f64, g: f64| -> Result<Complex64> {
            Ok(self.value(&ComplexShift::new(r + a * one, r + g * one)?)?.value)
        };
        let center = f(0.0, 0.0)?;
        richardson(
            |h| {
                let aa = (f(h, 0.0)? - 2.0 * center + f(-h, 0.0)?) / (h * h);
                let ag = (f(h, h)? - f(h, -h)? - f(-h, h)? + f(-h, -h)?) / (4.0 * h * h);
                Ok(aa + ag)
            },
            2,
        )
    }
}

/// A finite-difference derivative with its step-convergence estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative {
    pub value: Complex64,
    pub err: f64,
    /// false when successive differences failed to shrink along the ladder
    pub converged: bool,
}

const STEPS: [f64; 3] = [1e-3, 5e-4, 2.5e-4];

fn richardson(mut d: impl FnMut(f64) -> Result<Complex64>, order: i32) -> Result<Derivative> {
    let v: Vec<Complex64> = STEPS.iter().map(|&h| d(h)).collect::<Result<_>>()?;
    let k1 = 2f64.powi(order);
    let r1a = (k1 * v[1] - v[0]) / (k1 - 1.0);
    let r1b = (k1 * v[2] - v[1]) / (k1 - 1.0);
    let k2 = 2f64.powi(order + 2);
    let r2 = (k2 * r1b - r1a) / (k2 - 1.0);
    let converged = (v[2] - v[1]).norm() <= (v[1] - v[0]).norm() || (v[1] - v[0]).norm() < 1e-13;
    Ok(Derivative { value: r2, err: (r2 - r1b).norm(), converged })
}

fn family1_factor(p: u64, s: &ComplexShift, traces: &TraceTable, m: usize) -> (Complex64, f64) {
    let pf = p as f64;
    let (a, g) = (s.alpha, s.gamma);
    let d = 1.0 - (pf.powi(9) - 1.0) / (pf.powi(10) - 1.0);
    let mut br = pw(pf, 1.0 + 2.0 * g) - pw(pf, 1.0 + a + g)
        + (pw(pf, 2.0 + a + g) - pw(pf, 2.0 + 2.0 * g)) / (1.0 / pw(pf, 2.0 + 2.0 * a) - 1.0);
    // (p^{1+2α+γ} − p^{1+α+2γ} + p^γ − p^α)/p^{3/2+α+2γ}
    let coef = pw(pf, 0.5 - a) - pw(pf, 0.5 - g) + pw(pf, 1.5 + a + g) - pw(pf, 1.5 + 2.0 * g);
    let x = pw(pf, 0.5 + a);
    let mut sum = Complex64::new(0.0, 0.0);
    let mut xp = x.powi(10);
    for m1 in (10..=m).step_by(2) {
        let tr = traces.normalized(m1 as u32 + 2, p).expect("trace table covers the order");
        sum += tr * xp;
        xp *= x * x;
    }
    br += coef * sum;
    // remainder with |Tr*_j| ≤ 2 dim S_j
    let mut rem = 0.0;
    let xn = x.norm();
    let mut m1 = if m % 2 == 0 { m + 2 } else { m + 1 };
    let mut xm = xn.powi(m1 as i32);
    while xm > 1e-30 && m1 < 400 {
        rem += 2.0 * dim_cusp_forms(m1 as u32 + 2) as f64 * xm;
        m1 += 2;
        xm *= xn * xn;
    }
    ((1.0 + d * br) * renorm1(pf, s), d * coef.norm() * rem * 2.0)
}

fn family2_factor(h: &PrimeHistogram, q: &[[f64; 3]], s: &ComplexShift, m: usize) -> (Complex64, f64) {
    let pf = h.p as f64;
    let x = pw(pf, 0.5 + s.alpha);
    let y = pw(pf, 0.5 + s.gamma);
    let xn = x.norm();
    let rem = (m as f64 + 2.0) * xn.powi(m as i32 + 1) / (1.0 - xn).powi(2) * (1.0 + y.norm()).powi(2);
    if rem > 1e-17 {
        // exact geometric sums over the histogram
        let mut acc = Complex64::new(h.bad as f64, 0.0);
        for &(lam, count) in &h.good {
            acc += count * (1.0 - lam * y + y * y) / (1.0 - lam * x + x * x);
        }
        return (acc / pf * renorm2(h.p, s), 0.0);
    }
    let mut raw = Complex64::new(0.0, 0.0);
    let mut xp = Complex64::new(1.0, 0.0);
    for row in q.iter().take(m + 1) {
        raw += xp * (row[0] + y * (row[1] + y * row[2]));
        xp *= x;
    }
    (raw * renorm2(h.p, s), rem)
}

/// Renormalized family-1 local factor at p > 3, trace sum truncated at m1 = M.
pub fn euler_factor_family1(p: u64, s: &ComplexShift, traces: &TraceTable, m: usize) -> Result<Complex64> {
    if p <= 3 || !primes::is_prime(p) {
        return invalid(format!("p must be a prime above 3, got {p}"));
    }
    if m < 10 {
        return invalid(format!("series order must be at least 10, got {m}"));
    }
    if traces.normalized(m as u32 + 2, p).is_none() && traces.normalized(m as u32 + 1, p).is_none() {
        return invalid(format!("trace table lacks weight {} at p = {p}", m + 2));
    }
    Ok(family1_factor(p, s, traces, m).0)
}

/// Raw E_2, E_3 for the family with residues (r, t) mod 6.
pub fn euler_factor_23(p: u64, s: &ComplexShift, r: i64, t: i64) -> Result<Complex64> {
    arith::check_residues(r, t)?;
    match p {
        2 => Ok(Complex64::new(1.0, 0.0)),
        3 => {
            let lam = a3(r, t) as f64 / 3f64.sqrt();
            let x = pw(3.0, 0.5 + s.alpha);
            let y = pw(3.0, 0.5 + s.gamma);
            Ok((1.0 - lam * y + y * y) / (1.0 - lam * x + x * x))
        }
        _ => invalid(format!("p must be 2 or 3, got {p}")),
    }
}

/// Renormalized family-2 local factor at an odd prime.
pub fn euler_factor_family2(p: u64, s: &ComplexShift, m: usize) -> Result<Complex64> {
    if !primes::is_prime(p) {
        return invalid(format!("{p} is not prime"));
    }
    if p == 2 {
        return Ok(renorm2(2, s));
    }
    let h = histograms(&[p])?.pop().unwrap();
    let q = family2_moments(&h, m);
    Ok(family2_factor(&h, &q, s, m).0)
}

pub fn a_family1(s: &ComplexShift, cutoff: u64, order: usize) -> Result<EulerProductValue> {
    EulerProduct::new(Family::AllCurves, cutoff, order)?.value(s)
}

pub fn a_family2(s: &ComplexShift, cutoff: u64, order: usize) -> Result<EulerProductValue> {
    EulerProduct::new(Family::Washington, cutoff, order)?.value(s)
}

/// ζ(1+x) written as (1 + x·R(x))/x.
fn zeta1_numer(x: Complex64) -> Result<Complex64> {
    let (r, _) = special::zeta_regular(x)?;
    Ok(1.0 + x * r.value())
}

fn check_pole(z: Complex64, what: &str) -> Result<()> {
    if z.norm() < 1e-12 {
        return Err(Error::Domain(format!("{what} sits on the pole of ζ(1+·)")));
    }
    Ok(())
}

/// Y(α,γ) = ζ(1+2γ)/ζ(1+α+γ).
pub fn y_family1(s: &ComplexShift) -> Result<Complex64> {
    let (a, g) = (s.alpha, s.gamma);
    check_pole(g, "γ")?;
    Ok((a + g) * zeta1_numer(2.0 * g)? / (2.0 * g * zeta1_numer(a + g)?))
}

/// Y₂(α,γ) = ζ(1+2γ)ζ(1+γ)/(ζ(1+α+γ)ζ(1+α)).
pub fn y_family2(s: &ComplexShift) -> Result<Complex64> {
    let (a, g) = (s.alpha, s.gamma);
    check_pole(g, "γ")?;
    check_pole(a, "α")?;
    let first = y_family1(s)?;
    Ok(first * a * zeta1_numer(g)? / (g * zeta1_numer(a)?))
}

/// A_α(r, r) for either family.
pub fn a_alpha_derivative(family: Family, r: Complex64, cutoff: u64, order: usize) -> Result<Derivative> {
    EulerProduct::new(family, cutoff, order)?.a_alpha(r)
}
