//! L-functions of Washington curves at desk scale: coefficients, a smoothed
//! approximate functional equation, critical-line zeros and empirical
//! one-level sums.
//!
//! With q = √N/2π the completed function is Λ(s) = q^s Γ(s+½) L(s) and
//! Λ(s) = ω Λ(1−s). For any entire G with G(0) = 1 and Gaussian decay on
//! vertical lines,
//!
//! Λ(s) = Σ λ(n) F(s, n; Y, G(u)) + ω Σ λ(n) F(1−s, n; 1/Y, G(−u)),
//! F(s, n; Y, G) = (1/2πi) ∫_(c) q^{s+u} Γ(s+½+u) n^{−s−u} Y^u G(u) du/u.
//!
//! Here G(u) = exp(u²/κ + iβu). The linear term β = −arg(s+½) cancels the
//! phase growth of Γ along the contour, so nothing is lost to cancellation
//! at larger heights. The contour integral is a trapezoid sum on a uniform
//! grid, which turns the inner sum over nodes into a polynomial in
//! n^{−ih} evaluated by Horner's rule.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{self, washington_conductor, Conductor, WashingtonCurve};
use crate::density::TestFunction;
use crate::error::{invalid, Error, Result};
use crate::primes;
use crate::special;

const KAPPA: f64 = 64.0;
const CONTOUR_RE: f64 = 1.5;
const STEP: f64 = 0.2;
/// Nodes are dropped once the integrand is e^{−40} below the size of Λ.
const LOG_DROP: f64 = 40.0;
/// Table sizing: n/(qY) up to max(CUT_SMALL, CUT_RATIO·|s+½|) covers the
/// adaptive cut made in the sum itself.
const CUT_SMALL: f64 = 120.0;
const CUT_RATIO: f64 = 12.0;
pub const MAX_CONDUCTOR: f64 = 1e6;
pub const MAX_HEIGHT: f64 = 30.0;

/// λ(n) = a(n)/√n for 1 ≤ n ≤ n_max, with λ(0) = 0.
///
/// a_p = 0 at 2 and at the odd primes dividing t²+3t+9 (additive reduction
/// when that number is squarefree); Hecke recursion at the good primes.
pub fn coefficients(curve: WashingtonCurve, n_max: usize) -> Result<Vec<f64>> {
    if n_max == 0 || n_max > 1_000_000 {
        return invalid(format!("n_max must lie in [1, 10⁶], got {n_max}"));
    }
    let spf = primes::smallest_factor_table(n_max);
    let ps: Vec<u64> = primes::sieve(n_max as u64);
    let ap: Vec<i64> = ps
        .par_iter()
        .map(|&p| {
            if curve.is_good_at(p) {
                arith::frobenius_trace_t(curve.t, p)
            } else {
                Ok(0)
            }
        })
        .collect::<Result<_>>()?;
    let mut lam = vec![0f64; n_max + 1];
    lam[1] = 1.0;
    for (&p, &a) in ps.iter().zip(&ap) {
        lam[p as usize] = a as f64 / (p as f64).sqrt();
    }
    for n in 2..=n_max {
        let p = spf[n] as usize;
        if p == n {
            continue;
        }
        let m = n / p;
        if m % p != 0 {
            lam[n] = lam[p] * lam[m];
            continue;
        }
        let mut pe = p;
        while n % (pe * p) == 0 {
            pe *= p;
        }
        lam[n] = if pe == n {
            if curve.is_good_at(p as u64) {
                lam[p] * lam[m] - lam[m / p]
            } else {
                0.0
            }
        } else {
            lam[pe] * lam[n / pe]
        };
    }
    Ok(lam)
}

/// The Dirichlet series of a Washington curve together with its functional
/// equation data.
#[derive(Clone, Debug)]
pub struct LSeries {
    pub curve: WashingtonCurve,
    pub conductor: Conductor,
    pub root_number: i8,
    lambda: Vec<f64>,
    log_n: Vec<f64>,
    q: f64,
}

impl LSeries {
    /// Requires the conductor to be provably 2³(t²+3t+9)².
    pub fn new(curve: WashingtonCurve, n_max: usize) -> Result<Self> {
        let c = washington_conductor(curve.t);
        if !c.exact {
            return invalid(format!(
                "conductor of t = {} is not guaranteed (t ≢ 1 mod 12 or t²+3t+9 not squarefree)",
                curve.t
            ));
        }
        Self::build(curve, c, n_max)
    }

    /// Uses 2³(t²+3t+9)² as a candidate conductor, to be confirmed by
    /// [`LSeries::fe_residual`]. Still requires t²+3t+9 squarefree.
    pub fn with_candidate_conductor(curve: WashingtonCurve, n_max: usize) -> Result<Self> {
        let c = washington_conductor(curve.t);
        if c.squarefree != primes::Squarefree::Yes {
            return invalid(format!("t²+3t+9 is not known squarefree for t = {}", curve.t));
        }
        Self::build(curve, c, n_max)
    }

    fn build(curve: WashingtonCurve, conductor: Conductor, n_max: usize) -> Result<Self> {
        let n = conductor.value as f64;
        if n > MAX_CONDUCTOR {
            return invalid(format!("conductor {n} exceeds 10⁶"));
        }
        let lambda = coefficients(curve, n_max)?;
        let log_n = (0..=n_max).map(|k| if k == 0 { 0.0 } else { (k as f64).ln() }).collect();
        Ok(LSeries { curve, conductor, root_number: -1, lambda, log_n, q: n.sqrt() / (2.0 * PI) })
    }

    /// Table length sufficient for heights up to `height` and balance
    /// parameters in [1/y_max, y_max].
    pub fn n_max_for(conductor: f64, height: f64, y_max: f64) -> usize {
        let q = conductor.sqrt() / (2.0 * PI);
        let a = Complex64::new(1.0, height).norm();
        (q * y_max * CUT_SMALL.max(CUT_RATIO * a)).ceil() as usize + 1
    }

    /// Convenience constructor sized for [`MAX_HEIGHT`]-limited zero searches
    /// up to `height` with Y ∈ [1/1.3, 1.3].
    pub fn for_height(curve: WashingtonCurve, height: f64, candidate: bool) -> Result<Self> {
        let n = washington_conductor(curve.t).value as f64;
        let n_max = Self::n_max_for(n.min(MAX_CONDUCTOR), height + 1.0, 1.3);
        if candidate {
            Self::with_candidate_conductor(curve, n_max)
        } else {
            Self::new(curve, n_max)
        }
    }

    pub fn lambda(&self) -> &[f64] {
        &self.lambda
    }

    pub fn n_max(&self) -> usize {
        self.lambda.len() - 1
    }

    /// √N/2π.
    pub fn q(&self) -> f64 {
        self.q
    }

    /// Λ(s) with the balance parameter Y = 1.
    pub fn completed_l(&self, s: Complex64) -> Result<Complex64> {
        self.completed_l_with(s, 1.0)
    }

    /// Λ(s) with balance parameter Y. Λ does not depend on Y when N and ω are
    /// right, which makes Y a consistency check.
    pub fn completed_l_with(&self, s: Complex64, y: f64) -> Result<Complex64> {
        if !(y > 0.0 && y.is_finite()) {
            return invalid(format!("balance parameter must be positive, got {y}"));
        }
        if !(s.re > -0.5 && s.re < 1.5) || s.im.abs() > MAX_HEIGHT + 1.0 {
            return invalid(format!("s = {s} is outside the supported window"));
        }
        let beta = -(s + 0.5).arg();
        let scale = self.log_scale(s);
        let first = self.half(s, y, beta, scale)?;
        let dual = self.half(Complex64::new(1.0, 0.0) - s, 1.0 / y, -beta, scale)?;
        Ok(first + self.root_number as f64 * dual)
    }

    /// log|q^s Γ(s+½)|, the natural size of Λ(s).
    pub fn log_scale(&self, s: Complex64) -> f64 {
        s.re * self.q.ln() + special::log_gamma(s + 0.5).map(|v| v.value().re).unwrap_or(0.0)
    }

    fn half(&self, s: Complex64, y: f64, beta: f64, log_ref: f64) -> Result<Complex64> {
        let a = s + 0.5;
        let (lq, ly) = (self.q.ln(), y.ln());
        let i = Complex64::new(0.0, 1.0);
        let log_node = |yy: f64| -> Result<Complex64> {
            let u = Complex64::new(CONTOUR_RE, yy);
            let lg = special::log_gamma(a + u)?.value();
            Ok((s + u) * lq + lg + u * u / KAPPA + i * beta * u + u * ly - u.ln())
        };
        // walk outwards from the real axis until the nodes are negligible
        let walk = |dir: i64| -> Result<i64> {
            let mut k = 0i64;
            let mut prev = log_node(0.0)?.re;
            loop {
                k += dir;
                let cur = log_node(k as f64 * STEP)?.re;
                if cur < log_ref - LOG_DROP && cur < prev {
                    return Ok(k);
                }
                if k.abs() > 20_000 {
                    return Err(Error::NoConvergence(format!("contour for s = {s} does not decay")));
                }
                prev = cur;
            }
        };
        let (k_lo, k_hi) = (walk(-1)?, walk(1)?);
        let y_lo = k_lo as f64 * STEP;
        let nodes: Vec<Complex64> = (k_lo..=k_hi)
            .map(|k| log_node(k as f64 * STEP).map(|l| l.exp() * (STEP / (2.0 * PI))))
            .collect::<Result<_>>()?;
        let shift = s + Complex64::new(CONTOUR_RE, y_lo);
        let term = |ln: f64| -> Complex64 {
            let w = Complex64::new(0.0, -STEP * ln).exp();
            let mut acc = Complex64::new(0.0, 0.0);
            for g in nodes.iter().rev() {
                acc = acc * w + g;
            }
            (-shift * ln).exp() * acc
        };
        // The weight is smooth in n: scan it geometrically past n = qY until
        // n·|weight| has stayed below 10⁻¹⁵ of |Λ| for a factor 2. Values at
        // the rounding level of the node sum are not counted as hits.
        let floor = 1e-15 * log_ref.exp();
        let node_mass: f64 = nodes.iter().map(|g| g.norm()).sum();
        let mut n = (self.q * y).max(1.0);
        let mut last_hit = n;
        while n < 2.0 * last_hit {
            let ln = n.ln();
            let v = term(ln).norm();
            let noise = 1e-13 * node_mass * (-shift.re * ln).exp();
            if v * n >= floor && v > noise {
                last_hit = n;
            }
            n *= 1.02;
            if n > 1e9 {
                return Err(Error::NoConvergence(format!("smoothed weight for s = {s} does not decay")));
            }
        }
        let needed = (last_hit * 1.02).ceil() as usize;
        if needed > self.n_max() {
            return Err(Error::InsufficientTerms { needed, available: self.n_max() });
        }
        let mut total = Complex64::new(0.0, 0.0);
        for n in 1..=needed {
            let lam = self.lambda[n];
            if lam == 0.0 {
                continue;
            }
            total += lam * term(self.log_n[n]);
        }
        Ok(total)
    }

    /// |Λ_Y(s) − Λ_{Y′}(s)| and the same divided by |q^s Γ(s+½)|.
    pub fn fe_residual(&self, s: Complex64, y1: f64, y2: f64) -> Result<(f64, f64)> {
        let d = (self.completed_l_with(s, y1)? - self.completed_l_with(s, y2)?).norm();
        Ok((d, d / self.log_scale(s).exp()))
    }

    /// The real function iΛ(½+it)/|q^{½+it}Γ(1+it)|, with the size of the
    /// discarded imaginary part.
    pub fn hardy_z(&self, t: f64) -> Result<(f64, f64)> {
        let s = Complex64::new(0.5, t);
        let v = self.completed_l(s)? * Complex64::new(0.0, 1.0) * (-self.log_scale(s)).exp();
        Ok((v.re, v.im.abs()))
    }

    /// Λ^{(k)}(½) for k = 0..=kmax by a Cauchy integral on |s−½| = 1/4.
    pub fn central_derivatives(&self, kmax: usize) -> Result<Vec<f64>> {
        const M: usize = 32;
        const R: f64 = 0.25;
        let vals: Vec<Complex64> = (0..M)
            .into_par_iter()
            .map(|j| {
                let th = 2.0 * PI * j as f64 / M as f64;
                self.completed_l(Complex64::new(0.5, 0.0) + Complex64::from_polar(R, th))
            })
            .collect::<Result<_>>()?;
        let mut out = Vec::with_capacity(kmax + 1);
        let mut fact = 1.0;
        for k in 0..=kmax {
            if k > 0 {
                fact *= k as f64;
            }
            let mut acc = Complex64::new(0.0, 0.0);
            for (j, v) in vals.iter().enumerate() {
                acc += v * Complex64::from_polar(1.0, -2.0 * PI * (k * j) as f64 / M as f64);
            }
            out.push(acc.re * fact / (M as f64 * R.powi(k as i32)));
        }
        Ok(out)
    }
}

/// Riemann–von Mangoldt main term θ(T)/π, θ(T) = T log q + arg Γ(1+iT).
pub fn zero_count_estimate(q: f64, height: f64) -> f64 {
    let lg = special::log_gamma(Complex64::new(1.0, height)).map(|v| v.value().im).unwrap_or(0.0);
    (height * q.ln() + lg) / PI
}

/// Zeros of Λ on the critical line.
#[derive(Clone, Debug, PartialEq)]
pub struct ZeroList {
    pub t: i64,
    pub conductor: u128,
    /// search height T
    pub height: f64,
    /// ordinates 0 < γ ≤ T, ascending
    pub ordinates: Vec<f64>,
    /// γ·L/π with L = log(√N/2π)
    pub scaled: Vec<f64>,
    pub central_multiplicity: u32,
    /// Λ^{(k)}(½), k = 0..=3
    pub central_derivatives: Vec<f64>,
    /// θ(T)/π − m/2
    pub count_estimate: f64,
    /// worst |Im| of the rotated, normalized values seen during the scan
    pub max_imag_residual: f64,
    pub warnings: Vec<String>,
}

impl ZeroList {
    pub fn count_in(&self, lo: f64, hi: f64) -> usize {
        self.ordinates.iter().filter(|&&g| g > lo && g <= hi).count()
    }
}

/// Order of vanishing at ½: first k with |Λ^{(k)}(½)| > 10⁻³. Lower
/// derivatives between 10⁻⁸ and 10⁻³ make the decision ambiguous.
pub fn central_order(d: &[f64]) -> (u32, bool) {
    let mut ambiguous = false;
    for (k, v) in d.iter().enumerate() {
        if v.abs() > 1e-3 {
            return (k as u32, ambiguous);
        }
        if v.abs() >= 1e-8 {
            ambiguous = true;
        }
    }
    (d.len() as u32, true)
}

/// Sign changes of the rotated Λ on a grid of step 1/(8·density), refined
/// by bisection to 10⁻⁸. A count more than 2 away from the estimate halves
/// the step once before it is reported.
pub fn find_zeros(ls: &LSeries, height: f64) -> Result<ZeroList> {
    if !(height > 0.0 && height <= MAX_HEIGHT) {
        return invalid(format!("height must lie in (0, {MAX_HEIGHT}], got {height}"));
    }
    let derivs = ls.central_derivatives(3)?;
    let (m, ambiguous) = central_order(&derivs);
    let mut warnings = Vec::new();
    if ambiguous {
        warnings.push(format!("central order of vanishing ambiguous: derivatives {derivs:?}"));
    }
    let estimate = zero_count_estimate(ls.q, height) - m as f64 / 2.0;
    let density = (ls.q * height.max(1.0)).ln() / PI;
    let mut step = 1.0 / (8.0 * density.max(0.5));
    let mut attempt = 0;
    loop {
        let (zeros, resid) = scan(ls, height, step)?;
        let off = (zeros.len() as f64 - estimate).abs();
        if off <= 2.0 || attempt == 1 {
            if off > 2.0 {
                warnings.push(format!(
                    "found {} zeros on (0, {height}] against an estimate of {estimate:.2}",
                    zeros.len()
                ));
            }
            let l = ls.q.ln();
            return Ok(ZeroList {
                t: ls.curve.t,
                conductor: ls.conductor.value,
                height,
                scaled: zeros.iter().map(|g| g * l / PI).collect(),
                ordinates: zeros,
                central_multiplicity: m,
                central_derivatives: derivs,
                count_estimate: estimate,
                max_imag_residual: resid,
                warnings,
            });
        }
        attempt += 1;
        step /= 2.0;
    }
}

fn scan(ls: &LSeries, height: f64, step: f64) -> Result<(Vec<f64>, f64)> {
    let n = (height / step).ceil() as usize;
    let grid: Vec<f64> = (1..=n).map(|k| (k as f64 * step).min(height)).collect();
    let vals: Vec<(f64, f64)> = grid.par_iter().map(|&t| ls.hardy_z(t)).collect::<Result<_>>()?;
    let mut resid = vals.iter().map(|v| v.1).fold(0.0, f64::max);
    let mut zeros = Vec::new();
    for k in 1..grid.len() {
        let (mut lo, mut hi) = (grid[k - 1], grid[k]);
        let (mut flo, fhi) = (vals[k - 1].0, vals[k].0);
        if flo == 0.0 {
            zeros.push(lo);
            continue;
        }
        if flo * fhi > 0.0 {
            continue;
        }
        while hi - lo > 1e-8 {
            let mid = 0.5 * (lo + hi);
            let (fm, r) = ls.hardy_z(mid)?;
            resid = resid.max(r);
            if fm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if (fm > 0.0) == (flo > 0.0) {
                lo = mid;
                flo = fm;
            } else {
                hi = mid;
            }
        }
        zeros.push(0.5 * (lo + hi));
    }
    Ok((zeros, resid))
}

/// Height T with ψ(TL/π) < 10⁻⁶ beyond it, for L = log(√X/2π).
pub fn required_height(tf: &TestFunction, x: f64) -> Result<f64> {
    let l = (x.sqrt() / (2.0 * PI)).ln();
    if !(l > 0.0) {
        return invalid(format!("X = {x} gives a non-positive scale"));
    }
    let mut tau = 0.5;
    while tf.psi(tau) >= 1e-6 || tf.psi(tau * 1.5) >= 1e-6 {
        tau *= 1.1;
        if tau > 1e6 {
            break;
        }
    }
    Ok(tau * PI / l)
}

/// One curve's share of the empirical one-level sum.
#[derive(Clone, Debug, PartialEq)]
pub struct CurveContribution {
    pub t: i64,
    pub conductor: u128,
    pub central: f64,
    pub off_central: f64,
}

impl CurveContribution {
    pub fn total(&self) -> f64 {
        self.central + self.off_central
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EmpiricalDensity {
    pub x: f64,
    pub l: f64,
    pub curves: Vec<CurveContribution>,
    pub mean_central: f64,
    pub mean_off_central: f64,
}

impl EmpiricalDensity {
    pub fn mean(&self) -> f64 {
        self.mean_central + self.mean_off_central
    }
}

/// Average over curves of Σ_γ ψ(γL/π), L = log(√X/2π), with the central
/// zero counted by its multiplicity and ± ordinates paired.
pub fn empirical_one_level(zeros: &[ZeroList], tf: &TestFunction, x: f64) -> Result<EmpiricalDensity> {
    if zeros.is_empty() {
        return invalid("no curves supplied");
    }
    let need = required_height(tf, x)?;
    let l = (x.sqrt() / (2.0 * PI)).ln();
    let mut curves = Vec::with_capacity(zeros.len());
    for z in zeros {
        if z.height < need {
            return invalid(format!(
                "zeros of t = {} stop at height {} but ψ needs {need:.3}",
                z.t, z.height
            ));
        }
        let central = z.central_multiplicity as f64 * tf.psi(0.0);
        let off_central = z.ordinates.iter().map(|g| 2.0 * tf.psi(g * l / PI)).sum();
        curves.push(CurveContribution { t: z.t, conductor: z.conductor, central, off_central });
    }
    let k = curves.len() as f64;
    Ok(EmpiricalDensity {
        x,
        l,
        mean_central: curves.iter().map(|c| c.central).sum::<f64>() / k,
        mean_off_central: curves.iter().map(|c| c.off_central).sum::<f64>() / k,
        curves,
    })
}
