//! One-level density predictions, the random-matrix catalog and the
//! partial-product experiment on Washington curves.
//!
//! Both integrands are assembled from regular pieces so that the 1/s poles
//! cancel algebraically rather than numerically. With s = it,
//!
//! family 1: F(t) = 2ℓ + ψ(1+s) + ψ(1−s) − 2[ζ′/ζ(1+2s) + 1/(2s)] + 2A_α(s,s),
//! where the ω-dependent terms have dropped out under equal root-number
//! weights and ℓ = log(√X/2π);
//!
//! family 2: F(u) = 2ℓ + ψ(1+s) + ψ(1−s) − 2[ζ′/ζ(1+2s) + 1/(2s)]
//!   − 2[ζ′/ζ(1+s) + 1/s] + 2Ã_α(s,s) + (1 − G·K)/s,
//! with G = e^{−2sℓ}·Γ(1−s)/Γ(1+s)·Ã(−s,s) and
//! K = (1 + 2sR(2s))(1 + sR(s))/(1 − sR(−s)), R(s) = ζ(1+s) − 1/s.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::arith::{self, chi4, WashingtonCurve};
use crate::error::{domain, invalid, Result};
use crate::primes;
use crate::quad;
use crate::ratios::{ComplexShift, EulerProduct};
use crate::special;
use crate::Family;

/// Random-matrix symmetry types.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SymmetryType {
    U,
    Sp,
    O,
    SOeven,
    SOodd,
    /// δ₀ + W(SO(even)).
    DeltaPlusSOeven,
}

impl SymmetryType {
    pub const ALL: [SymmetryType; 6] = [
        SymmetryType::U,
        SymmetryType::Sp,
        SymmetryType::O,
        SymmetryType::SOeven,
        SymmetryType::SOodd,
        SymmetryType::DeltaPlusSOeven,
    ];
}

/// sin(2πτ)/(2πτ), equal to 1 at τ = 0.
pub fn sinc2pi(tau: f64) -> f64 {
    let x = 2.0 * PI * tau;
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

/// (smooth part, δ₀ coefficient) of W(G)(τ).
pub fn wg_density(g: SymmetryType, tau: f64) -> (f64, f64) {
    let s = sinc2pi(tau);
    match g {
        SymmetryType::U => (1.0, 0.0),
        SymmetryType::Sp => (1.0 - s, 0.0),
        SymmetryType::O => (1.0, 0.5),
        SymmetryType::SOeven => (1.0 + s, 0.0),
        SymmetryType::SOodd => (1.0 - s, 1.0),
        SymmetryType::DeltaPlusSOeven => (1.0 + s, 1.0),
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TestKind {
    /// e^{−πτ²}, its own transform.
    Gaussian,
    /// (sin πaτ / πaτ)², transform (1/a)·max(0, 1 − |ξ|/a).
    Fejer { a: f64 },
}

/// An even test function ψ with its Fourier transform.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TestFunction {
    pub name: &'static str,
    pub kind: TestKind,
    /// sup of |ξ| on the support of ψ̂ (∞ for the Gaussian)
    pub support_bound: f64,
}

impl TestFunction {
    pub fn gaussian() -> Self {
        TestFunction { name: "gaussian", kind: TestKind::Gaussian, support_bound: f64::INFINITY }
    }

    pub fn fejer(a: f64) -> Result<Self> {
        if !(a > 0.0 && a.is_finite()) {
            return invalid(format!("Fejér support must be positive, got {a}"));
        }
        Ok(TestFunction { name: "fejer", kind: TestKind::Fejer { a }, support_bound: a })
    }

    pub fn by_name(name: &str, support: f64) -> Result<Self> {
        match name {
            "gaussian" => Ok(Self::gaussian()),
            "fejer" => Self::fejer(support),
            _ => invalid(format!("unknown test function '{name}'")),
        }
    }

    pub fn psi(&self, tau: f64) -> f64 {
        match self.kind {
            TestKind::Gaussian => (-PI * tau * tau).exp(),
            TestKind::Fejer { a } => {
                let x = PI * a * tau;
                if x.abs() < 1e-6 {
                    1.0 - x * x / 3.0
                } else {
                    (x.sin() / x).powi(2)
                }
            }
        }
    }

    pub fn psi_hat(&self, xi: f64) -> f64 {
        match self.kind {
            TestKind::Gaussian => (-PI * xi * xi).exp(),
            TestKind::Fejer { a } => (1.0 - xi.abs() / a).max(0.0) / a,
        }
    }

    /// Numerical inverse transform ∫ψ̂(ξ)e^{2πiξτ}dξ, for checking `psi`.
    pub fn psi_from_hat(&self, tau: f64) -> Result<f64> {
        let b = if self.support_bound.is_finite() { self.support_bound } else { 7.0 };
        let r = quad::integrate(|xi| 2.0 * self.psi_hat(xi) * (2.0 * PI * xi * tau).cos(), 0.0, b, 1e-13, 1e-13)?;
        Ok(r.value)
    }

    /// ∫ψ(τ)·sin(2πτ)/(2πτ) dτ = ½∫_{−1}^{1} ψ̂.
    pub fn sinc_pairing(&self) -> Result<f64> {
        let b = self.support_bound.min(1.0);
        Ok(quad::integrate(|xi| self.psi_hat(xi), 0.0, b, 1e-14, 1e-14)?.value)
    }

    /// ∫ψ over the whole line, = ψ̂(0).
    pub fn mass(&self) -> f64 {
        self.psi_hat(0.0)
    }

    /// Height beyond which ψ is handled by an analytic tail.
    pub fn cutoff(&self) -> f64 {
        match self.kind {
            TestKind::Gaussian => 6.0,
            TestKind::Fejer { a } => 40.0 / a,
        }
    }

    /// ∫_T^∞ ψ(τ) dτ.
    pub fn tail_mass(&self, t: f64) -> f64 {
        match self.kind {
            TestKind::Gaussian => 0.0,
            TestKind::Fejer { a } => {
                // ∫_y^∞ sin²x/x² dx = sin²y/y + π/2 − Si(2y), y = πaT
                let y = PI * a * t;
                (y.sin().powi(2) / y + si_complement(2.0 * y)) / (PI * a)
            }
        }
    }
}

/// π/2 − Si(z) for z ≥ 20 by the auxiliary-function asymptotics.
fn si_complement(z: f64) -> f64 {
    let (mut f, mut g) = (0.0, 0.0);
    let mut term_f = 1.0 / z;
    let mut term_g = 1.0 / (z * z);
    for k in 0..8 {
        f += term_f;
        g += term_g;
        let k2 = 2.0 * k as f64;
        term_f *= -(k2 + 1.0) * (k2 + 2.0) / (z * z);
        term_g *= -(k2 + 2.0) * (k2 + 3.0) / (z * z);
    }
    f * z.cos() + g * z.sin()
}

/// Constants entering the integrands at a given s = it.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegrandConstants {
    /// A(−s, s)
    pub a_minus: Complex64,
    /// A_α(s, s)
    pub a_alpha: Complex64,
}

const PV_FLOOR: f64 = 1e-6;

fn regular_common(s: Complex64, ell: f64) -> Result<Complex64> {
    let dg = special::digamma(1.0 + s)?.value() + special::digamma(1.0 - s)?.value();
    let lr2 = special::zeta_logderiv_regular(2.0 * s)?.value();
    Ok(2.0 * ell + dg - 2.0 * lr2)
}

/// The family-1 bracket at t with root numbers averaged; ℓ = log(√X/2π).
pub fn integrand_family1(t: f64, x: f64, c: &IntegrandConstants) -> Result<Complex64> {
    if t.abs() < PV_FLOOR {
        return domain(format!("|t| = {t:e} needs principal-value pairing"));
    }
    let ell = (x.sqrt() / (2.0 * PI)).ln();
    let s = Complex64::new(0.0, t);
    Ok(regular_common(s, ell)? + 2.0 * c.a_alpha)
}

/// The family-2 bracket at u with conductor scale ℓ = log(√C/2π).
pub fn integrand_family2_scaled(u: f64, ell: f64, c: &IntegrandConstants) -> Result<Complex64> {
    if u.abs() < PV_FLOOR {
        return domain(format!("|u| = {u:e} needs principal-value pairing"));
    }
    let s = Complex64::new(0.0, u);
    let lr1 = special::zeta_logderiv_regular(s)?.value();
    let (r2, _) = special::zeta_regular(2.0 * s)?;
    let (r1, _) = special::zeta_regular(s)?;
    let (rm, _) = special::zeta_regular(-s)?;
    let k = (1.0 + 2.0 * s * r2.value()) * (1.0 + s * r1.value()) / (1.0 - s * rm.value());
    let g = (-2.0 * s * ell).exp() * special::gamma_ratio(1.0 - s, 1.0 + s)? * c.a_minus;
    Ok(regular_common(s, ell)? - 2.0 * lr1 + 2.0 * c.a_alpha + (1.0 - g * k) / s)
}

/// The family-2 bracket for the curve E_t, using its conductor candidate.
pub fn integrand_family2(u: f64, t_param: i64, c: &IntegrandConstants) -> Result<Complex64> {
    let cond = arith::washington_conductor(t_param);
    let ell = 0.5 * (cond.value as f64).ln() - (2.0 * PI).ln();
    integrand_family2_scaled(u, ell, c)
}

/// Coefficients of the 1/L expansion of h(τ).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TaylorCoeffs {
    pub c0_const: f64,
    /// constant part of the 1/L coefficient
    pub c_over_l: Complex64,
    /// coefficient of e^{−2πiτ}/L (family 2)
    pub c_over_l_osc: Complex64,
    /// coefficient of πiτ/L² (family 1)
    pub c_over_l2: Complex64,
}

/// A sampled scaled density.
#[derive(Clone, Debug)]
pub struct DensityCurve {
    pub family: Family,
    pub x: f64,
    /// scale L used in τ = tL/π
    pub l: f64,
    pub tau_grid: Vec<f64>,
    /// Re h(τ) without the δ₀ mass
    pub smooth_values: Vec<f64>,
    /// full complex h(τ) without δ₀
    pub smooth_complex: Vec<Complex64>,
    /// the truncated 1/L expansion at each τ
    pub taylor_values: Vec<Complex64>,
    /// the limiting random-matrix smooth density
    pub catalog: Vec<f64>,
    pub delta_mass: f64,
    pub taylor: TaylorCoeffs,
}

/// Density model for one family at fixed Euler-product truncation.
pub struct DensityModel {
    family: Family,
    product: Arc<EulerProduct>,
    a_alpha0: Complex64,
    a_gamma0: Complex64,
    a_second0: Complex64,
}

impl DensityModel {
    pub fn new(family: Family, cutoff: u64, order: usize) -> Result<Self> {
        let product = Arc::new(EulerProduct::new(family, cutoff, order)?);
        let zero = Complex64::new(0.0, 0.0);
        let a_alpha0 = product.a_alpha(zero)?.value;
        let a_gamma0 = product.a_gamma(zero)?.value;
        let a_second0 = product.a_second(zero)?.value;
        Ok(DensityModel { family, product, a_alpha0, a_gamma0, a_second0 })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn a_alpha0(&self) -> Complex64 {
        self.a_alpha0
    }

    pub fn a_gamma0(&self) -> Complex64 {
        self.a_gamma0
    }

    /// A_αα(0,0) + A_αγ(0,0).
    pub fn a_second0(&self) -> Complex64 {
        self.a_second0
    }

    /// A(−s,s) and A_α(s,s) at s = it.
    pub fn constants(&self, t: f64) -> Result<IntegrandConstants> {
        let s = Complex64::new(0.0, t);
        let a_minus = self.product.value(&ComplexShift::new(-s, s)?)?.value;
        let a_alpha = self.product.a_alpha(s)?.value;
        Ok(IntegrandConstants { a_minus, a_alpha })
    }

    /// Scale L for this family at X.
    pub fn scale(&self, x: f64) -> Result<f64> {
        if !(x >= 1e4 && x.is_finite()) {
            return invalid(format!("X must be at least 10⁴, got {x}"));
        }
        let ell = (x.sqrt() / (2.0 * PI)).ln();
        Ok(match self.family {
            Family::AllCurves => ell - 1.0,
            Family::Washington => ell,
        })
    }

    pub fn delta_mass(&self) -> f64 {
        match self.family {
            Family::AllCurves => 0.5,
            Family::Washington => 1.0,
        }
    }

    /// Complex h(τ) − δ-part at X, with |τ| clamped away from 0.
    pub fn smooth(&self, tau: f64, x: f64) -> Result<Complex64> {
        let l = self.scale(x)?;
        let mut t = PI * tau.abs() / l;
        if t < PV_FLOOR {
            t = PV_FLOOR;
        }
        let c = self.constants(t)?;
        let f = match self.family {
            Family::AllCurves => integrand_family1(t, x, &c)?,
            Family::Washington => integrand_family2_scaled(t, (x.sqrt() / (2.0 * PI)).ln(), &c)?,
        };
        let v = f / (2.0 * l);
        Ok(if tau < 0.0 { v.conj() } else { v })
    }

    pub fn taylor_coeffs(&self) -> TaylorCoeffs {
        let g0 = special::euler_gamma();
        let g1 = special::stieltjes(1).unwrap();
        match self.family {
            // log(√X/2π) = L + 1 contributes the extra 1/L
            Family::AllCurves => TaylorCoeffs {
                c0_const: 1.0,
                c_over_l: 1.0 + self.a_alpha0 - 2.0 * g0,
                c_over_l_osc: Complex64::new(0.0, 0.0),
                c_over_l2: self.a_second0 + 2.0 * (g0 * g0 + g1),
            },
            Family::Washington => TaylorCoeffs {
                c0_const: 1.0,
                c_over_l: self.a_alpha0 - 3.0 * g0,
                c_over_l_osc: 0.5 * (self.a_alpha0 - self.a_gamma0) - 3.0 * g0,
                c_over_l2: Complex64::new(0.0, 0.0),
            },
        }
    }

    /// The truncated expansion of h(τ) − δ-part.
    pub fn taylor(&self, tau: f64, x: f64) -> Result<Complex64> {
        let l = self.scale(x)?;
        let c = self.taylor_coeffs();
        let i = Complex64::new(0.0, 1.0);
        Ok(match self.family {
            Family::AllCurves => c.c0_const + c.c_over_l / l + c.c_over_l2 * PI * i * tau / (l * l),
            Family::Washington => {
                let osc = (-2.0 * PI * i * tau).exp();
                let odd = if tau.abs() < 1e-8 {
                    Complex64::new(0.0, 0.0)
                } else {
                    (1.0 - (2.0 * PI * tau).cos()) / (2.0 * PI * i * tau)
                };
                c.c0_const + sinc2pi(tau) + odd + (c.c_over_l + c.c_over_l_osc * osc) / l
            }
        })
    }

    pub fn catalog_type(&self) -> SymmetryType {
        match self.family {
            Family::AllCurves => SymmetryType::O,
            Family::Washington => SymmetryType::DeltaPlusSOeven,
        }
    }

    pub fn scaled_density(&self, x: f64, tau_grid: &[f64]) -> Result<DensityCurve> {
        let l = self.scale(x)?;
        let smooth_complex: Vec<Complex64> =
            tau_grid.par_iter().map(|&tau| self.smooth(tau, x)).collect::<Result<_>>()?;
        let taylor_values = tau_grid.iter().map(|&tau| self.taylor(tau, x)).collect::<Result<_>>()?;
        let catalog = tau_grid.iter().map(|&tau| wg_density(self.catalog_type(), tau).0).collect();
        Ok(DensityCurve {
            family: self.family,
            x,
            l,
            tau_grid: tau_grid.to_vec(),
            smooth_values: smooth_complex.iter().map(|z| z.re).collect(),
            smooth_complex,
            taylor_values,
            catalog,
            delta_mass: self.delta_mass(),
            taylor: self.taylor_coeffs(),
        })
    }

    /// ∫ψ(τ)h(τ)dτ + δ-mass·ψ(0), with the odd imaginary part paired away.
    pub fn predict_one_level(&self, x: f64, tf: &TestFunction) -> Result<f64> {
        let cutoff = tf.cutoff();
        let mut err = None;
        let r = quad::integrate(
            |tau| match self.smooth(tau, x) {
                Ok(v) => 2.0 * tf.psi(tau) * v.re,
                Err(e) => {
                    err.get_or_insert(e);
                    0.0
                }
            },
            0.0,
            cutoff,
            1e-9,
            1e-9,
        )?;
        if let Some(e) = err {
            return Err(e);
        }
        let tail = 2.0 * tf.tail_mass(cutoff) * self.smooth(cutoff, x)?.re;
        Ok(r.value + tail + self.delta_mass() * tf.psi(0.0))
    }
}

/// ∫ψ·W(G) for a catalog type, via ∫ψ·sinc = ½∫_{−1}^{1}ψ̂.
pub fn predict_catalog(g: SymmetryType, tf: &TestFunction) -> Result<f64> {
    let m = tf.mass();
    let s = tf.sinc_pairing()?;
    let p0 = tf.psi(0.0);
    Ok(match g {
        SymmetryType::U => m,
        SymmetryType::Sp => m - s,
        SymmetryType::O => m + 0.5 * p0,
        SymmetryType::SOeven => m + s,
        SymmetryType::SOodd => m - s + p0,
        SymmetryType::DeltaPlusSOeven => m + s + p0,
    })
}

/// Result of the partial-product regression.
#[derive(Clone, Debug)]
pub struct BsdResult {
    pub t: i64,
    pub slope_full: f64,
    pub slope_shifted: f64,
    /// (x, Σ log((p+1−a)/p), Σ log((p+1−a*)/p)) along the ladder
    pub ladder: Vec<(f64, f64, f64)>,
    /// primes where p + 1 − a* ≤ 0, left out of the shifted product
    pub skipped: Vec<u64>,
    /// |direct − three-factor| for the shifted log-product at x_max
    pub identity_residual: f64,
}

fn trace_e_t(t: i64, p: u64) -> Result<i64> {
    if p == 2 {
        return Ok(0);
    }
    let c = WashingtonCurve::new(t);
    if !c.is_good_at(p) {
        // c₄ = 16(t²+3t+9) shares the bad primes: additive reduction
        return Ok(0);
    }
    arith::frobenius_trace_t(t, p)
}

/// Slopes of log ∏(p+1−a)/p against log log x, for a and a* = a + 1 + χ₄(p).
pub fn bsd_decomposition(curve: WashingtonCurve, x_max: u64) -> Result<BsdResult> {
    if !(1000..=1_000_000).contains(&x_max) {
        return invalid(format!("x_max must lie in [10³, 10⁶], got {x_max}"));
    }
    let ps = primes::sieve(x_max);
    let traces: Vec<i64> = ps.par_iter().map(|&p| trace_e_t(curve.t, p)).collect::<Result<_>>()?;
    let n_pts = 40;
    let (lo, hi) = (100f64.ln(), (x_max as f64).ln());
    let ladder_x: Vec<f64> = (0..n_pts).map(|i| (lo + (hi - lo) * i as f64 / (n_pts - 1) as f64).exp()).collect();
    let mut full = 0.0;
    let mut shifted = 0.0;
    let mut split = [0.0f64; 3];
    let mut skipped = Vec::new();
    let mut ladder = Vec::with_capacity(n_pts);
    let mut next = 0;
    for (&p, &a) in ps.iter().zip(&traces) {
        while next < n_pts && (p as f64) > ladder_x[next] {
            ladder.push((ladder_x[next], full, shifted));
            next += 1;
        }
        let pf = p as f64;
        let af = a as f64;
        let chi = chi4(p as i64) as f64;
        full += ((pf + 1.0 - af) / pf).ln();
        let star = pf + 1.0 - (af + 1.0 + chi);
        if star <= 0.0 {
            skipped.push(p);
            continue;
        }
        shifted += (star / pf).ln();
        split[0] += ((pf + 1.0 - af) / pf).ln();
        split[1] += ((pf - 1.0) / pf).ln();
        split[2] += (1.0 + (-pf * chi - af + 1.0) / (pf * pf - pf * af + af - 1.0)).ln();
    }
    while next < n_pts {
        ladder.push((ladder_x[next], full, shifted));
        next += 1;
    }
    let identity_residual = (shifted - split.iter().sum::<f64>()).abs();
    let xs: Vec<f64> = ladder.iter().map(|e| e.0.ln().ln()).collect();
    let slope = |ys: Vec<f64>| linear_slope(&xs, &ys);
    let slope_full = slope(ladder.iter().map(|e| e.1).collect());
    let slope_shifted = slope(ladder.iter().map(|e| e.2).collect());
    Ok(BsdResult { t: curve.t, slope_full, slope_shifted, ladder, skipped, identity_residual })
}

fn linear_slope(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    sxy / sxx
}
