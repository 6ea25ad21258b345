//! Exact arithmetic in ℚ(√p).

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

/// An element `rat + irr·√p` of ℚ(√p) for a fixed prime `p`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    pub p: u64,
    pub rat: BigRational,
    pub irr: BigRational,
}

impl QuadSurd {
    pub fn zero(p: u64) -> Self {
        QuadSurd { p, rat: BigRational::zero(), irr: BigRational::zero() }
    }

    pub fn one(p: u64) -> Self {
        Self::rational(p, BigRational::one())
    }

    pub fn rational(p: u64, q: BigRational) -> Self {
        QuadSurd { p, rat: q, irr: BigRational::zero() }
    }

    pub fn from_int(p: u64, n: impl Into<BigInt>) -> Self {
        Self::rational(p, BigRational::from_integer(n.into()))
    }

    pub fn from_frac(p: u64, num: i64, den: i64) -> Self {
        Self::rational(p, BigRational::new(num.into(), den.into()))
    }

    /// `p^(k/2)` for any integer `k`.
    pub fn half_power(p: u64, k: i64) -> Self {
        let whole = k.div_euclid(2);
        let odd = k.rem_euclid(2) == 1;
        let pb = BigInt::from(p);
        let mag = if whole >= 0 {
            BigRational::from_integer(num_traits::pow(pb, whole as usize))
        } else {
            BigRational::new(BigInt::one(), num_traits::pow(pb, (-whole) as usize))
        };
        if odd {
            QuadSurd { p, rat: BigRational::zero(), irr: mag }
        } else {
            QuadSurd { p, rat: mag, irr: BigRational::zero() }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rat.is_zero() && self.irr.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.irr.is_zero()
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        QuadSurd { p: self.p, rat: &self.rat * q, irr: &self.irr * q }
    }

    pub fn to_f64(&self) -> f64 {
        let r = ratio_to_f64(&self.rat);
        let i = ratio_to_f64(&self.irr);
        r + i * (self.p as f64).sqrt()
    }

    /// Writes a value lying in ℚ·p^(k/2) as `(q, k)` with `k ∈ {0, 1}`.
    /// Returns `None` for mixed elements.
    pub fn as_rational_times_sqrt(&self) -> Option<(BigRational, u8)> {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (_, true) => Some((self.rat.clone(), 0)),
            (true, false) => Some((self.irr.clone(), 1)),
            _ => None,
        }
    }

    fn check(&self, other: &Self) {
        assert_eq!(self.p, other.p, "mixing ℚ(√{}) and ℚ(√{})", self.p, other.p);
    }
}

/// Conversion that survives numerators and denominators beyond f64 range.
pub fn ratio_to_f64(q: &BigRational) -> f64 {
    if q.is_zero() {
        return 0.0;
    }
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // keep 62 significant bits of each side
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let ns = (nb - 62).max(0);
    let ds = (db - 62).max(0);
    let n = (q.numer() >> (ns as usize)).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> (ds as usize)).to_f64().unwrap_or(1.0);
    (n / d) * 2f64.powf((ns - ds) as f64)
}

impl Add for &QuadSurd {
    type Output = QuadSurd;
    fn add(self, o: &QuadSurd) -> QuadSurd {
        self.check(o);
        QuadSurd { p: self.p, rat: &self.rat + &o.rat, irr: &self.irr + &o.irr }
    }
}

impl Sub for &QuadSurd {
    type Output = QuadSurd;
    fn sub(self, o: &QuadSurd) -> QuadSurd {
        self.check(o);
        QuadSurd { p: self.p, rat: &self.rat - &o.rat, irr: &self.irr - &o.irr }
    }
}

impl Mul for &QuadSurd {
    type Output = QuadSurd;
    fn mul(self, o: &QuadSurd) -> QuadSurd {
        self.check(o);
        let pq = BigRational::from_integer(BigInt::from(self.p));
        QuadSurd {
            p: self.p,
            rat: &self.rat * &o.rat + &self.irr * &o.irr * pq,
            irr: &self.rat * &o.irr + &self.irr * &o.rat,
        }
    }
}

impl Neg for &QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        QuadSurd { p: self.p, rat: -&self.rat, irr: -&self.irr }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QuadSurd {
            type Output = QuadSurd;
            fn $m(self, o: QuadSurd) -> QuadSurd {
                (&self).$m(&o)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for QuadSurd {
    type Output = QuadSurd;
    fn neg(self) -> QuadSurd {
        -&self
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.rat.is_zero(), self.irr.is_zero()) {
            (true, true) => write!(f, "0"),
            (false, true) => write!(f, "{}", self.rat),
            (true, false) => write!(f, "{}*sqrt({})", self.irr, self.p),
            _ => write!(f, "{} + {}*sqrt({})", self.rat, self.irr, self.p),
        }
    }
}
