//! Ratios-conjecture one-level densities for two families of elliptic curves.
//!
//! The crate covers exact finite-field sweeps (`arith`, `averages`), Hecke
//! traces (`hecke`), complex special functions (`special`), truncated Euler
//! products (`ratios`), density predictions (`density`) and desk-scale zero
//! statistics (`lfunc`).

pub mod arith;
pub mod averages;
pub mod density;
pub mod error;
pub mod exact;
pub mod hecke;
pub mod lfunc;
pub mod primes;
pub mod quad;
pub mod ratios;
pub mod special;

pub use arith::{Conductor, CurveAB, FrobeniusTrace, WashingtonCurve};
pub use averages::AverageValue;
pub use density::{DensityCurve, SymmetryType, TestFunction};
pub use error::{Error, Result};
pub use exact::QuadSurd;
pub use hecke::{ChebCoeffs, TraceTable};
pub use lfunc::{LSeries, ZeroList};
pub use num_complex::Complex64;
pub use ratios::{ComplexShift, EulerProductValue};
pub use special::ComplexValue;

/// The two families handled by the density pipeline.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// All curves y² = x³ + ax + b with fixed residues of (a, b) mod 6.
    AllCurves,
    /// Washington's curves y² = x³ + tx² − (t+3)x + 1.
    Washington,
}

impl Family {
    pub fn from_index(i: u32) -> Result<Self> {
        match i {
            1 => Ok(Family::AllCurves),
            2 => Ok(Family::Washington),
            _ => Err(Error::InvalidArgument(format!("family must be 1 or 2, got {i}"))),
        }
    }

    pub fn index(self) -> u32 {
        match self {
            Family::AllCurves => 1,
            Family::Washington => 2,
        }
    }
}
