//! Shared fixtures for the criterion benches.

use lowlying::{Complex64, ComplexShift};

/// Off-diagonal shift used by the Euler-product benches.
pub fn shift() -> ComplexShift {
    ComplexShift::new(Complex64::new(0.05, 0.3), Complex64::new(0.1, -0.2)).expect("shift in the half-plane")
}

/// Points on and near the critical line for L-function evaluation.
pub fn critical_points() -> Vec<Complex64> {
    [(0.5, 0.0), (0.5, 3.0), (0.7, 6.0), (0.5, 9.5)].iter().map(|&(a, b)| Complex64::new(a, b)).collect()
}

/// Primes spread across the brute-force range.
pub const SWEEP_PRIMES: [u64; 3] = [101, 401, 1009];
