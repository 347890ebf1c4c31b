//! The constant `C = ∏_p (1 − 3p⁻² + 2p⁻³)` of the `U(N)` asymptotic.

use crate::analytic::special::{zeta2, zeta_real};
use crate::arith::primes_up_to;
use crate::error::Result;

/// A truncated Euler product with a bound on the neglected tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerProductValue {
    pub value: f64,
    pub truncation_prime: u64,
    pub error_estimate: f64,
}

fn local_factor(p: f64) -> f64 {
    let x = 1.0 / p;
    1.0 - 3.0 * x * x + 2.0 * x * x * x
}

/// Straight product over `p ≤ P`. The tail `∏_{p>P}` lies in
/// `[1 − 3/P, 1]`, which sets the error estimate.
pub fn constant_c_naive(max_prime: u64) -> EulerProductValue {
    let value: f64 = primes_up_to(max_prime)
        .into_iter()
        .map(|p| local_factor(p as f64))
        .product();
    EulerProductValue {
        value,
        truncation_prime: max_prime,
        error_estimate: 3.0 * value / max_prime as f64,
    }
}

/// `log Q(x)` where `Q(x) = (1+2x)(1−x³)² / ((1−x)(1+x)³) = 1 + O(x⁴)`.
fn log_residual_factor(x: f64) -> f64 {
    (2.0 * x).ln_1p() + 2.0 * (-x * x * x).ln_1p() - (-x).ln_1p() - 3.0 * x.ln_1p()
}

/// `C = ζ(3)² ζ(2)⁻³ ∏_p Q(1/p)`, using
/// `1 − 3x² + 2x³ = (1−x)²(1+2x) = (1−x²)³ (1−x³)⁻² Q(x)`.
///
/// The residual product converges like `Σ_{p>P} p⁻⁴`.
pub fn constant_c_accelerated(max_prime: u64) -> Result<EulerProductValue> {
    let log_residual: f64 = primes_up_to(max_prime)
        .into_iter()
        .map(|p| log_residual_factor(1.0 / p as f64))
        .sum();
    let z3 = zeta_real(3.0)?;
    let value = z3 * z3 / zeta2().powi(3) * log_residual.exp();
    // |log Q(x)| ≈ 3x⁴, and Σ_{n>P} n⁻⁴ < 1/(3P³); doubled for the x⁵ terms.
    let p = max_prime as f64;
    let tail = 2.0 * log_residual_factor(1.0 / p).abs() * p / 3.0;
    Ok(EulerProductValue {
        value,
        truncation_prime: max_prime,
        error_estimate: value * tail.max(f64::EPSILON),
    })
}

/// Default truncation for [`constant_c`].
pub const C_TRUNCATION: u64 = 100_000;

/// `C` to well beyond eight digits.
pub fn constant_c() -> Result<EulerProductValue> {
    constant_c_accelerated(C_TRUNCATION)
}
