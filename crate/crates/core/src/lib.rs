//! Exact counts of representations `a/n = 1/x + 1/y`, their averages over
//! `n` (and over `a`), and the analytic main terms those averages follow.
//!
//! The crate is organised bottom-up:
//!
//! * [`arith`]: factorization, divisors, Möbius and totient.
//! * [`counting`]: `R(n;a)`, `S(N;a)`, `T(N;a)`, `U(N)` and `R_k` by several
//!   independent routes.
//! * [`characters`]: Dirichlet characters with exact root-of-unity values,
//!   the character decomposition of `S(N;a)` and `L(1,χ)`.
//! * [`analytic`]: constants, zeta, the Euler product `C`, and the main terms.
//! * [`experiments`]: error measurements and log-polynomial fits.

pub mod analytic;
pub mod arith;
pub mod characters;
pub mod counting;
mod error;
pub mod experiments;

pub use error::{Error, Result};
