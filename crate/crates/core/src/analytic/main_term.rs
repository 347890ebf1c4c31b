//! Main terms for `S(N;a)` and `U(N)`.
//!
//! The principal character contributes the residue at `s = 1` of
//! `(s−1)⁻³ N^s H(s)` with `H = F·G`,
//! `F(s) = ((s−1)ζ(s))³ / (ζ(2s) s)` and
//! `G(s) = ∏_{p|a} (p^s−1)² / (p^s (p^s+1))`.
//! It is computed by the trapezoid rule on the circle `|s−1| = 1/4`, which
//! converges geometrically because `H` is analytic on `|s−1| < 1`.
//! Each non-principal character contributes the simple-pole residue
//! `(6N/π²) ∏_{p|a} p/(p+1) · |L(1,χ)|²`.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::analytic::euler_product::constant_c;
use crate::analytic::special::{euler_gamma, zeta, zeta_prime_over_zeta_at_2, zeta_regular};
use crate::arith::{self, Factorization};
use crate::characters::{nonprincipal_average, CharacterGroup, L1Mode};
use crate::error::{guard, Error, Result};

/// Radius of the residue contour around `s = 1`.
pub const CONTOUR_RADIUS: f64 = 0.25;
/// Base node count; the check doubles it.
pub const CONTOUR_NODES: usize = 64;
/// Relative agreement demanded between `M` and `2M` nodes.
pub const NODE_DOUBLING_TOLERANCE: f64 = 1e-8;
/// Largest modulus for [`residue_principal`].
pub const RESIDUE_MODULUS_LIMIT: u64 = 1_000_000;
/// Largest modulus for [`main_term_full`] (bounded by the character group).
pub const FULL_MODULUS_LIMIT: u64 = 10_000;

/// `F(s) = ((s−1)ζ(s))³ ζ(2s)⁻¹ s⁻¹`.
pub fn f_factor(s: Complex64) -> Result<Complex64> {
    let z = zeta_regular(s);
    Ok(z * z * z / (zeta(2.0 * s)? * s))
}

/// `G(s) = ∏_{p|a} (p^s−1)² / (p^s (p^s+1))`.
pub fn g_factor(primes: &[u64], s: Complex64) -> Complex64 {
    primes
        .iter()
        .map(|&p| {
            let q = (s * (p as f64).ln()).exp();
            (q - 1.0) * (q - 1.0) / (q * (q + 1.0))
        })
        .product()
}

pub fn h_factor(primes: &[u64], s: Complex64) -> Result<Complex64> {
    Ok(f_factor(s)? * g_factor(primes, s))
}

fn distinct_primes(a: u64) -> Result<Vec<u64>> {
    if a == 0 {
        return Err(Error::Domain("modulus must be positive".into()));
    }
    Ok(arith::factorize(a)?.primes().collect())
}

/// Log-derivative pieces `(f(1), f′(1), f″(1))` of a real-analytic function
/// by Richardson-extrapolated central differences.
pub fn central_derivatives(f: impl Fn(f64) -> Result<f64>, x: f64) -> Result<(f64, f64, f64)> {
    let f0 = f(x)?;
    let stencil = |h: f64| -> Result<(f64, f64)> {
        let (fp, fm) = (f(x + h)?, f(x - h)?);
        Ok(((fp - fm) / (2.0 * h), (fp - 2.0 * f0 + fm) / (h * h)))
    };
    let h = 1e-2;
    let (d1a, d2a) = stencil(h)?;
    let (d1b, d2b) = stencil(h / 2.0)?;
    Ok((f0, (4.0 * d1b - d1a) / 3.0, (4.0 * d2b - d2a) / 3.0))
}

fn real_h(primes: &[u64]) -> impl Fn(f64) -> Result<f64> + '_ {
    move |s| Ok(h_factor(primes, Complex64::new(s, 0.0))?.re)
}

/// `F′(1)/F(1)` by central differences.
pub fn f_log_derivative_numeric() -> Result<f64> {
    let (f0, f1, _) = central_derivatives(|s| Ok(f_factor(Complex64::new(s, 0.0))?.re), 1.0)?;
    Ok(f1 / f0)
}

/// `F′(1)/F(1) = 3γ − 2ζ′(2)/ζ(2) − 1`.
pub fn f_log_derivative_closed() -> Result<f64> {
    Ok(3.0 * euler_gamma()? - 2.0 * zeta_prime_over_zeta_at_2()? - 1.0)
}

/// `G′(1)/G(1)` by central differences.
pub fn g_log_derivative_numeric(a: u64) -> Result<f64> {
    let primes = distinct_primes(a)?;
    let (g0, g1, _) = central_derivatives(|s| Ok(g_factor(&primes, Complex64::new(s, 0.0)).re), 1.0)?;
    Ok(g1 / g0)
}

/// `Σ_{p|a} (3p+1) log p / (p−1)²`, the reference form `c1` is built from.
/// It exceeds the true derivative by a factor `(p+1)/(p−1)` per prime.
pub fn g_log_derivative_reference(a: u64) -> Result<f64> {
    Ok(distinct_primes(a)?
        .into_iter()
        .map(|p| {
            let pf = p as f64;
            (3.0 * pf + 1.0) * pf.ln() / ((pf - 1.0) * (pf - 1.0))
        })
        .sum())
}

/// `Σ_{p|a} (3p+1) log p / (p²−1)`, the derivative of `log G` at 1.
pub fn g_log_derivative_closed(a: u64) -> Result<f64> {
    Ok(distinct_primes(a)?
        .into_iter()
        .map(|p| {
            let pf = p as f64;
            (3.0 * pf + 1.0) * pf.ln() / (pf * pf - 1.0)
        })
        .sum())
}

/// `G″(1)/G(1) = (G′/G)² − Σ_{p|a} (3p³+2p²+3p)(log p)²/(p²−1)²`.
pub fn g_second_log_derivative_closed(a: u64) -> Result<f64> {
    let first = g_log_derivative_closed(a)?;
    let second: f64 = distinct_primes(a)?
        .into_iter()
        .map(|p| {
            let pf = p as f64;
            let l = pf.ln();
            (3.0 * pf.powi(3) + 2.0 * pf * pf + 3.0 * pf) * l * l / (pf * pf - 1.0).powi(2)
        })
        .sum();
    Ok(first * first - second)
}

/// Coefficients of the quadratic-in-`log N` main term for `S(N;a)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MainTermModel {
    pub a: u64,
    /// `3/(π²a) ∏_{p|a} (p−1)/(p+1)`
    pub leading: f64,
    /// `6γ − 4ζ′(2)/ζ(2) − 2 + Σ_{p|a} (6p+2) log p/(p−1)²`, the reference form
    pub c1: f64,
    /// `2H′(1)/H(1)`: the linear coefficient the principal residue actually
    /// carries, `Σ_{p|a} (6p+2) log p/(p²−1)` in the prime sum
    pub c1_residue: f64,
    /// `−(log a)² + log a · Σ_{p|a} log p/(p−1)`
    pub c0_explicit: f64,
    pub c0_fitted: Option<f64>,
}

impl MainTermModel {
    /// `A N ((log N)² + c₁ log N + c₀)` with `c₀` the fitted value when present.
    pub fn evaluate(&self, big_n: f64) -> f64 {
        let l = big_n.ln();
        let c0 = self.c0_fitted.unwrap_or(self.c0_explicit);
        self.leading * big_n * (l * l + self.c1 * l + c0)
    }
}

pub fn main_term_coeffs(a: u64) -> Result<MainTermModel> {
    let primes = distinct_primes(a)?;
    let base = 6.0 * euler_gamma()? - 4.0 * zeta_prime_over_zeta_at_2()? - 2.0;
    let ratio: f64 = primes
        .iter()
        .map(|&p| (p as f64 - 1.0) / (p as f64 + 1.0))
        .product();
    let log_a = (a as f64).ln();
    let log_sum: f64 = primes.iter().map(|&p| (p as f64).ln() / (p as f64 - 1.0)).sum();
    Ok(MainTermModel {
        a,
        leading: 3.0 / (PI * PI * a as f64) * ratio,
        c1: base + 2.0 * g_log_derivative_reference(a)?,
        c1_residue: base + 2.0 * g_log_derivative_closed(a)?,
        c0_explicit: -log_a * log_a + log_a * log_sum,
        c0_fitted: None,
    })
}

fn contour_residue(primes: &[u64], log_n: f64, nodes: usize) -> Result<Complex64> {
    // (1/2πi)∮ H(s) N^s (s−1)⁻³ ds = mean over nodes of H(s) N^s (s−1)⁻²
    let mut acc = Complex64::new(0.0, 0.0);
    for j in 0..nodes {
        let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
        let w = Complex64::from_polar(CONTOUR_RADIUS, theta);
        let s = 1.0 + w;
        acc += h_factor(primes, s)? * (s * log_n).exp() / (w * w);
    }
    Ok(acc / nodes as f64)
}

/// Residue at `s = 1` of `f_{χ₀}(s) N^s / s`, by the trapezoid rule with
/// [`CONTOUR_NODES`] and twice as many nodes.
pub fn residue_principal(big_n: u64, a: u64) -> Result<f64> {
    if big_n < 4 {
        return Err(Error::Domain(format!("residue needs N >= 4, got {big_n}")));
    }
    guard(a <= RESIDUE_MODULUS_LIMIT, "residue modulus", RESIDUE_MODULUS_LIMIT)?;
    residue_principal_at(&distinct_primes(a)?, (big_n as f64).ln())
}

/// The principal residue from a single trapezoid rule with `nodes` points,
/// without the doubling check.
pub fn residue_principal_nodes(big_n: u64, a: u64, nodes: usize) -> Result<f64> {
    if nodes == 0 {
        return Err(Error::Domain("need at least one node".into()));
    }
    Ok(contour_residue(&distinct_primes(a)?, (big_n as f64).ln(), nodes)?.re)
}

/// [`residue_principal`] at a real `log N`.
pub fn residue_principal_at(primes: &[u64], log_n: f64) -> Result<f64> {
    let coarse = contour_residue(primes, log_n, CONTOUR_NODES)?;
    let fine = contour_residue(primes, log_n, 2 * CONTOUR_NODES)?;
    let scale = fine.norm();
    if (coarse - fine).norm() > NODE_DOUBLING_TOLERANCE * scale {
        return Err(Error::Precision(format!(
            "contour residue not converged: {coarse} vs {fine}"
        )));
    }
    Ok(fine.re)
}

/// `N H(1) (½L² + L H′(1)/H(1) + H″(1)/(2H(1)))` with the derivatives from
/// central differences; the independent route to [`residue_principal`].
pub fn residue_principal_closed_form_at(primes: &[u64], log_n: f64) -> Result<f64> {
    let (h0, h1, h2) = central_derivatives(real_h(primes), 1.0)?;
    let l = log_n;
    Ok(l.exp() * h0 * (0.5 * l * l + l * h1 / h0 + h2 / (2.0 * h0)))
}

pub fn residue_principal_closed_form(big_n: u64, a: u64) -> Result<f64> {
    residue_principal_closed_form_at(&distinct_primes(a)?, (big_n as f64).ln())
}

/// Taylor coefficients `(H(1), H′(1), H″(1)/2)` by Cauchy integrals on the
/// residue contour.
pub fn h_taylor_coefficients(a: u64) -> Result<[f64; 3]> {
    let primes = distinct_primes(a)?;
    let nodes = 2 * CONTOUR_NODES;
    let mut c = [Complex64::new(0.0, 0.0); 3];
    for j in 0..nodes {
        let theta = 2.0 * PI * (j as f64 + 0.5) / nodes as f64;
        let w = Complex64::from_polar(CONTOUR_RADIUS, theta);
        let h = h_factor(&primes, 1.0 + w)?;
        c[0] += h;
        c[1] += h / w;
        c[2] += h / (w * w);
    }
    Ok(c.map(|z| z.re / nodes as f64))
}

/// Full main term of `S(N;a)`: principal residue plus the non-principal
/// simple-pole residues, each weighted by `χ̄(−1)/φ(a)`.
///
/// Holds everything that does not depend on `N`, so scans over `N` pay for
/// the character group once.
#[derive(Debug, Clone)]
pub struct FullMainTerm {
    a: u64,
    primes: Vec<u64>,
    totient: f64,
    /// `(6/π²) ∏ p/(p+1) · φ(a)⁻¹ Σ_{χ≠χ₀} χ̄(−1)|L(1,χ)|²`
    linear: f64,
}

impl FullMainTerm {
    pub fn new(a: u64, mode: L1Mode) -> Result<Self> {
        if a == 0 {
            return Err(Error::Domain("modulus must be positive".into()));
        }
        guard(a <= FULL_MODULUS_LIMIT, "main term modulus", FULL_MODULUS_LIMIT)?;
        let group = CharacterGroup::build(a)?;
        let f: &Factorization = group.factorization();
        let primes: Vec<u64> = f.primes().collect();
        let avg = if group.size() > 1 {
            nonprincipal_average(&group, mode)?
        } else {
            0.0
        };
        let local: f64 = primes.iter().map(|&p| p as f64 / (p as f64 + 1.0)).product();
        Ok(Self {
            a,
            totient: arith::totient(f) as f64,
            linear: 6.0 / (PI * PI) * local * avg,
            primes,
        })
    }

    pub fn modulus(&self) -> u64 {
        self.a
    }

    /// The non-principal contribution divided by `N`.
    pub fn nonprincipal_slope(&self) -> f64 {
        self.linear
    }

    pub fn evaluate(&self, big_n: u64) -> Result<f64> {
        if big_n < 4 {
            return Err(Error::Domain(format!("main term needs N >= 4, got {big_n}")));
        }
        let res = residue_principal_at(&self.primes, (big_n as f64).ln())?;
        Ok(res / self.totient + self.linear * big_n as f64)
    }
}

/// Main term of `S(N;a)` with `L(1,χ)` from its closed form.
pub fn main_term_full(big_n: u64, a: u64) -> Result<f64> {
    FullMainTerm::new(a, L1Mode::Exact)?.evaluate(big_n)
}

/// `¼ C N (log N)³`.
pub fn main_term_u(big_n: u64) -> Result<f64> {
    if big_n < 2 {
        return Err(Error::Domain(format!("U main term needs N >= 2, got {big_n}")));
    }
    Ok(main_term_u_at(big_n as f64, constant_c()?.value))
}

pub fn main_term_u_at(big_n: f64, c: f64) -> f64 {
    0.25 * c * big_n * big_n.ln().powi(3)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    fn c1_base() -> f64 {
        6.0 * euler_gamma().unwrap() - 4.0 * zeta_prime_over_zeta_at_2().unwrap() - 2.0
    }

    #[test]
    fn coefficient_examples() {
        let m1 = main_term_coeffs(1).unwrap();
        assert!((m1.leading - 3.0 / (PI * PI)).abs() < 1e-15);
        assert!((m1.leading - 0.30396).abs() < 1e-5);
        assert!((m1.c1 - 3.7431).abs() < 2e-3);
        assert_eq!(m1.c0_explicit, 0.0);
        assert_eq!(m1.c1, m1.c1_residue);

        let m2 = main_term_coeffs(2).unwrap();
        // independent evaluation: 3/(π²·2) · (1/3)
        assert!((m2.leading - 1.0 / (2.0 * PI * PI)).abs() < 1e-15);
        assert!((m2.leading - 0.050660).abs() < 1e-6);

        let m3 = main_term_coeffs(3).unwrap();
        assert!((m3.c1 - (c1_base() + 5.0 * 3f64.ln())).abs() < 1e-12);
        assert!((m3.c1 - 9.2362).abs() < 1e-3);
        assert!((m3.c1_residue - (c1_base() + 2.5 * 3f64.ln())).abs() < 1e-12);
    }

    #[test]
    fn model_invariants() {
        let c1_one = main_term_coeffs(1).unwrap().c1;
        for a in 2..200u64 {
            let m = main_term_coeffs(a).unwrap();
            let product = m.leading * a as f64 * PI * PI / 3.0;
            assert!(m.leading > 0.0 && product <= 1.0);
            assert!(m.c1 >= c1_one && m.c1_residue >= c1_one);
        }
    }

    #[test]
    fn h_at_one_and_taylor_coefficients() {
        let h1 = h_factor(&[], Complex64::new(1.0, 0.0)).unwrap();
        assert!((h1.re - 6.0 / (PI * PI)).abs() < 1e-14);
        for a in [1u64, 3, 12] {
            let primes = distinct_primes(a).unwrap();
            let [t0, t1, t2] = h_taylor_coefficients(a).unwrap();
            let (d0, d1, d2) = central_derivatives(real_h(&primes), 1.0).unwrap();
            assert!((t0 - d0).abs() < 1e-12);
            assert!((t1 - d1).abs() < 1e-8);
            assert!((2.0 * t2 - d2).abs() < 1e-6);
        }
    }

    #[test]
    fn f_log_derivative_matches_closed_form() {
        let num = f_log_derivative_numeric().unwrap();
        let closed = f_log_derivative_closed().unwrap();
        assert!((num - closed).abs() < 1e-6);
        assert!((closed - 1.8716).abs() < 1e-4);
    }

    #[test]
    fn g_log_derivatives() {
        for a in [3u64, 4, 15, 36] {
            let num = g_log_derivative_numeric(a).unwrap();
            assert!((num - g_log_derivative_closed(a).unwrap()).abs() < 1e-6, "a={a}");
            let primes = distinct_primes(a).unwrap();
            let (g0, _, g2) = central_derivatives(|s| Ok(g_factor(&primes, Complex64::new(s, 0.0)).re), 1.0).unwrap();
            assert!((g2 / g0 - g_second_log_derivative_closed(a).unwrap()).abs() < 1e-6);
        }
        // the reference first-derivative form differs by a factor (p+1)/(p−1)
        let reference = g_log_derivative_reference(3).unwrap();
        assert!((reference - 2.5 * 3f64.ln()).abs() < 1e-12);
        assert!((g_log_derivative_closed(3).unwrap() - 1.25 * 3f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn residue_at_n_equal_e() {
        let res = residue_principal_at(&[], 1.0).unwrap();
        let (f0, f1, f2) = central_derivatives(|s| Ok(f_factor(Complex64::new(s, 0.0))?.re), 1.0).unwrap();
        let expect = 6.0 / (PI * PI) * E * (0.5 + f1 / f0 + f2 / (2.0 * f0));
        assert!(((res - expect) / res).abs() < 1e-6);
        let fp = f_log_derivative_closed().unwrap();
        assert!(((f1 / f0) - fp).abs() < 1e-6);
    }

    #[test]
    fn node_doubling_and_closed_form_consistency() {
        for a in [1u64, 2, 3, 6, 12] {
            let primes = distinct_primes(a).unwrap();
            for big_n in [100u64, 10_000, 1_000_000] {
                let l = (big_n as f64).ln();
                let coarse = contour_residue(&primes, l, 64).unwrap();
                let fine = contour_residue(&primes, l, 128).unwrap();
                assert!((coarse - fine).norm() / fine.norm() <= 1e-8);
                let closed = residue_principal_closed_form_at(&primes, l).unwrap();
                assert!(((closed - fine.re) / fine.re).abs() < 1e-6, "a={a} N={big_n}");
            }
        }
    }

    #[test]
    fn residue_over_n_is_quadratic_in_log_n() {
        for a in [1u64, 6] {
            let primes = distinct_primes(a).unwrap();
            let ls = [4.0, 6.0, 8.0, 10.0];
            let v: Vec<f64> = ls
                .iter()
                .map(|&l| residue_principal_at(&primes, l).unwrap() / l.exp())
                .collect();
            let third = v[3] - 3.0 * v[2] + 3.0 * v[1] - v[0];
            assert!(third.abs() < 1e-6 * v[3].abs());
        }
    }

    #[test]
    fn leading_coefficient_matches_residue() {
        // A(a) = H(1) / (2 φ(a))
        for a in [1u64, 3, 10, 12] {
            let phi = arith::totient(&arith::factorize(a).unwrap()) as f64;
            let [h0, h1, _] = h_taylor_coefficients(a).unwrap();
            let m = main_term_coeffs(a).unwrap();
            assert!((h0 / (2.0 * phi) - m.leading).abs() < 1e-13);
            assert!((2.0 * h1 / h0 - m.c1_residue).abs() < 1e-8);
        }
    }

    #[test]
    fn full_main_term_small_moduli() {
        for big_n in [10u64, 1000, 100_000] {
            let r1 = residue_principal(big_n, 1).unwrap();
            assert!((main_term_full(big_n, 1).unwrap() - r1).abs() < 1e-9 * r1);
            let r2 = residue_principal(big_n, 2).unwrap();
            assert!((main_term_full(big_n, 2).unwrap() - r2).abs() < 1e-9 * r2);
        }
        assert!(residue_principal(3, 1).is_err());
    }

    #[test]
    fn full_main_term_tracks_s() {
        let big_n = 100_000u64;
        let s = crate::counting::s_sieve(big_n, 3).unwrap() as f64;
        let m = main_term_full(big_n, 3).unwrap();
        let l = (big_n as f64).ln();
        assert!((s - m).abs() <= 50.0 * (big_n as f64).sqrt() * l.powi(5));
        assert!((s - m).abs() < 0.01 * s);
    }

    #[test]
    fn u_main_term_examples() {
        let c = constant_c().unwrap().value;
        assert!((main_term_u_at(E, c) - 0.25 * c * E).abs() < 1e-14);
        let v = main_term_u(10_000).unwrap();
        assert!((v / 5.60e5 - 1.0).abs() < 5e-3);
        let r1 = main_term_u(1000).unwrap() / (1000.0 * 1000f64.ln().powi(3));
        let r2 = main_term_u(1_000_000).unwrap() / (1e6 * 1e6f64.ln().powi(3));
        assert!((r1 - r2).abs() < 1e-15);
        assert!(main_term_u(1).is_err());
    }
}
