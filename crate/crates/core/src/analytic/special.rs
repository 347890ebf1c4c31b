//! Euler's constant, digamma, and Hurwitz/Riemann zeta by Euler–Maclaurin
//! summation.

use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

/// `B_{2k}` for `k = 1..=15`.
pub(crate) const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Agreement demanded between the two routes to `γ`.
pub const GAMMA_AGREEMENT: f64 = 1e-12;

/// `γ = H_n − log n − 1/(2n) + Σ_k B_{2k}/(2k n^{2k})`.
pub fn gamma_euler_maclaurin(n: u32) -> f64 {
    let nf = n as f64;
    let harmonic: f64 = (1..=n).rev().map(|k| 1.0 / k as f64).sum();
    let mut tail = 0.0;
    let mut pow = nf * nf;
    for (k, b) in BERNOULLI_EVEN.iter().take(8).enumerate() {
        tail += b / (2.0 * (k + 1) as f64 * pow);
        pow *= nf * nf;
    }
    harmonic - nf.ln() - 0.5 / nf + tail
}

/// Brent–McMillan: `γ ≈ U(n)/V(n)` with `U = Σ (n^k/k!)² (H_k − log n)`,
/// `V = Σ (n^k/k!)²`; the truncation error is below `π e^{-4n}`.
pub fn gamma_brent_mcmillan(n: u32) -> f64 {
    let nf = n as f64;
    let log_n = nf.ln();
    let (mut term, mut harmonic) = (1.0f64, 0.0f64);
    let (mut u, mut v) = (-log_n, 1.0);
    for k in 1..=(8 * n + 40) {
        let kf = k as f64;
        term *= nf * nf / (kf * kf);
        harmonic += 1.0 / kf;
        u += term * (harmonic - log_n);
        v += term;
    }
    u / v
}

/// Euler–Mascheroni constant, computed by two independent routes that must
/// agree to [`GAMMA_AGREEMENT`].
pub fn euler_gamma() -> Result<f64> {
    static GAMMA: OnceLock<Result<f64>> = OnceLock::new();
    GAMMA
        .get_or_init(|| {
            let em = gamma_euler_maclaurin(200);
            let bm = gamma_brent_mcmillan(12);
            if (em - bm).abs() > GAMMA_AGREEMENT {
                return Err(Error::Consistency(format!(
                    "gamma routes disagree: {em} vs {bm}"
                )));
            }
            Ok(bm)
        })
        .clone()
}

/// Digamma `ψ(x)` for `x > 0`.
pub fn digamma(mut x: f64) -> f64 {
    debug_assert!(x > 0.0);
    let mut shift = 0.0;
    while x < 10.0 {
        shift -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    let mut pow = inv2;
    let mut series = 0.0;
    for (k, b) in BERNOULLI_EVEN.iter().take(9).enumerate() {
        series += b / (2.0 * (k + 1) as f64) * pow;
        pow *= inv2;
    }
    shift + x.ln() - 0.5 / x - series
}

const EM_TERMS: usize = 12;

/// Euler–Maclaurin pieces of `ζ(s, q)` with cutoff `m`: returns
/// `(Σ_{n<m}(n+q)^{-s} + ½w^{-s} + Σ_k c_k(s) w^{-s-2k+1}, w^{1-s})`
/// where `w = m + q`, so that `ζ(s,q) = first + second/(s−1)`.
fn hurwitz_parts(s: Complex64, q: f64, m: u32) -> (Complex64, Complex64) {
    let mut head = Complex64::new(0.0, 0.0);
    for n in (0..m).rev() {
        head += (-s * (n as f64 + q).ln()).exp();
    }
    let w = m as f64 + q;
    let log_w = w.ln();
    let w_pow_neg_s = (-s * log_w).exp();
    head += 0.5 * w_pow_neg_s;
    // c_k(s) = B_{2k}/(2k)! · s(s+1)…(s+2k−2)
    let mut rising = s; // s(s+1)…(s+2k−2) for k = 1
    let mut fact = 2.0; // (2k)!
    let mut w_pow = w_pow_neg_s / w; // w^{-s-2k+1}
    for (k, b) in BERNOULLI_EVEN.iter().take(EM_TERMS).enumerate() {
        head += rising * (b / fact) * w_pow;
        let j = 2.0 * (k + 1) as f64;
        rising *= (s + (j - 1.0)) * (s + j);
        fact *= (j + 1.0) * (j + 2.0);
        w_pow /= w * w;
    }
    (head, w_pow_neg_s * w)
}

const EM_CUTOFF: u32 = 24;
/// Minimum distance to the pole accepted by [`zeta`] and [`hurwitz_zeta`].
pub const POLE_GUARD: f64 = 1e-3;

fn check_domain(s: Complex64) -> Result<()> {
    if s.re <= -1.0 {
        return Err(Error::Domain(format!("Re s = {} is not above -1", s.re)));
    }
    if (s - 1.0).norm() < POLE_GUARD {
        return Err(Error::Domain(format!("s = {s} is too close to the pole at 1")));
    }
    Ok(())
}

/// Hurwitz zeta `ζ(s, q) = Σ_{n≥0} (n+q)^{-s}` for `q > 0`.
pub fn hurwitz_zeta(s: Complex64, q: f64) -> Result<Complex64> {
    check_domain(s)?;
    if q <= 0.0 {
        return Err(Error::Domain(format!("Hurwitz parameter {q} must be positive")));
    }
    let (head, w) = hurwitz_parts(s, q, EM_CUTOFF);
    Ok(head + w / (s - 1.0))
}

/// Riemann zeta for `Re s > −1`, `|s − 1| ≥ 10⁻³`.
pub fn zeta(s: Complex64) -> Result<Complex64> {
    hurwitz_zeta(s, 1.0)
}

pub fn zeta_real(s: f64) -> Result<f64> {
    Ok(zeta(Complex64::new(s, 0.0))?.re)
}

/// `(s − 1) ζ(s)`, continued analytically through `s = 1` (value 1 there).
pub fn zeta_regular(s: Complex64) -> Complex64 {
    let (head, w) = hurwitz_parts(s, 1.0, EM_CUTOFF);
    (s - 1.0) * head + w
}

/// `ζ′(s)` for real `s > 1` with an explicit cutoff, by differentiating the
/// Euler–Maclaurin formula term by term.
pub fn zeta_prime_with_cutoff(s: f64, m: u32) -> f64 {
    let mut head: f64 = (1..m).rev().map(|n| -(n as f64).ln() * (n as f64).powf(-s)).sum();
    let w = m as f64;
    let lw = w.ln();
    let ws = w.powf(-s);
    // Σ_{n<m} covers n = 1..m−1; the formula below starts at n = m.
    head += ws * (-lw * w / (s - 1.0) - w / ((s - 1.0) * (s - 1.0)));
    head += 0.5 * ws * -lw;
    let mut rising = s;
    let mut rising_log_deriv = 1.0 / s;
    let mut fact = 2.0;
    let mut w_pow = ws / w;
    for (k, b) in BERNOULLI_EVEN.iter().take(EM_TERMS).enumerate() {
        head += (b / fact) * w_pow * (rising * rising_log_deriv - lw * rising);
        let j = 2.0 * (k + 1) as f64;
        rising *= (s + j - 1.0) * (s + j);
        rising_log_deriv += 1.0 / (s + j - 1.0) + 1.0 / (s + j);
        fact *= (j + 1.0) * (j + 2.0);
        w_pow /= w * w;
    }
    head
}

/// Agreement demanded between the two cutoffs in [`zeta_prime_2`].
pub const ZETA_PRIME_AGREEMENT: f64 = 1e-10;

/// `ζ′(2)`, checked at two Euler–Maclaurin cutoffs.
pub fn zeta_prime_2() -> Result<f64> {
    let coarse = zeta_prime_with_cutoff(2.0, 20);
    let fine = zeta_prime_with_cutoff(2.0, 40);
    if (coarse - fine).abs() > ZETA_PRIME_AGREEMENT {
        return Err(Error::Consistency(format!(
            "zeta'(2) cutoffs disagree: {coarse} vs {fine}"
        )));
    }
    Ok(fine)
}

/// `ζ′(2)/ζ(2)`.
pub fn zeta_prime_over_zeta_at_2() -> Result<f64> {
    Ok(zeta_prime_2()? / zeta2())
}

pub(crate) fn zeta2() -> f64 {
    std::f64::consts::PI.powi(2) / 6.0
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn gamma_routes_agree() {
        let g = euler_gamma().unwrap();
        assert!((g - 0.577215664902).abs() < 1e-12);
        assert!((gamma_euler_maclaurin(100) - gamma_euler_maclaurin(200)).abs() < 1e-12);
        assert!((gamma_euler_maclaurin(200) - gamma_brent_mcmillan(12)).abs() < 1e-13);
    }

    #[test]
    fn harmonic_excess_decreases_to_gamma() {
        let g = euler_gamma().unwrap();
        let mut h = 0.0;
        let mut prev = f64::INFINITY;
        for n in 1..=2000u32 {
            h += 1.0 / n as f64;
            let excess = h - (n as f64).ln();
            assert!(excess > g && excess < prev);
            prev = excess;
        }
    }

    #[test]
    fn zeta_closed_forms() {
        assert!((zeta_real(2.0).unwrap() - PI * PI / 6.0).abs() < 1e-12);
        assert!((zeta_real(4.0).unwrap() - PI.powi(4) / 90.0).abs() < 1e-12);
        assert!((zeta_real(3.0).unwrap() - 1.2020569031595942).abs() < 1e-12);
        assert!((zeta_real(0.5).unwrap() + 1.4603545088095868).abs() < 1e-12);
        assert!((zeta_real(0.0).unwrap() + 0.5).abs() < 1e-12);
    }

    #[test]
    fn zeta_three_two_cutoffs() {
        let s = c(3.0, 0.0);
        let (h1, w1) = hurwitz_parts(s, 1.0, 12);
        let (h2, w2) = hurwitz_parts(s, 1.0, 48);
        let z1 = h1 + w1 / (s - 1.0);
        let z2 = h2 + w2 / (s - 1.0);
        assert!((z1 - z2).norm() < 1e-13);
        assert!((z2.re - 1.2020569032).abs() < 1e-9);
    }

    #[test]
    fn zeta_on_contour_is_cutoff_stable() {
        for j in 0..32 {
            let t = 2.0 * PI * j as f64 / 32.0;
            let s = c(1.0 + 0.25 * t.cos(), 0.25 * t.sin());
            let (h1, w1) = hurwitz_parts(s, 1.0, 16);
            let (h2, w2) = hurwitz_parts(s, 1.0, 64);
            let a = (s - 1.0) * h1 + w1;
            let b = (s - 1.0) * h2 + w2;
            assert!((a - b).norm() < 1e-13, "s={s}");
        }
    }

    #[test]
    fn zeta_regular_limit_and_conjugate_symmetry() {
        assert!((zeta_regular(c(1.0, 0.0)) - c(1.0, 0.0)).norm() < 1e-14);
        let g = euler_gamma().unwrap();
        let h = 1e-5;
        let d = (zeta_regular(c(1.0 + h, 0.0)) - zeta_regular(c(1.0 - h, 0.0))).re / (2.0 * h);
        assert!((d - g).abs() < 1e-8);
        let s = c(0.8, 0.2);
        assert!((zeta(s).unwrap().conj() - zeta(s.conj()).unwrap()).norm() < 1e-14);
    }

    #[test]
    fn pole_and_domain_guards() {
        assert!(zeta(c(1.0, 0.0)).is_err());
        assert!(zeta(c(1.0005, 0.0)).is_err());
        assert!(zeta(c(-1.5, 0.0)).is_err());
        assert!(hurwitz_zeta(c(2.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn hurwitz_special_values() {
        // ζ(s, 1/2) = (2^s − 1) ζ(s)
        let z = hurwitz_zeta(c(2.0, 0.0), 0.5).unwrap().re;
        assert!((z - 3.0 * PI * PI / 6.0).abs() < 1e-12);
        // ζ(2, 1/4) − ζ(2, 3/4) = 16 G (Catalan)
        let d = hurwitz_zeta(c(2.0, 0.0), 0.25).unwrap().re - hurwitz_zeta(c(2.0, 0.0), 0.75).unwrap().re;
        assert!((d - 16.0 * 0.915_965_594_177_219).abs() < 1e-12);
    }

    #[test]
    fn zeta_prime_values() {
        let zp = zeta_prime_2().unwrap();
        assert!((zp + 0.9375482543).abs() < 1e-10);
        assert!((zeta_prime_with_cutoff(2.0, 20) - zeta_prime_with_cutoff(2.0, 60)).abs() < 1e-10);
        let ratio = zeta_prime_over_zeta_at_2().unwrap();
        assert!(ratio > -0.58 && ratio < -0.56);
        assert!((ratio + 0.5699).abs() < 1e-3);
        // cross-check against a central difference of ζ
        let h = 1e-5;
        let fd = (zeta_real(2.0 + h).unwrap() - zeta_real(2.0 - h).unwrap()) / (2.0 * h);
        assert!((fd - zp).abs() < 1e-8, "fd={fd} zp={zp}");
        let c1 = 6.0 * euler_gamma().unwrap() - 4.0 * ratio - 2.0;
        assert!((c1 - 3.7431).abs() < 2e-3);
    }

    #[test]
    fn digamma_values() {
        let g = euler_gamma().unwrap();
        assert!((digamma(1.0) + g).abs() < 1e-14);
        assert!((digamma(0.5) + g + 2.0 * 2f64.ln()).abs() < 1e-14);
        // ψ(1/4) = −γ − π/2 − 3 log 2
        assert!((digamma(0.25) + g + PI / 2.0 + 3.0 * 2f64.ln()).abs() < 1e-13);
        // ψ(x+1) = ψ(x) + 1/x, asymptotic region
        for x in [0.3, 2.7, 15.0, 1e5] {
            assert!((digamma(x + 1.0) - digamma(x) - 1.0 / x).abs() < 1e-13);
        }
    }
}
