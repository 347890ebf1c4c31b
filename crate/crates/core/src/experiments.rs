//! Error scans against the main terms and least-squares fits in `log N`.

use std::io::Write;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::main_term::{main_term_coeffs, FullMainTerm, MainTermModel};
use crate::characters::L1Mode;
use crate::counting::s_sieve;
use crate::error::{Error, Result};

/// One row of a [`delta_scan`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaRecord {
    #[serde(rename = "N")]
    pub n: u64,
    pub a: u64,
    #[serde(rename = "S_exact")]
    pub s_exact: u64,
    pub main_full: f64,
    pub main_thm1: f64,
    pub delta_full: f64,
    /// `delta_full / √N`
    pub delta_norm: f64,
}

pub const CSV_HEADER: &str = "N,a,S_exact,main_full,main_thm1,delta_full,delta_norm";

/// Exact `S(N;a)` against both main terms on every `N` of `grid`.
pub fn delta_scan(a: u64, grid: &[u64]) -> Result<Vec<DeltaRecord>> {
    delta_scan_with(a, grid, L1Mode::Exact)
}

pub fn delta_scan_with(a: u64, grid: &[u64], mode: L1Mode) -> Result<Vec<DeltaRecord>> {
    if grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("grid must be strictly increasing".into()));
    }
    let full = FullMainTerm::new(a, mode)?;
    let model = main_term_coeffs(a)?;
    grid.par_iter()
        .map(|&n| {
            let s = s_sieve(n, a)?;
            let main_full = full.evaluate(n)?;
            let nf = n as f64;
            let delta = s as f64 - main_full;
            Ok(DeltaRecord {
                n,
                a,
                s_exact: s,
                main_full,
                main_thm1: model.evaluate(nf),
                delta_full: delta,
                delta_norm: delta / nf.sqrt(),
            })
        })
        .collect()
}

/// Powers of two `2^lo ..= 2^hi`.
pub fn dyadic_grid(lo: u32, hi: u32) -> Vec<u64> {
    (lo..=hi).map(|k| 1u64 << k).collect()
}

/// Fixed 12-significant-digit rendering.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{:.11e}", x)
}

pub fn write_csv<W: Write>(out: W, records: &[DeltaRecord]) -> Result<()> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
    let io = |e: csv::Error| Error::Consistency(format!("csv write failed: {e}"));
    w.write_record(CSV_HEADER.split(',')).map_err(io)?;
    for r in records {
        w.write_record([
            r.n.to_string(),
            r.a.to_string(),
            r.s_exact.to_string(),
            fmt_sig(r.main_full),
            fmt_sig(r.main_thm1),
            fmt_sig(r.delta_full),
            fmt_sig(r.delta_norm),
        ])
        .map_err(io)?;
    }
    w.flush()
        .map_err(|e| Error::Consistency(format!("csv flush failed: {e}")))
}

/// Least-squares polynomial in `log N` fitted to `value/N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub degree: usize,
    /// Highest power first.
    pub coefficients: Vec<f64>,
    pub rms_residual: f64,
    /// `(N_min, N_max)` of the points used.
    pub window: (f64, f64),
}

impl FitResult {
    pub fn evaluate(&self, big_n: f64) -> f64 {
        let l = big_n.ln();
        big_n * self.coefficients.iter().fold(0.0, |acc, c| acc * l + c)
    }
}

/// Fits `value/N ≈ Σ_k c_k (log N)^k` by SVD least squares. Needs at least
/// `degree + 2` points so the residual is meaningful.
pub fn fit_log_poly(points: &[(f64, f64)], degree: usize) -> Result<FitResult> {
    if points.len() < degree + 2 {
        return Err(Error::Domain(format!(
            "fit of degree {degree} needs at least {} points, got {}",
            degree + 2,
            points.len()
        )));
    }
    if points.iter().any(|&(n, v)| n <= 1.0 || !v.is_finite()) {
        return Err(Error::Domain("fit points need N > 1 and finite values".into()));
    }
    let cols = degree + 1;
    // columns scaled to unit max so the conditioning does not depend on N
    let logs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let lmax = logs.iter().cloned().fold(0.0, f64::max);
    let design = DMatrix::from_fn(points.len(), cols, |i, j| (logs[i] / lmax).powi((degree - j) as i32));
    let rhs = DVector::from_iterator(points.len(), points.iter().map(|&(n, v)| v / n));
    let svd = design.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    if smin <= smax * 1e-12 {
        return Err(Error::Singular(format!(
            "design matrix is rank deficient (singular values {smin:e}..{smax:e})"
        )));
    }
    let sol = svd
        .solve(&rhs, smax * 1e-14)
        .map_err(|e| Error::Singular(e.to_string()))?;
    let resid = &design * &sol - &rhs;
    let coefficients = (0..cols)
        .map(|j| sol[j] / lmax.powi((degree - j) as i32))
        .collect();
    let nmin = points.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let nmax = points.iter().map(|p| p.0).fold(0.0, f64::max);
    Ok(FitResult {
        degree,
        coefficients,
        rms_residual: (resid.norm_squared() / points.len() as f64).sqrt(),
        window: (nmin, nmax),
    })
}

/// Slope of `log|Δ|` against `log N`.
pub fn growth_exponent(records: &[DeltaRecord]) -> Result<f64> {
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| {
            let keep = r.delta_full != 0.0;
            if !keep {
                log::warn!("skipping N={} with zero error", r.n);
            }
            keep
        })
        .map(|r| ((r.n as f64).ln(), r.delta_full.abs().ln()))
        .collect();
    if pts.len() < 6 {
        return Err(Error::Domain(format!(
            "growth exponent needs at least 6 non-zero records, got {}",
            pts.len()
        )));
    }
    let m = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / m;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / m;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    Ok(sxy / sxx)
}

/// Sets `c0_fitted` from a degree-2 fit of `S(N;a)` with the leading and
/// linear coefficients held at their model values.
pub fn fill_c0_fitted(model: &mut MainTermModel, records: &[DeltaRecord]) -> Result<f64> {
    if records.is_empty() {
        return Err(Error::Domain("no records to fit c0".into()));
    }
    let sum: f64 = records
        .iter()
        .map(|r| {
            let nf = r.n as f64;
            let l = nf.ln();
            r.s_exact as f64 / (model.leading * nf) - l * l - model.c1 * l
        })
        .sum();
    let c0 = sum / records.len() as f64;
    model.c0_fitted = Some(c0);
    Ok(c0)
}
