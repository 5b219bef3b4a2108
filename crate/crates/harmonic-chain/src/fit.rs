//! Ordinary least-squares line fitting for slope checks.

use serde::Serialize;

use crate::error::{ChainError, Result};

#[derive(Clone, Copy, Debug, Serialize)]
pub struct FitResult {
    pub slope: f64,
    pub intercept: f64,
    pub residual_rms: f64,
    pub points_used: usize,
}

/// Least-squares straight line through `(x, y)` pairs; requires at least
/// three points.
pub fn fit_line(xs: &[f64], ys: &[f64]) -> Result<FitResult> {
    if xs.len() != ys.len() {
        return Err(ChainError::config("x and y lengths differ"));
    }
    let n = xs.len();
    if n < 3 {
        return Err(ChainError::config(format!("need at least 3 points, got {n}")));
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        return Err(ChainError::numerical("degenerate fit: all x values identical"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = xs
        .iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Ok(FitResult {
        slope,
        intercept,
        residual_rms: (ss / nf).sqrt(),
        points_used: n,
    })
}
