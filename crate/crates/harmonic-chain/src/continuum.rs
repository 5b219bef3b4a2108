//! Continuum massive-field correlators and their correspondence with the
//! discretized chain.
//!
//! The ground state of the 1D massive scalar field has
//! `g(x) = (1/2 pi) K0(mu |x|)` and `h(x) = -(mu/(2 pi |x|)) K1(mu |x|)`;
//! a ring of `N` oscillators with coupling `alpha = 1 - (mu/Lambda)^2`,
//! `Lambda = sqrt(2 (N/L)^2 + mu^2)`, reproduces them up to fixed scale
//! factors as `N` grows.

use serde::Serialize;

use crate::chain_model::{correlation_at, ChainSpec};
use crate::error::{ChainError, Result};
use crate::special::{bessel_k0, bessel_k1};

/// A massive continuum field on a circle, plus the lattice resolution used
/// for correspondence checks.
#[derive(Clone, Copy, Debug)]
pub struct ContinuumSpec {
    /// Field mass.
    pub mu: f64,
    /// Circumference.
    pub len: f64,
    /// Number of lattice sites used to discretize.
    pub n: usize,
}

impl ContinuumSpec {
    pub fn new(mu: f64, len: f64, n: usize) -> Result<Self> {
        if !(mu > 0.0 && len > 0.0) {
            return Err(ChainError::config("mu and L must be positive"));
        }
        if n < 2 {
            return Err(ChainError::config("discretization needs N >= 2"));
        }
        let spec = ContinuumSpec { mu, len, n };
        if spec.mu * spec.len / n as f64 >= 1.0 {
            return Err(ChainError::config(format!(
                "mu L / N = {} must be < 1 for a meaningful discretization",
                spec.mu * spec.len / n as f64
            )));
        }
        Ok(spec)
    }
}

/// Continuum position correlator `(1/2 pi) K0(mu |x|)`.
pub fn g_cont(x: f64, mu: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(ChainError::config("continuum correlator diverges at x = 0"));
    }
    Ok(bessel_k0(mu * x.abs()) / (2.0 * std::f64::consts::PI))
}

/// Continuum momentum correlator `-(mu/(2 pi |x|)) K1(mu |x|)` (even in `x`).
pub fn h_cont(x: f64, mu: f64) -> Result<f64> {
    if x == 0.0 {
        return Err(ChainError::config("continuum correlator diverges at x = 0"));
    }
    Ok(-mu / (2.0 * std::f64::consts::PI * x.abs()) * bessel_k1(mu * x.abs()))
}

/// Map the continuum theory to an `N`-site chain: returns the chain spec at
/// the effective coupling together with the frequency scale `Lambda` (which
/// is also the ground-state energy unit `E_0`).
pub fn discretize(cont: &ContinuumSpec) -> Result<(ChainSpec, f64, f64)> {
    let density = cont.n as f64 / cont.len;
    let lambda_scale = (2.0 * density * density + cont.mu * cont.mu).sqrt();
    // 1 - alpha = (mu/Lambda)^2, exact; build the spec through xi to keep
    // the stored complementary fields cancellation-free.
    let ratio2 = (cont.mu / lambda_scale).powi(2);
    let alpha = 1.0 - ratio2;
    let xi = 0.25 * ((2.0 - ratio2) / ratio2).ln();
    let spec = ChainSpec::from_xi(cont.n, xi)?;
    debug_assert!((spec.alpha - alpha).abs() < 1e-12);
    Ok((spec, lambda_scale, lambda_scale))
}

/// Nearest lattice index for position `x in [-L/2, L/2)`.
pub fn lattice_index(x: f64, cont: &ContinuumSpec) -> usize {
    ((x + 0.5 * cont.len) * cont.n as f64 / cont.len).round() as usize
}

/// One row of a correspondence check at a grid-aligned position.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CorrespondenceRow {
    pub x: f64,
    pub n: usize,
    pub g_discrete: f64,
    pub g_cont: f64,
    pub rel_err: f64,
    pub h_discrete: f64,
    pub h_cont: f64,
    pub rel_err_h: f64,
}

/// Compare the continuum correlators at separation `x` against the
/// discretized chain: `g~ = (1/sqrt(2)) g^(N)` and `h~ = sqrt(2) (N/L)^2 h^(N)`
/// at the matching lattice separation.
pub fn correspondence_check(cont: &ContinuumSpec, x: f64) -> Result<CorrespondenceRow> {
    let (spec, _, _) = discretize(cont)?;
    let sep = lattice_index(x, cont) as isize - lattice_index(0.0, cont) as isize;
    let sep = sep.unsigned_abs() % cont.n;
    if sep == 0 {
        return Err(ChainError::config("separation rounds to zero lattice sites"));
    }
    let (g_n, h_n) = correlation_at(&spec, sep);
    let density = cont.n as f64 / cont.len;
    let g_d = g_n / std::f64::consts::SQRT_2;
    let h_d = std::f64::consts::SQRT_2 * density * density * h_n;
    let g_c = g_cont(x, cont.mu)?;
    let h_c = h_cont(x, cont.mu)?;
    Ok(CorrespondenceRow {
        x,
        n: cont.n,
        g_discrete: g_d,
        g_cont: g_c,
        rel_err: ((g_d - g_c) / g_c).abs(),
        h_discrete: h_d,
        h_cont: h_c,
        rel_err_h: ((h_d - h_c) / h_c).abs(),
    })
}
