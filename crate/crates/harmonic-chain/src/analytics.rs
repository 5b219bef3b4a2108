//! Closed-form approximations for the mode structure: the three
//! single-oscillator regimes, the weak-coupling (edge-localized) spectrum,
//! the strong-coupling collective mode, and the continuum model of the
//! residual modes with its WKB-style quantization.

use serde::Serialize;

use crate::chain_model::{ChainSpec, CorrelationTable, Regime};
use crate::error::{ChainError, Result};
use crate::special::{digamma, EULER_GAMMA};

use std::f64::consts::PI;

/// Symplectic eigenvalue of a single oscillator vs the rest of the chain,
/// in the regime-specific approximation.
pub fn single_osc_lambda(spec: &ChainSpec, regime: Regime) -> f64 {
    let scales = spec.regime_scales();
    match regime {
        Regime::I => 0.5 + spec.z * spec.z / 8.0,
        Regime::II => (4.0 * scales.n_t).ln().sqrt() / PI,
        Regime::III => (scales.n_t / (2.0 * PI * spec.n as f64)).sqrt(),
    }
}

/// Single-oscillator entanglement in the branch selected by the regime
/// classifier:
///
/// ```text
/// I:   (z^2/8) (1 - ln(z^2/8))
/// II:  1 + (1/2) ln( ln(4 N_t) / pi^2 )
/// III: 1 + (1/2) ln( N_t / (2 pi N) )
/// ```
pub fn single_osc_entropy(spec: &ChainSpec) -> f64 {
    single_osc_entropy_branch(spec, spec.regime())
}

/// Same, with the branch forced explicitly.
pub fn single_osc_entropy_branch(spec: &ChainSpec, regime: Regime) -> f64 {
    let scales = spec.regime_scales();
    match regime {
        Regime::I => {
            let d = spec.z * spec.z / 8.0;
            d * (1.0 - d.ln())
        }
        Regime::II => 1.0 + 0.5 * ((4.0 * scales.n_t).ln() / (PI * PI)).ln(),
        Regime::III => 1.0 + 0.5 * (scales.n_t / (2.0 * PI * spec.n as f64)).ln(),
    }
}

/// Weak-coupling symplectic eigenvalue of the mode localized at depth `d_m`
/// from the block edge: `lambda = 1/2 + (z/4)^{2(2 d_m - 1)}`.
pub fn weak_mode_lambda(d_m: usize, z: f64) -> f64 {
    assert!(d_m >= 1);
    0.5 + (z / 4.0).powi(2 * (2 * d_m as i32 - 1))
}

/// Weak-coupling per-mode entanglement:
/// `E = (z/4)^{2(2 d_m - 1)} [1 - 2(2 d_m - 1) ln(z/4)]`.
/// Even and odd modes of equal depth share this value to leading order.
pub fn weak_mode_entropy(d_m: usize, z: f64) -> f64 {
    assert!(d_m >= 1);
    let e = 2.0 * (2.0 * d_m as f64 - 1.0);
    (z / 4.0).powf(e) * (1.0 - e * (z / 4.0).ln())
}

/// Eigenvalue of the edge-localized two-site ("wedge") ansatz at depth
/// `d_m`, parity +/-1:
/// `lambda^2 = 1/4 - [h_{N_b} +/- h_{2 d_m - 1}] [g_{N_b} +/- g_{2 d_m - 1}]`.
pub fn wedge_lambda(d_m: usize, n_b: usize, table: &CorrelationTable, parity: i8) -> f64 {
    assert!(d_m >= 1 && 2 * d_m - 1 < n_b);
    let s = parity as f64;
    let h = table.h(n_b) + s * table.h(2 * d_m - 1);
    let g = table.g(n_b) + s * table.g(2 * d_m - 1);
    (0.25 - h * g).sqrt()
}

/// Strong-coupling momentum weight of the uniform vector:
/// `h_chi = (1/(sqrt(2) N_b pi)) [psi(N_b + 1/2) + ln 4 + gamma]`.
pub fn h_chi(n_b: usize) -> f64 {
    (digamma(n_b as f64 + 0.5) + 4.0f64.ln() + EULER_GAMMA)
        / (std::f64::consts::SQRT_2 * n_b as f64 * PI)
}

/// Collective-mode symplectic eigenvalue `lambda_c = sqrt(N_b g_0 h_chi)`.
pub fn collective_lambda(n_b: usize, g_0: f64) -> f64 {
    (n_b as f64 * g_0 * h_chi(n_b)).sqrt()
}

/// Coupling of the plane-wave residual mode of frequency `omega`:
/// `kappa^2 = (1/4) sinh^{-2}(pi omega)`, i.e. `lambda = (1/2) coth(pi omega)`.
pub fn kappa_of_omega(omega: f64) -> f64 {
    let s = (PI * omega).sinh();
    0.25 / (s * s)
}

/// `lambda(omega) = (1/2) coth(pi omega)`.
pub fn lambda_of_omega(omega: f64) -> f64 {
    0.5 / (PI * omega).tanh()
}

/// Continuum model of the residual-mode kernel.
#[derive(Clone, Copy, Debug)]
pub struct ResidualModel {
    /// Turning-point constant; the empirical fit value is 0.45.
    pub zeta: f64,
    pub n_b: usize,
}

impl ResidualModel {
    pub fn new(zeta: f64, n_b: usize) -> Result<Self> {
        if !(zeta > 0.0 && zeta < 1.0) {
            return Err(ChainError::config(format!("zeta = {zeta} must lie in (0,1)")));
        }
        Ok(ResidualModel { zeta, n_b })
    }
}

/// One solved point of the residual-mode quantization.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ScalingPoint {
    /// `m / N_b`.
    pub mu_scaled: f64,
    /// Scaled central frequency `4 omega / (pi N_b)`.
    pub f: f64,
    pub omega: f64,
    /// Predicted `ln E_m / N_b = -(pi^2/2) f`.
    pub ln_e_over_nb: f64,
    /// Turning point `x_t = (1/2) sqrt(1 - zeta f)` in block units.
    pub x_t: f64,
}

/// Left-hand side of the quantization condition; strictly increasing in `f`
/// on `(0, 1/zeta)`, with limits 0 and 1.
fn quantization_mu(f: f64, zeta: f64) -> f64 {
    let s = (1.0 - zeta * f).max(0.0).sqrt();
    if s == 0.0 {
        return 1.0;
    }
    1.0 - s + 0.5 * f * ((1.0 + s) / (1.0 - s)).ln()
}

/// Solve the residual-mode quantization condition for mode `m` of a block
/// of `model.n_b` sites:
///
/// `1 - sqrt(1 - zeta f) + (f/2) ln((1+sqrt(1-zeta f))/(1-sqrt(1-zeta f))) = m/N_b`
///
/// by bisection on `f in (0, 1/zeta)` to 1e-10.
pub fn quantize_residual(m: usize, model: &ResidualModel) -> Result<ScalingPoint> {
    if m < 2 || m > model.n_b {
        return Err(ChainError::config(format!(
            "mode number m = {m} must satisfy 2 <= m <= N_b = {}",
            model.n_b
        )));
    }
    let mu = m as f64 / model.n_b as f64;
    if mu > 1.0 {
        return Err(ChainError::numerical(format!("no quantized root for mu = {mu} > 1")));
    }
    let (mut lo, mut hi) = (0.0f64, 1.0 / model.zeta);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if quantization_mu(mid, model.zeta) < mu {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-10 * hi.max(1.0) {
            break;
        }
    }
    let f = 0.5 * (lo + hi);
    let omega = 0.25 * PI * model.n_b as f64 * f;
    Ok(ScalingPoint {
        mu_scaled: mu,
        f,
        omega,
        ln_e_over_nb: -0.5 * PI * PI * f,
        x_t: 0.5 * (1.0 - model.zeta * f).max(0.0).sqrt(),
    })
}

/// Scaling prediction `ln E_m / N_b = -(pi^2/2) f(m/N_b)`; a function of
/// `m/N_b` alone, which is the collapse statement.
pub fn residual_scaling_prediction(m: usize, n_b: usize, zeta: f64) -> Result<f64> {
    Ok(quantize_residual(m, &ResidualModel::new(zeta, n_b)?)?.ln_e_over_nb)
}

/// Linear small-mode spectrum `omega_m = m pi / (2 ln N_b)`.
pub fn outer_mode_omega(m: usize, n_b: usize) -> f64 {
    m as f64 * PI / (2.0 * (n_b as f64).ln())
}

/// Leading residual-mode entropy `(1/3) ln N_b` (the `ln ln` corrections are
/// deliberately not modeled).
pub fn asymptotic_residual_entropy(n_b: usize) -> f64 {
    (n_b as f64).ln() / 3.0
}

/// The three pieces of the scaled residual kernel `Gamma(x, y)`,
/// `N_b C_{ij} ~ Gamma(i/N_b, j/N_b)` for block-centered indices:
///
/// ```text
/// Gamma_CS = -(sqrt(2)/(4 pi (1/4 - y^2))) [g_0 - ln(N_b sqrt(1/4 - x^2))/(sqrt(2) pi)]
/// Gamma_CA = x/(4 pi^2 (1/4 - x^2)) ln((1+2y)/(1-2y))
/// Gamma_R  = (1/(4 pi^2 (x-y))) ln( (1+2x)(1-2y) / ((1-2x)(1+2y)) )
/// ```
///
/// `Gamma_CS`/`Gamma_CA` are the rank-one pieces carrying the collective
/// even/odd modes; `Gamma_R` drives the bulk of the residual spectrum.
pub fn continuum_kernel(x: f64, y: f64, spec: &ChainSpec, n_b: usize) -> Result<(f64, f64, f64)> {
    if !(x.abs() < 0.5 && y.abs() < 0.5) {
        return Err(ChainError::config(format!(
            "kernel arguments (x, y) = ({x}, {y}) must lie inside (-1/2, 1/2)"
        )));
    }
    let g0 = crate::chain_model::g_infinite(0, spec)?;
    let gamma_cs = -std::f64::consts::SQRT_2 / (4.0 * PI * (0.25 - y * y))
        * (g0 - (n_b as f64 * (0.25 - x * x).sqrt()).ln() / (std::f64::consts::SQRT_2 * PI));
    let gamma_ca =
        x / (4.0 * PI * PI * (0.25 - x * x)) * ((1.0 + 2.0 * y) / (1.0 - 2.0 * y)).ln();
    let gamma_r = if (x - y).abs() < 1e-6 {
        // Finite diagonal limit of the log ratio.
        1.0 / (PI * PI * (1.0 - 4.0 * x * x))
    } else {
        ((1.0 + 2.0 * x) * (1.0 - 2.0 * y) / ((1.0 - 2.0 * x) * (1.0 + 2.0 * y))).ln()
            / (4.0 * PI * PI * (x - y))
    };
    Ok((gamma_cs, gamma_ca, gamma_r))
}

/// The translation-invariant form of the residual kernel after the
/// `u = ln((1+2x)/(1-2x))` change of variables:
/// `Gamma_R(u, v) = (1/(8 pi^2)) (u-v)/tanh((u-v)/2)`.
pub fn residual_kernel_flat(u: f64, v: f64) -> f64 {
    let d = u - v;
    if d.abs() < 1e-12 {
        return 0.25 / (PI * PI);
    }
    d / (0.5 * d).tanh() / (8.0 * PI * PI)
}
