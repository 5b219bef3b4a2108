//! Entropies of symplectic eigenvalues and full block-entanglement reports.

use serde::Serialize;

use crate::chain_model::{ChainSpec, CorrelationTable, Regime};
use crate::error::{ChainError, Result};
use crate::gaussian::{
    self, BlockPartition, RawMode,
};

/// Von Neumann entropy of one mode:
/// `S(lambda) = (lambda+1/2) ln(lambda+1/2) - (lambda-1/2) ln(lambda-1/2)`,
/// with `S(1/2) = 0` exactly.
pub fn entropy_of_lambda(lambda: f64) -> Result<f64> {
    if lambda < 0.5 - 1e-9 {
        return Err(ChainError::numerical(format!(
            "symplectic eigenvalue {lambda} below the vacuum value 1/2"
        )));
    }
    let d = lambda - 0.5;
    if d <= 0.0 {
        return Ok(0.0);
    }
    Ok((lambda + 0.5) * (lambda + 0.5).ln() - d * d.ln())
}

/// Entropy evaluated from the squared coupling `kappa^2 = lambda^2 - 1/4`.
///
/// `lambda - 1/2 = kappa^2 / (lambda + 1/2)` keeps full precision for modes
/// arbitrarily close to the vacuum, where the direct subtraction would lose
/// every digit.
pub fn entropy_of_kappa2(kappa2: f64) -> f64 {
    if kappa2 <= 0.0 {
        return 0.0;
    }
    let lambda = (0.25 + kappa2).sqrt();
    let d = kappa2 / (lambda + 0.5);
    (lambda + 0.5) * (lambda + 0.5).ln() - d * d.ln()
}

/// Boltzmann exponent `beta = ln((lambda+1/2)/(lambda-1/2))`; infinity for
/// an unentangled mode.
pub fn beta_of_lambda(lambda: f64) -> f64 {
    let d = lambda - 0.5;
    if d <= 0.0 {
        return f64::INFINITY;
    }
    ((lambda + 0.5) / d).ln()
}

/// Piecewise expansion of the entropy: `(lambda-1/2)(1 - ln(lambda-1/2))`
/// near the vacuum, `1 + ln lambda` for hot modes, the exact formula in
/// between. The thresholds keep the switch error below 1%.
pub fn entropy_expansions(lambda: f64) -> f64 {
    let d = lambda - 0.5;
    if d <= 0.0 {
        0.0
    } else if d < 0.01 {
        d * (1.0 - d.ln())
    } else if lambda > 50.0 {
        1.0 + lambda.ln()
    } else {
        (lambda + 0.5) * (lambda + 0.5).ln() - d * d.ln()
    }
}

/// One entangled Williamson mode pair, in serialization-ready form.
#[derive(Clone, Debug, Serialize)]
pub struct ModePair {
    pub lambda: f64,
    pub kappa: f64,
    pub parity: i8,
    pub entropy: f64,
    /// `ln((lambda+1/2)/(lambda-1/2))`; absent (None) when the mode is
    /// unentangled and the value overflows to infinity.
    pub beta: Option<f64>,
    pub turning_point: f64,
    #[serde(rename = "u_A")]
    pub u_a: Vec<f64>,
    #[serde(rename = "v_A")]
    pub v_a: Vec<f64>,
    /// Complement-side mode functions; None when `kappa` is below the
    /// mapping floor.
    #[serde(rename = "u_B")]
    pub u_b: Option<Vec<f64>>,
    #[serde(rename = "v_B")]
    pub v_b: Option<Vec<f64>>,
    #[serde(rename = "participation_A")]
    pub participation_a: Vec<f64>,
    /// True when the mode sits in a flagged within-sector degeneracy.
    pub degenerate: bool,
}

/// Complete entanglement analysis of one bipartition.
#[derive(Clone, Debug, Serialize)]
pub struct EntanglementReport {
    pub spec: ChainSpec,
    pub partition: BlockPartition,
    /// Modes sorted by (entropy desc, parity, turning point).
    pub modes: Vec<ModePair>,
    /// Total entanglement: compensated sum of the mode entropies.
    pub total: f64,
    pub regime: Regime,
    pub per_mode_beta: Vec<f64>,
}

/// Modes closer to the vacuum than this are reported unentangled.
const LAMBDA_TRIVIAL: f64 = 1e-12;

/// Run the full pipeline: extract covariances, decompose into parity-sector
/// Williamson modes, map every resolvable mode to the complement, and
/// assemble entropies.
pub fn analyze_block(table: &CorrelationTable, part: &BlockPartition) -> Result<EntanglementReport> {
    let cov = gaussian::extract_block(table, part);
    let raw = gaussian::williamson_modes(&cov)
        .map_err(|e| ChainError::numerical(format!("mode decomposition: {e}")))?;
    let floor = gaussian::mapping_floor(&cov);

    let mut modes = Vec::with_capacity(raw.len());
    for (i, m) in raw.iter().enumerate() {
        modes.push(assemble_mode(&cov, m, i, floor)?);
    }
    modes.sort_by(|a, b| {
        b.entropy
            .partial_cmp(&a.entropy)
            .unwrap()
            .then(a.parity.cmp(&b.parity))
            .then(a.turning_point.partial_cmp(&b.turning_point).unwrap())
    });

    // Compensated total.
    let (mut total, mut comp) = (0.0f64, 0.0f64);
    for m in &modes {
        let y = m.entropy - comp;
        let t = total + y;
        comp = (t - total) - y;
        total = t;
    }

    let per_mode_beta = modes.iter().filter_map(|m| m.beta).collect();
    Ok(EntanglementReport {
        spec: table.spec,
        partition: *part,
        modes,
        total,
        regime: table.spec.regime(),
        per_mode_beta,
    })
}

fn assemble_mode(
    cov: &gaussian::BlockCovariance,
    m: &RawMode,
    index: usize,
    floor: f64,
) -> Result<ModePair> {
    let entangled = m.lambda - 0.5 > LAMBDA_TRIVIAL || m.kappa2 > LAMBDA_TRIVIAL * LAMBDA_TRIVIAL;
    let (u_b, v_b) = if entangled && m.kappa2 >= floor {
        let (u, v) = gaussian::map_modes(cov, m, index)
            .map_err(|e| ChainError::numerical(format!("mode mapping: {e}")))?;
        (
            Some(u.iter().copied().collect()),
            Some(v.iter().copied().collect()),
        )
    } else {
        (None, None)
    };
    let participation_a = gaussian::participation(&m.u_a, &m.v_a);
    let turning = gaussian::turning_point(&participation_a);
    let entropy = entropy_of_kappa2(m.kappa2);
    let beta = {
        let b = beta_of_lambda(m.lambda);
        b.is_finite().then_some(b)
    };
    Ok(ModePair {
        lambda: m.lambda,
        kappa: m.kappa2.sqrt(),
        parity: m.parity,
        entropy,
        beta,
        turning_point: turning,
        u_a: m.u_a.iter().copied().collect(),
        v_a: m.v_a.iter().copied().collect(),
        u_b,
        v_b,
        participation_a,
        degenerate: m.degenerate,
    })
}
