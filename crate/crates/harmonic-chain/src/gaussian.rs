//! Block covariance matrices and the modewise (Williamson) decomposition.
//!
//! For a block `A` of `N_b` contiguous sites the relevant data are the four
//! matrices `G_A`, `H_A` (local position/momentum covariances) and `G_AB`,
//! `H_AB` (correlations with the complement `B`). The symplectic spectrum of
//! the block is `lambda_m = sqrt(eig(G_A^{1/2} H_A G_A^{1/2}))`, each
//! `lambda_m >= 1/2`, and every `lambda_m > 1/2` corresponds to one entangled
//! mode pair `(u_A, v_A) <-> (u_B, v_B)` connected through the cross blocks.
//!
//! Everything is done per parity sector: reflection about the block center
//! commutes with all four matrices, which both halves the eigenproblems and
//! lifts the even/odd near-degeneracy of the weak-coupling regime.

use nalgebra::{DMatrix, DVector};

use crate::chain_model::CorrelationTable;
use crate::error::{ChainError, Result};

/// A contiguous block of sites on the ring. The block must be no larger than
/// its complement.
#[derive(Clone, Copy, Debug, serde::Serialize)]
pub struct BlockPartition {
    /// Global index of the first site in the block.
    pub start: usize,
    /// Number of sites in the block.
    pub len: usize,
}

impl BlockPartition {
    pub fn new(n: usize, start: usize, len: usize) -> Result<Self> {
        if len == 0 || 2 * len > n {
            return Err(ChainError::config(format!(
                "block size {len} must satisfy 1 <= len <= N/2 = {}",
                n / 2
            )));
        }
        if start >= n {
            return Err(ChainError::config(format!("block start {start} out of range for N = {n}")));
        }
        Ok(BlockPartition { start, len })
    }

    /// The complementary block (the rest of the ring).
    pub fn complement(&self, n: usize) -> BlockPartition {
        BlockPartition {
            start: (self.start + self.len) % n,
            len: n - self.len,
        }
    }
}

/// The four covariance blocks of one bipartition.
#[derive(Clone, Debug)]
pub struct BlockCovariance {
    pub g_a: DMatrix<f64>,
    pub h_a: DMatrix<f64>,
    pub g_ab: DMatrix<f64>,
    pub h_ab: DMatrix<f64>,
}

impl BlockCovariance {
    pub fn block_len(&self) -> usize {
        self.g_a.nrows()
    }

    /// The cross product `C = -H_AB G_AB^T`, whose eigenvalues are the
    /// squared couplings `kappa^2 = lambda^2 - 1/4`.
    pub fn cross_product(&self) -> DMatrix<f64> {
        -(&self.h_ab * self.g_ab.transpose())
    }
}

/// Populate the covariance blocks from the correlation table: every entry is
/// a table lookup at the ring separation of the two sites involved.
pub fn extract_block(table: &CorrelationTable, part: &BlockPartition) -> BlockCovariance {
    let n = table.spec.n;
    let nb = part.len;
    let site = |i: usize| (part.start + i) % n;
    let comp_site = |j: usize| (part.start + nb + j) % n;
    let sep = |a: usize, b: usize| (n + a - b) % n;

    let g_a = DMatrix::from_fn(nb, nb, |i, j| table.g(sep(site(i), site(j))));
    let h_a = DMatrix::from_fn(nb, nb, |i, j| table.h(sep(site(i), site(j))));
    let g_ab = DMatrix::from_fn(nb, n - nb, |i, j| table.g(sep(site(i), comp_site(j))));
    let h_ab = DMatrix::from_fn(nb, n - nb, |i, j| table.h(sep(site(i), comp_site(j))));
    BlockCovariance {
        g_a,
        h_a,
        g_ab,
        h_ab,
    }
}

/// Projectors onto the reflection-even and reflection-odd subspaces of an
/// `nb`-site block, as column-orthonormal matrices. For odd `nb` the center
/// site belongs to the even sector.
pub fn parity_projectors(nb: usize) -> (DMatrix<f64>, DMatrix<f64>) {
    let half = nb / 2;
    let even_dim = nb - half;
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut q_even = DMatrix::zeros(nb, even_dim);
    let mut q_odd = DMatrix::zeros(nb, half);
    for c in 0..half {
        q_even[(c, c)] = inv_sqrt2;
        q_even[(nb - 1 - c, c)] = inv_sqrt2;
        q_odd[(c, c)] = inv_sqrt2;
        q_odd[(nb - 1 - c, c)] = -inv_sqrt2;
    }
    if nb % 2 == 1 {
        q_even[(half, even_dim - 1)] = 1.0;
    }
    (q_even, q_odd)
}

/// Compress the local covariances to their parity sectors:
/// `(G_even, H_even, G_odd, H_odd)`.
pub fn parity_sectors(
    cov: &BlockCovariance,
) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let (q_even, q_odd) = parity_projectors(cov.block_len());
    (
        q_even.transpose() * &cov.g_a * &q_even,
        q_even.transpose() * &cov.h_a * &q_even,
        q_odd.transpose() * &cov.g_a * &q_odd,
        q_odd.transpose() * &cov.h_a * &q_odd,
    )
}

/// Symmetric square root and inverse square root of a positive-definite
/// matrix. Fails if any eigenvalue is non-positive.
fn sym_sqrt(m: &DMatrix<f64>) -> Result<(DMatrix<f64>, DMatrix<f64>)> {
    let eig = m.clone().symmetric_eigen();
    let mut sqrt_vals = DVector::zeros(m.nrows());
    let mut inv_vals = DVector::zeros(m.nrows());
    for (i, &v) in eig.eigenvalues.iter().enumerate() {
        if v <= 0.0 {
            return Err(ChainError::numerical(format!(
                "covariance block is not positive definite (eigenvalue {v:.3e}); the correlation table is corrupted"
            )));
        }
        sqrt_vals[i] = v.sqrt();
        inv_vals[i] = 1.0 / v.sqrt();
    }
    let q = &eig.eigenvectors;
    let sqrt = q * DMatrix::from_diagonal(&sqrt_vals) * q.transpose();
    let inv = q * DMatrix::from_diagonal(&inv_vals) * q.transpose();
    Ok((sqrt, inv))
}

/// One Williamson mode pair as seen from the block side.
#[derive(Clone, Debug)]
pub struct RawMode {
    /// Symplectic eigenvalue, `>= 1/2`.
    pub lambda: f64,
    /// Squared coupling to the complement, `lambda^2 - 1/4`, evaluated by
    /// the cancellation-free cross route.
    pub kappa2: f64,
    /// Reflection parity of the mode functions (+1 even, -1 odd).
    pub parity: i8,
    /// Position mode function on the block, normalized to `u . v = 1` with
    /// `u^T G_A u = lambda`.
    pub u_a: DVector<f64>,
    /// Momentum mode function, `v = G_A u / lambda`.
    pub v_a: DVector<f64>,
    /// Set when the mode sits in a within-sector near-degeneracy (gap below
    /// 1e-12 relative); such pairs are only defined up to rotation.
    pub degenerate: bool,
}

/// The symplectic spectrum of a block together with the parities.
#[derive(Clone, Debug)]
pub struct SymplecticSpectrum {
    /// Descending eigenvalues, all `>= 1/2`.
    pub lambdas: Vec<f64>,
    /// Matching parities.
    pub parities: Vec<i8>,
}

/// Coupling eigenvalues may dip this far below zero (relative to the norm of
/// the coupling operator) from rounding before being clamped; anything more
/// negative means the state is not a valid ground state.
const KAPPA2_CLAMP: f64 = 1e-9;

struct SectorModes {
    modes: Vec<RawMode>,
}

/// Decompose one parity sector. `q` embeds sector vectors back into the
/// block; `c_full` is the cross product matrix on the full block.
fn decompose_sector(
    g_s: &DMatrix<f64>,
    q: &DMatrix<f64>,
    c_full: &DMatrix<f64>,
    parity: i8,
    noise_floor: f64,
) -> Result<SectorModes> {
    let dim = g_s.nrows();
    if dim == 0 {
        return Ok(SectorModes { modes: Vec::new() });
    }
    let (g_sqrt, g_inv_sqrt) = sym_sqrt(g_s)?;
    // Purity makes C = -H_AB G_AB^T equal to H_A G_A - I/4 exactly, so
    // S = G^{1/2} C G^{-1/2} = G^{1/2} H G^{1/2} - I/4 is symmetric with
    // eigenvalues kappa^2 = lambda^2 - 1/4 and the same eigenvectors as the
    // usual W = G^{1/2} H G^{1/2}. Diagonalizing S instead of W removes the
    // 1/4 bulk, so the near-vacuum cluster is resolved to the absolute
    // accuracy of the kappa^2 spectrum rather than of lambda^2.
    let c_s = q.transpose() * c_full * q;
    let mut s = &g_sqrt * &c_s * &g_inv_sqrt;
    symmetrize(&mut s);
    let s_amax = s.amax();
    let eig = s.symmetric_eigen();

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].partial_cmp(&eig.eigenvalues[a]).unwrap());

    // Relative to the coupling operator itself, plus an absolute floor: for
    // a (nearly) product state C is pure rounding noise, whose magnitude is
    // set by the covariances that were multiplied, not by ||C||.
    let clamp = (KAPPA2_CLAMP * s_amax).max(noise_floor);
    let mut modes = Vec::with_capacity(dim);
    for &idx in &order {
        let raw_kappa2 = eig.eigenvalues[idx];
        if raw_kappa2 < -clamp {
            return Err(ChainError::numerical(format!(
                "coupling eigenvalue kappa^2 = {raw_kappa2:.6e} is genuinely negative: state is not a valid ground state"
            )));
        }
        let kappa2 = raw_kappa2.max(0.0);
        let lambda = (0.25 + kappa2).sqrt();
        // u = G^{-1/2} w; the caller rescales on the full block so that
        // u^T G_A u = lambda (then u.v = 1 with v = G u / lambda).
        let w_vec = eig.eigenvectors.column(idx).into_owned();
        let u_s = &g_inv_sqrt * w_vec;
        let u_a = q * u_s;
        modes.push(RawMode {
            lambda,
            kappa2,
            parity,
            u_a,
            v_a: DVector::zeros(0), // filled by the caller on the full block
            degenerate: false,
        });
    }

    // Flag within-sector near-degeneracies.
    for i in 1..modes.len() {
        let (a, b) = (modes[i - 1].lambda, modes[i].lambda);
        if (a - b).abs() < 1e-12 * a.max(1.0) {
            modes[i - 1].degenerate = true;
            modes[i].degenerate = true;
        }
    }
    Ok(SectorModes { modes })
}

fn symmetrize(m: &mut DMatrix<f64>) {
    let t = m.transpose();
    *m += t;
    *m *= 0.5;
}

/// Full modewise decomposition of a block: all Williamson modes, descending
/// in `lambda`, with normalized block-side mode functions.
pub fn williamson_modes(cov: &BlockCovariance) -> Result<Vec<RawMode>> {
    let (q_even, q_odd) = parity_projectors(cov.block_len());
    let (g_e, _h_e, g_o, _h_o) = parity_sectors(cov);
    let c_full = cov.cross_product();
    let noise_floor = 1e-12 * (cov.g_a.amax() * cov.h_a.amax()).max(f64::MIN_POSITIVE);
    let even = decompose_sector(&g_e, &q_even, &c_full, 1, noise_floor)?;
    let odd = decompose_sector(&g_o, &q_odd, &c_full, -1, noise_floor)?;

    let mut modes: Vec<RawMode> = even.modes.into_iter().chain(odd.modes).collect();
    for mode in &mut modes {
        // Renormalize exactly on the full block: u^T G_A u = lambda.
        let gu = &cov.g_a * &mode.u_a;
        let scale = (mode.lambda / mode.u_a.dot(&gu)).sqrt();
        mode.u_a *= scale;
        // Deterministic sign: largest-|entry| of u_A positive.
        let lead = mode
            .u_a
            .iter()
            .cloned()
            .max_by(|a, b| a.abs().partial_cmp(&b.abs()).unwrap())
            .unwrap_or(1.0);
        if lead < 0.0 {
            mode.u_a.neg_mut();
        }
        mode.v_a = (&cov.g_a * &mode.u_a) / mode.lambda;
    }
    modes.sort_by(|a, b| b.lambda.partial_cmp(&a.lambda).unwrap());
    Ok(modes)
}

/// Symplectic spectrum only (no mode functions).
pub fn symplectic_spectrum(cov: &BlockCovariance) -> Result<SymplecticSpectrum> {
    let modes = williamson_modes(cov)?;
    Ok(SymplecticSpectrum {
        lambdas: modes.iter().map(|m| m.lambda).collect(),
        parities: modes.iter().map(|m| m.parity).collect(),
    })
}

/// Squared couplings `kappa^2` (nonzero eigenvalues of `-H_AB G_AB^T`),
/// descending. The product has rank at most `min(len, N - len)`, so the
/// eigenvalues are taken on the small side of the rank factorization; this
/// avoids both the rank-deficient bulk and the ill-conditioned `G_A^{1/2}`
/// similarity. Positivity is asserted up to rounding noise.
pub fn cross_spectrum(cov: &BlockCovariance) -> Result<Vec<f64>> {
    let rows = cov.h_ab.nrows();
    let cols = cov.h_ab.ncols();
    let small = if rows <= cols {
        // C = -H_AB G_AB^T is already the small square product.
        -(&cov.h_ab * cov.g_ab.transpose())
    } else {
        // Tall factors: with H_AB = Q R, the nonzero eigenvalues of
        // -Q R G_AB^T are those of -R (G_AB^T Q).
        let qr = cov.h_ab.clone().qr();
        -(qr.r() * (cov.g_ab.transpose() * qr.q()))
    };
    let norm = small.norm();
    let eig = small.complex_eigenvalues();
    let tol = 1e-9 * norm.max(1.0);
    let mut vals = Vec::with_capacity(eig.len());
    for v in eig.iter() {
        if v.im.abs() > tol || v.re < -tol {
            return Err(ChainError::numerical(format!(
                "cross product -H_AB G_AB^T has a non-positive-real eigenvalue \
                 {:.3e} + {:.3e}i",
                v.re, v.im
            )));
        }
        vals.push(v.re.max(0.0));
    }
    vals.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(vals)
}

/// Smallest `kappa^2` that can be mapped to the complement with a round-trip
/// defect safely below 1e-7. The round trip applies `C / kappa^2`, and the
/// rounding noise in `C = -H_AB G_AB^T` scales with the pre-cancellation
/// magnitude of the factors (at strong coupling `|C|` is much smaller than
/// `|G_AB| * |H_AB|`), so the floor uses that product rather than `|C|`.
pub fn mapping_floor(cov: &BlockCovariance) -> f64 {
    let pre = cov.g_ab.amax() * cov.h_ab.amax();
    (1e-6 * pre).max(1e-16)
}

/// Map a block mode to its entangled partner on the complement:
/// `v_B = G_AB^T u_A / kappa`, `u_B = -H_AB^T v_A / kappa`.
pub fn map_modes(
    cov: &BlockCovariance,
    mode: &RawMode,
    index: usize,
) -> Result<(DVector<f64>, DVector<f64>)> {
    let floor = mapping_floor(cov);
    if mode.kappa2 < floor {
        return Err(ChainError::UnmappableMode {
            index,
            kappa2: mode.kappa2,
            floor,
        });
    }
    let kappa = mode.kappa2.sqrt();
    let v_b = cov.g_ab.transpose() * &mode.u_a / kappa;
    let u_b = -(cov.h_ab.transpose() * &mode.v_a) / kappa;
    Ok((u_b, v_b))
}

/// Mode participation function `P_i = u_i v_i`; sums to 1 for a normalized
/// pair.
pub fn participation(u: &DVector<f64>, v: &DVector<f64>) -> Vec<f64> {
    u.iter().zip(v.iter()).map(|(a, b)| a * b).collect()
}

/// Distance of the participation maximum from the block midpoint, in sites.
/// Floating-point ties (relative 1e-12) are broken toward the center.
pub fn turning_point(participation: &[f64]) -> f64 {
    let nb = participation.len();
    let center = (nb as f64 - 1.0) / 2.0;
    let max = participation.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let tie_tol = 1e-12 * max.abs().max(f64::MIN_POSITIVE);
    participation
        .iter()
        .enumerate()
        .filter(|&(_, &p)| max - p <= tie_tol)
        .map(|(i, _)| (i as f64 - center).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Multiply entry `i` by `(-1)^i` (block-local index origin): shifts the
/// highest-wavenumber oscillation away so the smooth envelope shows.
pub fn demodulate(u: &DVector<f64>) -> DVector<f64> {
    DVector::from_iterator(
        u.len(),
        u.iter().enumerate().map(|(i, &x)| if i % 2 == 0 { x } else { -x }),
    )
}

/// Relative eigen-defect `|H_A G_A u - lambda^2 u| / (lambda^2 |u|)`.
pub fn eigen_defect(cov: &BlockCovariance, mode: &RawMode) -> f64 {
    let lam2 = mode.lambda * mode.lambda;
    let residual = &cov.h_a * (&cov.g_a * &mode.u_a) - lam2 * &mode.u_a;
    residual.norm() / (lam2 * mode.u_a.norm())
}
