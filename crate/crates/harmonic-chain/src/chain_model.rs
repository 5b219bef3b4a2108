//! Chain parameterization and vacuum correlation functions.
//!
//! A circular chain of `N` identical harmonic oscillators with
//! nearest-neighbour coupling strength `alpha in (0,1)` has dispersion
//! `nu(theta) = sqrt(1 - alpha cos theta)` and ground-state two-point
//! functions
//!
//! ```text
//! g_l = <q_0 q_l> = (1/2N) sum_k cos(l theta_k) / nu(theta_k)
//! h_l = <p_0 p_l> = (1/2N) sum_k nu(theta_k) cos(l theta_k)
//! ```
//!
//! with `theta_k = 2 pi k / N`. This module provides those sums, their
//! `N -> infinity` hypergeometric closed forms, the strong-coupling
//! asymptotics, and the length scales (`l_c`, `N_t`, `N_c`) that separate
//! the three qualitative regimes of the model.

use serde::Serialize;

use crate::error::{ChainError, Result};
use crate::special;

/// Immutable description of one chain: size plus the coupling in its three
/// equivalent parameterizations (`alpha`, `z`, `xi`).
///
/// `1 - alpha` and `1 - z` are stored as separately computed fields because
/// near-critical couplings (`xi ~ 12`) make them unrepresentable as literal
/// subtractions in double precision.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct ChainSpec {
    /// Number of oscillators on the ring.
    pub n: usize,
    /// Hyperbolic angle; `z = tanh(xi)`, `alpha = tanh(2 xi)`.
    pub xi: f64,
    /// Nearest-neighbour coupling in `(0,1)`.
    pub alpha: f64,
    /// Auxiliary coupling variable `z = (1 - sqrt(1-alpha^2))/alpha`.
    pub z: f64,
    /// `1/sqrt(1+z^2)`; prefactor of the closed-form correlators.
    pub mu_aux: f64,
    /// Cancellation-free `1 - alpha = 2 e^{-4 xi} / (1 + e^{-4 xi})`.
    pub one_minus_alpha: f64,
    /// Cancellation-free `1 - z = 2 e^{-2 xi} / (1 + e^{-2 xi})`.
    pub one_minus_z: f64,
}

impl ChainSpec {
    /// Build a spec from the hyperbolic angle `xi > 0`.
    pub fn from_xi(n: usize, xi: f64) -> Result<Self> {
        if n < 2 {
            return Err(ChainError::config(format!("chain size N = {n} must be at least 2")));
        }
        if !(xi > 0.0) || !xi.is_finite() {
            return Err(ChainError::config(format!("xi = {xi} must be positive and finite")));
        }
        let e2 = (-2.0 * xi).exp();
        let e4 = (-4.0 * xi).exp();
        let one_minus_z = 2.0 * e2 / (1.0 + e2);
        let one_minus_alpha = 2.0 * e4 / (1.0 + e4);
        let z = (1.0 - e2) / (1.0 + e2);
        let alpha = (1.0 - e4) / (1.0 + e4);
        Ok(ChainSpec {
            n,
            xi,
            alpha,
            z,
            mu_aux: 1.0 / (1.0 + z * z).sqrt(),
            one_minus_alpha,
            one_minus_z,
        })
    }

    /// Build a spec from the coupling `alpha in (0,1)`.
    pub fn from_alpha(n: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(ChainError::config(format!("alpha = {alpha} must lie in (0,1)")));
        }
        Self::from_xi(n, 0.5 * alpha.atanh())
    }

    /// Build a spec from `z in (0,1)`.
    pub fn from_z(n: usize, z: f64) -> Result<Self> {
        if !(z > 0.0 && z < 1.0) {
            return Err(ChainError::config(format!("z = {z} must lie in (0,1)")));
        }
        Self::from_xi(n, z.atanh())
    }

    /// Dispersion `nu(theta) = sqrt((1-alpha) + 2 alpha sin^2(theta/2))`,
    /// algebraically `sqrt(1 - alpha cos theta)` but exact near `theta = 0`.
    pub fn nu(&self, theta: f64) -> f64 {
        let s = (0.5 * theta).sin();
        (self.one_minus_alpha + 2.0 * self.alpha * s * s).sqrt()
    }

    /// Characteristic scales `l_c`, `N_t`, `N_c` for this coupling.
    pub fn regime_scales(&self) -> RegimeScales {
        // -ln z computed from 1-z to survive z -> 1.
        let minus_ln_z = -(-self.one_minus_z).ln_1p();
        let n_t = (2.0 / self.one_minus_alpha).sqrt();
        let n_c = if n_t > std::f64::consts::E {
            n_t / n_t.ln()
        } else {
            n_t
        };
        RegimeScales {
            l_c: 1.0 / minus_ln_z,
            n_t,
            n_c,
        }
    }

    /// Regime label with the default thresholds.
    pub fn regime(&self) -> Regime {
        classify_regime(self, &RegimeThresholds::default())
    }
}

/// Free-function form of the dispersion relation, with domain checking.
pub fn dispersion(theta: f64, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(ChainError::config(format!("alpha = {alpha} must lie in (0,1)")));
    }
    let s = (0.5 * theta).sin();
    Ok(((1.0 - alpha) + 2.0 * alpha * s * s).sqrt())
}

/// Length scales separating the three regimes.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RegimeScales {
    /// Correlation length `1/(-ln z)` of the weak-coupling exponential decay.
    pub l_c: f64,
    /// Transitional chain-size scale `sqrt(2/(1-alpha))`.
    pub n_t: f64,
    /// Critical chain size `N_t / ln N_t` (for `N_t > e`).
    pub n_c: f64,
}

/// The three qualitative regimes of the chain.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Regime {
    #[serde(rename = "I")]
    I,
    #[serde(rename = "II")]
    II,
    #[serde(rename = "III")]
    III,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
        })
    }
}

/// Conventional factors deciding the regime boundaries; the underlying
/// conditions are only order-of-magnitude statements.
#[derive(Clone, Copy, Debug)]
pub struct RegimeThresholds {
    /// Regime I requires `N > weak_factor * N_t`.
    pub weak_factor: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        RegimeThresholds { weak_factor: 4.0 }
    }
}

/// Classify a chain: I if `N > weak_factor*N_t` (short-ranged), III if
/// `N_c > N` (collective-dominated), II otherwise.
pub fn classify_regime(spec: &ChainSpec, thresholds: &RegimeThresholds) -> Regime {
    let scales = spec.regime_scales();
    let n = spec.n as f64;
    if n > thresholds.weak_factor * scales.n_t {
        Regime::I
    } else if scales.n_c > n {
        Regime::III
    } else {
        Regime::II
    }
}

/// All vacuum two-point functions of one chain, indexed by separation.
#[derive(Clone, Debug)]
pub struct CorrelationTable {
    pub spec: ChainSpec,
    g: Vec<f64>,
    h: Vec<f64>,
}

impl CorrelationTable {
    /// Position correlator `<q_0 q_l>`; the index wraps around the ring.
    pub fn g(&self, l: usize) -> f64 {
        self.g[l % self.spec.n]
    }

    /// Momentum correlator `<p_0 p_l>`; the index wraps around the ring.
    pub fn h(&self, l: usize) -> f64 {
        self.h[l % self.spec.n]
    }

    pub fn g_slice(&self) -> &[f64] {
        &self.g
    }

    pub fn h_slice(&self) -> &[f64] {
        &self.h
    }

    /// Largest entrywise deviation of the circulant product `G H` from
    /// `I/4`: a purity witness for the sampled ground state.
    ///
    /// `G` and `H` are circulant, so their product is circulant too and one
    /// row determines everything: `(G H)_{0j} = sum_k g_k h_{k-j}`.
    pub fn purity_defect(&self) -> f64 {
        let n = self.spec.n;
        let mut worst = 0.0f64;
        for j in 0..n {
            let mut sum = 0.0;
            let mut comp = 0.0;
            for k in 0..n {
                let term = self.g[k] * self.h[(n + k - j) % n];
                let y = term - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            let target = if j == 0 { 0.25 } else { 0.0 };
            worst = worst.max((sum - target).abs());
        }
        worst
    }
}

/// Evaluate the finite-`N` correlation sums for every separation.
///
/// Cost is `O(N^2)` (only `l <= N/2` is summed; the rest follows from the
/// reflection symmetry `g_l = g_{N-l}`, which therefore holds exactly).
pub fn build_correlations(spec: &ChainSpec) -> CorrelationTable {
    let n = spec.n;
    let half = n / 2;
    let nus: Vec<f64> = (0..n)
        .map(|k| spec.nu(2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    let mut g = vec![0.0; n];
    let mut h = vec![0.0; n];
    for l in 0..=half {
        let (gl, hl) = correlation_sums(spec, l, &nus);
        g[l] = gl;
        h[l] = hl;
        if l != 0 {
            g[n - l] = gl;
            h[n - l] = hl;
        }
    }
    CorrelationTable {
        spec: *spec,
        g,
        h,
    }
}

/// Single-separation finite-`N` correlators, `O(N)`; useful when a full
/// table at very large `N` would be wasteful.
pub fn correlation_at(spec: &ChainSpec, l: usize) -> (f64, f64) {
    let n = spec.n;
    let nus: Vec<f64> = (0..n)
        .map(|k| spec.nu(2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect();
    correlation_sums(spec, l, &nus)
}

fn correlation_sums(spec: &ChainSpec, l: usize, nus: &[f64]) -> (f64, f64) {
    let n = spec.n;
    let (mut gs, mut gc) = (0.0f64, 0.0f64);
    let (mut hs, mut hc) = (0.0f64, 0.0f64);
    for (k, &nu) in nus.iter().enumerate() {
        let c = (2.0 * std::f64::consts::PI * (l * k % n) as f64 / n as f64).cos();
        // Kahan-compensated accumulation of both sums.
        let y = c / nu - gc;
        let t = gs + y;
        gc = (t - gs) - y;
        gs = t;
        let y = c * nu - hc;
        let t = hs + y;
        hc = (t - hs) - y;
        hs = t;
    }
    let norm = 0.5 / n as f64;
    (norm * gs, norm * hs)
}

/// Series tolerance and term budget for the hypergeometric evaluations.
const F21_TOL: f64 = 1e-12;
const F21_BUDGET: usize = 1_000_000;
/// Above this `z^2`, the direct series is abandoned for the logarithmic
/// connection formula at unit argument.
const F21_SERIES_LIMIT: f64 = 0.99;

/// Infinite-chain position correlator
/// `g_l = (z^l / 2 mu) C(l-1/2, l) 2F1(1/2, l+1/2; l+1; z^2)`.
pub fn g_infinite(l: usize, spec: &ChainSpec) -> Result<f64> {
    let lf = l as f64;
    let x = z_squared(spec);
    // C(l-1/2, l) = Gamma(l+1/2) / (Gamma(l+1) Gamma(1/2))
    let ln_binom = special::ln_gamma(lf + 0.5) - special::ln_gamma(lf + 1.0) - 0.5 * special::LN_PI;
    let pref = (lf * ln_z(spec) + ln_binom).exp() / (2.0 * spec.mu_aux);
    let f = if x <= F21_SERIES_LIMIT {
        special::hyp2f1_series(0.5, lf + 0.5, lf + 1.0, x, F21_TOL, F21_BUDGET)?
    } else {
        special::hyp2f1_log_unit(0.5, lf + 0.5, one_minus_z_squared(spec), F21_TOL, F21_BUDGET)?
    };
    Ok(pref * f)
}

/// Infinite-chain momentum correlator
/// `h_l = (mu z^l / 2) C(l-3/2, l) 2F1(-1/2, l-1/2; l+1; z^2)`.
///
/// For `z^2` beyond the series limit the value is obtained from `g` through
/// the exact three-term identity `h_l = g_l - (alpha/2)(g_{l-1} + g_{l+1})`,
/// which follows from `nu^2 = 1 - alpha cos theta` and avoids the awkward
/// connection formula of the `c - a - b = 1` case.
pub fn h_infinite(l: usize, spec: &ChainSpec) -> Result<f64> {
    let x = z_squared(spec);
    if x <= F21_SERIES_LIMIT {
        let lf = l as f64;
        // C(l-3/2, l) = Gamma(l-1/2) / (Gamma(l+1) Gamma(-1/2));
        // Gamma(-1/2) = -2 sqrt(pi), so the binomial is 1 at l=0 and
        // negative for every l >= 1.
        let binom = if l == 0 {
            1.0
        } else {
            -((special::ln_gamma(lf - 0.5) - special::ln_gamma(lf + 1.0)).exp())
                / (2.0 * std::f64::consts::PI.sqrt())
        };
        let pref = (lf * ln_z(spec)).exp() * spec.mu_aux / 2.0 * binom;
        let f = special::hyp2f1_series(-0.5, lf - 0.5, lf + 1.0, x, F21_TOL, F21_BUDGET)?;
        Ok(pref * f)
    } else {
        let g_prev = g_infinite(l.saturating_sub(1), spec)?;
        let g_next = g_infinite(l + 1, spec)?;
        let g_prev = if l == 0 { g_next } else { g_prev };
        Ok(g_infinite(l, spec)? - 0.5 * spec.alpha * (g_prev + g_next))
    }
}

/// Strong-coupling (`z -> 1`) logarithmic form of the position correlator:
/// `-(1/(sqrt(2) pi)) ln(((1-z)/2) l)`, valid well inside the correlation
/// length.
pub fn g_strong_asymptotic(l: usize, spec: &ChainSpec) -> Result<f64> {
    if l == 0 {
        return Err(ChainError::config("strong-coupling asymptotic needs l >= 1"));
    }
    let scales = spec.regime_scales();
    if l as f64 >= scales.l_c {
        return Err(ChainError::config(format!(
            "l = {l} is outside the correlation length l_c = {:.3}",
            scales.l_c
        )));
    }
    Ok(-(0.5 * spec.one_minus_z * l as f64).ln() / (std::f64::consts::SQRT_2 * std::f64::consts::PI))
}

/// The `theta = 0` collective-mode contribution that dominates the finite-size
/// offset of `g_l`: `1/(2 N sqrt(1-alpha)) = N_t/(2 sqrt(2) N)`.
pub fn finite_size_g_correction(spec: &ChainSpec) -> f64 {
    1.0 / (2.0 * spec.n as f64 * spec.one_minus_alpha.sqrt())
}

pub fn regime_scales(spec: &ChainSpec) -> RegimeScales {
    spec.regime_scales()
}

fn ln_z(spec: &ChainSpec) -> f64 {
    (-spec.one_minus_z).ln_1p()
}

fn z_squared(spec: &ChainSpec) -> f64 {
    spec.z * spec.z
}

/// `1 - z^2 = (1-z)(1+z)`, cancellation-free.
fn one_minus_z_squared(spec: &ChainSpec) -> f64 {
    spec.one_minus_z * (2.0 - spec.one_minus_z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn tiny_alpha_spec(n: usize) -> ChainSpec {
        ChainSpec::from_alpha(n, 1e-12).unwrap()
    }

    #[test]
    fn parameterizations_are_consistent() {
        for &xi in &[0.1, 0.5, 1.0, 3.0, 8.0] {
            let s = ChainSpec::from_xi(64, xi).unwrap();
            assert_relative_eq!(s.alpha, 2.0 * s.z / (1.0 + s.z * s.z), max_relative = 1e-12);
            // The radical form of z(alpha) cancels catastrophically once
            // alpha is within ~1e-10 of 1, so only check it at moderate xi.
            if xi <= 3.0 {
                assert_relative_eq!(
                    s.z,
                    (1.0 - (1.0 - s.alpha * s.alpha).sqrt()) / s.alpha,
                    max_relative = 1e-10
                );
            }
            assert_relative_eq!(s.z, xi.tanh(), max_relative = 1e-14);
            assert_relative_eq!(s.alpha, (2.0 * xi).tanh(), max_relative = 1e-14);
            assert_relative_eq!(s.mu_aux, 1.0 / (1.0 + s.z * s.z).sqrt(), max_relative = 1e-14);
            assert!(s.one_minus_alpha > 0.0 && s.one_minus_z > 0.0);
        }
        // Round-trips through the other constructors.
        let s = ChainSpec::from_z(32, 1.0f64 / 3.0).unwrap();
        assert_relative_eq!(s.z, 1.0 / 3.0, max_relative = 1e-14);
        let s = ChainSpec::from_alpha(32, 0.6).unwrap();
        assert_relative_eq!(s.alpha, 0.6, max_relative = 1e-14);
    }

    #[test]
    fn extreme_coupling_stays_representable() {
        let s = ChainSpec::from_xi(2048, 12.0).unwrap();
        // 1 - tanh(24) underflows to 0 by subtraction; the stored field must not.
        assert!(s.one_minus_alpha > 0.0);
        assert_relative_eq!(s.one_minus_alpha, 2.0 * (-48.0f64).exp(), max_relative = 1e-12);
    }

    #[test]
    fn dispersion_examples() {
        assert_relative_eq!(dispersion(0.0, 0.5).unwrap(), 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(
            dispersion(std::f64::consts::PI, 0.5).unwrap(),
            1.5f64.sqrt(),
            max_relative = 1e-14
        );
        assert_relative_eq!(
            dispersion(std::f64::consts::FRAC_PI_2, 0.96).unwrap(),
            1.0,
            max_relative = 1e-14
        );
        assert!(dispersion(1.0, 0.0).is_err());
        assert!(dispersion(1.0, 1.0).is_err());
    }

    #[test]
    fn decoupled_limit_is_a_product_state() {
        let table = build_correlations(&tiny_alpha_spec(16));
        assert_relative_eq!(table.g(0), 0.5, max_relative = 1e-9);
        assert_relative_eq!(table.h(0), 0.5, max_relative = 1e-9);
        for l in 1..16 {
            assert!(table.g(l).abs() < 1e-9);
            assert!(table.h(l).abs() < 1e-9);
        }
    }

    #[test]
    fn oversampled_oracle_confirms_g0() {
        // N = 2048 sits well above N_t ~ 600 at xi = 3.2, so the momentum sum
        // is already converged: a 10x oversampled chain and the closed form
        // must both agree with it.
        let spec = ChainSpec::from_xi(2048, 3.2).unwrap();
        let fine = ChainSpec::from_xi(20480, 3.2).unwrap();
        let (g0, h0) = correlation_at(&spec, 0);
        let (g0_fine, h0_fine) = correlation_at(&fine, 0);
        assert_relative_eq!(g0, g0_fine, max_relative = 1e-3);
        assert_relative_eq!(h0, h0_fine, max_relative = 1e-6);
        assert_relative_eq!(g0, g_infinite(0, &spec).unwrap(), max_relative = 0.01);
    }

    #[test]
    fn weak_coupling_decay_ratio() {
        let spec = ChainSpec::from_z(500, 1.0 / 3.0).unwrap();
        let table = build_correlations(&spec);
        for l in 3..=10 {
            let ratio = table.g(l) / table.g(l + 1);
            assert!((ratio - 3.0).abs() < 0.2 * 3.0, "l={l}: ratio={ratio}");
        }
    }

    #[test]
    fn reflection_symmetry_is_exact() {
        let spec = ChainSpec::from_xi(33, 1.5).unwrap();
        let table = build_correlations(&spec);
        for l in 1..33 {
            assert_eq!(table.g(l), table.g(33 - l));
            assert_eq!(table.h(l), table.h(33 - l));
        }
    }

    #[test]
    fn momentum_correlators_negative_off_diagonal() {
        for &xi in &[0.2, 1.0, 4.0] {
            let spec = ChainSpec::from_xi(64, xi).unwrap();
            let table = build_correlations(&spec);
            assert!(table.g(0) > 0.0 && table.h(0) > 0.0);
            for l in 1..=32 {
                assert!(table.h(l) < 0.0, "xi={xi}, l={l}");
            }
        }
    }

    #[test]
    fn purity_defect_small() {
        for &(n, xi) in &[(16usize, 0.3), (64, 1.0), (256, 3.2)] {
            let spec = ChainSpec::from_xi(n, xi).unwrap();
            let table = build_correlations(&spec);
            assert!(table.purity_defect() < 1e-10, "n={n}, xi={xi}");
        }
    }

    #[test]
    fn infinite_chain_limits() {
        // g_0 -> 1/2 as the coupling vanishes.
        assert_relative_eq!(g_infinite(0, &tiny_alpha_spec(4)).unwrap(), 0.5, max_relative = 1e-9);
        // h_1 -> -sqrt(2)/(3 pi) as alpha -> 1.
        let strong = ChainSpec::from_xi(4, 14.0).unwrap();
        assert_relative_eq!(
            h_infinite(1, &strong).unwrap(),
            -std::f64::consts::SQRT_2 / (3.0 * std::f64::consts::PI),
            epsilon = 1e-6
        );
    }

    #[test]
    fn strong_limit_h_matches_alpha_independent_form() {
        // h_l -> -(sqrt(2)/pi) / (4 l^2 - 1) for alpha -> 1, l <= 20.
        let strong = ChainSpec::from_xi(4, 16.0).unwrap();
        for l in 1..=20usize {
            let expect = -std::f64::consts::SQRT_2 / std::f64::consts::PI
                / ((4 * l * l - 1) as f64);
            assert_relative_eq!(h_infinite(l, &strong).unwrap(), expect, epsilon = 1e-6);
        }
    }

    #[test]
    fn infinite_matches_large_finite_sum() {
        // Single-separation finite sums at N = 10^6 / 10^5 as oracles.
        let spec = ChainSpec::from_z(1_000_000, 1.0 / 3.0).unwrap();
        let (g5, _) = correlation_at(&spec, 5);
        assert_relative_eq!(g_infinite(5, &spec).unwrap(), g5, epsilon = 1e-6);

        // N = 10^5 >> N_t here, so the finite sums are converged and no
        // theta = 0 finite-size correction applies.
        for &alpha in &[0.9, 0.99] {
            let spec = ChainSpec::from_alpha(100_000, alpha).unwrap();
            for l in [0usize, 7, 50] {
                let (gl, hl) = correlation_at(&spec, l);
                assert!(
                    (g_infinite(l, &spec).unwrap() - gl).abs() < 1e-6,
                    "g alpha={alpha} l={l}"
                );
                assert!((h_infinite(l, &spec).unwrap() - hl).abs() < 1e-6, "h alpha={alpha} l={l}");
            }
        }
    }

    #[test]
    fn h_branches_agree_at_switchover() {
        // The series branch (z^2 <= 0.99) and the three-term-identity branch
        // must agree where both are usable.
        let spec = ChainSpec::from_z(4, 0.9899f64).unwrap(); // z^2 ~ 0.9799
        for l in 0..6usize {
            let series = h_infinite(l, &spec).unwrap();
            let g_prev = if l == 0 {
                g_infinite(1, &spec).unwrap()
            } else {
                g_infinite(l - 1, &spec).unwrap()
            };
            let via_identity = g_infinite(l, &spec).unwrap()
                - 0.5 * spec.alpha * (g_prev + g_infinite(l + 1, &spec).unwrap());
            assert_relative_eq!(series, via_identity, epsilon = 1e-9);
        }
    }

    #[test]
    fn strong_asymptotic_properties() {
        let spec = ChainSpec::from_xi(64, 6.0).unwrap();
        // Doubling l subtracts exactly ln(2)/(sqrt(2) pi).
        let d = g_strong_asymptotic(10, &spec).unwrap() - g_strong_asymptotic(20, &spec).unwrap();
        assert_relative_eq!(
            d,
            std::f64::consts::LN_2 / (std::f64::consts::SQRT_2 * std::f64::consts::PI),
            max_relative = 1e-12
        );
        // Cross-check against the hypergeometric branch. The log form drops
        // the additive Euler constant gamma/(sqrt(2) pi) ~ 0.13, which is
        // the entire 6% discrepancy here; adding gamma inside the log would
        // land within 0.1%.
        assert_relative_eq!(
            g_strong_asymptotic(10, &spec).unwrap(),
            g_infinite(10, &spec).unwrap(),
            max_relative = 0.07
        );
        // Outside the correlation length the asymptotic is refused.
        let weak = ChainSpec::from_z(64, 0.5).unwrap();
        assert!(g_strong_asymptotic(10, &weak).is_err());
    }

    #[test]
    fn zero_of_strong_asymptotic() {
        // The root of the log form sits at l_0 = 2/(1-z), which is ~2 l_c and
        // therefore outside the guarded domain; verify the zero by the exact
        // identity g_strong(l) = ln(l_0/l)/(sqrt(2) pi) at an interior l.
        let spec = ChainSpec::from_xi(64, 6.0).unwrap();
        let l0 = 2.0 / spec.one_minus_z;
        for l in [5usize, 40, 1000] {
            let expect = (l0 / l as f64).ln() / (std::f64::consts::SQRT_2 * std::f64::consts::PI);
            assert_relative_eq!(g_strong_asymptotic(l, &spec).unwrap(), expect, max_relative = 1e-12);
        }
        let l_out = (2.0 / spec.one_minus_z).round() as usize;
        assert!(g_strong_asymptotic(l_out, &spec).is_err());
    }

    #[test]
    fn finite_size_correction_examples() {
        let spec = tiny_alpha_spec(100);
        assert_relative_eq!(finite_size_g_correction(&spec), 1.0 / 200.0, max_relative = 1e-9);
        // N_t = N makes the scaled form 1/(2 sqrt(2)).
        let spec = ChainSpec::from_xi(10_000, 8.0).unwrap();
        let diff = correlation_at(&spec, 0).0 - g_infinite(0, &spec).unwrap();
        assert_relative_eq!(finite_size_g_correction(&spec), diff, max_relative = 0.10);
    }

    #[test]
    fn regime_classification() {
        let spec = ChainSpec::from_alpha(2048, 0.6).unwrap();
        assert_relative_eq!(spec.regime_scales().n_t, 5.0f64.sqrt(), max_relative = 1e-12);
        assert_eq!(spec.regime(), Regime::I);

        let spec = ChainSpec::from_xi(2048, 12.0).unwrap();
        assert!(spec.regime_scales().n_c > 2048.0);
        assert_eq!(spec.regime(), Regime::III);

        // N == N_t -> II under the boundary convention (N < 4 N_t, N_c < N).
        // xi = 2.3 gives 1 - alpha ~ 2e-4, hence N_t ~ 100.
        let spec = ChainSpec::from_xi(100, 2.3).unwrap();
        let scales = spec.regime_scales();
        assert!(scales.n_t > 50.0 && scales.n_t < 200.0, "n_t = {}", scales.n_t);
        assert_eq!(spec.regime(), Regime::II);
    }

    #[test]
    fn weak_coupling_decay_rate_property() {
        // At weak coupling the closed forms give exact successive ratios
        // from the binomial prefactors: g_{l+1}/g_l -> z (l+1/2)/(l+1) and
        // h_{l+1}/h_l -> z (l-1/2)/(l+1), up to O(z^2) series corrections.
        for &z in &[0.15, 0.3] {
            let spec = ChainSpec::from_z(64, z).unwrap();
            let table = build_correlations(&spec);
            // Stop before z^l sinks under the ~1e-14 noise floor of the sum.
            for l in 3..=10usize {
                let lf = l as f64;
                let rg = table.g(l + 1) / table.g(l);
                let rh = table.h(l + 1) / table.h(l);
                let eg = z * (lf + 0.5) / (lf + 1.0);
                let eh = z * (lf - 0.5) / (lf + 1.0);
                assert!((rg - eg).abs() < 0.15 * eg, "g: z={z} l={l} ratio={rg} expect={eg}");
                assert!((rh - eh).abs() < 0.15 * eh, "h: z={z} l={l} ratio={rh} expect={eh}");
            }
        }
    }
}
