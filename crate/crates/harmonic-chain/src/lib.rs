//! Ground-state entanglement structure of a circular chain of coupled
//! harmonic oscillators.
//!
//! The chain's vacuum is Gaussian, so everything about the entanglement
//! between a contiguous block and the rest of the chain is encoded in two
//! correlation sequences: position correlators `g_l = <q_0 q_l>` and
//! momentum correlators `h_l = <p_0 p_l>`. This crate
//!
//! - builds those correlators exactly (finite sums), in closed form
//!   (infinite chain, hypergeometric), and asymptotically (strong coupling),
//! - performs the modewise decomposition of a block: the block/environment
//!   entanglement splits into independent two-mode squeezed pairs, each with
//!   its own symplectic eigenvalue, parity, and wavefunction profile,
//! - evaluates the regime formulas (single oscillator saturation, collective
//!   mode growth, residual-spectrum scaling collapse, continuum kernels),
//! - cross-checks the discrete chain against the continuum scalar field it
//!   discretizes, and
//! - re-runs the whole eigenproblem in multiprecision arithmetic where mode
//!   couplings fall below anything `f64` can represent.
//!
//! Start with the runnable examples in `examples/`, one per capability.

pub mod analytics;
pub mod chain_model;
pub mod cli;
pub mod continuum;
pub mod entanglement;
pub mod error;
pub mod fit;
pub mod gaussian;
pub mod precise;
pub mod special;

pub use chain_model::{build_correlations, ChainSpec, CorrelationTable, Regime, RegimeScales};
pub use entanglement::{analyze_block, EntanglementReport, ModePair};
pub use error::{ChainError, Result};
pub use gaussian::BlockPartition;
