//! Construction and numerical certification of a smooth, real-valued Parseval
//! frame wavelet for dilation by 2 whose generalized multiresolution analysis
//! has the Journé multiplicity function.
//!
//! The pieces, bottom up:
//!
//! * [`bump`]: the smooth periodic QMF bump `p` and its validation.
//! * [`support`]: exact rational interval sets, the generation sets
//!   `A_k`, `B_k`, `C_k` and the lattice families describing supports.
//! * [`gmra`]: multiplicity functions, generalized filter banks (Journé and the
//!   smooth example), the 2×2 matrix products, `φ̂₁`, `φ̂₂` and `ψ̂`.
//! * [`classical`]: single-filter cascades (Haar, Shannon, Cohen).
//! * [`analysis`]: dimension function, periodization, Calderón and shift
//!   sums, decay profiles, time-domain samples and the proof identities.
//! * [`suite`]: the verification suite behind the `verify` command.

pub mod analysis;
pub mod bump;
pub mod classical;
pub mod cli;
pub mod config;
pub mod filter;
pub mod gmra;
pub mod report;
pub mod suite;
pub mod support;
pub mod util;

pub use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("flatness condition not met: {0}")]
    Flatness(String),
    #[error("bump was not validated")]
    Unvalidated,
    #[error("cascade did not converge at x = {x} after {factors} factors")]
    NoConvergence { x: f64, factors: usize },
    #[error("cutoff {given} too small; tail bound requires at least {required}")]
    Cutoff { given: f64, required: f64 },
    #[error("config: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
