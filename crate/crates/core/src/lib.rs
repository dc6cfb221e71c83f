//! Large deviations of the top eigenvalue of rank-one deformed Gaussian ensembles.
//!
//! A matrix `X = W + θ·e₁e₁ᵀ`, with `W` drawn from the Gaussian Orthogonal
//! (β = 1) or Unitary (β = 2) Ensemble, exhibits the BBP phase transition:
//! below the critical pull `θ_c = √(β/2)` the top eigenvalue sticks to the
//! bulk edge `√(2β)`, above it the top eigenvalue detaches to `θ + β/(2θ)`.
//! Large deviations away from that limit occur at rate `e^{−N·K(x)}` for an
//! explicit rate function `K` built from spherical integrals and
//! free-probability transforms.
//!
//! This crate implements the computational side of that story end to end:
//!
//! | module | contents |
//! |--------|----------|
//! | [`measures`] | spectral measures, Hilbert/G/R transforms, semicircle closed forms, Dudley distance |
//! | [`spherical`] | rank-one spherical integral: Monte Carlo oracle, finite-N asymptotic, N→∞ limit |
//! | [`ratefn`] | rate functions `F`, `K`, the critical pull `θ_c`, the almost-sure limit `x*` |
//! | [`ensemble`] | GOE/GUE sampling with the rank-one deformation, in-house eigensolver |
//! | [`experiments`] | reproducible desk-scale experiments tying simulation to theory |
//! | [`quad`] | adaptive Gauss–Kronrod quadrature used by everything above |
//!
//! # Quick start
//!
//! ```
//! use rank1_ldp_core::{ratefn::RateParams, Beta};
//!
//! // Above the transition: the top eigenvalue detaches.
//! let p = RateParams::new(Beta::Two, 2.0).unwrap();
//! assert!((p.as_limit() - 2.5).abs() < 1e-12);
//! // The rate function vanishes exactly at the limit.
//! let profile = p.profile();
//! assert!(profile.k(p.as_limit()) < 1e-10);
//! ```
//!
//! # Conventions
//!
//! The eigenvalue density carries the weight `e^{−(N/2)Σx_i²}`, which puts
//! the semicircle bulk on `[−√(2β), √(2β)]`: variance `1/N` on the diagonal
//! and `1/(2N)` per real off-diagonal component. All transforms, rate
//! functions and samplers share this normalization, so simulation axes and
//! theory axes coincide without rescaling.
//!
//! # What can go wrong
//!
//! Every operation validates its domain and returns [`Error`] instead of
//! producing NaNs: Hilbert transforms inside the support, rate functions
//! below the bulk edge (those return `+∞` where the theory says so), Monte
//! Carlo exponents large enough to overflow, and infeasible tail thresholds
//! are all reported with the offending quantities.

pub mod ensemble;
pub mod experiments;
pub mod measures;
pub mod quad;
pub mod ratefn;
mod root;
pub mod spherical;

pub use measures::{SemicircleLaw, SpectralLaw, SpectralMeasure};
pub use spherical::{FixedPointSolution, SphericalParams};

use thiserror::Error;

/// Dyson index of the Gaussian ensemble: 1 for GOE (real symmetric),
/// 2 for GUE (complex Hermitian).
///
/// The index enters formulas as a real number; [`Beta::value`] returns it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Beta {
    /// β = 1, the orthogonal case.
    One,
    /// β = 2, the unitary case.
    Two,
}

impl Beta {
    /// The numeric value of β.
    pub fn value(self) -> f64 {
        match self {
            Beta::One => 1.0,
            Beta::Two => 2.0,
        }
    }

    /// Parse from the integers 1 or 2.
    pub fn from_int(b: u8) -> Result<Self> {
        match b {
            1 => Ok(Beta::One),
            2 => Ok(Beta::Two),
            other => Err(Error::InvalidParameter(format!(
                "beta must be 1 or 2, got {other}"
            ))),
        }
    }
}

impl std::fmt::Display for Beta {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value() as u8)
    }
}

impl std::str::FromStr for Beta {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1" => Ok(Beta::One),
            "2" => Ok(Beta::Two),
            other => Err(Error::InvalidParameter(format!(
                "beta must be 1 or 2, got {other:?}"
            ))),
        }
    }
}

/// Errors reported by this crate.
#[derive(Debug, Error)]
pub enum Error {
    /// An operation needs at least one eigenvalue/atom.
    #[error("empty spectrum: need at least one eigenvalue")]
    EmptySpectrum,

    /// NaN or infinity where a finite number is required.
    #[error("non-finite input in {context}")]
    NonFinite { context: &'static str },

    /// A parameter is outside its documented domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Evaluation point lies inside the support of a measure.
    #[error("point {z} lies inside the support interval [{lo}, {hi}]")]
    InsideSupport { z: f64, lo: f64, hi: f64 },

    /// Evaluation point coincides with an atom (log potential is −∞ there).
    #[error("point {x} coincides with an atom of the measure")]
    AtomCollision { x: f64 },

    /// Argument below the semicircle edge √(2β).
    #[error("argument {x} below the semicircle edge {edge}")]
    BelowEdge { x: f64, edge: f64 },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error(
        "quadrature stalled at error {err:.3e} (target {tol:.3e}) after {subdivisions} subdivisions"
    )]
    QuadratureFailure {
        err: f64,
        tol: f64,
        subdivisions: usize,
    },

    /// A root could not be bracketed or the iteration stalled.
    #[error("root finding failed: {0}")]
    RootFinding(String),

    /// Implicit-shift QL sweep limit exceeded (should not happen on
    /// well-formed symmetric input).
    #[error("eigensolver failed to converge for eigenvalue {index} after {sweeps} sweeps")]
    EigenNoConvergence { index: usize, sweeps: usize },

    /// Monte Carlo exponent N·θ·max|λ| exceeds the overflow guard.
    #[error("Monte Carlo exponent bound N*theta*max|lambda| = {bound:.3} exceeds 50")]
    ExponentOverflow { bound: f64 },

    /// Tail threshold too deep for the replica budget of an LDP slope run.
    #[error(
        "infeasible tail threshold: expected exceedance count {expected:.2} at N = {n_max} \
         is below 10; need at least {required_replicas} replicas"
    )]
    InfeasibleThreshold {
        expected: f64,
        n_max: usize,
        required_replicas: u64,
    },

    /// The continuity experiment could not meet its Dudley budget.
    #[error("jitter calibration failed: cannot meet Dudley budget {budget:.6}")]
    JitterCalibration { budget: f64 },

    /// Malformed spectrum file.
    #[error("spectrum file, line {line}: {message}")]
    SpectrumParse { line: usize, message: String },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
