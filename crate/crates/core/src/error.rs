//! Error taxonomy shared by every module in the crate.
//!
//! Mathematical failures (singular pencils, inseparable spectral sets, missing
//! group inverses, …) are all [`Error`]; file-format problems live in
//! [`crate::io::FormatError`] so callers can tell the two apart.

use thiserror::Error;

/// Mathematical or domain error raised by an operation in this crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Operand shapes do not conform.
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// Inversion of the zero quaternion.
    #[error("zero divisor: the zero quaternion has no inverse")]
    ZeroDivisor,

    /// A sphere radius (imaginary magnitude) must be nonnegative.
    #[error("invalid sphere: imaginary magnitude {v} is negative")]
    NegativeRadius { v: f64 },

    /// A 2n×2n complex matrix fed to the adjoint pull-back does not satisfy
    /// the quaternionic structure condition J·M·J⁻¹ = conj(M).
    #[error(
        "not a quaternionic-adjoint matrix: structure residual {residual:.3e} exceeds {tol:.3e}"
    )]
    NotAdjointStructured { residual: f64, tol: f64 },

    /// The operator is singular to working precision.
    #[error("operator not invertible: smallest singular value {smallest_sv:.3e}")]
    Singular { smallest_sv: f64 },

    /// The left S-resolvent was requested at a point of the S-spectrum.
    #[error("S-resolvent undefined on σ_S: sphere ({u}, {v}) is spectral")]
    OnSpectrum { u: f64, v: f64 },

    /// The pseudo-resolvent series only converges for |q| beyond the
    /// spectral radius.
    #[error(
        "outside convergence region: |q| = {norm_q:.6} does not exceed spectral radius {radius:.6}"
    )]
    OutsideConvergence { norm_q: f64, radius: f64 },

    /// A contour family cannot separate the requested spectral subset from
    /// its complement.
    #[error("spectral sets not separated: slice gap {gap:.3e} below {min_gap:.3e}")]
    NotSeparated { gap: f64, min_gap: f64 },

    /// Adaptive quadrature exhausted its node budget without stabilizing.
    #[error("quadrature failed: last delta {last_delta:.3e} after {nodes} nodes per circle")]
    QuadratureFailed { last_delta: f64, nodes: usize },

    /// rank(A) ≠ rank(A²), so no commuting generalized inverse exists.
    #[error(
        "no commuting generalized inverse (index > 1): rank(A) = {rank_a}, rank(A²) = {rank_a2}"
    )]
    NoGroupInverse { rank_a: usize, rank_a2: usize },

    /// The contour route needs the zero sphere separated from the rest of
    /// the spectrum; below the threshold the caller should fall back to the
    /// algebraic route.
    #[error("ill-separated spectrum: zero/nonzero gap {gap:.3e} below required {required:.3e}")]
    IllSeparated { gap: f64, required: f64 },

    /// A caller-supplied operand fails a documented precondition.
    #[error("precondition violated: {what} (residual {residual:.3e})")]
    PreconditionViolated { what: &'static str, residual: f64 },
}

/// Convenient alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;
