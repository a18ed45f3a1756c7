//! Pinned numerical tolerances.
//!
//! Every threshold used by the library lives here so that rank decisions,
//! sphere clustering, and quadrature termination stay mutually consistent.
//! All are scale-aware: callers pass the relevant norm and get an absolute
//! threshold back.

/// Sphere dedup / real-snap tolerance: `1e-8 · (1 + ‖A‖)`.
///
/// Two spheres merge when both coordinates agree within this; an imaginary
/// magnitude at or below it snaps to a real point.
#[inline]
pub fn sphere(op_norm: f64) -> f64 {
    1e-8 * (1.0 + op_norm)
}

/// Resolution limit for a cluster of `count` adjoint eigenvalues treated as
/// one spectral sphere: `8 · ((1 + ‖A‖) · 1e-13)^(2/count)`.
///
/// Computed eigenvalues of a defective block of size m scatter at radius
/// `≈ (κ · eps · ‖M‖)^(1/m)` around the true point, far beyond any flat
/// tolerance.  A cluster of `count` eigenvalues corresponds to quaternionic
/// multiplicity `count/2`, whose worst-case block size is `count/2`, giving
/// the exponent `2/count`.  The base `1e-13 · (1 + ‖A‖)` budgets three
/// decimal orders of backward-error headroom over machine epsilon; the
/// leading factor 8 covers the spread of a scattered ring relative to its
/// radius.  Floored by [`sphere`] so simple eigenvalues still merge.
#[inline]
pub fn defect_cluster(op_norm: f64, count: usize) -> f64 {
    let base = (1.0 + op_norm) * 1e-13;
    (8.0 * base.powf(2.0 / count.max(2) as f64)).max(sphere(op_norm))
}

/// Adjoint structure tolerance: `1e-9 · ‖M‖_F`.
///
/// A 2n×2n complex matrix is accepted as an adjoint image when
/// `‖J·M·J⁻¹ − conj(M)‖_F` stays below this.
#[inline]
pub fn adjoint_structure(frob_norm: f64) -> f64 {
    1e-9 * frob_norm
}

/// Rank threshold: singular values at or below `32 · dim · eps · σ_max`
/// count as zero, where `dim` is the (larger) dimension of the complex
/// adjoint, i.e. `2n` for an n×n quaternionic matrix.
///
/// The factor 32 budgets for matrices that were assembled rather than
/// measured: a similarity `S·B·S⁻¹` deposits round-off of order
/// `κ(S)·eps·‖A‖` in every entry, so a mathematically zero singular value
/// of the product can surface well above the bare `dim·eps·σ_max` of a
/// single backward-stable decomposition.  Spectra this library targets keep
/// genuine singular values many orders above the inflated cutoff.
///
/// The same threshold is applied no matter how the singular values were
/// obtained, so rank, index, ascent, and descent always agree.
#[inline]
pub fn rank(adjoint_dim: usize, sigma_max: f64) -> f64 {
    32.0 * adjoint_dim as f64 * f64::EPSILON * sigma_max
}

/// Quadrature termination: successive doublings must agree to
/// `1e-10 · (1 + ‖result‖)`.
#[inline]
pub fn quadrature(result_norm: f64) -> f64 {
    1e-10 * (1.0 + result_norm)
}

/// Initial node count per contour circle.
pub const QUAD_NODES_INITIAL: usize = 64;

/// Node-count ceiling per circle; exceeding it is a quadrature failure.
pub const QUAD_NODES_MAX: usize = 1 << 14;

/// Minimal slice-plane gap between a spectral subset and its complement for
/// contour construction.
pub const SEPARATION_MIN: f64 = 1e-6;

/// The contour route to the Drazin inverse requires the zero sphere to be
/// separated from the nonzero spectrum by at least `1e-3 · ‖A‖`.
#[inline]
pub fn drazin_separation(op_norm: f64) -> f64 {
    1e-3 * op_norm
}

/// Default residual tolerance for verification reports; the CLI lets the
/// environment override it.
pub const REPORT_DEFAULT: f64 = 1e-7;
