//! The Drazin inverse by three independent routes, the index/ascent/descent
//! chain, and the algebraic identity suite.
//!
//! `B` is the Drazin inverse of `A` when `AB = BA`, `AB² = B`, and
//! `A^{k+1}B = A^k` for some `k ≥ 0`; the least such `k` is the Drazin
//! index `i(A)`.  On `ℍⁿ` every quasinilpotent operator is nilpotent, so
//! the generalized Drazin inverse coincides with the Drazin inverse and one
//! code path serves both notions.

use crate::error::{Error, Result};
use crate::geninv::reciprocal_spectrum_report;
use crate::hmat::HMatrix;
use crate::quat::EigenSphere;
use crate::scalc::{
    build_contours, domain_radius_cap, func_calc, riesz_projection, ContourPolicy, IntrinsicFn,
};
use crate::sspec::{s_spectrum, Spectrum};
use crate::tol;

/// A Drazin inverse together with its index and spectral projection.
#[derive(Clone, Debug)]
pub struct DrazinResult {
    /// The Drazin inverse `A^D`.
    pub inverse: HMatrix,
    /// The Drazin index: the least `k` with `A^{k+1}·A^D = A^k`.
    pub index: usize,
    /// The eigenprojection at zero, `P = I − A·A^D`.
    pub projection: HMatrix,
}

/// The least `k ≥ 0` with `rank(A^k) = rank(A^{k+1})`; zero exactly for
/// invertible `A`, and at most `n` always.
///
/// Ranks of the powers are cut off at the `‖A‖ᵏ` formation scale: a power
/// that vanishes exactly must read as rank 0, not as the rank of its own
/// round-off.
pub fn index(a: &HMatrix) -> usize {
    let n = a.n();
    let op_norm = a.operator_norm();
    let mut power = HMatrix::identity(n);
    let mut scale = 1.0;
    let mut prev_rank = n;
    for k in 1..=n {
        power = power.matmul(a).expect("square");
        scale *= op_norm;
        let r = power.rank_at_scale(scale);
        if r == prev_rank {
            return k - 1;
        }
        prev_rank = r;
    }
    n
}

/// The least `k ≥ 0` at which the kernel chain `N(A^k) ⊆ N(A^{k+1}) ⊆ …`
/// stabilizes.  At that depth `ℍⁿ = R(A^k) ⊕ N(A^k)`, which is verified.
pub fn ascent(a: &HMatrix) -> usize {
    let n = a.n();
    let op_norm = a.operator_norm();
    let mut power = HMatrix::identity(n);
    let mut scale = 1.0;
    let mut prev_nullity = 0;
    let mut k = n;
    for step in 1..=n {
        power = power.matmul(a).expect("square");
        scale *= op_norm;
        let nullity = n - power.rank_at_scale(scale);
        if nullity == prev_nullity {
            k = step - 1;
            break;
        }
        prev_nullity = nullity;
    }
    let (range, null) = a.range_kernel_basis(k.max(1));
    debug_assert_eq!(
        range.hstack(&null).rank(),
        n,
        "range and kernel of A^k must span at the stabilization depth"
    );
    k
}

/// The least `k ≥ 0` at which the range chain `R(A^k) ⊇ R(A^{k+1}) ⊇ …`
/// stabilizes; equals [`ascent`] because `dim R(A^k) + dim N(A^k) = n`.
pub fn descent(a: &HMatrix) -> usize {
    index(a)
}

/// `S·(C⁻¹ ⊕ 0)·S⁻¹` for `S = [range basis | kernel basis]` of `A^k` and
/// `C` the compression of `A` to `R(A^k)`.  At `k ≥ index(A)` the
/// compression is invertible and the result is the Drazin inverse.
pub(crate) fn split_inverse(a: &HMatrix, k: usize) -> Result<HMatrix> {
    let n = a.n();
    let (range, null) = a.range_kernel_basis(k.max(1));
    let r = range.ncols();
    if r == 0 {
        return Ok(HMatrix::zeros(n, n));
    }
    let s = range.hstack(&null);
    let s_inv = s.inverse()?;
    let m = s_inv.matmul(a)?.matmul(&s)?;
    let c = HMatrix::from_fn(r, r, |i, j| m[(i, j)]);
    let c_inv = c.inverse()?;
    let block = HMatrix::from_fn(n, n, |i, j| {
        if i < r && j < r {
            c_inv[(i, j)]
        } else {
            crate::quat::Quaternion::ZERO
        }
    });
    s.matmul(&block)?.matmul(&s_inv)
}

/// The Drazin inverse through the core–nilpotent splitting `A = A₁ ⊕ A₂`
/// (`A₁` invertible on `R(A^k)`, `A₂` nilpotent on `N(A^k)`, `k` the
/// index): `A^D = A₁⁻¹ ⊕ 0` in the splitting basis.
pub fn drazin_algebraic(a: &HMatrix) -> Result<DrazinResult> {
    let n = a.n();
    let k = index(a);
    if k == 0 {
        return Ok(DrazinResult {
            inverse: a.inverse()?,
            index: 0,
            projection: HMatrix::zeros(n, n),
        });
    }
    let inverse = split_inverse(a, k)?;
    let projection = HMatrix::identity(n) - a.matmul(&inverse)?;
    Ok(DrazinResult {
        inverse,
        index: k,
        projection,
    })
}

/// The zero sphere of the spectrum (if present) and the distance from the
/// origin to the nearest nonzero sphere.
fn zero_sphere_and_gap(spectrum: &Spectrum, op_norm: f64) -> (Option<EigenSphere>, f64) {
    let tol0 = tol::sphere(op_norm);
    let mut zero = None;
    let mut gap = f64::INFINITY;
    for (s, _) in spectrum.spheres() {
        let r = s.radius_from_origin();
        if r <= tol0 {
            zero = Some(*s);
        } else {
            gap = gap.min(r);
        }
    }
    (zero, gap)
}

/// The Drazin inverse as `(A+P)⁻¹(I−P)` with `P` the Riesz projection of
/// `A` at the zero sphere (zero when `A` is invertible).
///
/// The quadrature route needs the zero sphere separated from the rest of
/// the spectrum by at least `1e−3·‖A‖`; closer spectra raise
/// [`Error::IllSeparated`] so the caller can fall back to
/// [`drazin_algebraic`].
pub fn drazin_via_projection(a: &HMatrix) -> Result<DrazinResult> {
    let n = a.n();
    let op_norm = a.operator_norm();
    let spectrum = s_spectrum(a);
    let (zero, gap) = zero_sphere_and_gap(&spectrum, op_norm);
    let p = match zero {
        None => HMatrix::zeros(n, n),
        Some(zs) => {
            let required = tol::drazin_separation(op_norm);
            if gap < required {
                return Err(Error::IllSeparated { gap, required });
            }
            riesz_projection(a, &[zs])?
        }
    };
    let shifted = a.clone() + p.clone();
    let inverse = shifted
        .inverse()?
        .matmul(&(HMatrix::identity(n) - p.clone()))?;
    Ok(DrazinResult {
        inverse,
        index: index(a),
        projection: p,
    })
}

/// The Drazin inverse as `f(A)` for the selector `f` that is `0` near the
/// zero sphere and `1/q` near the nonzero spectrum: contours enclose only
/// the nonzero spheres, so the integrand is `S_L⁻¹(s,A)·s⁻¹` throughout.
///
/// Separation gating matches [`drazin_via_projection`].
pub fn drazin_via_funcalc(a: &HMatrix) -> Result<DrazinResult> {
    let n = a.n();
    let op_norm = a.operator_norm();
    let spectrum = s_spectrum(a);
    let (zero, gap) = zero_sphere_and_gap(&spectrum, op_norm);
    let tol0 = tol::sphere(op_norm);
    let nonzero: Vec<EigenSphere> = spectrum
        .spheres()
        .iter()
        .map(|(s, _)| *s)
        .filter(|s| s.radius_from_origin() > tol0)
        .collect();

    let k = index(a);
    if nonzero.is_empty() {
        return Ok(DrazinResult {
            inverse: HMatrix::zeros(n, n),
            index: k,
            projection: HMatrix::identity(n),
        });
    }
    if zero.is_some() {
        let required = tol::drazin_separation(op_norm);
        if gap < required {
            return Err(Error::IllSeparated { gap, required });
        }
    }

    // The selector switches branches at |s| = gap/2; capping the circle
    // radius by the domain clearance keeps every closed contour disk on the
    // `1/s` side of that circle, whatever the inter-sphere gaps are.
    let selector = IntrinsicFn::drazin_selector(gap / 2.0);
    let policy = ContourPolicy {
        radius_cap: domain_radius_cap(&selector, &nonzero)
            .min(ContourPolicy::default().radius_cap),
        ..ContourPolicy::default()
    };
    let contours = build_contours(&spectrum, &nonzero, &policy)?;
    let inverse = func_calc(&selector, a, &contours)?;
    let projection = HMatrix::identity(n) - a.matmul(&inverse)?;
    debug_assert!(
        reciprocal_spectrum_report(a, &inverse).max_deviation <= 1e-6,
        "nonzero spectrum of the selector image must be reciprocal"
    );
    Ok(DrazinResult {
        inverse,
        index: k,
        projection,
    })
}

/// Scaled residuals of the four Drazin equations for a candidate `(B, k)`.
#[derive(Clone, Copy, Debug)]
pub struct DrazinReport {
    /// `‖AB − BA‖ / (1 + ‖A‖‖B‖)`.
    pub commute: f64,
    /// `‖AB² − B‖ / (1 + ‖A‖‖B‖²)`.
    pub absorption: f64,
    /// `‖A^{k+1}B − A^k‖ / (1 + ‖A‖^{k+1}‖B‖)`.
    pub chain: f64,
    /// `‖(A − A²B)^k‖ / (1 + ‖A − A²B‖^k)` for `k ≥ 1`; at `k = 0` the
    /// plain scaled norm of `A − A²B`, which must itself vanish.
    pub nilpotency: f64,
}

impl DrazinReport {
    /// Worst of the four residuals.
    pub fn max(&self) -> f64 {
        self.commute
            .max(self.absorption)
            .max(self.chain)
            .max(self.nilpotency)
    }
}

/// Evaluates the defining equations for `B` as a Drazin inverse of `A` at
/// index `k`; each residual is scaled by the degree of its identity.
pub fn verify_drazin(a: &HMatrix, b: &HMatrix, k: usize) -> Result<DrazinReport> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let na = a.frob_norm();
    let nb = b.frob_norm();
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let commute = (ab.clone() - ba).frob_norm() / (1.0 + na * nb);
    let absorption = (ab.matmul(b)? - b.clone()).frob_norm() / (1.0 + na * nb * nb);
    let ak = a.power(k);
    let chain = (ak.matmul(a)?.matmul(b)? - ak).frob_norm() / (1.0 + na.powi(k as i32 + 1) * nb);
    let core_residue = a.clone() - a.matmul(a)?.matmul(b)?;
    let nilpotency = if k == 0 {
        core_residue.frob_norm() / (1.0 + na)
    } else {
        core_residue.power(k).frob_norm() / (1.0 + core_residue.frob_norm().powi(k as i32))
    };
    Ok(DrazinReport {
        commute,
        absorption,
        chain,
        nilpotency,
    })
}

/// Relative deviations of the four Drazin-inverse identities.
#[derive(Clone, Copy, Debug)]
pub struct IdentityReport {
    /// `(A^k)^D = (A^D)^k`, worst case over `k ∈ {2, 3}`.
    pub power: f64,
    /// `(A^D)^D = A²·A^D`.
    pub double: f64,
    /// `((A^D)^D)^D = A^D`.
    pub triple: f64,
    /// `A^D·(A^D)^D = A·A^D`.
    pub projector: f64,
}

impl IdentityReport {
    /// Worst of the four deviations.
    pub fn max(&self) -> f64 {
        self.power.max(self.double).max(self.triple).max(self.projector)
    }
}

fn relative_deviation(got: &HMatrix, want: &HMatrix) -> f64 {
    (got.clone() - want.clone()).frob_norm() / (1.0 + want.frob_norm())
}

/// Evaluates the four Drazin-inverse identities with the algebraic route.
pub fn identity_suite(a: &HMatrix) -> Result<IdentityReport> {
    let n = a.n();
    let op_norm = a.operator_norm();
    let ad = drazin_algebraic(a)?.inverse;
    let mut power: f64 = 0.0;
    for k in [2usize, 3] {
        // A power that vanishes at its formation scale is exactly zero and
        // so is its Drazin inverse; the round-off filling the computed
        // power is generically invertible and must not be inverted.
        let pk = a.power(k);
        let lhs = if pk.rank_at_scale(op_norm.powi(k as i32)) == 0 {
            HMatrix::zeros(n, n)
        } else {
            drazin_algebraic(&pk)?.inverse
        };
        let rhs = ad.power(k);
        power = power.max(relative_deviation(&lhs, &rhs));
    }
    let add = drazin_algebraic(&ad)?.inverse;
    let double = relative_deviation(&add, &a.matmul(a)?.matmul(&ad)?);
    let triple = relative_deviation(&drazin_algebraic(&add)?.inverse, &ad);
    let projector = relative_deviation(&ad.matmul(&add)?, &a.matmul(&ad)?);
    Ok(IdentityReport {
        power,
        double,
        triple,
        projector,
    })
}

/// Outcome of comparing `(AB)^D` against `A^D·B^D` for commuting inputs.
#[derive(Clone, Debug)]
pub struct ProductReport {
    /// `(AB)^D` computed from the product.
    pub combined: HMatrix,
    /// `A^D·B^D` from the factors.
    pub separate: HMatrix,
    /// Relative deviation between the two.
    pub deviation: f64,
}

/// Checks `(AB)^D = A^D·B^D`; inputs must commute to working precision.
pub fn commuting_product_check(a: &HMatrix, b: &HMatrix) -> Result<ProductReport> {
    let ab = a.matmul(b)?;
    let ba = b.matmul(a)?;
    let residual = (ab.clone() - ba).frob_norm();
    let gate = 1e-10 * (1.0 + a.frob_norm() * b.frob_norm());
    if residual > gate {
        return Err(Error::PreconditionViolated {
            what: "operators do not commute",
            residual,
        });
    }
    let combined = drazin_algebraic(&ab)?.inverse;
    let separate = drazin_algebraic(a)?
        .inverse
        .matmul(&drazin_algebraic(b)?.inverse)?;
    let deviation = relative_deviation(&combined, &separate);
    Ok(ProductReport {
        combined,
        separate,
        deviation,
    })
}

/// Outcome of checking the left-multiplication operator `L_A : B ↦ AB`.
#[derive(Clone, Copy, Debug)]
pub struct LeftMultReport {
    /// Drazin index of `A` itself.
    pub matrix_index: usize,
    /// Drazin index of `L_A` on the vectorized matrix space.
    pub operator_index: usize,
    /// Relative deviation of `(L_A)^D` from `L_{A^D}`.
    pub deviation: f64,
}

/// `L_A` on column-major-vectorized `ℍ^{n×n}`: column `j` of `AB` is
/// `A·(column j of B)`, so the matrix is a block diagonal of `n` copies of
/// `A`.
fn left_mult_matrix(a: &HMatrix) -> HMatrix {
    let n = a.n();
    HMatrix::from_fn(n * n, n * n, |i, j| {
        if i / n == j / n {
            a[(i % n, j % n)]
        } else {
            crate::quat::Quaternion::ZERO
        }
    })
}

/// Checks `i(L_A) = i(A)` and `(L_A)^D = L_{A^D}` on the vectorized matrix
/// space.  `L_A` is `n² × n²`, so the check is capped at `n ≤ 4`.
pub fn left_mult_check(a: &HMatrix) -> Result<LeftMultReport> {
    let n = a.n();
    if n > 4 {
        return Err(Error::PreconditionViolated {
            what: "left-multiplication operator is n²×n²; capped at n ≤ 4",
            residual: n as f64,
        });
    }
    let big = left_mult_matrix(a);
    let da = drazin_algebraic(a)?;
    let dbig = drazin_algebraic(&big)?;
    let want = left_mult_matrix(&da.inverse);
    Ok(LeftMultReport {
        matrix_index: da.index,
        operator_index: dbig.index,
        deviation: relative_deviation(&dbig.inverse, &want),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gen;
    use crate::geninv;
    use crate::quat::Quaternion;

    fn jordan_block(n: usize) -> HMatrix {
        HMatrix::from_fn(n, n, |i, j| {
            if j == i + 1 {
                Quaternion::ONE
            } else {
                Quaternion::ZERO
            }
        })
    }

    /// Ground-truth Drazin inverse for a [`gen::CoreNilpotent`] sample with
    /// the given nilpotent block size: invert the diagonal of the core,
    /// zero the nilpotent block, conjugate back.
    fn ground_truth(cn: &gen::CoreNilpotent, n: usize, nil: usize) -> HMatrix {
        let inv_dim = n - nil;
        let mut middle = HMatrix::zeros(n, n);
        for i in 0..inv_dim {
            middle[(i, i)] = cn.core[(i, i)].inv().unwrap();
        }
        let (s, s_inv) = &cn.transform;
        s.matmul(&middle).unwrap().matmul(s_inv).unwrap()
    }

    #[test]
    fn index_of_reference_matrices() {
        assert_eq!(index(&jordan_block(2)), 2);
        assert_eq!(index(&HMatrix::identity(3)), 0);
        assert_eq!(
            index(&HMatrix::diag(&[Quaternion::ONE, Quaternion::ZERO])),
            1
        );
        assert_eq!(index(&HMatrix::zeros(3, 3)), 1);
    }

    #[test]
    fn ascent_and_descent_agree_with_the_index() {
        let j = jordan_block(2);
        assert_eq!(ascent(&j), 2);
        assert_eq!(descent(&j), 2);

        let d = HMatrix::diag(&[Quaternion::I, Quaternion::ZERO]);
        assert_eq!(ascent(&d), 1);
        assert_eq!(descent(&d), 1);

        let mut rng = gen::rng(71);
        let cn = gen::core_nilpotent(5, 3, 0.4, 8.0, &mut rng);
        assert_eq!(cn.index, 3);
        assert_eq!(ascent(&cn.matrix), 3);
        assert_eq!(descent(&cn.matrix), 3);
        assert_eq!(index(&cn.matrix), 3);
    }

    #[test]
    fn algebraic_route_on_nilpotent_and_invertible_inputs() {
        let j = jordan_block(3);
        let r = drazin_algebraic(&j).unwrap();
        assert_eq!(r.index, 3);
        assert_eq!(r.inverse.max_entry_norm(), 0.0);
        assert!((r.projection - HMatrix::identity(3)).max_entry_norm() < 1e-12);

        let mut rng = gen::rng(72);
        let (s, s_inv) = gen::well_conditioned(3, 6.0, &mut rng);
        let r = drazin_algebraic(&s).unwrap();
        assert_eq!(r.index, 0);
        assert!((r.inverse - s_inv).max_entry_norm() < 1e-10);
        assert_eq!(r.projection.max_entry_norm(), 0.0);
    }

    #[test]
    fn algebraic_route_on_scalar_diagonal() {
        let two_i = Quaternion::new(0.0, 2.0, 0.0, 0.0);
        let a = HMatrix::diag(&[two_i, Quaternion::ZERO]);
        let r = drazin_algebraic(&a).unwrap();
        assert_eq!(r.index, 1);
        let want = HMatrix::diag(&[two_i.inv().unwrap(), Quaternion::ZERO]);
        assert!((r.inverse - want).max_entry_norm() < 1e-12);
    }

    #[test]
    fn algebraic_route_matches_constructed_ground_truth() {
        let mut rng = gen::rng(73);
        for trial in 0..10 {
            let n = 3 + trial % 4;
            let nil = (trial % 3).min(n - 1);
            let cn = gen::core_nilpotent(n, nil, 0.3, 8.0, &mut rng);
            let r = drazin_algebraic(&cn.matrix).unwrap();
            assert_eq!(r.index, cn.index, "trial {trial}");
            let want = ground_truth(&cn, n, nil);
            let dev = (r.inverse.clone() - want.clone()).frob_norm() / (1.0 + want.frob_norm());
            assert!(dev < 1e-9, "trial {trial}: deviation {dev:.3e}");
            assert!(
                verify_drazin(&cn.matrix, &r.inverse, r.index)
                    .unwrap()
                    .max()
                    < 1e-10,
                "trial {trial}"
            );
        }
    }

    #[test]
    fn projection_route_on_decoupled_diagonal() {
        let a = HMatrix::diag(&[Quaternion::ZERO, Quaternion::from_real(2.0)]);
        let r = drazin_via_projection(&a).unwrap();
        let want_p = HMatrix::diag(&[Quaternion::ONE, Quaternion::ZERO]);
        let want_inv = HMatrix::diag(&[Quaternion::ZERO, Quaternion::from_real(0.5)]);
        assert!((r.projection - want_p).max_entry_norm() < 1e-10);
        assert!((r.inverse - want_inv).max_entry_norm() < 1e-10);
        assert_eq!(r.index, 1);
    }

    #[test]
    fn projection_route_on_invertible_input_uses_a_zero_projection() {
        let mut rng = gen::rng(74);
        let (s, s_inv) = gen::well_conditioned(4, 5.0, &mut rng);
        let r = drazin_via_projection(&s).unwrap();
        assert_eq!(r.projection.max_entry_norm(), 0.0);
        assert!((r.inverse - s_inv).max_entry_norm() < 1e-10);
    }

    #[test]
    fn projection_route_matches_the_algebraic_route() {
        let mut rng = gen::rng(75);
        for trial in 0..6 {
            let cn = gen::core_nilpotent(5, 2, 0.4, 6.0, &mut rng);
            let via_p = drazin_via_projection(&cn.matrix).unwrap();
            let alg = drazin_algebraic(&cn.matrix).unwrap();
            let dev = (via_p.inverse.clone() - alg.inverse.clone()).frob_norm();
            assert!(dev < 1e-8, "trial {trial}: routes differ {dev:.3e}");
            assert_eq!(via_p.index, alg.index);
            let p = &via_p.projection;
            let idem = (p.matmul(p).unwrap() - p.clone()).frob_norm();
            assert!(idem < 1e-9, "trial {trial}: projection defect {idem:.3e}");
        }
    }

    #[test]
    fn funcalc_route_on_decoupled_diagonal() {
        let a = HMatrix::diag(&[Quaternion::ZERO, Quaternion::from_real(2.0)]);
        let r = drazin_via_funcalc(&a).unwrap();
        let want = HMatrix::diag(&[Quaternion::ZERO, Quaternion::from_real(0.5)]);
        assert!((r.inverse - want).max_entry_norm() < 1e-10);
    }

    #[test]
    fn funcalc_route_inverts_a_complex_eigenvalue() {
        let one_plus_i = Quaternion::new(1.0, 1.0, 0.0, 0.0);
        let a = HMatrix::diag(&[one_plus_i, Quaternion::ZERO]);
        let r = drazin_via_funcalc(&a).unwrap();
        let want = HMatrix::diag(&[one_plus_i.inv().unwrap(), Quaternion::ZERO]);
        assert!((r.inverse.clone() - want).max_entry_norm() < 1e-9);
        let report = reciprocal_spectrum_report(&a, &r.inverse);
        assert!(report.max_deviation < 1e-9);
        assert!(report
            .pairs
            .iter()
            .any(|p| p.want.approx_eq(&EigenSphere { u: 0.5, v: 0.5 }, 1e-9)));
    }

    #[test]
    fn three_routes_agree_on_separated_spectra() {
        let mut rng = gen::rng(76);
        for trial in 0..5 {
            let n = 4 + trial % 3;
            let nil = 1 + trial % 2;
            let cn = gen::core_nilpotent(n, nil, 0.5, 6.0, &mut rng);
            let alg = drazin_algebraic(&cn.matrix).unwrap();
            let prj = drazin_via_projection(&cn.matrix).unwrap();
            let fnc = drazin_via_funcalc(&cn.matrix).unwrap();
            let d1 = (alg.inverse.clone() - prj.inverse.clone()).frob_norm();
            let d2 = (alg.inverse.clone() - fnc.inverse.clone()).frob_norm();
            let d3 = (prj.inverse.clone() - fnc.inverse.clone()).frob_norm();
            let worst = d1.max(d2).max(d3);
            assert!(worst < 1e-7, "trial {trial}: route spread {worst:.3e}");
            assert_eq!(alg.index, prj.index);
            assert_eq!(alg.index, fnc.index);
        }
    }

    #[test]
    fn quadrature_routes_reject_ill_separated_spectra() {
        let a = HMatrix::diag(&[
            Quaternion::from_real(1e-5),
            Quaternion::ONE,
            Quaternion::ZERO,
        ]);
        match drazin_via_projection(&a) {
            Err(Error::IllSeparated { gap, required }) => {
                assert!(gap < required);
            }
            other => panic!("expected IllSeparated, got {other:?}"),
        }
        assert!(matches!(
            drazin_via_funcalc(&a),
            Err(Error::IllSeparated { .. })
        ));
        let fallback = drazin_algebraic(&a).unwrap();
        assert_eq!(fallback.index, 1);
    }

    #[test]
    fn verification_report_flags_a_wrong_candidate() {
        let id = HMatrix::identity(2);
        let double = id.scale_real(2.0);
        let report = verify_drazin(&id, &double, 0).unwrap();
        assert!(report.absorption > 0.1, "AB² = B must fail for B = 2I");
        let honest = verify_drazin(&id, &id, 0).unwrap();
        assert!(honest.max() < 1e-14);
    }

    #[test]
    fn verification_accepts_zero_for_nilpotents() {
        let j = jordan_block(3);
        let zero = HMatrix::zeros(3, 3);
        let report = verify_drazin(&j, &zero, 3).unwrap();
        assert!(report.max() < 1e-14);
    }

    #[test]
    fn verification_rejects_mismatched_dimensions() {
        let err = verify_drazin(&HMatrix::identity(2), &HMatrix::identity(3), 0).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn index_equals_nilpotency_index_of_the_core_residue() {
        let mut rng = gen::rng(77);
        for trial in 0..6 {
            let n = 4 + trial % 3;
            let nil = 1 + trial % 3;
            let cn = gen::core_nilpotent(n, nil, 0.3, 6.0, &mut rng);
            let r = drazin_algebraic(&cn.matrix).unwrap();
            let residue = cn.matrix.clone()
                - cn.matrix
                    .matmul(&cn.matrix)
                    .unwrap()
                    .matmul(&r.inverse)
                    .unwrap();
            let scale = 1.0 + residue.frob_norm();
            let mut nilpotency = 0;
            let mut power = HMatrix::identity(n);
            for step in 1..=n {
                power = power.matmul(&residue).unwrap();
                if power.frob_norm() / scale.powi(step as i32) < 1e-10 {
                    nilpotency = step;
                    break;
                }
            }
            assert_eq!(nilpotency, r.index.max(1), "trial {trial}");
        }
    }

    #[test]
    fn identity_suite_on_reference_inputs() {
        let j = jordan_block(2);
        let report = identity_suite(&j).unwrap();
        assert!(report.max() < 1e-12, "nilpotent: {report:?}");

        let mut rng = gen::rng(78);
        let (s, _) = gen::well_conditioned(3, 5.0, &mut rng);
        let report = identity_suite(&s).unwrap();
        assert!(report.max() < 1e-9, "invertible: {report:?}");
    }

    #[test]
    fn identity_suite_on_index_two_matrices() {
        let mut rng = gen::rng(79);
        for trial in 0..5 {
            let cn = gen::core_nilpotent(5, 2, 0.3, 6.0, &mut rng);
            let report = identity_suite(&cn.matrix).unwrap();
            assert!(report.max() < 1e-7, "trial {trial}: {report:?}");
        }
    }

    #[test]
    fn product_check_with_a_polynomial_in_a() {
        let mut rng = gen::rng(80);
        for trial in 0..5 {
            let cn = gen::core_nilpotent(4, 1 + trial % 2, 0.3, 5.0, &mut rng);
            let (_, b) = gen::random_polynomial_of(&cn.matrix, 2, &mut rng);
            let report = commuting_product_check(&cn.matrix, &b).unwrap();
            assert!(report.deviation < 1e-7, "trial {trial}: {:.3e}", report.deviation);
        }
    }

    #[test]
    fn product_check_with_the_identity_factor() {
        let mut rng = gen::rng(81);
        let cn = gen::core_nilpotent(4, 2, 0.4, 5.0, &mut rng);
        let report = commuting_product_check(&cn.matrix, &HMatrix::identity(4)).unwrap();
        assert!(report.deviation < 1e-10);
        let ad = drazin_algebraic(&cn.matrix).unwrap().inverse;
        assert!((report.combined - ad).max_entry_norm() < 1e-10);
    }

    #[test]
    fn product_check_against_blockwise_ground_truth() {
        let d1 = Quaternion::from_real(2.0);
        let d2 = Quaternion::new(0.0, 3.0, 0.0, 0.0);
        let mut a = HMatrix::zeros(4, 4);
        let mut b = HMatrix::zeros(4, 4);
        a[(0, 0)] = d1;
        a[(1, 1)] = d2;
        a[(2, 3)] = Quaternion::ONE;
        b[(0, 0)] = d2;
        b[(1, 1)] = d1;
        b[(2, 3)] = Quaternion::from_real(2.0);
        let report = commuting_product_check(&a, &b).unwrap();
        let prod = d1.inv().unwrap() * d2.inv().unwrap();
        let mut want = HMatrix::zeros(4, 4);
        want[(0, 0)] = prod;
        want[(1, 1)] = prod;
        assert!((report.combined.clone() - want).max_entry_norm() < 1e-10);
        assert!(report.deviation < 1e-10);
    }

    #[test]
    fn product_check_rejects_noncommuting_inputs() {
        let a = jordan_block(2);
        let b = a.hermitian_transpose();
        let err = commuting_product_check(&a, &b).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated { .. }));
    }

    #[test]
    fn left_multiplication_mirrors_the_matrix() {
        let j = jordan_block(2);
        let report = left_mult_check(&j).unwrap();
        assert_eq!(report.matrix_index, 2);
        assert_eq!(report.operator_index, 2);
        assert!(report.deviation < 1e-12);

        let report = left_mult_check(&HMatrix::identity(2)).unwrap();
        assert_eq!(report.matrix_index, 0);
        assert_eq!(report.operator_index, 0);
        assert!(report.deviation < 1e-12);

        let report = left_mult_check(&HMatrix::diag(&[Quaternion::ONE, Quaternion::ZERO])).unwrap();
        assert_eq!(report.matrix_index, 1);
        assert_eq!(report.operator_index, 1);
        assert!(report.deviation < 1e-12);
    }

    #[test]
    fn left_multiplication_on_a_random_small_matrix() {
        let mut rng = gen::rng(82);
        let cn = gen::core_nilpotent(3, 1, 0.4, 5.0, &mut rng);
        let report = left_mult_check(&cn.matrix).unwrap();
        assert_eq!(report.matrix_index, report.operator_index);
        assert!(report.deviation < 1e-9, "deviation {:.3e}", report.deviation);
    }

    #[test]
    fn left_multiplication_is_capped() {
        let err = left_mult_check(&HMatrix::identity(5)).unwrap_err();
        assert!(matches!(err, Error::PreconditionViolated { .. }));
    }

    #[test]
    fn group_and_drazin_coincide_at_index_one() {
        let mut rng = gen::rng(83);
        for trial in 0..6 {
            let n = 3 + trial % 3;
            let cn = gen::core_nilpotent(n, 1, 0.3, 8.0, &mut rng);
            let d = drazin_algebraic(&cn.matrix).unwrap();
            assert_eq!(d.index, 1, "trial {trial}");
            let g = geninv::group_inverse(&cn.matrix).unwrap();
            let dev = (d.inverse.clone() - g).max_entry_norm();
            assert!(dev < 1e-9, "trial {trial}: {dev:.3e}");
        }
    }

    #[test]
    fn contour_perturbation_does_not_move_the_inverse() {
        let mut rng = gen::rng(84);
        let cn = gen::core_nilpotent(4, 1, 0.5, 5.0, &mut rng);
        let a = &cn.matrix;
        let op_norm = a.operator_norm();
        let spectrum = s_spectrum(a);
        let tol0 = tol::sphere(op_norm);
        let nonzero: Vec<EigenSphere> = spectrum
            .spheres()
            .iter()
            .map(|(s, _)| *s)
            .filter(|s| s.radius_from_origin() > tol0)
            .collect();
        let (_, gap) = zero_sphere_and_gap(&spectrum, op_norm);
        let selector = IntrinsicFn::drazin_selector(gap / 2.0);
        let wide = build_contours(&spectrum, &nonzero, &ContourPolicy::default()).unwrap();
        let tight = build_contours(
            &spectrum,
            &nonzero,
            &ContourPolicy {
                margin_divisor: 5.0,
                ..ContourPolicy::default()
            },
        )
        .unwrap();
        let one = func_calc(&selector, a, &wide).unwrap();
        let two = func_calc(&selector, a, &tight).unwrap();
        let dev = (one - two).frob_norm();
        assert!(dev < 1e-8, "radius change moved the result by {dev:.3e}");
    }

    #[test]
    fn reciprocal_spectrum_across_routes() {
        let mut rng = gen::rng(85);
        for trial in 0..4 {
            let cn = gen::core_nilpotent(5, 2, 0.5, 5.0, &mut rng);
            let r = drazin_via_funcalc(&cn.matrix).unwrap();
            let report = reciprocal_spectrum_report(&cn.matrix, &r.inverse);
            assert!(
                report.max_deviation < 1e-7,
                "trial {trial}: {:.3e}",
                report.max_deviation
            );
        }
    }
}
