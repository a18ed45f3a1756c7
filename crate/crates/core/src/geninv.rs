//! Generalized inverses: existence, the Moore–Penrose witness, the PBQ
//! parametrization, and the commuting (group) inverse.
//!
//! A generalized inverse of `A` is any `B` with `ABA = A` and `BAB = B`; then
//! `AB` and `BA` are projections with `R(AB) = R(A)` and `N(BA) = N(A)`.  In
//! finite dimension every subspace is closed and complemented, so existence
//! is unconditional and the Moore–Penrose inverse is the canonical witness.

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::quat::EigenSphere;
use crate::scalc::{MappingReport, SphereMatch};
use crate::sspec::s_spectrum;
use crate::{kernel, tol};

/// A generalized inverse `B` of some `A`, with the two associated
/// projections cached.
#[derive(Clone, Debug)]
pub struct GenInvResult {
    /// The generalized inverse.
    pub b: HMatrix,
    /// `A·B`, a projection onto `R(A)`.
    pub ab: HMatrix,
    /// `B·A`, a projection along `N(A)`.
    pub ba: HMatrix,
}

impl GenInvResult {
    /// Packages `B` with its projections.
    pub fn new(a: &HMatrix, b: HMatrix) -> Result<Self> {
        let ab = a.matmul(&b)?;
        let ba = b.matmul(a)?;
        Ok(GenInvResult { b, ab, ba })
    }

    /// Relative defect of `ABA = A`.
    pub fn defect_aba(&self, a: &HMatrix) -> f64 {
        let aba = self.ab.matmul(a).expect("conformable");
        (aba - a.clone()).frob_norm() / (1.0 + a.frob_norm())
    }

    /// Relative defect of `BAB = B`.
    pub fn defect_bab(&self) -> f64 {
        let bab = self.ba.matmul(&self.b).expect("conformable");
        (bab - self.b.clone()).frob_norm() / (1.0 + self.b.frob_norm())
    }

    /// Relative projection defects `‖(AB)² − AB‖` and `‖(BA)² − BA‖`.
    pub fn projection_defects(&self) -> (f64, f64) {
        let d1 = (self.ab.matmul(&self.ab).expect("square") - self.ab.clone()).frob_norm()
            / (1.0 + self.ab.frob_norm());
        let d2 = (self.ba.matmul(&self.ba).expect("square") - self.ba.clone()).frob_norm()
            / (1.0 + self.ba.frob_norm());
        (d1, d2)
    }
}

/// The Moore–Penrose inverse, pulled back from the complex pseudoinverse of
/// the adjoint image.  Pseudoinversion commutes with the structure symmetry
/// (the Moore–Penrose inverse is unique and the symmetry is a *-algebra
/// automorphism), so the pullback is well defined.
pub fn moore_penrose(a: &HMatrix) -> HMatrix {
    let adj = a.complex_adjoint().matrix().clone();
    let sv = kernel::singular_values(&adj);
    let cutoff = match sv.first() {
        Some(&s0) if s0 > 0.0 => tol::rank(sv.len(), s0),
        _ => return HMatrix::zeros(a.ncols(), a.nrows()),
    };
    let p = kernel::pinv(&adj, cutoff);
    HMatrix::from_adjoint_unchecked(&p)
}

/// Relative screen used by the precondition checks below.
fn pre_tol(scale: f64) -> f64 {
    1e-8 * (1.0 + scale)
}

/// The parametrized generalized inverse `P·B·Q`.
///
/// Preconditions, each verified and reported with its residual on failure:
/// `B` is a generalized inverse of `A`; `Q` is a projection onto `R(A)`
/// (idempotent and fixing `R(A)`); `P` is a projection with `N(P) = N(A)`
/// (idempotent, annihilating `N(A)`, of rank `rank(A)`).
pub fn gen_inverse_from(b: &HMatrix, p: &HMatrix, q: &HMatrix, a: &HMatrix) -> Result<HMatrix> {
    let packed = GenInvResult::new(a, b.clone())?;
    let r_aba = packed.defect_aba(a);
    if r_aba > pre_tol(1.0) {
        return Err(Error::PreconditionViolated {
            what: "B is not a generalized inverse of A (ABA ≠ A)",
            residual: r_aba,
        });
    }
    let r_bab = packed.defect_bab();
    if r_bab > pre_tol(1.0) {
        return Err(Error::PreconditionViolated {
            what: "B is not a generalized inverse of A (BAB ≠ B)",
            residual: r_bab,
        });
    }

    let r_q_idem = (q.matmul(q)? - q.clone()).frob_norm();
    if r_q_idem > pre_tol(q.frob_norm()) {
        return Err(Error::PreconditionViolated {
            what: "Q is not idempotent",
            residual: r_q_idem,
        });
    }
    let r_q_fix = (q.matmul(a)? - a.clone()).frob_norm();
    if r_q_fix > pre_tol(a.frob_norm() * (1.0 + q.frob_norm())) {
        return Err(Error::PreconditionViolated {
            what: "Q does not fix R(A)",
            residual: r_q_fix,
        });
    }
    if q.rank() != a.rank() {
        return Err(Error::PreconditionViolated {
            what: "rank(Q) ≠ rank(A), so R(Q) ⊋ R(A)",
            residual: (q.rank() as f64 - a.rank() as f64).abs(),
        });
    }

    let r_p_idem = (p.matmul(p)? - p.clone()).frob_norm();
    if r_p_idem > pre_tol(p.frob_norm()) {
        return Err(Error::PreconditionViolated {
            what: "P is not idempotent",
            residual: r_p_idem,
        });
    }
    let (_, null_a) = a.range_kernel_basis(1);
    if null_a.ncols() > 0 {
        let r_p_null = p.matmul(&null_a)?.frob_norm();
        if r_p_null > pre_tol(p.frob_norm()) {
            return Err(Error::PreconditionViolated {
                what: "P does not annihilate N(A)",
                residual: r_p_null,
            });
        }
    }
    if p.rank() != a.rank() {
        return Err(Error::PreconditionViolated {
            what: "rank(P) ≠ rank(A), so N(P) ≠ N(A)",
            residual: (p.rank() as f64 - a.rank() as f64).abs(),
        });
    }

    p.matmul(b)?.matmul(q)
}

/// The group inverse: the unique generalized inverse commuting with `A`.
///
/// Exists iff `rank(A) = rank(A²)`, i.e. iff `ℍⁿ = R(A) ⊕ N(A)`.  Computed
/// by the closed formula `A·(A³)⁺·A` first; if the commuting identities do
/// not verify to working precision the explicit range/kernel splitting
/// `B = S·(C⁻¹ ⊕ 0)·S⁻¹` takes over.
pub fn group_inverse(a: &HMatrix) -> Result<HMatrix> {
    let rank_a = a.rank();
    let rank_a2 = a.matmul(a)?.rank();
    if rank_a != rank_a2 {
        return Err(Error::NoGroupInverse { rank_a, rank_a2 });
    }
    let b = group_via_formula(a)?;
    if group_defect(a, &b)? <= 1e-9 {
        return Ok(b);
    }
    group_via_splitting(a)
}

/// Worst relative defect over the three group-inverse identities.
fn group_defect(a: &HMatrix, b: &HMatrix) -> Result<f64> {
    let packed = GenInvResult::new(a, b.clone())?;
    let commute = (packed.ab.clone() - packed.ba.clone()).frob_norm() / (1.0 + packed.ab.frob_norm());
    Ok(packed.defect_aba(a).max(packed.defect_bab()).max(commute))
}

/// `A·(A³)⁺·A`.
fn group_via_formula(a: &HMatrix) -> Result<HMatrix> {
    let a3 = a.matmul(a)?.matmul(a)?;
    let p = moore_penrose(&a3);
    a.matmul(&p)?.matmul(a)
}

/// `S·(C⁻¹ ⊕ 0)·S⁻¹` for `S = [range basis | kernel basis]` of `A` itself
/// and `C` the compression of `A` to its range: the depth-one case of the
/// core–nilpotent splitting.
fn group_via_splitting(a: &HMatrix) -> Result<HMatrix> {
    crate::drazin::split_inverse(a, 1)
}

/// The sphere of the reciprocal of any representative of `s`: inversion
/// maps `u + v·I` to `(u − v·I)/(u² + v²)` slice-wise, so the sphere is
/// `(u, v)/(u² + v²)`.
pub fn reciprocal_sphere(s: &EigenSphere) -> Result<EigenSphere> {
    let d = s.u * s.u + s.v * s.v;
    if d == 0.0 {
        return Err(Error::ZeroDivisor);
    }
    Ok(EigenSphere {
        u: s.u / d,
        v: s.v / d,
    })
}

/// Compares the nonzero spectrum of `B` with the reciprocal spheres of the
/// nonzero spectrum of `A`, matching multiplicity-exactly; any unmatched
/// sphere forces `max_deviation = ∞`.
pub fn reciprocal_spectrum_report(a: &HMatrix, b: &HMatrix) -> MappingReport {
    let tol_a = tol::sphere(a.operator_norm());
    let tol_b = tol::sphere(b.operator_norm());

    let nonzero = |spec: &crate::sspec::Spectrum, tol: f64| -> Vec<(EigenSphere, usize)> {
        spec.spheres()
            .iter()
            .filter(|(s, _)| s.radius_from_origin() > tol)
            .map(|(s, m)| (*s, *m))
            .collect()
    };
    let got = nonzero(&s_spectrum(b), tol_b);
    let want: Vec<(EigenSphere, usize)> = nonzero(&s_spectrum(a), tol_a)
        .into_iter()
        .map(|(s, m)| (reciprocal_sphere(&s).expect("nonzero sphere"), m))
        .collect();

    let mut pairs = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let mut remaining = want;
    for (g, gm) in &got {
        let best = remaining
            .iter()
            .enumerate()
            .filter(|(_, (_, m))| *m == *gm)
            .map(|(i, (s, _))| (i, *s, g.slice_distance(s)))
            .min_by(|a, b| a.2.partial_cmp(&b.2).expect("finite"));
        match best {
            Some((i, w, d)) => {
                pairs.push(SphereMatch {
                    got: *g,
                    want: w,
                    deviation: d,
                });
                max_deviation = max_deviation.max(d);
                remaining.remove(i);
            }
            None => max_deviation = f64::INFINITY,
        }
    }
    if !remaining.is_empty() {
        max_deviation = f64::INFINITY;
    }
    MappingReport {
        pairs,
        max_deviation,
    }
}

/// Compares the nonzero spectrum of the group inverse with the reciprocal
/// spheres of the nonzero spectrum of `A`.
pub fn group_inverse_spectrum_check(a: &HMatrix) -> Result<MappingReport> {
    let b = group_inverse(a)?;
    Ok(reciprocal_spectrum_report(a, &b))
}

/// `‖(I − Π)·V‖` where `Π` is the orthogonal projector onto the span of the
/// orthonormal columns of `basis`: the residual of `span(V) ⊆ span(basis)`.
pub fn containment_residual(v: &HMatrix, basis: &HMatrix) -> f64 {
    if basis.ncols() == 0 {
        return v.frob_norm();
    }
    let proj = basis
        .matmul(&basis.hermitian_transpose())
        .expect("conformable");
    let n = v.nrows();
    let id = HMatrix::identity(n);
    (id - proj).matmul(v).expect("conformable").frob_norm()
}
