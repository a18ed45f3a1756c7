//! Quaternionic matrices as right-linear operators on ℍⁿ.
//!
//! An [`HMatrix`] represents the operator `u ↦ A·u`, which is right-linear:
//! `A(u·p + v) = (Au)·p + A·v`.  Scalar actions are matrix products with
//! `q·Iₙ`: `scale_left` is `(qI)·A` and `scale_right` is `A·(qI)`.
//!
//! All numerics route through the complex adjoint `χ(A)`: writing
//! `A = A₁ + A₂·j` with slice-plane blocks `A₁`, `A₂`, the adjoint is the
//! `2n×2n` complex matrix `[[A₁, A₂], [−conj(A₂), conj(A₁)]]`.  The embedding
//! is an injective real-algebra homomorphism, and a complex matrix `M` is an
//! adjoint image exactly when `J·M·J⁻¹ = conj(M)` for `J = [[0, I], [−I, 0]]`.
//! Vectors embed compatibly: `φ(x + y·j) = [x; −conj(y)]` satisfies
//! `χ(A)·φ(u) = φ(A·u)`.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel;
use crate::quat::Quaternion;
use crate::tol;

// ── HMatrix ─────────────────────────────────────────────────────────────────

/// A dense quaternionic matrix, row-major.
///
/// Square matrices are the right-linear operators this crate studies;
/// rectangular shapes appear only as basis collections (columns spanning a
/// subspace).
#[derive(Clone, Debug, PartialEq)]
pub struct HMatrix {
    nrows: usize,
    ncols: usize,
    data: Vec<Quaternion>,
}

impl HMatrix {
    /// Zero matrix of shape `rows × cols`.
    pub fn zeros(rows: usize, cols: usize) -> Self {
        HMatrix {
            nrows: rows,
            ncols: cols,
            data: vec![Quaternion::ZERO; rows * cols],
        }
    }

    /// Identity operator on ℍⁿ.
    pub fn identity(n: usize) -> Self {
        let mut m = HMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Quaternion::ONE;
        }
        m
    }

    /// Builds from a closure over `(row, col)`.
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut m = HMatrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Builds a square matrix from row-major entries; `entries.len()` must be `n²`.
    pub fn from_entries(n: usize, entries: Vec<Quaternion>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: entries.len(),
            });
        }
        Ok(HMatrix {
            nrows: n,
            ncols: n,
            data: entries,
        })
    }

    /// Diagonal matrix from scalar entries.
    pub fn diag(entries: &[Quaternion]) -> Self {
        let n = entries.len();
        let mut m = HMatrix::zeros(n, n);
        for (i, q) in entries.iter().enumerate() {
            m[(i, i)] = *q;
        }
        m
    }

    /// Stacks column vectors into an `n × k` basis matrix.
    pub fn from_columns(n: usize, cols: &[Vec<Quaternion>]) -> Self {
        let mut m = HMatrix::zeros(n, cols.len());
        for (j, col) in cols.iter().enumerate() {
            for i in 0..n {
                m[(i, j)] = col[i];
            }
        }
        m
    }

    /// Horizontal concatenation `[self | other]`; row counts must agree.
    pub fn hstack(&self, other: &HMatrix) -> HMatrix {
        debug_assert_eq!(self.nrows, other.nrows, "row counts must agree");
        HMatrix::from_fn(self.nrows, self.ncols + other.ncols, |i, j| {
            if j < self.ncols {
                self[(i, j)]
            } else {
                other[(i, j - self.ncols)]
            }
        })
    }

    #[inline]
    pub fn nrows(&self) -> usize {
        self.nrows
    }

    #[inline]
    pub fn ncols(&self) -> usize {
        self.ncols
    }

    /// Dimension of a square matrix.
    #[inline]
    pub fn n(&self) -> usize {
        debug_assert_eq!(self.nrows, self.ncols, "square matrix expected");
        self.nrows
    }

    #[inline]
    pub fn is_square(&self) -> bool {
        self.nrows == self.ncols
    }

    /// Column `j` as a vector.
    pub fn column(&self, j: usize) -> Vec<Quaternion> {
        (0..self.nrows).map(|i| self[(i, j)]).collect()
    }

    /// Checked addition.
    pub fn add_checked(&self, rhs: &HMatrix) -> Result<HMatrix> {
        if self.nrows != rhs.nrows || self.ncols != rhs.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.nrows * self.ncols,
                found: rhs.nrows * rhs.ncols,
            });
        }
        let data = self
            .data
            .iter()
            .zip(&rhs.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Ok(HMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data,
        })
    }

    /// Checked matrix product.
    pub fn matmul(&self, rhs: &HMatrix) -> Result<HMatrix> {
        if self.ncols != rhs.nrows {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: rhs.nrows,
            });
        }
        let mut out = HMatrix::zeros(self.nrows, rhs.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let aik = self[(i, k)];
                if aik == Quaternion::ZERO {
                    continue;
                }
                for j in 0..rhs.ncols {
                    out[(i, j)] = out[(i, j)] + aik * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Left scalar action `(q·I)·A`: every entry becomes `q·aᵢⱼ`.
    pub fn scale_left(&self, q: Quaternion) -> HMatrix {
        self.map(|a| q * a)
    }

    /// Right scalar action `A·(q·I)`: every entry becomes `aᵢⱼ·q`.
    pub fn scale_right(&self, q: Quaternion) -> HMatrix {
        self.map(|a| a * q)
    }

    /// Entrywise scaling by a real factor (left and right actions agree).
    pub fn scale_real(&self, t: f64) -> HMatrix {
        self.map(|a| a.scale(t))
    }

    /// `A^k` by repeated squaring; `A⁰ = I`.
    pub fn power(&self, k: usize) -> HMatrix {
        debug_assert!(self.is_square());
        let mut result = HMatrix::identity(self.n());
        let mut base = self.clone();
        let mut e = k;
        while e > 0 {
            if e & 1 == 1 {
                result = result.matmul(&base).expect("square powers conform");
            }
            e >>= 1;
            if e > 0 {
                base = base.matmul(&base).expect("square powers conform");
            }
        }
        result
    }

    /// Quaternionic conjugate transpose `(Aᴴ)ᵢⱼ = conj(aⱼᵢ)`.
    pub fn hermitian_transpose(&self) -> HMatrix {
        HMatrix::from_fn(self.ncols, self.nrows, |i, j| self[(j, i)].conj())
    }

    /// Applies the operator to a vector: `(A·u)ᵢ = Σⱼ aᵢⱼ·uⱼ`.
    pub fn apply(&self, u: &[Quaternion]) -> Result<Vec<Quaternion>> {
        if u.len() != self.ncols {
            return Err(Error::DimensionMismatch {
                expected: self.ncols,
                found: u.len(),
            });
        }
        let mut out = vec![Quaternion::ZERO; self.nrows];
        for i in 0..self.nrows {
            let mut acc = Quaternion::ZERO;
            for j in 0..self.ncols {
                acc = acc + self[(i, j)] * u[j];
            }
            out[i] = acc;
        }
        Ok(out)
    }

    fn map(&self, f: impl Fn(Quaternion) -> Quaternion) -> HMatrix {
        HMatrix {
            nrows: self.nrows,
            ncols: self.ncols,
            data: self.data.iter().map(|&q| f(q)).collect(),
        }
    }

    /// Frobenius norm `√(Σ |aᵢⱼ|²)`.
    pub fn frob_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry norm, `maxᵢⱼ |aᵢⱼ|`.
    pub fn max_entry_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Entrywise comparison within `tol` (Frobenius norm of the difference).
    pub fn approx_eq(&self, other: &HMatrix, tol: f64) -> bool {
        self.nrows == other.nrows
            && self.ncols == other.ncols
            && (self.clone() - other.clone()).frob_norm() <= tol
    }

    // ── Complex adjoint ─────────────────────────────────────────────────────

    /// The complex adjoint `χ(A) = [[A₁, A₂], [−conj(A₂), conj(A₁)]]`.
    pub fn complex_adjoint(&self) -> ComplexAdjoint {
        let (r, c) = (self.nrows, self.ncols);
        let mut m = DMatrix::<Complex64>::zeros(2 * r, 2 * c);
        for i in 0..r {
            for j in 0..c {
                let (z1, z2) = self[(i, j)].complex_parts();
                m[(i, j)] = z1;
                m[(i, j + c)] = z2;
                m[(i + r, j)] = -z2.conj();
                m[(i + r, j + c)] = z1.conj();
            }
        }
        ComplexAdjoint { m }
    }

    /// Pulls a `2n×2n` complex matrix back to quaternionic form, verifying
    /// the structure condition within `tol_struct = 1e-9·‖M‖_F`.
    pub fn from_adjoint(adj: &ComplexAdjoint) -> Result<HMatrix> {
        let residual = adj.structure_residual();
        let tol = tol::adjoint_structure(adj.m.norm());
        if residual > tol {
            return Err(Error::NotAdjointStructured { residual, tol });
        }
        Ok(Self::from_adjoint_unchecked(&adj.m))
    }

    /// Symmetrizing pull-back without the structure check, for matrices that
    /// are structured by construction (inverses, pseudo-inverses, quadrature
    /// sums of structured terms).
    pub(crate) fn from_adjoint_unchecked(m: &DMatrix<Complex64>) -> HMatrix {
        let r = m.nrows() / 2;
        let c = m.ncols() / 2;
        HMatrix::from_fn(r, c, |i, j| {
            let z1 = 0.5 * (m[(i, j)] + m[(i + r, j + c)].conj());
            let z2 = 0.5 * (m[(i, j + c)] - m[(i + r, j)].conj());
            Quaternion::from_complex_parts(z1, z2)
        })
    }

    // ── Numerics via the adjoint ────────────────────────────────────────────

    /// Singular values of `χ(A)`, descending (length `2n`; they appear in
    /// equal pairs because right multiplication by `j` preserves all the
    /// singular subspaces).
    pub(crate) fn adjoint_singular_values(&self) -> Vec<f64> {
        kernel::singular_values(&self.complex_adjoint().m)
    }

    /// Largest singular value of the adjoint — the operator norm of `A`.
    pub fn operator_norm(&self) -> f64 {
        if self.data.is_empty() {
            return 0.0;
        }
        self.adjoint_singular_values()[0]
    }

    /// Quaternionic rank: `rank_ℂ(χ(A)) / 2` with the pinned singular-value
    /// threshold.
    pub fn rank(&self) -> usize {
        self.rank_at_scale(0.0)
    }

    /// Rank with the cutoff referenced to `max(σ_max, scale)`.
    ///
    /// `scale` is the a-priori magnitude of the matrix when it was computed
    /// rather than given — `‖A‖ᵏ` for a power `Aᵏ`, so that a power that
    /// vanishes in exact arithmetic but is filled with multiplication
    /// round-off reads as rank 0 instead of inheriting the rank of its own
    /// noise.
    pub fn rank_at_scale(&self, scale: f64) -> usize {
        let sv = self.adjoint_singular_values();
        if sv.is_empty() {
            return 0;
        }
        let cutoff = tol::rank(sv.len(), sv[0].max(scale));
        // Singular values of the adjoint pair up; count surviving pairs.
        sv.chunks(2)
            .filter(|pair| 0.5 * (pair[0] + pair.get(1).copied().unwrap_or(pair[0])) > cutoff)
            .count()
    }

    /// Inverse operator, via LU on the adjoint.
    ///
    /// Fails with the smallest singular value when `A` is singular within
    /// the rank threshold.
    pub fn inverse(&self) -> Result<HMatrix> {
        debug_assert!(self.is_square());
        let adj = self.complex_adjoint().m;
        let sv = kernel::singular_values(&adj);
        let smallest = *sv.last().expect("nonempty matrix");
        if smallest <= tol::rank(sv.len(), sv[0]) {
            return Err(Error::Singular {
                smallest_sv: smallest,
            });
        }
        let inv = kernel::lu_inverse(&adj).ok_or(Error::Singular {
            smallest_sv: smallest,
        })?;
        Ok(HMatrix::from_adjoint_unchecked(&inv))
    }

    /// Solves `A·x = b` through the adjoint embedding.
    pub fn solve(&self, b: &[Quaternion]) -> Result<Vec<Quaternion>> {
        debug_assert!(self.is_square());
        let n = self.n();
        if b.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: b.len(),
            });
        }
        let adj = self.complex_adjoint().m;
        let sv = kernel::singular_values(&adj);
        let smallest = *sv.last().expect("nonempty matrix");
        if smallest <= tol::rank(sv.len(), sv[0]) {
            return Err(Error::Singular {
                smallest_sv: smallest,
            });
        }
        let rhs = embed_vector(b);
        let w = kernel::lu_solve(&adj, &DMatrix::from_column_slice(2 * n, 1, rhs.as_slice()))
            .ok_or(Error::Singular {
                smallest_sv: smallest,
            })?;
        Ok(extract_vector(&w.column(0).into_owned()))
    }

    /// Orthonormal bases of the range and kernel of `A^k` (right-linear
    /// spans over ℍ), as column collections.  `dim R + dim N = n`.
    ///
    /// The rank cutoff for `A^k` is referenced to `‖A‖ᵏ`, the magnitude at
    /// which the power was formed, so powers that vanish exactly keep an
    /// empty range even though their computed entries are round-off.
    pub fn range_kernel_basis(&self, k: usize) -> (HMatrix, HMatrix) {
        debug_assert!(self.is_square());
        let n = self.n();
        let ak = self.power(k);
        let scale = self.operator_norm().powi(k as i32);
        let r = ak.rank_at_scale(scale);
        let adj = ak.complex_adjoint().m;
        let sv = kernel::singular_values(&adj);
        let cutoff = tol::rank(sv.len(), sv[0].max(scale));

        let range_candidates: Vec<Vec<Quaternion>> = kernel::left_singular_pairs(&adj)
            .into_iter()
            .filter(|(s, _)| *s > cutoff)
            .map(|(_, w)| extract_vector(&w))
            .collect();
        let range = orthonormalize(n, range_candidates, r);

        let kernel_candidates: Vec<Vec<Quaternion>> = kernel::right_singular_pairs(&adj)
            .into_iter()
            .filter(|(s, _)| *s <= cutoff)
            .map(|(_, w)| extract_vector(&w))
            .collect();
        let null = orthonormalize(n, kernel_candidates, n - r);

        (
            HMatrix::from_columns(n, &range),
            HMatrix::from_columns(n, &null),
        )
    }
}

impl Index<(usize, usize)> for HMatrix {
    type Output = Quaternion;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.ncols + j]
    }
}

impl IndexMut<(usize, usize)> for HMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.ncols + j]
    }
}

impl Add for HMatrix {
    type Output = HMatrix;
    fn add(self, rhs: HMatrix) -> HMatrix {
        self.add_checked(&rhs).expect("conformable shapes")
    }
}

impl Sub for HMatrix {
    type Output = HMatrix;
    fn sub(self, rhs: HMatrix) -> HMatrix {
        self.add_checked(&rhs.map(|q| -q)).expect("conformable shapes")
    }
}

impl Neg for HMatrix {
    type Output = HMatrix;
    fn neg(self) -> HMatrix {
        self.map(|q| -q)
    }
}

impl Mul for HMatrix {
    type Output = HMatrix;
    fn mul(self, rhs: HMatrix) -> HMatrix {
        self.matmul(&rhs).expect("conformable shapes")
    }
}

impl Mul for &HMatrix {
    type Output = HMatrix;
    fn mul(self, rhs: &HMatrix) -> HMatrix {
        self.matmul(rhs).expect("conformable shapes")
    }
}

// ── ComplexAdjoint ──────────────────────────────────────────────────────────

/// The `2n×2n` complex image of a quaternionic matrix under `χ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexAdjoint {
    pub(crate) m: DMatrix<Complex64>,
}

impl ComplexAdjoint {
    /// Wraps a complex matrix claimed to be an adjoint image; the structure
    /// condition is verified by [`HMatrix::from_adjoint`].
    pub fn new(m: DMatrix<Complex64>) -> Self {
        ComplexAdjoint { m }
    }

    /// Borrow the underlying complex matrix.
    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.m
    }

    /// Frobenius residual of the structure condition
    /// `‖J·M·J⁻¹ − conj(M)‖_F`, evaluated blockwise.
    pub fn structure_residual(&self) -> f64 {
        let r = self.m.nrows() / 2;
        let c = self.m.ncols() / 2;
        // J·M·J⁻¹ swaps blocks: [[D, −C], [−B, A]] for M = [[A, B], [C, D]].
        let mut acc = 0.0f64;
        for i in 0..r {
            for j in 0..c {
                let a = self.m[(i, j)];
                let b = self.m[(i, j + c)];
                let cc = self.m[(i + r, j)];
                let d = self.m[(i + r, j + c)];
                acc += (d - a.conj()).norm_sqr();
                acc += (-b - cc.conj()).norm_sqr();
                acc += (-cc - b.conj()).norm_sqr();
                acc += (a - d.conj()).norm_sqr();
            }
        }
        acc.sqrt()
    }
}

// ── Vector embedding and quaternionic Gram–Schmidt ─────────────────────────

/// `φ(x + y·j) = [x; −conj(y)]`, so `χ(A)·φ(u) = φ(A·u)`.
pub(crate) fn embed_vector(u: &[Quaternion]) -> DVector<Complex64> {
    let n = u.len();
    DVector::from_fn(2 * n, |k, _| {
        if k < n {
            let (z1, _) = u[k].complex_parts();
            z1
        } else {
            let (_, z2) = u[k - n].complex_parts();
            -z2.conj()
        }
    })
}

/// Inverse of [`embed_vector`].
pub(crate) fn extract_vector(w: &DVector<Complex64>) -> Vec<Quaternion> {
    let n = w.nrows() / 2;
    (0..n)
        .map(|k| Quaternion::from_complex_parts(w[k], -w[k + n].conj()))
        .collect()
}

/// Quaternion-valued inner product `⟨u, w⟩ = Σ conj(uₖ)·wₖ`, right-linear in `w`.
pub(crate) fn inner(u: &[Quaternion], w: &[Quaternion]) -> Quaternion {
    u.iter()
        .zip(w)
        .fold(Quaternion::ZERO, |acc, (a, b)| acc + a.conj() * *b)
}

fn vec_norm(u: &[Quaternion]) -> f64 {
    u.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
}

/// Column-pivoted modified Gram–Schmidt over ℍ with one re-orthogonalization
/// pass, keeping exactly `keep` vectors.
pub(crate) fn orthonormalize(
    n: usize,
    mut candidates: Vec<Vec<Quaternion>>,
    keep: usize,
) -> Vec<Vec<Quaternion>> {
    let mut basis: Vec<Vec<Quaternion>> = Vec::with_capacity(keep);
    while basis.len() < keep && !candidates.is_empty() {
        // Pivot: remaining candidate with the largest residual norm.
        let (pivot, _) = candidates
            .iter()
            .enumerate()
            .map(|(idx, v)| (idx, vec_norm(v)))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .expect("nonempty candidates");
        let mut v = candidates.swap_remove(pivot);
        for _ in 0..2 {
            for b in &basis {
                let coef = inner(b, &v);
                for i in 0..n {
                    v[i] = v[i] - b[i] * coef;
                }
            }
        }
        let norm = vec_norm(&v);
        if norm <= 1e3 * f64::EPSILON {
            continue;
        }
        let inv = 1.0 / norm;
        for q in v.iter_mut() {
            *q = q.scale(inv);
        }
        // Orthogonalize the remaining candidates against the accepted vector.
        for c in candidates.iter_mut() {
            let coef = inner(&v, c);
            for i in 0..n {
                c[i] = c[i] - v[i] * coef;
            }
        }
        basis.push(v);
    }
    basis
}

// ── Tests ───────────────────────────────────────────────────────────────────

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn q(a: f64, b: f64, c: f64, d: f64) -> Quaternion {
        Quaternion::new(a, b, c, d)
    }

    fn random_q(rng: &mut ChaCha8Rng) -> Quaternion {
        q(
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
            rng.gen::<f64>() * 2.0 - 1.0,
        )
    }

    fn random_m(n: usize, rng: &mut ChaCha8Rng) -> HMatrix {
        HMatrix::from_fn(n, n, |_, _| random_q(rng))
    }

    /// Jordan nilpotent [[0,1],[0,0]].
    fn jordan2() -> HMatrix {
        let mut m = HMatrix::zeros(2, 2);
        m[(0, 1)] = Quaternion::ONE;
        m
    }

    #[test]
    fn identity_is_neutral() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let a = random_m(3, &mut rng);
        let i3 = HMatrix::identity(3);
        assert_eq!(i3.matmul(&a).unwrap(), a);
        assert_eq!(a.matmul(&i3).unwrap(), a);
    }

    #[test]
    fn scalar_actions_compose_to_sandwich() {
        let i1 = HMatrix::identity(1);
        let sandwich = i1.scale_right(Quaternion::J).scale_left(Quaternion::I);
        // (iI)·(I·(jI)) has single entry i·1·j = k.
        assert_eq!(sandwich[(0, 0)], Quaternion::I * Quaternion::ONE * Quaternion::J);
        assert_eq!(sandwich[(0, 0)], Quaternion::K);
    }

    #[test]
    fn nilpotent_square_vanishes() {
        let n = jordan2();
        assert!(n.power(2).approx_eq(&HMatrix::zeros(2, 2), 0.0));
        assert_eq!(n.power(0), HMatrix::identity(2));
    }

    #[test]
    fn dimension_mismatch_is_reported() {
        let a = HMatrix::zeros(2, 2);
        let b = HMatrix::zeros(3, 3);
        assert!(matches!(
            a.matmul(&b),
            Err(Error::DimensionMismatch { .. })
        ));
        assert!(matches!(
            a.add_checked(&b),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn adjoint_of_j_scalar() {
        let m = HMatrix::diag(&[Quaternion::J]);
        let adj = m.complex_adjoint();
        let want = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.0, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(-1.0, 0.0),
                Complex64::new(0.0, 0.0),
            ],
        );
        assert_eq!(adj.m, want);
    }

    #[test]
    fn adjoint_of_slice_scalar_is_diagonal() {
        let m = HMatrix::diag(&[q(0.5, -2.0, 0.0, 0.0)]);
        let adj = m.complex_adjoint();
        assert_eq!(adj.m[(0, 0)], Complex64::new(0.5, -2.0));
        assert_eq!(adj.m[(1, 1)], Complex64::new(0.5, 2.0));
        assert_eq!(adj.m[(0, 1)], Complex64::new(0.0, 0.0));
        assert_eq!(adj.m[(1, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn adjoint_is_multiplicative_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(22);
        for _ in 0..100 {
            let n = 1 + (rng.gen::<usize>() % 6);
            let a = random_m(n, &mut rng);
            let b = random_m(n, &mut rng);
            let lhs = a.matmul(&b).unwrap().complex_adjoint().m;
            let rhs = &a.complex_adjoint().m * &b.complex_adjoint().m;
            let scale = lhs.norm().max(1.0);
            assert!(
                (&lhs - &rhs).norm() <= 1e-11 * scale,
                "homomorphism defect {:.3e}",
                (&lhs - &rhs).norm() / scale
            );
        }
    }

    #[test]
    fn adjoint_round_trip_is_tight() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        let a = random_m(4, &mut rng);
        let back = HMatrix::from_adjoint(&a.complex_adjoint()).unwrap();
        assert!(back.approx_eq(&a, 1e-12 * (1.0 + a.frob_norm())));
    }

    #[test]
    fn from_adjoint_rejects_unstructured() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(2.0, 0.0),
            ],
        );
        let res = HMatrix::from_adjoint(&ComplexAdjoint::new(m));
        assert!(matches!(res, Err(Error::NotAdjointStructured { .. })));
    }

    #[test]
    fn inverse_of_unit_diagonal() {
        let a = HMatrix::diag(&[Quaternion::I, Quaternion::J]);
        let inv = a.inverse().unwrap();
        let want = HMatrix::diag(&[-Quaternion::I, -Quaternion::J]);
        assert!(inv.approx_eq(&want, 1e-14));
    }

    #[test]
    fn inverse_of_singular_fails() {
        let err = jordan2().inverse().unwrap_err();
        match err {
            Error::Singular { smallest_sv } => assert!(smallest_sv < 1e-12),
            other => panic!("expected Singular, got {other:?}"),
        }
    }

    #[test]
    fn inverse_of_unipotent() {
        let mut a = HMatrix::identity(2);
        a[(0, 1)] = q(0.0, 2.0, -1.0, 0.5);
        let inv = a.inverse().unwrap();
        let mut want = HMatrix::identity(2);
        want[(0, 1)] = -a[(0, 1)];
        assert!(inv.approx_eq(&want, 1e-12));
        assert!(a
            .matmul(&inv)
            .unwrap()
            .approx_eq(&HMatrix::identity(2), 1e-12));
    }

    #[test]
    fn rank_of_right_dependent_columns() {
        // Second column is the first times i (a right scalar multiple).
        let a = HMatrix::from_entries(
            2,
            vec![Quaternion::ONE, Quaternion::I, Quaternion::J, -Quaternion::K],
        )
        .unwrap();
        assert_eq!(a.column(1), {
            let c0 = a.column(0);
            c0.iter().map(|&x| x * Quaternion::I).collect::<Vec<_>>()
        });
        assert_eq!(a.rank(), 1);
    }

    #[test]
    fn rank_and_norm_of_identity() {
        let i4 = HMatrix::identity(4);
        assert_eq!(i4.rank(), 4);
        assert!((i4.operator_norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rank_plus_nullity_on_random_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(24);
        for trial in 0..30 {
            let n = 2 + trial % 5;
            let r = 1 + trial % n;
            // Rank-r product of n×r and r×n factors.
            let left = HMatrix::from_fn(n, r, |_, _| random_q(&mut rng));
            let right = HMatrix::from_fn(r, n, |_, _| random_q(&mut rng));
            let a = left.matmul(&right).unwrap();
            assert_eq!(a.rank(), r, "constructed rank");
            let (range, null) = a.range_kernel_basis(1);
            assert_eq!(range.ncols() + null.ncols(), n);
        }
    }

    #[test]
    fn operator_norm_is_submultiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(25);
        for _ in 0..30 {
            let n = 1 + (rng.gen::<usize>() % 5);
            let a = random_m(n, &mut rng);
            let b = random_m(n, &mut rng);
            let ab = a.matmul(&b).unwrap();
            assert!(ab.operator_norm() <= a.operator_norm() * b.operator_norm() + 1e-10);
        }
    }

    #[test]
    fn solve_residual_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(26);
        for _ in 0..20 {
            let n = 2 + (rng.gen::<usize>() % 4);
            // Shifted random matrix: comfortably invertible.
            let a = random_m(n, &mut rng) + HMatrix::identity(n).scale_real(4.0);
            let b: Vec<Quaternion> = (0..n).map(|_| random_q(&mut rng)).collect();
            let x = a.solve(&b).unwrap();
            let ax = a.apply(&x).unwrap();
            let resid: f64 = ax
                .iter()
                .zip(&b)
                .map(|(l, r)| (*l - *r).norm_sqr())
                .sum::<f64>()
                .sqrt();
            let xnorm: f64 = x.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt();
            assert!(resid <= 1e-9 * a.operator_norm() * xnorm.max(1.0));
        }
    }

    #[test]
    fn vector_embedding_intertwines_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(27);
        let a = random_m(3, &mut rng);
        let u: Vec<Quaternion> = (0..3).map(|_| random_q(&mut rng)).collect();
        let lhs = &a.complex_adjoint().m * embed_vector(&u);
        let rhs = embed_vector(&a.apply(&u).unwrap());
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn jordan_block_range_and_kernel() {
        let (range, null) = jordan2().range_kernel_basis(1);
        assert_eq!(range.ncols(), 1);
        assert_eq!(null.ncols(), 1);
        // Both spaces are span{e₁}: second component vanishes.
        assert!(range[(1, 0)].norm() < 1e-12);
        assert!(range[(0, 0)].norm() > 0.9);
        assert!(null[(1, 0)].norm() < 1e-12);
        assert!(null[(0, 0)].norm() > 0.9);
    }

    #[test]
    fn invertible_has_trivial_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(28);
        let a = random_m(3, &mut rng) + HMatrix::identity(3).scale_real(4.0);
        for k in [1usize, 2, 3] {
            let (range, null) = a.range_kernel_basis(k);
            assert_eq!(range.ncols(), 3);
            assert_eq!(null.ncols(), 0);
        }
    }

    #[test]
    fn projector_diagonal_splits_cleanly() {
        let a = HMatrix::diag(&[Quaternion::ONE, Quaternion::ZERO]);
        let (range, null) = a.range_kernel_basis(1);
        assert_eq!(range.ncols(), 1);
        assert_eq!(null.ncols(), 1);
        assert!(range[(0, 0)].norm() > 0.9 && range[(1, 0)].norm() < 1e-12);
        assert!(null[(1, 0)].norm() > 0.9 && null[(0, 0)].norm() < 1e-12);
    }

    #[test]
    fn orthonormal_bases_are_orthonormal() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        let n = 5;
        let left = HMatrix::from_fn(n, 3, |_, _| random_q(&mut rng));
        let right = HMatrix::from_fn(3, n, |_, _| random_q(&mut rng));
        let a = left.matmul(&right).unwrap();
        let (range, null) = a.range_kernel_basis(1);
        let all = [&range, &null];
        for basis in all {
            for p in 0..basis.ncols() {
                for s in 0..basis.ncols() {
                    let ip = inner(&basis.column(p), &basis.column(s));
                    let want = if p == s { 1.0 } else { 0.0 };
                    assert!(
                        (ip - Quaternion::from_real(want)).norm() < 1e-10,
                        "inner product ({p},{s}) = {ip:?}"
                    );
                }
            }
        }
        // Cross-orthogonality is not required (range ⊥ kernel only for normal
        // operators) but kernel vectors must be annihilated.
        for s in 0..null.ncols() {
            let av = a.apply(&null.column(s)).unwrap();
            assert!(av.iter().map(|q| q.norm()).fold(0.0, f64::max) < 1e-10);
        }
    }
}
