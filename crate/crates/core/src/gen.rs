//! Seeded random generators for test corpora.
//!
//! The workhorses build matrices with known ground truth: unitary factors
//! with exactly orthonormal columns, well-conditioned similarity transforms,
//! and core–nilpotent forms `S·(D ⊕ N)·S⁻¹` whose index and spectrum are
//! known by construction.  Everything is deterministic for a fixed seed.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::hmat::{orthonormalize, HMatrix};
use crate::quat::{EigenSphere, Quaternion};

/// Seeded RNG used across all corpora.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard-normal quaternion (each component N(0,1)).
pub fn random_quaternion(rng: &mut ChaCha8Rng) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

/// Dense matrix with standard-normal quaternion entries.
pub fn random_matrix(n: usize, rng: &mut ChaCha8Rng) -> HMatrix {
    HMatrix::from_fn(n, n, |_, _| random_quaternion(rng))
}

/// Random vector with standard-normal quaternion entries.
pub fn random_vector(n: usize, rng: &mut ChaCha8Rng) -> Vec<Quaternion> {
    (0..n).map(|_| random_quaternion(rng)).collect()
}

/// Quaternionic unitary matrix: Gram–Schmidt orthonormalization of a random
/// matrix, so `UᴴU = UUᴴ = I` to round-off.
pub fn random_unitary(n: usize, rng: &mut ChaCha8Rng) -> HMatrix {
    loop {
        let m = random_matrix(n, rng);
        let cols: Vec<Vec<Quaternion>> = (0..n).map(|j| m.column(j)).collect();
        let basis = orthonormalize(n, cols, n);
        if basis.len() == n {
            return HMatrix::from_columns(n, &basis);
        }
    }
}

/// Well-conditioned similarity transform `S = U·D·Vᴴ` with real singular
/// values in `[1, cond]`, plus its exact-form inverse `V·D⁻¹·Uᴴ`.
pub fn well_conditioned(n: usize, cond: f64, rng: &mut ChaCha8Rng) -> (HMatrix, HMatrix) {
    let u = random_unitary(n, rng);
    let v = random_unitary(n, rng);
    let mut d = vec![1.0f64; n];
    for (i, item) in d.iter_mut().enumerate() {
        *item = if i == 0 {
            1.0
        } else if i == n - 1 && n > 1 {
            cond
        } else {
            1.0 + rng.gen::<f64>() * (cond - 1.0)
        };
    }
    let diag = HMatrix::diag(&d.iter().map(|&t| Quaternion::from_real(t)).collect::<Vec<_>>());
    let diag_inv = HMatrix::diag(
        &d.iter()
            .map(|&t| Quaternion::from_real(1.0 / t))
            .collect::<Vec<_>>(),
    );
    let vh = v.hermitian_transpose();
    let uh = u.hermitian_transpose();
    let s = u.matmul(&diag).unwrap().matmul(&vh).unwrap();
    let s_inv = v.matmul(&diag_inv).unwrap().matmul(&uh).unwrap();
    (s, s_inv)
}

/// A core–nilpotent test matrix with fully known ground truth.
pub struct CoreNilpotent {
    /// The matrix `S·(D ⊕ N)·S⁻¹` (or `U·(D ⊕ N)·Uᴴ` for the unitary flavor).
    pub matrix: HMatrix,
    /// Drazin index: nilpotency index of `N` (0 when there is no nilpotent
    /// part, 1 when `N` is a zero block).
    pub index: usize,
    /// Expected spectrum as `(sphere, multiplicity)` pairs, zero sphere
    /// included when a nilpotent block exists.
    pub spectrum: Vec<(EigenSphere, usize)>,
    /// Similarity factor and its inverse.
    pub transform: (HMatrix, HMatrix),
    /// The block-diagonal middle factor `D ⊕ N`.
    pub core: HMatrix,
}

/// Draws invertible diagonal entries whose conjugacy spheres are pairwise
/// separated by at least `gap` (in the slice metric, conjugates included),
/// stay at least `gap` away from the zero sphere, and are either exactly real
/// or have imaginary magnitude at least `gap/2` — keeping contour radii
/// bounded away from zero downstream.
fn separated_diagonal(count: usize, gap: f64, rng: &mut ChaCha8Rng) -> Vec<Quaternion> {
    let mut picked: Vec<Quaternion> = Vec::with_capacity(count);
    'outer: while picked.len() < count {
        let mut q = random_quaternion(rng);
        // Snap near-real draws to exactly real.
        if q.im_norm() < gap / 2.0 {
            q = Quaternion::from_real(q.re());
        }
        let sphere = q.sphere();
        if sphere.radius_from_origin() < gap {
            continue;
        }
        if sphere.v > 0.0 && sphere.v < gap / 2.0 {
            continue;
        }
        for prev in &picked {
            if prev.sphere().slice_distance(&sphere) < gap {
                continue 'outer;
            }
        }
        picked.push(q);
    }
    picked
}

/// Builds `D ⊕ N` with `dim D = n − nilpotent_size` separated invertible
/// diagonal entries and `N` a single nilpotent Jordan block.
fn block_core(n: usize, nilpotent_size: usize, gap: f64, rng: &mut ChaCha8Rng) -> (HMatrix, usize, Vec<(EigenSphere, usize)>) {
    assert!(nilpotent_size <= n);
    let inv_dim = n - nilpotent_size;
    let diag = separated_diagonal(inv_dim, gap, rng);
    let mut core = HMatrix::zeros(n, n);
    for (i, q) in diag.iter().enumerate() {
        core[(i, i)] = *q;
    }
    for i in 0..nilpotent_size.saturating_sub(1) {
        core[(inv_dim + i, inv_dim + i + 1)] = Quaternion::ONE;
    }
    let index = match nilpotent_size {
        0 => 0,
        s => s.max(1),
    };
    let mut spectrum: Vec<(EigenSphere, usize)> = diag.iter().map(|q| (q.sphere(), 1)).collect();
    if nilpotent_size > 0 {
        spectrum.push((EigenSphere { u: 0.0, v: 0.0 }, nilpotent_size));
    }
    spectrum.sort_by(|a, b| {
        (a.0.u, a.0.v)
            .partial_cmp(&(b.0.u, b.0.v))
            .expect("finite sphere coordinates")
    });
    (core, index, spectrum)
}

/// `S·(D ⊕ N)·S⁻¹` with a well-conditioned `S` (condition ≤ `cond`), sphere
/// separation ≥ `gap`, and a nilpotent Jordan block of the given size.
pub fn core_nilpotent(
    n: usize,
    nilpotent_size: usize,
    gap: f64,
    cond: f64,
    rng: &mut ChaCha8Rng,
) -> CoreNilpotent {
    let (core, index, spectrum) = block_core(n, nilpotent_size, gap, rng);
    let (s, s_inv) = well_conditioned(n, cond, rng);
    let matrix = s.matmul(&core).unwrap().matmul(&s_inv).unwrap();
    CoreNilpotent {
        matrix,
        index,
        spectrum,
        transform: (s, s_inv),
        core,
    }
}

/// `U·(D ⊕ N)·Uᴴ` with quaternionic unitary `U`: same ground truth as
/// [`core_nilpotent`] but norm-preserving, so `‖Aᵏ‖` tracks the spectral
/// radius exactly once the nilpotent block dies.
pub fn unitary_conjugated(
    n: usize,
    nilpotent_size: usize,
    gap: f64,
    rng: &mut ChaCha8Rng,
) -> CoreNilpotent {
    let (core, index, spectrum) = block_core(n, nilpotent_size, gap, rng);
    let u = random_unitary(n, rng);
    let uh = u.hermitian_transpose();
    let matrix = u.matmul(&core).unwrap().matmul(&uh).unwrap();
    CoreNilpotent {
        matrix,
        index,
        spectrum,
        transform: (u.clone(), uh),
        core,
    }
}

/// Random real polynomial `p(A) = c₀I + c₁A + … + c_d A^d` with coefficients
/// in `[−1, 1]`; commutes with `A` by construction.
pub fn random_polynomial_of(a: &HMatrix, degree: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, HMatrix) {
    let coeffs: Vec<f64> = (0..=degree).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    let n = a.n();
    let mut result = HMatrix::zeros(n, n);
    let mut power = HMatrix::identity(n);
    for (k, &c) in coeffs.iter().enumerate() {
        result = result + power.scale_real(c);
        if k < degree {
            power = power.matmul(a).unwrap();
        }
    }
    (coeffs, result)
}
