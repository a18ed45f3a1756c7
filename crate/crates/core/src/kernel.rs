//! Internal complex numerical kernel.
//!
//! Everything spectral in this crate reduces to three primitives on complex
//! matrices: eigenvalues, LU solves, and singular value decompositions.
//! Eigenvalues come from the complex Schur form and solves from complex LU,
//! both used directly.  SVD-derived quantities (singular values, pseudo-
//! inverses, singular bases) are routed through the real embedding
//! `M = X + iY ↦ [[X, −Y], [Y, X]]` and a real SVD instead: the complex SVD
//! of the underlying library returns wrong factorizations on some
//! rank-deficient inputs, while the embedded route is exact up to round-off
//! (singular values duplicate pairwise; `pinv(embed(M)) = embed(pinv(M))` by
//! uniqueness of the Moore–Penrose inverse).

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

/// Eigenvalues of a square complex matrix: diagonal of the Schur triangular
/// factor.  Order is deterministic for a fixed input.
///
/// The zero matrix must bypass the Schur iteration: the library normalizes by
/// the largest entry magnitude before iterating, which divides by zero and
/// NaN-poisons the deflation test, so the plain iteration never terminates on
/// exactly zero input.
pub fn eigenvalues(m: &DMatrix<Complex64>) -> Vec<Complex64> {
    let n = m.nrows();
    if m.camax() == 0.0 {
        return vec![Complex64::new(0.0, 0.0); n];
    }
    let budget = 40 * n.max(4);
    if let Some(schur) = m.clone().try_schur(f64::EPSILON, budget) {
        let (_, t) = schur.unpack();
        return (0..n).map(|i| t[(i, i)]).collect();
    }
    // Non-convergence within budget: retry under a fixed unitary similarity,
    // which preserves the spectrum exactly but restarts the QR iteration from
    // a different Hessenberg form.
    let u = deterministic_unitary(n);
    let conjugated = u.adjoint() * m * &u;
    let schur = conjugated
        .try_schur(f64::EPSILON, 4 * budget)
        .expect("Schur iteration failed to converge even after unitary restart");
    let (_, t) = schur.unpack();
    (0..n).map(|i| t[(i, i)]).collect()
}

/// A fixed (seed-free, dimension-determined) unitary built by QR of a matrix
/// with pseudo-random entries from a splitmix64 stream.
fn deterministic_unitary(n: usize) -> DMatrix<Complex64> {
    let mut state: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut next = move || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z = z ^ (z >> 31);
        (z >> 11) as f64 / (1u64 << 53) as f64 - 0.5
    };
    let g = DMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()));
    g.qr().q()
}

/// Solves `M·X = B` by complex LU.  `None` when LU hits an exactly zero pivot;
/// callers are expected to have screened singularity via singular values.
pub fn lu_solve(m: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    m.clone().lu().solve(b)
}

/// Inverse by complex LU; same caveat as [`lu_solve`].
pub fn lu_inverse(m: &DMatrix<Complex64>) -> Option<DMatrix<Complex64>> {
    m.clone().lu().try_inverse()
}

/// Singular value decomposition `M = U·Σ·Vᴴ` by one-sided Jacobi
/// (Hestenes) sweeps: plane rotations on column pairs until all pairs are
/// orthogonal; the converged column norms are the singular values.
///
/// The library SVD (in both its real and complex lanes) returns
/// inconsistent factorizations on matrices with tightly clustered singular
/// values.  Adjoint images of quaternionic matrices have every singular
/// value doubled, so for this crate the degenerate case is the common
/// case; the one-sided Jacobi iteration is immune because already
/// orthogonal pairs are simply skipped.
///
/// Returns `(u, sigma, v)` with `sigma` descending and `u`, `v` column-
/// aligned to it.  Columns of `u` beyond the rank are zero (callers filter
/// by a cutoff); columns of `v` always form a full unitary.
pub fn jacobi_svd(m: &DMatrix<Complex64>) -> (DMatrix<Complex64>, Vec<f64>, DMatrix<Complex64>) {
    let rows = m.nrows();
    let cols = m.ncols();
    let mut a = m.clone();
    let mut v = DMatrix::<Complex64>::identity(cols, cols);
    let tol = f64::EPSILON * cols.max(1) as f64;
    let max_sweeps = 60;
    for _ in 0..max_sweeps {
        let mut rotated = false;
        for p in 0..cols.saturating_sub(1) {
            for q in (p + 1)..cols {
                let alpha = a.column(p).norm_squared();
                let beta = a.column(q).norm_squared();
                let gamma: Complex64 = a.column(p).dotc(&a.column(q));
                let scale = (alpha * beta).sqrt();
                if scale == 0.0 || gamma.norm() <= tol * scale {
                    continue;
                }
                rotated = true;
                // diag(1, e^{−iφ}) reduces the 2×2 Gram block to the real
                // symmetric [[α, |γ|], [|γ|, β]]; a real Jacobi rotation
                // annihilates the off-diagonal entry.
                let g = gamma.norm();
                let ph = (gamma / g).conj();
                let tau = (beta - alpha) / (2.0 * g);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for i in 0..rows {
                    let xp = a[(i, p)];
                    let xq = a[(i, q)] * ph;
                    a[(i, p)] = xp * c - xq * s;
                    a[(i, q)] = xp * s + xq * c;
                }
                for i in 0..cols {
                    let xp = v[(i, p)];
                    let xq = v[(i, q)] * ph;
                    v[(i, p)] = xp * c - xq * s;
                    v[(i, q)] = xp * s + xq * c;
                }
            }
        }
        if !rotated {
            break;
        }
    }

    let mut order: Vec<usize> = (0..cols).collect();
    let norms: Vec<f64> = (0..cols).map(|j| a.column(j).norm()).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite norms"));

    let mut u = DMatrix::<Complex64>::zeros(rows, cols);
    let mut sigma = Vec::with_capacity(cols);
    let mut vs = DMatrix::<Complex64>::zeros(cols, cols);
    for (slot, &j) in order.iter().enumerate() {
        let s = norms[j];
        sigma.push(s);
        if s > 0.0 {
            let inv = Complex64::new(1.0 / s, 0.0);
            for i in 0..rows {
                u[(i, slot)] = a[(i, j)] * inv;
            }
        }
        for i in 0..cols {
            vs[(i, slot)] = v[(i, j)];
        }
    }
    (u, sigma, vs)
}

/// Singular values of a complex matrix, descending; `min(rows, cols)`
/// entries.
pub fn singular_values(m: &DMatrix<Complex64>) -> Vec<f64> {
    let mut s = jacobi_svd(m).1;
    s.truncate(m.nrows().min(m.ncols()));
    s
}

/// Moore–Penrose pseudoinverse with the given singular-value cutoff:
/// `Σ σ_k⁻¹·v_k·u_kᴴ` over `σ_k > cutoff`.
pub fn pinv(m: &DMatrix<Complex64>, cutoff: f64) -> DMatrix<Complex64> {
    let (u, sigma, v) = jacobi_svd(m);
    let mut out = DMatrix::<Complex64>::zeros(m.ncols(), m.nrows());
    for (k, &s) in sigma.iter().enumerate() {
        if s > cutoff {
            let scaled = v.column(k) / Complex64::new(s, 0.0);
            out += scaled * u.column(k).adjoint();
        }
    }
    out
}

/// Left singular pairs `(σ, u)` of a complex matrix, descending by σ;
/// vectors for zero singular values are zero.
pub fn left_singular_pairs(m: &DMatrix<Complex64>) -> Vec<(f64, DVector<Complex64>)> {
    let (u, sigma, _) = jacobi_svd(m);
    sigma
        .into_iter()
        .enumerate()
        .map(|(k, s)| (s, u.column(k).into_owned()))
        .collect()
}

/// Right singular pairs `(σ, v)` of a complex matrix, descending by σ; the
/// vectors form a full unitary basis.
pub fn right_singular_pairs(m: &DMatrix<Complex64>) -> Vec<(f64, DVector<Complex64>)> {
    let (_, sigma, v) = jacobi_svd(m);
    sigma
        .into_iter()
        .enumerate()
        .map(|(k, s)| (s, v.column(k).into_owned()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_complex(n: usize, rng: &mut ChaCha8Rng) -> DMatrix<Complex64> {
        DMatrix::from_fn(n, n, |_, _| {
            Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
        })
    }

    #[test]
    fn eigenvalues_of_triangular_similarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..20 {
            let n = 2 + trial % 6;
            let mut t = DMatrix::<Complex64>::zeros(n, n);
            let mut want: Vec<Complex64> = Vec::new();
            for i in 0..n {
                let lam = Complex64::new(rng.gen::<f64>() * 4.0 - 2.0, rng.gen::<f64>() * 4.0 - 2.0);
                t[(i, i)] = lam;
                want.push(lam);
                for j in (i + 1)..n {
                    t[(i, j)] = Complex64::new(rng.gen::<f64>() - 0.5, rng.gen::<f64>() - 0.5);
                }
            }
            let s = random_complex(n, &mut rng);
            let m = &s * &t * s.clone().try_inverse().unwrap();
            let mut got = eigenvalues(&m);
            for lam in &want {
                let (idx, d) = got
                    .iter()
                    .enumerate()
                    .map(|(i, g)| (i, (g - lam).norm()))
                    .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                    .unwrap();
                assert!(d < 1e-8, "eigenvalue error {d:.3e}");
                got.remove(idx);
            }
        }
    }

    #[test]
    fn eigenvalues_of_degenerate_matrices_terminate() {
        for n in [1usize, 2, 3, 4, 7] {
            let z = eigenvalues(&DMatrix::<Complex64>::zeros(n, n));
            assert_eq!(z.len(), n);
            assert!(z.iter().all(|e| e.norm() == 0.0));

            let e = eigenvalues(&DMatrix::<Complex64>::identity(n, n));
            assert!(e.iter().all(|lam| (lam - Complex64::new(1.0, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn deterministic_unitary_is_unitary() {
        for n in [2usize, 5, 9] {
            let u = deterministic_unitary(n);
            let residual = (u.adjoint() * &u - DMatrix::<Complex64>::identity(n, n)).norm();
            assert!(residual < 1e-12, "unitarity residual {residual:.3e}");
        }
    }

    fn factorization_defect(m: &DMatrix<Complex64>) -> f64 {
        let (u, sigma, v) = jacobi_svd(m);
        let mut recomposed = DMatrix::<Complex64>::zeros(m.nrows(), m.ncols());
        for (k, &s) in sigma.iter().enumerate() {
            if s > 0.0 {
                recomposed += u.column(k) * v.column(k).adjoint() * Complex64::new(s, 0.0);
            }
        }
        let scale = m.norm().max(1.0);
        let mut worst = (recomposed - m).norm() / scale;
        let eye = DMatrix::<Complex64>::identity(m.ncols(), m.ncols());
        worst = worst.max((v.adjoint() * &v - &eye).norm());
        for (k, &s) in sigma.iter().enumerate() {
            if s <= f64::EPSILON * m.ncols() as f64 * sigma[0].max(1.0) {
                continue;
            }
            for (l, &t) in sigma.iter().enumerate().skip(k) {
                if t <= f64::EPSILON * m.ncols() as f64 * sigma[0].max(1.0) {
                    continue;
                }
                let want = if k == l { 1.0 } else { 0.0 };
                let got = u.column(k).dotc(&u.column(l));
                worst = worst.max((got - Complex64::new(want, 0.0)).norm());
            }
        }
        worst
    }

    #[test]
    fn jacobi_svd_factors_random_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        for trial in 0..20 {
            let n = 2 + trial % 7;
            let defect = factorization_defect(&random_complex(n, &mut rng));
            assert!(defect < 1e-13, "factorization defect {defect:.3e}");
        }
    }

    #[test]
    fn jacobi_svd_factors_rank_deficient_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for trial in 0..20 {
            let n = 3 + trial % 5;
            let r = 1 + trial % (n - 1);
            let u = random_complex(n, &mut rng).columns(0, r).into_owned();
            let v = random_complex(n, &mut rng).columns(0, r).into_owned();
            let defect = factorization_defect(&(&u * v.adjoint()));
            assert!(defect < 1e-13, "factorization defect {defect:.3e}");
        }
    }

    #[test]
    fn jacobi_svd_factors_adjoint_images_with_clustered_values() {
        // Adjoint images of quaternion matrices carry every singular value with
        // even multiplicity; powers of core–nilpotent matrices stack further
        // coincidences on top.  These inputs defeated the previous backend.
        use crate::gen;
        let mut rng = gen::rng(75);
        let _ = gen::core_nilpotent(5, 2, 0.4, 6.0, &mut rng);
        let cn = gen::core_nilpotent(5, 2, 0.4, 6.0, &mut rng);
        let adj = cn.matrix.power(2).complex_adjoint().matrix().clone();
        let defect = factorization_defect(&adj);
        assert!(defect < 1e-12, "factorization defect {defect:.3e}");
    }

    #[test]
    fn jacobi_svd_handles_exact_ties_and_zeros() {
        let z = DMatrix::<Complex64>::zeros(4, 4);
        let (_, sigma, _) = jacobi_svd(&z);
        assert!(sigma.iter().all(|&s| s == 0.0));

        let tied = DMatrix::<Complex64>::identity(5, 5) * Complex64::new(3.0, 0.0);
        let defect = factorization_defect(&tied);
        assert!(defect < 1e-14, "factorization defect {defect:.3e}");
        let (_, sigma, _) = jacobi_svd(&tied);
        assert!(sigma.iter().all(|&s| (s - 3.0).abs() < 1e-14));
    }

    #[test]
    fn jacobi_svd_factors_rectangular_matrices() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for (rows, cols) in [(5usize, 3usize), (3, 5), (6, 2), (2, 6)] {
            let m = DMatrix::from_fn(rows, cols, |_, _| {
                Complex64::new(rng.gen::<f64>() * 2.0 - 1.0, rng.gen::<f64>() * 2.0 - 1.0)
            });
            let defect = factorization_defect(&m);
            assert!(defect < 1e-13, "factorization defect {defect:.3e}");
        }
    }

    #[test]
    fn singular_values_match_known_rank() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for trial in 0..20 {
            let n = 2 + trial % 6;
            let r = 1 + trial % n;
            let u = random_complex(n, &mut rng).columns(0, r).into_owned();
            let v = random_complex(n, &mut rng).columns(0, r).into_owned();
            let m = &u * v.adjoint();
            let s = singular_values(&m);
            assert_eq!(s.len(), n);
            if r < n {
                assert!(s[r - 1] > 1e-10 && s[r] < 1e-12 * s[0].max(1.0));
            }
        }
    }

    #[test]
    fn pinv_satisfies_moore_penrose() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for trial in 0..20 {
            let n = 2 + trial % 6;
            let r = 1 + trial % n;
            let u = random_complex(n, &mut rng).columns(0, r).into_owned();
            let v = random_complex(n, &mut rng).columns(0, r).into_owned();
            let m = &u * v.adjoint();
            let smax = singular_values(&m)[0];
            let p = pinv(&m, 2.0 * (2 * n) as f64 * f64::EPSILON * smax);
            let scale = m.norm().max(1.0);
            assert!((&m * &p * &m - &m).norm() / scale < 1e-11);
            assert!((&p * &m * &p - &p).norm() / p.norm().max(1.0) < 1e-11);
            let ap = &m * &p;
            let pa = &p * &m;
            assert!((ap.adjoint() - &ap).norm() < 1e-11 * scale.max(1.0));
            assert!((pa.adjoint() - &pa).norm() < 1e-11 * scale.max(1.0));
        }
    }

    #[test]
    fn singular_pairs_span_range_and_kernel() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let n = 5;
        let r = 2;
        let u = random_complex(n, &mut rng).columns(0, r).into_owned();
        let v = random_complex(n, &mut rng).columns(0, r).into_owned();
        let m = &u * v.adjoint();

        // Kernel vectors annihilate M; range vectors are reproduced by M·M⁺.
        let smax = singular_values(&m)[0];
        let cutoff = 2.0 * (2 * n) as f64 * f64::EPSILON * smax;
        let p = pinv(&m, cutoff);
        let proj = &m * &p;
        for (s, vec) in right_singular_pairs(&m) {
            if s <= cutoff {
                assert!((&m * &vec).norm() < 1e-10);
            }
        }
        for (s, vec) in left_singular_pairs(&m) {
            if s > cutoff {
                assert!((&proj * &vec - &vec).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn lu_solve_residual_is_small() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        for trial in 0..20 {
            let n = 2 + trial % 6;
            let m = random_complex(n, &mut rng);
            let b = random_complex(n, &mut rng);
            let x = lu_solve(&m, &b).unwrap();
            assert!((&m * &x - &b).norm() / b.norm() < 1e-10);
        }
    }
}
