//! The S-spectrum, left S-resolvent, spectral radius, and the
//! pseudo-resolvent series.
//!
//! A quaternion `q` is S-spectral for `A` when the pencil
//! `Q_q(A) = A² − 2·Re(q)·A + |q|²·I` fails to be invertible.  Because the
//! pencil only sees `(Re q, |q|)`, the spectrum is a union of conjugacy
//! spheres; it is computed from the eigenvalues of the complex adjoint via
//! the factorization `χ(Q_q(A)) = (χ(A) − z·I)(χ(A) − z̄·I)` with
//! `z = Re(q) + |Im(q)|·i`.

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::kernel;
use crate::quat::{EigenSphere, Quaternion};
use crate::tol;

// ── Spectrum ────────────────────────────────────────────────────────────────

/// The S-spectrum as a deduplicated list of conjugacy spheres with
/// multiplicities, sorted by `(u, v)`.  Multiplicities sum to `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    spheres: Vec<(EigenSphere, usize)>,
}

impl Spectrum {
    /// Builds from raw sphere/multiplicity pairs (sorted on construction).
    pub fn new(mut spheres: Vec<(EigenSphere, usize)>) -> Self {
        spheres.sort_by(|a, b| {
            (a.0.u, a.0.v)
                .partial_cmp(&(b.0.u, b.0.v))
                .expect("finite sphere coordinates")
        });
        Spectrum { spheres }
    }

    /// The sphere/multiplicity pairs, ascending by `(u, v)`.
    pub fn spheres(&self) -> &[(EigenSphere, usize)] {
        &self.spheres
    }

    /// Number of distinct spheres.
    pub fn len(&self) -> usize {
        self.spheres.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spheres.is_empty()
    }

    /// Sum of multiplicities (equals the matrix dimension).
    pub fn total_multiplicity(&self) -> usize {
        self.spheres.iter().map(|(_, m)| m).sum()
    }

    /// Largest distance of a sphere from the origin — the spectral radius.
    pub fn max_radius(&self) -> f64 {
        self.spheres
            .iter()
            .map(|(s, _)| s.radius_from_origin())
            .fold(0.0, f64::max)
    }

    /// True when some sphere matches `(u, v)` within `tol`.
    pub fn contains_sphere(&self, target: &EigenSphere, tol: f64) -> bool {
        self.spheres.iter().any(|(s, _)| s.approx_eq(target, tol))
    }

    /// True when the zero sphere is spectral within `tol`.
    pub fn contains_zero(&self, tol: f64) -> bool {
        self.contains_sphere(&EigenSphere { u: 0.0, v: 0.0 }, tol)
    }

    /// Minimal slice-plane distance between distinct spheres, conjugate
    /// representatives included; `f64::INFINITY` for fewer than two spheres
    /// (a lone non-real sphere still reports the gap `2v` to its own
    /// conjugate circle).
    pub fn min_gap(&self) -> f64 {
        let mut gap = f64::INFINITY;
        for (idx, (a, _)) in self.spheres.iter().enumerate() {
            if a.v > 0.0 {
                gap = gap.min(2.0 * a.v);
            }
            for (b, _) in &self.spheres[idx + 1..] {
                let za = a.slice_rep();
                let zb = b.slice_rep();
                gap = gap
                    .min((za - zb).norm())
                    .min((za - zb.conj()).norm());
            }
        }
        gap
    }

    /// Greedy sphere-by-sphere matching against another spectrum: returns the
    /// largest `max(|Δu|, |Δv|)` over matched pairs, or `f64::INFINITY` when
    /// the sphere counts or multiplicities disagree.
    pub fn match_distance(&self, other: &Spectrum) -> f64 {
        if self.spheres.len() != other.spheres.len() {
            return f64::INFINITY;
        }
        let mut worst = 0.0f64;
        let mut remaining: Vec<(EigenSphere, usize)> = other.spheres.clone();
        for (s, m) in &self.spheres {
            let best = remaining
                .iter()
                .enumerate()
                .map(|(i, (t, _))| {
                    (i, (s.u - t.u).abs().max((s.v - t.v).abs()))
                })
                .min_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
            match best {
                Some((i, d)) => {
                    if remaining[i].1 != *m {
                        return f64::INFINITY;
                    }
                    worst = worst.max(d);
                    remaining.remove(i);
                }
                None => return f64::INFINITY,
            }
        }
        worst
    }
}

// ── Operations ──────────────────────────────────────────────────────────────

/// The pencil `Q_q(A) = A² − 2·Re(q)·A + |q|²·I`.
///
/// Only `(Re q, |Im q|)` enter, so conjugated arguments yield identical
/// results.
pub fn q_pencil(a: &HMatrix, q: Quaternion) -> HMatrix {
    let n = a.n();
    let u = q.re();
    let v = q.im_norm();
    let norm_sqr = u * u + v * v;
    let a2 = a.matmul(a).expect("square");
    a2 - a.scale_real(2.0 * u) + HMatrix::identity(n).scale_real(norm_sqr)
}

/// The S-spectrum of `A`, from the eigenvalues of the complex adjoint.
///
/// Eigenvalues fold onto upper-half-plane representatives `(Re, |Im|)` and
/// are clustered with a defect-aware resolution: a group of `m` folded
/// eigenvalues counts as one sphere when its single-linkage diameter stays
/// within [`tol::defect_cluster`]`(‖A‖, m)`, since an m-point cluster may
/// stem from a defective block whose computed eigenvalues scatter far beyond
/// any flat tolerance.  A cluster whose mean imaginary part is below its own
/// resolution snaps to a real point.  Each sphere's multiplicity is half its
/// cluster size (conjugate partners for `v > 0`, duplicated pairs for real
/// points), so multiplicities sum to `n`.
pub fn s_spectrum(a: &HMatrix) -> Spectrum {
    let n = a.n();
    if n == 0 {
        return Spectrum::new(Vec::new());
    }
    let op_norm = a.operator_norm();
    let tol = tol::sphere(op_norm);
    let eigs = kernel::eigenvalues(&a.complex_adjoint().matrix());

    let mut folded: Vec<(f64, f64)> = eigs.iter().map(|z| (z.re, z.im.abs())).collect();
    folded.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let mut clusters = cluster_folded(&folded, op_norm);

    // Exact arithmetic pairs every eigenvalue (conjugates for v > 0, matched
    // pairs on the axis), so an odd cluster is always a fragment of a split
    // cloud; rejoin odd clusters nearest-first.
    loop {
        let odd: Vec<usize> = (0..clusters.len())
            .filter(|&i| clusters[i].2 % 2 == 1)
            .collect();
        if odd.is_empty() {
            break;
        }
        let (mut bi, mut bj, mut best) = (0, 0, f64::INFINITY);
        for (a_pos, &i) in odd.iter().enumerate() {
            for &j in &odd[a_pos + 1..] {
                let d = (clusters[i].0 - clusters[j].0)
                    .abs()
                    .max((clusters[i].1 - clusters[j].1).abs());
                if d < best {
                    (bi, bj, best) = (i, j, d);
                }
            }
        }
        let (u2, v2, c2) = clusters.remove(bj);
        let (u1, v1, c1) = clusters[bi];
        let total = (c1 + c2) as f64;
        clusters[bi] = (
            (u1 * c1 as f64 + u2 * c2 as f64) / total,
            (v1 * c1 as f64 + v2 * c2 as f64) / total,
            c1 + c2,
        );
    }

    let spheres = clusters
        .into_iter()
        .map(|(u, v, count)| {
            let snap = tol.max(tol::defect_cluster(op_norm, count));
            let v = if v <= snap { 0.0 } else { v };
            (EigenSphere { u, v }, count / 2)
        })
        .collect();
    let spectrum = Spectrum::new(spheres);
    debug_assert_eq!(spectrum.total_multiplicity(), n);
    spectrum
}

/// Single-linkage dendrogram over folded eigenvalue points in the slice
/// metric `max(|Δu|, |Δv|)`, cut top-down: a subtree of `m` points stays one
/// cluster when its formation height is within `defect_cluster(‖A‖, m)`.
/// Returns `(mean_u, mean_v, count)` per cluster.
fn cluster_folded(points: &[(f64, f64)], op_norm: f64) -> Vec<(f64, f64, usize)> {
    let k = points.len();
    // Kruskal over all pairs: union-find with a binary merge tree on top.
    let mut edges: Vec<(f64, usize, usize)> = Vec::with_capacity(k * (k - 1) / 2);
    for i in 0..k {
        for j in (i + 1)..k {
            let d = (points[i].0 - points[j].0)
                .abs()
                .max((points[i].1 - points[j].1).abs());
            edges.push((d, i, j));
        }
    }
    edges.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));

    // Nodes 0..k are leaves; merges append (left, right, height).
    let mut parent: Vec<usize> = (0..2 * k).collect();
    let mut node_of: Vec<usize> = (0..k).collect();
    let mut tree: Vec<(usize, usize, f64)> = Vec::with_capacity(k.saturating_sub(1));
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for (d, i, j) in edges {
        let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
        if ri == rj {
            continue;
        }
        let merged = k + tree.len();
        tree.push((node_of[ri], node_of[rj], d));
        parent[ri] = merged;
        parent[rj] = merged;
        parent[merged] = merged;
        node_of.push(merged);
        node_of[ri] = merged;
        node_of[rj] = merged;
        if tree.len() == k - 1 {
            break;
        }
    }

    if k == 1 {
        return vec![(points[0].0, points[0].1, 1)];
    }

    // Recursive cut from the root; an explicit stack keeps it iterative.
    let mut clusters: Vec<(f64, f64, usize)> = Vec::new();
    let mut stack = vec![k + tree.len() - 1];
    while let Some(node) = stack.pop() {
        let (size, height) = subtree_stats(node, k, &tree);
        if node < k || height <= tol::sphere(op_norm).max(tol::defect_cluster(op_norm, size)) {
            let mut acc = (0.0, 0.0, 0usize);
            collect_leaves(node, k, &tree, points, &mut acc);
            clusters.push((acc.0 / acc.2 as f64, acc.1 / acc.2 as f64, acc.2));
        } else {
            let (l, r, _) = tree[node - k];
            stack.push(l);
            stack.push(r);
        }
    }
    clusters
}

fn subtree_stats(node: usize, k: usize, tree: &[(usize, usize, f64)]) -> (usize, f64) {
    if node < k {
        return (1, 0.0);
    }
    let (l, r, h) = tree[node - k];
    let (sl, _) = subtree_stats(l, k, tree);
    let (sr, _) = subtree_stats(r, k, tree);
    (sl + sr, h)
}

fn collect_leaves(
    node: usize,
    k: usize,
    tree: &[(usize, usize, f64)],
    points: &[(f64, f64)],
    acc: &mut (f64, f64, usize),
) {
    if node < k {
        acc.0 += points[node].0;
        acc.1 += points[node].1;
        acc.2 += 1;
        return;
    }
    let (l, r, _) = tree[node - k];
    collect_leaves(l, k, tree, points, acc);
    collect_leaves(r, k, tree, points, acc);
}

/// The left S-resolvent `S_L⁻¹(s, A) = −Q_s(A)⁻¹·(A − s̄·I)`.
///
/// Fails with [`Error::OnSpectrum`] when the sphere of `s` is spectral.
pub fn s_resolvent_left(s: Quaternion, a: &HMatrix) -> Result<HMatrix> {
    let spectrum = s_spectrum(a);
    let tol = tol::sphere(a.operator_norm());
    let sphere = s.sphere();
    if spectrum.contains_sphere(&sphere, tol) {
        return Err(Error::OnSpectrum {
            u: sphere.u,
            v: sphere.v,
        });
    }
    s_resolvent_left_unchecked(s, a)
}

/// [`s_resolvent_left`] without the spectrum-membership screen, for callers
/// (contour quadrature) that already know `s` keeps a margin from the
/// spectrum.  A singular pencil still surfaces as [`Error::OnSpectrum`].
pub(crate) fn s_resolvent_left_unchecked(s: Quaternion, a: &HMatrix) -> Result<HMatrix> {
    let n = a.n();
    let sphere = s.sphere();
    let pencil_inv = q_pencil(a, s).inverse().map_err(|e| match e {
        // A singular pencil means s is spectral after all (borderline case).
        Error::Singular { .. } => Error::OnSpectrum {
            u: sphere.u,
            v: sphere.v,
        },
        other => other,
    })?;
    let shifted = a.clone() - HMatrix::identity(n).scale_left(s.conj());
    Ok((-pencil_inv).matmul(&shifted).expect("square"))
}

/// One step of the Gelfand refinement: exponents and norm-based estimates.
#[derive(Clone, Debug)]
pub struct GelfandEstimate {
    /// `(k, ‖Aᵏ‖^{1/k})` for `k = 1, 2, 4, …` up to the largest power of two
    /// `≤ n_max`; nonincreasing up to round-off.
    pub estimates: Vec<(usize, f64)>,
    /// The final (tightest) estimate.
    pub value: f64,
}

/// Spectral radius by the Gelfand formula `r_S(A) = lim ‖Aⁿ‖^{1/n}`,
/// evaluated at repeated-squaring exponents with norm renormalization so
/// large powers never overflow.
pub fn spectral_radius_gelfand(a: &HMatrix, n_max: usize) -> GelfandEstimate {
    assert!(n_max >= 1, "need at least one power");
    let mut estimates = Vec::new();

    let norm1 = a.operator_norm();
    estimates.push((1usize, norm1));
    if norm1 == 0.0 {
        return GelfandEstimate {
            estimates,
            value: 0.0,
        };
    }

    // Track A^k = exp(log_scale)·B with ‖B‖ = 1.  A square whose norm falls
    // to the multiplication round-off of unit-norm factors is a power that
    // vanished exactly; renormalizing would re-amplify that noise and pin
    // every later estimate at its k-th root, so stop at 0 instead.  On ℍⁿ
    // quasinilpotent operators are nilpotent, so the limit is exactly 0.
    let noise_floor = tol::rank(2 * a.n(), 1.0);
    let mut b = a.scale_real(1.0 / norm1);
    let mut log_scale = norm1.ln();
    let mut k = 1usize;
    while 2 * k <= n_max {
        let b2 = b.matmul(&b).expect("square");
        let norm = b2.operator_norm();
        k *= 2;
        if norm <= noise_floor {
            estimates.push((k, 0.0));
            return GelfandEstimate {
                estimates,
                value: 0.0,
            };
        }
        log_scale = 2.0 * log_scale + norm.ln();
        b = b2.scale_real(1.0 / norm);
        estimates.push((k, (log_scale / k as f64).exp()));
    }
    let value = estimates.last().expect("nonempty").1;
    GelfandEstimate { estimates, value }
}

/// Partial sums of the pseudo-resolvent series
/// `Q_q(A)⁻¹ = Σₙ Aⁿ·aₙ`, `aₙ = Σ_{k=0}^{n} q̄^{−k−1}·q^{−n+k−1}`,
/// truncated once a term's norm drops to `tol` times the partial sum's.
///
/// Requires `|q| > r_S(A)`; summation order is fixed (ascending `n`, inner
/// `k` ascending) so results are reproducible.
pub fn pseudo_resolvent_series(q: Quaternion, a: &HMatrix, tol: f64) -> Result<HMatrix> {
    let radius = s_spectrum(a).max_radius();
    let norm_q = q.norm();
    if norm_q <= radius {
        return Err(Error::OutsideConvergence { norm_q, radius });
    }
    let n = a.n();
    let q_inv = q.inv().expect("|q| > r_S ≥ 0");
    let qc_inv = q.conj().inv().expect("|q| > r_S ≥ 0");

    // Power tables grow with the series; term n needs exponents up to n+1.
    let mut q_pows: Vec<Quaternion> = vec![Quaternion::ONE, q_inv];
    let mut qc_pows: Vec<Quaternion> = vec![Quaternion::ONE, qc_inv];

    let mut sum = HMatrix::zeros(n, n);
    let mut a_pow = HMatrix::identity(n);
    // The ratio r_S/|q| < 1 bounds the tail; 4·n·log factor is a generous
    // iteration ceiling for the tolerances in use.
    let max_terms = 10_000usize;
    for term_idx in 0..max_terms {
        while q_pows.len() < term_idx + 2 {
            let last = *q_pows.last().expect("seeded");
            q_pows.push(last * q_inv);
            let lastc = *qc_pows.last().expect("seeded");
            qc_pows.push(lastc * qc_inv);
        }
        let mut coeff = Quaternion::ZERO;
        for k in 0..=term_idx {
            coeff = coeff + qc_pows[k + 1] * q_pows[term_idx - k + 1];
        }
        let term = a_pow.scale_right(coeff);
        sum = sum + term.clone();
        let term_norm = term.frob_norm();
        if term_norm <= tol * sum.frob_norm() {
            return Ok(sum);
        }
        a_pow = a_pow.matmul(a).expect("square");
    }
    Ok(sum)
}

/// True when the S-spectrum is exactly the zero sphere; equivalent to
/// nilpotency in finite dimension.
pub fn is_quasinilpotent(a: &HMatrix) -> bool {
    let spectrum = s_spectrum(a);
    let tol = tol::sphere(a.operator_norm());
    spectrum.max_radius() <= tol
}

// ── Tests ───────────────────────────────────────────────────────────────────
