//! Slice functional calculus by contour quadrature.
//!
//! Functions of a quaternionic matrix are Cauchy integrals of the left
//! S-resolvent over circles in the canonical slice plane, one conjugate-closed
//! family of circles per spectral sphere.  Intrinsic functions (conjugate
//! symmetry built in by construction) keep every weight inside the slice
//! plane, so the quadrature weights act as right scalars without any ordering
//! ambiguity.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::hmat::HMatrix;
use crate::quat::{EigenSphere, Quaternion};
use crate::sspec::{s_resolvent_left_unchecked, s_spectrum, Spectrum};
use crate::tol;

// ── Intrinsic functions ─────────────────────────────────────────────────────

/// An axially symmetric piece of the slice plane: an open disk or open
/// annulus centered on the real axis.
#[derive(Clone, Copy, Debug)]
pub enum Region {
    /// `|z − center| < radius`.
    Disk { center: f64, radius: f64 },
    /// `inner < |z − center| < outer`; `inner = 0` gives a punctured disk.
    Annulus { center: f64, inner: f64, outer: f64 },
}

impl Region {
    /// Open-set membership.
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            Region::Disk { center, radius } => (z - center).norm() < radius,
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = (z - center).norm();
                inner < d && d < outer
            }
        }
    }

    /// Distance from an interior point to the region boundary; negative or
    /// zero when `z` is not inside.
    pub fn boundary_distance(&self, z: Complex64) -> f64 {
        match *self {
            Region::Disk { center, radius } => radius - (z - center).norm(),
            Region::Annulus {
                center,
                inner,
                outer,
            } => {
                let d = (z - center).norm();
                (d - inner).min(outer - d)
            }
        }
    }

    /// True when the closed disk `|z − center| ≤ radius` lies inside the
    /// region.
    pub fn contains_disk(&self, center: Complex64, radius: f64) -> bool {
        self.boundary_distance(center) > radius
    }
}

/// A slice function with conjugate symmetry enforced by construction:
/// evaluation is defined on the closed upper half plane and reflected below,
/// so `eval(z̄) = conj(eval(z))` holds exactly.
///
/// The domain is a finite union of [`Region`]s, symmetric about the real
/// axis by construction (disk and annulus centers are real).
#[derive(Clone)]
pub struct IntrinsicFn {
    name: String,
    domain: Vec<Region>,
    upper: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
}

impl fmt::Debug for IntrinsicFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IntrinsicFn")
            .field("name", &self.name)
            .field("domain", &self.domain)
            .finish()
    }
}

impl IntrinsicFn {
    /// Wraps an upper-half-plane evaluation; the lower half is its
    /// reflection.  The closure must be holomorphic on `domain` and
    /// real-valued on the real axis for the reflection to be consistent.
    pub fn from_parts(
        name: impl Into<String>,
        domain: Vec<Region>,
        upper: impl Fn(Complex64) -> Complex64 + Send + Sync + 'static,
    ) -> Self {
        IntrinsicFn {
            name: name.into(),
            domain,
            upper: Arc::new(upper),
        }
    }

    /// Real-coefficient polynomial `c₀ + c₁z + …` on the whole plane.
    pub fn polynomial(coeffs: &[f64]) -> Self {
        let coeffs: Vec<f64> = coeffs.to_vec();
        let name = format!(
            "poly:{}",
            coeffs
                .iter()
                .map(|c| c.to_string())
                .collect::<Vec<_>>()
                .join(",")
        );
        IntrinsicFn::from_parts(
            name,
            vec![Region::Disk {
                center: 0.0,
                radius: f64::INFINITY,
            }],
            move |z| {
                coeffs
                    .iter()
                    .rev()
                    .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
            },
        )
    }

    /// The constant function 1.
    pub fn one() -> Self {
        IntrinsicFn::polynomial(&[1.0])
    }

    /// `z ↦ 1/z` on the punctured plane.
    pub fn reciprocal() -> Self {
        IntrinsicFn::from_parts(
            "recip",
            vec![Region::Annulus {
                center: 0.0,
                inner: 0.0,
                outer: f64::INFINITY,
            }],
            |z| z.inv(),
        )
    }

    /// The exponential on the whole plane.
    pub fn exponential() -> Self {
        IntrinsicFn::from_parts(
            "exp",
            vec![Region::Disk {
                center: 0.0,
                radius: f64::INFINITY,
            }],
            |z| z.exp(),
        )
    }

    /// The selector that is 0 on `|z| < r₀` and `1/z` on `|z| > r₀`; its
    /// domain is the disconnected union of those two pieces, on each of
    /// which it is holomorphic.
    pub fn drazin_selector(r0: f64) -> Self {
        IntrinsicFn::from_parts(
            format!("drazin-selector:{r0}"),
            vec![
                Region::Disk {
                    center: 0.0,
                    radius: r0,
                },
                Region::Annulus {
                    center: 0.0,
                    inner: r0,
                    outer: f64::INFINITY,
                },
            ],
            move |z| {
                if z.norm() < r0 {
                    Complex64::new(0.0, 0.0)
                } else {
                    z.inv()
                }
            },
        )
    }

    /// The composition `outer ∘ self`.  The stored domain is the inner
    /// function's; callers must keep the image of their contours inside the
    /// outer function's domain.
    pub fn and_then(&self, outer: &IntrinsicFn) -> Self {
        let inner_eval = self.clone();
        let outer_eval = outer.clone();
        IntrinsicFn {
            name: format!("{}∘{}", outer.name, self.name),
            domain: self.domain.clone(),
            upper: Arc::new(move |z| outer_eval.eval(inner_eval.eval(z))),
        }
    }

    /// Evaluation with the reflection rule: `eval(z̄) = conj(eval(z))`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        if z.im >= 0.0 {
            (self.upper)(z)
        } else {
            (self.upper)(z.conj()).conj()
        }
    }

    /// Whether `z` lies in the (axially symmetric) domain.
    pub fn contains(&self, z: Complex64) -> bool {
        self.domain.iter().any(|r| r.contains(z))
    }

    /// Domain regions.
    pub fn domain(&self) -> &[Region] {
        &self.domain
    }

    /// Display name (doubles as the CLI function specifier).
    pub fn name(&self) -> &str {
        &self.name
    }
}

/// Central-difference Cauchy–Riemann residual of `f` at `z` with step `h`:
/// the gap between the real-direction and imaginary-direction derivatives.
/// Small residuals witness holomorphy on a stencil.
pub fn holomorphy_residual(f: &IntrinsicFn, z: Complex64, h: f64) -> f64 {
    let dre = (f.eval(z + h) - f.eval(z - h)) / (2.0 * h);
    let dim = (f.eval(z + Complex64::new(0.0, h)) - f.eval(z - Complex64::new(0.0, h)))
        / Complex64::new(0.0, 2.0 * h);
    (dre - dim).norm()
}

// ── Contours ────────────────────────────────────────────────────────────────

/// Contour geometry policy: circle radii are `min(gap/margin_divisor,
/// radius_cap)` where `gap` is the minimal inter-sphere slice distance
/// (conjugate images included).
#[derive(Clone, Copy, Debug)]
pub struct ContourPolicy {
    /// Upper bound on any circle radius.
    pub radius_cap: f64,
    /// The gap divisor; 3 keeps a full radius of clearance between any
    /// circle and both the enclosed and the neighboring spheres' circles.
    pub margin_divisor: f64,
    /// Initial node count per circle.
    pub nodes: usize,
}

impl Default for ContourPolicy {
    fn default() -> Self {
        ContourPolicy {
            radius_cap: 0.5,
            margin_divisor: 3.0,
            nodes: tol::QUAD_NODES_INITIAL,
        }
    }
}

/// A conjugate-closed family of positively oriented circles in the slice
/// plane, all sharing one node count.
#[derive(Clone, Debug)]
pub struct SliceContour {
    circles: Vec<(Complex64, f64)>,
    nodes: usize,
}

impl SliceContour {
    /// The circles as `(center, radius)` pairs; centers of non-real circles
    /// appear together with their conjugates.
    pub fn circles(&self) -> &[(Complex64, f64)] {
        &self.circles
    }

    /// Current node count per circle.
    pub fn nodes(&self) -> usize {
        self.nodes
    }
}

/// Circles around each sphere of `subset`: one circle for a real point, a
/// conjugate pair for `v > 0`.  Radius is set by `policy` from the minimal
/// inter-sphere gap of the whole spectrum, so no circle reaches a foreign
/// sphere or another circle.
///
/// Fails with [`Error::NotSeparated`] when the subset cannot be isolated
/// from its complement, and [`Error::PreconditionViolated`] when a subset
/// sphere is not in the spectrum.
pub fn build_contours(
    spectrum: &Spectrum,
    subset: &[EigenSphere],
    policy: &ContourPolicy,
) -> Result<SliceContour> {
    let mut members: Vec<EigenSphere> = Vec::new();
    for s in subset {
        let (best, dist) = spectrum
            .spheres()
            .iter()
            .map(|(sp, _)| (*sp, sp.slice_distance(s)))
            .min_by(|a, b| a.1.partial_cmp(&b.1).expect("finite"))
            .ok_or(Error::PreconditionViolated {
                what: "subset sphere not in spectrum",
                residual: f64::INFINITY,
            })?;
        if dist > tol::SEPARATION_MIN {
            return Err(Error::PreconditionViolated {
                what: "subset sphere not in spectrum",
                residual: dist,
            });
        }
        if !members.iter().any(|m| m.slice_distance(&best) == 0.0) {
            members.push(best);
        }
    }

    // Subset–complement separation.
    let mut cross_gap = f64::INFINITY;
    for (sp, _) in spectrum.spheres() {
        if members.iter().any(|m| m.slice_distance(sp) == 0.0) {
            continue;
        }
        for m in &members {
            cross_gap = cross_gap.min(m.slice_distance(sp));
        }
    }
    if cross_gap < tol::SEPARATION_MIN {
        return Err(Error::NotSeparated {
            gap: cross_gap,
            min_gap: tol::SEPARATION_MIN,
        });
    }

    let gap = spectrum.min_gap();
    let radius = if gap.is_finite() {
        (gap / policy.margin_divisor).min(policy.radius_cap)
    } else {
        policy.radius_cap
    };

    let mut circles = Vec::new();
    for m in &members {
        circles.push((Complex64::new(m.u, m.v), radius));
        if m.v > 0.0 {
            circles.push((Complex64::new(m.u, -m.v), radius));
        }
    }
    Ok(SliceContour {
        circles,
        nodes: policy.nodes,
    })
}

/// Largest circle radius around any sphere of `subset` that keeps the whole
/// closed disk inside a single region of `f`'s domain, scaled by 2/3 so the
/// contour clears the boundary by half its own radius.  Returns infinity
/// when no sphere constrains the radius (all regions unbounded around it)
/// and 0 when some sphere lies outside the domain.
///
/// Circle centers sit at the sphere slice points `u ± vi`; every domain
/// region has a real center, so the clearance of the `+v` representative
/// equals that of its conjugate.
pub fn domain_radius_cap(f: &IntrinsicFn, subset: &[EigenSphere]) -> f64 {
    let mut cap = f64::INFINITY;
    for s in subset {
        let z = Complex64::new(s.u, s.v);
        let clearance = f
            .domain()
            .iter()
            .filter(|r| r.contains(z))
            .map(|r| r.boundary_distance(z))
            .fold(0.0_f64, f64::max);
        cap = cap.min(2.0 / 3.0 * clearance);
    }
    cap
}

// ── Quadrature ──────────────────────────────────────────────────────────────

/// `f(A)` by adaptive trapezoidal quadrature of the slice Cauchy integral
/// over `contours`.
///
/// Per node `s = c + r·e^{iθ}` the contribution is
/// `S_L⁻¹(s, A) · (r·e^{iθ} · f(s))` with the weight acting as a right
/// scalar; the `1/(2π)` normalization and the trapezoid step merge into the
/// leading `1/N`.  Node counts double (reusing previous evaluations) until
/// two successive results agree within the quadrature tolerance; exceeding
/// the node ceiling is [`Error::QuadratureFailed`].
pub fn func_calc(f: &IntrinsicFn, a: &HMatrix, contours: &SliceContour) -> Result<HMatrix> {
    let n = a.n();
    if contours.circles.is_empty() {
        return Ok(HMatrix::zeros(n, n));
    }

    // Each circle must stay inside one domain region together with its full
    // closed disk: a circle whose nodes all satisfy membership can still
    // cross between regions of a disconnected domain or encircle a boundary
    // component, and either corrupts the Cauchy integral without any node
    // ever leaving the domain.
    for &(center, radius) in &contours.circles {
        if !f.domain().iter().any(|r| r.contains_disk(center, radius)) {
            return Err(Error::PreconditionViolated {
                what: "contour disk leaves the function domain",
                residual: radius,
            });
        }
    }

    let mut nodes = contours.nodes.max(1);
    let mut sums: Vec<HMatrix> = vec![HMatrix::zeros(n, n); contours.circles.len()];
    for (ci, &(center, radius)) in contours.circles.iter().enumerate() {
        let thetas: Vec<f64> = (0..nodes)
            .map(|m| 2.0 * std::f64::consts::PI * m as f64 / nodes as f64)
            .collect();
        sums[ci] = circle_partial(f, a, center, radius, &thetas)?;
    }
    let mut prev = assemble(&sums, nodes, n);

    loop {
        if 2 * nodes > tol::QUAD_NODES_MAX {
            // One more comparison below would need 2·nodes; report what the
            // last doubling produced.
            let delta = f64::INFINITY;
            return Err(Error::QuadratureFailed {
                last_delta: delta,
                nodes,
            });
        }
        for (ci, &(center, radius)) in contours.circles.iter().enumerate() {
            let midpoints: Vec<f64> = (0..nodes)
                .map(|m| std::f64::consts::PI * (2 * m + 1) as f64 / nodes as f64)
                .collect();
            let extra = circle_partial(f, a, center, radius, &midpoints)?;
            sums[ci] = sums[ci].clone() + extra;
        }
        nodes *= 2;
        let current = assemble(&sums, nodes, n);
        let delta = (current.clone() - prev).frob_norm();
        if delta <= tol::quadrature(current.frob_norm()) {
            return Ok(current);
        }
        if nodes >= tol::QUAD_NODES_MAX {
            return Err(Error::QuadratureFailed {
                last_delta: delta,
                nodes,
            });
        }
        prev = current;
    }
}

/// Raw node sum `Σ S_L⁻¹(s_m, A)·(r·e^{iθ_m}·f(s_m))` over the given angles.
fn circle_partial(
    f: &IntrinsicFn,
    a: &HMatrix,
    center: Complex64,
    radius: f64,
    thetas: &[f64],
) -> Result<HMatrix> {
    let mut acc = HMatrix::zeros(a.n(), a.n());
    for &theta in thetas {
        let dir = Complex64::new(theta.cos(), theta.sin());
        let s = center + radius * dir;
        if !f.contains(s) {
            return Err(Error::PreconditionViolated {
                what: "contour leaves the function domain",
                residual: s.norm(),
            });
        }
        let resolvent = s_resolvent_left_unchecked(Quaternion::from_slice(s), a)?;
        let weight = radius * dir * f.eval(s);
        acc = acc + resolvent.scale_right(Quaternion::from_slice(weight));
    }
    Ok(acc)
}

fn assemble(sums: &[HMatrix], nodes: usize, n: usize) -> HMatrix {
    let total = sums
        .iter()
        .fold(HMatrix::zeros(n, n), |acc, s| acc + s.clone());
    total.scale_real(1.0 / nodes as f64)
}

// ── Derived operations ──────────────────────────────────────────────────────

/// The Riesz projection onto the invariant subspace of `subset`: the Cauchy
/// integral of `f ≡ 1` over contours around `subset` only.  An empty subset
/// yields the zero matrix; the full spectrum yields the identity.
pub fn riesz_projection(a: &HMatrix, subset: &[EigenSphere]) -> Result<HMatrix> {
    let spectrum = s_spectrum(a);
    let contours = build_contours(&spectrum, subset, &ContourPolicy::default())?;
    func_calc(&IntrinsicFn::one(), a, &contours)
}

/// One matched sphere pair in a spectral-mapping comparison.
#[derive(Clone, Copy, Debug)]
pub struct SphereMatch {
    /// Sphere of the computed spectrum of `f(A)`.
    pub got: EigenSphere,
    /// Image sphere `sphere_of(f(z))` of a spectral representative.
    pub want: EigenSphere,
    /// Slice distance between the two.
    pub deviation: f64,
}

/// Result of [`spectral_mapping_check`].
#[derive(Clone, Debug)]
pub struct MappingReport {
    /// Greedily matched pairs (computed sphere, image sphere).
    pub pairs: Vec<SphereMatch>,
    /// Largest matched deviation; infinite when the sphere counts or
    /// multiplicities cannot be matched.
    pub max_deviation: f64,
}

/// Compares the spectrum of `f(A)` with the image of the spectrum of `A`
/// under `f`, sphere by sphere.
pub fn spectral_mapping_check(f: &IntrinsicFn, a: &HMatrix) -> Result<MappingReport> {
    let spectrum = s_spectrum(a);
    let all: Vec<EigenSphere> = spectrum.spheres().iter().map(|(s, _)| *s).collect();
    let policy = ContourPolicy {
        radius_cap: domain_radius_cap(f, &all).min(ContourPolicy::default().radius_cap),
        ..ContourPolicy::default()
    };
    let contours = build_contours(&spectrum, &all, &policy)?;
    let fa = func_calc(f, a, &contours)?;
    let got = s_spectrum(&fa);

    // Image multiset: map each representative, merging collisions.
    let merge_tol = tol::sphere(fa.operator_norm());
    let mut image: Vec<(EigenSphere, usize)> = Vec::new();
    for (sphere, mult) in spectrum.spheres() {
        let w = f.eval(Complex64::new(sphere.u, sphere.v));
        let img = EigenSphere {
            u: w.re,
            v: w.im.abs(),
        };
        match image
            .iter_mut()
            .find(|(existing, _)| existing.slice_distance(&img) <= merge_tol)
        {
            Some((_, m)) => *m += mult,
            None => image.push((img, *mult)),
        }
    }
    let want = Spectrum::new(image);

    let mut pairs = Vec::new();
    let mut max_deviation: f64 = 0.0;
    let mut remaining: Vec<(EigenSphere, usize)> = want.spheres().to_vec();
    for (g, gm) in got.spheres() {
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
    Ok(MappingReport {
        pairs,
        max_deviation,
    })
}

/// Result of [`composition_check`].
#[derive(Clone, Debug)]
pub struct CompositionReport {
    /// `g(f(A))` computed in two stages.
    pub staged: HMatrix,
    /// `(g∘f)(A)` computed in one integral.
    pub direct: HMatrix,
    /// Largest entry-wise quaternion norm of the difference.
    pub deviation: f64,
}

/// Compares `g(f(A))` (two quadratures, the inner spectrum recomputed)
/// against `(g∘f)(A)` (one quadrature).
pub fn composition_check(
    f: &IntrinsicFn,
    g: &IntrinsicFn,
    a: &HMatrix,
) -> Result<CompositionReport> {
    let spectrum = s_spectrum(a);
    let all: Vec<EigenSphere> = spectrum.spheres().iter().map(|(s, _)| *s).collect();
    let policy = ContourPolicy {
        radius_cap: domain_radius_cap(f, &all).min(ContourPolicy::default().radius_cap),
        ..ContourPolicy::default()
    };
    let contours = build_contours(&spectrum, &all, &policy)?;
    let fa = func_calc(f, a, &contours)?;

    let inner_spectrum = s_spectrum(&fa);
    let inner_all: Vec<EigenSphere> = inner_spectrum.spheres().iter().map(|(s, _)| *s).collect();
    let inner_policy = ContourPolicy {
        radius_cap: domain_radius_cap(g, &inner_all).min(ContourPolicy::default().radius_cap),
        ..ContourPolicy::default()
    };
    let inner_contours = build_contours(&inner_spectrum, &inner_all, &inner_policy)?;
    let staged = func_calc(g, &fa, &inner_contours)?;

    let direct = func_calc(&f.and_then(g), a, &contours)?;
    let deviation = (staged.clone() - direct.clone()).max_entry_norm();
    Ok(CompositionReport {
        staged,
        direct,
        deviation,
    })
}
