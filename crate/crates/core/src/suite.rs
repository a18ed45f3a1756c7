//! Batch invariant suite: named property checks over generated corpora,
//! with per-check worst-case residuals.
//!
//! Each check draws its corpus deterministically from the configured seed,
//! evaluates one family of identities, and reports the worst residual seen
//! together with the bound it was held to.  A check passes when every
//! observation stays within its bound; operations that unexpectedly fail
//! count as infinite residuals.  Identity residuals are scaled by the norm
//! degree of the identity, matching the conventions of the modules they
//! exercise.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::drazin;
use crate::gen;
use crate::geninv;
use crate::hmat::HMatrix;
use crate::quat::{EigenSphere, Quaternion};
use crate::scalc::{self, ContourPolicy, IntrinsicFn};
use crate::sspec;

// ── Check identifiers ───────────────────────────────────────────────────────

/// One named property check; the order of [`Check::ALL`] is the report order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Check {
    /// Three Drazin routes agree and satisfy the defining equations.
    DrazinRoutes,
    /// Index = ascent = descent = nilpotency of the core residue, and the
    /// range/kernel splitting of `A^k` is a direct decomposition.
    IndexCoherence,
    /// Functional calculus sends 1 ↦ I and id ↦ A, and respects products
    /// and compositions.
    CalculusAxioms,
    /// Sphere sets of `f(A)` match the image of the sphere set of `A`.
    SpectralMapping,
    /// Spectral projections are idempotent, commute, and sum to I.
    RieszProjections,
    /// Spheres sit inside the norm ball; the norm-power radius estimate
    /// converges to the largest sphere radius.
    SpectrumBounds,
    /// The pseudo-resolvent series sums to the direct pencil inverse.
    ResolventSeries,
    /// Generalized-inverse laws for the Moore–Penrose and parametrized
    /// inverses.
    GenInverseLaws,
    /// Group inverse existence, uniqueness against the Drazin route, and
    /// the reciprocal spectrum law.
    GroupInverse,
    /// Power/double/triple/projector identities, the commuting-product
    /// identity, and the left-multiplication operator check.
    InverseIdentities,
    /// The fixed 2×2 self-adjoint operator: real sphere set, a left
    /// eigenvalue witness outside it.
    SelfAdjointWitness,
}

impl Check {
    pub const ALL: [Check; 11] = [
        Check::DrazinRoutes,
        Check::IndexCoherence,
        Check::CalculusAxioms,
        Check::SpectralMapping,
        Check::RieszProjections,
        Check::SpectrumBounds,
        Check::ResolventSeries,
        Check::GenInverseLaws,
        Check::GroupInverse,
        Check::InverseIdentities,
        Check::SelfAdjointWitness,
    ];

    /// Stable kebab-case name used on the command line and in reports.
    pub fn name(self) -> &'static str {
        match self {
            Check::DrazinRoutes => "drazin-routes",
            Check::IndexCoherence => "index-coherence",
            Check::CalculusAxioms => "calculus-axioms",
            Check::SpectralMapping => "spectral-mapping",
            Check::RieszProjections => "riesz-projections",
            Check::SpectrumBounds => "spectrum-bounds",
            Check::ResolventSeries => "resolvent-series",
            Check::GenInverseLaws => "gen-inverse-laws",
            Check::GroupInverse => "group-inverse",
            Check::InverseIdentities => "inverse-identities",
            Check::SelfAdjointWitness => "self-adjoint-witness",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<&str> = Check::ALL.iter().map(|c| c.name()).collect();
                format!("unknown check \"{s}\"; expected one of: {}", names.join(", "))
            })
    }
}

// ── Configuration and report ────────────────────────────────────────────────

/// What to run and how hard to push it.
#[derive(Clone, Debug)]
pub struct SuiteConfig {
    /// Checks to run, in order; empty runs nothing and passes.
    pub checks: Vec<Check>,
    /// Matrices drawn per check.
    pub count: usize,
    /// Largest matrix dimension in the corpus.
    pub max_n: usize,
    /// Base seed; every draw derives deterministically from it.
    pub seed: u64,
    /// When set, replaces every per-check bound.
    pub tolerance_override: Option<f64>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            checks: Check::ALL.to_vec(),
            count: 100,
            max_n: 6,
            seed: 42,
            tolerance_override: None,
        }
    }
}

/// Result of one check: pass/fail with the worst observation.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub check: Check,
    pub passed: bool,
    /// Corpus items processed.
    pub samples: usize,
    /// The residual that came closest to (or past) its bound.
    pub worst_residual: f64,
    /// The bound that residual was held to.
    pub worst_bound: f64,
    /// Where the worst residual occurred.
    pub detail: String,
}

/// Outcomes for every requested check, in request order.
#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub outcomes: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }
}

/// Runs every configured check.
pub fn run_suite(config: &SuiteConfig) -> SuiteReport {
    SuiteReport {
        outcomes: config.checks.iter().map(|&c| run_check(c, config)).collect(),
    }
}

/// Runs a single check under the given configuration.
pub fn run_check(check: Check, config: &SuiteConfig) -> CheckOutcome {
    let mut t = Tracker::new();
    match check {
        Check::DrazinRoutes => check_drazin_routes(config, &mut t),
        Check::IndexCoherence => check_index_coherence(config, &mut t),
        Check::CalculusAxioms => check_calculus_axioms(config, &mut t),
        Check::SpectralMapping => check_spectral_mapping(config, &mut t),
        Check::RieszProjections => check_riesz_projections(config, &mut t),
        Check::SpectrumBounds => check_spectrum_bounds(config, &mut t),
        Check::ResolventSeries => check_resolvent_series(config, &mut t),
        Check::GenInverseLaws => check_gen_inverse_laws(config, &mut t),
        Check::GroupInverse => check_group_inverse(config, &mut t),
        Check::InverseIdentities => check_inverse_identities(config, &mut t),
        Check::SelfAdjointWitness => check_self_adjoint_witness(config, &mut t),
    }
    t.outcome(check)
}

// ── Observation bookkeeping ─────────────────────────────────────────────────

struct Tracker {
    samples: usize,
    worst_ratio: f64,
    worst_residual: f64,
    worst_bound: f64,
    detail: String,
}

impl Tracker {
    fn new() -> Self {
        Tracker {
            samples: 0,
            worst_ratio: f64::NEG_INFINITY,
            worst_residual: 0.0,
            worst_bound: f64::INFINITY,
            detail: String::from("no observations"),
        }
    }

    fn observe(&mut self, residual: f64, bound: f64, detail: impl FnOnce() -> String) {
        let ratio = if residual.is_nan() {
            f64::INFINITY
        } else {
            residual / bound
        };
        if ratio > self.worst_ratio {
            self.worst_ratio = ratio;
            self.worst_residual = residual;
            self.worst_bound = bound;
            self.detail = detail();
        }
    }

    /// Records an operation that should have succeeded but did not.
    fn fail(&mut self, detail: impl FnOnce() -> String) {
        self.observe(f64::INFINITY, 1.0, detail);
    }

    fn outcome(self, check: Check) -> CheckOutcome {
        CheckOutcome {
            check,
            passed: self.worst_ratio <= 1.0,
            samples: self.samples,
            worst_residual: self.worst_residual,
            worst_bound: self.worst_bound,
            detail: self.detail,
        }
    }
}

fn bound(config: &SuiteConfig, default: f64) -> f64 {
    config.tolerance_override.unwrap_or(default)
}

/// Unwraps an operation expected to succeed on the curated corpus, recording
/// a failure observation otherwise.
fn expect_ok<T>(
    t: &mut Tracker,
    r: crate::error::Result<T>,
    detail: impl Fn() -> String,
) -> Option<T> {
    match r {
        Ok(v) => Some(v),
        Err(e) => {
            t.fail(|| format!("{}: {e}", detail()));
            None
        }
    }
}

// ── Corpus ──────────────────────────────────────────────────────────────────

const CORPUS_GAP: f64 = 0.4;
const CORPUS_COND: f64 = 6.0;

fn corpus_dim(i: usize, max_n: usize) -> usize {
    let lo = 2usize;
    let hi = max_n.max(lo);
    lo + i % (hi - lo + 1)
}

fn relative_deviation(got: &HMatrix, want: &HMatrix) -> f64 {
    (got.clone() - want.clone()).frob_norm() / (1.0 + want.frob_norm())
}

// ── Check 1: Drazin route agreement ─────────────────────────────────────────

fn check_drazin_routes(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0xD7A2);
    let t_route = bound(config, 1e-7);
    let t_resid = bound(config, 1e-8);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 3) % (n + 1);
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let alg = match expect_ok(t, drazin::drazin_algebraic(a), || at("algebraic route")) {
            Some(v) => v,
            None => continue,
        };
        let proj = match expect_ok(t, drazin::drazin_via_projection(a), || at("projection route"))
        {
            Some(v) => v,
            None => continue,
        };
        let fun = match expect_ok(t, drazin::drazin_via_funcalc(a), || at("contour route")) {
            Some(v) => v,
            None => continue,
        };

        let mismatches = [proj.index, fun.index]
            .iter()
            .filter(|&&k| k != alg.index)
            .count();
        t.observe(mismatches as f64, t_route, || {
            at(&format!(
                "route index disagreement (algebraic {}, projection {}, contour {})",
                alg.index, proj.index, fun.index
            ))
        });

        let pairs = [
            ("projection-route", &proj),
            ("contour-route", &fun),
        ];
        for (label, r) in pairs {
            let d_inv = (r.inverse.clone() - alg.inverse.clone()).max_entry_norm();
            t.observe(d_inv, t_route, || at(&format!("{label} inverse deviation")));
            let d_proj = (r.projection.clone() - alg.projection.clone()).max_entry_norm();
            t.observe(d_proj, t_route, || {
                at(&format!("{label} projection deviation"))
            });
        }
        let d_routes = (proj.inverse.clone() - fun.inverse.clone()).max_entry_norm();
        t.observe(d_routes, t_route, || {
            at("projection/contour inverse deviation")
        });

        for (label, r) in [("algebraic", &alg), ("projection", &proj), ("contour", &fun)] {
            match drazin::verify_drazin(a, &r.inverse, alg.index) {
                Ok(rep) => t.observe(rep.max(), t_resid, || {
                    at(&format!("{label} route defining-equation residual"))
                }),
                Err(e) => t.fail(|| at(&format!("{label} route verification: {e}"))),
            }
        }
    }
}

// ── Check 2: index coherence and the range/kernel splitting ────────────────

fn check_index_coherence(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x1DC0);
    let t_resid = bound(config, 1e-8);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 2) % (n + 1);
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let k = drazin::index(a);
        let asc = drazin::ascent(a);
        let des = drazin::descent(a);
        let mut disagreements = [asc, des, cn.index]
            .iter()
            .filter(|&&x| x != k)
            .count();

        if let Some(r) = expect_ok(t, drazin::drazin_algebraic(a), || at("inverse")) {
            // Nilpotency index of the core residue A − A²B; an invertible
            // operator has an empty nilpotent part, index 0.
            let residue =
                a.clone() - a.matmul(a).expect("square").matmul(&r.inverse).expect("square");
            let nil_index = if a.rank() == n {
                0
            } else {
                let scale = 1.0 + residue.frob_norm();
                let mut found = n + 1;
                let mut power = HMatrix::identity(n);
                for step in 1..=n {
                    power = power.matmul(&residue).expect("square");
                    if power.frob_norm() / scale.powi(step as i32) < 1e-10 {
                        found = step;
                        break;
                    }
                }
                found
            };
            if nil_index != k {
                disagreements += 1;
            }
        }
        t.observe(disagreements as f64, t_resid.max(0.5), || {
            at("index/ascent/descent/nilpotency disagreement")
        });

        let kk = k.max(1);
        let (range, null) = a.range_kernel_basis(kk);
        if range.ncols() + null.ncols() != n
            || range.hstack(&null).rank() != n
        {
            t.fail(|| {
                at(&format!(
                    "splitting ranks: dim R = {}, dim N = {}, stacked rank {}",
                    range.ncols(),
                    null.ncols(),
                    range.hstack(&null).rank()
                ))
            });
        }
        let ak = a.power(kk);
        if null.ncols() > 0 {
            let annihilation =
                ak.matmul(&null).expect("conforming").frob_norm() / (1.0 + ak.frob_norm());
            t.observe(annihilation, t_resid, || at("kernel basis annihilation"));
        }
        if range.ncols() > 0 {
            let rrh = range.matmul(&range.hermitian_transpose()).expect("conforming");
            let outside = (ak.clone() - rrh.matmul(&ak).expect("conforming")).frob_norm()
                / (1.0 + ak.frob_norm());
            t.observe(outside, t_resid, || at("range basis containment"));
        }
    }
}

// ── Check 3: functional-calculus axioms ─────────────────────────────────────

fn convolve(f: &[f64], g: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; f.len() + g.len() - 1];
    for (i, a) in f.iter().enumerate() {
        for (j, b) in g.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn random_coeffs(degree: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let mut c: Vec<f64> = (0..=degree).map(|_| rng.gen::<f64>() * 2.0 - 1.0).collect();
    while c[degree].abs() < 0.2 {
        c[degree] = rng.gen::<f64>() * 2.0 - 1.0;
    }
    c
}

fn check_calculus_axioms(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0xCA1C);
    let t_unit = bound(config, 1e-9);
    let t_rule = bound(config, 1e-8);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 4) % n;
        // Shifting by +1 must keep the sphere set away from zero so the
        // composition with the reciprocal stays defined: the direct-route
        // contour disks (radius up to the 0.5 cap) map under the shift to
        // disks that must still avoid the reciprocal's pole.
        let cn = loop {
            let c = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
            let shifted_ok = c
                .spectrum
                .iter()
                .all(|(s, _)| (s.u + 1.0).hypot(s.v) >= 0.75);
            if shifted_ok {
                break c;
            }
        };
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let spectrum = sspec::s_spectrum(a);
        let all: Vec<EigenSphere> = spectrum.spheres().iter().map(|(s, _)| *s).collect();
        let contours = match expect_ok(
            t,
            scalc::build_contours(&spectrum, &all, &ContourPolicy::default()),
            || at("contours"),
        ) {
            Some(c) => c,
            None => continue,
        };

        if let Some(one) = expect_ok(
            t,
            scalc::func_calc(&IntrinsicFn::one(), a, &contours),
            || at("unit image"),
        ) {
            t.observe(
                relative_deviation(&one, &HMatrix::identity(n)),
                t_unit,
                || at("unit ↦ identity"),
            );
        }
        if let Some(ida) = expect_ok(
            t,
            scalc::func_calc(&IntrinsicFn::polynomial(&[0.0, 1.0]), a, &contours),
            || at("identity image"),
        ) {
            t.observe(relative_deviation(&ida, a), t_unit, || at("id ↦ A"));
        }

        let f = random_coeffs(1 + i % 3, &mut rng);
        let g = random_coeffs(1 + (i / 2) % 3, &mut rng);
        let fa = scalc::func_calc(&IntrinsicFn::polynomial(&f), a, &contours);
        let ga = scalc::func_calc(&IntrinsicFn::polynomial(&g), a, &contours);
        let fga = scalc::func_calc(&IntrinsicFn::polynomial(&convolve(&f, &g)), a, &contours);
        match (fa, ga, fga) {
            (Ok(fa), Ok(ga), Ok(fga)) => {
                let product = fa.matmul(&ga).expect("square");
                t.observe(relative_deviation(&product, &fga), t_rule, || {
                    at("product rule")
                });
            }
            _ => t.fail(|| at("polynomial images")),
        }

        match scalc::composition_check(
            &IntrinsicFn::polynomial(&[1.0, 1.0]),
            &IntrinsicFn::reciprocal(),
            a,
        ) {
            Ok(rep) => {
                let scaled = rep.deviation / (1.0 + rep.direct.max_entry_norm());
                t.observe(scaled, t_rule, || at("composition rule"));
            }
            Err(e) => t.fail(|| at(&format!("composition: {e}"))),
        }
    }
}

// ── Check 4: spectral mapping ───────────────────────────────────────────────

fn check_spectral_mapping(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x54A9);
    let t_map = bound(config, 1e-7);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 3) % n;
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let invertible = gen::core_nilpotent(n, 0, CORPUS_GAP, CORPUS_COND, &mut rng);
        let at = |f: &str, what: &str| format!("sample {i} (n={n}): {f} {what}");

        let square = IntrinsicFn::polynomial(&[0.0, 0.0, 1.0]);
        let cases = [
            ("square", &square, &cn.matrix),
            ("reciprocal", &IntrinsicFn::reciprocal(), &invertible.matrix),
            ("exponential", &IntrinsicFn::exponential(), &cn.matrix),
        ];
        for (name, f, a) in cases {
            match scalc::spectral_mapping_check(f, a) {
                Ok(rep) => t.observe(rep.max_deviation, t_map, || at(name, "sphere deviation")),
                Err(e) => t.fail(|| at(name, &format!("mapping: {e}"))),
            }
        }
    }
}

// ── Check 5: Riesz projections ──────────────────────────────────────────────

fn check_riesz_projections(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x81E5);
    let t_proj = bound(config, 1e-9);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n).max(3);
        let nil = (i / 2) % 3;
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let spectrum = sspec::s_spectrum(a);
        let spheres: Vec<EigenSphere> = spectrum.spheres().iter().map(|(s, _)| *s).collect();
        let mut sum = HMatrix::zeros(n, n);
        let mut all_ok = true;
        for (j, s) in spheres.iter().enumerate() {
            match scalc::riesz_projection(a, std::slice::from_ref(s)) {
                Ok(p) => {
                    let np = p.frob_norm();
                    let idem = (p.matmul(&p).expect("square") - p.clone()).frob_norm()
                        / (1.0 + np * np);
                    t.observe(idem, t_proj, || at(&format!("sphere {j} idempotency")));
                    let comm = (p.matmul(a).expect("square") - a.matmul(&p).expect("square"))
                        .frob_norm()
                        / (1.0 + np * a.frob_norm());
                    t.observe(comm, t_proj, || at(&format!("sphere {j} commutation")));
                    sum = sum + p;
                }
                Err(e) => {
                    all_ok = false;
                    t.fail(|| at(&format!("sphere {j} projection: {e}")));
                }
            }
        }
        if all_ok {
            let complete = (sum - HMatrix::identity(n)).frob_norm() / (1.0 + (n as f64).sqrt());
            t.observe(complete, t_proj, || at("projections sum to identity"));
        }

        if spheres.len() >= 2 {
            let head = scalc::riesz_projection(a, &spheres[..1]);
            let tail = scalc::riesz_projection(a, &spheres[1..]);
            match (head, tail) {
                (Ok(p), Ok(q)) => {
                    let pair = (p + q - HMatrix::identity(n)).frob_norm()
                        / (1.0 + (n as f64).sqrt());
                    t.observe(pair, t_proj, || at("complementary pair sums to identity"));
                }
                _ => t.fail(|| at("complementary pair")),
            }
        }
    }
}

// ── Check 6: containment and the radius estimate ────────────────────────────

fn check_spectrum_bounds(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0xB07D);
    let t_ball = bound(config, 1e-8);
    let t_radius = bound(config, 1e-4);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 2) % (n + 1);
        let cn = gen::unitary_conjugated(n, nil, CORPUS_GAP, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let spectrum = sspec::s_spectrum(a);
        let norm = a.operator_norm();
        for (s, _) in spectrum.spheres() {
            let excess = s.radius_from_origin() - norm;
            t.observe(excess, t_ball, || at("sphere outside the norm ball"));
        }

        let estimate = sspec::spectral_radius_gelfand(a, 256);
        let gap = (estimate.value - spectrum.max_radius()).abs();
        t.observe(gap, t_radius, || at("radius estimate at exponent 256"));
    }
}

// ── Check 7: pseudo-resolvent series ────────────────────────────────────────

fn check_resolvent_series(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x5E21);
    let t_series = bound(config, 1e-9);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 3) % n;
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let radius = sspec::s_spectrum(a).max_radius();
        let mut dir = gen::random_quaternion(&mut rng);
        while dir.norm() < 0.3 {
            dir = gen::random_quaternion(&mut rng);
        }
        let q = dir.scale(2.0 * radius / dir.norm());

        let series = match expect_ok(t, sspec::pseudo_resolvent_series(q, a, 1e-13), || {
            at("series")
        }) {
            Some(s) => s,
            None => continue,
        };
        let direct = match expect_ok(t, sspec::q_pencil(a, q).inverse(), || at("pencil inverse"))
        {
            Some(d) => d,
            None => continue,
        };
        t.observe(relative_deviation(&series, &direct), t_series, || {
            at("series vs direct inverse")
        });
    }
}

// ── Check 8: generalized-inverse laws ───────────────────────────────────────

fn random_rank(n: usize, r: usize, rng: &mut ChaCha8Rng) -> HMatrix {
    if r == 0 {
        return HMatrix::zeros(n, n);
    }
    let left = HMatrix::from_fn(n, r, |_, _| gen::random_quaternion(rng));
    let right = HMatrix::from_fn(n, r, |_, _| gen::random_quaternion(rng));
    left.matmul(&right.hermitian_transpose()).expect("conforming")
}

fn check_gen_inverse_laws(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x6E1A);
    let t_law = bound(config, 1e-8);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let r = i % (n + 1);
        let a = random_rank(n, r, &mut rng);
        let at = |what: &str| format!("sample {i} (n={n}, rank={r}): {what}");

        let mp = geninv::moore_penrose(&a);
        let candidates = [
            ("pseudo-inverse", mp.clone()),
            (
                "parametrized inverse",
                match (
                    a.matmul(&mp).and_then(|q| {
                        mp.matmul(&a).map(|p| (p, q))
                    }),
                ) {
                    (Ok((p, q)),) => {
                        match geninv::gen_inverse_from(&mp, &p, &q, &a) {
                            Ok(b) => b,
                            Err(e) => {
                                t.fail(|| at(&format!("parametrization: {e}")));
                                continue;
                            }
                        }
                    }
                    (Err(e),) => {
                        t.fail(|| at(&format!("projections: {e}")));
                        continue;
                    }
                },
            ),
        ];

        for (label, b) in candidates {
            let packed = match expect_ok(t, geninv::GenInvResult::new(&a, b), || {
                at(&format!("{label} products"))
            }) {
                Some(p) => p,
                None => continue,
            };
            t.observe(packed.defect_aba(&a), t_law, || at(&format!("{label} ABA=A")));
            t.observe(packed.defect_bab(), t_law, || at(&format!("{label} BAB=B")));
            let (d_ab, d_ba) = packed.projection_defects();
            t.observe(d_ab, t_law, || at(&format!("{label} AB idempotency")));
            t.observe(d_ba, t_law, || at(&format!("{label} BA idempotency")));

            let rank_a = a.rank();
            let mismatches = [packed.ab.rank(), packed.ba.rank()]
                .iter()
                .filter(|&&x| x != rank_a)
                .count();
            t.observe(mismatches as f64, t_law.max(0.5), || {
                at(&format!("{label} projection rank equalities"))
            });
        }
    }
}

// ── Check 9: group inverse ──────────────────────────────────────────────────

fn check_group_inverse(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x9209);
    let t_unique = bound(config, 1e-9);
    let t_sphere = bound(config, 1e-7);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n).max(3);
        let exists = i % 2 == 0;
        let nil = if exists { i % 2 } else { 2 + i % (n - 1) };
        let cn = gen::core_nilpotent(n, nil.min(n), CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        let rank_equal = a.rank() == a.matmul(a).expect("square").rank();
        if rank_equal != exists {
            t.fail(|| at("rank(A) = rank(A²) disagrees with the construction"));
        }

        match geninv::group_inverse(a) {
            Ok(g) if exists => {
                let d = match expect_ok(t, drazin::drazin_algebraic(a), || at("comparison")) {
                    Some(d) => d,
                    None => continue,
                };
                t.observe(relative_deviation(&g, &d.inverse), t_unique, || {
                    at("group vs index-≤1 inverse")
                });
                match geninv::group_inverse_spectrum_check(a) {
                    Ok(rep) => t.observe(rep.max_deviation, t_sphere, || {
                        at("reciprocal sphere deviation")
                    }),
                    Err(e) => t.fail(|| at(&format!("sphere check: {e}"))),
                }
            }
            Ok(_) => t.fail(|| at("group inverse produced despite rank(A) ≠ rank(A²)")),
            Err(crate::error::Error::NoGroupInverse { .. }) if !exists => {}
            Err(e) => t.fail(|| at(&format!("group inverse: {e}"))),
        }
    }
}

// ── Check 10: inverse identities ────────────────────────────────────────────

fn check_inverse_identities(config: &SuiteConfig, t: &mut Tracker) {
    let mut rng = gen::rng(config.seed ^ 0x1DE7);
    let t_ident = bound(config, 1e-7);
    for i in 0..config.count {
        t.samples += 1;
        let n = corpus_dim(i, config.max_n);
        let nil = (i / 2) % (n + 1);
        let cn = gen::core_nilpotent(n, nil, CORPUS_GAP, CORPUS_COND, &mut rng);
        let a = &cn.matrix;
        let at = |what: &str| format!("sample {i} (n={n}, nil={nil}): {what}");

        match drazin::identity_suite(a) {
            Ok(rep) => t.observe(rep.max(), t_ident, || at("power/double/triple/projector")),
            Err(e) => t.fail(|| at(&format!("identity suite: {e}"))),
        }

        // Keep the polynomial factor bounded away from zero on the nonzero
        // spheres so the product's spectral structure matches the factors'.
        let mut factor = None;
        for _ in 0..100 {
            let (coeffs, b) = gen::random_polynomial_of(a, 2, &mut rng);
            let clear = cn.spectrum.iter().all(|(s, _)| {
                if s.u == 0.0 && s.v == 0.0 {
                    return true;
                }
                let z = num_complex::Complex64::new(s.u, s.v);
                let mut val = num_complex::Complex64::new(0.0, 0.0);
                for &c in coeffs.iter().rev() {
                    val = val * z + c;
                }
                val.norm() >= 0.2
            });
            let constant_ok = coeffs[0].abs() >= 0.2;
            if clear && constant_ok {
                factor = Some(b);
                break;
            }
        }
        match factor {
            Some(b) => match drazin::commuting_product_check(a, &b) {
                Ok(rep) => t.observe(rep.deviation, t_ident, || at("commuting product")),
                Err(e) => t.fail(|| at(&format!("product check: {e}"))),
            },
            None => t.fail(|| at("no polynomial factor clear of the sphere set")),
        }

        if n <= 4 {
            match drazin::left_mult_check(a) {
                Ok(rep) => {
                    if rep.matrix_index != rep.operator_index {
                        t.fail(|| {
                            at(&format!(
                                "left-multiplication index {} vs matrix index {}",
                                rep.operator_index, rep.matrix_index
                            ))
                        });
                    }
                    t.observe(rep.deviation, t_ident, || at("left-multiplication inverse"));
                }
                Err(e) => t.fail(|| at(&format!("left-multiplication: {e}"))),
            }
        }
    }
}

// ── Check 11: the fixed self-adjoint example ────────────────────────────────

fn check_self_adjoint_witness(config: &SuiteConfig, t: &mut Tracker) {
    let t_sphere = bound(config, 1e-9);
    let t_witness = bound(config, 1e-12);
    for _ in 0..config.count.min(1) {
        t.samples += 1;
        let mut m = HMatrix::zeros(2, 2);
        m[(0, 1)] = Quaternion::I;
        m[(1, 0)] = Quaternion::new(0.0, -1.0, 0.0, 0.0);

        let spectrum = sspec::s_spectrum(&m);
        let expected = crate::sspec::Spectrum::new(vec![
            (EigenSphere { u: -1.0, v: 0.0 }, 1),
            (EigenSphere { u: 1.0, v: 0.0 }, 1),
        ]);
        t.observe(spectrum.match_distance(&expected), t_sphere, || {
            "sphere set differs from {-1, +1}".to_owned()
        });

        let u = [Quaternion::ONE, Quaternion::new(0.0, 0.0, 0.0, -1.0)];
        let mu = m.apply(&u).expect("dimension matches");
        let witness = mu
            .iter()
            .zip(&u)
            .map(|(got, x)| (*got - Quaternion::J * *x).norm())
            .fold(0.0f64, f64::max);
        t.observe(witness, t_witness, || {
            "left eigenvalue witness residual".to_owned()
        });

        if spectrum.contains_sphere(&EigenSphere { u: 0.0, v: 1.0 }, 0.5) {
            t.fail(|| "the left eigenvalue's sphere appears in the sphere set".to_owned());
        }
    }
}
