//! Batch front end: reads `qmat-1` matrix documents, runs one computation
//! per process, and emits `qmat-1`/`qspec-1`/`qdrz-1` documents or residual
//! tables.
//!
//! Exit codes: 0 success; 1 mathematical failure (singular operator,
//! inseparable spectrum, missing group inverse, residuals over tolerance);
//! 2 I/O, argument, or document-format error.

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qspectral_core::drazin::{
    drazin_algebraic, drazin_via_funcalc, drazin_via_projection, verify_drazin, DrazinReport,
};
use qspectral_core::geninv::{group_inverse, moore_penrose};
use qspectral_core::io;
use qspectral_core::scalc::{
    build_contours, domain_radius_cap, func_calc, riesz_projection, ContourPolicy,
};
use qspectral_core::sspec::{s_resolvent_left, s_spectrum, spectral_radius_gelfand};
use qspectral_core::{
    run_suite, Check, DrazinResult, EigenSphere, Error, HMatrix, IntrinsicFn, Quaternion,
    SuiteConfig,
};

const TOL_ENV: &str = "QSPECTRAL_TOL";

#[derive(Parser)]
#[command(name = "qspectral", version, about = "Spectral toolkit for quaternionic matrices")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,

    /// Write the output document or table to this file instead of stdout.
    #[arg(short, long, global = true)]
    output: Option<PathBuf>,

    /// Residual tolerance for verification output; overrides the
    /// QSPECTRAL_TOL environment variable (default 1e-7).
    #[arg(long, global = true)]
    tol: Option<f64>,
}

#[derive(Subcommand)]
enum Verb {
    /// S-spectrum of a matrix, as a qspec-1 document.
    Spectrum {
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Left S-resolvent at a point off the spectrum, as a qmat-1 document.
    Resolvent {
        /// Evaluation point: "a", "a,b", or "a,b,c,d" (components of
        /// a + bi + cj + dk).
        #[arg(long, value_parser = parse_point)]
        at: [f64; 4],
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Spectral-radius refinement ‖Aᵏ‖^{1/k} at doubling exponents.
    Radius {
        /// Largest exponent (powers of two up to this are used).
        #[arg(long, default_value_t = 256)]
        exponent: usize,
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// f(A) by contour quadrature, as a qmat-1 document.
    Funcalc {
        /// Function specifier: "poly:c0,c1,...", "recip", "exp", or
        /// "drazin-selector".
        #[arg(long, value_parser = parse_function)]
        function: FnSpec,
        /// Upper bound on contour circle radii (default: largest radius the
        /// function's domain admits, at most 0.5).
        #[arg(long, value_parser = parse_positive)]
        radius: Option<f64>,
        /// Initial quadrature nodes per circle (default 64).
        #[arg(long, value_parser = parse_node_count)]
        nodes: Option<usize>,
        /// Divisor of the inter-sphere gap bounding circle radii (default 3).
        #[arg(long, value_parser = parse_positive)]
        margin: Option<f64>,
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Riesz projection onto the chosen spectral spheres, as a qmat-1
    /// document.
    Riesz {
        /// Sphere "u,v" to enclose; repeat for several spheres.  Each must
        /// match a sphere of the spectrum.
        #[arg(long = "sphere", required = true, value_parser = parse_sphere)]
        spheres: Vec<EigenSphere>,
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Moore–Penrose generalized inverse, as a qmat-1 document.
    Ginverse {
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Group inverse (the commuting generalized inverse; requires
    /// rank(A) = rank(A²)), as a qmat-1 document.
    Group {
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Drazin inverse with verification residuals, as a qdrz-1 document.
    Drazin {
        /// Computation route; "auto" tries the contour route and falls back
        /// to the algebraic splitting when the spectrum is ill-separated.
        #[arg(long, value_enum, default_value_t = Route::Auto)]
        route: Route,
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Residual table for the Drazin routes on one matrix.
    Verify {
        /// Routes to run; "all" reports every route, deferring those the
        /// spectrum cannot support.
        #[arg(long, value_enum, default_value_t = RouteSet::All)]
        routes: RouteSet,
        /// Input qmat-1 file.
        input: PathBuf,
    },

    /// Property suite over generated corpora; prints a residual table.
    Suite {
        /// Comma-separated check names (default: all).  An empty value runs
        /// nothing and succeeds.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        /// Matrices drawn per check.
        #[arg(long, default_value_t = 100)]
        count: usize,
        /// Largest matrix dimension in the corpus.
        #[arg(long = "max-n", default_value_t = 6)]
        max_n: usize,
        /// Base seed for the corpus.
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Emit the summary as JSON instead of a table.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Route {
    Auto,
    Algebraic,
    Projection,
    Contour,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RouteSet {
    All,
    Algebraic,
    Projection,
    Contour,
}

/// A deferred function choice: "drazin-selector" needs the input's spectrum
/// before it can be built.
#[derive(Clone)]
enum FnSpec {
    Poly(Vec<f64>),
    Recip,
    Exp,
    DrazinSelector,
}

impl FnSpec {
    fn materialize(&self, a: &HMatrix) -> IntrinsicFn {
        match self {
            FnSpec::Poly(c) => IntrinsicFn::polynomial(c),
            FnSpec::Recip => IntrinsicFn::reciprocal(),
            FnSpec::Exp => IntrinsicFn::exponential(),
            FnSpec::DrazinSelector => {
                // Switching radius halfway between the zero sphere and the
                // nearest nonzero sphere; 1 when the spectrum is {0} only,
                // where any positive radius encloses the whole spectrum.
                let cut = qspectral_core::tol::sphere(a.operator_norm());
                let gap = s_spectrum(a)
                    .spheres()
                    .iter()
                    .map(|(s, _)| s.radius_from_origin())
                    .filter(|r| *r > cut)
                    .fold(f64::INFINITY, f64::min);
                let r0 = if gap.is_finite() { gap / 2.0 } else { 1.0 };
                IntrinsicFn::drazin_selector(r0)
            }
        }
    }
}

fn parse_point(s: &str) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("\"{p}\": {e}")))
        .collect::<Result<_, _>>()?;
    let q = match parts.as_slice() {
        [a] => [*a, 0.0, 0.0, 0.0],
        [a, b] => [*a, *b, 0.0, 0.0],
        [a, b, c, d] => [*a, *b, *c, *d],
        _ => return Err("expected 1, 2, or 4 comma-separated components".into()),
    };
    if q.iter().any(|x| !x.is_finite()) {
        return Err("components must be finite".into());
    }
    Ok(q)
}

fn parse_sphere(s: &str) -> Result<EigenSphere, String> {
    let parts: Vec<f64> = s
        .split(',')
        .map(|p| p.trim().parse::<f64>().map_err(|e| format!("\"{p}\": {e}")))
        .collect::<Result<_, _>>()?;
    match parts.as_slice() {
        [u, v] if u.is_finite() && v.is_finite() => {
            EigenSphere::new(*u, *v).map_err(|e| e.to_string())
        }
        [_, _] => Err("coordinates must be finite".into()),
        _ => Err("expected \"u,v\"".into()),
    }
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let x: f64 = s.trim().parse().map_err(|e| format!("{e}"))?;
    if x.is_finite() && x > 0.0 {
        Ok(x)
    } else {
        Err("must be a positive finite number".into())
    }
}

fn parse_node_count(s: &str) -> Result<usize, String> {
    let n: usize = s.trim().parse().map_err(|e| format!("{e}"))?;
    if n >= 1 {
        Ok(n)
    } else {
        Err("must be at least 1".into())
    }
}

fn parse_function(s: &str) -> Result<FnSpec, String> {
    match s {
        "recip" => return Ok(FnSpec::Recip),
        "exp" => return Ok(FnSpec::Exp),
        "drazin-selector" => return Ok(FnSpec::DrazinSelector),
        _ => {}
    }
    if let Some(list) = s.strip_prefix("poly:") {
        let coeffs: Vec<f64> = list
            .split(',')
            .map(|p| p.trim().parse::<f64>().map_err(|e| format!("\"{p}\": {e}")))
            .collect::<Result<_, _>>()?;
        if coeffs.is_empty() || coeffs.iter().any(|c| !c.is_finite()) {
            return Err("polynomial needs at least one finite coefficient".into());
        }
        return Ok(FnSpec::Poly(coeffs));
    }
    Err(format!(
        "unknown function \"{s}\"; expected \"poly:c0,c1,...\", \"recip\", \"exp\", or \
         \"drazin-selector\""
    ))
}

/// A failure carrying its exit code: 1 mathematical, 2 I/O or format.
struct Fail {
    code: u8,
    message: String,
}

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail {
            code: 1,
            message: e.to_string(),
        }
    }
}

impl From<qspectral_core::FormatError> for Fail {
    fn from(e: qspectral_core::FormatError) -> Self {
        Fail {
            code: 2,
            message: e.to_string(),
        }
    }
}

fn read_input(path: &PathBuf) -> Result<HMatrix, Fail> {
    let text = std::fs::read_to_string(path).map_err(|e| Fail {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok(io::read_matrix(&text)?)
}

/// Tolerance for verification output: `--tol` flag, then the QSPECTRAL_TOL
/// environment variable, then the library default.
fn tolerance(flag: Option<f64>) -> Result<(f64, &'static str), Fail> {
    if let Some(t) = flag {
        return Ok((t, "--tol"));
    }
    match std::env::var(TOL_ENV) {
        Ok(text) => {
            let t: f64 = text.parse().map_err(|e| Fail {
                code: 2,
                message: format!("{TOL_ENV}=\"{text}\": {e}"),
            })?;
            Ok((t, TOL_ENV))
        }
        Err(_) => Ok((qspectral_core::tol::REPORT_DEFAULT, "default")),
    }
}

fn emit(output: &Option<PathBuf>, text: &str) -> Result<(), Fail> {
    match output {
        Some(path) => std::fs::write(path, text).map_err(|e| Fail {
            code: 2,
            message: format!("{}: {e}", path.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Fail> {
    let (tol, tol_source) = tolerance(cli.tol)?;
    let out = &cli.output;
    match cli.verb {
        Verb::Spectrum { input } => {
            let a = read_input(&input)?;
            let doc = io::write_spectrum(&s_spectrum(&a))?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Resolvent { at, input } => {
            let a = read_input(&input)?;
            let s = Quaternion::new(at[0], at[1], at[2], at[3]);
            let r = s_resolvent_left(s, &a)?;
            let doc = io::write_matrix(&r)?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Radius { exponent, input } => {
            if exponent == 0 {
                return Err(Fail {
                    code: 2,
                    message: "--exponent must be at least 1".into(),
                });
            }
            let a = read_input(&input)?;
            let est = spectral_radius_gelfand(&a, exponent);
            let doc = RadiusDoc {
                exponent,
                estimates: est.estimates,
                value: est.value,
            };
            let text = serde_json::to_string(&doc).expect("finite numbers");
            emit(out, &format!("{text}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Funcalc {
            function,
            radius,
            nodes,
            margin,
            input,
        } => {
            let a = read_input(&input)?;
            let f = function.materialize(&a);
            let spectrum = s_spectrum(&a);
            let all: Vec<EigenSphere> = spectrum.spheres().iter().map(|(s, _)| *s).collect();
            let base = ContourPolicy::default();
            let policy = ContourPolicy {
                radius_cap: radius
                    .unwrap_or_else(|| domain_radius_cap(&f, &all).min(base.radius_cap)),
                margin_divisor: margin.unwrap_or(base.margin_divisor),
                nodes: nodes.unwrap_or(base.nodes),
            };
            let contours = build_contours(&spectrum, &all, &policy)?;
            let fa = func_calc(&f, &a, &contours)?;
            let doc = io::write_matrix(&fa)?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Riesz { spheres, input } => {
            let a = read_input(&input)?;
            let p = riesz_projection(&a, &spheres)?;
            let doc = io::write_matrix(&p)?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Ginverse { input } => {
            let a = read_input(&input)?;
            let doc = io::write_matrix(&moore_penrose(&a))?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Group { input } => {
            let a = read_input(&input)?;
            let doc = io::write_matrix(&group_inverse(&a)?)?;
            emit(out, &format!("{doc}\n"))?;
            Ok(ExitCode::SUCCESS)
        }

        Verb::Drazin { route, input } => {
            let a = read_input(&input)?;
            let result = match route {
                Route::Algebraic => drazin_algebraic(&a)?,
                Route::Projection => drazin_via_projection(&a)?,
                Route::Contour => drazin_via_funcalc(&a)?,
                Route::Auto => match drazin_via_funcalc(&a) {
                    Ok(r) => r,
                    Err(Error::IllSeparated { gap, required }) => {
                        eprintln!(
                            "note: contour route deferred (zero/nonzero gap {gap:.3e} below \
                             required {required:.3e}); algebraic splitting used"
                        );
                        drazin_algebraic(&a)?
                    }
                    Err(e) => return Err(e.into()),
                },
            };
            let residuals = verify_drazin(&a, &result.inverse, result.index)?;
            let doc = io::write_drazin(&result, &residuals, tol)?;
            emit(out, &format!("{doc}\n"))?;
            if residuals.max() > tol {
                eprintln!(
                    "error: residuals exceed tolerance: worst {:.3e} > {tol:.3e}",
                    residuals.max()
                );
                return Ok(ExitCode::from(1));
            }
            Ok(ExitCode::SUCCESS)
        }

        Verb::Verify { routes, input } => {
            let a = read_input(&input)?;
            let (table, passed) = verify_table(&a, routes, tol, tol_source)?;
            emit(out, &table)?;
            Ok(if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }

        Verb::Suite {
            checks,
            count,
            max_n,
            seed,
            json,
        } => {
            let selected: Vec<Check> = match checks {
                None => Check::ALL.to_vec(),
                Some(names) => names
                    .iter()
                    .filter(|s| !s.is_empty())
                    .map(|s| s.parse::<Check>())
                    .collect::<Result<_, _>>()
                    .map_err(|m| Fail { code: 2, message: m })?,
            };
            let config = SuiteConfig {
                checks: selected,
                count,
                max_n,
                seed,
                tolerance_override: suite_override(cli.tol)?,
            };
            let report = run_suite(&config);
            let text = if json {
                suite_json(&config, &report)
            } else {
                suite_table(&config, &report)
            };
            emit(out, &text)?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}

/// The suite replaces per-check bounds only when a tolerance was given
/// explicitly (flag or environment); otherwise every check keeps its own.
fn suite_override(flag: Option<f64>) -> Result<Option<f64>, Fail> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(TOL_ENV) {
        Ok(text) => {
            let t: f64 = text.parse().map_err(|e| Fail {
                code: 2,
                message: format!("{TOL_ENV}=\"{text}\": {e}"),
            })?;
            Ok(Some(t))
        }
        Err(_) => Ok(None),
    }
}

#[derive(Serialize)]
struct RadiusDoc {
    exponent: usize,
    estimates: Vec<(usize, f64)>,
    value: f64,
}

// ── Verify table ────────────────────────────────────────────────────────────

enum RouteOutcome {
    Ran(DrazinResult, DrazinReport),
    Deferred(String),
}

fn verify_table(
    a: &HMatrix,
    routes: RouteSet,
    tol: f64,
    tol_source: &str,
) -> Result<(String, bool), Fail> {
    let wanted: &[(&str, fn(&HMatrix) -> qspectral_core::Result<DrazinResult>)] = match routes {
        RouteSet::All => &[
            ("algebraic", drazin_algebraic),
            ("projection", drazin_via_projection),
            ("contour", drazin_via_funcalc),
        ],
        RouteSet::Algebraic => &[("algebraic", drazin_algebraic)],
        RouteSet::Projection => &[("projection", drazin_via_projection)],
        RouteSet::Contour => &[("contour", drazin_via_funcalc)],
    };

    let mut rows: Vec<(&str, RouteOutcome)> = Vec::new();
    for (name, route) in wanted {
        match route(a) {
            Ok(result) => {
                let report = verify_drazin(a, &result.inverse, result.index)?;
                rows.push((name, RouteOutcome::Ran(result, report)));
            }
            // Under "all" an ill-separated spectrum defers the quadrature
            // routes to the algebraic one; a single requested route fails.
            Err(Error::IllSeparated { gap, required }) if routes == RouteSet::All => {
                rows.push((
                    name,
                    RouteOutcome::Deferred(format!(
                        "zero/nonzero gap {gap:.3e} below required {required:.3e}"
                    )),
                ));
            }
            Err(e) => return Err(e.into()),
        }
    }

    let mut worst: f64 = 0.0;
    let mut table = String::new();
    writeln!(
        table,
        "drazin route verification: n = {}, tolerance {tol:.3e} ({tol_source})",
        a.n()
    )
    .unwrap();
    writeln!(
        table,
        "{:<12} {:>5} {:>12} {:>12} {:>12} {:>12}",
        "route", "index", "commute", "absorption", "chain", "nilpotency"
    )
    .unwrap();
    for (name, outcome) in &rows {
        match outcome {
            RouteOutcome::Ran(result, rep) => {
                worst = worst.max(rep.max());
                writeln!(
                    table,
                    "{:<12} {:>5} {:>12.3e} {:>12.3e} {:>12.3e} {:>12.3e}",
                    name, result.index, rep.commute, rep.absorption, rep.chain, rep.nilpotency
                )
                .unwrap();
            }
            RouteOutcome::Deferred(why) => {
                writeln!(table, "{name:<12} deferred: {why}").unwrap();
            }
        }
    }

    let ran: Vec<(&str, &DrazinResult)> = rows
        .iter()
        .filter_map(|(name, o)| match o {
            RouteOutcome::Ran(result, _) => Some((*name, result)),
            RouteOutcome::Deferred(_) => None,
        })
        .collect();
    let mut index_mismatches = 0usize;
    for i in 0..ran.len() {
        for j in i + 1..ran.len() {
            let (na, ra) = ran[i];
            let (nb, rb) = ran[j];
            let d_inv = (ra.inverse.clone() - rb.inverse.clone()).max_entry_norm();
            let d_proj = (ra.projection.clone() - rb.projection.clone()).max_entry_norm();
            worst = worst.max(d_inv).max(d_proj);
            if ra.index != rb.index {
                index_mismatches += 1;
            }
            writeln!(
                table,
                "{na} vs {nb}: inverse deviation {d_inv:.3e}, projection deviation {d_proj:.3e}"
            )
            .unwrap();
        }
    }
    if ran.len() > 1 {
        writeln!(table, "index mismatches: {index_mismatches}").unwrap();
    }

    let passed = worst <= tol && index_mismatches == 0;
    writeln!(
        table,
        "result: {} (worst residual {worst:.3e}, tolerance {tol:.3e})",
        if passed { "PASS" } else { "FAIL" }
    )
    .unwrap();
    Ok((table, passed))
}

// ── Suite output ────────────────────────────────────────────────────────────

fn suite_table(config: &SuiteConfig, report: &qspectral_core::SuiteReport) -> String {
    let mut table = String::new();
    let bound = match config.tolerance_override {
        Some(t) => format!("tolerance override {t:.3e}"),
        None => "per-check tolerances".to_owned(),
    };
    writeln!(
        table,
        "suite: seed {}, count {}, max n {}, {bound}",
        config.seed, config.count, config.max_n
    )
    .unwrap();
    if report.outcomes.is_empty() {
        writeln!(table, "no checks selected").unwrap();
        writeln!(table, "result: PASS (0/0)").unwrap();
        return table;
    }
    writeln!(
        table,
        "{:<22} {:<8} {:>7} {:>12} {:>12}  {}",
        "check", "outcome", "samples", "worst", "bound", "detail"
    )
    .unwrap();
    let mut passed = 0usize;
    for o in &report.outcomes {
        if o.passed {
            passed += 1;
        }
        writeln!(
            table,
            "{:<22} {:<8} {:>7} {:>12.3e} {:>12.3e}  {}",
            o.check.name(),
            if o.passed { "PASS" } else { "FAIL" },
            o.samples,
            o.worst_residual,
            o.worst_bound,
            o.detail
        )
        .unwrap();
    }
    writeln!(
        table,
        "result: {} ({passed}/{})",
        if report.all_passed() { "PASS" } else { "FAIL" },
        report.outcomes.len()
    )
    .unwrap();
    table
}

#[derive(Serialize)]
struct SuiteDoc {
    seed: u64,
    count: usize,
    max_n: usize,
    tolerance_override: Option<f64>,
    checks: Vec<CheckDoc>,
    all_passed: bool,
}

#[derive(Serialize)]
struct CheckDoc {
    check: String,
    passed: bool,
    samples: usize,
    worst_residual: f64,
    worst_bound: f64,
    detail: String,
}

fn suite_json(config: &SuiteConfig, report: &qspectral_core::SuiteReport) -> String {
    let doc = SuiteDoc {
        seed: config.seed,
        count: config.count,
        max_n: config.max_n,
        tolerance_override: config.tolerance_override,
        checks: report
            .outcomes
            .iter()
            .map(|o| CheckDoc {
                check: o.check.name().to_owned(),
                passed: o.passed,
                samples: o.samples,
                worst_residual: o.worst_residual,
                worst_bound: o.worst_bound,
                detail: o.detail.clone(),
            })
            .collect(),
        all_passed: report.all_passed(),
    };
    let mut text = serde_json::to_string(&doc).expect("plain values");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_parse_with_one_two_or_four_components() {
        assert_eq!(parse_point("2").unwrap(), [2.0, 0.0, 0.0, 0.0]);
        assert_eq!(parse_point("0, 1").unwrap(), [0.0, 1.0, 0.0, 0.0]);
        assert_eq!(parse_point("1,2,3,4").unwrap(), [1.0, 2.0, 3.0, 4.0]);
        assert!(parse_point("1,2,3").is_err());
        assert!(parse_point("x").is_err());
        assert!(parse_point("inf").is_err());
    }

    #[test]
    fn spheres_require_two_finite_coordinates_and_v_nonnegative() {
        let s = parse_sphere("0.5, 1.5").unwrap();
        assert_eq!((s.u, s.v), (0.5, 1.5));
        assert!(parse_sphere("1").is_err());
        assert!(parse_sphere("1,-0.5").is_err());
        assert!(parse_sphere("1,nan").is_err());
    }

    #[test]
    fn function_specifiers_cover_the_documented_set() {
        assert!(matches!(parse_function("recip").unwrap(), FnSpec::Recip));
        assert!(matches!(parse_function("exp").unwrap(), FnSpec::Exp));
        assert!(matches!(
            parse_function("drazin-selector").unwrap(),
            FnSpec::DrazinSelector
        ));
        match parse_function("poly:1,0,2.5").unwrap() {
            FnSpec::Poly(c) => assert_eq!(c, vec![1.0, 0.0, 2.5]),
            _ => panic!("expected polynomial"),
        }
        assert!(parse_function("poly:").is_err());
        assert!(parse_function("tan").is_err());
    }

    #[test]
    fn selector_materializes_from_the_spectrum() {
        let a = HMatrix::diag(&[Quaternion::ZERO, Quaternion::from_real(2.0)]);
        let f = FnSpec::DrazinSelector.materialize(&a);
        // Switching radius 1: the zero disk reaches out to |z| < 1.
        assert!(f.contains(num_complex::Complex64::new(2.0, 0.0)));
        assert!(f.contains(num_complex::Complex64::new(0.5, 0.0)));
        assert_eq!(f.eval(num_complex::Complex64::new(0.5, 0.0)).norm(), 0.0);
        let half = f.eval(num_complex::Complex64::new(2.0, 0.0));
        assert!((half.re - 0.5).abs() < 1e-15);
    }
}
