//! Library half of the `iqprob` binary: argument definitions and a pure
//! `execute` that maps parsed arguments to (exit code, output), so the whole
//! surface is testable without spawning processes.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use iqprob_core::classical::{
    check_axioms_classical, check_derived_inequalities, envelope, ClassicalReport, CredalSet,
    ImpreciseMeasure,
};
use iqprob_core::error::Error;
use iqprob_core::geometry::{cs_decompose, IntersectionMethod};
use iqprob_core::improb::{
    bounds, check_axioms, conditional_interval, interval_distance, probability_interval,
    sure_dominance,
};
use iqprob_core::measurement::{
    no_go_certificate, two_time_table, ProjectiveResolution, TwoTimeOrder,
};
use iqprob_core::spin::reproduce_tables;
use iqprob_core::{ComplexMatrix, DensityMatrix, Projector, Tolerances};

pub const SCHEMA: &str = "iqprob/1";

/// Exit codes: success / validation error / property or golden failure.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_PROPERTY_FAIL: i32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputMode {
    Json,
    Pretty,
}

#[derive(Debug, Parser)]
#[command(
    name = "iqprob",
    about = "Imprecise joint probabilities for pairs of quantum projectors",
    version
)]
pub struct Cli {
    /// Output format; JSON is stable under the iqprob/1 schema, pretty is
    /// for humans only.
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub output: OutputMode,

    /// Override for the validation tolerance bundle (also via IQPROB_TOL).
    #[arg(long, global = true)]
    pub tol: Option<f64>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Canonical five-block (CS) decomposition of a projector pair.
    Decompose { p: PathBuf, q: PathBuf },
    /// Lower and upper joint probability operators of a projector pair.
    Bounds {
        p: PathBuf,
        q: PathBuf,
        /// Intersection algorithm: spectral, harmonic, limit or schur.
        #[arg(long, default_value = "spectral")]
        method: String,
    },
    /// Probability interval of (p, q) on a state.
    Interval {
        rho: PathBuf,
        p: PathBuf,
        q: PathBuf,
        /// Divide both bounds by tr(rho q).
        #[arg(long)]
        conditional: bool,
    },
    /// Sure-dominance comparison of two projector pairs on a state.
    Compare {
        rho: PathBuf,
        p1: PathBuf,
        q1: PathBuf,
        p2: PathBuf,
        q2: PathBuf,
    },
    /// Machine-checked axiom suite for a projector pair.
    Axioms {
        p: PathBuf,
        q: PathBuf,
        /// Number of synthetic commuting states probing the sandwich axiom.
        #[arg(long, default_value_t = 32)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// No-go certificate for two projective resolutions.
    Nogo { p_res: PathBuf, q_res: PathBuf },
    /// Two-time (successive measurement) probability table.
    Twotime {
        rho: PathBuf,
        p_res: PathBuf,
        q_res: PathBuf,
        /// Measurement order: pq, qp or mean.
        #[arg(long, default_value = "pq")]
        order: String,
    },
    /// Classical axiom and derived-inequality report for an imprecise
    /// measure or a credal set.
    Classical { input: PathBuf },
    /// Spin-1 golden-table runner.
    Spin1 {
        /// Recompute every golden table and compare against the stored
        /// exact constants.
        #[arg(long)]
        reproduce: bool,
    },
}

/// A report destined for one of the two output streams.
pub struct Outcome {
    pub exit: i32,
    pub stdout: String,
    pub stderr: String,
}

fn error_code(e: &Error) -> &'static str {
    match e {
        Error::NotSquare => "not_square",
        Error::NonFinite => "non_finite",
        Error::NotHermitian { .. } => "not_hermitian",
        Error::NotIdempotent { .. } => "not_idempotent",
        Error::SpectrumOutOfBand { .. } => "spectrum_out_of_band",
        Error::NotPositive { .. } => "not_positive",
        Error::TraceNotOne { .. } => "trace_not_one",
        Error::DimensionMismatch { .. } => "dimension_mismatch",
        Error::ConvergenceFailure => "convergence_failure",
        Error::BandAmbiguity { .. } => "band_ambiguity",
        Error::DecompositionInconsistent { .. } => "decomposition_inconsistent",
        Error::LimitNotConverged { .. } => "limit_not_converged",
        Error::ConditionOnNullEvent { .. } => "condition_on_null_event",
        Error::ResolutionInvalid(_) => "resolution_invalid",
        Error::EmptyCredalSet => "empty_credal_set",
        Error::InvalidDistribution(_) => "invalid_distribution",
        Error::IntervalOutOfRange { .. } => "interval_out_of_range",
        Error::InvalidTolerance => "invalid_tolerance",
        Error::EventSpaceTooLarge { .. } => "event_space_too_large",
        Error::EventOutOfSpace { .. } => "event_out_of_space",
        Error::Malformed(_) => "malformed",
    }
}

/// A CLI-level failure carrying the machine-readable code and, when the
/// failure concerns a file, the offending path.
struct Failure {
    code: &'static str,
    message: String,
    path: Option<PathBuf>,
}

impl Failure {
    fn from_core(e: Error) -> Self {
        Self {
            code: error_code(&e),
            message: e.to_string(),
            path: None,
        }
    }

    fn at(mut self, path: &Path) -> Self {
        self.path = Some(path.to_path_buf());
        self
    }

    fn render(&self, mode: OutputMode) -> String {
        match mode {
            OutputMode::Json => {
                let mut err = json!({
                    "code": self.code,
                    "message": self.message,
                });
                if let Some(p) = &self.path {
                    err["path"] = json!(p.display().to_string());
                }
                json!({ "schema": SCHEMA, "error": err }).to_string()
            }
            OutputMode::Pretty => match &self.path {
                Some(p) => format!("error [{}] at {}: {}", self.code, p.display(), self.message),
                None => format!("error [{}]: {}", self.code, self.message),
            },
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::from_core(e)
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

fn resolve_tolerances(cli_override: Option<f64>) -> CliResult<Tolerances> {
    let mut tol = Tolerances::default();
    let from_env = match std::env::var("IQPROB_TOL") {
        Ok(raw) => Some(raw.parse::<f64>().map_err(|_| Failure {
            code: "invalid_tolerance",
            message: format!("IQPROB_TOL is not a number: {raw:?}"),
            path: None,
        })?),
        Err(_) => None,
    };
    if let Some(eps) = cli_override.or(from_env) {
        tol.eps_herm = eps;
        tol.eps_proj = eps;
        tol.eps_psd = eps;
        tol.eps_trace = eps;
        tol.validate().map_err(Failure::from_core)?;
    }
    Ok(tol)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> CliResult<T> {
    let raw = std::fs::read_to_string(path).map_err(|e| Failure {
        code: "io",
        message: e.to_string(),
        path: Some(path.to_path_buf()),
    })?;
    serde_json::from_str(&raw).map_err(|e| Failure {
        code: "malformed",
        message: format!("invalid JSON: {e}"),
        path: Some(path.to_path_buf()),
    })
}

fn load_projector(path: &Path, tol: &Tolerances) -> CliResult<Projector> {
    let m: ComplexMatrix = read_json(path)?;
    iqprob_core::hermitian::validate_projector(m, tol).map_err(|e| Failure::from_core(e).at(path))
}

fn load_density(path: &Path, tol: &Tolerances) -> CliResult<DensityMatrix> {
    let m: ComplexMatrix = read_json(path)?;
    DensityMatrix::new(m, tol).map_err(|e| Failure::from_core(e).at(path))
}

fn load_resolution(path: &Path, tol: &Tolerances) -> CliResult<ProjectiveResolution> {
    let matrices: Vec<ComplexMatrix> = read_json(path)?;
    let elements = matrices
        .into_iter()
        .map(|m| iqprob_core::hermitian::validate_projector(m, tol))
        .collect::<iqprob_core::Result<Vec<_>>>()
        .map_err(|e| Failure::from_core(e).at(path))?;
    ProjectiveResolution::new(elements).map_err(|e| Failure::from_core(e).at(path))
}

fn wrap(command: &str, payload: Value) -> Value {
    json!({ "schema": SCHEMA, "command": command, "result": payload })
}

fn matrix_json(m: &iqprob_core::nalgebra::DMatrix<iqprob_core::num_complex::Complex64>) -> Value {
    let wrapped = ComplexMatrix::new(m.clone()).expect("finite matrix");
    serde_json::to_value(&wrapped).expect("matrix serializes")
}

fn interval_json(iv: &iqprob_core::improb::ProbabilityInterval) -> Value {
    json!({ "lower": iv.lp, "upper": iv.up, "width": iv.width() })
}

fn classical_report_json(name: &str, report: &ClassicalReport) -> Value {
    json!({
        "suite": name,
        "all_pass": report.all_pass,
        "exhaustive": report.exhaustive,
        "checks": report.checks.iter().map(|c| json!({
            "name": c.name,
            "pass": c.pass,
            "worst_violation": c.worst_violation,
            "witness": c.witness.map(|(a, b)| vec![a, b]),
        })).collect::<Vec<_>>(),
    })
}

fn render(mode: OutputMode, value: &Value, pretty: impl FnOnce() -> String) -> String {
    match mode {
        OutputMode::Json => value.to_string(),
        OutputMode::Pretty => pretty(),
    }
}

/// Runs one parsed command; never panics on bad input.
pub fn execute(cli: Cli) -> Outcome {
    let mode = cli.output;
    match run_command(cli) {
        Ok(outcome) => outcome,
        Err(failure) => Outcome {
            exit: EXIT_INVALID,
            stdout: String::new(),
            stderr: failure.render(mode),
        },
    }
}

fn ok(stdout: String) -> Outcome {
    Outcome {
        exit: EXIT_OK,
        stdout,
        stderr: String::new(),
    }
}

fn graded(pass: bool, stdout: String) -> Outcome {
    Outcome {
        exit: if pass { EXIT_OK } else { EXIT_PROPERTY_FAIL },
        stdout,
        stderr: String::new(),
    }
}

fn run_command(cli: Cli) -> CliResult<Outcome> {
    let tol = resolve_tolerances(cli.tol)?;
    let mode = cli.output;
    match cli.command {
        Command::Decompose { p, q } => {
            let p = load_projector(&p, &tol)?;
            let q = load_projector(&q, &tol)?;
            let d = cs_decompose(&p, &q, &tol)?;
            let payload = json!({
                "dim": d.dim(),
                "block_dims": {
                    "generic_half": d.m,
                    "both_one": d.m11,
                    "p_only": d.m10,
                    "q_only": d.m01,
                    "both_zero": d.m00,
                },
                "principal_angles": d.principal_angles,
                "u": serde_json::to_value(&d.u).expect("matrix serializes"),
                "c": serde_json::to_value(&d.c).expect("matrix serializes"),
                "s": serde_json::to_value(&d.s).expect("matrix serializes"),
                "reconstruction_error_p": d.reconstruction_error_p,
                "reconstruction_error_q": d.reconstruction_error_q,
            });
            let value = wrap("decompose", payload);
            Ok(ok(render(mode, &value, || {
                let mut s = String::new();
                let _ = writeln!(
                    s,
                    "blocks: generic 2x{}, [1,1] {}, [0,1] {}, [1,0] {}, [0,0] {}",
                    d.m, d.m11, d.m10, d.m01, d.m00
                );
                let _ = writeln!(s, "principal angles: {:?}", d.principal_angles);
                let _ = write!(
                    s,
                    "reconstruction errors: p {:.3e}, q {:.3e}",
                    d.reconstruction_error_p, d.reconstruction_error_q
                );
                s
            })))
        }
        Command::Bounds { p, q, method } => {
            let method: IntersectionMethod = method.parse()?;
            let p = load_projector(&p, &tol)?;
            let q = load_projector(&q, &tol)?;
            let g = iqprob_core::geometry::intersection_projector(&p, &q, method)?;
            let pair = bounds(&p, &q)?;
            let payload = json!({
                "method": format!("{method:?}"),
                "lower": matrix_json(g.matrix()),
                "upper": matrix_json(pair.upper.matrix()),
                "lower_rank": g.rank(),
            });
            let value = wrap("bounds", payload);
            Ok(ok(render(mode, &value, || {
                format!(
                    "lower operator rank {}, upper trace {:.6}",
                    g.rank(),
                    pair.upper.trace()
                )
            })))
        }
        Command::Interval {
            rho,
            p,
            q,
            conditional,
        } => {
            let rho = load_density(&rho, &tol)?;
            let p = load_projector(&p, &tol)?;
            let q = load_projector(&q, &tol)?;
            let iv = if conditional {
                conditional_interval(&rho, &p, &q)?
            } else {
                probability_interval(&rho, &p, &q)?
            };
            let payload = json!({
                "conditional": conditional,
                "interval": interval_json(&iv),
            });
            let value = wrap("interval", payload);
            Ok(ok(render(mode, &value, || {
                format!("[{:.10}, {:.10}]", iv.lp, iv.up)
            })))
        }
        Command::Compare { rho, p1, q1, p2, q2 } => {
            let rho = load_density(&rho, &tol)?;
            let p1 = load_projector(&p1, &tol)?;
            let q1 = load_projector(&q1, &tol)?;
            let p2 = load_projector(&p2, &tol)?;
            let q2 = load_projector(&q2, &tol)?;
            let verdict = sure_dominance(&rho, (&p1, &q1), (&p2, &q2))?;
            let iv1 = probability_interval(&rho, &p1, &q1)?;
            let iv2 = probability_interval(&rho, &p2, &q2)?;
            let payload = json!({
                "surely_more_probable": verdict.surely_more_probable,
                "margin": verdict.margin,
                "interval_1": interval_json(&iv1),
                "interval_2": interval_json(&iv2),
                "hausdorff_distance": interval_distance(&iv1, &iv2),
            });
            let value = wrap("compare", payload);
            Ok(ok(render(mode, &value, || {
                format!(
                    "pair 1 {} surely more probable than pair 2 (margin {:.3e})",
                    if verdict.surely_more_probable { "is" } else { "is not" },
                    verdict.margin
                )
            })))
        }
        Command::Axioms { p, q, samples, seed } => {
            let p = load_projector(&p, &tol)?;
            let q = load_projector(&q, &tol)?;
            let report = check_axioms(&p, &q, &[], samples, seed)?;
            let checks: Vec<Value> = report
                .checks()
                .iter()
                .map(|(name, c)| {
                    json!({ "name": name, "pass": c.pass, "worst_margin": c.worst_margin })
                })
                .collect();
            let payload = json!({
                "samples": samples,
                "seed": seed,
                "all_pass": report.all_pass,
                "checks": checks,
            });
            let value = wrap("axioms", payload);
            let pass = report.all_pass;
            Ok(graded(
                pass,
                render(mode, &value, || {
                    let mut s = String::new();
                    for (name, c) in report.checks() {
                        let _ = writeln!(
                            s,
                            "{:<22} {} (worst margin {:.3e})",
                            name,
                            if c.pass { "pass" } else { "FAIL" },
                            c.worst_margin
                        );
                    }
                    let _ = write!(s, "all: {}", if pass { "pass" } else { "FAIL" });
                    s
                }),
            ))
        }
        Command::Nogo { p_res, q_res } => {
            let p_res = load_resolution(&p_res, &tol)?;
            let q_res = load_resolution(&q_res, &tol)?;
            let cert = no_go_certificate(&p_res, &q_res, &tol)?;
            let payload = json!({
                "no_go": cert.no_go,
                "trace_deficit": cert.trace_deficit,
                "defect_spectrum": cert.defect_spectrum,
                "forced_zero": cert.forced_zero,
                "defect": matrix_json(cert.defect.matrix()),
            });
            let value = wrap("nogo", payload);
            Ok(ok(render(mode, &value, || {
                format!(
                    "no-go: {} (trace deficit {:.6}, {} forced-zero pairs)",
                    cert.no_go,
                    cert.trace_deficit,
                    cert.forced_zero.len()
                )
            })))
        }
        Command::Twotime {
            rho,
            p_res,
            q_res,
            order,
        } => {
            let order: TwoTimeOrder = order.parse()?;
            let rho = load_density(&rho, &tol)?;
            let p_res = load_resolution(&p_res, &tol)?;
            let q_res = load_resolution(&q_res, &tol)?;
            let table = two_time_table(&rho, &p_res, &q_res, order)?;
            let payload = serde_json::to_value(&table).expect("table serializes");
            let value = wrap("twotime", payload);
            Ok(ok(render(mode, &value, || {
                let mut s = String::new();
                for row in &table.values {
                    let cells: Vec<String> = row.iter().map(|v| format!("{v:.6}")).collect();
                    let _ = writeln!(s, "{}", cells.join("  "));
                }
                let _ = write!(s, "total {:.10}", table.total);
                s
            })))
        }
        Command::Classical { input } => {
            let raw: Value = read_json(&input)?;
            let measure: ImpreciseMeasure = if raw.get("distributions").is_some() {
                let credal: CredalSet =
                    serde_json::from_value(raw).map_err(|e| Failure {
                        code: "malformed",
                        message: format!("invalid credal set: {e}"),
                        path: Some(input.clone()),
                    })?;
                envelope(&credal).map_err(|e| Failure::from_core(e).at(&input))?
            } else {
                serde_json::from_value(raw).map_err(|e| Failure {
                    code: "malformed",
                    message: format!("invalid measure: {e}"),
                    path: Some(input.clone()),
                })?
            };
            let axioms = check_axioms_classical(&measure)
                .map_err(|e| Failure::from_core(e).at(&input))?;
            let derived = check_derived_inequalities(&measure)
                .map_err(|e| Failure::from_core(e).at(&input))?;
            let pass = axioms.all_pass && derived.all_pass;
            let payload = json!({
                "n": measure.n,
                "axioms": classical_report_json("axioms", &axioms),
                "derived": classical_report_json("derived", &derived),
                "all_pass": pass,
            });
            let value = wrap("classical", payload);
            Ok(graded(
                pass,
                render(mode, &value, || {
                    let mut s = String::new();
                    for report in [&axioms, &derived] {
                        for c in &report.checks {
                            let _ = writeln!(
                                s,
                                "{:<55} {}",
                                c.name,
                                if c.pass { "pass" } else { "FAIL" }
                            );
                        }
                    }
                    let _ = write!(s, "all: {}", if pass { "pass" } else { "FAIL" });
                    s
                }),
            ))
        }
        Command::Spin1 { reproduce: _ } => {
            let report = reproduce_tables()?;
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|r| json!({ "name": r.name, "deviation": r.max_deviation, "pass": r.pass }))
                .collect();
            let payload = json!({
                "rows": rows,
                "max_deviation": report.max_deviation,
                "all_pass": report.all_pass,
            });
            let value = wrap("spin1", payload);
            let pass = report.all_pass;
            Ok(graded(pass, render(mode, &value, || report.render_pretty())))
        }
    }
}
