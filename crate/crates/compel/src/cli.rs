//! Command-line entry point binding all modules: spec parsing, validation,
//! dispatch, deterministic reports.
//!
//! Exit codes: 0 = verdict computed (whatever the verdict), 2 = invalid
//! spec/input, 3 = internal invariant failure.

use crate::compact::CompactGroupSpec;
use crate::files;
use crate::lattice;
use crate::lie::SubspaceBasis;
use crate::report::{digest_args, digest_inputs, RunReport};
use crate::scalar::{self, rat_to_string};
use crate::sim;
use clap::{Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "compel", version, about = "Exact decision procedures for compact-element density and derived-subgroup finite generation")]
pub struct Cli {
    /// Output format for the run report
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Condition {
    B,
    C,
    D,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SeriesKind {
    Derived,
    #[value(name = "lower-central")]
    LowerCentral,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide almost-ellipticity of a compact-group spec
    Check {
        #[arg(long)]
        spec: PathBuf,
        /// Restrict the report to one condition; (b) coincides with (c) here
        #[arg(long, value_enum)]
        condition: Option<Condition>,
    },
    /// Compare the full-coset and fixed-subtorus verdicts componentwise
    Audit {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Sub-spec generated by one component
    Reduce {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        component: String,
    },
    /// Classify an algebra by its largest solvable quotient
    #[command(name = "classify-A")]
    ClassifyA {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Derived or lower central series of an algebra
    Series {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long, value_enum)]
        kind: SeriesKind,
    },
    /// Check the nilpotent-splice hypotheses and conclusion
    Splice {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        j: PathBuf,
        #[arg(long)]
        k: PathBuf,
    },
    /// Finite-generation criterion for a unit-modulus scalar
    Fg {
        #[arg(long)]
        z: String,
    },
    /// Hermite chain of the derived module up to a bound
    Chain {
        #[arg(long)]
        z: String,
        #[arg(long, default_value_t = 12)]
        chain_bound: usize,
    },
    /// Validate a spec or algebra file and report the first failure
    Validate {
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        algebra: Option<PathBuf>,
    },
    /// Numeric simulator commands
    #[command(subcommand)]
    Sim(SimCommand),
}

#[derive(Debug, Subcommand)]
pub enum SimCommand {
    /// Sampled ellipticity scan of a spec
    Ellipticity {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0.1)]
        delta: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Maximum circular gap of {nθ mod 1 : n ≤ N}
    Orbit {
        /// θ as `p/q`, a decimal, or one of sqrt2, sqrt3, sqrt5, golden, pi, e
        #[arg(long)]
        theta: String,
        #[arg(long)]
        n: usize,
    },
    /// Integer-relation rank estimate for {v − zⁿv : n ∈ F}
    #[command(name = "fg-witness")]
    FgWitness {
        /// z as `RE,IM` in doubles
        #[arg(long)]
        z: String,
        /// Comma-separated exponent list
        #[arg(long)]
        exponents: String,
        /// v as `RE,IM`; defaults to 1,0
        #[arg(long, default_value = "1,0")]
        v: String,
    },
}

/// Everything a command can fail with before producing a verdict.
#[derive(Debug)]
struct InvalidInput(String);

impl<E: std::fmt::Display> From<E> for InvalidInput {
    fn from(e: E) -> Self {
        InvalidInput(e.to_string())
    }
}

/// Parses argv and runs the command; returns the exit code and the report.
/// Invalid inputs yield exit 2 and a diagnostic report; panics are mapped to
/// exit 3 by `run`.
pub fn dispatch<I, T>(argv: I) -> (i32, Option<RunReport>, Format)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            // clap renders its own message (also for --help/--version).
            let _ = e.print();
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
            return (code, None, Format::Text);
        }
    };
    let format = cli.format;
    match execute(cli.command) {
        Ok(report) => (EXIT_OK, Some(report), format),
        Err(InvalidInput(msg)) => {
            let report = RunReport::new(
                "error",
                digest_args(&[]),
                serde_json::json!({ "ok": false, "diagnostic": msg }),
            );
            (EXIT_INVALID, Some(report), format)
        }
    }
}

/// Full CLI entry: prints the report and converts panics to exit 3.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| dispatch(argv)));
    match outcome {
        Ok((code, report, format)) => {
            if let Some(report) = report {
                match format {
                    Format::Text => print!("{}", report.to_text()),
                    Format::Json => println!("{}", report.to_json_string()),
                }
            }
            code
        }
        Err(_) => {
            eprintln!("internal invariant failure");
            EXIT_INTERNAL
        }
    }
}

fn load_validated_spec(path: &Path) -> Result<(CompactGroupSpec, Vec<String>), InvalidInput> {
    let spec = files::load_group_spec(path)?;
    let warnings = spec.validate()?;
    Ok((spec, warnings))
}

fn execute(command: Command) -> Result<RunReport, InvalidInput> {
    match command {
        Command::Check { spec, condition } => {
            let digest = digest_inputs(&[&spec]);
            let (spec, warnings) = load_validated_spec(&spec)?;
            let cond_c = spec.cond_c_check();
            let verdicts = match condition {
                Some(Condition::D) => {
                    let cond_d = spec.cond_d_check();
                    serde_json::json!({
                        "condition": "d",
                        "per_component": cond_d,
                        "almost_elliptic": cond_d.values().all(|&v| v),
                        "warnings": warnings,
                    })
                }
                Some(c) => serde_json::json!({
                    "condition": if c == Condition::B { "b" } else { "c" },
                    "per_component": cond_c,
                    "almost_elliptic": spec.almost_elliptic(),
                    "warnings": warnings,
                }),
                None => serde_json::json!({
                    "per_component": cond_c,
                    "almost_elliptic": spec.almost_elliptic(),
                    "warnings": warnings,
                }),
            };
            Ok(RunReport::new("check", digest, verdicts))
        }
        Command::Audit { spec } => {
            let digest = digest_inputs(&[&spec]);
            let (spec, _) = load_validated_spec(&spec)?;
            let audit = spec.equivalence_audit();
            let per: serde_json::Value = audit
                .per_component
                .iter()
                .map(|(label, c, d)| {
                    (label.clone(), serde_json::json!({ "condition_c": c, "condition_d": d }))
                })
                .collect::<serde_json::Map<String, serde_json::Value>>()
                .into();
            Ok(RunReport::new(
                "audit",
                digest,
                serde_json::json!({
                    "per_component": per,
                    "disagreements": audit.disagreements,
                    "agree": audit.disagreements.is_empty(),
                }),
            ))
        }
        Command::Reduce { spec, component } => {
            let digest = digest_inputs(&[&spec]);
            let (spec, _) = load_validated_spec(&spec)?;
            let reduced = spec.monothetic_reduction(&component)?;
            Ok(RunReport::new(
                "reduce",
                digest,
                serde_json::json!({
                    "component": component,
                    "subgroup_order": reduced.components.len(),
                    "almost_elliptic": reduced.almost_elliptic(),
                    "spec": files::spec_to_json(&reduced),
                }),
            ))
        }
        Command::ClassifyA { algebra } => {
            let digest = digest_inputs(&[&algebra]);
            let a = files::load_algebra(&algebra)?;
            a.validate()?;
            let report = a.classify();
            Ok(RunReport::new(
                "classify-A",
                digest,
                serde_json::json!({
                    "verdict": report.verdict,
                    "perfect_core_dim": report.perfect_core.rank(),
                    "quotient_nilpotent": report.quotient_nilpotent,
                    "solvable": a.is_solvable(),
                    "nilpotent": a.is_nilpotent(),
                }),
            ))
        }
        Command::Series { algebra, kind } => {
            let digest = digest_inputs(&[&algebra]);
            let a = files::load_algebra(&algebra)?;
            a.validate()?;
            let terms = match kind {
                SeriesKind::Derived => a.derived_series(),
                SeriesKind::LowerCentral => a.lower_central_series(),
            };
            let dims: Vec<usize> = terms.iter().map(|t| t.rank()).collect();
            let bases: Vec<Vec<Vec<String>>> = terms
                .iter()
                .map(|t| {
                    t.rows
                        .iter()
                        .map(|row| row.iter().map(rat_to_string).collect())
                        .collect()
                })
                .collect();
            Ok(RunReport::new(
                "series",
                digest,
                serde_json::json!({
                    "kind": match kind {
                        SeriesKind::Derived => "derived",
                        SeriesKind::LowerCentral => "lower-central",
                    },
                    "dims": dims,
                    "terminates_at_zero": terms.last().map(|t| t.is_zero()).unwrap_or(false),
                    "bases": bases,
                }),
            ))
        }
        Command::Splice { algebra, j, k } => {
            let digest = digest_inputs(&[&algebra, &j, &k]);
            let a = files::load_algebra(&algebra)?;
            a.validate()?;
            let j_rows = files::load_generators(&j)?;
            let k_rows = files::load_generators(&k)?;
            let j_sub = SubspaceBasis::from_vectors(a.dim, j_rows);
            let k_sub = SubspaceBasis::from_vectors(a.dim, k_rows);
            let outcome = a.splice_check(&j_sub, &k_sub)?;
            Ok(RunReport::new(
                "splice",
                digest,
                serde_json::json!({
                    "hypotheses_hold": outcome.hypotheses_hold,
                    "conclusion_holds": outcome.conclusion_holds,
                }),
            ))
        }
        Command::Fg { z } => {
            let digest = digest_args(&[&z]);
            let scalar = scalar::parse_scalar(&z)?;
            scalar.validate()?;
            let fg = lattice::fg_derived_criterion(&scalar)?;
            let minpoly = scalar.minpoly();
            let root_of_unity = scalar::is_root_of_unity(&scalar)?;
            Ok(RunReport::new(
                "fg",
                digest,
                serde_json::json!({
                    "fg": fg,
                    "minpoly": minpoly.to_display_string(),
                    "algebraic_integer": scalar::is_algebraic_integer(&scalar),
                    "root_of_unity": root_of_unity,
                }),
            ))
        }
        Command::Chain { z, chain_bound } => {
            let digest = digest_args(&[&z, &chain_bound.to_string()]);
            let scalar = scalar::parse_scalar(&z)?;
            scalar.validate()?;
            let comp = lattice::derived_module_chain(&scalar, chain_bound)?;
            let fg = lattice::fg_derived_criterion(&scalar)?;
            let mut verdicts = files::chain_report_to_json(&comp.report);
            verdicts["fg_criterion"] = serde_json::json!(fg);
            verdicts["bound"] = serde_json::json!(chain_bound);
            Ok(RunReport::new("chain", digest, verdicts))
        }
        Command::Validate { spec, algebra } => {
            let (path, verdicts) = match (&spec, &algebra) {
                (Some(p), None) => {
                    let loaded = files::load_group_spec(p)?;
                    let warnings = loaded.validate()?;
                    (p.clone(), serde_json::json!({ "ok": true, "warnings": warnings }))
                }
                (None, Some(p)) => {
                    let a = files::load_algebra(p)?;
                    a.validate()?;
                    (p.clone(), serde_json::json!({ "ok": true, "warnings": [] }))
                }
                _ => {
                    return Err(InvalidInput(
                        "validate needs exactly one of --spec or --algebra".to_string(),
                    ))
                }
            };
            Ok(RunReport::new("validate", digest_inputs(&[&path]), verdicts))
        }
        Command::Sim(sim_cmd) => execute_sim(sim_cmd),
    }
}

fn execute_sim(command: SimCommand) -> Result<RunReport, InvalidInput> {
    match command {
        SimCommand::Ellipticity { spec, samples, delta, seed } => {
            let digest = digest_inputs(&[&spec]);
            let (spec, _) = load_validated_spec(&spec)?;
            let sim_spec = sim::SimSpec::from_spec(&spec)?;
            let config = sim::SimConfig { samples, delta, seed, ..Default::default() };
            let report = sim_spec.empirical_ellipticity(&config)?;
            let witness = report.witness.as_ref().map(|w| {
                serde_json::json!({
                    "v": w.v,
                    "component": report.witness_component,
                    "angles": w.angles,
                })
            });
            Ok(RunReport::new(
                "sim ellipticity",
                digest,
                serde_json::json!({
                    "verdict": report.verdict,
                    "max_distance": report.max_distance,
                    "witness": witness,
                    "samples": report.samples,
                    "symbolic_almost_elliptic": spec.almost_elliptic(),
                }),
            )
            .with_seed(seed))
        }
        SimCommand::Orbit { theta, n } => {
            let digest = digest_args(&[&theta, &n.to_string()]);
            let value = parse_theta(&theta)?;
            let gap = sim::orbit_gap(value, n);
            Ok(RunReport::new(
                "sim orbit",
                digest,
                serde_json::json!({ "theta": theta, "resolved_theta": value, "n": n, "max_gap": gap }),
            ))
        }
        SimCommand::FgWitness { z, exponents, v } => {
            let digest = digest_args(&[&z, &exponents, &v]);
            let zc = parse_complex_pair(&z)?;
            let vc = parse_complex_pair(&v)?;
            let exps: Result<Vec<i64>, _> =
                exponents.split(',').map(|s| s.trim().parse::<i64>()).collect();
            let exps = exps.map_err(|e| InvalidInput(format!("bad exponent list: {e}")))?;
            let report = sim::fg_dense_witness(zc, vc, &exps)?;
            Ok(RunReport::new(
                "sim fg-witness",
                digest,
                serde_json::json!({
                    "q_rank_estimate": report.q_rank_estimate,
                    "discrete": report.discrete,
                    "invariant_line": report.invariant_line,
                    "relations_found": report.relations_found,
                }),
            ))
        }
    }
}

fn parse_complex_pair(s: &str) -> Result<Complex64, InvalidInput> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err(InvalidInput(format!("expected RE,IM, got {s}")));
    }
    let re: f64 = parts[0].trim().parse().map_err(|e| InvalidInput(format!("{e}")))?;
    let im: f64 = parts[1].trim().parse().map_err(|e| InvalidInput(format!("{e}")))?;
    Ok(Complex64::new(re, im))
}

fn parse_theta(s: &str) -> Result<f64, InvalidInput> {
    let t = s.trim();
    match t {
        "sqrt2" => return Ok(2.0f64.sqrt()),
        "sqrt3" => return Ok(3.0f64.sqrt()),
        "sqrt5" => return Ok(5.0f64.sqrt()),
        "golden" => return Ok((1.0 + 5.0f64.sqrt()) / 2.0),
        "pi" => return Ok(std::f64::consts::PI),
        "e" => return Ok(std::f64::consts::E),
        _ => {}
    }
    if t.contains('/') {
        let r = scalar::parse_rational(t)?;
        use num_traits::ToPrimitive;
        return r.to_f64().ok_or_else(|| InvalidInput("theta out of range".into()));
    }
    t.parse::<f64>().map_err(|e| InvalidInput(format!("bad theta: {e}")))
}
