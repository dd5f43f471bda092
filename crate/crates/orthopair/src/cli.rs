//! Command-line front end: generate instances, extract γ, run suites.
//!
//! Exit codes are a stable contract: `0` pass/preserving, `1` fail/not
//! preserving, `2` invalid input, `3` inconclusive. Canonical output (the
//! default) contains no timestamps or durations, so identical flags and seed
//! produce byte-identical output; `--timings` opts into wall-clock fields.

use std::io::{Read as _, Write};

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::characterize::{decide_preserving_with, DecisionTolerances};
use crate::error::{Error, Result};
use crate::io::{central_to_dto, InstanceFile, OperatorDto, SuiteRunDto, VerdictDto};
use crate::operators::ModuleOperator;
use crate::subseed;
use crate::suites::{self, SuiteConfig};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "orthopair",
    about = "Orthogonality-preserving pairs on Hilbert C*-modules: generate instances, extract the central multiplier, run property suites",
    disable_help_subcommand = true
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a problem instance and write it as JSON.
    Gen(GenArgs),
    /// Extract γ from an instance and decide preservation.
    Extract(ExtractArgs),
    /// Run property suites ("all" or a list of names).
    Suite(SuiteArgs),
}

#[derive(Args, Debug)]
struct GenArgs {
    /// Block sizes of the algebra, comma separated.
    #[arg(long, value_delimiter = ',', default_value = "3,2")]
    blocks: Vec<usize>,
    /// Module rank n of Aⁿ.
    #[arg(long, default_value_t = 3)]
    rank: usize,
    /// preserving | corrupted | random | perturbed
    #[arg(long, default_value = "preserving")]
    kind: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Relative perturbation of T (perturbed kind only).
    #[arg(long)]
    theta1: Option<f64>,
    /// Relative perturbation of S (perturbed kind only).
    #[arg(long)]
    theta2: Option<f64>,
    /// Output path, or "-" for stdout.
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Args, Debug)]
struct ExtractArgs {
    /// Instance file, or "-" for stdin.
    instance: String,
    /// text | structured
    #[arg(long, default_value = "text")]
    format: String,
    /// Override the characterization tolerance scale.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args, Debug)]
struct SuiteArgs {
    /// Suite names, or "all".
    #[arg(required = true)]
    names: Vec<String>,
    #[arg(long, value_delimiter = ',', default_value = "3,2")]
    blocks: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    rank: usize,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 100)]
    cases: usize,
    #[arg(long, default_value_t = 0.1)]
    theta1: f64,
    #[arg(long, default_value_t = 0.1)]
    theta2: f64,
    /// text | structured
    #[arg(long, default_value = "text")]
    format: String,
    /// Include wall-clock timings (non-canonical output).
    #[arg(long, default_value_t = false)]
    timings: bool,
}

/// Run the CLI on explicit arguments, writing to the given streams.
/// Returns the process exit code.
pub fn run<I, T, W, E>(args: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
    W: Write,
    E: Write,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // help/version are informational, not invalid input
            if matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) {
                let _ = write!(out, "{e}");
                return EXIT_PASS;
            }
            let _ = write!(err, "{e}");
            return EXIT_INVALID;
        }
    };
    let outcome = match cli.command {
        Command::Gen(args) => cmd_gen(&args, out),
        Command::Extract(args) => cmd_extract(&args, out),
        Command::Suite(args) => cmd_suite(&args, out),
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::UnknownSuite { .. }
                | Error::Malformed(_)
                | Error::InvalidDescriptor(_)
                | Error::InvalidTheta(_)
                | Error::Io(_)
                | Error::Json(_) => EXIT_INVALID,
                _ => EXIT_INVALID,
            }
        }
    }
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

fn cmd_gen<W: Write>(args: &GenArgs, out: &mut W) -> Result<i32> {
    let config = SuiteConfig {
        blocks: args.blocks.clone(),
        rank: args.rank,
        seed: args.seed,
        ..SuiteConfig::default()
    };
    let space = config.space()?;
    let mut rng = ChaCha12Rng::seed_from_u64(subseed(args.seed, "gen", 0));

    let mut theta1 = None;
    let mut theta2 = None;
    let (t, s, gamma) = match args.kind.as_str() {
        "preserving" => {
            let pp = suites::preserving_pair(&space, &mut rng);
            (pp.t, pp.s, Some(pp.gamma))
        }
        "corrupted" => {
            let (t, s) = suites::corrupted_pair(&space, &mut rng)?;
            (t, s, None)
        }
        "random" => {
            let t = ModuleOperator::random_gaussian(&space, &space, &mut rng)?;
            let s = ModuleOperator::random_gaussian(&space, &space, &mut rng)?;
            (t, s, None)
        }
        "perturbed" => {
            let th1 = args.theta1.unwrap_or(0.1);
            let th2 = args.theta2.unwrap_or(0.1);
            let pp = suites::perturbed_pair(&space, th1, th2, &mut rng)?;
            theta1 = Some(th1);
            theta2 = Some(th2);
            (pp.t, pp.s, Some(pp.gamma))
        }
        other => {
            return Err(Error::Malformed(format!(
            "unknown instance kind '{other}' (expected preserving, corrupted, random, perturbed)"
        )))
        }
    };

    let instance = InstanceFile {
        blocks: args.blocks.clone(),
        rank: args.rank,
        seed: args.seed,
        kind: args.kind.clone(),
        theta1,
        theta2,
        gamma: gamma.as_ref().map(central_to_dto),
        t: Some(OperatorDto::from_operator(&t)),
        s: Some(OperatorDto::from_operator(&s)),
    };
    let json = instance.to_json();
    if args.out == "-" {
        out.write_all(json.as_bytes())?;
    } else {
        std::fs::write(&args.out, json)?;
    }
    Ok(EXIT_PASS)
}

// ---------------------------------------------------------------------------
// extract
// ---------------------------------------------------------------------------

fn read_instance(path: &str) -> Result<InstanceFile> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        buf
    } else {
        std::fs::read_to_string(path)?
    };
    InstanceFile::from_json(&text)
}

fn cmd_extract<W: Write>(args: &ExtractArgs, out: &mut W) -> Result<i32> {
    if args.format != "text" && args.format != "structured" {
        return Err(Error::Malformed(format!(
            "unknown format '{}'",
            args.format
        )));
    }
    let instance = read_instance(&args.instance)?;
    let (t, s) = instance.operators()?;
    let tols = match args.tol {
        Some(tol) => DecisionTolerances {
            char_tol: tol,
            witness_ratio: tol,
        },
        None => DecisionTolerances::default(),
    };
    let verdict = decide_preserving_with(&t, &s, subseed(instance.seed, "decide", 0), &tols)?;
    let dto = VerdictDto::from_verdict(&verdict);
    if args.format == "structured" {
        out.write_all(dto.to_json().as_bytes())?;
    } else {
        write_verdict_text(&dto, out)?;
    }
    Ok(dto.exit_code())
}

fn fmt_complex(c: &[f64; 2]) -> String {
    format!("[{}, {}]", serde_json::json!(c[0]), serde_json::json!(c[1]))
}

fn write_verdict_text<W: Write>(dto: &VerdictDto, out: &mut W) -> Result<()> {
    writeln!(out, "verdict: {}", dto.verdict)?;
    if let Some(gamma) = &dto.gamma {
        for (i, g) in gamma.iter().enumerate() {
            writeln!(out, "gamma[{i}] = {}", fmt_complex(g))?;
        }
    }
    if let Some(residual) = dto.residual {
        writeln!(out, "residual = {}", serde_json::json!(residual))?;
    }
    if let Some(tolerance) = dto.tolerance {
        writeln!(out, "tolerance = {}", serde_json::json!(tolerance))?;
    }
    if let Some(per) = &dto.per_projection_gammas {
        for p in per {
            writeln!(
                out,
                "projection block={} {} gamma = {}",
                p.block,
                p.projection,
                fmt_complex(&p.gamma)
            )?;
        }
    }
    if let Some(w) = &dto.witness {
        writeln!(
            out,
            "witness orthogonality = {}",
            serde_json::json!(w.orthogonality)
        )?;
        writeln!(
            out,
            "witness violation = {}",
            serde_json::json!(w.violation)
        )?;
        writeln!(
            out,
            "witness threshold = {}",
            serde_json::json!(w.threshold)
        )?;
        writeln!(out, "witness x = {}", serde_json::to_string(&w.x)?)?;
        writeln!(out, "witness y = {}", serde_json::to_string(&w.y)?)?;
    }
    if let Some(attempts) = dto.attempts {
        writeln!(out, "witness search attempts = {attempts}")?;
    }
    Ok(())
}

// ---------------------------------------------------------------------------
// suite
// ---------------------------------------------------------------------------

fn cmd_suite<W: Write>(args: &SuiteArgs, out: &mut W) -> Result<i32> {
    if args.format != "text" && args.format != "structured" {
        return Err(Error::Malformed(format!(
            "unknown format '{}'",
            args.format
        )));
    }
    let names: Vec<String> = if args.names.len() == 1 && args.names[0] == "all" {
        suites::all_suite_names()
            .iter()
            .map(|s| s.to_string())
            .collect()
    } else {
        args.names.clone()
    };
    for name in &names {
        if !suites::all_suite_names().contains(&name.as_str()) {
            return Err(Error::UnknownSuite {
                name: name.clone(),
                available: suites::all_suite_names().join(", "),
            });
        }
    }
    let config = SuiteConfig {
        blocks: args.blocks.clone(),
        rank: args.rank,
        seed: args.seed,
        cases: args.cases,
        theta1: args.theta1,
        theta2: args.theta2,
    };
    let mut reports = Vec::with_capacity(names.len());
    for name in &names {
        reports.push(suites::run_suite(name, &config)?);
    }
    let all_passed = reports.iter().all(|r| r.passed());

    if args.format == "structured" {
        let dto = SuiteRunDto {
            reports: reports.iter().map(|r| r.to_dto(args.timings)).collect(),
            all_passed,
        };
        out.write_all(dto.to_json().as_bytes())?;
    } else {
        for report in &reports {
            let status = if report.passed() { "PASS" } else { "FAIL" };
            let timing = if args.timings {
                format!(" ({:.1} ms)", report.wall_ms)
            } else {
                String::new()
            };
            writeln!(
                out,
                "suite {}: {} (cases={}, failures={}){}",
                report.suite,
                status,
                report.cases_run,
                report.failures.len(),
                timing
            )?;
            for note in &report.notes {
                writeln!(out, "  note: {note}")?;
            }
            for failure in &report.failures {
                writeln!(
                    out,
                    "  FAIL {}: measured {} > threshold {}",
                    failure.case,
                    serde_json::json!(failure.measured),
                    serde_json::json!(failure.threshold)
                )?;
                writeln!(out, "    inputs: {}", failure.inputs)?;
            }
        }
        let passed = reports.iter().filter(|r| r.passed()).count();
        if all_passed {
            writeln!(out, "all suites passed ({passed}/{})", reports.len())?;
        } else {
            writeln!(out, "SUITE FAILURES ({passed}/{} passed)", reports.len())?;
        }
    }
    Ok(if all_passed { EXIT_PASS } else { EXIT_FAIL })
}

// ---------------------------------------------------------------------------
// tests
// ---------------------------------------------------------------------------
