//! The `newcomb` command-line tool.
//!
//! Subcommands: `analyze`, `sweep`, `impossibility`, `simulate`, `verify`.
//! Exit codes: 0 success, 1 usage error, 2 parse or validation error,
//! 3 verification failure.

pub mod scenario_file;
pub mod sweep;

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use newcomb::montecarlo::{compare_to_exact, simulate_with, SimConfig, DEFAULT_CHUNKS, DEFAULT_FLAG_THRESHOLD};
use newcomb::verify::{self, Fault, VerifyConfig};
use newcomb::{
    bad_decision_probability, build_adversarial_game, check_delta_omniscience, coarsen, posterior_box_full,
    preferred_decision, scenario_summary, variance_decomposition, Decision, Rational,
};

pub use scenario_file::{LoadError, ScenarioFile};
pub use sweep::{run_sweep, write_csv, SweepGrid, SweepRow};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "newcomb", version, about = "Exact counterfactual analysis of the generalized Newcomb problem")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    s.parse().map_err(|e: newcomb::ParseRationalError| e.to_string())
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the exact counterfactual analysis of a scenario file.
    Analyze {
        scenario: PathBuf,
        /// Also check delta-omniscience at this delta.
        #[arg(long, value_parser = parse_rational)]
        delta: Option<Rational>,
        /// Write the parsed scenario back out in canonical form ("-" for stdout).
        #[arg(long, value_name = "PATH")]
        emit_scenario: Option<PathBuf>,
    },
    /// Emit a CSV row per (p, spread, r/R) grid point of two-point models.
    Sweep {
        #[arg(long = "p", value_delimiter = ',', required = true, value_parser = parse_rational)]
        ps: Vec<Rational>,
        #[arg(long = "spread", value_delimiter = ',', required = true, value_parser = parse_rational)]
        spreads: Vec<Rational>,
        #[arg(long = "ratio", value_delimiter = ',', required = true, value_parser = parse_rational)]
        ratios: Vec<Rational>,
        /// Large reward R; each row uses r = ratio * R.
        #[arg(long, default_value = "1", value_parser = parse_rational)]
        large_reward: Rational,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Build the adversarial n-box game for a belief vector.
    Impossibility {
        #[arg(long, value_delimiter = ',', required = true, value_parser = parse_rational)]
        beliefs: Vec<Rational>,
    },
    /// Monte Carlo simulation compared against the exact values.
    Simulate {
        scenario: PathBuf,
        #[arg(long, default_value_t = 1_000_000)]
        samples: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CHUNKS)]
        chunks: u32,
        /// Flag deviations above this many standard errors.
        #[arg(long, default_value_t = DEFAULT_FLAG_THRESHOLD)]
        flag_threshold: f64,
    },
    /// Run the exact property suite; exit 3 on any failure.
    Verify {
        #[arg(long, default_value_t = 1000)]
        instances: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Corrupt one closed form to check that the suite notices.
        #[arg(long, value_name = "NAME")]
        inject_fault: Option<Fault>,
    },
}

fn exact(x: &Rational) -> String {
    format!("{x} ({})", x.to_decimal())
}

struct Failure(i32, String);

impl<E: std::fmt::Display> From<E> for Failure
where
    E: Into<Box<dyn std::error::Error>>,
{
    fn from(e: E) -> Self {
        Failure(EXIT_INVALID, e.to_string())
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure(EXIT_INVALID, e.to_string())
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Analyze { scenario, delta, emit_scenario } => analyze(&scenario, delta, emit_scenario, out),
        Command::Sweep { ps, spreads, ratios, large_reward, output } => {
            if !large_reward.is_positive() {
                return Err(Failure(EXIT_INVALID, format!("large reward {large_reward} must be positive")));
            }
            let grid = SweepGrid::new(ps, spreads, ratios).map_err(|m| Failure(EXIT_INVALID, m))?;
            let rows = run_sweep(&grid, &large_reward);
            match output {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(io)?;
                    write_csv(&rows, file).map_err(|e| Failure(EXIT_INVALID, e.to_string()))?;
                }
                None => write_csv(&rows, &mut *out).map_err(|e| Failure(EXIT_INVALID, e.to_string()))?,
            }
            Ok(EXIT_OK)
        }
        Command::Impossibility { beliefs } => {
            let game = build_adversarial_game(&beliefs)?;
            let bad = bad_decision_probability(&game);
            let bound = game.bound();
            let rewards: Vec<String> = game.rewards().iter().map(Rational::to_string).collect();
            writeln!(out, "boxes: {}", game.n()).map_err(io)?;
            writeln!(out, "target box: {}", game.target_box()).map_err(io)?;
            writeln!(out, "rewards: {}", rewards.join(",")).map_err(io)?;
            writeln!(out, "bad-decision probability: {}", exact(&bad)).map_err(io)?;
            writeln!(out, "bound 1 - 1/n: {}", exact(&bound)).map_err(io)?;
            let verdict = if bad == bound { "holds with equality" } else { "holds" };
            writeln!(out, "bound check: {verdict}").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Simulate { scenario, samples, seed, chunks, flag_threshold } => {
            let file = ScenarioFile::load(&scenario)?;
            let s = &file.scenario;
            let report = simulate_with(s, &SimConfig { samples, seed, chunks })?;
            writeln!(out, "samples: {}", report.samples).map_err(io)?;
            writeln!(out, "seed: {}", report.seed).map_err(io)?;
            writeln!(out, "chunks: {}", report.chunks).map_err(io)?;
            writeln!(out, "generator: {}", report.generator).map_err(io)?;
            let c = report.cells;
            writeln!(
                out,
                "cells: onebox_full={} onebox_empty={} twobox_full={} twobox_empty={}",
                c.onebox_full, c.onebox_empty, c.twobox_full, c.twobox_empty
            )
            .map_err(io)?;
            writeln!(out).map_err(io)?;
            writeln!(out, "quantity,exact,exact_decimal,estimate,std_error,deviation_se,flagged").map_err(io)?;
            let mut flagged = 0;
            for row in compare_to_exact(&report, s, flag_threshold) {
                let opt = |v: Option<f64>| v.map_or("unavailable".to_owned(), |x| format!("{x:.6}"));
                writeln!(
                    out,
                    "{},{},{},{},{},{},{}",
                    row.quantity.name(),
                    row.exact.as_ref().map_or("undefined".to_owned(), Rational::to_string),
                    row.exact.as_ref().map_or("undefined".to_owned(), Rational::to_decimal),
                    opt(row.estimate.map(|e| e.value)),
                    opt(row.estimate.map(|e| e.std_error)),
                    opt(row.deviation),
                    row.flagged
                )
                .map_err(io)?;
                flagged += usize::from(row.flagged);
            }
            writeln!(out).map_err(io)?;
            writeln!(out, "flagged: {flagged} (threshold {flag_threshold} standard errors)").map_err(io)?;
            Ok(EXIT_OK)
        }
        Command::Verify { instances, seed, inject_fault } => {
            let report = verify::run(&VerifyConfig { instances, seed, fault: inject_fault });
            if let Some(f) = inject_fault {
                writeln!(out, "injected fault: {f}").map_err(io)?;
            }
            for check in &report.checks {
                writeln!(out, "{check}").map_err(io)?;
            }
            if report.passed() {
                writeln!(out, "all {} checks passed", report.checks.len()).map_err(io)?;
                Ok(EXIT_OK)
            } else {
                writeln!(out, "{} checks failed", report.failed().count()).map_err(io)?;
                Ok(EXIT_VERIFY_FAILED)
            }
        }
    }
}

fn analyze(
    path: &std::path::Path,
    delta: Option<Rational>,
    emit: Option<PathBuf>,
    out: &mut dyn Write,
) -> Result<i32, Failure> {
    let file = ScenarioFile::load(path)?;
    if let Some(target) = emit {
        let json = file.to_json();
        if target.as_os_str() == "-" {
            write!(out, "{json}").map_err(io)?;
        } else {
            fs::write(&target, json).map_err(io)?;
        }
    }

    let s = &file.scenario;
    let summary = scenario_summary(s)?;
    let ratio = s.reward_ratio();
    let post_one = posterior_box_full(s, Decision::OneBox)?;
    let post_two = posterior_box_full(s, Decision::TwoBox)?;
    let pref = preferred_decision(s)?;

    writeln!(out, "p: {}", exact(&summary.p)).map_err(io)?;
    writeln!(out, "sigma2: {}", exact(&summary.sigma2)).map_err(io)?;
    writeln!(out, "prior_box_full: {}", exact(&summary.prior_box_full)).map_err(io)?;
    writeln!(out, "threshold: {}", exact(&summary.threshold)).map_err(io)?;
    writeln!(out, "r_over_R: {}", exact(&ratio)).map_err(io)?;
    writeln!(out, "posterior_full_given_onebox: {}", exact(&post_one)).map_err(io)?;
    writeln!(out, "posterior_full_given_twobox: {}", exact(&post_two)).map_err(io)?;
    writeln!(out, "e_onebox: {}", exact(&pref.expected_onebox)).map_err(io)?;
    writeln!(out, "e_twobox: {}", exact(&pref.expected_twobox)).map_err(io)?;
    writeln!(out, "preference: {}", pref.choice).map_err(io)?;

    if let Some(r) = &file.refinement {
        let coarse = coarsen(r);
        let v = variance_decomposition(r);
        let coarse_support: Vec<String> =
            coarse.support().iter().map(|pt| format!("{}@{}", pt.omega, pt.weight)).collect();
        writeln!(out, "coarse_support: {}", coarse_support.join(",")).map_err(io)?;
        writeln!(out, "fine_var: {}", exact(&v.fine_var)).map_err(io)?;
        writeln!(out, "coarse_var: {}", exact(&v.coarse_var)).map_err(io)?;
        writeln!(out, "expected_conditional_var: {}", exact(&v.expected_conditional_var)).map_err(io)?;
    }

    if let Some(delta) = delta {
        let report = check_delta_omniscience(s.prediction(), &delta)?;
        writeln!(out, "delta: {}", exact(&report.delta)).map_err(io)?;
        writeln!(out, "delta_omniscient: {}", report.is_omniscient).map_err(io)?;
        writeln!(out, "variance_lower_bound: {}", exact(&report.variance_lower_bound)).map_err(io)?;
        writeln!(out, "actual_variance: {}", exact(&report.actual_variance)).map_err(io)?;
    }
    Ok(EXIT_OK)
}
