//! `selfcontract`: run first-order methods from a JSON problem file and
//! certify whether their trajectories are self-contracted.
//!
//! Exit codes: 0 success, 1 refuted (`check`) or modes disagree
//! (`compare-averaged`), 2 configuration or input error, 3 runtime error.

mod config;
mod svg;

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use config::{AlgorithmSpec, ConfigError, Overrides, Problem};
use selfcontract::algorithms::{
    run_alternating_projections, run_averaged_projections, run_cyclic_projections,
    run_gradient_descent, run_prox_grad, run_prox_grad_backtracking, run_proximal_point,
    AveragedMode, GradientStepRule,
};
use selfcontract::analysis::{
    audit_decrease_lemma, check_self_contracted, report, SelfContractionVerdict, TrajectoryReport,
    DEFAULT_TOL,
};
use selfcontract::Trajectory;

const AUDIT_SAMPLES: usize = 100;
const MODE_TOLERANCE: f64 = 1e-10;

#[derive(Debug, Parser)]
#[command(
    name = "selfcontract",
    version,
    about = "Self-contraction checks for first-order methods"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Flags,
}

#[derive(Debug, Args)]
struct Flags {
    /// Relative tolerance of the self-contraction verdict.
    #[arg(long, global = true, default_value_t = DEFAULT_TOL)]
    tol: f64,
    /// Overrides the config seed (used by the audit sampler).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Overrides the config iteration cap.
    #[arg(long, global = true)]
    max_iters: Option<usize>,
    /// Overrides the config step-length tolerance.
    #[arg(long, global = true)]
    step_tol: Option<f64>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run the configured algorithm, writing a trajectory CSV and a report JSON.
    Run {
        config: PathBuf,
        trajectory: PathBuf,
        report: PathBuf,
    },
    /// Check a trajectory CSV and print the verdict as JSON.
    Check { trajectory: PathBuf },
    /// Run all three averaged-projection modes on the config's set family.
    CompareAveraged { config: PathBuf },
    /// Draw a planar trajectory CSV as SVG.
    Plot { trajectory: PathBuf, svg: PathBuf },
}

#[derive(Debug)]
enum Failure {
    Refuted,
    Input(String),
    Runtime(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Refuted => 1,
            Failure::Input(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Input(e.0)
    }
}

type Outcome = Result<(), Failure>;

fn runtime(e: impl std::fmt::Display) -> Failure {
    Failure::Runtime(e.to_string())
}

fn input(e: impl std::fmt::Display) -> Failure {
    Failure::Input(e.to_string())
}

#[derive(Debug, Serialize)]
struct RunReport {
    #[serde(flatten)]
    report: TrajectoryReport,
    tolerance: f64,
    seed: u64,
    algorithm: String,
    iterations: usize,
    decrease_audit_max_gap: Option<f64>,
    y_self_contraction: Option<SelfContractionVerdict>,
}

fn load(path: &Path, flags: &Flags) -> Result<(config::ProblemConfig, Overrides), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    let overrides = Overrides {
        seed: flags.seed,
        max_iters: flags.max_iters,
        step_tol: flags.step_tol,
    };
    Ok((config::parse(&text)?, overrides))
}

/// Runs the algorithm; the second trajectory is the y-sequence of
/// alternating projections.
fn execute(p: &Problem) -> selfcontract::Result<(Trajectory, Option<Trajectory>)> {
    let single = |t| Ok((t, None));
    match &p.algorithm {
        AlgorithmSpec::ProxGrad {
            schedule,
            enforce_guarantee,
        } => single(run_prox_grad(
            &p.pair().expect("validated"),
            &p.x0,
            schedule,
            &p.stop,
            *enforce_guarantee,
        )?),
        AlgorithmSpec::ProxGradBacktracking { backtrack } => single(run_prox_grad_backtracking(
            &p.pair().expect("validated"),
            &p.x0,
            backtrack,
            &p.stop,
        )?),
        AlgorithmSpec::ProximalPoint { schedule } => single(run_proximal_point(
            p.g.clone().expect("validated"),
            &p.x0,
            schedule,
            &p.stop,
        )?),
        AlgorithmSpec::GradientDescent {
            schedule,
            backtrack,
            enforce_guarantee,
        } => {
            let rule = match (schedule, backtrack) {
                (Some(schedule), _) => GradientStepRule::Schedule {
                    schedule: schedule.clone(),
                    enforce_guarantee: *enforce_guarantee,
                },
                (None, Some(b)) => GradientStepRule::Backtracking(*b),
                (None, None) => unreachable!("validated"),
            };
            single(run_gradient_descent(
                p.f.clone().expect("validated"),
                &p.x0,
                &rule,
                &p.stop,
            )?)
        }
        AlgorithmSpec::AlternatingProjections => {
            let (xs, ys) =
                run_alternating_projections(p.sets[0].clone(), p.sets[1].clone(), &p.x0, &p.stop)?;
            Ok((xs, Some(ys)))
        }
        AlgorithmSpec::AveragedProjections { mode } => {
            single(run_averaged_projections(&p.sets, &p.x0, &p.stop, *mode)?)
        }
        AlgorithmSpec::CyclicProjections => {
            single(run_cyclic_projections(&p.sets, &p.x0, &p.stop)?)
        }
    }
}

fn write_csv(t: &Trajectory, path: &Path) -> Outcome {
    let file = File::create(path).map_err(|e| runtime(format!("{}: {e}", path.display())))?;
    let mut w = BufWriter::new(file);
    t.write_csv(&mut w).map_err(runtime)?;
    w.flush().map_err(runtime)
}

/// `traj.csv` becomes `traj.y.csv`.
fn y_path(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    let ext = path
        .extension()
        .map(|e| e.to_string_lossy().into_owned())
        .unwrap_or_else(|| "csv".into());
    path.with_file_name(format!("{stem}.y.{ext}"))
}

fn cmd_run(config: &Path, out_csv: &Path, out_report: &Path, flags: &Flags) -> Outcome {
    let (cfg, overrides) = load(config, flags)?;
    let problem = cfg.build(overrides)?;
    let (t, ys) = execute(&problem).map_err(runtime)?;
    write_csv(&t, out_csv)?;
    if let Some(ys) = &ys {
        write_csv(ys, &y_path(out_csv))?;
    }
    let decrease_audit_max_gap = match problem.pair() {
        Some(pair) => {
            Some(audit_decrease_lemma(&pair, &t, AUDIT_SAMPLES, problem.seed).map_err(runtime)?)
        }
        None => None,
    }
    .filter(|g| g.is_finite());
    let body = RunReport {
        report: report(&t, problem.solution_hint.as_ref(), flags.tol).map_err(runtime)?,
        tolerance: flags.tol,
        seed: problem.seed,
        algorithm: t.label().to_string(),
        iterations: t.len() - 1,
        decrease_audit_max_gap,
        y_self_contraction: ys
            .as_ref()
            .map(|y| check_self_contracted(y, flags.tol))
            .transpose()
            .map_err(runtime)?,
    };
    let json = serde_json::to_string_pretty(&body).map_err(runtime)?;
    fs::write(out_report, json + "\n")
        .map_err(|e| runtime(format!("{}: {e}", out_report.display())))
}

fn read_trajectory(path: &Path) -> Result<Trajectory, Failure> {
    let file = File::open(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    Trajectory::read_csv(file).map_err(input)
}

fn cmd_check(path: &Path, flags: &Flags) -> Outcome {
    let t = read_trajectory(path)?;
    let verdict = check_self_contracted(&t, flags.tol).map_err(input)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&verdict).map_err(runtime)?
    );
    if verdict.is_self_contracted {
        Ok(())
    } else {
        Err(Failure::Refuted)
    }
}

#[derive(Debug, Serialize)]
struct Comparison {
    modes: Vec<&'static str>,
    iterates: Vec<usize>,
    max_discrepancy: f64,
    tolerance: f64,
    agree: bool,
}

fn cmd_compare_averaged(config: &Path, flags: &Flags) -> Outcome {
    let (cfg, overrides) = load(config, flags)?;
    let (sets, x0, stop) = cfg.build_sets(overrides)?;
    let runs = AveragedMode::ALL
        .iter()
        .map(|&m| run_averaged_projections(&sets, &x0, &stop, m))
        .collect::<selfcontract::Result<Vec<_>>>()
        .map_err(runtime)?;
    let len = runs.iter().map(Trajectory::len).max().unwrap_or(0);
    let at = |t: &Trajectory, k: usize| t.points()[k.min(t.len() - 1)].clone();
    let mut max_discrepancy = 0.0f64;
    for k in 0..len {
        let base = at(&runs[0], k);
        for other in &runs[1..] {
            let p = at(other, k);
            for (a, b) in base.coords().iter().zip(p.coords()) {
                max_discrepancy = max_discrepancy.max((a - b).abs());
            }
        }
    }
    let body = Comparison {
        modes: AveragedMode::ALL.iter().map(|m| m.name()).collect(),
        iterates: runs.iter().map(Trajectory::len).collect(),
        max_discrepancy,
        tolerance: MODE_TOLERANCE,
        agree: max_discrepancy <= MODE_TOLERANCE,
    };
    println!("{}", serde_json::to_string_pretty(&body).map_err(runtime)?);
    if body.agree {
        Ok(())
    } else {
        Err(Failure::Refuted)
    }
}

fn cmd_plot(path: &Path, out: &Path) -> Outcome {
    let t = read_trajectory(path)?;
    let svg = svg::render(&t).ok_or_else(|| {
        Failure::Input(format!(
            "plot needs a 2-dimensional trajectory, found dimension {}",
            t.dim()
        ))
    })?;
    fs::write(out, svg).map_err(|e| runtime(format!("{}: {e}", out.display())))
}

fn dispatch(cli: &Cli) -> Outcome {
    let flags = &cli.flags;
    if !(flags.tol >= 0.0 && flags.tol.is_finite()) {
        return Err(Failure::Input(format!(
            "--tol must be a nonnegative number, found {}",
            flags.tol
        )));
    }
    match &cli.command {
        Command::Run {
            config,
            trajectory,
            report,
        } => cmd_run(config, trajectory, report, flags),
        Command::Check { trajectory } => cmd_check(trajectory, flags),
        Command::CompareAveraged { config } => cmd_compare_averaged(config, flags),
        Command::Plot { trajectory, svg } => cmd_plot(trajectory, svg),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            if let Failure::Input(msg) | Failure::Runtime(msg) = &failure {
                eprintln!("selfcontract: {msg}");
            }
            ExitCode::from(failure.code())
        }
    }
}
