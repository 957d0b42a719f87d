//! Command line interface.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use super::analysis::{tail_torque_decomposition, thrust_decomposition, wavelength};
use super::config::SweepConfig;
use super::io::{read_trajectory, recompute_forces};
use super::report::emit_reports;
use super::sweep::{run_sweep, CaseOutcome, CaseResult, ResultStore};
use crate::error::{Error, Result};
use crate::hydro::HydroModel;
use crate::morphology::StiffnessLevel;
use crate::rollout::reward;

#[derive(Debug, Parser)]
#[command(
    name = "mubot",
    version,
    about = "Swimming simulation and gait optimization for modular fish robots"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train and analyze a single case.
    Run(RunArgs),
    /// Train and analyze a grid of cases.
    Sweep(SweepArgs),
    /// Analyze a saved trajectory.
    Analyze(AnalyzeArgs),
    /// Regenerate report files from a results directory.
    Report(ReportArgs),
}

/// Settings shared by `run` and `sweep`; flags override the config file.
#[derive(Debug, Args)]
pub struct TrainingArgs {
    /// TOML file with [sim], [ephe], [fluid], [morphology] and [grid] sections.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub sessions: Option<usize>,
    #[arg(long)]
    pub episodes: Option<usize>,
    #[arg(long)]
    pub rollouts: Option<usize>,
    #[arg(long)]
    pub elite: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    /// Worker threads.
    #[arg(long, default_value_t = 1)]
    pub jobs: usize,
    /// Results directory.
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
}

impl TrainingArgs {
    fn config(&self) -> Result<SweepConfig> {
        let mut cfg = match &self.config {
            Some(p) => SweepConfig::load(p)?,
            None => SweepConfig::default(),
        };
        if let Some(v) = self.seed {
            cfg.ephe.seed = v;
        }
        if let Some(v) = self.sessions {
            cfg.ephe.sessions = v;
        }
        if let Some(v) = self.episodes {
            cfg.ephe.episodes = v;
        }
        if let Some(v) = self.rollouts {
            cfg.ephe.rollouts = v;
        }
        if let Some(v) = self.elite {
            cfg.ephe.elite = v;
        }
        if let Some(v) = self.dt {
            cfg.sim.dt = v;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[arg(long)]
    pub noa: usize,
    #[arg(long, default_value = "high")]
    pub stiffness: StiffnessLevel,
    #[arg(long, default_value = "HM4")]
    pub hm: HydroModel,
    #[command(flatten)]
    pub training: TrainingArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// `full`, or a filter such as `noa=2,4;stiffness=high;hm=HM3,HM4`.
    #[arg(long, default_value = "full")]
    pub grid: String,
    #[command(flatten)]
    pub training: TrainingArgs,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Trajectory CSV with its `.meta.json` sidecar.
    #[arg(long)]
    pub traj: PathBuf,
    #[arg(long)]
    pub wavelength: bool,
    /// Thrust by segment and mechanism, plus the fin-joint torque balance.
    #[arg(long)]
    pub thrust: bool,
}

#[derive(Debug, Args)]
pub struct ReportArgs {
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
}

fn finished(outcomes: &[CaseOutcome]) -> Vec<CaseResult> {
    outcomes.iter().filter_map(|o| o.result().cloned()).collect()
}

fn train_and_report(specs: Vec<super::config::CaseSpec>, args: &TrainingArgs, out: &mut dyn Write) -> Result<()> {
    for spec in &specs {
        spec.validate()?;
    }
    let store = ResultStore::open(&args.out)?;
    let outcomes = run_sweep(&specs, args.jobs, &store)?;
    let failed: Vec<String> = outcomes
        .iter()
        .filter_map(|o| match o {
            CaseOutcome::Failed { id, error, .. } => Some(format!("{id}: {error}")),
            _ => None,
        })
        .collect();
    let done = finished(&outcomes);
    if !done.is_empty() {
        emit_reports(&done, &args.out, out)?;
    }
    if failed.is_empty() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "{} case(s) failed: {}",
            failed.len(),
            failed.join("; ")
        )))
    }
}

fn analyze(args: &AnalyzeArgs, out: &mut dyn Write) -> Result<()> {
    let mut traj = read_trajectory(&args.traj)?;
    let all = !args.wavelength && !args.thrust;
    let mut doc = json!({
        "trajectory": args.traj.display().to_string(),
        "noa": traj.meta.model.noa,
        "speed_m_s": reward(&traj),
        "aborted": traj.aborted,
    });
    if args.wavelength || all {
        doc["wavelength"] = serde_json::to_value(wavelength(&traj))?;
    }
    if args.thrust || all {
        traj.forces = Some(recompute_forces(&traj)?);
        doc["thrust"] = serde_json::to_value(thrust_decomposition(&traj))?;
        doc["tail_torque"] = serde_json::to_value(tail_torque_decomposition(&traj))?;
    }
    serde_json::to_writer_pretty(&mut *out, &doc)?;
    writeln!(out)?;
    Ok(())
}

fn report(input: &Path, output: &Path, out: &mut dyn Write) -> Result<()> {
    let store = ResultStore::open(input)?;
    let done = finished(&store.load_all()?);
    emit_reports(&done, output, out)
}

pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<()> {
    match &cli.command {
        Command::Run(a) => {
            let cfg = a.training.config()?;
            let spec = cfg.case(a.noa, a.stiffness, a.hm);
            train_and_report(vec![spec], &a.training, out)
        }
        Command::Sweep(a) => {
            let cfg = a.training.config()?;
            let grid = cfg.grid.filtered(&a.grid)?;
            let specs = cfg.cases(&grid);
            train_and_report(specs, &a.training, out)
        }
        Command::Analyze(a) => analyze(a, out),
        Command::Report(a) => report(&a.input, &a.out, out),
    }
}

/// Stable machine-readable name of an error variant.
pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Geometry(_) => "geometry",
        Error::InvalidParameter(_) => "invalid_parameter",
        Error::UnknownStiffness(_) => "unknown_stiffness",
        Error::UnknownHydroModel(_) => "unknown_hydro_model",
        Error::JointOutOfRange { .. } => "joint_out_of_range",
        Error::PolicyLength { .. } => "policy_length",
        Error::SingularSystem { .. } => "singular_system",
        Error::NonFinite { .. } => "non_finite",
        Error::FoldOver { .. } => "fold_over",
        Error::TrajectoryFormat(_) => "trajectory_format",
        Error::Config(_) => "config",
        Error::Io(_) => "io",
        Error::Csv(_) => "csv",
        Error::Json(_) => "json",
    }
}

/// Parse arguments, run, and return the process exit code. Errors are
/// printed to stderr as a single JSON object.
pub fn main() -> i32 {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return 0;
        }
        Err(e) => {
            let msg = json!({"error": "usage", "message": e.to_string()});
            eprintln!("{msg}");
            return 2;
        }
    };
    let stdout = std::io::stdout();
    let mut lock = stdout.lock();
    match execute(&cli, &mut lock) {
        Ok(()) => 0,
        Err(e) => {
            let msg = json!({"error": error_kind(&e), "message": e.to_string()});
            eprintln!("{msg}");
            1
        }
    }
}
