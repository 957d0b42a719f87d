//! Training and analysis of single cases and whole grids, with results
//! persisted per case so interrupted sweeps pick up where they stopped.

use std::fs;
use std::io::BufWriter;
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::analysis::{
    tail_torque_decomposition, thrust_decomposition, wavelength, TailTorque, ThrustTable, WavelengthFit,
};
use super::config::CaseSpec;
use super::io::write_trajectory;
use crate::actuation::GaitPolicy;
use crate::ephe::{train, EpisodeRecord, TrainOutcome};
use crate::error::{Error, Result};
use crate::rollout::{gait_metrics, simulate, GaitMetrics, SimOptions, Trajectory};

/// Compact per-episode learning-curve entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningRecord {
    pub session: usize,
    pub episode: usize,
    pub seed: u64,
    pub best_reward: f64,
    pub mean_reward: f64,
    pub elite_mean_reward: f64,
    pub rewards: Vec<f64>,
    pub elite: Vec<usize>,
    pub eta: Vec<f64>,
    pub sigma: Vec<f64>,
    pub updated: bool,
    pub wall_clock: f64,
}

impl From<&EpisodeRecord> for LearningRecord {
    fn from(r: &EpisodeRecord) -> Self {
        LearningRecord {
            session: r.session,
            episode: r.episode,
            seed: r.seed,
            best_reward: r.best_reward(),
            mean_reward: r.mean_reward(),
            elite_mean_reward: r.elite_mean_reward(),
            rewards: r.rewards.clone(),
            elite: r.elite.clone(),
            eta: r.eta.clone(),
            sigma: r.sigma.clone(),
            updated: r.updated,
            wall_clock: r.wall_clock,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionSummary {
    pub session: usize,
    pub seed: u64,
    pub best_reward: f64,
    pub best_policy: GaitPolicy,
    pub final_eta: Vec<f64>,
    pub final_sigma: Vec<f64>,
}

/// Trained and analyzed case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub id: String,
    pub hash: String,
    pub spec: CaseSpec,
    /// Mean speed of the best gait (m/s).
    pub speed: f64,
    pub body_lengths_per_second: f64,
    pub total_length: f64,
    pub best_policy: GaitPolicy,
    pub best_session: usize,
    pub sessions: Vec<SessionSummary>,
    pub metrics: GaitMetrics,
    pub wavelength: WavelengthFit,
    pub thrust: ThrustTable,
    pub tail: TailTorque,
    pub learning: Vec<LearningRecord>,
}

/// Outcome of one case in a sweep. Failures are recorded, not fatal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "lowercase")]
pub enum CaseOutcome {
    Done(Box<CaseResult>),
    Failed { id: String, hash: String, error: String },
}

impl CaseOutcome {
    pub fn id(&self) -> &str {
        match self {
            CaseOutcome::Done(r) => &r.id,
            CaseOutcome::Failed { id, .. } => id,
        }
    }

    pub fn hash(&self) -> &str {
        match self {
            CaseOutcome::Done(r) => &r.hash,
            CaseOutcome::Failed { hash, .. } => hash,
        }
    }

    pub fn result(&self) -> Option<&CaseResult> {
        match self {
            CaseOutcome::Done(r) => Some(r),
            CaseOutcome::Failed { .. } => None,
        }
    }
}

/// Simulate `policy` on a case with the force log on, for analysis.
pub fn replay(spec: &CaseSpec, policy: &GaitPolicy) -> Result<Trajectory> {
    let model = spec.model()?;
    let opts = SimOptions {
        record_forces: true,
        ..spec.sim.clone()
    };
    Ok(simulate(&model, &spec.hydro, policy, &opts))
}

/// Analyze a finished training run.
pub fn analyze_case(spec: &CaseSpec, outcome: &TrainOutcome) -> Result<(CaseResult, Trajectory)> {
    let traj = replay(spec, &outcome.best_policy)?;
    let metrics = gait_metrics(&traj);
    let total_length = traj.meta.model.total_length();
    let result = CaseResult {
        id: spec.id().to_string(),
        hash: spec.content_hash(),
        spec: spec.clone(),
        speed: metrics.speed,
        body_lengths_per_second: metrics.body_lengths_per_second,
        total_length,
        best_policy: outcome.best_policy.clone(),
        best_session: outcome.best_session,
        sessions: outcome
            .sessions
            .iter()
            .map(|s| {
                Ok(SessionSummary {
                    session: s.session,
                    seed: s.seed,
                    best_reward: s.best_reward,
                    best_policy: GaitPolicy::decode(&s.best, spec.noa)?,
                    final_eta: s.final_hp.eta.clone(),
                    final_sigma: s.final_hp.sigma.clone(),
                })
            })
            .collect::<Result<_>>()?,
        metrics,
        wavelength: wavelength(&traj),
        thrust: thrust_decomposition(&traj),
        tail: tail_torque_decomposition(&traj),
        learning: outcome.episode_records().map(LearningRecord::from).collect(),
    };
    Ok((result, traj))
}

/// Train and analyze one case.
pub fn run_case(spec: &CaseSpec) -> Result<(CaseResult, Trajectory)> {
    spec.validate()?;
    let model = spec.model()?;
    let outcome = train(&model, &spec.hydro, &spec.sim, &spec.ephe)?;
    analyze_case(spec, &outcome)
}

/// Layout of a results directory.
#[derive(Debug, Clone)]
pub struct ResultStore {
    root: PathBuf,
}

impl ResultStore {
    pub fn open(root: &Path) -> Result<Self> {
        fs::create_dir_all(root.join("cases"))?;
        fs::create_dir_all(root.join("trajectories"))?;
        Ok(ResultStore {
            root: root.to_path_buf(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    pub fn case_path(&self, id: &str) -> PathBuf {
        self.root.join("cases").join(format!("{id}.json"))
    }

    pub fn trajectory_path(&self, id: &str) -> PathBuf {
        self.root.join("trajectories").join(format!("{id}.csv"))
    }

    pub fn load(&self, id: &str) -> Result<Option<CaseOutcome>> {
        let path = self.case_path(id);
        if !path.exists() {
            return Ok(None);
        }
        let text = fs::read_to_string(&path)?;
        Ok(Some(serde_json::from_str(&text)?))
    }

    /// Write through a temporary file so a crash never leaves a torn record.
    pub fn save(&self, outcome: &CaseOutcome, traj: Option<&Trajectory>) -> Result<()> {
        if let Some(traj) = traj {
            write_trajectory(traj, &self.trajectory_path(outcome.id()))?;
        }
        let path = self.case_path(outcome.id());
        let tmp = path.with_extension("json.tmp");
        serde_json::to_writer(BufWriter::new(fs::File::create(&tmp)?), outcome)?;
        fs::rename(&tmp, &path)?;
        Ok(())
    }

    /// Every stored outcome, sorted by case id.
    pub fn load_all(&self) -> Result<Vec<CaseOutcome>> {
        let mut out = Vec::new();
        for entry in fs::read_dir(self.root.join("cases"))? {
            let path = entry?.path();
            if path.extension().is_some_and(|e| e == "json") {
                out.push(serde_json::from_str::<CaseOutcome>(&fs::read_to_string(&path)?)?);
            }
        }
        out.sort_by_key(|o| case_order(o.id()));
        Ok(out)
    }
}

fn case_order(id: &str) -> (Option<super::config::CaseId>, String) {
    (id.parse().ok(), id.to_string())
}

/// Run every case not already stored with a matching content hash. Cases run
/// concurrently on `jobs` threads (rollouts inside a case share the same
/// pool); results are written by a single writer as they finish. Returns one
/// outcome per spec, in spec order.
pub fn run_sweep(specs: &[CaseSpec], jobs: usize, store: &ResultStore) -> Result<Vec<CaseOutcome>> {
    let mut outcomes: Vec<Option<CaseOutcome>> = vec![None; specs.len()];
    let mut pending = Vec::new();
    for (i, spec) in specs.iter().enumerate() {
        let id = spec.id().to_string();
        match store.load(&id) {
            Ok(Some(done @ CaseOutcome::Done(_))) if done.hash() == spec.content_hash() => {
                log::info!("{id}: up to date, skipping");
                outcomes[i] = Some(done);
            }
            Ok(_) => pending.push(i),
            Err(e) => {
                log::warn!("{id}: unreadable stored result ({e}); rerunning");
                pending.push(i);
            }
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    let (tx, rx) = mpsc::channel::<(usize, CaseOutcome, Option<Trajectory>)>();
    let written = std::thread::scope(|scope| {
        let writer = scope.spawn(move || -> Result<Vec<(usize, CaseOutcome)>> {
            let mut got = Vec::new();
            for (i, outcome, traj) in rx {
                store.save(&outcome, traj.as_ref())?;
                match &outcome {
                    CaseOutcome::Done(r) => {
                        log::info!("{}: {:.4} m/s ({:.3} BL/s)", r.id, r.speed, r.body_lengths_per_second)
                    }
                    CaseOutcome::Failed { id, error, .. } => log::error!("{id}: failed: {error}"),
                }
                got.push((i, outcome));
            }
            Ok(got)
        });
        pool.install(|| {
            pending.par_iter().for_each_with(tx, |tx, &i| {
                let spec = &specs[i];
                let msg = match run_case(spec) {
                    Ok((r, traj)) => (i, CaseOutcome::Done(Box::new(r)), Some(traj)),
                    Err(e) => (
                        i,
                        CaseOutcome::Failed {
                            id: spec.id().to_string(),
                            hash: spec.content_hash(),
                            error: e.to_string(),
                        },
                        None,
                    ),
                };
                // the writer only stops early on an I/O error, reported below
                let _ = tx.send(msg);
            });
        });
        writer.join().expect("writer thread panicked")
    })?;
    for (i, o) in written {
        outcomes[i] = Some(o);
    }
    Ok(outcomes
        .into_iter()
        .map(|o| o.expect("every case has an outcome"))
        .collect())
}
