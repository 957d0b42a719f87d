//! Reward-weighted elite search over policy hyperparameters.
//!
//! Each episode draws `M` policy vectors from a diagonal Gaussian, keeps the
//! `K` with the highest reward and refits the mean and standard deviation as
//! reward-weighted moments of that elite.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::actuation::{GaitPolicy, DEFAULT_MAX_VOLTAGE};
use crate::error::{Error, Result};
use crate::hydro::HydroParams;
use crate::morphology::RobotModel;
use crate::rollout::{reward, simulate, SimOptions};

/// Search distribution: mean, per-dimension standard deviation and box.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpheHyperParams {
    pub eta: Vec<f64>,
    pub sigma: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
}

impl EpheHyperParams {
    pub fn new(eta: Vec<f64>, sigma: Vec<f64>, bounds: Vec<(f64, f64)>) -> Result<Self> {
        let hp = EpheHyperParams { eta, sigma, bounds };
        hp.validate()?;
        Ok(hp)
    }

    /// Mean at the center of the box, σ a quarter of its width.
    pub fn from_bounds(bounds: Vec<(f64, f64)>) -> Result<Self> {
        let eta = bounds.iter().map(|(lo, hi)| 0.5 * (lo + hi)).collect();
        let sigma = bounds.iter().map(|(lo, hi)| 0.25 * (hi - lo)).collect();
        Self::new(eta, sigma, bounds)
    }

    pub fn dim(&self) -> usize {
        self.eta.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.eta.len();
        if n == 0 || self.sigma.len() != n || self.bounds.len() != n {
            return Err(Error::InvalidParameter(format!(
                "hyperparameter dimensions disagree: eta {}, sigma {}, bounds {}",
                n,
                self.sigma.len(),
                self.bounds.len()
            )));
        }
        if let Some(i) = self.bounds.iter().position(|(lo, hi)| !(lo < hi)) {
            return Err(Error::InvalidParameter(format!(
                "bounds[{i}] is empty: {:?}",
                self.bounds[i]
            )));
        }
        if let Some(i) = self.sigma.iter().position(|s| !(*s >= 0.0 && s.is_finite())) {
            return Err(Error::InvalidParameter(format!("sigma[{i}] = {}", self.sigma[i])));
        }
        if self.eta.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidParameter("eta must be finite".into()));
        }
        Ok(())
    }
}

fn rollout_rng(seed: u64, episode: usize, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(((episode as u64) << 32) | index as u64);
    rng
}

/// Draw `m` vectors from N(η, σ²), clipped to the bounds. Sample `i` of
/// episode `episode` uses its own random stream, so the result does not depend
/// on evaluation order.
pub fn sample_policies(hp: &EpheHyperParams, m: usize, seed: u64, episode: usize) -> Vec<Vec<f64>> {
    let mut clipped = 0usize;
    let out = (0..m)
        .map(|i| {
            let mut rng = rollout_rng(seed, episode, i);
            hp.eta
                .iter()
                .zip(&hp.sigma)
                .zip(&hp.bounds)
                .map(|((eta, sigma), (lo, hi))| {
                    let z: f64 = rng.sample(StandardNormal);
                    let v = eta + sigma * z;
                    if v < *lo || v > *hi {
                        clipped += 1;
                    }
                    v.clamp(*lo, *hi)
                })
                .collect()
        })
        .collect();
    if clipped > 0 {
        log::debug!(
            "episode {episode}: clipped {clipped} of {} sampled coordinates",
            m * hp.dim()
        );
    }
    out
}

/// Indices of the `k` largest rewards, best first. Ties go to the lower index.
pub fn select_elite(rewards: &[f64], k: usize) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..rewards.len()).collect();
    idx.sort_by(|a, b| rewards[*b].total_cmp(&rewards[*a]).then(a.cmp(b)));
    idx.truncate(k);
    idx
}

/// Reward-weighted refit of (η, σ) on the elite. Returns `None` and leaves
/// the distribution untouched when the elite rewards sum to zero.
pub fn update(hp: &EpheHyperParams, elite: &[(&[f64], f64)]) -> Option<EpheHyperParams> {
    let total: f64 = elite.iter().map(|(_, r)| r).sum();
    if !(total > 0.0) {
        log::warn!("elite rewards sum to {total}; keeping the previous distribution");
        return None;
    }
    let n = hp.dim();
    let mut eta = vec![0.0; n];
    for (g, r) in elite {
        for (e, x) in eta.iter_mut().zip(g.iter()) {
            *e += r * x;
        }
    }
    eta.iter_mut().for_each(|e| *e /= total);
    let mut var = vec![0.0; n];
    for (g, r) in elite {
        for ((v, x), e) in var.iter_mut().zip(g.iter()).zip(&eta) {
            *v += r * (x - e) * (x - e);
        }
    }
    let sigma = var.iter().map(|v| (v / total).sqrt()).collect();
    Some(EpheHyperParams {
        eta,
        sigma,
        bounds: hp.bounds.clone(),
    })
}

/// Optimizer settings.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EpheConfig {
    /// Rollouts per episode.
    pub rollouts: usize,
    pub elite: usize,
    pub episodes: usize,
    pub sessions: usize,
    pub seed: u64,
    /// Voltage amplitude ceiling (V).
    pub max_voltage: f64,
    pub frequency_range: (f64, f64),
}

impl Default for EpheConfig {
    fn default() -> Self {
        EpheConfig {
            rollouts: 50,
            elite: 25,
            episodes: 40,
            sessions: 3,
            seed: 0,
            max_voltage: DEFAULT_MAX_VOLTAGE,
            frequency_range: (0.5, 5.0),
        }
    }
}

impl EpheConfig {
    pub fn validate(&self) -> Result<()> {
        if self.rollouts == 0 || self.elite == 0 || self.elite > self.rollouts {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= elite <= rollouts, got elite {} of {}",
                self.elite, self.rollouts
            )));
        }
        if self.sessions == 0 {
            return Err(Error::InvalidParameter("sessions must be at least 1".into()));
        }
        if !(self.max_voltage > 0.0) {
            return Err(Error::InvalidParameter(format!("max_voltage = {}", self.max_voltage)));
        }
        let (lo, hi) = self.frequency_range;
        if !(lo > 0.0 && lo < hi) {
            return Err(Error::InvalidParameter(format!("frequency range ({lo}, {hi})")));
        }
        Ok(())
    }

    /// Seed of session `s`.
    pub fn session_seed(&self, s: usize) -> u64 {
        self.seed
            .wrapping_mul(0x9E37_79B9_7F4A_7C15)
            .wrapping_add(s as u64)
            .rotate_left(17)
            ^ 0xD1B5_4A32_D192_ED03
    }

    pub fn policy_bounds(&self, noa: usize) -> Vec<(f64, f64)> {
        GaitPolicy::bounds(noa, self.max_voltage, self.frequency_range)
    }
}

/// One sample-evaluate-update cycle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpisodeRecord {
    pub session: usize,
    pub episode: usize,
    pub seed: u64,
    pub samples: Vec<Vec<f64>>,
    pub rewards: Vec<f64>,
    /// Elite indices into `samples`, best first.
    pub elite: Vec<usize>,
    /// Distribution after the update.
    pub eta: Vec<f64>,
    pub sigma: Vec<f64>,
    /// False when the update was skipped.
    pub updated: bool,
    pub wall_clock: f64,
}

impl EpisodeRecord {
    pub fn best_reward(&self) -> f64 {
        self.elite.first().map_or(0.0, |i| self.rewards[*i])
    }

    pub fn mean_reward(&self) -> f64 {
        self.rewards.iter().sum::<f64>() / self.rewards.len().max(1) as f64
    }

    pub fn elite_mean_reward(&self) -> f64 {
        self.elite.iter().map(|i| self.rewards[*i]).sum::<f64>() / self.elite.len().max(1) as f64
    }
}

/// Result of one training session.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SessionResult {
    pub session: usize,
    pub seed: u64,
    pub episodes: Vec<EpisodeRecord>,
    /// Highest-reward sample over the whole session.
    pub best: Vec<f64>,
    pub best_reward: f64,
    pub final_hp: EpheHyperParams,
}

/// Run one session against an arbitrary objective. Rewards must be finite and
/// non-negative; anything else counts as zero.
pub fn run_session<F>(cfg: &EpheConfig, init: &EpheHyperParams, session: usize, objective: &F) -> SessionResult
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let seed = cfg.session_seed(session);
    let mut hp = init.clone();
    let mut episodes = Vec::with_capacity(cfg.episodes);
    let mut best = hp.eta.clone();
    let mut best_reward = f64::NEG_INFINITY;
    for episode in 0..cfg.episodes {
        let start = Instant::now();
        let samples = sample_policies(&hp, cfg.rollouts, seed, episode);
        let rewards: Vec<f64> = samples
            .par_iter()
            .map(|g| {
                let r = objective(g);
                if r.is_finite() && r > 0.0 {
                    r
                } else {
                    0.0
                }
            })
            .collect();
        let elite = select_elite(&rewards, cfg.elite);
        if rewards[elite[0]] > best_reward {
            best_reward = rewards[elite[0]];
            best = samples[elite[0]].clone();
        }
        let pairs: Vec<(&[f64], f64)> = elite.iter().map(|i| (samples[*i].as_slice(), rewards[*i])).collect();
        let next = update(&hp, &pairs);
        let updated = next.is_some();
        if let Some(next) = next {
            hp = next;
        }
        episodes.push(EpisodeRecord {
            session,
            episode,
            seed,
            samples,
            rewards,
            elite,
            eta: hp.eta.clone(),
            sigma: hp.sigma.clone(),
            updated,
            wall_clock: start.elapsed().as_secs_f64(),
        });
    }
    SessionResult {
        session,
        seed,
        episodes,
        best,
        best_reward: best_reward.max(0.0),
        final_hp: hp,
    }
}

/// Outcome of [`train`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainOutcome {
    pub sessions: Vec<SessionResult>,
    pub best_policy: GaitPolicy,
    pub best_reward: f64,
    pub best_session: usize,
}

impl TrainOutcome {
    pub fn episode_records(&self) -> impl Iterator<Item = &EpisodeRecord> {
        self.sessions.iter().flat_map(|s| s.episodes.iter())
    }
}

/// Optimize the gait of `model` for mean swimming speed.
pub fn train(model: &RobotModel, hydro: &HydroParams, opts: &SimOptions, cfg: &EpheConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let noa = model.noa;
    let init = EpheHyperParams::from_bounds(cfg.policy_bounds(noa))?;
    let objective = |g: &[f64]| match GaitPolicy::decode(g, noa) {
        Ok(policy) => reward(&simulate(model, hydro, &policy, opts)),
        Err(_) => 0.0,
    };
    let sessions: Vec<SessionResult> = (0..cfg.sessions)
        .map(|s| {
            let r = run_session(cfg, &init, s, &objective);
            log::info!("session {s}: best reward {:.5}", r.best_reward);
            r
        })
        .collect();
    let (best_session, top) = sessions
        .iter()
        .enumerate()
        .fold(None::<(usize, &SessionResult)>, |acc, (i, s)| match acc {
            Some((_, b)) if b.best_reward >= s.best_reward => acc,
            _ => Some((i, s)),
        })
        .expect("at least one session");
    Ok(TrainOutcome {
        best_policy: GaitPolicy::decode(&top.best, noa)?,
        best_reward: top.best_reward,
        best_session,
        sessions,
    })
}
