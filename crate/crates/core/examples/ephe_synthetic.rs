//! Optimize a synthetic peaked objective and watch the search distribution
//! close in on the optimum.

use mubot::ephe::{run_session, EpheConfig, EpheHyperParams};

fn main() -> mubot::Result<()> {
    let target = [0.2, 0.7, 0.4, 0.9, 0.3];
    let objective = |x: &[f64]| {
        let d2: f64 = x.iter().zip(&target).map(|(a, b)| (a - b).powi(2)).sum();
        (-d2 / 0.05).exp()
    };
    let cfg = EpheConfig {
        rollouts: 50,
        elite: 25,
        episodes: 40,
        seed: 3,
        ..Default::default()
    };
    let init = EpheHyperParams::from_bounds(vec![(0.0, 1.0); target.len()])?;
    let session = run_session(&cfg, &init, 0, &objective);
    for rec in session.episodes.iter().step_by(5) {
        let best = rec.rewards[rec.elite[0]];
        let spread = rec.sigma.iter().cloned().fold(0.0, f64::max);
        println!("episode {:>2}: best {best:.4}  max sigma {spread:.4}", rec.episode);
    }
    let err = session
        .final_hp
        .eta
        .iter()
        .zip(&target)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    println!("final mean {:?}\nmax error {err:.4}", session.final_hp.eta);
    Ok(())
}
