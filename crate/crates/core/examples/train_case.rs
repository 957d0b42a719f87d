//! Train a gait for one case with a reduced budget and print what was learned.

use mubot::ephe::train;
use mubot::prelude::*;

fn main() -> mubot::Result<()> {
    let model = build_robot(2, Some(StiffnessLevel::High), &MorphologyOverrides::default())?;
    let hydro = HydroParams::preset(HydroModel::HM4);
    let opts = SimOptions {
        horizon: 3.0,
        window: 1.0,
        ..Default::default()
    };
    let cfg = EpheConfig {
        rollouts: 16,
        elite: 8,
        episodes: 6,
        sessions: 2,
        seed: 11,
        ..Default::default()
    };
    let out = train(&model, &hydro, &opts, &cfg)?;
    for s in &out.sessions {
        println!("session {}: best {:.4} m/s", s.session, s.best_reward);
    }
    let p = &out.best_policy;
    println!(
        "best gait: amplitudes {:?} V, phases {:?} rad, {:.2} Hz",
        p.amplitudes, p.phases, p.frequency
    );
    let traj = simulate(&model, &hydro, p, &opts);
    let m = gait_metrics(&traj);
    println!("replay: {:.4} m/s, {:.3} BL/s", m.speed, m.body_lengths_per_second);
    Ok(())
}
