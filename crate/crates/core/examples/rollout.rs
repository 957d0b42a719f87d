//! Simulate one hand-picked gait and print the resulting gait metrics.

use std::time::Instant;

use mubot::prelude::*;

fn main() -> mubot::Result<()> {
    let noa = 4;
    let model = build_robot(noa, Some(StiffnessLevel::High), &Default::default())?;
    let gait = GaitPolicy::new(vec![5.0; noa], vec![0.85, 0.7, 0.55], 2.0)?;
    for hm in [HydroModel::HM1, HydroModel::HM2, HydroModel::HM3, HydroModel::HM4] {
        let start = Instant::now();
        let traj = simulate(&model, &HydroParams::preset(hm), &gait, &SimOptions::default());
        let m = gait_metrics(&traj);
        println!(
            "{hm}: {:.4} m/s  {:.3} BL/s  mean amplitude {:.2} mm  ({:.1} ms)",
            m.speed,
            m.body_lengths_per_second,
            1e3 * m.mean_amplitude,
            1e3 * start.elapsed().as_secs_f64()
        );
    }
    Ok(())
}
