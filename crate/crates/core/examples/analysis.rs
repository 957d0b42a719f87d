//! Wavelength, thrust and fin-torque analysis of one hand-picked gait.

use mubot::dynamics::Mechanism;
use mubot::expsuite::analysis::{tail_torque_decomposition, thrust_decomposition, wavelength};
use mubot::prelude::*;

fn main() -> mubot::Result<()> {
    let model = build_robot(4, Some(StiffnessLevel::High), &MorphologyOverrides::default())?;
    let gait = GaitPolicy::new(vec![5.0; 4], vec![0.85, 0.7, 0.55], 2.5)?;
    let opts = SimOptions {
        record_forces: true,
        ..Default::default()
    };
    let traj = simulate(&model, &HydroParams::preset(HydroModel::HM4), &gait, &opts);

    let w = wavelength(&traj);
    println!(
        "wavelength {:.1} mm, {:.3} waves per segment, slope {:.1} rad/m",
        1e3 * w.wavelength,
        w.wave_per_segment,
        w.slope
    );

    let t = thrust_decomposition(&traj);
    println!(
        "{:<4} {:>11} {:>11} {:>11} {:>11}",
        "seg", "added_mass", "pressure", "drag", "friction"
    );
    for (label, row) in t.labels.iter().zip(&t.by_segment) {
        println!(
            "{label:<4} {:>11.3e} {:>11.3e} {:>11.3e} {:>11.3e}",
            row[0], row[1], row[2], row[3]
        );
    }
    println!("dominant thrust: {:?}", t.dominant_thrust().map(Mechanism::name));

    let tail = tail_torque_decomposition(&traj);
    println!(
        "fin joint: spring {:.3e}, added mass {:.3e} N·m, ratio {:.2}",
        tail.spring,
        tail.added_mass,
        tail.added_mass_to_spring()
    );
    Ok(())
}
