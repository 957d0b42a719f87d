//! Build the template for each joint count and list its segments.

use mubot::prelude::*;

fn main() -> mubot::Result<()> {
    for noa in [2, 4, 6] {
        let model = build_robot(noa, Some(StiffnessLevel::High), &MorphologyOverrides::default())?;
        println!(
            "noa {noa}: {} bodies, length {:.1} mm, mass {:.2} g",
            model.body_count(),
            1e3 * model.total_length(),
            1e3 * model.total_mass()
        );
        for (i, seg) in model.segments.iter().enumerate() {
            let g = &seg.geometry;
            let joint = match model.joints.get(i) {
                Some(j) if j.actuated => format!("actuated, k = {:.2e} N·m/rad", j.stiffness),
                Some(j) => format!("passive,  k = {:.2e} N·m/rad", j.stiffness),
                None => String::new(),
            };
            println!(
                "  {} l {:5.1} mm  h {:5.1} mm  m {:6.3} g  {joint}",
                g.kind.label(),
                1e3 * g.length,
                1e3 * g.depth,
                1e3 * seg.mass.mass
            );
        }
    }
    Ok(())
}
