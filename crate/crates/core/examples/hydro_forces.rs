//! Evaluate the fluid wrench on one segment under each hydrodynamic model.

use mubot::hydro::{reactive_parts, resistive_parts};
use mubot::prelude::*;

fn main() {
    // 20 mm by 15 mm segment moving forward while yawing
    let s = SegmentFrameState::rigid(-0.1, 0.02, 3.0, 0.02, 0.015, 0.05).with_accelerations(0.5, 20.0);
    for hm in [HydroModel::HM1, HydroModel::HM2, HydroModel::HM3, HydroModel::HM4] {
        let p = HydroParams::preset(hm);
        let r = reactive_parts(&s, &p);
        let d = resistive_parts(&s, &p);
        println!("{hm}");
        for (name, w) in [
            ("added mass", r.added_mass),
            ("pressure", r.pressure),
            ("drag", d.drag),
            ("friction", d.friction),
        ] {
            println!(
                "  {name:<10} long {:+.3e} N  lat {:+.3e} N  torque {:+.3e} N·m",
                w.f_long, w.f_lat, w.torque
            );
        }
    }
}
