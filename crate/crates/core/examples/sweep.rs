//! Run a small grid with a reduced budget and write the report files.

use mubot::expsuite::{emit_reports, run_sweep, GridAxes, ResultStore, SweepConfig};
use mubot::prelude::*;

fn main() -> mubot::Result<()> {
    let mut cfg = SweepConfig::default();
    cfg.sim.horizon = 2.0;
    cfg.sim.window = 1.0;
    cfg.ephe.rollouts = 8;
    cfg.ephe.elite = 4;
    cfg.ephe.episodes = 3;
    cfg.ephe.sessions = 1;
    let grid = GridAxes {
        noa: vec![1, 2],
        stiffness: vec![StiffnessLevel::High],
        hm: vec![HydroModel::HM3, HydroModel::HM4],
    };
    let dir = std::env::temp_dir().join("mubot-sweep-example");
    let store = ResultStore::open(&dir)?;
    let outcomes = run_sweep(&cfg.cases(&grid), 2, &store)?;
    let done: Vec<_> = outcomes.iter().filter_map(|o| o.result().cloned()).collect();
    emit_reports(&done, &dir, &mut std::io::stdout())?;
    println!("reports written to {}", dir.display());
    Ok(())
}
