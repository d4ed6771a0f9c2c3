//! Scenario and assignment files: write, read back, re-check.

use xhaul_fair::harness::build_paper_scenario;
use xhaul_fair::solvers::{solve_heuristic, HeuristicParams};
use xhaul_fair::{check_feasible, Assignment, Scenario};

fn main() -> xhaul_fair::Result<()> {
    let dir = std::env::temp_dir().join("xhaul-fair-roundtrip");
    std::fs::create_dir_all(&dir)?;
    let sc_path = dir.join("scenario.toml");
    let a_path = dir.join("assignment.toml");

    let sc = build_paper_scenario(42)?;
    sc.save(&sc_path)?;
    let back = Scenario::load(&sc_path)?;
    println!("scenario survives the round trip: {}", back == sc);

    let res = solve_heuristic(&back, &HeuristicParams::default());
    res.assignment.save(&a_path, &back)?;
    let a = Assignment::load(&a_path, &back)?;
    println!("assignment survives the round trip: {}", a == res.assignment);
    println!("re-checked feasible: {}", check_feasible(&a, &back).feasible);
    println!("files in {}", dir.display());
    Ok(())
}
