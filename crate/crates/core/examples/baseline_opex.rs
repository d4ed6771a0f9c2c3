//! Per-operator OPEX of the heuristic against uniform cost sharing on the
//! 38-RU deployment.

use xhaul_fair::harness::{generate_scenario, GeneratorConfig};
use xhaul_fair::solvers::{solve_baseline_uniform, solve_heuristic, HeuristicParams};

fn main() -> xhaul_fair::Result<()> {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let sc = generate_scenario(&GeneratorConfig::paper().with_load(0.8), seed)?;
    let h = solve_heuristic(&sc, &HeuristicParams::default());
    let b = solve_baseline_uniform(&sc, None);
    let cur = &sc.cost.currency;
    println!("seed {seed}, 80 % load, {} RUs", sc.n_rus());
    println!("MNO  RUs  baseline  heuristic  reduction");
    let counts = sc.mno_counts();
    for (m, base) in &b.opex.per_mno {
        let heur = h.opex.per_mno[m];
        println!(
            "{m:3}  {:3}  {base:8.0}  {heur:9.0}  {:8.1} %",
            counts[m],
            100.0 * (base - heur) / base
        );
    }
    println!(
        "all       {:8.0}  {:9.0}  {:8.1} %   ({cur}/day)",
        b.opex.total,
        h.opex.total,
        100.0 * (b.opex.total - h.opex.total) / b.opex.total
    );
    println!(
        "largest single-RU bill: baseline assignment {:.0}, heuristic {:.0}",
        b.report.max_cost.unwrap_or(0.0),
        h.objective.unwrap_or(0.0)
    );
    Ok(())
}
