//! Heuristic against the exhaustive optimum on small random instances.

use xhaul_fair::harness::{random_instance, RandomInstanceConfig};
use xhaul_fair::solvers::{solve_exact, solve_heuristic, HeuristicParams, DEFAULT_EXACT_LIMIT};

fn main() -> xhaul_fair::Result<()> {
    let cfg = RandomInstanceConfig::default();
    let mut ratios = Vec::new();
    println!("seed  RUs  sites  outage h/e  max cost heuristic   exact");
    for seed in 0..20 {
        let sc = random_instance(&cfg, seed)?;
        let h = solve_heuristic(&sc, &HeuristicParams::default());
        let e = solve_exact(&sc, DEFAULT_EXACT_LIMIT)?;
        let fmt = |o: Option<f64>| o.map_or("-".to_string(), |v| format!("{v:.1}"));
        println!(
            "{seed:4}  {:3}  {:5}  {:4}/{:<4}  {:>18}  {:>7}",
            sc.n_rus(),
            sc.n_sites(),
            h.outage_rus.len(),
            e.outage_rus.len(),
            fmt(h.objective),
            fmt(e.objective)
        );
        if h.outage_rus.len() == e.outage_rus.len() {
            if let (Some(a), Some(b)) = (h.objective, e.objective) {
                ratios.push(a / b);
            }
        }
    }
    let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
    println!("mean heuristic/exact over {} equal-coverage instances: {mean:.3}", ratios.len());
    Ok(())
}
