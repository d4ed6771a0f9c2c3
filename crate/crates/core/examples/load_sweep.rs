//! A small load sweep: edge share of RUs and OPEX reduction by load and
//! edge:O-Cloud ratio, averaged over seeds. Pass a path to also write the
//! tidy CSV.

use xhaul_fair::harness::{run_sweep, summarize, SweepSpec};

fn main() -> xhaul_fair::Result<()> {
    let spec = SweepSpec::new(vec![0.4, 0.8], (1..=5).collect());
    let table = run_sweep(&spec)?;
    if let Some(path) = std::env::args().nth(1) {
        table.write_csv(std::fs::File::create(&path)?)?;
        println!("wrote {} rows to {path}", table.rows.len());
    }
    println!("load  edge:ocloud  solver                 metric               mean    std");
    for row in summarize(&table) {
        if row.mno.is_none() && ["edge_ru_fraction", "opex_reduction_pct"].contains(&row.metric.as_str()) {
            println!(
                "{:4.1}  {:.2}:{:.2}    {:<22} {:<18} {:7.3} {:6.3}",
                row.load_fraction, row.edge_ratio, row.ocloud_ratio, row.solver, row.metric, row.mean, row.std
            );
        }
    }
    Ok(())
}
