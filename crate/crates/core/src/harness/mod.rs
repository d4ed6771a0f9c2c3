//! Scenario generation, load scaling and parameter sweeps.

mod builder;
mod generate;
mod load;
mod sweep;

pub use builder::{simple_cloud, simple_ru, ScenarioBuilder};
pub use generate::{
    build_paper_scenario, generate_scenario, largest_remainder, random_instance, ClassBounds,
    GeneratorConfig, RandomInstanceConfig,
};
pub use load::{aggregate_demand_bps, apply_load, target_demand_bps};
pub use sweep::{run_sweep, summarize, RatioPoint, SummaryRow, SweepRow, SweepSpec, SweepTable, SWEEP_SCHEMA};
