//! Nearest-cloud greedy with uniform cost sharing.

use std::time::Instant;

use super::mix::{mix_by_ownership, ownership_fractions};
use super::{attach_nearest, CostSharing, SolverKind, SolverResult, Working};
use crate::scenario::Scenario;

/// Attaches RUs in ownership-mixed order to their nearest feasible cloud,
/// with no operator preference and no reassignment. The resulting total
/// bill is split evenly across all RUs, outage RUs included.
pub fn solve_baseline_uniform(sc: &Scenario, seed: Option<u64>) -> SolverResult {
    let start = Instant::now();
    let mix = mix_by_ownership(&sc.rus, &ownership_fractions(&sc.rus), seed.unwrap_or(sc.seed))
        .expect("fractions derived from the RUs themselves are consistent");
    let mut w = Working::new(sc);
    attach_nearest(&mut w, &mix.order, false);
    SolverResult::finish(
        SolverKind::Baseline,
        sc,
        w.assignment(),
        0,
        CostSharing::Uniform,
        start.elapsed(),
    )
}
