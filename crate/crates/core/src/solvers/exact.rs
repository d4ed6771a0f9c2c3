//! Exhaustive enumeration.

use std::time::Instant;

use rayon::prelude::*;

use super::{CostSharing, SolverKind, SolverResult};
use crate::alloc::cost::cost_on;
use crate::alloc::feasibility::violation_on;
use crate::alloc::{Assignment, CostKey, SiteLoad};
use crate::error::{Error, Result};
use crate::scenario::{Scenario, Site};

pub const DEFAULT_EXACT_LIMIT: u128 = 10_000_000;

/// Options of every RU: unassigned, then each reachable site.
fn options(sc: &Scenario) -> Vec<Vec<Option<usize>>> {
    (0..sc.n_rus())
        .map(|r| {
            std::iter::once(None)
                .chain((0..sc.n_sites()).filter(|&y| sc.reachable(r, sc.site_at(y))).map(Some))
                .collect()
        })
        .collect()
}

/// Number of assignment vectors the exact solver would enumerate, or
/// `None` on overflow.
pub fn search_space_size(sc: &Scenario) -> Option<u128> {
    options(sc)
        .iter()
        .try_fold(1u128, |acc, o| acc.checked_mul(o.len() as u128))
}

/// Ranking of a feasible vector: fewer outages first, then the
/// descending-sorted cost vector, then enumeration order.
type Rank = (usize, CostKey, u128);

/// Scores one vector, or `None` if it violates a constraint.
fn score(sc: &Scenario, choice: &[Option<usize>], loads: &mut [SiteLoad]) -> Option<(usize, CostKey)> {
    loads.iter_mut().for_each(|l| *l = SiteLoad::default());
    for (r, y) in choice.iter().enumerate() {
        if let Some(y) = y {
            loads[*y].add(&sc.rus[r]);
        }
    }
    let mut costs = Vec::with_capacity(choice.len());
    for (r, y) in choice.iter().enumerate() {
        if let Some(y) = *y {
            let site: Site = sc.site_at(y);
            if violation_on(sc, r, site, &loads[y]).is_some() {
                return None;
            }
            costs.push(cost_on(sc, r, site, &loads[y]));
        }
    }
    let unassigned = choice.len() - costs.len();
    Some((unassigned, CostKey::from_costs(costs)))
}

/// Best vector whose first RU takes option `first`; the remaining RUs are
/// enumerated as a mixed-radix counter with the last RU fastest.
fn search_branch(sc: &Scenario, opts: &[Vec<Option<usize>>], first: usize) -> Option<(Rank, Vec<Option<usize>>)> {
    let n = opts.len();
    let mut digits = vec![0usize; n];
    digits[0] = first;
    let mut choice: Vec<Option<usize>> = digits.iter().zip(opts).map(|(&d, o)| o[d]).collect();
    let mut loads = vec![SiteLoad::default(); sc.n_sites()];
    let stride: u128 = opts[1..].iter().map(|o| o.len() as u128).product();
    let mut index = first as u128 * stride;
    let mut best: Option<(Rank, Vec<Option<usize>>)> = None;
    loop {
        if let Some((unassigned, key)) = score(sc, &choice, &mut loads) {
            let rank = (unassigned, key, index);
            if best.as_ref().is_none_or(|(b, _)| rank < *b) {
                best = Some((rank, choice.clone()));
            }
        }
        // advance, never touching digit 0
        let mut i = n;
        loop {
            if i == 1 {
                return best;
            }
            i -= 1;
            digits[i] += 1;
            if digits[i] < opts[i].len() {
                choice[i] = opts[i][digits[i]];
                break;
            }
            digits[i] = 0;
            choice[i] = opts[i][0];
        }
        index += 1;
    }
}

/// Enumerates every assignment vector and returns the one with the fewest
/// unassigned RUs, breaking ties by the descending-sorted cost vector and
/// then by enumeration order.
///
/// Refuses with [`Error::SearchSpace`] when the number of vectors exceeds
/// `limit`. Branches on the first RU's option run in parallel.
pub fn solve_exact(sc: &Scenario, limit: u128) -> Result<SolverResult> {
    let start = Instant::now();
    let opts = options(sc);
    let size = search_space_size(sc).unwrap_or(u128::MAX);
    if size > limit {
        return Err(Error::SearchSpace { size, limit });
    }
    if sc.n_rus() == 0 {
        return Ok(SolverResult::finish(
            SolverKind::Exact,
            sc,
            Assignment::for_scenario(sc),
            0,
            CostSharing::PerRu,
            start.elapsed(),
        ));
    }
    let best = (0..opts[0].len())
        .into_par_iter()
        .filter_map(|first| search_branch(sc, &opts, first))
        .min_by(|a, b| a.0.cmp(&b.0))
        .map(|(_, choice)| choice)
        .expect("the all-unassigned vector is always feasible");
    let sites: Vec<Option<Site>> = best.iter().map(|y| y.map(|y| sc.site_at(y))).collect();
    let a = Assignment::from_sites(sc, &sites);
    Ok(SolverResult::finish(
        SolverKind::Exact,
        sc,
        a,
        size as u64,
        CostSharing::PerRu,
        start.elapsed(),
    ))
}
