//! Greedy attachment followed by min-max reassignment.

use std::time::Instant;

use super::mix::{mix_by_ownership, ownership_fractions};
use super::{attach_nearest, CostSharing, SolverKind, SolverResult, Working};
use crate::alloc::cost::{cost_on, round_cost};
use crate::alloc::feasibility::site_feasible;
use crate::alloc::CostKey;
use crate::scenario::{RuNode, Scenario};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeuristicParams {
    /// Largest relative demand difference for two RUs to count as similar
    /// when swapping.
    pub tau: f64,
    /// Seed of the within-operator shuffle; the scenario seed when `None`.
    pub seed: Option<u64>,
    /// Moves are capped at `rounds * |R| * (|E| + |Q|)`.
    pub rounds: usize,
}

impl Default for HeuristicParams {
    fn default() -> Self {
        Self {
            tau: 0.2,
            seed: None,
            rounds: 4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Move {
    Relocate { to: usize },
    Swap { to: usize, with: usize },
}

impl Move {
    fn target(self) -> usize {
        match self {
            Move::Relocate { to } | Move::Swap { to, .. } => to,
        }
    }
}

/// Relative distance between two demand vectors: the largest per-entry
/// difference over `a`'s entry.
pub(crate) fn demand_gap(a: &RuNode, b: &RuNode) -> f64 {
    let pa = [a.demand_ul_bps, a.demand_dl_bps, a.ducu_ul_gops_per_tti, a.ducu_dl_gops_per_tti];
    let pb = [b.demand_ul_bps, b.demand_dl_bps, b.ducu_ul_gops_per_tti, b.ducu_dl_gops_per_tti];
    pa.iter()
        .zip(pb)
        .map(|(&x, y)| {
            if x == y {
                0.0
            } else if x == 0.0 {
                f64::INFINITY
            } else {
                (x - y).abs() / x
            }
        })
        .fold(0.0, f64::max)
}

/// Runs the two-phase heuristic.
///
/// Phase 1 visits RUs in ownership-mixed order and attaches each to its
/// nearest feasible cloud, preferring its operator's Edge-Cloud on distance
/// ties. RUs that fit nowhere stay in outage.
///
/// Phase 2 repeatedly takes the most expensive RU `r` still in the working
/// set and looks for a move to another reachable cloud `y`: either `r`
/// relocates, or `r` swaps with the tenant of `y` whose demand is closest to
/// its own and within `tau`. A move is admissible if both affected clouds
/// stay feasible, `r` becomes strictly cheaper, and every RU whose cost
/// rises ends strictly below `r`'s old cost. The best admissible move is
/// applied; without one, `r` leaves the working set. Each applied move
/// strictly decreases the descending-sorted cost vector, so the loop ends.
pub fn solve_heuristic(sc: &Scenario, params: &HeuristicParams) -> SolverResult {
    run(sc, params, |_| {})
}

/// Like [`solve_heuristic`], also returning the cost key after Phase 1 and
/// after every applied move.
pub fn solve_heuristic_traced(sc: &Scenario, params: &HeuristicParams) -> (SolverResult, Vec<CostKey>) {
    let mut trace = Vec::new();
    let res = run(sc, params, |w| {
        trace.push(CostKey::from_costs(
            (0..sc.n_rus()).filter(|&r| w.site_of[r].is_some()).map(|r| w.cost(r)),
        ))
    });
    (res, trace)
}

fn run(sc: &Scenario, params: &HeuristicParams, mut observe: impl FnMut(&Working<'_>)) -> SolverResult {
    let start = Instant::now();
    let seed = params.seed.unwrap_or(sc.seed);
    let fractions = ownership_fractions(&sc.rus);
    let mix = mix_by_ownership(&sc.rus, &fractions, seed)
        .expect("fractions derived from the RUs themselves are consistent");
    let pos = mix.positions();

    let mut w = Working::new(sc);
    attach_nearest(&mut w, &mix.order, true);
    observe(&w);

    let cap = params.rounds.max(1) * sc.n_rus() * sc.n_sites().max(1);
    let mut active: Vec<bool> = w.site_of.iter().map(Option::is_some).collect();
    let mut costs: Vec<i64> = (0..sc.n_rus()).map(|r| round_cost(w.cost(r))).collect();
    let mut iterations = 0u64;
    let mut moves = 0usize;

    while let Some(r) = (0..sc.n_rus())
        .filter(|&r| active[r])
        .max_by(|&a, &b| costs[a].cmp(&costs[b]).then(pos[b].cmp(&pos[a])))
    {
        iterations += 1;
        let best = if moves < cap {
            best_move(&w, r, costs[r], params.tau, &pos)
        } else {
            None
        };
        let Some(m) = best else {
            active[r] = false;
            continue;
        };
        let from = w.site_of[r].expect("active RUs are assigned");
        apply(&mut w, r, m);
        moves += 1;
        observe(&w);
        for y in [from, m.target()] {
            for &c in &w.members[y] {
                costs[c] = round_cost(w.cost(c));
            }
        }
    }

    SolverResult::finish(
        SolverKind::Heuristic,
        sc,
        w.assignment(),
        iterations,
        CostSharing::PerRu,
        start.elapsed(),
    )
}

fn apply(w: &mut Working<'_>, r: usize, m: Move) {
    let from = w.site_of[r].expect("assigned");
    w.detach(r);
    if let Move::Swap { with, .. } = m {
        w.detach(with);
        w.attach(with, from);
    }
    w.attach(r, m.target());
}

/// Tenant of `y` most similar to `r`, within `tau`, that could take `r`'s
/// place at `from`. Ties go to the earlier RU in the mix.
fn swap_partner(w: &Working<'_>, r: usize, y: usize, from: usize, tau: f64, pos: &[usize]) -> Option<usize> {
    let sc = w.sc;
    let from_site = sc.site_at(from);
    w.members[y]
        .iter()
        .copied()
        .filter(|&s| sc.reachable(s, from_site))
        .map(|s| (demand_gap(&sc.rus[r], &sc.rus[s]), s))
        .filter(|(gap, _)| *gap <= tau)
        .min_by(|a, b| a.0.total_cmp(&b.0).then(pos[a.1].cmp(&pos[b.1])))
        .map(|(_, s)| s)
}

/// Best admissible move for `r`, whose current rounded cost is `c`.
fn best_move(w: &Working<'_>, r: usize, c: i64, tau: f64, pos: &[usize]) -> Option<Move> {
    let sc = w.sc;
    let from = w.site_of[r]?;
    let mut best: Option<((i64, i64, usize), Move)> = None;
    let mut order = 0usize;
    for y in 0..sc.n_sites() {
        if y == from || !sc.reachable(r, sc.site_at(y)) {
            continue;
        }
        let mut candidates = vec![Move::Relocate { to: y }];
        if let Some(s) = swap_partner(w, r, y, from, tau, pos) {
            candidates.push(Move::Swap { to: y, with: s });
        }
        for m in candidates {
            order += 1;
            if let Some((worst, new_r)) = evaluate(w, r, c, m) {
                let score = (worst, new_r, order);
                if best.as_ref().is_none_or(|(b, _)| score < *b) {
                    best = Some((score, m));
                }
            }
        }
    }
    best.map(|(_, m)| m)
}

/// Checks admissibility of `m`; on success returns the largest rounded cost
/// among affected RUs and `r`'s new rounded cost.
///
/// Scans every tenant of both affected clouds, so one evaluation costs time
/// linear in their occupancy.
fn evaluate(w: &Working<'_>, r: usize, c: i64, m: Move) -> Option<(i64, i64)> {
    let sc = w.sc;
    let from = w.site_of[r].expect("assigned");
    let to = m.target();
    let (from_site, to_site) = (sc.site_at(from), sc.site_at(to));

    let mut from_members: Vec<usize> = w.members[from].iter().copied().filter(|&x| x != r).collect();
    let mut to_members = w.members[to].clone();
    let mut from_load = w.loads[from];
    let mut to_load = w.loads[to];
    from_load.remove(&sc.rus[r]);
    to_load.add(&sc.rus[r]);
    to_members.push(r);
    if let Move::Swap { with, .. } = m {
        to_members.retain(|&x| x != with);
        to_load.remove(&sc.rus[with]);
        from_members.push(with);
        from_load.add(&sc.rus[with]);
    }
    if !site_feasible(sc, to_site, &to_members, &to_load)
        || !site_feasible(sc, from_site, &from_members, &from_load)
    {
        return None;
    }

    let new_r = round_cost(cost_on(sc, r, to_site, &to_load));
    if new_r >= c {
        return None;
    }
    let mut worst = new_r;
    for (site, members, load) in [
        (to_site, &to_members, &to_load),
        (from_site, &from_members, &from_load),
    ] {
        for &x in members.iter().filter(|&&x| x != r) {
            let new_x = round_cost(cost_on(sc, x, site, load));
            if new_x > round_cost(current_cost(w, x)) && new_x >= c {
                return None;
            }
            worst = worst.max(new_x);
        }
    }
    Some((worst, new_r))
}

fn current_cost(w: &Working<'_>, x: usize) -> f64 {
    let y = w.site_of[x].expect("assigned");
    cost_on(w.sc, x, w.sc.site_at(y), &w.loads[y])
}
