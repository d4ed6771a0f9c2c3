//! Solvers for the min-max fair allocation problem.
//!
//! * [`solve_heuristic`]: nearest-cloud greedy attachment in operator-mixed
//!   order, followed by reassignment of the most expensive RU until no RU can
//!   be made cheaper.
//! * [`solve_exact`]: exhaustive enumeration for small instances.
//! * [`solve_baseline_uniform`]: nearest-cloud greedy with the total bill
//!   split evenly across RUs.
//!
//! All three return a [`SolverResult`] whose assignment has been validated
//! by [`check_feasible`](crate::alloc::check_feasible).

mod baseline;
mod exact;
mod heuristic;
mod mix;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::{Deserialize, Serialize};

use crate::alloc::cost::cost_on;
use crate::alloc::feasibility::violation_on;
use crate::alloc::{AllocationReport, Assignment, SiteLoad};
use crate::error::Error;
use crate::scenario::{MnoId, Scenario};

pub use baseline::solve_baseline_uniform;
pub use exact::{search_space_size, solve_exact, DEFAULT_EXACT_LIMIT};
pub use heuristic::{solve_heuristic, solve_heuristic_traced, HeuristicParams};
pub use mix::{mix_by_ownership, ownership_fractions, OwnershipMix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SolverKind {
    Heuristic,
    Exact,
    Baseline,
}

impl SolverKind {
    pub fn name(self) -> &'static str {
        match self {
            SolverKind::Heuristic => "heuristic",
            SolverKind::Exact => "exact",
            SolverKind::Baseline => "baseline",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        match s {
            "heuristic" => Ok(SolverKind::Heuristic),
            "exact" => Ok(SolverKind::Exact),
            "baseline" => Ok(SolverKind::Baseline),
            other => Err(Error::Config(format!("unknown solver {other:?}"))),
        }
    }
}

/// How the bill is divided among operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CostSharing {
    /// Every RU pays its own leasing cost.
    PerRu,
    /// The total is split evenly across all RUs.
    Uniform,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Opex {
    pub sharing: CostSharing,
    pub per_ru: Vec<f64>,
    pub per_mno: BTreeMap<MnoId, f64>,
    pub total: f64,
}

impl Opex {
    pub fn new(sharing: CostSharing, report: &AllocationReport, sc: &Scenario) -> Self {
        let total: f64 = report.costs.iter().sum();
        let per_ru = match sharing {
            CostSharing::PerRu => report.costs.clone(),
            CostSharing::Uniform => {
                let each = if sc.n_rus() == 0 { 0.0 } else { total / sc.n_rus() as f64 };
                vec![each; sc.n_rus()]
            }
        };
        let mut per_mno = BTreeMap::new();
        for (ru, c) in sc.rus.iter().zip(&per_ru) {
            *per_mno.entry(ru.mno).or_insert(0.0) += c;
        }
        Self {
            sharing,
            per_ru,
            per_mno,
            total,
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolverResult {
    pub solver: SolverKind,
    pub assignment: Assignment,
    pub report: AllocationReport,
    /// RUs left without a cloud.
    pub outage_rus: Vec<usize>,
    pub iterations: u64,
    /// Largest cost among assigned RUs; `None` when nothing is assigned.
    pub objective: Option<f64>,
    pub opex: Opex,
    /// Time spent choosing the assignment, excluding the report.
    pub wall_time: Duration,
}

impl SolverResult {
    pub(crate) fn finish(
        solver: SolverKind,
        sc: &Scenario,
        assignment: Assignment,
        iterations: u64,
        sharing: CostSharing,
        wall_time: Duration,
    ) -> Self {
        let report = AllocationReport::evaluate(&assignment, sc);
        assert!(
            report.feasibility.feasible,
            "{solver} produced an infeasible assignment: {:?}",
            report.feasibility.first_violations()
        );
        let opex = Opex::new(sharing, &report, sc);
        Self {
            solver,
            outage_rus: assignment.unassigned(),
            objective: report.max_cost,
            iterations,
            opex,
            report,
            assignment,
            wall_time,
        }
    }

    /// Everything except wall time, for reproducibility comparisons.
    pub fn fingerprint(&self) -> String {
        format!(
            "{}|{:?}|{:?}|{}|{:?}|{:?}",
            self.solver,
            self.assignment.choices(),
            self.outage_rus,
            self.iterations,
            self.objective.map(f64::to_bits),
            self.opex.per_ru.iter().map(|c| c.to_bits()).collect::<Vec<_>>()
        )
    }

    pub fn summary(&self, sc: &Scenario) -> String {
        use std::fmt::Write as _;
        let mut s = String::new();
        let cur = &sc.cost.currency;
        let _ = writeln!(s, "solver:      {}", self.solver);
        let _ = writeln!(
            s,
            "assigned:    {} of {} RUs ({} in outage)",
            sc.n_rus() - self.outage_rus.len(),
            sc.n_rus(),
            self.outage_rus.len()
        );
        let edge = (0..sc.n_rus())
            .filter(|&r| matches!(self.assignment.site_of(r), Some(crate::scenario::Site::Edge(_))))
            .count();
        let _ = writeln!(s, "edge-hosted: {edge}");
        match self.objective {
            Some(o) => {
                let _ = writeln!(s, "max cost:    {o:.3} {cur}/day");
            }
            None => {
                let _ = writeln!(s, "max cost:    undefined (no RU assigned)");
            }
        }
        let _ = writeln!(s, "total OPEX:  {:.3} {cur}/day", self.opex.total);
        for (m, c) in &self.opex.per_mno {
            let _ = writeln!(s, "  MNO-{m}:    {c:.3} {cur}/day");
        }
        let _ = writeln!(s, "iterations:  {}", self.iterations);
        let _ = writeln!(s, "wall time:   {:.3} ms", self.wall_time.as_secs_f64() * 1e3);
        s
    }
}

/// Mutable attachment state with per-site aggregates, used by the greedy
/// solvers. Sites are addressed by dense index.
#[derive(Debug, Clone)]
pub(crate) struct Working<'a> {
    pub sc: &'a Scenario,
    pub site_of: Vec<Option<usize>>,
    pub members: Vec<Vec<usize>>,
    pub loads: Vec<SiteLoad>,
}

impl<'a> Working<'a> {
    pub fn new(sc: &'a Scenario) -> Self {
        Self {
            sc,
            site_of: vec![None; sc.n_rus()],
            members: vec![Vec::new(); sc.n_sites()],
            loads: vec![SiteLoad::default(); sc.n_sites()],
        }
    }

    /// Whether `r` can join site `y` without breaking any tenant's bounds.
    pub fn can_host(&self, r: usize, y: usize) -> bool {
        let site = self.sc.site_at(y);
        if !self.sc.reachable(r, site) {
            return false;
        }
        let mut load = self.loads[y];
        load.add(&self.sc.rus[r]);
        violation_on(self.sc, r, site, &load).is_none()
            && self.members[y]
                .iter()
                .all(|&m| violation_on(self.sc, m, site, &load).is_none())
    }

    pub fn attach(&mut self, r: usize, y: usize) {
        debug_assert!(self.site_of[r].is_none());
        self.site_of[r] = Some(y);
        self.members[y].push(r);
        self.loads[y].add(&self.sc.rus[r]);
    }

    pub fn detach(&mut self, r: usize) {
        if let Some(y) = self.site_of[r].take() {
            self.members[y].retain(|&m| m != r);
            self.loads[y].remove(&self.sc.rus[r]);
        }
    }

    pub fn cost(&self, r: usize) -> f64 {
        match self.site_of[r] {
            Some(y) => cost_on(self.sc, r, self.sc.site_at(y), &self.loads[y]),
            None => self.sc.cost.default_fee,
        }
    }

    pub fn assignment(&self) -> Assignment {
        let sites: Vec<_> = self
            .site_of
            .iter()
            .map(|y| y.map(|y| self.sc.site_at(y)))
            .collect();
        Assignment::from_sites(self.sc, &sites)
    }
}

/// Greedy nearest-cloud attachment in `order`. With `prefer_own_edge`, an
/// Edge-Cloud of the RU's operator wins distance ties.
pub(crate) fn attach_nearest(w: &mut Working<'_>, order: &[usize], prefer_own_edge: bool) {
    let sc = w.sc;
    for &r in order {
        let mut candidates: Vec<(i64, u8, usize)> = (0..sc.n_sites())
            .filter(|&y| sc.reachable(r, sc.site_at(y)))
            .map(|y| {
                let site = sc.site_at(y);
                // nanometre resolution for tie detection
                let d = (sc.distance_km(r, site) * 1e12).round() as i64;
                let own = prefer_own_edge && sc.gamma(r, site) < sc.cost.gamma_other;
                (d, u8::from(!own), y)
            })
            .collect();
        candidates.sort_unstable();
        if let Some(&(_, _, y)) = candidates.iter().find(|&&(_, _, y)| w.can_host(r, y)) {
            w.attach(r, y);
        }
    }
}

/// Parameters shared by all solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverParams {
    pub heuristic: HeuristicParams,
    pub exact_limit: u128,
}

impl Default for SolverParams {
    fn default() -> Self {
        Self {
            heuristic: HeuristicParams::default(),
            exact_limit: DEFAULT_EXACT_LIMIT,
        }
    }
}

/// Runs `kind` on `sc`. Only the exact solver can fail.
pub fn solve(sc: &Scenario, kind: SolverKind, params: &SolverParams) -> crate::error::Result<SolverResult> {
    match kind {
        SolverKind::Heuristic => Ok(solve_heuristic(sc, &params.heuristic)),
        SolverKind::Exact => solve_exact(sc, params.exact_limit),
        SolverKind::Baseline => Ok(solve_baseline_uniform(sc, params.heuristic.seed)),
    }
}
