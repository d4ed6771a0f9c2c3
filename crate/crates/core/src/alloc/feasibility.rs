use std::fmt;

use serde::Serialize;

use super::latency::{
    downlink_term, processing_budget, processing_terms, ru_processing_terms, uplink_term,
    within_bound,
};
use super::{site_loads, Assignment, SiteLoad};
use crate::scenario::{Scenario, Site};

/// Constraint families, in the order they are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Constraint {
    /// Attached over a virtual PON that does not exist.
    Reachability,
    /// Attached to more than one cloud.
    SingleAttachment,
    UplinkLatency,
    DownlinkLatency,
    UplinkProcessing,
    DownlinkProcessing,
}

impl Constraint {
    pub const ALL: [Constraint; 6] = [
        Constraint::Reachability,
        Constraint::SingleAttachment,
        Constraint::UplinkLatency,
        Constraint::DownlinkLatency,
        Constraint::UplinkProcessing,
        Constraint::DownlinkProcessing,
    ];

    pub fn tag(self) -> &'static str {
        match self {
            Constraint::Reachability => "reachability",
            Constraint::SingleAttachment => "single-attachment",
            Constraint::UplinkLatency => "uplink-latency",
            Constraint::DownlinkLatency => "downlink-latency",
            Constraint::UplinkProcessing => "uplink-processing",
            Constraint::DownlinkProcessing => "downlink-processing",
        }
    }
}

impl fmt::Display for Constraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

/// First violated constraint of RU `r` if it were the tenant of `site`
/// carrying `load` (which must already include `r`).
pub fn violation_on(sc: &Scenario, r: usize, site: Site, load: &SiteLoad) -> Option<Constraint> {
    if !sc.reachable(r, site) {
        return Some(Constraint::Reachability);
    }
    let ru = &sc.rus[r];
    if !within_bound(uplink_term(sc, r, site, load), ru.xhaul_bound_s) {
        return Some(Constraint::UplinkLatency);
    }
    if !within_bound(downlink_term(sc, r, site, load), ru.xhaul_bound_s) {
        return Some(Constraint::DownlinkLatency);
    }
    let (ru_ul, ru_dl) = ru_processing_terms(sc, r);
    let (ul, dl) = processing_terms(sc, site, load);
    let budget = processing_budget(sc, r);
    if !within_bound(ru_ul + ul, budget) {
        return Some(Constraint::UplinkProcessing);
    }
    if !within_bound(ru_dl + dl, budget) {
        return Some(Constraint::DownlinkProcessing);
    }
    None
}

/// Whether every tenant in `members` satisfies its constraints at `site`.
pub fn site_feasible(sc: &Scenario, site: Site, members: &[usize], load: &SiteLoad) -> bool {
    members.iter().all(|&r| violation_on(sc, r, site, load).is_none())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuFeasibility {
    pub assigned: bool,
    /// Every violated family, in evaluation order.
    pub violations: Vec<Constraint>,
}

impl RuFeasibility {
    pub fn first_violation(&self) -> Option<Constraint> {
        self.violations.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub rus: Vec<RuFeasibility>,
    pub unassigned: Vec<usize>,
}

impl FeasibilityReport {
    pub fn family_satisfied(&self, c: Constraint) -> bool {
        self.rus.iter().all(|ru| !ru.violations.contains(&c))
    }

    /// `(ru, first violation)` for every infeasible RU.
    pub fn first_violations(&self) -> Vec<(usize, Constraint)> {
        self.rus
            .iter()
            .enumerate()
            .filter_map(|(r, f)| f.first_violation().map(|c| (r, c)))
            .collect()
    }
}

/// Evaluates every constraint family for every RU.
///
/// Unassigned RUs are feasible; they are listed in `unassigned` and will be
/// in outage. An RU attached to several clouds accumulates the latency and
/// processing terms of all of them.
pub fn check_feasible(a: &Assignment, sc: &Scenario) -> FeasibilityReport {
    assert!(a.matches(sc), "assignment dimensions do not match the scenario");
    let loads = site_loads(a, sc);
    let mut rus = Vec::with_capacity(sc.n_rus());
    for r in 0..sc.n_rus() {
        let sites = a.sites_of(r);
        let mut violations = Vec::new();
        if sites.is_empty() {
            rus.push(RuFeasibility {
                assigned: false,
                violations,
            });
            continue;
        }
        if sites.iter().any(|s| !sc.reachable(r, *s)) {
            violations.push(Constraint::Reachability);
        }
        if sites.len() > 1 {
            violations.push(Constraint::SingleAttachment);
        }
        let ru = &sc.rus[r];
        let (mut up, mut down) = (0.0, 0.0);
        let (mut proc_ul, mut proc_dl) = ru_processing_terms(sc, r);
        for &s in &sites {
            let load = &loads[sc.site_index(s)];
            up += uplink_term(sc, r, s, load);
            down += downlink_term(sc, r, s, load);
            let (u, d) = processing_terms(sc, s, load);
            proc_ul += u;
            proc_dl += d;
        }
        let budget = processing_budget(sc, r);
        for (ok, c) in [
            (within_bound(up, ru.xhaul_bound_s), Constraint::UplinkLatency),
            (within_bound(down, ru.xhaul_bound_s), Constraint::DownlinkLatency),
            (within_bound(proc_ul, budget), Constraint::UplinkProcessing),
            (within_bound(proc_dl, budget), Constraint::DownlinkProcessing),
        ] {
            if !ok {
                violations.push(c);
            }
        }
        rus.push(RuFeasibility {
            assigned: true,
            violations,
        });
    }
    FeasibilityReport {
        feasible: rus.iter().all(|f| f.violations.is_empty()),
        unassigned: a.unassigned(),
        rus,
    }
}
