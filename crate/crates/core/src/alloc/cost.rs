//! Per-RU leasing cost and the min-max objective.
//!
//! An RU pays the flat mediator fee, `per_gbps` for every Gbps of link share
//! it holds and `per_gops` for every GOPS/TTI of compute share, the latter
//! discounted by `gamma_same_mno` on an Edge-Cloud of its own operator. The
//! price applies to allocated shares, not to demand.

use std::collections::BTreeMap;
use std::io::Write;

use serde::Serialize;

use super::feasibility::{check_feasible, FeasibilityReport};
use super::latency::{
    downlink_term, processing_budget, processing_terms, ru_processing_terms, uplink_term,
};
use super::shares::{compute_share, gops_shares, throughput_share, throughput_shares, ShareMatrix};
use super::{site_loads, Assignment, SiteLoad};
use crate::error::{Error, Result};
use crate::radio::{frames_per_burst, BitsPerSecond};
use crate::scenario::{CloudKind, MnoId, Scenario, Site, TrafficClass};

/// Costs are compared after rounding to this many units per currency unit.
pub const COST_RESOLUTION: f64 = 1e6;

pub fn round_cost(c: f64) -> i64 {
    (c * COST_RESOLUTION).round() as i64
}

/// Variable cost of RU `r` on `site` with the site carrying `load` (which
/// includes `r`). Excludes the flat fee.
pub fn lease_cost_on(sc: &Scenario, r: usize, site: Site, load: &SiteLoad) -> f64 {
    let ru = &sc.rus[r];
    let cloud = sc.cloud(site);
    let eps = sc.constants.epsilon;
    sc.cost.per_gbps * throughput_share(ru, cloud, load, eps) / 1e9
        + sc.cost.per_gops * sc.gamma(r, site) * compute_share(ru, cloud, load, eps)
}

/// Full cost of RU `r` on `site`, including the flat fee.
pub fn cost_on(sc: &Scenario, r: usize, site: Site, load: &SiteLoad) -> f64 {
    sc.cost.default_fee + lease_cost_on(sc, r, site, load)
}

/// Cost of RU `r` from precomputed share matrices (bit/s and GOPS/TTI).
pub fn ru_cost(
    r: usize,
    a: &Assignment,
    throughput: &ShareMatrix,
    compute: &ShareMatrix,
    sc: &Scenario,
) -> f64 {
    let mut link_gbps = 0.0;
    let mut weighted_gops = 0.0;
    for s in a.sites_of(r) {
        link_gbps += throughput.get(r, s) / 1e9;
        weighted_gops += sc.gamma(r, s) * compute.get(r, s);
    }
    sc.cost.default_fee + sc.cost.per_gbps * link_gbps + sc.cost.per_gops * weighted_gops
}

/// Cost of every RU; unassigned RUs pay the flat fee only.
pub fn cost_vector(a: &Assignment, sc: &Scenario) -> Vec<f64> {
    let tput = throughput_shares(a, sc);
    let gops = gops_shares(a, sc);
    (0..sc.n_rus()).map(|r| ru_cost(r, a, &tput, &gops, sc)).collect()
}

/// Largest cost among assigned RUs.
pub fn objective(a: &Assignment, sc: &Scenario) -> Result<f64> {
    let costs = cost_vector(a, sc);
    (0..sc.n_rus())
        .filter(|&r| a.is_assigned(r))
        .map(|r| costs[r])
        .reduce(f64::max)
        .ok_or(Error::NoAssignedRu)
}

/// Costs of assigned RUs, rounded and sorted in descending order.
///
/// Comparing keys lexicographically refines min-max: first the largest
/// cost, then the second largest, and so on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct CostKey(Vec<i64>);

impl CostKey {
    pub fn from_costs(costs: impl IntoIterator<Item = f64>) -> Self {
        let mut v: Vec<i64> = costs.into_iter().map(round_cost).collect();
        v.sort_unstable_by(|a, b| b.cmp(a));
        Self(v)
    }

    pub fn of(a: &Assignment, sc: &Scenario) -> Self {
        let costs = cost_vector(a, sc);
        Self::from_costs((0..sc.n_rus()).filter(|&r| a.is_assigned(r)).map(|r| costs[r]))
    }

    pub fn largest(&self) -> Option<f64> {
        self.0.first().map(|c| *c as f64 / COST_RESOLUTION)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// One CSV row per RU.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RuReport {
    pub ru_id: String,
    pub mno: MnoId,
    pub traffic_class: TrafficClass,
    pub cloud_id: Option<String>,
    pub cloud_kind: Option<CloudKind>,
    pub throughput_share_gbps: f64,
    pub compute_share_gops_per_tti: f64,
    pub gamma: Option<f64>,
    pub cost: f64,
    pub ul_latency_us: Option<f64>,
    pub dl_latency_us: Option<f64>,
    pub ul_latency_slack_us: Option<f64>,
    pub dl_latency_slack_us: Option<f64>,
    pub ul_processing_tti: Option<f64>,
    pub dl_processing_tti: Option<f64>,
    pub ul_processing_slack_tti: Option<f64>,
    pub dl_processing_slack_tti: Option<f64>,
    pub ul_frames_per_burst: Option<u64>,
    pub first_violation: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationReport {
    pub epsilon: f64,
    pub currency: String,
    /// bit/s
    pub throughput: ShareMatrix,
    /// GOPS/TTI
    pub compute: ShareMatrix,
    pub costs: Vec<f64>,
    /// Over assigned RUs; `None` when nothing is assigned.
    pub max_cost: Option<f64>,
    /// Sum of RU costs per operator, outage RUs included at the flat fee.
    pub per_mno: BTreeMap<MnoId, f64>,
    pub feasibility: FeasibilityReport,
    pub rows: Vec<RuReport>,
}

impl AllocationReport {
    pub fn evaluate(a: &Assignment, sc: &Scenario) -> Self {
        let throughput = throughput_shares(a, sc);
        let compute = gops_shares(a, sc);
        let costs: Vec<f64> = (0..sc.n_rus())
            .map(|r| ru_cost(r, a, &throughput, &compute, sc))
            .collect();
        let feasibility = check_feasible(a, sc);
        let loads = site_loads(a, sc);

        let mut per_mno = BTreeMap::new();
        for (ru, c) in sc.rus.iter().zip(&costs) {
            *per_mno.entry(ru.mno).or_insert(0.0) += c;
        }
        let max_cost = (0..sc.n_rus())
            .filter(|&r| a.is_assigned(r))
            .map(|r| costs[r])
            .reduce(f64::max);

        let rows = (0..sc.n_rus())
            .map(|r| {
                row_for(
                    sc,
                    a,
                    r,
                    &loads,
                    &throughput,
                    &compute,
                    costs[r],
                    feasibility.rus[r].first_violation().map(|c| c.tag().to_string()),
                )
            })
            .collect();

        Self {
            epsilon: sc.constants.epsilon,
            currency: sc.cost.currency.clone(),
            throughput,
            compute,
            costs,
            max_cost,
            per_mno,
            feasibility,
            rows,
        }
    }

    pub fn total_cost(&self) -> f64 {
        self.costs.iter().sum()
    }

    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }
}

#[allow(clippy::too_many_arguments)]
fn row_for(
    sc: &Scenario,
    a: &Assignment,
    r: usize,
    loads: &[SiteLoad],
    throughput: &ShareMatrix,
    compute: &ShareMatrix,
    cost: f64,
    first_violation: Option<String>,
) -> RuReport {
    let ru = &sc.rus[r];
    let sites = a.sites_of(r);
    let primary = sites.first().copied();
    let mut row = RuReport {
        ru_id: ru.id.clone(),
        mno: ru.mno,
        traffic_class: ru.traffic_class,
        cloud_id: primary.map(|s| sc.cloud(s).id.clone()),
        cloud_kind: primary.map(Site::kind),
        throughput_share_gbps: throughput.row_total(r) / 1e9,
        compute_share_gops_per_tti: compute.row_total(r),
        gamma: primary.map(|s| sc.gamma(r, s)),
        cost,
        ul_latency_us: None,
        dl_latency_us: None,
        ul_latency_slack_us: None,
        dl_latency_slack_us: None,
        ul_processing_tti: None,
        dl_processing_tti: None,
        ul_processing_slack_tti: None,
        dl_processing_slack_tti: None,
        ul_frames_per_burst: None,
        first_violation,
    };
    if sites.is_empty() {
        return row;
    }
    let (mut up, mut down) = (0.0, 0.0);
    let (mut pu, mut pd) = ru_processing_terms(sc, r);
    for &s in &sites {
        let load = &loads[sc.site_index(s)];
        up += uplink_term(sc, r, s, load);
        down += downlink_term(sc, r, s, load);
        let (u, d) = processing_terms(sc, s, load);
        pu += u;
        pd += d;
    }
    let budget = processing_budget(sc, r);
    row.ul_latency_us = Some(up * 1e6);
    row.dl_latency_us = Some(down * 1e6);
    row.ul_latency_slack_us = Some((ru.xhaul_bound_s - up) * 1e6);
    row.dl_latency_slack_us = Some((ru.xhaul_bound_s - down) * 1e6);
    row.ul_processing_tti = Some(pu);
    row.dl_processing_tti = Some(pd);
    row.ul_processing_slack_tti = Some(budget - pu);
    row.dl_processing_slack_tti = Some(budget - pd);
    row.ul_frames_per_burst = Some(frames_per_burst(BitsPerSecond(ru.demand_ul_bps), &sc.burst));
    row
}
