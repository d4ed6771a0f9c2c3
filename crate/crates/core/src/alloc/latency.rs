//! X-haul and processing latency.
//!
//! Uplink x-haul latency of an RU attached to cloud `y` is the ONU queuing
//! delay, the fibre propagation delay over the splitter route, and the time
//! needed to serialize one TTI of the cloud's aggregate uplink traffic as
//! `ceil(TTI / burst)` bursts on the shared link. Downlink is the same
//! without the queuing term. Processing latency is expressed in TTIs: the
//! RU's own load on its local capacity plus the attached DU/CU load on the
//! cloud's capacity.

use super::{site_loads, snapped_ceil, Assignment, SiteLoad};
use crate::error::{Error, Result};
use crate::scenario::{Scenario, Site};

/// Relative slack granted to every `<=` comparison against a bound, so that
/// values equal to the bound up to rounding are accepted.
pub const BOUND_RTOL: f64 = 1e-12;

pub fn within_bound(value: f64, bound: f64) -> bool {
    value <= bound + BOUND_RTOL * bound.abs()
}

fn bursts_per_tti(sc: &Scenario, site: Site) -> f64 {
    snapped_ceil(sc.constants.tti_s / sc.cloud(site).burst_interval_s)
}

fn propagation_s(sc: &Scenario, r: usize, site: Site) -> f64 {
    sc.distance_km(r, site) / sc.constants.fiber_speed_km_per_s
}

/// Uplink latency contribution of RU `r` attached at `site` carrying `load`.
pub fn uplink_term(sc: &Scenario, r: usize, site: Site, load: &SiteLoad) -> f64 {
    let cloud = sc.cloud(site);
    cloud.queue_delay_s
        + propagation_s(sc, r, site)
        + bursts_per_tti(sc, site) * load.ul_bps * cloud.burst_interval_s / cloud.link_ul_bps
}

pub fn downlink_term(sc: &Scenario, r: usize, site: Site, load: &SiteLoad) -> f64 {
    let cloud = sc.cloud(site);
    propagation_s(sc, r, site)
        + bursts_per_tti(sc, site) * load.dl_bps * cloud.burst_interval_s / cloud.link_dl_bps
}

/// Attached DU/CU load over cloud capacity, uplink and downlink.
pub fn processing_terms(sc: &Scenario, site: Site, load: &SiteLoad) -> (f64, f64) {
    let cloud = sc.cloud(site);
    (
        load.ducu_ul_gops / cloud.compute_ul_gops_per_tti,
        load.ducu_dl_gops / cloud.compute_dl_gops_per_tti,
    )
}

/// RU-side processing load over RU capacity, uplink and downlink.
pub fn ru_processing_terms(sc: &Scenario, r: usize) -> (f64, f64) {
    let ru = &sc.rus[r];
    (
        ru.ru_ul_gops_per_tti / ru.ru_capacity_ul_gops_per_tti,
        ru.ru_dl_gops_per_tti / ru.ru_capacity_dl_gops_per_tti,
    )
}

/// Processing budget of RU `r` in TTIs.
pub fn processing_budget(sc: &Scenario, r: usize) -> f64 {
    sc.rus[r].processing_bound_s / sc.constants.tti_s
}

fn summed<F>(r: usize, a: &Assignment, sc: &Scenario, term: F) -> Result<f64>
where
    F: Fn(&Scenario, usize, Site, &SiteLoad) -> f64,
{
    let sites = a.sites_of(r);
    if sites.is_empty() {
        return Err(Error::Unassigned(r));
    }
    let loads = site_loads(a, sc);
    Ok(sites
        .into_iter()
        .map(|s| term(sc, r, s, &loads[sc.site_index(s)]))
        .sum())
}

/// Uplink x-haul latency of RU `r` in seconds.
pub fn uplink_latency(r: usize, a: &Assignment, sc: &Scenario) -> Result<f64> {
    summed(r, a, sc, uplink_term)
}

/// Downlink x-haul latency of RU `r` in seconds.
pub fn downlink_latency(r: usize, a: &Assignment, sc: &Scenario) -> Result<f64> {
    summed(r, a, sc, downlink_term)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProcessingCheck {
    pub uplink: bool,
    pub downlink: bool,
    /// Left-hand sides in TTIs.
    pub uplink_load: f64,
    pub downlink_load: f64,
    pub budget: f64,
}

impl ProcessingCheck {
    pub fn ok(&self) -> bool {
        self.uplink && self.downlink
    }
}

/// Evaluates the processing-latency bound of RU `r` in both directions.
pub fn processing_latency_ok(r: usize, a: &Assignment, sc: &Scenario) -> ProcessingCheck {
    let loads = site_loads(a, sc);
    let (mut ul, mut dl) = ru_processing_terms(sc, r);
    for s in a.sites_of(r) {
        let (u, d) = processing_terms(sc, s, &loads[sc.site_index(s)]);
        ul += u;
        dl += d;
    }
    let budget = processing_budget(sc, r);
    ProcessingCheck {
        uplink: within_bound(ul, budget),
        downlink: within_bound(dl, budget),
        uplink_load: ul,
        downlink_load: dl,
        budget,
    }
}
