//! Proportional shares of link throughput and DU/CU compute.
//!
//! An RU leasing a cloud receives the fraction of the cloud's uplink and
//! downlink capacity equal to its fraction of the attached demand, so the
//! shares of all tenants add up to the full capacity.

use super::{site_loads, Assignment, SiteLoad};
use crate::scenario::{CloudNode, RuNode, Scenario, Site};

/// Link throughput granted to `ru` on `cloud`, in bit/s.
pub fn throughput_share(ru: &RuNode, cloud: &CloudNode, load: &SiteLoad, eps: f64) -> f64 {
    ru.demand_ul_bps * cloud.link_ul_bps / (eps + load.ul_bps)
        + ru.demand_dl_bps * cloud.link_dl_bps / (eps + load.dl_bps)
}

/// DU/CU compute granted to `ru` on `cloud`, in GOPS/TTI.
pub fn compute_share(ru: &RuNode, cloud: &CloudNode, load: &SiteLoad, eps: f64) -> f64 {
    ru.ducu_ul_gops_per_tti * cloud.compute_ul_gops_per_tti / (eps + load.ducu_ul_gops)
        + ru.ducu_dl_gops_per_tti * cloud.compute_dl_gops_per_tti / (eps + load.ducu_dl_gops)
}

/// Per-RU shares; entries are zero wherever the RU is not attached.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ShareMatrix {
    /// `edge[r][e]`
    pub edge: Vec<Vec<f64>>,
    pub ocloud: Vec<Vec<f64>>,
}

impl ShareMatrix {
    fn zeros(sc: &Scenario) -> Self {
        Self {
            edge: vec![vec![0.0; sc.edges.len()]; sc.n_rus()],
            ocloud: vec![vec![0.0; sc.oclouds.len()]; sc.n_rus()],
        }
    }

    pub fn get(&self, r: usize, site: Site) -> f64 {
        match site {
            Site::Edge(e) => self.edge[r][e],
            Site::OCloud(q) => self.ocloud[r][q],
        }
    }

    fn set(&mut self, r: usize, site: Site, v: f64) {
        match site {
            Site::Edge(e) => self.edge[r][e] = v,
            Site::OCloud(q) => self.ocloud[r][q] = v,
        }
    }

    /// Sum over all sites of RU `r`.
    pub fn row_total(&self, r: usize) -> f64 {
        self.edge[r].iter().chain(&self.ocloud[r]).sum()
    }

    /// Sum over all RUs at `site`.
    pub fn column_total(&self, site: Site) -> f64 {
        match site {
            Site::Edge(e) => self.edge.iter().map(|row| row[e]).sum(),
            Site::OCloud(q) => self.ocloud.iter().map(|row| row[q]).sum(),
        }
    }
}

fn shares_with(
    a: &Assignment,
    sc: &Scenario,
    f: fn(&RuNode, &CloudNode, &SiteLoad, f64) -> f64,
) -> ShareMatrix {
    let loads = site_loads(a, sc);
    let mut m = ShareMatrix::zeros(sc);
    for r in 0..sc.n_rus() {
        for s in a.sites_of(r) {
            let v = f(&sc.rus[r], sc.cloud(s), &loads[sc.site_index(s)], sc.constants.epsilon);
            m.set(r, s, v);
        }
    }
    m
}

/// Throughput shares (bit/s) for every attached RU/cloud pair.
pub fn throughput_shares(a: &Assignment, sc: &Scenario) -> ShareMatrix {
    shares_with(a, sc, throughput_share)
}

/// DU/CU compute shares (GOPS/TTI) for every attached RU/cloud pair.
pub fn gops_shares(a: &Assignment, sc: &Scenario) -> ShareMatrix {
    shares_with(a, sc, compute_share)
}
