//! Decision variables, resource shares, constraints and costs.
//!
//! Every solver and the feasibility checker evaluate allocations through the
//! kernels in this module: [`shares`], [`latency`], [`feasibility`] and
//! [`cost`].

pub mod cost;
pub mod feasibility;
pub mod latency;
pub mod shares;

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scenario::{RuNode, Scenario, Site};

pub use cost::{cost_vector, objective, ru_cost, AllocationReport, CostKey, RuReport};
pub use feasibility::{check_feasible, Constraint, FeasibilityReport, RuFeasibility};
pub use latency::{downlink_latency, processing_latency_ok, uplink_latency, ProcessingCheck};
pub use shares::{gops_shares, throughput_shares, ShareMatrix};

pub const ASSIGNMENT_SCHEMA: &str = "xhaul-fair/assignment-v1";

/// Binary association of RUs to Edge-Clouds (`x_edge`) and O-Clouds
/// (`x_ocloud`).
///
/// Rows may hold several ones; such assignments are representable so that
/// the checker can reject them.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Assignment {
    x_edge: Vec<Vec<bool>>,
    x_ocloud: Vec<Vec<bool>>,
}

impl Assignment {
    pub fn empty(n_rus: usize, n_edges: usize, n_oclouds: usize) -> Self {
        Self {
            x_edge: vec![vec![false; n_edges]; n_rus],
            x_ocloud: vec![vec![false; n_oclouds]; n_rus],
        }
    }

    pub fn for_scenario(sc: &Scenario) -> Self {
        Self::empty(sc.n_rus(), sc.edges.len(), sc.oclouds.len())
    }

    /// At most one site per RU.
    pub fn from_sites(sc: &Scenario, sites: &[Option<Site>]) -> Self {
        assert_eq!(sites.len(), sc.n_rus(), "one entry per RU");
        let mut a = Self::for_scenario(sc);
        for (r, s) in sites.iter().enumerate() {
            a.assign(r, *s);
        }
        a
    }

    pub fn n_rus(&self) -> usize {
        self.x_edge.len()
    }

    pub fn n_edges(&self) -> usize {
        self.x_edge.first().map_or(0, Vec::len)
    }

    pub fn n_oclouds(&self) -> usize {
        self.x_ocloud.first().map_or(0, Vec::len)
    }

    pub fn matches(&self, sc: &Scenario) -> bool {
        self.x_edge.len() == sc.n_rus()
            && self.x_edge.iter().all(|row| row.len() == sc.edges.len())
            && self.x_ocloud.iter().all(|row| row.len() == sc.oclouds.len())
    }

    pub fn get(&self, r: usize, site: Site) -> bool {
        match site {
            Site::Edge(e) => self.x_edge[r][e],
            Site::OCloud(q) => self.x_ocloud[r][q],
        }
    }

    pub fn set(&mut self, r: usize, site: Site, on: bool) {
        match site {
            Site::Edge(e) => self.x_edge[r][e] = on,
            Site::OCloud(q) => self.x_ocloud[r][q] = on,
        }
    }

    /// Clears RU `r`'s row and attaches it to `site`, if any.
    pub fn assign(&mut self, r: usize, site: Option<Site>) {
        self.x_edge[r].iter_mut().for_each(|x| *x = false);
        self.x_ocloud[r].iter_mut().for_each(|x| *x = false);
        if let Some(s) = site {
            self.set(r, s, true);
        }
    }

    pub fn edge_matrix(&self) -> &[Vec<bool>] {
        &self.x_edge
    }

    pub fn ocloud_matrix(&self) -> &[Vec<bool>] {
        &self.x_ocloud
    }

    pub fn sites_of(&self, r: usize) -> Vec<Site> {
        let edges = self.x_edge[r]
            .iter()
            .enumerate()
            .filter(|(_, x)| **x)
            .map(|(e, _)| Site::Edge(e));
        let oclouds = self.x_ocloud[r]
            .iter()
            .enumerate()
            .filter(|(_, x)| **x)
            .map(|(q, _)| Site::OCloud(q));
        edges.chain(oclouds).collect()
    }

    /// First site of RU `r` in edge-then-O-Cloud order.
    pub fn site_of(&self, r: usize) -> Option<Site> {
        if let Some(e) = self.x_edge[r].iter().position(|x| *x) {
            return Some(Site::Edge(e));
        }
        self.x_ocloud[r].iter().position(|x| *x).map(Site::OCloud)
    }

    pub fn is_assigned(&self, r: usize) -> bool {
        self.x_edge[r].iter().chain(&self.x_ocloud[r]).any(|x| *x)
    }

    /// RUs with an all-zero row.
    pub fn unassigned(&self) -> Vec<usize> {
        (0..self.n_rus()).filter(|&r| !self.is_assigned(r)).collect()
    }

    pub fn members(&self, site: Site) -> Vec<usize> {
        (0..self.n_rus()).filter(|&r| self.get(r, site)).collect()
    }

    pub fn choices(&self) -> Vec<Option<Site>> {
        (0..self.n_rus()).map(|r| self.site_of(r)).collect()
    }

    pub fn to_toml_string(&self, sc: &Scenario) -> Result<String> {
        let mut links = Vec::new();
        for r in 0..self.n_rus() {
            for s in self.sites_of(r) {
                links.push(LinkDoc {
                    ru: sc.rus[r].id.clone(),
                    cloud: sc.cloud(s).id.clone(),
                });
            }
        }
        Ok(toml::to_string(&AssignmentDoc {
            schema: ASSIGNMENT_SCHEMA.into(),
            links,
        })?)
    }

    pub fn from_toml_str(s: &str, sc: &Scenario) -> Result<Self> {
        let doc: AssignmentDoc = toml::from_str(s)?;
        if doc.schema != ASSIGNMENT_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported assignment schema {:?}",
                doc.schema
            )));
        }
        let mut a = Self::for_scenario(sc);
        for link in doc.links {
            let r = sc
                .find_ru(&link.ru)
                .ok_or_else(|| Error::Config(format!("unknown RU {}", link.ru)))?;
            let site = sc
                .find_site(&link.cloud)
                .ok_or_else(|| Error::Config(format!("unknown cloud {}", link.cloud)))?;
            a.set(r, site, true);
        }
        Ok(a)
    }

    pub fn load(path: impl AsRef<Path>, sc: &Scenario) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?, sc)
    }

    pub fn save(&self, path: impl AsRef<Path>, sc: &Scenario) -> Result<()> {
        std::fs::write(path, self.to_toml_string(sc)?)?;
        Ok(())
    }
}

#[derive(Serialize, Deserialize)]
struct AssignmentDoc {
    schema: String,
    #[serde(default)]
    links: Vec<LinkDoc>,
}

#[derive(Serialize, Deserialize)]
struct LinkDoc {
    ru: String,
    cloud: String,
}

/// Aggregate demand attached to one site.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SiteLoad {
    pub ul_bps: f64,
    pub dl_bps: f64,
    pub ducu_ul_gops: f64,
    pub ducu_dl_gops: f64,
}

impl SiteLoad {
    pub fn add(&mut self, ru: &RuNode) {
        self.ul_bps += ru.demand_ul_bps;
        self.dl_bps += ru.demand_dl_bps;
        self.ducu_ul_gops += ru.ducu_ul_gops_per_tti;
        self.ducu_dl_gops += ru.ducu_dl_gops_per_tti;
    }

    pub fn remove(&mut self, ru: &RuNode) {
        self.ul_bps -= ru.demand_ul_bps;
        self.dl_bps -= ru.demand_dl_bps;
        self.ducu_ul_gops -= ru.ducu_ul_gops_per_tti;
        self.ducu_dl_gops -= ru.ducu_dl_gops_per_tti;
    }

    pub fn of<'a>(rus: impl IntoIterator<Item = &'a RuNode>) -> Self {
        let mut load = Self::default();
        for ru in rus {
            load.add(ru);
        }
        load
    }
}

/// Loads indexed by [`Scenario::site_index`].
pub fn site_loads(a: &Assignment, sc: &Scenario) -> Vec<SiteLoad> {
    let mut loads = vec![SiteLoad::default(); sc.n_sites()];
    for r in 0..a.n_rus() {
        for s in a.sites_of(r) {
            loads[sc.site_index(s)].add(&sc.rus[r]);
        }
    }
    loads
}

/// Ceiling that ignores floating-point excess below 1e-9 relative, so that
/// 0.5 ms / 31.25 us counts as exactly 16 bursts.
pub(crate) fn snapped_ceil(x: f64) -> f64 {
    let nearest = x.round();
    if (x - nearest).abs() <= 1e-9 * nearest.abs().max(1.0) {
        nearest
    } else {
        x.ceil()
    }
}
