//! Problem instances: RUs, Edge-Clouds, O-Clouds, the PON they share and the
//! leasing tariff.
//!
//! A [`Scenario`] is immutable once built. Reachability is derived from the
//! splitter tree and cloud positions at construction time and is not part of
//! the serialized form.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radio::{BurstModel, RadioConfig, SplitOption};
use crate::topology::{compute_reachability, Area, Point2D, Reachability, SplitterTree};

pub const SCENARIO_SCHEMA: &str = "xhaul-fair/scenario-v1";

/// Operator identifier. Operators are numbered from 1.
pub type MnoId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TrafficClass {
    LowLatency,
    Broadband,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellKind {
    Macro,
    Small,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RuNode {
    pub id: String,
    pub mno: MnoId,
    pub cell: CellKind,
    pub position: Point2D,
    pub traffic_class: TrafficClass,
    pub demand_ul_bps: f64,
    pub demand_dl_bps: f64,
    /// DU/CU processing demand.
    pub ducu_ul_gops_per_tti: f64,
    pub ducu_dl_gops_per_tti: f64,
    /// Processing executed on the RU.
    pub ru_ul_gops_per_tti: f64,
    pub ru_dl_gops_per_tti: f64,
    pub ru_capacity_ul_gops_per_tti: f64,
    pub ru_capacity_dl_gops_per_tti: f64,
    pub xhaul_bound_s: f64,
    pub processing_bound_s: f64,
    pub uplink_split: SplitOption,
    pub downlink_split: SplitOption,
    /// Relative traffic weight used when load is re-applied.
    #[serde(default = "one")]
    pub demand_weight: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CloudKind {
    Edge,
    OCloud,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CloudNode {
    pub id: String,
    /// Owning operator of an Edge-Cloud; O-Clouds are neutral.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mno: Option<MnoId>,
    pub position: Point2D,
    pub compute_ul_gops_per_tti: f64,
    pub compute_dl_gops_per_tti: f64,
    /// Capacity of the PON link serving this cloud.
    pub link_ul_bps: f64,
    pub link_dl_bps: f64,
    pub burst_interval_s: f64,
    /// Uplink queuing delay at the ONU under cooperative DBA.
    pub queue_delay_s: f64,
}

/// Leasing tariff.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CostModel {
    /// Flat fee per RU per day paid to the mediator.
    pub default_fee: f64,
    pub per_gbps: f64,
    pub per_gops: f64,
    pub gamma_same_mno: f64,
    pub gamma_other: f64,
    #[serde(default = "default_currency")]
    pub currency: String,
}

fn default_currency() -> String {
    "EUR".into()
}

impl Default for CostModel {
    fn default() -> Self {
        Self {
            default_fee: 100.0,
            per_gbps: 0.5,
            per_gops: 1.5,
            gamma_same_mno: 0.5,
            gamma_other: 1.0,
            currency: default_currency(),
        }
    }
}

impl CostModel {
    pub fn validate(&self) -> Result<()> {
        let all = [
            self.default_fee,
            self.per_gbps,
            self.per_gops,
            self.gamma_same_mno,
            self.gamma_other,
        ];
        if all.iter().any(|v| !(*v >= 0.0 && v.is_finite())) {
            return Err(Error::Config("cost parameters must be finite and non-negative".into()));
        }
        if self.gamma_same_mno > self.gamma_other {
            return Err(Error::Config("same-operator discount exceeds the regular rate".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Constants {
    pub tti_s: f64,
    pub fiber_speed_km_per_s: f64,
    /// Guard added to every share denominator.
    pub epsilon: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            tti_s: 0.5e-3,
            fiber_speed_km_per_s: 2e5,
            epsilon: 1e-9,
        }
    }
}

/// How RU demands are regenerated when the network load changes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DemandModel {
    pub radio: RadioConfig,
    /// Aggregate demand density at 100 % load.
    pub peak_load_bps_per_km2: f64,
}

impl Default for DemandModel {
    fn default() -> Self {
        Self {
            radio: RadioConfig::calibrated(),
            peak_load_bps_per_km2: 4e9,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PonTopology {
    pub multi_branch: bool,
    pub tree: SplitterTree,
}

/// One cloud, addressed by kind and position in its list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Site {
    Edge(usize),
    OCloud(usize),
}

impl Site {
    pub fn kind(self) -> CloudKind {
        match self {
            Site::Edge(_) => CloudKind::Edge,
            Site::OCloud(_) => CloudKind::OCloud,
        }
    }
}

impl fmt::Display for Site {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Site::Edge(e) => write!(f, "edge[{e}]"),
            Site::OCloud(q) => write!(f, "ocloud[{q}]"),
        }
    }
}

/// A complete problem instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ScenarioDoc", into = "ScenarioDoc")]
pub struct Scenario {
    pub seed: u64,
    pub area: Area,
    pub load_fraction: f64,
    pub constants: Constants,
    pub cost: CostModel,
    pub burst: BurstModel,
    pub demand: DemandModel,
    pub topology: PonTopology,
    pub rus: Vec<RuNode>,
    pub edges: Vec<CloudNode>,
    pub oclouds: Vec<CloudNode>,
    reach: Reachability,
}

#[derive(Serialize, Deserialize)]
struct ScenarioDoc {
    schema: String,
    seed: u64,
    area: Area,
    load_fraction: f64,
    constants: Constants,
    cost: CostModel,
    burst: BurstModel,
    demand: DemandModel,
    topology: PonTopology,
    #[serde(default)]
    rus: Vec<RuNode>,
    #[serde(default)]
    edges: Vec<CloudNode>,
    #[serde(default)]
    oclouds: Vec<CloudNode>,
}

impl TryFrom<ScenarioDoc> for Scenario {
    type Error = Error;

    fn try_from(doc: ScenarioDoc) -> Result<Self> {
        if doc.schema != SCENARIO_SCHEMA {
            return Err(Error::Config(format!(
                "unsupported scenario schema {:?}, expected {SCENARIO_SCHEMA:?}",
                doc.schema
            )));
        }
        Scenario::new(ScenarioParts {
            seed: doc.seed,
            area: doc.area,
            load_fraction: doc.load_fraction,
            constants: doc.constants,
            cost: doc.cost,
            burst: doc.burst,
            demand: doc.demand,
            topology: doc.topology,
            rus: doc.rus,
            edges: doc.edges,
            oclouds: doc.oclouds,
        })
    }
}

impl From<Scenario> for ScenarioDoc {
    fn from(s: Scenario) -> Self {
        ScenarioDoc {
            schema: SCENARIO_SCHEMA.into(),
            seed: s.seed,
            area: s.area,
            load_fraction: s.load_fraction,
            constants: s.constants,
            cost: s.cost,
            burst: s.burst,
            demand: s.demand,
            topology: s.topology,
            rus: s.rus,
            edges: s.edges,
            oclouds: s.oclouds,
        }
    }
}

/// Everything needed to build a [`Scenario`].
#[derive(Debug, Clone)]
pub struct ScenarioParts {
    pub seed: u64,
    pub area: Area,
    pub load_fraction: f64,
    pub constants: Constants,
    pub cost: CostModel,
    pub burst: BurstModel,
    pub demand: DemandModel,
    pub topology: PonTopology,
    pub rus: Vec<RuNode>,
    pub edges: Vec<CloudNode>,
    pub oclouds: Vec<CloudNode>,
}

impl Scenario {
    pub fn new(parts: ScenarioParts) -> Result<Self> {
        let ScenarioParts {
            seed,
            area,
            load_fraction,
            constants,
            cost,
            burst,
            demand,
            topology,
            rus,
            edges,
            oclouds,
        } = parts;
        let mut sc = Scenario {
            seed,
            area,
            load_fraction,
            constants,
            cost,
            burst,
            demand,
            topology,
            rus,
            edges,
            oclouds,
            reach: Reachability::default(),
        };
        sc.validate()?;
        sc.refresh_reachability()?;
        Ok(sc)
    }

    /// Recomputes reachability after RU, cloud or tree data was edited.
    pub fn refresh_reachability(&mut self) -> Result<()> {
        let ru_pos: Vec<_> = self.rus.iter().map(|r| r.position).collect();
        let edge_pos: Vec<_> = self.edges.iter().map(|c| c.position).collect();
        let oc_pos: Vec<_> = self.oclouds.iter().map(|c| c.position).collect();
        if self.topology.tree.level1.is_empty() && !self.edges.is_empty() {
            return Err(Error::Topology("edge clouds need at least one level-1 splitter".into()));
        }
        self.reach = compute_reachability(
            &self.topology.tree,
            &ru_pos,
            &edge_pos,
            &oc_pos,
            self.topology.multi_branch,
        )?;
        Ok(())
    }

    fn validate(&self) -> Result<()> {
        self.cost.validate()?;
        self.burst.validate()?;
        let c = &self.constants;
        if !(c.tti_s > 0.0 && c.fiber_speed_km_per_s > 0.0 && c.epsilon > 0.0) {
            return Err(Error::Config("TTI, fibre speed and epsilon must be positive".into()));
        }
        let mut ids = HashSet::new();
        for ru in &self.rus {
            if !ids.insert(ru.id.as_str()) {
                return Err(Error::Config(format!("duplicate id {}", ru.id)));
            }
            let demands = [
                ru.demand_ul_bps,
                ru.demand_dl_bps,
                ru.ducu_ul_gops_per_tti,
                ru.ducu_dl_gops_per_tti,
                ru.ru_ul_gops_per_tti,
                ru.ru_dl_gops_per_tti,
            ];
            if demands.iter().any(|d| !(*d >= 0.0 && d.is_finite())) {
                return Err(Error::Config(format!("RU {} has a negative demand", ru.id)));
            }
            if !(ru.ru_capacity_ul_gops_per_tti > 0.0 && ru.ru_capacity_dl_gops_per_tti > 0.0) {
                return Err(Error::Config(format!("RU {} has no processing capacity", ru.id)));
            }
            if ru.ru_ul_gops_per_tti > ru.ru_capacity_ul_gops_per_tti
                || ru.ru_dl_gops_per_tti > ru.ru_capacity_dl_gops_per_tti
            {
                return Err(Error::Config(format!(
                    "RU {} cannot process its own share",
                    ru.id
                )));
            }
            if !(ru.xhaul_bound_s > 0.0 && ru.processing_bound_s > 0.0) {
                return Err(Error::Config(format!("RU {} latency bounds must be positive", ru.id)));
            }
            if !ru.position.is_finite() {
                return Err(Error::Config(format!("RU {} has a non-finite position", ru.id)));
            }
        }
        for (kind, list) in [(CloudKind::Edge, &self.edges), (CloudKind::OCloud, &self.oclouds)] {
            for cl in list {
                if !ids.insert(cl.id.as_str()) {
                    return Err(Error::Config(format!("duplicate id {}", cl.id)));
                }
                if kind == CloudKind::Edge && cl.mno.is_none() {
                    return Err(Error::Config(format!("edge cloud {} has no operator", cl.id)));
                }
                let caps = [
                    cl.compute_ul_gops_per_tti,
                    cl.compute_dl_gops_per_tti,
                    cl.link_ul_bps,
                    cl.link_dl_bps,
                ];
                if caps.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                    return Err(Error::Config(format!("cloud {} capacities must be positive", cl.id)));
                }
                if !(cl.burst_interval_s > 0.0 && cl.burst_interval_s <= c.tti_s) {
                    return Err(Error::Config(format!(
                        "cloud {} burst interval must lie in (0, TTI]",
                        cl.id
                    )));
                }
                if !(cl.queue_delay_s >= 0.0) {
                    return Err(Error::Config(format!("cloud {} queue delay is negative", cl.id)));
                }
            }
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        Ok(toml::from_str(s)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_toml_string()?)?;
        Ok(())
    }

    pub fn reachability(&self) -> &Reachability {
        &self.reach
    }

    pub fn n_rus(&self) -> usize {
        self.rus.len()
    }

    pub fn n_sites(&self) -> usize {
        self.edges.len() + self.oclouds.len()
    }

    /// Edges first, then O-Clouds.
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (0..self.edges.len())
            .map(Site::Edge)
            .chain((0..self.oclouds.len()).map(Site::OCloud))
    }

    /// Dense index of a site: edges occupy `0..E`, O-Clouds `E..E+Q`.
    pub fn site_index(&self, site: Site) -> usize {
        match site {
            Site::Edge(e) => e,
            Site::OCloud(q) => self.edges.len() + q,
        }
    }

    pub fn site_at(&self, index: usize) -> Site {
        if index < self.edges.len() {
            Site::Edge(index)
        } else {
            Site::OCloud(index - self.edges.len())
        }
    }

    pub fn cloud(&self, site: Site) -> &CloudNode {
        match site {
            Site::Edge(e) => &self.edges[e],
            Site::OCloud(q) => &self.oclouds[q],
        }
    }

    pub fn find_site(&self, id: &str) -> Option<Site> {
        self.sites().find(|s| self.cloud(*s).id == id)
    }

    pub fn find_ru(&self, id: &str) -> Option<usize> {
        self.rus.iter().position(|r| r.id == id)
    }

    pub fn reachable(&self, r: usize, site: Site) -> bool {
        match site {
            Site::Edge(e) => self.reach.z_edge[r][e],
            Site::OCloud(q) => self.reach.z_ocloud[r][q],
        }
    }

    pub fn distance_km(&self, r: usize, site: Site) -> f64 {
        match site {
            Site::Edge(e) => self.reach.d_edge[r][e],
            Site::OCloud(q) => self.reach.d_ocloud[r][q],
        }
    }

    /// Compute-cost multiplier for RU `r` leasing at `site`.
    pub fn gamma(&self, r: usize, site: Site) -> f64 {
        match site {
            Site::Edge(e) if self.edges[e].mno == Some(self.rus[r].mno) => self.cost.gamma_same_mno,
            _ => self.cost.gamma_other,
        }
    }

    /// Operators present, in ascending order, with their RU counts.
    pub fn mno_counts(&self) -> BTreeMap<MnoId, usize> {
        let mut m = BTreeMap::new();
        for ru in &self.rus {
            *m.entry(ru.mno).or_insert(0) += 1;
        }
        m
    }
}
