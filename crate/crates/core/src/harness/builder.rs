//! Hand-built instances.

use crate::error::Result;
use crate::radio::{BurstModel, SplitOption};
use crate::scenario::{
    CellKind, CloudNode, Constants, CostModel, DemandModel, MnoId, PonTopology, RuNode, Scenario,
    ScenarioParts, TrafficClass,
};
use crate::topology::{place_splitters, Area, Level1Splitter, Point2D, SplitterTree};

/// A broadband RU with generous bounds and ample local capacity. Demands
/// are in bit/s and GOPS/TTI.
pub fn simple_ru(
    id: impl Into<String>,
    mno: MnoId,
    position: Point2D,
    demand_bps: (f64, f64),
    ducu_gops: (f64, f64),
) -> RuNode {
    RuNode {
        id: id.into(),
        mno,
        cell: CellKind::Small,
        position,
        traffic_class: TrafficClass::Broadband,
        demand_ul_bps: demand_bps.0,
        demand_dl_bps: demand_bps.1,
        ducu_ul_gops_per_tti: ducu_gops.0,
        ducu_dl_gops_per_tti: ducu_gops.1,
        ru_ul_gops_per_tti: 0.0,
        ru_dl_gops_per_tti: 0.0,
        ru_capacity_ul_gops_per_tti: 5000.0,
        ru_capacity_dl_gops_per_tti: 5000.0,
        xhaul_bound_s: 1e-3,
        processing_bound_s: 0.5e-3,
        uplink_split: SplitOption::split_7_2(),
        downlink_split: SplitOption::split_7_3(),
        demand_weight: 1.0,
    }
}

/// A cloud with symmetric link and compute capacity, 31.25 us bursts and
/// 15 us queuing.
pub fn simple_cloud(
    id: impl Into<String>,
    mno: Option<MnoId>,
    position: Point2D,
    link_bps: f64,
    compute_gops: f64,
) -> CloudNode {
    CloudNode {
        id: id.into(),
        mno,
        position,
        compute_ul_gops_per_tti: compute_gops,
        compute_dl_gops_per_tti: compute_gops,
        link_ul_bps: link_bps,
        link_dl_bps: link_bps,
        burst_interval_s: 31.25e-6,
        queue_delay_s: 15e-6,
    }
}

/// Assembles a [`Scenario`] piece by piece.
///
/// Without an explicit tree, level-1 splitters are placed by k-means over
/// the RUs, and central offices default to the O-Cloud positions.
#[derive(Debug, Clone)]
pub struct ScenarioBuilder {
    seed: u64,
    area: Area,
    load_fraction: f64,
    constants: Constants,
    cost: CostModel,
    burst: BurstModel,
    demand: DemandModel,
    multi_branch: bool,
    splitters: usize,
    tree: Option<SplitterTree>,
    central_offices: Vec<Point2D>,
    rus: Vec<RuNode>,
    edges: Vec<CloudNode>,
    oclouds: Vec<CloudNode>,
}

impl ScenarioBuilder {
    pub fn new(area: Area) -> Self {
        Self {
            seed: 0,
            area,
            load_fraction: 1.0,
            constants: Constants::default(),
            cost: CostModel::default(),
            burst: BurstModel::default(),
            demand: DemandModel::default(),
            multi_branch: true,
            splitters: 1,
            tree: None,
            central_offices: Vec::new(),
            rus: Vec::new(),
            edges: Vec::new(),
            oclouds: Vec::new(),
        }
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn load_fraction(mut self, f: f64) -> Self {
        self.load_fraction = f;
        self
    }

    pub fn constants(mut self, c: Constants) -> Self {
        self.constants = c;
        self
    }

    pub fn cost(mut self, c: CostModel) -> Self {
        self.cost = c;
        self
    }

    pub fn burst(mut self, b: BurstModel) -> Self {
        self.burst = b;
        self
    }

    pub fn demand(mut self, d: DemandModel) -> Self {
        self.demand = d;
        self
    }

    pub fn multi_branch(mut self, on: bool) -> Self {
        self.multi_branch = on;
        self
    }

    /// Number of level-1 splitters for k-means placement.
    pub fn splitters(mut self, k: usize) -> Self {
        self.splitters = k;
        self
    }

    pub fn tree(mut self, tree: SplitterTree) -> Self {
        self.tree = Some(tree);
        self
    }

    pub fn central_offices(mut self, cos: Vec<Point2D>) -> Self {
        self.central_offices = cos;
        self
    }

    pub fn ru(mut self, ru: RuNode) -> Self {
        self.rus.push(ru);
        self
    }

    pub fn rus(mut self, rus: impl IntoIterator<Item = RuNode>) -> Self {
        self.rus.extend(rus);
        self
    }

    pub fn edge(mut self, cloud: CloudNode) -> Self {
        self.edges.push(cloud);
        self
    }

    pub fn ocloud(mut self, cloud: CloudNode) -> Self {
        self.oclouds.push(cloud);
        self
    }

    pub fn build(self) -> Result<Scenario> {
        let tree = match self.tree {
            Some(t) => t,
            None if self.rus.is_empty() => SplitterTree {
                level1: vec![Level1Splitter {
                    position: self.area.center(),
                    members: Vec::new(),
                }],
                level2: self.area.center(),
                central_offices: Vec::new(),
            },
            None => {
                let pos: Vec<_> = self.rus.iter().map(|r| r.position).collect();
                place_splitters(&pos, self.splitters.min(pos.len()), self.seed, &self.area)?
            }
        };
        let tree = if !self.central_offices.is_empty() {
            tree.with_central_offices(self.central_offices)
        } else if tree.central_offices.is_empty() {
            let cos = self.oclouds.iter().map(|c| c.position).collect();
            tree.with_central_offices(cos)
        } else {
            tree
        };
        Scenario::new(ScenarioParts {
            seed: self.seed,
            area: self.area,
            load_fraction: self.load_fraction,
            constants: self.constants,
            cost: self.cost,
            burst: self.burst,
            demand: self.demand,
            topology: PonTopology {
                multi_branch: self.multi_branch,
                tree,
            },
            rus: self.rus,
            edges: self.edges,
            oclouds: self.oclouds,
        })
    }
}
