//! Seeded scenario generation.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::builder::{simple_cloud, simple_ru, ScenarioBuilder};
use super::load::apply_load;
use crate::error::{Error, Result};
use crate::radio::{BurstModel, SplitOption};
use crate::scenario::{
    CellKind, CloudNode, Constants, CostModel, DemandModel, MnoId, PonTopology, RuNode, Scenario,
    ScenarioParts, TrafficClass,
};
use crate::topology::{place_splitters, Area, Point2D};

// RNG streams, so that changing one draw does not shift the others.
const STREAM_PLACEMENT: u64 = 1;
const STREAM_OWNERSHIP: u64 = 2;
const STREAM_CLASS: u64 = 3;
const STREAM_WEIGHT: u64 = 4;
const STREAM_SPLITTERS: u64 = 5;

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

/// Latency bounds of one traffic class.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassBounds {
    pub xhaul_bound_s: f64,
    pub processing_bound_s: f64,
}

/// Parameters of the metropolitan deployment. Fields missing from a file
/// take their [`GeneratorConfig::paper`] value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub area_side_km: f64,
    pub macro_cells: usize,
    pub small_cells: usize,
    pub macro_radius_km: f64,
    pub small_radius_km: f64,
    /// Minimum RU spacing as a fraction of the larger coverage radius.
    pub min_separation_factor: f64,
    pub max_placement_attempts: u32,
    /// Ownership fraction of MNO-1, MNO-2, ...
    pub mno_shares: Vec<f64>,
    pub low_latency_fraction: f64,
    pub low_latency: ClassBounds,
    pub broadband: ClassBounds,
    pub macro_demand_weight: f64,
    pub small_demand_weight: f64,
    /// Each weight is multiplied by a uniform draw from `[1 - j, 1 + j]`.
    pub demand_jitter: f64,
    pub level1_splitters: usize,
    pub multi_branch: bool,
    pub central_offices: Vec<Point2D>,
    pub edge_link_bps: f64,
    pub ocloud_link_bps: f64,
    /// Compute of one cloud before the edge:O-Cloud ratio is applied.
    pub cloud_compute_gops_per_tti: f64,
    pub edge_ratio: f64,
    pub ocloud_ratio: f64,
    pub burst_interval_s: f64,
    pub queue_delay_s: f64,
    pub ru_capacity_gops_per_tti: f64,
    pub uplink_split: SplitOption,
    pub downlink_split: SplitOption,
    pub load_fraction: f64,
    pub constants: Constants,
    pub cost: CostModel,
    pub burst: BurstModel,
    pub demand: DemandModel,
}

impl GeneratorConfig {
    /// The 5 x 5 km deployment with 8 macro and 30 small cells of three
    /// operators.
    pub fn paper() -> Self {
        Self {
            area_side_km: 5.0,
            macro_cells: 8,
            small_cells: 30,
            macro_radius_km: 1.0,
            small_radius_km: 0.5,
            min_separation_factor: 0.25,
            max_placement_attempts: 10_000,
            mno_shares: vec![0.25, 0.35, 0.40],
            low_latency_fraction: 0.25,
            low_latency: ClassBounds {
                xhaul_bound_s: 100e-6,
                processing_bound_s: 90e-6,
            },
            broadband: ClassBounds {
                xhaul_bound_s: 1e-3,
                processing_bound_s: 0.5e-3,
            },
            macro_demand_weight: 2.0,
            small_demand_weight: 1.0,
            demand_jitter: 0.3,
            level1_splitters: 4,
            multi_branch: true,
            central_offices: vec![Point2D::new(0.0, 0.0), Point2D::new(5.0, 5.0)],
            edge_link_bps: 25e9,
            ocloud_link_bps: 100e9,
            cloud_compute_gops_per_tti: 1e4,
            edge_ratio: 0.5,
            ocloud_ratio: 0.5,
            burst_interval_s: 31.25e-6,
            queue_delay_s: 15e-6,
            ru_capacity_gops_per_tti: 5000.0,
            uplink_split: SplitOption::split_7_2(),
            downlink_split: SplitOption::split_7_3(),
            load_fraction: 0.8,
            constants: Constants::default(),
            cost: CostModel::default(),
            burst: BurstModel::default(),
            demand: DemandModel::default(),
        }
    }

    pub fn with_ratio(mut self, edge: f64, ocloud: f64) -> Self {
        self.edge_ratio = edge;
        self.ocloud_ratio = ocloud;
        self
    }

    pub fn with_load(mut self, f: f64) -> Self {
        self.load_fraction = f;
        self
    }

    fn validate(&self) -> Result<()> {
        let sum: f64 = self.mno_shares.iter().sum();
        if self.mno_shares.is_empty() || (sum - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("MNO shares sum to {sum}, not 1")));
        }
        if (self.edge_ratio + self.ocloud_ratio - 1.0).abs() > 1e-9
            || self.edge_ratio < 0.0
            || self.ocloud_ratio < 0.0
        {
            return Err(Error::Config("edge and O-Cloud ratios must be non-negative and sum to 1".into()));
        }
        if !(0.0..=1.0).contains(&self.low_latency_fraction) {
            return Err(Error::Config("low-latency fraction must lie in [0, 1]".into()));
        }
        if !(0.0..1.0).contains(&self.demand_jitter) {
            return Err(Error::Config("demand jitter must lie in [0, 1)".into()));
        }
        if self.central_offices.is_empty() {
            return Err(Error::Config("at least one central office is required".into()));
        }
        Ok(())
    }
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self::paper()
    }
}

/// Splits `n` items by `shares` with the largest-remainder rule; ties go to
/// the lower index.
pub fn largest_remainder(n: usize, shares: &[f64]) -> Vec<usize> {
    let quotas: Vec<f64> = shares.iter().map(|s| s * n as f64).collect();
    let mut counts: Vec<usize> = quotas.iter().map(|q| q.floor() as usize).collect();
    let mut rest = n.saturating_sub(counts.iter().sum());
    let mut by_remainder: Vec<usize> = (0..shares.len()).collect();
    by_remainder.sort_by(|&a, &b| {
        let ra = quotas[a] - quotas[a].floor();
        let rb = quotas[b] - quotas[b].floor();
        rb.total_cmp(&ra).then(a.cmp(&b))
    });
    for i in by_remainder {
        if rest == 0 {
            break;
        }
        counts[i] += 1;
        rest -= 1;
    }
    counts
}

fn place(
    cfg: &GeneratorConfig,
    seed: u64,
) -> Result<Vec<(CellKind, Point2D)>> {
    let mut rng = stream(seed, STREAM_PLACEMENT);
    let side = cfg.area_side_km;
    let mut placed: Vec<(CellKind, Point2D, f64)> = Vec::new();
    let cells = std::iter::repeat_n((CellKind::Macro, cfg.macro_radius_km), cfg.macro_cells)
        .chain(std::iter::repeat_n((CellKind::Small, cfg.small_radius_km), cfg.small_cells));
    for (kind, radius) in cells {
        if 2.0 * radius > side {
            return Err(Error::Placement {
                seed,
                reason: format!("coverage radius {radius} km does not fit the area"),
            });
        }
        let mut found = None;
        for _ in 0..cfg.max_placement_attempts {
            let p = Point2D::new(rng.gen_range(radius..=side - radius), rng.gen_range(radius..=side - radius));
            let clear = placed.iter().all(|(_, q, rq)| {
                p.distance(q) >= cfg.min_separation_factor * radius.max(*rq)
            });
            if clear {
                found = Some(p);
                break;
            }
        }
        let p = found.ok_or_else(|| Error::Placement {
            seed,
            reason: format!(
                "no free spot for RU {} after {} attempts",
                placed.len(),
                cfg.max_placement_attempts
            ),
        })?;
        placed.push((kind, p, radius));
    }
    Ok(placed.into_iter().map(|(k, p, _)| (k, p)).collect())
}

/// Operator of every RU: macro and small cells are each split by ownership
/// share, then shuffled.
fn owners(cfg: &GeneratorConfig, kinds: &[CellKind], seed: u64) -> Vec<MnoId> {
    let mut rng = stream(seed, STREAM_OWNERSHIP);
    let mut out = vec![0; kinds.len()];
    for kind in [CellKind::Macro, CellKind::Small] {
        let idx: Vec<usize> = (0..kinds.len()).filter(|&i| kinds[i] == kind).collect();
        let counts = largest_remainder(idx.len(), &cfg.mno_shares);
        let mut labels: Vec<MnoId> = counts
            .iter()
            .enumerate()
            .flat_map(|(m, &c)| std::iter::repeat_n(m as MnoId + 1, c))
            .collect();
        labels.shuffle(&mut rng);
        for (i, m) in idx.into_iter().zip(labels) {
            out[i] = m;
        }
    }
    out
}

/// Low-latency RUs, drawn within each operator in proportion to its size.
fn classes(cfg: &GeneratorConfig, mnos: &[MnoId], seed: u64) -> Vec<TrafficClass> {
    let mut rng = stream(seed, STREAM_CLASS);
    let mut out = vec![TrafficClass::Broadband; mnos.len()];
    let mut by_mno: BTreeMap<MnoId, Vec<usize>> = BTreeMap::new();
    for (i, &m) in mnos.iter().enumerate() {
        by_mno.entry(m).or_default().push(i);
    }
    for idx in by_mno.values_mut() {
        let n = (cfg.low_latency_fraction * idx.len() as f64).round() as usize;
        idx.shuffle(&mut rng);
        for &i in idx.iter().take(n) {
            out[i] = TrafficClass::LowLatency;
        }
    }
    out
}

/// Builds the deployment for `seed`.
///
/// Macro then small RUs are placed by rejection sampling with their whole
/// coverage disc inside the area. Every macro cell co-hosts an Edge-Cloud of
/// its operator; one O-Cloud sits at each central office. Demands are set by
/// [`apply_load`] at the configured load.
pub fn generate_scenario(cfg: &GeneratorConfig, seed: u64) -> Result<Scenario> {
    cfg.validate()?;
    let cells = place(cfg, seed)?;
    let kinds: Vec<CellKind> = cells.iter().map(|(k, _)| *k).collect();
    let mnos = owners(cfg, &kinds, seed);
    let classes = classes(cfg, &mnos, seed);
    let mut weight_rng = stream(seed, STREAM_WEIGHT);

    let mut rus = Vec::with_capacity(cells.len());
    let mut edges = Vec::new();
    for (i, (kind, pos)) in cells.iter().enumerate() {
        let bounds = match classes[i] {
            TrafficClass::LowLatency => cfg.low_latency,
            TrafficClass::Broadband => cfg.broadband,
        };
        let base = match kind {
            CellKind::Macro => cfg.macro_demand_weight,
            CellKind::Small => cfg.small_demand_weight,
        };
        let jitter = if cfg.demand_jitter > 0.0 {
            weight_rng.gen_range(1.0 - cfg.demand_jitter..=1.0 + cfg.demand_jitter)
        } else {
            1.0
        };
        let id = match kind {
            CellKind::Macro => format!("ru-m{i:02}"),
            CellKind::Small => format!("ru-s{:02}", i - cfg.macro_cells),
        };
        rus.push(RuNode {
            cell: *kind,
            traffic_class: classes[i],
            ru_capacity_ul_gops_per_tti: cfg.ru_capacity_gops_per_tti,
            ru_capacity_dl_gops_per_tti: cfg.ru_capacity_gops_per_tti,
            xhaul_bound_s: bounds.xhaul_bound_s,
            processing_bound_s: bounds.processing_bound_s,
            uplink_split: cfg.uplink_split,
            downlink_split: cfg.downlink_split,
            demand_weight: base * jitter,
            ..simple_ru(id, mnos[i], *pos, (0.0, 0.0), (0.0, 0.0))
        });
        if *kind == CellKind::Macro {
            edges.push(cloud(
                cfg,
                format!("edge-{i:02}"),
                Some(mnos[i]),
                *pos,
                cfg.edge_link_bps,
                cfg.edge_ratio,
            ));
        }
    }
    let oclouds = cfg
        .central_offices
        .iter()
        .enumerate()
        .map(|(q, p)| cloud(cfg, format!("ocloud-{q}"), None, *p, cfg.ocloud_link_bps, cfg.ocloud_ratio))
        .collect();

    let area = Area::square(cfg.area_side_km);
    let positions: Vec<_> = rus.iter().map(|r| r.position).collect();
    let splitter_seed = stream(seed, STREAM_SPLITTERS).next_u64();
    let tree = place_splitters(&positions, cfg.level1_splitters, splitter_seed, &area)?
        .with_central_offices(cfg.central_offices.clone());

    let sc = Scenario::new(ScenarioParts {
        seed,
        area,
        load_fraction: cfg.load_fraction,
        constants: cfg.constants.clone(),
        cost: cfg.cost.clone(),
        burst: cfg.burst.clone(),
        demand: cfg.demand.clone(),
        topology: PonTopology {
            multi_branch: cfg.multi_branch,
            tree,
        },
        rus,
        edges,
        oclouds,
    })?;
    apply_load(&sc, cfg.load_fraction)
}

fn cloud(
    cfg: &GeneratorConfig,
    id: String,
    mno: Option<MnoId>,
    position: Point2D,
    link_bps: f64,
    ratio: f64,
) -> CloudNode {
    // a ratio of zero still leaves a sliver so capacities stay positive
    let compute = (cfg.cloud_compute_gops_per_tti * ratio).max(1e-6);
    CloudNode {
        burst_interval_s: cfg.burst_interval_s,
        queue_delay_s: cfg.queue_delay_s,
        ..simple_cloud(id, mno, position, link_bps, compute)
    }
}

/// The default deployment at 80 % load with an even edge:O-Cloud split.
pub fn build_paper_scenario(seed: u64) -> Result<Scenario> {
    generate_scenario(&GeneratorConfig::paper(), seed)
}

/// Shape of a random small instance.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomInstanceConfig {
    pub max_rus: usize,
    pub max_edges: usize,
    pub oclouds: usize,
    pub side_km: f64,
}

impl Default for RandomInstanceConfig {
    fn default() -> Self {
        Self {
            max_rus: 6,
            max_edges: 2,
            oclouds: 1,
            side_km: 3.0,
        }
    }
}

/// A small random instance whose capacities and bounds are tight enough
/// that co-location, latency and processing limits all bind regularly.
pub fn random_instance(cfg: &RandomInstanceConfig, seed: u64) -> Result<Scenario> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side = cfg.side_km;
    let n_rus = rng.gen_range(1..=cfg.max_rus);
    let n_edges = rng.gen_range(0..=cfg.max_edges.min(n_rus));
    let point = |rng: &mut ChaCha8Rng| Point2D::new(rng.gen_range(0.0..=side), rng.gen_range(0.0..=side));

    let mut b = ScenarioBuilder::new(Area::square(side))
        .seed(seed)
        .splitters(rng.gen_range(1..=2))
        .multi_branch(rng.gen_bool(0.7));
    let mut ru_positions = Vec::new();
    for r in 0..n_rus {
        let low_latency = rng.gen_bool(0.3);
        let bounds = if low_latency {
            (100e-6, 90e-6)
        } else {
            (1e-3, 0.5e-3)
        };
        let pos = point(&mut rng);
        ru_positions.push(pos);
        let ru = RuNode {
            traffic_class: if low_latency {
                TrafficClass::LowLatency
            } else {
                TrafficClass::Broadband
            },
            ru_ul_gops_per_tti: rng.gen_range(0.0..200.0),
            ru_dl_gops_per_tti: rng.gen_range(0.0..200.0),
            xhaul_bound_s: bounds.0,
            processing_bound_s: bounds.1,
            ..simple_ru(
                format!("ru-{r}"),
                rng.gen_range(1..=3),
                pos,
                (rng.gen_range(0.1e9..2.3e9), rng.gen_range(0.05e9..0.45e9)),
                (rng.gen_range(20.0..400.0), rng.gen_range(20.0..400.0)),
            )
        };
        b = b.ru(ru);
    }
    for (e, &pos) in ru_positions.iter().take(n_edges).enumerate() {
        b = b.edge(CloudNode {
            compute_ul_gops_per_tti: rng.gen_range(200.0..2000.0),
            compute_dl_gops_per_tti: rng.gen_range(200.0..2000.0),
            link_ul_bps: rng.gen_range(5e9..25e9),
            link_dl_bps: rng.gen_range(5e9..25e9),
            ..simple_cloud(format!("edge-{e}"), Some(rng.gen_range(1..=3)), pos, 1.0, 1.0)
        });
    }
    for q in 0..cfg.oclouds {
        b = b.ocloud(CloudNode {
            compute_ul_gops_per_tti: rng.gen_range(300.0..3000.0),
            compute_dl_gops_per_tti: rng.gen_range(300.0..3000.0),
            link_ul_bps: rng.gen_range(10e9..100e9),
            link_dl_bps: rng.gen_range(10e9..100e9),
            ..simple_cloud(format!("ocloud-{q}"), None, point(&mut rng), 1.0, 1.0)
        });
    }
    b.build()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn largest_remainder_counts() {
        assert_eq!(largest_remainder(38, &[0.25, 0.35, 0.40]), [10, 13, 15]);
        assert_eq!(largest_remainder(8, &[0.25, 0.35, 0.40]), [2, 3, 3]);
        assert_eq!(largest_remainder(30, &[0.25, 0.35, 0.40]), [8, 10, 12]);
        assert_eq!(largest_remainder(0, &[0.5, 0.5]), [0, 0]);
    }

    #[test]
    fn paper_counts() {
        let sc = build_paper_scenario(11).unwrap();
        assert_eq!(sc.n_rus(), 38);
        assert_eq!(sc.edges.len(), 8);
        assert_eq!(sc.oclouds.len(), 2);
        let counts: Vec<_> = sc.mno_counts().into_values().collect();
        assert_eq!(counts, [10, 13, 15]);
        let low = sc.rus.iter().filter(|r| r.traffic_class == TrafficClass::LowLatency).count();
        assert_eq!(low, 3 + 3 + 4);
    }

    #[test]
    fn same_seed_same_file() {
        let a = build_paper_scenario(5).unwrap().to_toml_string().unwrap();
        let b = build_paper_scenario(5).unwrap().to_toml_string().unwrap();
        assert_eq!(a, b);
        assert_ne!(a, build_paper_scenario(6).unwrap().to_toml_string().unwrap());
    }

    #[test]
    fn crowded_area_fails_with_seed() {
        let cfg = GeneratorConfig {
            small_cells: 2000,
            max_placement_attempts: 50,
            ..GeneratorConfig::paper()
        };
        assert!(matches!(
            generate_scenario(&cfg, 3),
            Err(Error::Placement { seed: 3, .. })
        ));
    }

    #[test]
    fn random_instances_are_small() {
        for seed in 0..50 {
            let sc = random_instance(&RandomInstanceConfig::default(), seed).unwrap();
            assert!((1..=6).contains(&sc.n_rus()));
            assert!(sc.edges.len() <= 2);
            assert_eq!(sc.oclouds.len(), 1);
        }
    }
}
