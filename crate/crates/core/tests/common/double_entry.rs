//! A second, deliberately naive implementation of the constraints and the
//! cost model. It reads only raw scenario data (positions, splitter
//! membership, demands, capacities) and never calls the library's
//! reachability, share, latency or cost code.

use xhaul_fair::topology::Point2D;
use xhaul_fair::{Scenario, Site};

#[derive(Debug, Clone)]
pub struct Audit {
    pub feasible: bool,
    /// `(ru, what)` for every violation found.
    pub violations: Vec<(usize, &'static str)>,
    pub costs: Vec<f64>,
    /// Smallest relative distance of any checked quantity to its bound;
    /// verdicts closer than ~1e-9 are at the mercy of rounding order.
    pub min_margin: f64,
}

fn dist(a: Point2D, b: Point2D) -> f64 {
    ((a.x_km - b.x_km).powi(2) + (a.y_km - b.y_km).powi(2)).sqrt()
}

fn nearest(p: Point2D, pts: &[Point2D]) -> usize {
    let mut best = 0;
    for i in 1..pts.len() {
        if dist(p, pts[i]) < dist(p, pts[best]) {
            best = i;
        }
    }
    best
}

struct Geometry {
    ru_splitter: Vec<usize>,
    edge_splitter: Vec<usize>,
    ocloud_office: Vec<usize>,
}

impl Geometry {
    fn of(sc: &Scenario) -> Self {
        let tree = &sc.topology.tree;
        let mut ru_splitter = vec![usize::MAX; sc.rus.len()];
        for (s, l1) in tree.level1.iter().enumerate() {
            for &r in &l1.members {
                ru_splitter[r] = s;
            }
        }
        let l1: Vec<Point2D> = tree.level1.iter().map(|s| s.position).collect();
        Self {
            ru_splitter,
            edge_splitter: sc.edges.iter().map(|e| nearest(e.position, &l1)).collect(),
            ocloud_office: sc
                .oclouds
                .iter()
                .map(|q| nearest(q.position, &tree.central_offices))
                .collect(),
        }
    }

    fn reachable(&self, sc: &Scenario, r: usize, site: Site) -> bool {
        match site {
            Site::Edge(e) => sc.topology.multi_branch || self.ru_splitter[r] == self.edge_splitter[e],
            Site::OCloud(_) => true,
        }
    }

    fn km(&self, sc: &Scenario, r: usize, site: Site) -> f64 {
        let tree = &sc.topology.tree;
        let ru = sc.rus[r].position;
        let pa = tree.level1[self.ru_splitter[r]].position;
        match site {
            Site::Edge(e) => {
                let pb = tree.level1[self.edge_splitter[e]].position;
                let to = sc.edges[e].position;
                if self.ru_splitter[r] == self.edge_splitter[e] {
                    dist(ru, pa) + dist(pa, to)
                } else {
                    dist(ru, pa) + dist(pa, tree.level2) + dist(tree.level2, pb) + dist(pb, to)
                }
            }
            Site::OCloud(q) => {
                let co = tree.central_offices[self.ocloud_office[q]];
                dist(ru, pa) + dist(pa, tree.level2) + dist(tree.level2, co)
            }
        }
    }
}

/// Independent verdict on `choices` (one cloud or none per RU).
pub fn audit(sc: &Scenario, choices: &[Option<Site>]) -> Audit {
    assert_eq!(choices.len(), sc.rus.len());
    let geo = Geometry::of(sc);
    let eps = sc.constants.epsilon;
    let tti = sc.constants.tti_s;

    let tenants = |site: Site| -> Vec<usize> {
        (0..sc.rus.len()).filter(|&m| choices[m] == Some(site)).collect()
    };

    let mut violations = Vec::new();
    let mut costs = Vec::new();
    let mut min_margin = f64::INFINITY;
    for (r, choice) in choices.iter().enumerate() {
        let ru = &sc.rus[r];
        let Some(site) = *choice else {
            costs.push(sc.cost.default_fee);
            continue;
        };
        let cloud = match site {
            Site::Edge(e) => &sc.edges[e],
            Site::OCloud(q) => &sc.oclouds[q],
        };
        let group = tenants(site);
        let sum = |f: fn(&xhaul_fair::RuNode) -> f64| group.iter().map(|&m| f(&sc.rus[m])).sum::<f64>();
        let w_ul = sum(|x| x.demand_ul_bps);
        let w_dl = sum(|x| x.demand_dl_bps);
        let g_ul = sum(|x| x.ducu_ul_gops_per_tti);
        let g_dl = sum(|x| x.ducu_dl_gops_per_tti);

        if !geo.reachable(sc, r, site) {
            violations.push((r, "reachability"));
        }

        let bursts = {
            let k = tti / cloud.burst_interval_s;
            if (k - k.round()).abs() < 1e-9 * k.max(1.0) {
                k.round()
            } else {
                k.ceil()
            }
        };
        let prop = geo.km(sc, r, site) / sc.constants.fiber_speed_km_per_s;
        let up = cloud.queue_delay_s + prop + bursts * cloud.burst_interval_s * w_ul / cloud.link_ul_bps;
        let down = prop + bursts * cloud.burst_interval_s * w_dl / cloud.link_dl_bps;
        let budget = ru.processing_bound_s / tti;
        let p_ul = ru.ru_ul_gops_per_tti / ru.ru_capacity_ul_gops_per_tti + g_ul / cloud.compute_ul_gops_per_tti;
        let p_dl = ru.ru_dl_gops_per_tti / ru.ru_capacity_dl_gops_per_tti + g_dl / cloud.compute_dl_gops_per_tti;
        for (value, bound, what) in [
            (up, ru.xhaul_bound_s, "uplink-latency"),
            (down, ru.xhaul_bound_s, "downlink-latency"),
            (p_ul, budget, "uplink-processing"),
            (p_dl, budget, "downlink-processing"),
        ] {
            min_margin = min_margin.min(((bound - value) / bound).abs());
            if value > bound * (1.0 + 1e-12) {
                violations.push((r, what));
            }
        }

        let gbps = (ru.demand_ul_bps * cloud.link_ul_bps / (eps + w_ul)
            + ru.demand_dl_bps * cloud.link_dl_bps / (eps + w_dl))
            / 1e9;
        let gops = ru.ducu_ul_gops_per_tti * cloud.compute_ul_gops_per_tti / (eps + g_ul)
            + ru.ducu_dl_gops_per_tti * cloud.compute_dl_gops_per_tti / (eps + g_dl);
        let own_edge = matches!(site, Site::Edge(_)) && cloud.mno == Some(ru.mno);
        let gamma = if own_edge { sc.cost.gamma_same_mno } else { sc.cost.gamma_other };
        costs.push(sc.cost.default_fee + sc.cost.per_gbps * gbps + sc.cost.per_gops * gamma * gops);
    }
    Audit {
        feasible: violations.is_empty(),
        violations,
        costs,
        min_margin,
    }
}

/// Asserts that the audit accepts `choices` and that its costs agree with
/// `costs` to 1e-9 relative.
pub fn confirm(sc: &Scenario, choices: &[Option<Site>], costs: &[f64]) -> Result<(), String> {
    let a = audit(sc, choices);
    if !a.feasible {
        return Err(format!("double entry rejects: {:?}", a.violations));
    }
    for (r, (x, y)) in a.costs.iter().zip(costs).enumerate() {
        if (x - y).abs() > 1e-9 * x.abs().max(1.0) {
            return Err(format!("RU {r}: cost {y} but double entry says {x}"));
        }
    }
    Ok(())
}
