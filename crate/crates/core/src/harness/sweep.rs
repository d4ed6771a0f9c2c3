//! Load and resource-ratio sweeps.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::generate::{generate_scenario, GeneratorConfig};
use crate::error::{Error, Result};
use crate::scenario::{MnoId, Scenario, Site};
use crate::solvers::{solve, SolverKind, SolverParams, SolverResult};

pub const SWEEP_SCHEMA: &str = "xhaul-fair/sweep-v1";

/// Solver label of the rows comparing the heuristic with the baseline.
pub const COMPARISON: &str = "heuristic_vs_baseline";

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioPoint {
    pub edge: f64,
    pub ocloud: f64,
}

fn default_ratios() -> Vec<RatioPoint> {
    [(0.25, 0.75), (0.5, 0.5), (0.75, 0.25)]
        .into_iter()
        .map(|(edge, ocloud)| RatioPoint { edge, ocloud })
        .collect()
}

fn default_solvers() -> Vec<SolverKind> {
    vec![SolverKind::Heuristic, SolverKind::Baseline]
}

fn default_tau() -> f64 {
    0.2
}

fn default_limit() -> f64 {
    1e7
}

/// A grid of (load, ratio, seed) cells, each solved by every listed solver.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub schema: String,
    pub load_fractions: Vec<f64>,
    #[serde(default = "default_ratios")]
    pub ratios: Vec<RatioPoint>,
    pub seeds: Vec<u64>,
    #[serde(default = "default_solvers")]
    pub solvers: Vec<SolverKind>,
    #[serde(default = "default_tau")]
    pub tau: f64,
    #[serde(default = "default_limit")]
    pub exact_limit: f64,
    /// Deployment parameters; the load and ratio fields are overridden per
    /// cell.
    #[serde(default)]
    pub generator: GeneratorConfig,
}

impl SweepSpec {
    pub fn new(load_fractions: Vec<f64>, seeds: Vec<u64>) -> Self {
        Self {
            schema: SWEEP_SCHEMA.into(),
            load_fractions,
            ratios: default_ratios(),
            seeds,
            solvers: default_solvers(),
            tau: default_tau(),
            exact_limit: default_limit(),
            generator: GeneratorConfig::paper(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SWEEP_SCHEMA {
            return Err(Error::Config(format!("unsupported sweep schema {:?}", self.schema)));
        }
        if let Some(f) = self.load_fractions.iter().find(|f| !(**f > 0.0 && **f <= 1.0)) {
            return Err(Error::Config(format!("load fraction {f} must lie in (0, 1]")));
        }
        for r in &self.ratios {
            if (r.edge + r.ocloud - 1.0).abs() > 1e-9 || r.edge < 0.0 || r.ocloud < 0.0 {
                return Err(Error::Config(format!(
                    "ratio {}:{} must be non-negative and sum to 1",
                    r.edge, r.ocloud
                )));
            }
        }
        if !(self.tau >= 0.0) {
            return Err(Error::Config("tau must be non-negative".into()));
        }
        if !(self.exact_limit >= 1.0) {
            return Err(Error::Config("exact limit must be at least 1".into()));
        }
        Ok(())
    }

    pub fn from_toml_str(s: &str) -> Result<Self> {
        let spec: Self = toml::from_str(s)?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        Ok(toml::to_string(self)?)
    }

    fn params(&self) -> SolverParams {
        let mut p = SolverParams::default();
        p.heuristic.tau = self.tau;
        p.exact_limit = self.exact_limit as u128;
        p
    }
}

/// One tidy row: one metric of one solver in one cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub load_fraction: f64,
    pub edge_ratio: f64,
    pub ocloud_ratio: f64,
    pub seed: u64,
    pub solver: String,
    pub metric: String,
    pub mno: Option<MnoId>,
    pub value: Option<f64>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SweepTable {
    pub currency: String,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn write_csv<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "# schema={SWEEP_SCHEMA} currency={}", self.currency)?;
        let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
        out.write_record([
            "load_fraction",
            "edge_ratio",
            "ocloud_ratio",
            "seed",
            "solver",
            "metric",
            "mno",
            "value",
            "note",
        ])?;
        for row in &self.rows {
            out.serialize(row)?;
        }
        out.flush()?;
        Ok(())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut buf = Vec::new();
        self.write_csv(&mut buf)?;
        Ok(String::from_utf8(buf).expect("csv output is utf-8"))
    }

    /// Values of `metric` for `solver`, keyed by (load, edge ratio, seed).
    pub fn values(&self, solver: &str, metric: &str, mno: Option<MnoId>) -> BTreeMap<(u64, u64, u64), f64> {
        self.rows
            .iter()
            .filter(|r| r.solver == solver && r.metric == metric && r.mno == mno)
            .filter_map(|r| {
                r.value
                    .map(|v| ((r.load_fraction.to_bits(), r.edge_ratio.to_bits(), r.seed), v))
            })
            .collect()
    }
}

struct Cell {
    load: f64,
    ratio: RatioPoint,
    seed: u64,
}

impl Cell {
    fn row(&self, solver: &str, metric: &str, mno: Option<MnoId>, value: Option<f64>, note: String) -> SweepRow {
        SweepRow {
            load_fraction: self.load,
            edge_ratio: self.ratio.edge,
            ocloud_ratio: self.ratio.ocloud,
            seed: self.seed,
            solver: solver.into(),
            metric: metric.into(),
            mno,
            value,
            note,
        }
    }
}

fn metric_rows(cell: &Cell, sc: &Scenario, res: &SolverResult, out: &mut Vec<SweepRow>) {
    let name = res.solver.name();
    let (mut edge_bps, mut oc_bps, mut edge_gops, mut oc_gops, mut edge_rus) = (0.0, 0.0, 0.0, 0.0, 0usize);
    for (r, ru) in sc.rus.iter().enumerate() {
        let bps = ru.demand_ul_bps + ru.demand_dl_bps;
        let gops = ru.ducu_ul_gops_per_tti + ru.ducu_dl_gops_per_tti;
        match res.assignment.site_of(r) {
            Some(Site::Edge(_)) => {
                edge_bps += bps;
                edge_gops += gops;
                edge_rus += 1;
            }
            Some(Site::OCloud(_)) => {
                oc_bps += bps;
                oc_gops += gops;
            }
            None => {}
        }
    }
    let n = sc.n_rus().max(1) as f64;
    let mut push = |metric: &str, mno: Option<MnoId>, v: f64| out.push(cell.row(name, metric, mno, Some(v), String::new()));
    push("edge_throughput_gbps", None, edge_bps / 1e9);
    push("ocloud_throughput_gbps", None, oc_bps / 1e9);
    push("edge_gops_per_tti", None, edge_gops);
    push("ocloud_gops_per_tti", None, oc_gops);
    push("edge_ru_fraction", None, edge_rus as f64 / n);
    push("outage_count", None, res.outage_rus.len() as f64);
    push("iterations", None, res.iterations as f64);
    if let Some(m) = res.objective {
        push("max_cost", None, m);
    }
    push("opex_total", None, res.opex.total);
    for (&m, &c) in &res.opex.per_mno {
        push("opex", Some(m), c);
    }
}

fn reduction_rows(cell: &Cell, heuristic: &SolverResult, baseline: &SolverResult, out: &mut Vec<SweepRow>) {
    let pct = |h: f64, b: f64| if b > 0.0 { Some(100.0 * (b - h) / b) } else { None };
    for (&m, &b) in &baseline.opex.per_mno {
        let h = heuristic.opex.per_mno.get(&m).copied().unwrap_or(0.0);
        out.push(cell.row(COMPARISON, "opex_reduction_pct", Some(m), pct(h, b), String::new()));
    }
    out.push(cell.row(
        COMPARISON,
        "opex_reduction_pct",
        None,
        pct(heuristic.opex.total, baseline.opex.total),
        String::new(),
    ));
}

fn run_cell(spec: &SweepSpec, cell: &Cell) -> Vec<SweepRow> {
    let cfg = spec
        .generator
        .clone()
        .with_load(cell.load)
        .with_ratio(cell.ratio.edge, cell.ratio.ocloud);
    let sc = match generate_scenario(&cfg, cell.seed) {
        Ok(sc) => sc,
        Err(e) => return vec![cell.row("generator", "error", None, None, e.to_string())],
    };
    let params = spec.params();
    let mut rows = Vec::new();
    let mut results: BTreeMap<SolverKind, SolverResult> = BTreeMap::new();
    for &kind in &spec.solvers {
        match solve(&sc, kind, &params) {
            Ok(res) => {
                metric_rows(cell, &sc, &res, &mut rows);
                results.insert(kind, res);
            }
            Err(e) => rows.push(cell.row(kind.name(), "error", None, None, e.to_string())),
        }
    }
    if let (Some(h), Some(b)) = (results.get(&SolverKind::Heuristic), results.get(&SolverKind::Baseline)) {
        reduction_rows(cell, h, b, &mut rows);
    }
    rows
}

/// Runs every cell of `spec` in parallel. Rows come out in (load, ratio,
/// seed) order regardless of scheduling; wall times are left out so equal
/// specs give byte-identical tables.
pub fn run_sweep(spec: &SweepSpec) -> Result<SweepTable> {
    spec.validate()?;
    let cells: Vec<Cell> = spec
        .load_fractions
        .iter()
        .flat_map(|&load| {
            spec.ratios.iter().flat_map(move |&ratio| {
                spec.seeds.iter().map(move |&seed| Cell { load, ratio, seed })
            })
        })
        .collect();
    let rows = cells
        .par_iter()
        .map(|c| run_cell(spec, c))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    Ok(SweepTable {
        currency: spec.generator.cost.currency.clone(),
        rows,
    })
}

/// Mean and sample standard deviation over seeds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryRow {
    pub load_fraction: f64,
    pub edge_ratio: f64,
    pub ocloud_ratio: f64,
    pub solver: String,
    pub metric: String,
    pub mno: Option<MnoId>,
    pub n: usize,
    pub mean: f64,
    pub std: f64,
}

pub fn summarize(table: &SweepTable) -> Vec<SummaryRow> {
    type Key = (u64, u64, u64, String, String, Option<MnoId>);
    let mut groups: BTreeMap<Key, Vec<f64>> = BTreeMap::new();
    let mut order: Vec<Key> = Vec::new();
    for r in &table.rows {
        let Some(v) = r.value else { continue };
        let key = (
            r.load_fraction.to_bits(),
            r.edge_ratio.to_bits(),
            r.ocloud_ratio.to_bits(),
            r.solver.clone(),
            r.metric.clone(),
            r.mno,
        );
        let entry = groups.entry(key.clone()).or_default();
        if entry.is_empty() {
            order.push(key);
        }
        entry.push(v);
    }
    order
        .into_iter()
        .map(|key| {
            let v = &groups[&key];
            let n = v.len();
            let mean = v.iter().sum::<f64>() / n as f64;
            let std = if n > 1 {
                (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt()
            } else {
                0.0
            };
            SummaryRow {
                load_fraction: f64::from_bits(key.0),
                edge_ratio: f64::from_bits(key.1),
                ocloud_ratio: f64::from_bits(key.2),
                solver: key.3,
                metric: key.4,
                mno: key.5,
                n,
                mean,
                std,
            }
        })
        .collect()
}
