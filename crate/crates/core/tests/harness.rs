mod common;

use approx::assert_relative_eq;
use xhaul_fair::harness::{
    aggregate_demand_bps, apply_load, build_paper_scenario, generate_scenario, run_sweep, summarize,
    GeneratorConfig, SweepSpec, SWEEP_SCHEMA,
};
use xhaul_fair::{solve_heuristic, HeuristicParams, Scenario, TrafficClass};

#[test]
fn default_deployment_has_the_stated_shape() {
    let sc = build_paper_scenario(3).unwrap();
    assert_eq!((sc.n_rus(), sc.edges.len(), sc.oclouds.len()), (38, 8, 2));
    // 25/35/40 % of 38 is 9.5/13.3/15.2; the half goes to the first operator
    let counts: Vec<_> = sc.mno_counts().into_values().collect();
    assert_eq!(counts, vec![10, 13, 15]);
    let low = sc.rus.iter().filter(|r| r.traffic_class == TrafficClass::LowLatency).count();
    assert!((9..=10).contains(&low));
    for r in 0..sc.n_rus() {
        assert!(sc.sites().any(|s| sc.reachable(r, s)), "RU {r} reaches nothing");
    }
    assert_eq!(sc.to_toml_string().unwrap(), build_paper_scenario(3).unwrap().to_toml_string().unwrap());
}

#[test]
fn load_sets_the_area_total() {
    let sc = build_paper_scenario(4).unwrap();
    for f in [0.2, 0.5, 0.8, 1.0] {
        let scaled = apply_load(&sc, f).unwrap();
        // 4 Gbps/km^2 over 25 km^2
        assert_relative_eq!(aggregate_demand_bps(&scaled), f * 100e9, max_relative = 0.01);
    }
}

#[test]
fn load_scales_every_ru_linearly() {
    let sc = build_paper_scenario(5).unwrap();
    let (a, b) = (apply_load(&sc, 0.4).unwrap(), apply_load(&sc, 0.8).unwrap());
    for (x, y) in a.rus.iter().zip(&b.rus) {
        assert_relative_eq!(2.0 * x.demand_ul_bps, y.demand_ul_bps, max_relative = 1e-12);
        assert_relative_eq!(2.0 * x.ducu_dl_gops_per_tti, y.ducu_dl_gops_per_tti, max_relative = 1e-12);
    }
    assert_eq!(apply_load(&sc, 0.4).unwrap(), a);
    assert!(apply_load(&sc, 0.0).is_err());
    assert!(apply_load(&sc, 1.5).is_err());
}

#[test]
fn scenario_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    let sc = build_paper_scenario(8).unwrap();
    sc.save(&path).unwrap();
    assert_eq!(Scenario::load(&path).unwrap(), sc);
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(text.contains("schema = \"xhaul-fair/scenario-v1\""));
    assert!(text.contains("demand_ul_bps"));
}

#[test]
fn empty_sweep_is_just_a_header() {
    let table = run_sweep(&SweepSpec::new(vec![], vec![1, 2])).unwrap();
    assert!(table.rows.is_empty());
    let csv = table.to_csv_string().unwrap();
    let lines: Vec<_> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0], format!("# schema={SWEEP_SCHEMA} currency=EUR"));
    assert!(lines[1].starts_with("load_fraction,edge_ratio,ocloud_ratio,seed,solver,metric"));
}

#[test]
fn one_cell_matches_a_direct_solve() {
    let mut spec = SweepSpec::new(vec![0.6], vec![21]);
    spec.ratios.truncate(1);
    let table = run_sweep(&spec).unwrap();
    let ratio = spec.ratios[0];
    let cfg = GeneratorConfig::paper().with_load(0.6).with_ratio(ratio.edge, ratio.ocloud);
    let sc = generate_scenario(&cfg, 21).unwrap();
    let res = solve_heuristic(&sc, &HeuristicParams::default());
    let pick = |metric: &str, mno| *table.values("heuristic", metric, mno).values().next().unwrap();
    assert_eq!(pick("max_cost", None), res.objective.unwrap());
    assert_eq!(pick("opex_total", None), res.opex.total);
    assert_eq!(pick("outage_count", None), res.outage_rus.len() as f64);
    for (&m, &c) in &res.opex.per_mno {
        assert_eq!(pick("opex", Some(m)), c);
    }
}

#[test]
fn sweeps_are_byte_reproducible() {
    let spec = SweepSpec::new(vec![0.4, 0.9], vec![1, 2, 3]);
    let a = run_sweep(&spec).unwrap().to_csv_string().unwrap();
    let b = run_sweep(&spec).unwrap().to_csv_string().unwrap();
    assert_eq!(a, b);
}

#[test]
fn reports_conserve_capacity_and_money() {
    for seed in 0..5 {
        let cfg = GeneratorConfig::paper().with_load(1.0).with_ratio(0.25, 0.75);
        let sc = generate_scenario(&cfg, seed).unwrap();
        let res = solve_heuristic(&sc, &HeuristicParams::default());
        for site in sc.sites() {
            let cloud = sc.cloud(site);
            assert!(res.report.throughput.column_total(site) <= (cloud.link_ul_bps + cloud.link_dl_bps) * (1.0 + 1e-12));
            assert!(res.report.compute.column_total(site)
                <= (cloud.compute_ul_gops_per_tti + cloud.compute_dl_gops_per_tti) * (1.0 + 1e-12));
        }
        let by_mno: f64 = res.opex.per_mno.values().sum();
        assert_relative_eq!(by_mno, res.report.costs.iter().sum::<f64>(), max_relative = 1e-12);
        assert_relative_eq!(by_mno, res.opex.total, max_relative = 1e-12);
    }
}

#[test]
fn more_edge_resources_attract_more_rus_at_high_load() {
    let spec = SweepSpec::new(vec![0.8], (1..=6).collect());
    let summary = summarize(&run_sweep(&spec).unwrap());
    let frac = |edge: f64| {
        summary
            .iter()
            .find(|s| s.solver == "heuristic" && s.metric == "edge_ru_fraction" && s.edge_ratio == edge)
            .unwrap()
            .mean
    };
    assert!(frac(0.75) > frac(0.25), "{} vs {}", frac(0.75), frac(0.25));
}

#[test]
fn failing_cells_become_error_rows() {
    let mut spec = SweepSpec::new(vec![0.5], vec![1]);
    spec.ratios.truncate(1);
    spec.generator.area_side_km = 0.5;
    spec.generator.max_placement_attempts = 10;
    let table = run_sweep(&spec).unwrap();
    assert_eq!(table.rows.len(), 1);
    assert_eq!(table.rows[0].metric, "error");
    assert!(table.rows[0].value.is_none());
    assert!(!table.rows[0].note.is_empty());
}

#[test]
fn sweep_specs_validate_and_round_trip() {
    let spec = SweepSpec::new(vec![0.2, 0.8], vec![1, 2]);
    let back = SweepSpec::from_toml_str(&spec.to_toml_string().unwrap()).unwrap();
    assert_eq!(back, spec);
    let mut bad = spec.clone();
    bad.ratios[0].ocloud = 0.5;
    assert!(bad.validate().is_err());
    let minimal = format!("schema = \"{SWEEP_SCHEMA}\"\nload_fractions = [0.5]\nseeds = [7]\n");
    let parsed = SweepSpec::from_toml_str(&minimal).unwrap();
    assert_eq!(parsed.ratios.len(), 3);
    assert_eq!(parsed.generator, GeneratorConfig::paper());
}

#[test]
fn shipped_data_files_parse() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("data");
    let spec = SweepSpec::load(dir.join("sweep_default.toml")).unwrap();
    assert_eq!((spec.load_fractions.len(), spec.ratios.len(), spec.seeds.len()), (5, 3, 20));
    assert_eq!(spec.generator, GeneratorConfig::paper());

    let text = std::fs::read_to_string(dir.join("generator_dense.toml")).unwrap();
    let cfg: GeneratorConfig = toml::from_str(&text).unwrap();
    let sc = generate_scenario(&cfg, 1).unwrap();
    assert_eq!((sc.n_rus(), sc.edges.len()), (46, 6));
    assert!(!sc.topology.multi_branch);
}
