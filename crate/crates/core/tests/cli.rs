use std::path::Path;
use std::process::{Command, Output};

fn cli(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_xhaul-fair"))
        .args(args)
        .current_dir(dir)
        .output()
        .unwrap()
}

#[test]
fn generate_solve_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(cli(&["generate", "--seed", "3", "--load", "0.6", "-o", "s.toml"], d).status.success());
    let out = cli(&["solve", "s.toml", "-o", "report.csv", "--assignment", "a.toml"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("max cost:"));
    let report = std::fs::read_to_string(d.join("report.csv")).unwrap();
    assert_eq!(report.lines().count(), 39);
    assert!(report.starts_with("ru_id,mno,traffic_class,cloud_id"));
    assert_eq!(cli(&["check", "s.toml", "a.toml", "-o", "check.csv"], d).status.code(), Some(0));

    let base = cli(&["solve", "s.toml", "--solver", "baseline"], d);
    assert!(base.status.success());
}

#[test]
fn overloaded_assignment_fails_the_check() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(cli(&["generate", "--seed", "4", "--load", "1.0", "-o", "s.toml"], d).status.success());
    let sc = xhaul_fair::Scenario::load(d.join("s.toml")).unwrap();
    let mut doc = String::from("schema = \"xhaul-fair/assignment-v1\"\n");
    for ru in &sc.rus {
        doc += &format!("\n[[links]]\nru = \"{}\"\ncloud = \"ocloud-0\"\n", ru.id);
    }
    std::fs::write(d.join("all.toml"), doc).unwrap();
    let out = cli(&["check", "s.toml", "all.toml"], d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("processing"));
}

#[test]
fn exact_refusal_and_bad_input_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert!(cli(&["generate", "-o", "s.toml"], d).status.success());
    let out = cli(&["solve", "s.toml", "--solver", "exact"], d);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("search space"));
    assert_eq!(cli(&["solve", "missing.toml"], d).status.code(), Some(2));
}

#[test]
fn sweep_writes_table_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(
        d.join("spec.toml"),
        "schema = \"xhaul-fair/sweep-v1\"\nload_fractions = [0.5]\nseeds = [1, 2]\n",
    )
    .unwrap();
    let out = cli(&["sweep", "spec.toml", "-o", "sweep.csv", "--summary", "summary.csv"], d);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let table = std::fs::read_to_string(d.join("sweep.csv")).unwrap();
    assert!(table.starts_with("# schema=xhaul-fair/sweep-v1 currency=EUR\n"));
    assert!(table.contains("heuristic_vs_baseline,opex_reduction_pct"));
    let summary = std::fs::read_to_string(d.join("summary.csv")).unwrap();
    assert!(summary.starts_with("load_fraction,edge_ratio,ocloud_ratio,solver,metric,mno,n,mean,std"));
}
