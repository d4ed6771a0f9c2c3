use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use xhaul_fair::harness::{generate_scenario, run_sweep, summarize, GeneratorConfig, SweepSpec};
use xhaul_fair::solvers::{solve, SolverKind, SolverParams};
use xhaul_fair::{AllocationReport, Assignment, Result, Scenario};

#[derive(Parser)]
#[command(version, about = "Min-max fair x-haul and DU/CU allocation over TWDM-PON")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a deployment scenario.
    Generate {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Generator parameters; missing fields keep their defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        load: Option<f64>,
        /// Edge share of cloud compute; O-Clouds get the rest.
        #[arg(long)]
        edge_ratio: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Solve a scenario and write the per-RU report.
    Solve {
        scenario: PathBuf,
        #[arg(long, default_value = "heuristic")]
        solver: SolverKind,
        /// Seed of the ownership mix; defaults to the scenario seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 0.2)]
        tau: f64,
        /// Overrides the share denominator guard of the scenario.
        #[arg(long)]
        epsilon: Option<f64>,
        /// Largest search space the exact solver accepts.
        #[arg(long, default_value_t = 1e7)]
        limit: f64,
        /// Per-RU report CSV.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Also write the chosen assignment.
        #[arg(long)]
        assignment: Option<PathBuf>,
    },
    /// Run a load and resource-ratio sweep.
    Sweep {
        spec: PathBuf,
        /// Tidy per-cell CSV.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Mean and standard deviation over seeds.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Check an assignment against every constraint.
    Check {
        scenario: PathBuf,
        assignment: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

fn sink(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(File::create(p)?),
        None => Box::new(io::stdout().lock()),
    })
}

fn load_scenario(path: &PathBuf, epsilon: Option<f64>) -> Result<Scenario> {
    let mut sc = Scenario::load(path)?;
    if let Some(eps) = epsilon {
        if eps.is_nan() || eps <= 0.0 {
            return Err(xhaul_fair::Error::Config("epsilon must be positive".into()));
        }
        sc.constants.epsilon = eps;
    }
    Ok(sc)
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::Generate {
            seed,
            config,
            load,
            edge_ratio,
            output,
        } => {
            let mut cfg = match config {
                Some(p) => toml::from_str::<GeneratorConfig>(&std::fs::read_to_string(p)?)?,
                None => GeneratorConfig::paper(),
            };
            if let Some(f) = load {
                cfg = cfg.with_load(f);
            }
            if let Some(r) = edge_ratio {
                cfg = cfg.with_ratio(r, 1.0 - r);
            }
            let sc = generate_scenario(&cfg, seed)?;
            sink(&output)?.write_all(sc.to_toml_string()?.as_bytes())?;
            Ok(true)
        }
        Command::Solve {
            scenario,
            solver,
            seed,
            tau,
            epsilon,
            limit,
            output,
            assignment,
        } => {
            let sc = load_scenario(&scenario, epsilon)?;
            let mut params = SolverParams::default();
            params.heuristic.tau = tau;
            params.heuristic.seed = seed;
            params.exact_limit = limit as u128;
            let res = solve(&sc, solver, &params)?;
            eprint!("{}", res.summary(&sc));
            if let Some(p) = assignment {
                res.assignment.save(p, &sc)?;
            }
            res.report.write_csv(sink(&output)?)?;
            Ok(true)
        }
        Command::Sweep {
            spec,
            output,
            summary,
        } => {
            let spec = SweepSpec::load(spec)?;
            let table = run_sweep(&spec)?;
            table.write_csv(sink(&output)?)?;
            if let Some(p) = summary {
                let mut w = csv::Writer::from_path(p)?;
                for row in summarize(&table) {
                    w.serialize(row)?;
                }
                w.flush()?;
            }
            Ok(true)
        }
        Command::Check {
            scenario,
            assignment,
            epsilon,
            output,
        } => {
            let sc = load_scenario(&scenario, epsilon)?;
            let a = Assignment::load(assignment, &sc)?;
            let report = AllocationReport::evaluate(&a, &sc);
            report.write_csv(sink(&output)?)?;
            let f = &report.feasibility;
            if f.feasible {
                eprintln!("feasible; {} RU(s) unassigned", f.unassigned.len());
            } else {
                for (r, c) in f.first_violations() {
                    eprintln!("{}: {c}", sc.rus[r].id);
                }
            }
            Ok(f.feasible)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
