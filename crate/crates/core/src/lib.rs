//! Min-max fair leasing of x-haul links and DU/CU compute for multi-tenant
//! O-RAN deployments over a TWDM-PON.
//!
//! Radio units (RUs) of several operators each lease their DU/CU processing
//! and the PON link that reaches it from exactly one cloud: an Edge-Cloud
//! co-hosted at a macro cell, reached East-West over a virtual PON, or an
//! O-Cloud at a central office, reached North-South. Every tenant of a cloud
//! receives capacity in proportion to its demand and pays for what it
//! receives; solvers choose attachments that keep every RU within its
//! latency bounds while minimizing the largest bill.
//!
//! * [`radio`]: fronthaul datarates, burst framing and processing effort.
//! * [`topology`]: splitter placement, routes and reachability.
//! * [`scenario`]: problem instances and their TOML form.
//! * [`alloc`]: assignments, shares, constraints and costs.
//! * [`solvers`]: heuristic, exhaustive and baseline solvers.
//! * [`harness`]: scenario generation, load scaling and sweeps.

// `!(x > 0.0)` is how validation rejects NaN along with the bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod alloc;
pub mod error;
pub mod harness;
pub mod radio;
pub mod scenario;
pub mod solvers;
pub mod topology;

pub use alloc::{check_feasible, AllocationReport, Assignment, CostKey, FeasibilityReport};
pub use error::{Error, Result};
pub use scenario::{CloudNode, MnoId, RuNode, Scenario, Site, TrafficClass};
pub use solvers::{
    solve, solve_baseline_uniform, solve_exact, solve_heuristic, HeuristicParams, SolverKind,
    SolverParams, SolverResult,
};
