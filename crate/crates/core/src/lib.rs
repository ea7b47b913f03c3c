//! Refuting product-state satisfiability of quantum k-SAT instances by
//! lazy CDCL search over Bloch-sphere regions.

pub mod bloch;
pub mod geometry;
pub mod instance;
pub mod learning;
pub mod sat;
pub mod solver;
pub mod theory;

pub use bloch::{AngleBox, RegionAssignment};
pub use geometry::{Complex, ConvexPolygon, Real, DEFAULT_EPS, DEFAULT_PRECISION_FACTOR};
pub use instance::{random_instance, Constraint, InstanceError, QsatInstance};
pub use learning::BlockingClause;
pub use sat::{Cdcl, SatBackend, SatResult};
pub use solver::{
    solve, solve_with_backend, Limit, RunMetrics, SolveError, SolveOutcome, SolverConfig, Verdict, DEFAULT_DEPTH,
};
pub use theory::{check_constraint, TheoryVerdict};
