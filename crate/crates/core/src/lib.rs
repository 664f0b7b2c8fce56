//! Exact potential theory on metrized graphs.
//!
//! The crate computes, over arbitrary-precision rationals: effective
//! resistances and j-functions of edge-weighted graphs, the canonical
//! admissible measure and its Green's function, the epsilon and phi
//! invariants with their inequality checks, and a per-place ledger that
//! assembles the self-intersection of the admissible dualizing sheaf over a
//! one-dimensional base. A small term-rewriting engine verifies the pairing
//! identities that back the ledger's constants, with coefficients in Q[g,d].
//!
//! Everything on the exact side is zero-tolerance; a floating-point
//! discretization oracle exists only to cross-check the exact solver.

pub mod circuit;
pub mod deligne;
pub mod error;
pub mod graph;
pub mod green;
pub mod invariants;
pub mod ledger;
pub mod oracle;
pub mod poly;
pub mod rational;
pub mod sweep;

pub use circuit::{
    cut_resistance, foster_sum, j_function, resistance, resistance_matrix, CutResistance,
    PotentialVector, ResistanceMatrix,
};
pub use error::{Error, Result};
pub use graph::{parse_graph, Divisor, Edge, MetrizedGraph, PointRef, Subdivision, Vertex};
pub use green::{
    canonical_measure, diagonal_function, green_diagonal, green_solve, green_value, integrate,
    sample_points, GreenMatrix, GreenSolution, Measure, PiecewiseQuadratic, Quadratic,
};
pub use invariants::{
    delta_invariants, epsilon, epsilon_via_resistance, phi, run_checks, total_length, CheckResult,
    InvariantReport,
};
pub use ledger::{
    elimination_constants, fiberwise_constant, isotriviality_floor, omega_sq, parse_ledger,
    parse_ledger_text, report as ledger_report, BoundCheck, CurveLedger, LedgerReport, Place,
};
pub use oracle::{discrete_oracle, OracleValues};
pub use poly::PolyGD;
pub use rational::{format_rational, parse_rational, Rational};
pub use sweep::{
    canonical_green_checks, check_graph, random_graph, run_sweep, GraphOutcome, GreenChecks,
    SweepConfig, SweepReport,
};
