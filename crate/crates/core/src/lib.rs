//! Exact Lin-Lu-Yau curvature of weighted graphs via optimal transport.
//!
//! Edge lengths `d`, a weight model `F` with `w_e = F(d(e))/d(e)`, and the
//! lazy random walk `μ_x^α` define `κ_α` and its limit `κ`. Everything is
//! computed in exact rational arithmetic so equalities between curvature
//! sums and their bounds can be decided, not estimated.

#![allow(clippy::result_large_err, clippy::needless_range_loop)]

pub mod corpus;
pub mod curvature;
pub mod exec;
pub mod graph;
pub mod lp;
pub mod ratio;
pub mod transport;
pub mod verify;
pub mod weight;

pub use curvature::{
    compute_h, idleness_profile, kappa_alpha, kappa_laplacian, kappa_limit, kappa_star,
    total_curvature, total_curvature_with, CurvatureReport, EdgeCurvature, IdlenessProfile, Line,
};
pub use exec::Execution;
pub use graph::{Girth, GraphError, Vertex, WeightedGraph};
pub use ratio::{parse_ratio, Ratio};
pub use weight::{Monotonicity, WeightFamily, WeightModel};
