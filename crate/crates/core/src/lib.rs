//! Bin packing and its relatives: interval multiset estimates, classic and
//! relational bin packing, knapsack/assignment models with multiset
//! objectives, graph coloring variants and two planning pipelines.
//!
//! Every heuristic has an exact desk-scale solver next to it, and every
//! exact solver has a brute-force counterpart in [`oracle`].

pub mod classic;
pub mod cli;
pub mod coloring;
pub mod error;
pub mod estimate;
pub mod io;
pub mod limits;
pub mod mse_packing;
pub mod oracle;
pub mod pipelines;
pub mod relational;
pub mod scalar;

pub use error::{Error, Result};

/// Exact rational scalar used by default for weights and capacities.
pub type Rational = num_rational::Ratio<i64>;

/// Float instantiations for callers that trade exactness for speed.
pub type PackInstanceF64 = classic::PackInstance<f64>;
pub type MseItemF64 = mse_packing::MseItem<f64>;
pub type ModelKindF64 = mse_packing::ModelKind<f64>;
pub type ColoredGraphF64 = coloring::ColoredGraph<f64>;
pub type MessageF64 = pipelines::Message<f64>;
