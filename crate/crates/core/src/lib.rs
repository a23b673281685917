//! Analysis of the wiretap game on an undirected multigraph.
//!
//! A wiretapper picks an edge, a hider picks a connected spanning subgraph;
//! the wiretapper wins if the edge is in the subgraph. The crate computes the
//! game value (the graph cut-rate `opt`, reciprocal of the strength), the
//! prime partition with its degenerate set, the parent-child order between
//! partition elements, the maxmin polytope with its extreme points and the
//! nucleolus of the associated spanning connectivity game. Every quantity is
//! an exact rational.
//!
//! The [`oracle`] module holds exhaustive reference implementations used to
//! validate all of the above on small graphs.

pub mod cli;
pub mod coop;
pub mod error;
pub mod fixtures;
mod flow;
pub mod graph;
pub mod oracle;
pub mod order;
pub mod partition;
pub mod rational;
pub mod report;
pub mod strategy;
pub mod strength;

pub use error::{Error, Result};
pub use graph::{
    component_count, is_connected_spanning, min_csg, parse_graph, weight_classes, EdgeDistribution,
    EdgeSubset, Graph, MinCsg, WeightClasses,
};
pub use order::{ancestors, layers, parent_child, Layers, OrderDag};
pub use partition::{
    build_ocsg, canonical_beta, degenerate_set, is_ocsg, prime_partition, PrimePartition,
};
pub use rational::Rational;
pub use coop::{
    coalition_value, excess, excess_vector, least_core_check, CoalitionTable, ExcessVector,
    Imputation,
};
pub use oracle::{Oracle, ResponseStats};
pub use report::{analyze, AnalysisReport};
pub use strategy::{
    closed_sets, extreme_closed_sets, extreme_points, is_maxmin, is_pdist, kappa, make_pdist,
    nucleolus, polytope_description, ClosedSet, PolytopeDescription,
};
pub use strength::{cut_rate, prime_set, strength_opt, StrengthResult, WeightMap};
