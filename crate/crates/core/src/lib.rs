//! Jaco graphs, competition graphs and grog numbers of predator-prey webs.
//!
//! A web is a labelled orientation of a simple connected graph in which the
//! vertex labelled `i` starts with population `i`. The [`engine`] module runs
//! the predation process and finds the least achievable residual population
//! (the grog number) by exhaustive search; [`webs`] minimises that over every
//! labelling and orientation of a base graph; [`claims`] re-checks the
//! quantitative statements about these objects on small instances.

pub mod claims;
pub mod competition;
pub mod digraph;
pub mod engine;
mod error;
pub mod jaco;
pub mod webs;

pub use digraph::{Digraph, Indexing, UGraph, VertexId};
pub use engine::{
    enumerate_greedy, run_strategy, solve_exact, GrogState, PredationBatch, RunResult, SolveResult,
    Strategy, Web,
};
pub use error::{Error, GraphError, IllegalBatch, Result};
