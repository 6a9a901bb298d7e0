//! Partition discovery, reverse dominators, the control graph, instantiation
//! planning over partition graphs, and the top-level solve loop.

mod control;
mod dominators;
mod partitions;
mod plan;
mod solve;

use thiserror::Error;

use crate::oracle::OracleError;
use crate::trace::Trace;
use crate::transforms::TransformError;

pub use control::{
    build_control_graph, select_module, select_partition, ControlGraph, ControlTarget, Module,
    TieOrder,
};
pub use dominators::PostDominators;
pub use partitions::{find_partitions, immediate_reverse_dominator, Partition, PartitionKind};
pub use plan::{
    build_partition_graph, plan_instantiations, InstantiationPlan, PartitionGraph, PgVertex,
};
pub use solve::{instantiate, solve, solve_module, solve_with, Solution, SolveOptions};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("module at {cut_vertex} could not be reduced")]
    ModuleNotReducible { cut_vertex: String, trace: Trace },
    #[error("node {0} has no path to the top event")]
    NoPathToTop(String),
    #[error("partition {0} is not a chance block")]
    NotAChanceBlock(String),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}
