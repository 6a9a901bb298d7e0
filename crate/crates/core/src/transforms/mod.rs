//! Probability-preserving reductions used by pre-processing and computing.
//!
//! Every transform takes a diagram by reference and returns a new diagram
//! together with the trace of what it did. The top event's unconditional
//! probability is unchanged by all of them.

mod certainty;
mod compute;
mod grandfather;
mod preprocess;
mod removal;
mod reversal;
mod trim;

use thiserror::Error;

use crate::model::{Cpt, FaultDiagram, NodeId, Outcome};

pub use certainty::{propagate_certainty, Certainty};
pub use compute::{computable, compute_logical};
pub use grandfather::{grandfathers, reduce_grandfathers, MAX_ARITY};
pub use preprocess::preprocess;
pub use removal::{removable, remove_into_successor};
pub use reversal::{reverse_arc, REVERSAL_SENTINEL};
pub use trim::trim_barren;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error("precondition not met at {node}: {reason}")]
    PreconditionNotMet { node: String, reason: String },
}

pub(crate) fn precondition(node: &str, reason: impl Into<String>) -> TransformError {
    TransformError::PreconditionNotMet {
        node: node.into(),
        reason: reason.into(),
    }
}

/// Outcome of `id` within an assignment over `names`.
pub(crate) fn outcome_in(names: &[NodeId], assignment: &[Outcome], id: &NodeId) -> Outcome {
    let pos = names
        .iter()
        .position(|n| n == id)
        .expect("parent present in the assignment domain");
    assignment[pos]
}

/// Looks up `cpt` (over `parents`) with outcomes supplied per parent.
pub(crate) fn lookup(
    cpt: &Cpt,
    parents: &[NodeId],
    mut value: impl FnMut(&NodeId) -> Outcome,
) -> f64 {
    let row = parents.iter().enumerate().fold(0usize, |acc, (k, p)| {
        if value(p).is_success() {
            acc
        } else {
            acc | (1 << k)
        }
    });
    cpt.row(row)
}

/// Conditions a chance node's table on `parent = value`, dropping that parent.
pub(crate) fn slice_chance_parent(
    d: &mut FaultDiagram,
    child: &NodeId,
    parent: &NodeId,
    value: Outcome,
) {
    let node = d.node_mut(child.as_str());
    let old_parents = node.parents.clone();
    let cpt = node.cpt().expect("chance child").clone();
    let new_parents: Vec<NodeId> = old_parents
        .iter()
        .filter(|p| *p != parent)
        .cloned()
        .collect();
    let table = Cpt::from_fn(new_parents.len(), |a| {
        lookup(&cpt, &old_parents, |p| {
            if p == parent {
                value
            } else {
                outcome_in(&new_parents, a, p)
            }
        })
    });
    node.kind = crate::model::NodeKind::Chance(table);
    node.parents = new_parents;
}
