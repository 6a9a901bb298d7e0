use crate::model::{Cpt, FaultDiagram, Node, NodeId, NodeKind};
use crate::trace::{EventKind, Trace, TraceEvent};

use super::{precondition, TransformError};

/// Checks that every parent of logical node `n` is a parentless chance node
/// feeding only `n`. Returns the first blocking parent otherwise.
fn blocking_parent(d: &FaultDiagram, n: &str) -> Result<(), TransformError> {
    let node = d.node(n).ok_or_else(|| precondition(n, "unknown node"))?;
    if node.is_chance() {
        return Err(precondition(n, "not a logical operator"));
    }
    for p in node.parents() {
        if !d.is_chance(p.as_str()) || !d.parents(p.as_str()).is_empty() {
            return Err(precondition(
                n,
                format!("parent {p} is not a parentless chance node"),
            ));
        }
        let succ = d.successors(p.as_str());
        if succ.len() != 1 {
            return Err(precondition(
                n,
                format!("parent {p} has {} successors", succ.len()),
            ));
        }
    }
    Ok(())
}

/// Whether `compute_logical` applies to `n`.
pub fn computable(d: &FaultDiagram, n: &str) -> bool {
    blocking_parent(d, n).is_ok()
}

/// Replaces a logical operator over independent chance parents by a chance
/// node carrying its success probability; the consumed parents are deleted.
pub fn compute_logical(d: &FaultDiagram, n: &str) -> Result<(FaultDiagram, Trace), TransformError> {
    blocking_parent(d, n)?;
    let node = d.node(n).expect("checked");
    let ps: Vec<f64> = node
        .parents()
        .iter()
        .map(|p| d.unconditional(p.as_str()).expect("parentless chance"))
        .collect();
    let p = match node.kind() {
        NodeKind::And => ps.iter().product(),
        NodeKind::Or => 1.0 - ps.iter().map(|p| 1.0 - p).product::<f64>(),
        NodeKind::Not => 1.0 - ps[0],
        NodeKind::Chance(_) => unreachable!("checked logical"),
    };
    let consumed: Vec<NodeId> = node.parents().to_vec();
    let id = NodeId::new(n).expect("existing id");
    let mut out = d.clone();
    for c in &consumed {
        out.remove(c.as_str());
    }
    out.insert(
        id.clone(),
        Node::new(NodeKind::Chance(Cpt::constant(p)), Vec::new()),
    );
    out.debug_validate();
    let mut trace = Trace::new();
    trace.push(
        TraceEvent::new(EventKind::Compute)
            .subject(&id)
            .value(p)
            .deleting(&consumed),
    );
    Ok((out, trace))
}
