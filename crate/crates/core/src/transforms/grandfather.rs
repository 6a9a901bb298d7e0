use std::collections::{BTreeMap, BTreeSet};

use crate::model::{FaultDiagram, NodeId};
use crate::trace::{EventKind, Trace, TraceEvent};

use super::{remove_into_successor, reverse_arc};

/// Largest table arity a reversal may create while reducing a grandfather.
pub const MAX_ARITY: usize = 20;

/// Shortest arc distance from each node to any logical operator (`None` if unreachable).
fn logical_distance(d: &FaultDiagram) -> BTreeMap<NodeId, Option<usize>> {
    let succ = d.successors_map();
    let mut dist: BTreeMap<NodeId, Option<usize>> = BTreeMap::new();
    for id in d.topological_order().into_iter().rev() {
        let v = if d.is_logical(id.as_str()) {
            Some(0)
        } else {
            succ[&id]
                .iter()
                .filter_map(|s| dist[*s])
                .min()
                .map(|m| m + 1)
        };
        dist.insert(id, v);
    }
    dist
}

/// Chance nodes more than two arcs from a logical operator along every path.
pub fn grandfathers(d: &FaultDiagram) -> Vec<NodeId> {
    let dist = logical_distance(d);
    let succ = d.successors_map();
    d.chance_ids()
        .filter(|id| *id != d.top() && !succ[id].is_empty())
        .filter(|id| dist[*id].is_none_or(|k| k > 2))
        .cloned()
        .collect()
}

/// Eliminates chance node `g` whose successors are all chance nodes: reverses
/// arcs out of `g` until one successor is left, then sums `g` into it.
pub(crate) fn eliminate(d: &FaultDiagram, g: &NodeId) -> Result<(FaultDiagram, Trace), String> {
    let mut cur = d.clone();
    let mut trace = Trace::new();
    loop {
        let succ: Vec<NodeId> = cur.successors(g.as_str()).into_iter().cloned().collect();
        if succ.len() <= 1 {
            break;
        }
        // The earliest successor in topological order has no second path from g.
        let order = cur.topological_order();
        let target = order
            .iter()
            .find(|id| succ.contains(id))
            .expect("successors are ordered")
            .clone();
        let union: BTreeSet<&NodeId> = cur
            .parents(g.as_str())
            .iter()
            .chain(cur.parents(target.as_str()))
            .collect();
        if union.len() + 1 > MAX_ARITY {
            return Err(format!(
                "reversing {g} -> {target} exceeds arity {MAX_ARITY}"
            ));
        }
        let (next, t) =
            reverse_arc(&cur, g.as_str(), target.as_str()).map_err(|e| e.to_string())?;
        cur = next;
        trace.append(t);
    }
    let (next, t) = remove_into_successor(&cur, g.as_str()).map_err(|e| e.to_string())?;
    trace.append(t);
    Ok((next, trace))
}

/// Reduces every grandfather by arc reversal followed by removal.
pub fn reduce_grandfathers(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let mut cur = d.clone();
    let mut trace = Trace::new();
    let mut skipped: BTreeSet<NodeId> = BTreeSet::new();
    while let Some(g) = grandfathers(&cur)
        .into_iter()
        .find(|g| !skipped.contains(g))
    {
        match eliminate(&cur, &g) {
            Ok((next, t)) => {
                cur = next;
                trace.append(t);
            }
            Err(reason) => {
                trace.push(TraceEvent::new(EventKind::Skip).subject(&g).note(reason));
                skipped.insert(g);
            }
        }
    }
    (cur, trace)
}
