use crate::model::{Cpt, FaultDiagram, NodeId, NodeKind, Outcome};
use crate::trace::{EventKind, Trace, TraceEvent};

use super::{lookup, outcome_in, precondition, TransformError};

fn check(d: &FaultDiagram, n: &str) -> Result<NodeId, TransformError> {
    if !d.is_chance(n) {
        return Err(precondition(n, "not a chance node"));
    }
    let succ = d.successors(n);
    match succ.as_slice() {
        [c] if d.is_chance(c.as_str()) => Ok((*c).clone()),
        [c] => Err(precondition(n, format!("successor {c} is logical"))),
        _ => Err(precondition(n, format!("has {} successors", succ.len()))),
    }
}

/// Whether `remove_into_successor` applies to `n`.
pub fn removable(d: &FaultDiagram, n: &str) -> bool {
    check(d, n).is_ok()
}

/// Sums chance node `n` out into its single chance successor, which inherits
/// `n`'s parents.
pub fn remove_into_successor(
    d: &FaultDiagram,
    n: &str,
) -> Result<(FaultDiagram, Trace), TransformError> {
    let c = check(d, n)?;
    let n_id = NodeId::new(n).expect("existing id");
    let n_parents = d.parents(n).to_vec();
    let n_cpt = d.node(n).and_then(|x| x.cpt()).expect("chance").clone();
    let c_parents = d.parents(c.as_str()).to_vec();
    let c_cpt = d
        .node(c.as_str())
        .and_then(|x| x.cpt())
        .expect("chance")
        .clone();

    let mut new_parents: Vec<NodeId> = c_parents.iter().filter(|p| **p != n_id).cloned().collect();
    for p in &n_parents {
        if !new_parents.contains(p) {
            new_parents.push(p.clone());
        }
    }
    let table = Cpt::from_fn(new_parents.len(), |a| {
        let pn = lookup(&n_cpt, &n_parents, |p| outcome_in(&new_parents, a, p));
        Outcome::ALL
            .iter()
            .map(|&v| {
                let pc = lookup(&c_cpt, &c_parents, |p| {
                    if *p == n_id {
                        v
                    } else {
                        outcome_in(&new_parents, a, p)
                    }
                });
                v.probability(pn) * pc
            })
            .sum()
    });

    let mut out = d.clone();
    out.remove(n);
    let node = out.node_mut(c.as_str());
    node.kind = NodeKind::Chance(table);
    node.parents = new_parents;
    out.debug_validate();
    let mut trace = Trace::new();
    trace.push(
        TraceEvent::new(EventKind::Remove)
            .subject(&n_id)
            .subject(&c)
            .deleting([&n_id]),
    );
    Ok((out, trace))
}
