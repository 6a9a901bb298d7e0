use crate::model::{Cpt, FaultDiagram, NodeId, NodeKind, Outcome};
use crate::trace::{EventKind, Trace, TraceEvent};

use super::{lookup, outcome_in, precondition, TransformError};

/// Conditional assigned to rows of the reversed node that carry zero mass.
pub const REVERSAL_SENTINEL: f64 = 0.5;

/// Reverses the arc `i -> j` between two chance nodes by Bayes' rule.
///
/// Both endpoints end up conditioned on the union of their former parents;
/// `j` becomes a parent of `i`. The joint distribution over all nodes is
/// unchanged. Rows of `i`'s new table with zero probability mass get
/// [`REVERSAL_SENTINEL`] and are counted in the trace note.
pub fn reverse_arc(
    d: &FaultDiagram,
    i: &str,
    j: &str,
) -> Result<(FaultDiagram, Trace), TransformError> {
    if !d.is_chance(i) || !d.is_chance(j) {
        return Err(precondition(
            i,
            format!("arc {i} -> {j} must join two chance nodes"),
        ));
    }
    let i_id = NodeId::new(i).expect("existing id");
    let j_id = NodeId::new(j).expect("existing id");
    let i_parents = d.parents(i).to_vec();
    let j_parents = d.parents(j).to_vec();
    if !j_parents.contains(&i_id) {
        return Err(precondition(i, format!("no arc {i} -> {j}")));
    }
    if d.top() == &j_id {
        return Err(precondition(
            i,
            format!("{j} is the top event and must stay a sink"),
        ));
    }
    if let Some(via) = j_parents
        .iter()
        .find(|p| **p != i_id && d.has_path(i, p.as_str()))
    {
        return Err(precondition(
            i,
            format!("another path {i} -> .. -> {via} -> {j}"),
        ));
    }
    let i_cpt = d.node(i).and_then(|n| n.cpt()).expect("chance").clone();
    let j_cpt = d.node(j).and_then(|n| n.cpt()).expect("chance").clone();

    // Shared conditioning set: parents of j (minus i), then parents of i not yet listed.
    let mut shared: Vec<NodeId> = j_parents.iter().filter(|p| **p != i_id).cloned().collect();
    for p in &i_parents {
        if !shared.contains(p) {
            shared.push(p.clone());
        }
    }
    let mut i_new: Vec<NodeId> = i_parents.clone();
    for p in &shared {
        if !i_new.contains(p) {
            i_new.push(p.clone());
        }
    }
    i_new.push(j_id.clone());

    let joint = |a: &[Outcome], names: &[NodeId]| -> (f64, [f64; 2]) {
        let pi = lookup(&i_cpt, &i_parents, |p| outcome_in(names, a, p));
        let pj = Outcome::ALL.map(|v| {
            lookup(&j_cpt, &j_parents, |p| {
                if *p == i_id {
                    v
                } else {
                    outcome_in(names, a, p)
                }
            })
        });
        (pi, pj)
    };

    let j_table = Cpt::from_fn(shared.len(), |a| {
        let (pi, pj) = joint(a, &shared);
        pi * pj[0] + (1.0 - pi) * pj[1]
    });
    let mut zero_rows = 0usize;
    let i_table = Cpt::from_fn(i_new.len(), |a| {
        let (pi, pj) = joint(a, &i_new);
        let j_val = outcome_in(&i_new, a, &j_id);
        let num = pi * j_val.probability(pj[0]);
        let den = num + (1.0 - pi) * j_val.probability(pj[1]);
        if den > 0.0 {
            (num / den).clamp(0.0, 1.0)
        } else {
            zero_rows += 1;
            REVERSAL_SENTINEL
        }
    });

    let mut out = d.clone();
    let jn = out.node_mut(j);
    jn.kind = NodeKind::Chance(j_table);
    jn.parents = shared;
    let inode = out.node_mut(i);
    inode.kind = NodeKind::Chance(i_table);
    inode.parents = i_new;
    out.debug_validate();

    let mut event = TraceEvent::new(EventKind::Reverse)
        .subject(&i_id)
        .subject(&j_id);
    if zero_rows > 0 {
        event = event.note(format!("zero-mass-rows={zero_rows}"));
    }
    let mut trace = Trace::new();
    trace.push(event);
    Ok((out, trace))
}
