use crate::model::{FaultDiagram, NodeId};
use crate::trace::Trace;

use super::{
    computable, compute_logical, propagate_certainty, reduce_grandfathers, removable,
    remove_into_successor, trim_barren,
};

/// Applies `compute_logical` to eligible operators, smallest id first, until none is left.
fn compute_all(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let mut cur = d.clone();
    let mut trace = Trace::new();
    while let Some(n) = first(&cur, |d, id| d.is_logical(id) && computable(d, id)) {
        let (next, t) = compute_logical(&cur, n.as_str()).expect("eligibility checked");
        cur = next;
        trace.append(t);
    }
    (cur, trace)
}

fn remove_all(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let mut cur = d.clone();
    let mut trace = Trace::new();
    while let Some(n) = first(&cur, removable) {
        let (next, t) = remove_into_successor(&cur, n.as_str()).expect("eligibility checked");
        cur = next;
        trace.append(t);
    }
    (cur, trace)
}

fn first(d: &FaultDiagram, pred: impl Fn(&FaultDiagram, &str) -> bool) -> Option<NodeId> {
    d.ids().find(|id| pred(d, id.as_str())).cloned()
}

type Rule = fn(&FaultDiagram) -> (FaultDiagram, Trace);

/// Runs the reduction rules to a fixpoint.
///
/// Rules are tried in priority order (trim, certainty, compute, remove,
/// grandfathers); whenever one changes the diagram the sweep restarts from
/// trimming. The node count never grows.
pub fn preprocess(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let rules: [Rule; 5] = [
        trim_barren,
        propagate_certainty,
        compute_all,
        remove_all,
        reduce_grandfathers,
    ];
    let mut cur = d.clone();
    let mut trace = Trace::new();
    'sweep: loop {
        for rule in rules {
            let (next, t) = rule(&cur);
            if next != cur {
                debug_assert!(next.len() <= cur.len());
                cur = next;
                trace.append(t);
                continue 'sweep;
            }
            // Skipped grandfathers change nothing but are still worth recording.
            trace.append(t);
        }
        break;
    }
    (cur, trace)
}
