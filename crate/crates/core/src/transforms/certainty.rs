use crate::model::{Cpt, FaultDiagram, KindTag, Node, NodeId, NodeKind, Outcome};
use crate::trace::{EventKind, Trace, TraceEvent};

use super::slice_chance_parent;

/// A node known to succeed or fail with probability one.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Certainty {
    SureSuccess,
    SureFailure,
}

impl Certainty {
    /// Exact comparison: only the literal values 0 and 1 are certain.
    pub fn of(p: f64) -> Option<Self> {
        if p == 1.0 {
            Some(Certainty::SureSuccess)
        } else if p == 0.0 {
            Some(Certainty::SureFailure)
        } else {
            None
        }
    }

    pub fn outcome(self) -> Outcome {
        match self {
            Certainty::SureSuccess => Outcome::Success,
            Certainty::SureFailure => Outcome::Failure,
        }
    }

    pub fn probability(self) -> f64 {
        match self {
            Certainty::SureSuccess => 1.0,
            Certainty::SureFailure => 0.0,
        }
    }

    fn from_outcome(o: Outcome) -> Self {
        if o.is_success() {
            Certainty::SureSuccess
        } else {
            Certainty::SureFailure
        }
    }
}

fn certainty_of(d: &FaultDiagram, id: &str) -> Option<Certainty> {
    d.unconditional(id).and_then(Certainty::of)
}

/// Runs the certainty rules to a fixpoint.
///
/// A parentless chance node with probability 0 or 1 is folded into its
/// successors and deleted: chance successors are sliced to the matching rows,
/// OR/AND either become certain themselves or drop the arc, NOT flips. A
/// logical node that becomes certain is replaced by a constant chance node so
/// the same rule picks it up next. Stops once the top event itself is certain.
pub fn propagate_certainty(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let mut d = d.clone();
    let mut trace = Trace::new();
    loop {
        if certainty_of(&d, d.top().as_str()).is_some() {
            break;
        }
        let Some((id, certain)) = d
            .ids()
            .filter(|id| *id != d.top())
            .find_map(|id| certainty_of(&d, id.as_str()).map(|c| (id.clone(), c)))
        else {
            break;
        };
        let value = certain.outcome();
        let successors: Vec<NodeId> = d.successors(id.as_str()).into_iter().cloned().collect();
        for s in &successors {
            let resolved = match d.node(s.as_str()).expect("successor exists").kind().tag() {
                KindTag::Chance => {
                    slice_chance_parent(&mut d, s, &id, value);
                    None
                }
                KindTag::Not => Some(value.negate()),
                KindTag::Or if value.is_success() => Some(Outcome::Success),
                KindTag::And if !value.is_success() => Some(Outcome::Failure),
                // Identity element of the operator: drop the arc. An emptied OR
                // fails, an emptied AND succeeds.
                tag => {
                    let node = d.node_mut(s.as_str());
                    node.parents.retain(|p| *p != id);
                    node.parents
                        .is_empty()
                        .then(|| Outcome::from_bool(tag == KindTag::And))
                }
            };
            if let Some(outcome) = resolved {
                let c = Certainty::from_outcome(outcome);
                d.insert(
                    s.clone(),
                    Node::new(NodeKind::Chance(Cpt::constant(c.probability())), Vec::new()),
                );
                if s == d.top() {
                    trace.push(
                        TraceEvent::new(EventKind::Certain)
                            .subject(s)
                            .value(c.probability()),
                    );
                }
            }
        }
        d.remove(id.as_str());
        trace.push(
            TraceEvent::new(EventKind::Certain)
                .subject(&id)
                .value(certain.probability())
                .deleting([&id]),
        );
    }
    d.debug_validate();
    (d, trace)
}
