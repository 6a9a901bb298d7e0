use crate::model::FaultDiagram;
use crate::trace::{EventKind, Trace, TraceEvent};

/// Drops every node without a directed path to the top event.
pub fn trim_barren(d: &FaultDiagram) -> (FaultDiagram, Trace) {
    let keep = d.reaches_top();
    let mut trace = Trace::new();
    for id in d.ids().filter(|id| !keep.contains(*id)) {
        trace.push(TraceEvent::new(EventKind::Trim).subject(id).deleting([id]));
    }
    if trace.is_empty() {
        return (d.clone(), trace);
    }
    (d.restricted(&keep, d.top().clone()), trace)
}
