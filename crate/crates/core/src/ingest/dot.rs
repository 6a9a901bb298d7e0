use std::fmt::Write;

use crate::model::{FaultDiagram, NodeKind};

/// Graphviz rendering. Chance nodes are ellipses (parentless ones show their
/// probability), logical nodes are boxes labelled with their operator, and
/// the top event gets a double border.
pub fn export_dot(d: &FaultDiagram) -> String {
    let mut out = String::from("digraph fault_diagram {\n");
    for (id, node) in d.nodes() {
        let (shape, label) = match node.kind() {
            NodeKind::Chance(cpt) => match cpt.unconditional() {
                Some(p) => ("ellipse", format!("{id}\\np={p}")),
                None => ("ellipse", id.to_string()),
            },
            NodeKind::And => ("box", format!("{id}\\nAND")),
            NodeKind::Or => ("box", format!("{id}\\nOR")),
            NodeKind::Not => ("box", format!("{id}\\nNOT")),
        };
        let border = if id == d.top() { ", peripheries=2" } else { "" };
        writeln!(out, "  {id} [shape={shape}{border}, label=\"{label}\"];").unwrap();
    }
    for (from, to) in d.arcs() {
        writeln!(out, "  {from} -> {to};").unwrap();
    }
    out.push_str("}\n");
    out
}
