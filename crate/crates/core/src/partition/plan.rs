use std::collections::{BTreeMap, BTreeSet};

use crate::model::{FaultDiagram, NodeId};

use super::{Partition, PartitionKind, SolveError};

/// Parent lists of a set of chance nodes, restricted to that set.
pub(crate) type ParentMap = BTreeMap<NodeId, Vec<NodeId>>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum PgVertex {
    Member(NodeId),
    /// The synthetic sink `(*)`.
    Sink,
}

/// Members of a chance block, the arcs among them, and a synthetic sink fed
/// by every member with a logical successor (and by the top event, when it
/// belongs to the block).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionGraph {
    pub parents: ParentMap,
    pub to_sink: BTreeSet<NodeId>,
}

impl PartitionGraph {
    pub fn members(&self) -> impl Iterator<Item = &NodeId> {
        self.parents.keys()
    }

    pub fn edges(&self) -> Vec<(PgVertex, PgVertex)> {
        let mut out: Vec<_> = self
            .parents
            .iter()
            .flat_map(|(c, ps)| {
                ps.iter()
                    .map(move |p| (PgVertex::Member(p.clone()), PgVertex::Member(c.clone())))
            })
            .chain(
                self.to_sink
                    .iter()
                    .map(|m| (PgVertex::Member(m.clone()), PgVertex::Sink)),
            )
            .collect();
        out.sort();
        out
    }

    pub fn render(&self) -> String {
        self.edges()
            .into_iter()
            .map(|(a, b)| format!("{} -> {}\n", vertex_label(&a), vertex_label(&b)))
            .collect()
    }
}

fn vertex_label(v: &PgVertex) -> &str {
    match v {
        PgVertex::Member(id) => id.as_str(),
        PgVertex::Sink => "*",
    }
}

pub fn build_partition_graph(
    d: &FaultDiagram,
    p: &Partition,
) -> Result<PartitionGraph, SolveError> {
    if p.kind != PartitionKind::ChanceBlock {
        return Err(SolveError::NotAChanceBlock(p.label()));
    }
    let parents = p
        .members
        .iter()
        .map(|m| {
            let ps = d
                .parents(m.as_str())
                .iter()
                .filter(|x| p.members.contains(*x))
                .cloned()
                .collect();
            (m.clone(), ps)
        })
        .collect();
    let to_sink = p
        .members
        .iter()
        .filter(|m| {
            *m == d.top()
                || d.successors(m.as_str())
                    .iter()
                    .any(|s| d.is_logical(s.as_str()))
        })
        .cloned()
        .collect();
    Ok(PartitionGraph { parents, to_sink })
}

/// Result of simulating the candidate-source inspection on a partition graph.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct InstantiationPlan {
    /// Arcs `(from, to)` to reverse, in order.
    pub reversals: Vec<(NodeId, NodeId)>,
    /// Nodes to condition on, in classification order.
    pub instantiate: Vec<NodeId>,
    /// Candidate sources left with a single chance successor.
    pub integrate: Vec<NodeId>,
}

/// Inspects candidate source nodes (chance nodes with a chance successor)
/// from sink to source. A node left with no chance successor needs nothing,
/// one with exactly one can be integrated out, and any other must be
/// instantiated: its incoming arcs are reversed first so it becomes a root,
/// which may spare the nodes visited after it.
pub fn plan_instantiations(pg: &PartitionGraph) -> InstantiationPlan {
    let mut work = pg.parents.clone();
    let order = topological(&work);
    let mut plan = InstantiationPlan::default();
    let sources: Vec<NodeId> = order
        .into_iter()
        .rev()
        .filter(|n| !successors_in(&work, n).is_empty())
        .collect();
    for c in sources {
        if !work.contains_key(&c) {
            continue;
        }
        match successors_in(&work, &c).len() {
            0 => {}
            1 => plan.integrate.push(c),
            _ => {
                while let Some(p) = reversal_source(&work, &c) {
                    reverse_structural(&mut work, &p, &c);
                    plan.reversals.push((p, c.clone()));
                }
                work.remove(&c);
                for ps in work.values_mut() {
                    ps.retain(|x| *x != c);
                }
                plan.instantiate.push(c);
            }
        }
    }
    plan
}

pub(crate) fn successors_in(pm: &ParentMap, id: &NodeId) -> Vec<NodeId> {
    pm.iter()
        .filter(|(_, ps)| ps.contains(id))
        .map(|(c, _)| c.clone())
        .collect()
}

/// Directed path of length ≥ 1 from `from` to `to`.
pub(crate) fn has_path(pm: &ParentMap, from: &NodeId, to: &NodeId) -> bool {
    let mut seen = BTreeSet::new();
    let mut stack: Vec<&NodeId> = pm.get(to).map(|ps| ps.iter().collect()).unwrap_or_default();
    while let Some(n) = stack.pop() {
        if n == from {
            return true;
        }
        if seen.insert(n) {
            if let Some(ps) = pm.get(n) {
                stack.extend(ps);
            }
        }
    }
    false
}

/// Smallest parent of `q` whose arc into `q` can be reversed without creating
/// a cycle, i.e. with no second path to `q`.
pub(crate) fn reversal_source(pm: &ParentMap, q: &NodeId) -> Option<NodeId> {
    let mut ps = pm.get(q)?.clone();
    ps.sort();
    ps.iter()
        .find(|p| !ps.iter().any(|r| r != *p && has_path(pm, p, r)))
        .cloned()
}

/// Parent-set effect of reversing `i -> j`.
pub(crate) fn reverse_structural(pm: &mut ParentMap, i: &NodeId, j: &NodeId) {
    let pi = pm[i].clone();
    let pj = pm[j].clone();
    let mut shared: Vec<NodeId> = pj.iter().filter(|p| *p != i).cloned().collect();
    for p in &pi {
        if !shared.contains(p) {
            shared.push(p.clone());
        }
    }
    let mut new_i = pi;
    for p in &shared {
        if !new_i.contains(p) {
            new_i.push(p.clone());
        }
    }
    new_i.push(j.clone());
    pm.insert(j.clone(), shared);
    pm.insert(i.clone(), new_i);
}

fn topological(pm: &ParentMap) -> Vec<NodeId> {
    let mut remaining: BTreeMap<&NodeId, usize> = pm.iter().map(|(c, ps)| (c, ps.len())).collect();
    let mut ready: BTreeSet<&NodeId> = remaining
        .iter()
        .filter(|(_, &k)| k == 0)
        .map(|(c, _)| *c)
        .collect();
    let mut out = Vec::new();
    while let Some(n) = ready.pop_first() {
        out.push(n.clone());
        for (c, ps) in pm {
            if ps.contains(n) {
                let k = remaining.get_mut(c).expect("tracked");
                *k -= 1;
                if *k == 0 {
                    ready.insert(c);
                }
            }
        }
    }
    out
}
