use std::collections::{BTreeMap, BTreeSet};

use crate::model::{FaultDiagram, NodeId};

use super::{PostDominators, SolveError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PartitionKind {
    /// Maximal block of chance nodes connected by chance-to-chance arcs.
    ChanceBlock,
    /// A logical operator with two or more successors.
    MultiSuccessorLogical,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub members: BTreeSet<NodeId>,
    pub kind: PartitionKind,
    /// Immediate reverse dominator: nearest node outside the partition on
    /// every path from a member to the top event.
    pub ird: NodeId,
}

impl Partition {
    pub fn first_member(&self) -> &NodeId {
        self.members.first().expect("partitions are non-empty")
    }

    /// A lone chance node with at most one successor introduces no dependence
    /// and needs no processing of its own.
    pub fn is_simple_event(&self, d: &FaultDiagram) -> bool {
        self.kind == PartitionKind::ChanceBlock
            && self.members.len() == 1
            && d.successors(self.first_member().as_str()).len() <= 1
    }

    pub fn label(&self) -> String {
        let ids: Vec<&str> = self.members.iter().map(NodeId::as_str).collect();
        format!("{{{}}}", ids.join(","))
    }
}

/// Chance blocks (connected components of the chance-only subgraph) and
/// singleton multi-successor logical nodes, each with its IRD. Sorted by
/// smallest member id.
pub fn find_partitions(d: &FaultDiagram) -> Result<Vec<Partition>, SolveError> {
    let pd = PostDominators::new(d);
    let succ = d.successors_map();

    let mut block_of: BTreeMap<&NodeId, usize> = BTreeMap::new();
    let mut blocks: Vec<BTreeSet<NodeId>> = Vec::new();
    for start in d.chance_ids() {
        if block_of.contains_key(start) {
            continue;
        }
        let idx = blocks.len();
        let mut members = BTreeSet::new();
        let mut stack = vec![start];
        while let Some(n) = stack.pop() {
            if block_of.insert(n, idx).is_some() {
                continue;
            }
            members.insert(n.clone());
            let neighbours = d.parents(n.as_str()).iter().chain(succ[n].iter().copied());
            stack.extend(
                neighbours.filter(|m| d.is_chance(m.as_str()) && !block_of.contains_key(*m)),
            );
        }
        blocks.push(members);
    }

    let mut out = Vec::new();
    for members in blocks {
        let ird = ird_of(d, &pd, &members)?;
        out.push(Partition {
            members,
            kind: PartitionKind::ChanceBlock,
            ird,
        });
    }
    for (id, node) in d.nodes() {
        if !node.is_chance() && succ[id].len() >= 2 {
            let members = BTreeSet::from([id.clone()]);
            let ird = ird_of(d, &pd, &members)?;
            out.push(Partition {
                members,
                kind: PartitionKind::MultiSuccessorLogical,
                ird,
            });
        }
    }
    out.sort_by(|a, b| a.first_member().cmp(b.first_member()));
    Ok(out)
}

/// Nearest common post-dominator of the members that is not itself a member.
/// A partition containing the top event is dominated by the top itself.
pub fn immediate_reverse_dominator(d: &FaultDiagram, p: &Partition) -> Result<NodeId, SolveError> {
    ird_of(d, &PostDominators::new(d), &p.members)
}

fn ird_of(
    d: &FaultDiagram,
    pd: &PostDominators,
    members: &BTreeSet<NodeId>,
) -> Result<NodeId, SolveError> {
    if let Some(m) = members.iter().find(|m| !pd.contains(m.as_str())) {
        return Err(SolveError::NoPathToTop(m.to_string()));
    }
    if members.contains(d.top()) {
        return Ok(d.top().clone());
    }
    let mut x = members
        .iter()
        .map(|m| {
            pd.immediate(m.as_str())
                .expect("non-top node has a post-dominator")
                .clone()
        })
        .reduce(|a, b| pd.common(&a, &b))
        .expect("partitions are non-empty");
    while members.contains(&x) {
        x = pd
            .immediate(x.as_str())
            .expect("member is not the top")
            .clone();
    }
    Ok(x)
}
