use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use crate::model::{FaultDiagram, NodeId};

use super::{Partition, PostDominators};

/// Endpoint of a control-graph edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ControlTarget {
    Partition(usize),
    Top,
}

/// Graph over partitions (plus the top event) recording which partitions a
/// path reaches next without crossing a third partition.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlGraph {
    pub partitions: Vec<Partition>,
    /// Partitions that are a lone chance node with at most one successor.
    pub simple: Vec<bool>,
    pub edges: Vec<BTreeSet<ControlTarget>>,
}

impl ControlGraph {
    pub fn out_degree(&self, i: usize) -> usize {
        self.edges[i].len()
    }

    /// Edge distance from each partition to the top vertex.
    pub fn distances(&self) -> Vec<Option<usize>> {
        let n = self.partitions.len();
        let mut rev: Vec<Vec<usize>> = vec![Vec::new(); n];
        let mut dist = vec![None; n];
        let mut queue = VecDeque::new();
        for (i, targets) in self.edges.iter().enumerate() {
            for t in targets {
                match t {
                    ControlTarget::Partition(j) => rev[*j].push(i),
                    ControlTarget::Top => {
                        if dist[i].is_none() {
                            dist[i] = Some(1);
                            queue.push_back(i);
                        }
                    }
                }
            }
        }
        while let Some(j) = queue.pop_front() {
            let dj = dist[j].expect("queued nodes have a distance");
            for &i in &rev[j] {
                if dist[i].is_none() {
                    dist[i] = Some(dj + 1);
                    queue.push_back(i);
                }
            }
        }
        dist
    }

    /// One line per edge, e.g. `{H,I,J,K} -> *top*`.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for (i, targets) in self.edges.iter().enumerate() {
            for t in targets {
                let to = match t {
                    ControlTarget::Partition(j) => self.partitions[*j].label(),
                    ControlTarget::Top => "*top*".to_string(),
                };
                out.push_str(&format!("{} -> {}\n", self.partitions[i].label(), to));
            }
        }
        out
    }
}

pub fn build_control_graph(d: &FaultDiagram, ps: &[Partition]) -> ControlGraph {
    let owner: BTreeMap<&NodeId, usize> = ps
        .iter()
        .enumerate()
        .flat_map(|(i, p)| p.members.iter().map(move |m| (m, i)))
        .collect();
    let succ = d.successors_map();
    let mut edges = vec![BTreeSet::new(); ps.len()];
    for (i, p) in ps.iter().enumerate() {
        if p.members.contains(d.top()) {
            edges[i].insert(ControlTarget::Top);
        }
        let mut seen: BTreeSet<&NodeId> = BTreeSet::new();
        let mut stack: Vec<&NodeId> = p
            .members
            .iter()
            .flat_map(|m| succ[m].iter().copied())
            .filter(|s| !p.members.contains(*s))
            .collect();
        while let Some(n) = stack.pop() {
            if !seen.insert(n) {
                continue;
            }
            match owner.get(n) {
                Some(&j) if j != i => {
                    edges[i].insert(ControlTarget::Partition(j));
                }
                Some(_) => {}
                None if n == d.top() => {
                    edges[i].insert(ControlTarget::Top);
                }
                None => stack.extend(succ[n].iter().copied()),
            }
        }
    }
    ControlGraph {
        simple: ps.iter().map(|p| p.is_simple_event(d)).collect(),
        partitions: ps.to_vec(),
        edges,
    }
}

/// Tie-break among partitions equally close to the top with equal out-degree.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum TieOrder {
    /// Smallest member id first.
    #[default]
    Lex,
    /// Largest smallest-member id first; replays the published walkthrough.
    Paper,
}

impl FromStr for TieOrder {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "lex" => Ok(TieOrder::Lex),
            "paper" => Ok(TieOrder::Paper),
            other => Err(format!(
                "unknown tie order {other:?} (expected lex or paper)"
            )),
        }
    }
}

impl fmt::Display for TieOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieOrder::Lex => "lex",
            TieOrder::Paper => "paper",
        })
    }
}

/// Index of the partition to process next: closest to the top, then most
/// outgoing edges, then the tie order. Simple events are never selected.
pub fn select_partition(cg: &ControlGraph, tie: TieOrder) -> Option<usize> {
    let dist = cg.distances();
    let candidates = (0..cg.partitions.len()).filter(|&i| !cg.simple[i]);
    candidates.min_by(|&a, &b| {
        let key = |i: usize| {
            (
                dist[i].unwrap_or(usize::MAX),
                std::cmp::Reverse(cg.out_degree(i)),
            )
        };
        key(a).cmp(&key(b)).then_with(|| {
            let (ma, mb) = (
                cg.partitions[a].first_member(),
                cg.partitions[b].first_member(),
            );
            match tie {
                TieOrder::Lex => ma.cmp(mb),
                TieOrder::Paper => mb.cmp(ma),
            }
        })
    })
}

/// A cut-vertex and every node that reaches it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Module {
    pub cut_vertex: NodeId,
    pub members: BTreeSet<NodeId>,
    /// Post-dominators closer to the partition that were considered and
    /// rejected because part of their ancestry also feeds nodes outside.
    pub rejected: Vec<NodeId>,
}

/// Walks the post-dominator chain from the partition's IRD towards the top
/// and returns the first node whose ancestor set is closed, i.e. no member
/// other than the cut-vertex has a successor outside the module.
pub fn select_module(d: &FaultDiagram, p: &Partition) -> Module {
    let pd = PostDominators::new(d);
    let succ = d.successors_map();
    let mut rejected = Vec::new();
    for cv in pd.chain(&p.ird) {
        let members = d.ancestors_inclusive(&cv);
        let closed = members
            .iter()
            .filter(|m| **m != cv)
            .all(|m| succ[m].iter().all(|s| members.contains(*s)));
        if closed {
            return Module {
                cut_vertex: cv,
                members,
                rejected,
            };
        }
        rejected.push(cv);
    }
    unreachable!("the top event's module is the whole trimmed diagram")
}
