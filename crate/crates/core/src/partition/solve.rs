use crate::model::{Cpt, FaultDiagram, Node, NodeId, NodeKind, Outcome};
use crate::oracle::Oracle;
use crate::trace::{EventKind, Trace, TraceEvent};
use crate::transforms::{precondition, preprocess, propagate_certainty, reverse_arc};

use super::plan::{reversal_source, ParentMap};
use super::{
    build_control_graph, build_partition_graph, find_partitions, plan_instantiations,
    select_module, select_partition, Module, Partition, PartitionKind, SolveError, TieOrder,
};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolveOptions {
    pub tie_order: TieOrder,
    /// When set, an unreducible diagram is handed to the brute-force oracle
    /// with this chance-node cap instead of failing.
    pub fallback_oracle_cap: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub probability: f64,
    pub trace: Trace,
    pub used_fallback: bool,
}

/// Conditions the diagram on `n = v`: `n` is deleted, chance successors keep
/// the matching rows, and logical successors see `n` as a certainty.
pub fn instantiate(d: &FaultDiagram, n: &str, v: Outcome) -> Result<FaultDiagram, SolveError> {
    if !d.is_chance(n) || !d.parents(n).is_empty() {
        return Err(precondition(n, "instantiation needs a parentless chance node").into());
    }
    let id = NodeId::new(n).expect("existing id");
    let mut fixed = d.clone();
    let p = if v.is_success() { 1.0 } else { 0.0 };
    fixed.insert(
        id,
        Node::new(NodeKind::Chance(Cpt::constant(p)), Vec::new()),
    );
    Ok(propagate_certainty(&fixed).0)
}

/// Probability of the top event of `d` by the partitioning procedure.
pub fn solve(d: &FaultDiagram) -> Result<(f64, Trace), SolveError> {
    let s = solve_with(d, &SolveOptions::default())?;
    Ok((s.probability, s.trace))
}

pub fn solve_with(d: &FaultDiagram, opts: &SolveOptions) -> Result<Solution, SolveError> {
    let mut trace = Trace::new();
    match solve_loop(d, opts, &mut trace) {
        Ok(probability) => Ok(Solution {
            probability,
            trace,
            used_fallback: false,
        }),
        Err(SolveError::ModuleNotReducible { cut_vertex, .. }) => match opts.fallback_oracle_cap {
            Some(cap) => {
                let probability = Oracle::with_cap(cap).top_probability(d)?;
                trace.push(
                    TraceEvent::new(EventKind::Fallback)
                        .subject(d.top())
                        .value(probability)
                        .note(format!("oracle after unreducible module at {cut_vertex}")),
                );
                Ok(Solution {
                    probability,
                    trace,
                    used_fallback: true,
                })
            }
            None => Err(SolveError::ModuleNotReducible { cut_vertex, trace }),
        },
        Err(e) => Err(e),
    }
}

/// Preprocess; stop at a single node; otherwise pick a partition and its
/// module, replace the module by its expected value and repeat.
fn solve_loop(d: &FaultDiagram, opts: &SolveOptions, trace: &mut Trace) -> Result<f64, SolveError> {
    let mut cur = d.clone();
    loop {
        let (reduced, t) = preprocess(&cur);
        trace.append(t);
        cur = reduced;
        if cur.len() == 1 {
            return Ok(cur
                .unconditional(cur.top().as_str())
                .expect("lone node is a parentless chance node"));
        }
        let partitions = find_partitions(&cur)?;
        for p in &partitions {
            trace.push(TraceEvent::new(EventKind::Partition).group(&p.members));
            if !p.is_simple_event(&cur) {
                trace.push(
                    TraceEvent::new(EventKind::Ird)
                        .group(&p.members)
                        .subject(&p.ird),
                );
            }
        }
        let cg = build_control_graph(&cur, &partitions);
        let Some(chosen) = select_partition(&cg, opts.tie_order) else {
            return Err(SolveError::ModuleNotReducible {
                cut_vertex: cur.top().to_string(),
                trace: trace.clone(),
            });
        };
        let partition = &cg.partitions[chosen];
        let module = select_module(&cur, partition);
        let (next, t) = solve_module_with(&cur, &module, partition, opts)?;
        trace.append(t);
        cur = next;
    }
}

/// Solves `m` for the partition that selected it and replaces the module by
/// a parentless chance node named after the cut-vertex.
pub fn solve_module(
    d: &FaultDiagram,
    m: &Module,
    p: &Partition,
) -> Result<(FaultDiagram, Trace), SolveError> {
    solve_module_with(d, m, p, &SolveOptions::default())
}

fn solve_module_with(
    d: &FaultDiagram,
    m: &Module,
    p: &Partition,
    opts: &SolveOptions,
) -> Result<(FaultDiagram, Trace), SolveError> {
    let mut trace = Trace::new();
    let mut event = TraceEvent::new(EventKind::Module).subject(&m.cut_vertex);
    if !m.rejected.is_empty() {
        let ids: Vec<&str> = m.rejected.iter().map(NodeId::as_str).collect();
        event = event.note(format!("rejected={}", ids.join(",")));
    }
    trace.push(event);

    let sub = d.restricted(&m.members, m.cut_vertex.clone());
    let mut queue = match p.kind {
        PartitionKind::ChanceBlock => {
            plan_instantiations(&build_partition_graph(&sub, p)?).instantiate
        }
        PartitionKind::MultiSuccessorLogical => Vec::new(),
    };
    if queue.is_empty() {
        queue.push(extra_pivot(&sub, p));
    }
    let probability = branch(sub, &queue, opts, &mut trace)?;

    let mut out = d.clone();
    for id in m.members.iter().filter(|id| **id != m.cut_vertex) {
        out.remove(id.as_str());
    }
    out.insert(
        m.cut_vertex.clone(),
        Node::new(NodeKind::Chance(Cpt::constant(probability)), Vec::new()),
    );
    out.debug_validate();
    let removed: Vec<&NodeId> = m.members.iter().filter(|id| **id != m.cut_vertex).collect();
    trace.push(
        TraceEvent::new(EventKind::Combine)
            .subject(&m.cut_vertex)
            .value(probability)
            .deleting(removed),
    );
    Ok((out, trace))
}

/// Pivot used when inspection plans no instantiation: the root chance node
/// with the most successors, preferring partition members.
fn extra_pivot(sub: &FaultDiagram, p: &Partition) -> NodeId {
    let succ = sub.successors_map();
    let roots = sub
        .chance_ids()
        .filter(|id| sub.parents(id.as_str()).is_empty());
    roots
        .max_by(|a, b| {
            let key = |id: &NodeId| (p.members.contains(id), succ[id].len());
            key(a).cmp(&key(b)).then_with(|| b.cmp(a))
        })
        .expect("every module contains a root chance node")
        .clone()
}

/// Expectation over the outcomes of `queue[0]`, recursing on the rest, and
/// finally on the full solve loop for each fully conditioned diagram.
fn branch(
    cur: FaultDiagram,
    queue: &[NodeId],
    opts: &SolveOptions,
    trace: &mut Trace,
) -> Result<f64, SolveError> {
    let Some((q, rest)) = queue.split_first() else {
        return solve_loop(&cur, opts, trace);
    };
    if !cur.is_chance(q.as_str()) || q == cur.top() {
        return branch(cur, rest, opts, trace);
    }
    let cur = make_parentless(cur, q, trace)?;
    let pq = cur
        .unconditional(q.as_str())
        .expect("parentless after reversals");
    let mut total = 0.0;
    for v in Outcome::ALL {
        let w = v.probability(pq);
        trace.push(
            TraceEvent::new(EventKind::Instantiate)
                .subject(q)
                .outcome(v)
                .value(w),
        );
        if w == 0.0 {
            continue;
        }
        let conditioned = instantiate(&cur, q.as_str(), v)?;
        total += w * branch(conditioned, rest, opts, trace)?;
    }
    Ok(total)
}

fn chance_parent_map(d: &FaultDiagram) -> ParentMap {
    d.chance_ids()
        .map(|id| (id.clone(), d.parents(id.as_str()).to_vec()))
        .collect()
}

/// Reverses arcs into `q` until it has no parents.
fn make_parentless(
    mut d: FaultDiagram,
    q: &NodeId,
    trace: &mut Trace,
) -> Result<FaultDiagram, SolveError> {
    while let Some(p) = reversal_source(&chance_parent_map(&d), q) {
        let (next, t) = reverse_arc(&d, p.as_str(), q.as_str())?;
        trace.append(t);
        d = next;
    }
    Ok(d)
}
