//! The fault diagram data model.
//!
//! A diagram is a DAG of binary events. Chance nodes carry a table of success
//! probabilities indexed by the outcomes of their parents; logical nodes
//! (AND, OR, NOT) stay in implicit form and are never expanded into tables.
//! Chance nodes may only depend on other chance nodes. The designated top
//! event is a sink.

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors raised while validating or querying a diagram.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error(
        "invalid node id {0:?}: expected a non-empty token of letters, digits and underscores"
    )]
    InvalidNodeId(String),
    #[error("duplicate node id {0}")]
    DuplicateNodeId(String),
    #[error("top event {0} is not a node of the diagram")]
    TopMissing(String),
    #[error("top event {top} has successor {successor}")]
    TopHasSuccessor { top: String, successor: String },
    #[error("node {node} lists unknown parent {parent}")]
    DanglingParentRef { node: String, parent: String },
    #[error("node {node} lists parent {parent} more than once")]
    DuplicateParent { node: String, parent: String },
    #[error("cycle detected through node {0}")]
    CycleDetected(String),
    #[error("chance node {child} has logical parent {parent} (arc {parent} -> {child})")]
    ChanceWithLogicalParent { parent: String, child: String },
    #[error("NOT node {node} must have exactly one parent, found {count}")]
    NotArityViolation { node: String, count: usize },
    #[error("logical node {0} has no parents")]
    LogicalWithoutParents(String),
    #[error("table of node {node} is malformed: {detail}")]
    CptShapeMismatch { node: String, detail: String },
    #[error("probability {value} for node {node} (row {key:?}) is outside [0, 1]")]
    ProbabilityOutOfRange {
        node: String,
        key: String,
        value: f64,
    },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("node {0} is not a chance node")]
    NotAChanceNode(String),
    #[error("assignment for node {node} has {got} outcomes, expected {expected}")]
    AssignmentShapeMismatch {
        node: String,
        expected: usize,
        got: usize,
    },
}

/// Identifier of a node: a non-empty token over `[A-Za-z0-9_]`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(String);

impl NodeId {
    pub fn new(id: impl Into<String>) -> Result<Self, ModelError> {
        let id = id.into();
        if !id.is_empty() && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            Ok(NodeId(id))
        } else {
            Err(ModelError::InvalidNodeId(id))
        }
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl AsRef<str> for NodeId {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Outcome {
    Success,
    Failure,
}

impl Outcome {
    pub const ALL: [Outcome; 2] = [Outcome::Success, Outcome::Failure];

    pub fn from_bool(success: bool) -> Self {
        if success {
            Outcome::Success
        } else {
            Outcome::Failure
        }
    }

    pub fn is_success(self) -> bool {
        self == Outcome::Success
    }

    pub fn negate(self) -> Self {
        Outcome::from_bool(!self.is_success())
    }

    /// Character used in table keys: `s` or `f`.
    pub fn key_char(self) -> char {
        match self {
            Outcome::Success => 's',
            Outcome::Failure => 'f',
        }
    }

    pub fn from_key_char(c: char) -> Option<Self> {
        match c {
            's' => Some(Outcome::Success),
            'f' => Some(Outcome::Failure),
            _ => None,
        }
    }

    /// Probability of this outcome for an event with success probability `p`.
    pub fn probability(self, p: f64) -> f64 {
        match self {
            Outcome::Success => p,
            Outcome::Failure => 1.0 - p,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.key_char())
    }
}

/// Success-probability table of a chance node.
///
/// Row `i` holds the success probability when parent `k` failed exactly for the
/// bits `k` set in `i`. Keys in the file format spell the same row as a string
/// over `{s, f}`, position `k` giving the outcome of parent `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    arity: usize,
    table: Vec<f64>,
}

impl Cpt {
    pub fn constant(p: f64) -> Self {
        Cpt {
            arity: 0,
            table: vec![p],
        }
    }

    /// Builds a table from raw rows in index order. Panics if the row count is not `2^arity`.
    pub fn from_rows(arity: usize, table: Vec<f64>) -> Self {
        assert_eq!(table.len(), 1 << arity, "table must have 2^arity rows");
        Cpt { arity, table }
    }

    pub fn from_fn(arity: usize, mut f: impl FnMut(&[Outcome]) -> f64) -> Self {
        let mut buf = vec![Outcome::Success; arity];
        let table = (0..1usize << arity)
            .map(|row| {
                fill_assignment(row, &mut buf);
                f(&buf)
            })
            .collect();
        Cpt { arity, table }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn rows(&self) -> &[f64] {
        &self.table
    }

    pub fn row(&self, index: usize) -> f64 {
        self.table[index]
    }

    pub fn get(&self, assignment: &[Outcome]) -> f64 {
        debug_assert_eq!(assignment.len(), self.arity);
        self.table[row_index(assignment)]
    }

    /// `(key, probability)` pairs sorted by key.
    pub fn entries(&self) -> Vec<(String, f64)> {
        let mut out: Vec<(String, f64)> = (0..self.table.len())
            .map(|row| (row_key(row, self.arity), self.table[row]))
            .collect();
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// The single probability of a parentless node.
    pub fn unconditional(&self) -> Option<f64> {
        (self.arity == 0).then(|| self.table[0])
    }
}

pub(crate) fn row_index(assignment: &[Outcome]) -> usize {
    assignment.iter().enumerate().fold(
        0,
        |acc, (k, o)| if o.is_success() { acc } else { acc | (1 << k) },
    )
}

pub(crate) fn fill_assignment(row: usize, buf: &mut [Outcome]) {
    for (k, slot) in buf.iter_mut().enumerate() {
        *slot = Outcome::from_bool(row & (1 << k) == 0);
    }
}

fn row_key(row: usize, arity: usize) -> String {
    (0..arity)
        .map(|k| Outcome::from_bool(row & (1 << k) == 0).key_char())
        .collect()
}

fn key_row(key: &str, arity: usize) -> Option<usize> {
    if key.chars().count() != arity {
        return None;
    }
    key.chars().enumerate().try_fold(0usize, |acc, (k, c)| {
        Outcome::from_key_char(c).map(|o| if o.is_success() { acc } else { acc | (1 << k) })
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    And,
    Or,
    Not,
    Chance(Cpt),
}

impl NodeKind {
    pub fn is_chance(&self) -> bool {
        matches!(self, NodeKind::Chance(_))
    }

    pub fn is_logical(&self) -> bool {
        !self.is_chance()
    }

    pub fn cpt(&self) -> Option<&Cpt> {
        match self {
            NodeKind::Chance(cpt) => Some(cpt),
            _ => None,
        }
    }

    pub fn tag(&self) -> KindTag {
        match self {
            NodeKind::And => KindTag::And,
            NodeKind::Or => KindTag::Or,
            NodeKind::Not => KindTag::Not,
            NodeKind::Chance(_) => KindTag::Chance,
        }
    }

    /// Deterministic evaluation of a logical operator over its parents' outcomes.
    pub fn evaluate_logical(&self, parents: impl IntoIterator<Item = Outcome>) -> Option<Outcome> {
        let mut it = parents.into_iter();
        match self {
            NodeKind::And => Some(Outcome::from_bool(it.all(Outcome::is_success))),
            NodeKind::Or => Some(Outcome::from_bool(it.any(Outcome::is_success))),
            NodeKind::Not => it.next().map(Outcome::negate),
            NodeKind::Chance(_) => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub(crate) kind: NodeKind,
    pub(crate) parents: Vec<NodeId>,
}

impl Node {
    pub fn new(kind: NodeKind, parents: Vec<NodeId>) -> Self {
        Node { kind, parents }
    }

    pub fn kind(&self) -> &NodeKind {
        &self.kind
    }

    pub fn parents(&self) -> &[NodeId] {
        &self.parents
    }

    pub fn is_chance(&self) -> bool {
        self.kind.is_chance()
    }

    pub fn cpt(&self) -> Option<&Cpt> {
        self.kind.cpt()
    }
}

/// Kind tag as spelled in the file format.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KindTag {
    And,
    Or,
    Not,
    Chance,
}

impl KindTag {
    pub fn as_str(self) -> &'static str {
        match self {
            KindTag::And => "and",
            KindTag::Or => "or",
            KindTag::Not => "not",
            KindTag::Chance => "chance",
        }
    }
}

/// Unchecked node record, as decoded from a document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeRecord {
    pub id: String,
    pub kind: KindTag,
    #[serde(default)]
    pub parents: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cpt: Option<BTreeMap<String, f64>>,
}

/// Unchecked diagram description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDocument {
    pub top: String,
    pub nodes: Vec<NodeRecord>,
}

/// A validated fault diagram. Immutable once built; transforms return new values.
#[derive(Debug, Clone, PartialEq)]
pub struct FaultDiagram {
    pub(crate) nodes: BTreeMap<NodeId, Node>,
    pub(crate) top: NodeId,
}

/// Checks every structural invariant and builds the diagram.
pub fn validate_diagram(raw: &DiagramDocument) -> Result<FaultDiagram, ModelError> {
    let mut nodes = BTreeMap::new();
    for rec in &raw.nodes {
        let id = NodeId::new(rec.id.clone())?;
        if nodes.contains_key(&id) {
            return Err(ModelError::DuplicateNodeId(rec.id.clone()));
        }
        let parents = rec
            .parents
            .iter()
            .map(|p| NodeId::new(p.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let mut seen = BTreeSet::new();
        for p in &parents {
            if !seen.insert(p) {
                return Err(ModelError::DuplicateParent {
                    node: rec.id.clone(),
                    parent: p.to_string(),
                });
            }
        }
        let kind = match rec.kind {
            KindTag::And => NodeKind::And,
            KindTag::Or => NodeKind::Or,
            KindTag::Not => NodeKind::Not,
            KindTag::Chance => {
                let table = rec
                    .cpt
                    .as_ref()
                    .ok_or_else(|| ModelError::CptShapeMismatch {
                        node: rec.id.clone(),
                        detail: "chance node without a table".into(),
                    })?;
                NodeKind::Chance(cpt_from_keys(&rec.id, parents.len(), table)?)
            }
        };
        if kind.is_logical() && rec.cpt.is_some() {
            return Err(ModelError::CptShapeMismatch {
                node: rec.id.clone(),
                detail: "logical node carries a table".into(),
            });
        }
        nodes.insert(id, Node { kind, parents });
    }
    let top = NodeId::new(raw.top.clone()).map_err(|_| ModelError::TopMissing(raw.top.clone()))?;
    FaultDiagram::from_nodes(nodes, top)
}

fn cpt_from_keys(node: &str, arity: usize, map: &BTreeMap<String, f64>) -> Result<Cpt, ModelError> {
    let rows = 1usize << arity;
    if map.len() != rows {
        return Err(ModelError::CptShapeMismatch {
            node: node.into(),
            detail: format!("expected {rows} rows, found {}", map.len()),
        });
    }
    let mut table = vec![f64::NAN; rows];
    for (key, &p) in map {
        let row = key_row(key, arity).ok_or_else(|| ModelError::CptShapeMismatch {
            node: node.into(),
            detail: format!("bad row key {key:?} for {arity} parents"),
        })?;
        if !(0.0..=1.0).contains(&p) {
            return Err(ModelError::ProbabilityOutOfRange {
                node: node.into(),
                key: key.clone(),
                value: p,
            });
        }
        table[row] = p;
    }
    Ok(Cpt { arity, table })
}

impl FaultDiagram {
    /// Validates a node map with a designated top.
    pub fn from_nodes(nodes: BTreeMap<NodeId, Node>, top: NodeId) -> Result<Self, ModelError> {
        if !nodes.contains_key(&top) {
            return Err(ModelError::TopMissing(top.to_string()));
        }
        for (id, node) in &nodes {
            let mut seen = BTreeSet::new();
            for p in &node.parents {
                if !nodes.contains_key(p) {
                    return Err(ModelError::DanglingParentRef {
                        node: id.to_string(),
                        parent: p.to_string(),
                    });
                }
                if !seen.insert(p) {
                    return Err(ModelError::DuplicateParent {
                        node: id.to_string(),
                        parent: p.to_string(),
                    });
                }
            }
        }
        let d = FaultDiagram { nodes, top };
        if let Some(on_cycle) = d.find_cycle() {
            return Err(ModelError::CycleDetected(on_cycle.to_string()));
        }
        for (id, node) in &d.nodes {
            match &node.kind {
                NodeKind::Not if node.parents.len() != 1 => {
                    return Err(ModelError::NotArityViolation {
                        node: id.to_string(),
                        count: node.parents.len(),
                    })
                }
                NodeKind::And | NodeKind::Or if node.parents.is_empty() => {
                    return Err(ModelError::LogicalWithoutParents(id.to_string()))
                }
                NodeKind::Chance(cpt) => {
                    if let Some(p) = node.parents.iter().find(|p| !d.nodes[*p].is_chance()) {
                        return Err(ModelError::ChanceWithLogicalParent {
                            parent: p.to_string(),
                            child: id.to_string(),
                        });
                    }
                    if cpt.arity != node.parents.len() || cpt.table.len() != 1 << cpt.arity {
                        return Err(ModelError::CptShapeMismatch {
                            node: id.to_string(),
                            detail: format!(
                                "table over {} parents, node has {}",
                                cpt.arity,
                                node.parents.len()
                            ),
                        });
                    }
                    if let Some((row, &v)) = cpt
                        .table
                        .iter()
                        .enumerate()
                        .find(|(_, v)| !(0.0..=1.0).contains(*v))
                    {
                        return Err(ModelError::ProbabilityOutOfRange {
                            node: id.to_string(),
                            key: row_key(row, cpt.arity),
                            value: v,
                        });
                    }
                }
                _ => {}
            }
        }
        if let Some((succ, _)) = d.nodes.iter().find(|(_, n)| n.parents.contains(&d.top)) {
            return Err(ModelError::TopHasSuccessor {
                top: d.top.to_string(),
                successor: succ.to_string(),
            });
        }
        Ok(d)
    }

    /// Returns a node lying on a directed cycle, if any.
    fn find_cycle(&self) -> Option<&NodeId> {
        let mut indegree: BTreeMap<&NodeId, usize> = self
            .nodes
            .iter()
            .map(|(id, n)| (id, n.parents.len()))
            .collect();
        let succ = self.successors_map();
        let mut ready: Vec<&NodeId> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(id, _)| *id)
            .collect();
        while let Some(id) = ready.pop() {
            indegree.remove(id);
            for s in &succ[id] {
                let e = indegree.get_mut(s).expect("successor tracked");
                *e -= 1;
                if *e == 0 {
                    ready.push(s);
                }
            }
        }
        // Every leftover node has a leftover parent; walking parents must revisit a node.
        let start = *indegree.keys().next()?;
        let mut visited = BTreeSet::new();
        let mut cur = start;
        loop {
            if !visited.insert(cur) {
                return Some(cur);
            }
            cur = self.nodes[cur]
                .parents
                .iter()
                .find(|p| indegree.contains_key(p))
                .expect("leftover node has a leftover parent");
        }
    }

    pub fn top(&self) -> &NodeId {
        &self.top
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: &str) -> bool {
        self.nodes.contains_key(id)
    }

    pub fn node(&self, id: &str) -> Option<&Node> {
        self.nodes.get(id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = (&NodeId, &Node)> {
        self.nodes.iter()
    }

    pub fn ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes.keys()
    }

    pub fn parents(&self, id: &str) -> &[NodeId] {
        self.nodes
            .get(id)
            .map(|n| n.parents.as_slice())
            .unwrap_or(&[])
    }

    pub fn is_chance(&self, id: &str) -> bool {
        self.nodes.get(id).is_some_and(Node::is_chance)
    }

    pub fn is_logical(&self, id: &str) -> bool {
        self.nodes.get(id).is_some_and(|n| !n.is_chance())
    }

    pub fn chance_ids(&self) -> impl Iterator<Item = &NodeId> {
        self.nodes
            .iter()
            .filter(|(_, n)| n.is_chance())
            .map(|(id, _)| id)
    }

    pub fn chance_count(&self) -> usize {
        self.chance_ids().count()
    }

    /// Unconditional success probability of a parentless chance node.
    pub fn unconditional(&self, id: &str) -> Option<f64> {
        self.nodes
            .get(id)
            .and_then(Node::cpt)
            .and_then(Cpt::unconditional)
    }

    /// Successor lists for every node, each sorted by id.
    pub fn successors_map(&self) -> BTreeMap<&NodeId, Vec<&NodeId>> {
        let mut out: BTreeMap<&NodeId, Vec<&NodeId>> =
            self.nodes.keys().map(|id| (id, Vec::new())).collect();
        for (id, node) in &self.nodes {
            for p in &node.parents {
                if let Some(v) = out.get_mut(p) {
                    v.push(id);
                }
            }
        }
        out
    }

    pub fn successors(&self, id: &str) -> Vec<&NodeId> {
        self.nodes
            .iter()
            .filter(|(_, n)| n.parents.iter().any(|p| p.as_str() == id))
            .map(|(s, _)| s)
            .collect()
    }

    pub fn arcs(&self) -> Vec<(&NodeId, &NodeId)> {
        let mut arcs: Vec<_> = self
            .nodes
            .iter()
            .flat_map(|(id, n)| n.parents.iter().map(move |p| (p, id)))
            .collect();
        arcs.sort();
        arcs
    }

    /// Parents before children; ties broken by smallest id.
    pub fn topological_order(&self) -> Vec<NodeId> {
        let succ = self.successors_map();
        let mut indegree: BTreeMap<&NodeId, usize> = self
            .nodes
            .iter()
            .map(|(id, n)| (id, n.parents.len()))
            .collect();
        let mut ready: BTreeSet<&NodeId> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(id, _)| *id)
            .collect();
        let mut order = Vec::with_capacity(self.nodes.len());
        while let Some(id) = ready.pop_first() {
            order.push(id.clone());
            for s in &succ[id] {
                let e = indegree.get_mut(s).expect("successor tracked");
                *e -= 1;
                if *e == 0 {
                    ready.insert(s);
                }
            }
        }
        order
    }

    /// Nodes with a directed path to the top event, top included.
    pub fn reaches_top(&self) -> BTreeSet<NodeId> {
        self.ancestors_inclusive(&self.top)
    }

    /// `id` together with every node that has a directed path to it.
    pub fn ancestors_inclusive(&self, id: &NodeId) -> BTreeSet<NodeId> {
        let mut seen = BTreeSet::new();
        let mut stack = vec![id.clone()];
        while let Some(n) = stack.pop() {
            if seen.insert(n.clone()) {
                stack.extend(self.parents(n.as_str()).iter().cloned());
            }
        }
        seen
    }

    /// Whether a directed path leads from `from` to `to` (length ≥ 1).
    pub fn has_path(&self, from: &str, to: &str) -> bool {
        let mut seen = BTreeSet::new();
        let mut stack: Vec<&NodeId> = self.parents(to).iter().collect();
        while let Some(n) = stack.pop() {
            if n.as_str() == from {
                return true;
            }
            if seen.insert(n) {
                stack.extend(self.parents(n.as_str()));
            }
        }
        false
    }

    /// Stored success probability of chance node `id` under a parent assignment.
    pub fn cpt_probability(&self, id: &str, assignment: &[Outcome]) -> Result<f64, ModelError> {
        let node = self
            .nodes
            .get(id)
            .ok_or_else(|| ModelError::UnknownNode(id.into()))?;
        let cpt = node
            .cpt()
            .ok_or_else(|| ModelError::NotAChanceNode(id.into()))?;
        if assignment.len() != cpt.arity {
            return Err(ModelError::AssignmentShapeMismatch {
                node: id.into(),
                expected: cpt.arity,
                got: assignment.len(),
            });
        }
        Ok(cpt.get(assignment))
    }

    /// Same lookup keyed by a row string over `{s, f}`.
    pub fn cpt_probability_by_key(&self, id: &str, key: &str) -> Result<f64, ModelError> {
        let assignment: Option<Vec<Outcome>> = key.chars().map(Outcome::from_key_char).collect();
        match assignment {
            Some(a) => self.cpt_probability(id, &a),
            None => Err(ModelError::AssignmentShapeMismatch {
                node: id.into(),
                expected: self.parents(id).len(),
                got: key.chars().count(),
            }),
        }
    }

    /// Unchecked document form, nodes sorted by id.
    pub fn to_document(&self) -> DiagramDocument {
        DiagramDocument {
            top: self.top.to_string(),
            nodes: self
                .nodes
                .iter()
                .map(|(id, n)| NodeRecord {
                    id: id.to_string(),
                    kind: n.kind.tag(),
                    parents: n.parents.iter().map(ToString::to_string).collect(),
                    cpt: n.cpt().map(|c| c.entries().into_iter().collect()),
                })
                .collect(),
        }
    }

    /// Restriction to `keep`, with `top` as the new top. Callers guarantee closure under parents.
    pub(crate) fn restricted(&self, keep: &BTreeSet<NodeId>, top: NodeId) -> FaultDiagram {
        FaultDiagram {
            nodes: self
                .nodes
                .iter()
                .filter(|(id, _)| keep.contains(*id))
                .map(|(id, n)| (id.clone(), n.clone()))
                .collect(),
            top,
        }
    }

    pub(crate) fn node_mut(&mut self, id: &str) -> &mut Node {
        self.nodes.get_mut(id).expect("node exists")
    }

    pub(crate) fn remove(&mut self, id: &str) -> Option<Node> {
        self.nodes.remove(id)
    }

    pub(crate) fn insert(&mut self, id: NodeId, node: Node) {
        self.nodes.insert(id, node);
    }

    /// Debug-only self check used after internal mutation.
    pub(crate) fn debug_validate(&self) {
        if cfg!(debug_assertions) {
            if let Err(e) = FaultDiagram::from_nodes(self.nodes.clone(), self.top.clone()) {
                panic!("internal transform produced an invalid diagram: {e}");
            }
        }
    }
}

/// Convenience builder for diagrams written in code.
#[derive(Debug, Default)]
pub struct DiagramBuilder {
    nodes: Vec<(String, NodeKind, Vec<String>)>,
}

impl DiagramBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Parentless chance node.
    pub fn root(self, id: &str, p: f64) -> Self {
        self.push(id, NodeKind::Chance(Cpt::constant(p)), &[])
    }

    /// Chance node with a table given as `(key, probability)` rows.
    pub fn chance(self, id: &str, parents: &[&str], rows: &[(&str, f64)]) -> Self {
        let mut table = vec![f64::NAN; 1 << parents.len()];
        for (key, p) in rows {
            let row = key_row(key, parents.len())
                .unwrap_or_else(|| panic!("bad key {key:?} for node {id}"));
            table[row] = *p;
        }
        self.push(
            id,
            NodeKind::Chance(Cpt::from_rows(parents.len(), table)),
            parents,
        )
    }

    pub fn and(self, id: &str, parents: &[&str]) -> Self {
        self.push(id, NodeKind::And, parents)
    }

    pub fn or(self, id: &str, parents: &[&str]) -> Self {
        self.push(id, NodeKind::Or, parents)
    }

    pub fn not(self, id: &str, parent: &str) -> Self {
        self.push(id, NodeKind::Not, &[parent])
    }

    fn push(mut self, id: &str, kind: NodeKind, parents: &[&str]) -> Self {
        self.nodes.push((
            id.to_string(),
            kind,
            parents.iter().map(|p| p.to_string()).collect(),
        ));
        self
    }

    pub fn build(self, top: &str) -> Result<FaultDiagram, ModelError> {
        let mut nodes = BTreeMap::new();
        for (id, kind, parents) in self.nodes {
            let nid = NodeId::new(id.clone())?;
            if nodes.contains_key(&nid) {
                return Err(ModelError::DuplicateNodeId(id));
            }
            let parents = parents
                .into_iter()
                .map(NodeId::new)
                .collect::<Result<_, _>>()?;
            nodes.insert(nid, Node { kind, parents });
        }
        FaultDiagram::from_nodes(nodes, NodeId::new(top)?)
    }
}
