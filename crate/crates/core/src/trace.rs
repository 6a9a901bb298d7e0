//! Ordered record of reduction steps.
//!
//! Rendered one event per line, tab separated:
//! `EVENT<TAB>subject[<TAB>subject2][<TAB>value]`.

use std::fmt;

use crate::model::{NodeId, Outcome};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventKind {
    Trim,
    Certain,
    Compute,
    Remove,
    Reverse,
    /// A grandfather that could not be reduced.
    Skip,
    Partition,
    Ird,
    Module,
    Instantiate,
    Combine,
    Fallback,
}

impl EventKind {
    pub fn label(self) -> &'static str {
        match self {
            EventKind::Trim => "TRIM",
            EventKind::Certain => "CERTAIN",
            EventKind::Compute => "COMPUTE",
            EventKind::Remove => "REMOVE",
            EventKind::Reverse => "REVERSE",
            EventKind::Skip => "SKIP",
            EventKind::Partition => "PARTITION",
            EventKind::Ird => "IRD",
            EventKind::Module => "MODULE",
            EventKind::Instantiate => "INSTANTIATE",
            EventKind::Combine => "COMBINE",
            EventKind::Fallback => "FALLBACK",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TraceEvent {
    pub kind: EventKind,
    /// Node set rendered as `{a,b,c}` ahead of the subjects.
    pub group: Vec<NodeId>,
    pub subjects: Vec<NodeId>,
    pub outcome: Option<Outcome>,
    pub value: Option<f64>,
    pub note: Option<String>,
    /// Nodes deleted from the diagram by this step. Not rendered.
    pub deleted: Vec<NodeId>,
}

impl TraceEvent {
    pub fn new(kind: EventKind) -> Self {
        TraceEvent {
            kind,
            group: Vec::new(),
            subjects: Vec::new(),
            outcome: None,
            value: None,
            note: None,
            deleted: Vec::new(),
        }
    }

    pub fn subject(mut self, id: &NodeId) -> Self {
        self.subjects.push(id.clone());
        self
    }

    pub fn group<'a>(mut self, ids: impl IntoIterator<Item = &'a NodeId>) -> Self {
        self.group.extend(ids.into_iter().cloned());
        self
    }

    pub fn outcome(mut self, o: Outcome) -> Self {
        self.outcome = Some(o);
        self
    }

    pub fn value(mut self, v: f64) -> Self {
        self.value = Some(v);
        self
    }

    pub fn note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn deleting<'a>(mut self, ids: impl IntoIterator<Item = &'a NodeId>) -> Self {
        self.deleted.extend(ids.into_iter().cloned());
        self
    }
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.label())?;
        if !self.group.is_empty() {
            let ids: Vec<&str> = self.group.iter().map(NodeId::as_str).collect();
            write!(f, "\t{{{}}}", ids.join(","))?;
        }
        for s in &self.subjects {
            write!(f, "\t{s}")?;
        }
        if let Some(o) = self.outcome {
            write!(f, "\t{o}")?;
        }
        if let Some(v) = self.value {
            write!(f, "\t{}", format_significant(v, 6))?;
        }
        if let Some(n) = &self.note {
            write!(f, "\t{n}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Trace {
    events: Vec<TraceEvent>,
}

impl Trace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, event: TraceEvent) {
        self.events.push(event);
    }

    pub fn append(&mut self, other: Trace) {
        self.events.extend(other.events);
    }

    pub fn events(&self) -> &[TraceEvent] {
        &self.events
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn of_kind(&self, kind: EventKind) -> impl Iterator<Item = &TraceEvent> {
        self.events.iter().filter(move |e| e.kind == kind)
    }

    pub fn count(&self, kind: EventKind) -> usize {
        self.of_kind(kind).count()
    }

    /// Every node deletion, in execution order.
    pub fn deleted_nodes(&self) -> impl Iterator<Item = &NodeId> {
        self.events.iter().flat_map(|e| e.deleted.iter())
    }

    /// Newline-terminated rendering, one event per line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        for e in &self.events {
            out.push_str(&e.to_string());
            out.push('\n');
        }
        out
    }
}

impl IntoIterator for Trace {
    type Item = TraceEvent;
    type IntoIter = std::vec::IntoIter<TraceEvent>;

    fn into_iter(self) -> Self::IntoIter {
        self.events.into_iter()
    }
}

/// Fixed-notation rendering with `digits` significant digits.
pub fn format_significant(value: f64, digits: usize) -> String {
    if value == 0.0 || !value.is_finite() {
        return format!("{:.*}", digits.saturating_sub(1), value);
    }
    let magnitude = value.abs().log10().floor() as i64;
    let decimals = (digits as i64 - 1 - magnitude).max(0) as usize;
    format!("{value:.decimals$}")
}
