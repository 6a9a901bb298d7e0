//! Generalized fault diagrams and the partitioning solver for the
//! unconditional probability of the top event.

pub mod ingest;
pub mod model;
pub mod oracle;
pub mod partition;
pub mod trace;
pub mod transforms;

pub use ingest::{
    export_dot, generate_random, parse_diagram, serialize_diagram, GeneratorParams, ParseError,
};
pub use model::{
    validate_diagram, Cpt, DiagramBuilder, DiagramDocument, FaultDiagram, KindTag, ModelError,
    Node, NodeId, NodeKind, NodeRecord, Outcome,
};
pub use oracle::{oracle_marginal, oracle_top_probability, Oracle, OracleError};
pub use partition::{solve, solve_with, Solution, SolveError, SolveOptions, TieOrder};
pub use trace::{EventKind, Trace, TraceEvent};
