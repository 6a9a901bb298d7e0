//! Diagram file format, DOT export and random diagram generation.

mod dot;
mod format;
mod generate;

pub use dot::export_dot;
pub use format::{parse_diagram, serialize_diagram, ParseError};
pub use generate::{generate_fault_tree, generate_random, GeneratorError, GeneratorParams};
