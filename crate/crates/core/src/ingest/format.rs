use std::fmt::Write;

use thiserror::Error;

use crate::model::{validate_diagram, DiagramDocument, FaultDiagram, KindTag, ModelError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error(transparent)]
    Invalid(#[from] ModelError),
}

/// Decodes a diagram document and validates it.
pub fn parse_diagram(text: &str) -> Result<FaultDiagram, ParseError> {
    let doc: DiagramDocument = serde_json::from_str(text).map_err(|e| ParseError::Syntax {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    for rec in &doc.nodes {
        let problem = match (rec.kind, &rec.cpt) {
            (KindTag::Chance, None) => "chance node without \"cpt\"",
            (KindTag::And | KindTag::Or | KindTag::Not, Some(_)) => "logical node with \"cpt\"",
            _ => continue,
        };
        let (line, column) = locate(text, &rec.id);
        return Err(ParseError::Syntax {
            line,
            column,
            message: format!("node {}: {problem}", rec.id),
        });
    }
    Ok(validate_diagram(&doc)?)
}

/// 1-based line and column of the `"id": "<id>"` value, or (0, 0).
fn locate(text: &str, id: &str) -> (usize, usize) {
    let needle = format!("\"{id}\"");
    let is_id_value = |offset: usize| {
        let before = text[..offset].trim_end();
        before
            .strip_suffix(':')
            .is_some_and(|b| b.trim_end().ends_with("\"id\""))
    };
    text.match_indices(&needle)
        .map(|(offset, _)| offset)
        .find(|&offset| is_id_value(offset))
        .map(|offset| {
            let before = &text[..offset];
            let line = before.matches('\n').count() + 1;
            let column = offset - before.rfind('\n').map_or(0, |i| i + 1) + 1;
            (line, column)
        })
        .unwrap_or((0, 0))
}

/// Canonical text form: nodes sorted by id, one per line, table rows sorted by
/// key, probabilities in shortest round-trip decimal.
pub fn serialize_diagram(d: &FaultDiagram) -> String {
    let doc = d.to_document();
    let mut out = String::new();
    writeln!(out, "{{").unwrap();
    writeln!(out, "  \"top\": {},", quote(&doc.top)).unwrap();
    writeln!(out, "  \"nodes\": [").unwrap();
    for (i, rec) in doc.nodes.iter().enumerate() {
        let parents: Vec<String> = rec.parents.iter().map(|p| quote(p)).collect();
        write!(
            out,
            "    {{\"id\": {}, \"kind\": \"{}\", \"parents\": [{}]",
            quote(&rec.id),
            rec.kind.as_str(),
            parents.join(", ")
        )
        .unwrap();
        if let Some(cpt) = &rec.cpt {
            let rows: Vec<String> = cpt
                .iter()
                .map(|(k, p)| format!("{}: {}", quote(k), p))
                .collect();
            write!(out, ", \"cpt\": {{{}}}", rows.join(", ")).unwrap();
        }
        out.push('}');
        if i + 1 < doc.nodes.len() {
            out.push(',');
        }
        out.push('\n');
    }
    writeln!(out, "  ]").unwrap();
    writeln!(out, "}}").unwrap();
    out
}

fn quote(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
