mod common;

use fidsolve_core::ingest::{export_dot, parse_diagram, serialize_diagram};
use fidsolve_core::{DiagramBuilder, ModelError, ParseError};

use common::{fixture, fixture_names, fixture_text};

const SINGLE: &str = "{\n  \"top\": \"T\",\n  \"nodes\": [\n    {\"id\": \"T\", \"kind\": \"chance\", \"parents\": [], \"cpt\": {\"\": 0.7}}\n  ]\n}\n";

#[test]
fn single_node_is_canonical() {
    let d = parse_diagram(SINGLE).unwrap();
    assert_eq!(d.unconditional("T"), Some(0.7));
    assert_eq!(serialize_diagram(&d), SINGLE);
    assert_eq!(fixture_text("single_node.json"), SINGLE);
}

#[test]
fn committed_fixtures_are_canonical() {
    for name in fixture_names() {
        if name.starts_with("boundary_") || name == "fixture_fig1.json" {
            // Hand-written; canonical form may order nodes differently.
            continue;
        }
        assert_eq!(
            serialize_diagram(&fixture(&name)),
            fixture_text(&name),
            "{name}"
        );
    }
}

#[test]
fn probabilities_are_canonicalized() {
    let text = r#"{"top": "T", "nodes": [{"id": "T", "kind": "chance", "cpt": {"": 0.50}}]}"#;
    let out = serialize_diagram(&parse_diagram(text).unwrap());
    assert!(out.contains("{\"\": 0.5}"), "{out}");
}

#[test]
fn missing_cpt_names_the_node() {
    let text = "{\"top\": \"T\", \"nodes\": [\n  {\"id\": \"a\", \"kind\": \"chance\", \"cpt\": {\"\": 0.5}},\n  {\"id\": \"T\", \"kind\": \"chance\", \"parents\": [\"a\"]}\n]}";
    match parse_diagram(text) {
        Err(ParseError::Syntax {
            line,
            column,
            message,
        }) => {
            assert!(message.contains("node T"), "{message}");
            assert_eq!((line, column), (3, 10));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn logical_node_with_table_is_rejected() {
    let text = r#"{"top": "T", "nodes": [{"id": "a", "kind": "chance", "cpt": {"": 0.5}}, {"id": "T", "kind": "not", "parents": ["a"], "cpt": {"s": 1}}]}"#;
    assert!(matches!(
        parse_diagram(text),
        Err(ParseError::Syntax { .. })
    ));
}

#[test]
fn malformed_json_reports_position() {
    let text = "{\"top\": \"T\",\n  \"nodes\": [ oops ]}";
    match parse_diagram(text) {
        Err(ParseError::Syntax { line, .. }) => assert_eq!(line, 2),
        other => panic!("{other:?}"),
    }
    let unknown = r#"{"top": "T", "nodes": [], "extra": 1}"#;
    assert!(matches!(
        parse_diagram(unknown),
        Err(ParseError::Syntax { .. })
    ));
}

#[test]
fn validation_errors_pass_through() {
    let cycle = r#"{"top": "T", "nodes": [
        {"id": "a", "kind": "chance", "parents": ["b"], "cpt": {"s": 0.5, "f": 0.5}},
        {"id": "b", "kind": "chance", "parents": ["a"], "cpt": {"s": 0.5, "f": 0.5}},
        {"id": "T", "kind": "and", "parents": ["a", "b"]}]}"#;
    assert!(matches!(
        parse_diagram(cycle),
        Err(ParseError::Invalid(ModelError::CycleDetected(_)))
    ));
    let range = r#"{"top": "T", "nodes": [{"id": "T", "kind": "chance", "cpt": {"": 1.5}}]}"#;
    assert!(matches!(
        parse_diagram(range),
        Err(ParseError::Invalid(
            ModelError::ProbabilityOutOfRange { .. }
        ))
    ));
}

#[test]
fn dot_for_small_diagrams() {
    let one = parse_diagram(SINGLE).unwrap();
    assert_eq!(
        export_dot(&one),
        "digraph fault_diagram {\n  T [shape=ellipse, peripheries=2, label=\"T\\np=0.7\"];\n}\n"
    );
    let chain = DiagramBuilder::new()
        .root("P", 0.4)
        .not("T", "P")
        .build("T")
        .unwrap();
    let dot = export_dot(&chain);
    assert_eq!(dot.lines().filter(|l| l.contains("[shape=")).count(), 2);
    assert_eq!(
        dot.lines().filter(|l| l.contains("->")).collect::<Vec<_>>(),
        ["  P -> T;"]
    );
    assert!(dot.contains("label=\"T\\nNOT\""));
}
