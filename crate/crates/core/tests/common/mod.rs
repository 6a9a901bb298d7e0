//! Shared diagram builders for the integration tests.
#![allow(dead_code)]

use std::path::PathBuf;

use fidsolve_core::ingest::{generate_fault_tree, generate_random, parse_diagram, GeneratorParams};
use fidsolve_core::model::{DiagramDocument, KindTag, NodeRecord};
use fidsolve_core::transforms::{computable, grandfathers, removable, reverse_arc};
use fidsolve_core::{validate_diagram, FaultDiagram};

pub const BIASES: [f64; 3] = [0.2, 0.5, 0.8];

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture(name: &str) -> FaultDiagram {
    parse_diagram(&fixture_text(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

pub fn fixture_names() -> Vec<String> {
    let mut names: Vec<String> = std::fs::read_dir(fixture_path(""))
        .expect("fixtures directory")
        .filter_map(|e| e.ok()?.file_name().into_string().ok())
        .filter(|n| n.ends_with(".json"))
        .collect();
    names.sort();
    names
}

/// Sizes cycle through 8..=14 chance and 4..=10 logical nodes.
pub fn params(seed: u64) -> GeneratorParams {
    GeneratorParams {
        chance_count: 8 + (seed % 7) as usize,
        logical_count: 4 + ((seed / 7) % 7) as usize,
        max_parents: 3,
        shared_subsystem_bias: BIASES[(seed % 3) as usize],
        seed,
    }
}

pub fn random(seed: u64) -> FaultDiagram {
    generate_random(&params(seed)).expect("generator output is valid")
}

pub fn fault_tree(seed: u64) -> FaultDiagram {
    generate_fault_tree(&params(seed)).expect("generator output is valid")
}

/// Deterministic pick in `0..len`.
fn pick(seed: u64, salt: u64, len: usize) -> usize {
    (seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(salt.wrapping_mul(1442695040888963407))
        >> 33) as usize
        % len
}

fn edit(d: &FaultDiagram, f: impl FnOnce(&mut DiagramDocument)) -> FaultDiagram {
    let mut doc = d.to_document();
    f(&mut doc);
    validate_diagram(&doc).expect("edited document stays valid")
}

/// A generated diagram with one to three extra chance nodes that cannot
/// reach the top.
pub fn with_barren(seed: u64) -> FaultDiagram {
    let base = generate_random(&GeneratorParams {
        chance_count: 8 + (seed % 4) as usize,
        ..params(seed)
    })
    .unwrap();
    let extra = 1 + pick(seed, 1, 3);
    edit(&base, |doc| {
        let anchors: Vec<String> = doc
            .nodes
            .iter()
            .filter(|n| n.kind == KindTag::Chance)
            .map(|n| n.id.clone())
            .collect();
        let mut prev = anchors[pick(seed, 2, anchors.len())].clone();
        for k in 0..extra {
            let id = format!("z{k}");
            doc.nodes.push(NodeRecord {
                id: id.clone(),
                kind: KindTag::Chance,
                parents: vec![prev.clone()],
                cpt: Some(
                    [
                        ("f".to_string(), 0.3),
                        ("s".to_string(), 0.6 + 0.1 * k as f64),
                    ]
                    .into(),
                ),
            });
            prev = id;
        }
    })
}

/// A generated diagram with one or two parentless chance nodes pinned to 0
/// or 1 and, when available, one conditioned row pinned as well.
pub fn with_certainty(seed: u64) -> FaultDiagram {
    edit(&random(seed), |doc| {
        let roots: Vec<usize> = (0..doc.nodes.len())
            .filter(|&i| doc.nodes[i].kind == KindTag::Chance && doc.nodes[i].parents.is_empty())
            .collect();
        let count = 1 + pick(seed, 3, 2);
        for k in 0..count.min(roots.len()) {
            let i = roots[pick(seed, 4 + k as u64, roots.len())];
            let value = if pick(seed, 9 + k as u64, 2) == 0 {
                0.0
            } else {
                1.0
            };
            doc.nodes[i].cpt = Some([(String::new(), value)].into());
        }
        let conditioned: Vec<usize> = (0..doc.nodes.len())
            .filter(|&i| doc.nodes[i].kind == KindTag::Chance && !doc.nodes[i].parents.is_empty())
            .collect();
        if !conditioned.is_empty() {
            let i = conditioned[pick(seed, 7, conditioned.len())];
            let cpt = doc.nodes[i].cpt.as_mut().unwrap();
            let key = cpt.keys().nth(pick(seed, 8, cpt.len())).unwrap().clone();
            cpt.insert(key, (seed % 2) as f64);
        }
    })
}

/// First `n` generated diagrams (from seed 1) that have a computable logical
/// node, paired with that node. Fault trees and general diagrams alternate.
pub fn computable_cases(n: usize) -> Vec<(FaultDiagram, String)> {
    let mut out = Vec::new();
    let mut seed = 1;
    while out.len() < n {
        let d = if seed % 2 == 0 {
            fault_tree(seed)
        } else {
            random(seed)
        };
        let found = d
            .ids()
            .find(|id| computable(&d, id.as_str()))
            .map(|id| id.to_string());
        if let Some(id) = found {
            out.push((d, id));
        }
        seed += 1;
    }
    out
}

pub fn removable_cases(n: usize) -> Vec<(FaultDiagram, String)> {
    let mut out = Vec::new();
    let mut seed = 1;
    while out.len() < n {
        let d = random(seed);
        let found: Vec<String> = d
            .ids()
            .filter(|id| removable(&d, id.as_str()))
            .map(|id| id.to_string())
            .collect();
        if !found.is_empty() {
            let id = found[pick(seed, 5, found.len())].clone();
            out.push((d, id));
        }
        seed += 1;
    }
    out
}

/// Chance-to-chance arcs whose reversal is legal.
pub fn reversal_cases(n: usize) -> Vec<(FaultDiagram, String, String)> {
    let mut out = Vec::new();
    let mut seed = 1;
    while out.len() < n {
        let d = random(seed);
        let arcs: Vec<(String, String)> = d
            .arcs()
            .into_iter()
            .filter(|(i, j)| d.is_chance(i.as_str()) && d.is_chance(j.as_str()))
            .filter(|(i, j)| reverse_arc(&d, i.as_str(), j.as_str()).is_ok())
            .map(|(i, j)| (i.to_string(), j.to_string()))
            .collect();
        if !arcs.is_empty() {
            let (i, j) = arcs[pick(seed, 6, arcs.len())].clone();
            out.push((d, i, j));
        }
        seed += 1;
    }
    out
}

/// Chance-heavy generated diagrams that contain at least one grandfather.
pub fn grandfather_cases(n: usize) -> Vec<FaultDiagram> {
    let mut out = Vec::new();
    let mut seed = 1;
    while out.len() < n {
        let d = generate_random(&GeneratorParams {
            chance_count: 10 + (seed % 5) as usize,
            logical_count: 2 + (seed % 3) as usize,
            ..params(seed)
        })
        .unwrap();
        if !grandfathers(&d).is_empty() {
            out.push(d);
        }
        seed += 1;
    }
    out
}
