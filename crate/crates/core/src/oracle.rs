//! Exact brute-force evaluation by enumerating every joint assignment of the
//! chance nodes. Logical nodes are evaluated deterministically per assignment.
//! Exponential in the number of chance nodes, so guarded by a cap.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::model::{FaultDiagram, NodeId, NodeKind, Outcome};

pub const DEFAULT_CAP: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("diagram has {chance} chance nodes, oracle cap is {cap}")]
    TooLargeForOracle { chance: usize, cap: usize },
    #[error("unknown node {0}")]
    UnknownNode(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct JointAssignment {
    pub outcomes: BTreeMap<NodeId, Outcome>,
    pub weight: f64,
}

enum Step {
    Chance { bit: usize, table: Vec<f64> },
    Logical(NodeKind),
}

/// Compiled evaluation plan: nodes in topological order with parent slots.
struct Compiled {
    ids: Vec<NodeId>,
    parents: Vec<Vec<usize>>,
    steps: Vec<Step>,
    chance: Vec<usize>,
}

impl Compiled {
    fn new(d: &FaultDiagram, cap: usize) -> Result<Self, OracleError> {
        let chance_total = d.chance_count();
        if chance_total > cap {
            return Err(OracleError::TooLargeForOracle {
                chance: chance_total,
                cap,
            });
        }
        let ids = d.topological_order();
        let slot: BTreeMap<&NodeId, usize> =
            ids.iter().enumerate().map(|(i, id)| (id, i)).collect();
        let mut parents = Vec::with_capacity(ids.len());
        let mut steps = Vec::with_capacity(ids.len());
        let mut chance = Vec::new();
        for id in &ids {
            let node = d.node(id.as_str()).expect("id from topological order");
            parents.push(node.parents().iter().map(|p| slot[p]).collect());
            steps.push(match node.kind() {
                NodeKind::Chance(cpt) => {
                    chance.push(slot[id]);
                    Step::Chance {
                        bit: chance.len() - 1,
                        table: cpt.rows().to_vec(),
                    }
                }
                other => Step::Logical(other.clone()),
            });
        }
        Ok(Compiled {
            ids,
            parents,
            steps,
            chance,
        })
    }

    /// Evaluates every node under `mask` (bit k set: k-th chance node failed).
    fn evaluate(&self, mask: usize, values: &mut [bool]) -> f64 {
        let mut weight = 1.0;
        for (i, step) in self.steps.iter().enumerate() {
            match step {
                Step::Chance { bit, table } => {
                    let row = self.parents[i]
                        .iter()
                        .enumerate()
                        .fold(
                            0usize,
                            |acc, (k, &p)| if values[p] { acc } else { acc | (1 << k) },
                        );
                    let success = mask & (1 << bit) == 0;
                    values[i] = success;
                    weight *= if success {
                        table[row]
                    } else {
                        1.0 - table[row]
                    };
                }
                Step::Logical(kind) => {
                    let ps = self.parents[i]
                        .iter()
                        .map(|&p| Outcome::from_bool(values[p]));
                    values[i] = kind
                        .evaluate_logical(ps)
                        .expect("logical node has parents")
                        .is_success();
                }
            }
        }
        weight
    }

    fn assignments(&self) -> usize {
        1usize << self.chance.len()
    }
}

/// Exact evaluator with a configurable cap on chance nodes.
#[derive(Debug, Clone, Copy)]
pub struct Oracle {
    pub cap: usize,
}

impl Default for Oracle {
    fn default() -> Self {
        Oracle { cap: DEFAULT_CAP }
    }
}

impl Oracle {
    pub fn with_cap(cap: usize) -> Self {
        Oracle { cap }
    }

    /// Every joint assignment of the chance nodes with its probability weight.
    pub fn enumerate_joint(
        &self,
        d: &FaultDiagram,
    ) -> Result<impl Iterator<Item = JointAssignment>, OracleError> {
        let compiled = Compiled::new(d, self.cap)?;
        let mut values = vec![false; compiled.ids.len()];
        Ok((0..compiled.assignments()).map(move |mask| {
            let weight = compiled.evaluate(mask, &mut values);
            let outcomes = compiled
                .chance
                .iter()
                .map(|&i| (compiled.ids[i].clone(), Outcome::from_bool(values[i])))
                .collect();
            JointAssignment { outcomes, weight }
        }))
    }

    pub fn top_probability(&self, d: &FaultDiagram) -> Result<f64, OracleError> {
        self.marginal(d, d.top().as_str())
    }

    pub fn marginal(&self, d: &FaultDiagram, node: &str) -> Result<f64, OracleError> {
        let compiled = Compiled::new(d, self.cap)?;
        let slot = compiled
            .ids
            .iter()
            .position(|id| id.as_str() == node)
            .ok_or_else(|| OracleError::UnknownNode(node.into()))?;
        let mut values = vec![false; compiled.ids.len()];
        let mut total = 0.0;
        for mask in 0..compiled.assignments() {
            let w = compiled.evaluate(mask, &mut values);
            if values[slot] {
                total += w;
            }
        }
        Ok(total)
    }

    /// Success marginal of every node in one enumeration pass.
    pub fn marginals(&self, d: &FaultDiagram) -> Result<BTreeMap<NodeId, f64>, OracleError> {
        let compiled = Compiled::new(d, self.cap)?;
        let mut values = vec![false; compiled.ids.len()];
        let mut totals = vec![0.0; compiled.ids.len()];
        for mask in 0..compiled.assignments() {
            let w = compiled.evaluate(mask, &mut values);
            for (t, &v) in totals.iter_mut().zip(&values) {
                if v {
                    *t += w;
                }
            }
        }
        Ok(compiled.ids.into_iter().zip(totals).collect())
    }
}

pub fn enumerate_joint(
    d: &FaultDiagram,
) -> Result<impl Iterator<Item = JointAssignment>, OracleError> {
    Oracle::default().enumerate_joint(d)
}

pub fn oracle_top_probability(d: &FaultDiagram) -> Result<f64, OracleError> {
    Oracle::default().top_probability(d)
}

pub fn oracle_marginal(d: &FaultDiagram, node: &str) -> Result<f64, OracleError> {
    Oracle::default().marginal(d, node)
}
