use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::model::{Cpt, FaultDiagram, Node, NodeId, NodeKind};

/// Table entries are drawn from this range so that no row is certain.
const ROW_RANGE: std::ops::RangeInclusive<f64> = 0.05..=0.95;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("infeasible generator parameters: {0}")]
    InfeasibleParams(String),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeneratorParams {
    pub chance_count: usize,
    pub logical_count: usize,
    pub max_parents: usize,
    /// Probability of drawing a parent among nodes that already feed
    /// something, which creates shared subsystems and multiple paths.
    pub shared_subsystem_bias: f64,
    pub seed: u64,
}

impl Default for GeneratorParams {
    fn default() -> Self {
        GeneratorParams {
            chance_count: 10,
            logical_count: 6,
            max_parents: 3,
            shared_subsystem_bias: 0.5,
            seed: 0,
        }
    }
}

impl GeneratorParams {
    fn check(&self) -> Result<(), GeneratorError> {
        let fail = |m: &str| Err(GeneratorError::InfeasibleParams(m.into()));
        if self.chance_count == 0 {
            return fail("chance_count must be positive");
        }
        if self.max_parents == 0 {
            return fail("max_parents must be positive");
        }
        if !(0.0..=1.0).contains(&self.shared_subsystem_bias) {
            return fail("shared_subsystem_bias must lie in [0, 1]");
        }
        if self.chance_count + self.logical_count > 1000 {
            return fail("at most 1000 nodes");
        }
        Ok(())
    }
}

fn chance_name(i: usize) -> NodeId {
    NodeId::new(format!("c{i:02}")).expect("valid id")
}

fn gate_name(i: usize) -> NodeId {
    NodeId::new(format!("g{i:02}")).expect("valid id")
}

fn random_table(rng: &mut ChaCha8Rng, arity: usize) -> Cpt {
    Cpt::from_rows(
        arity,
        (0..1usize << arity)
            .map(|_| rng.gen_range(ROW_RANGE))
            .collect(),
    )
}

/// Draws `k` distinct parents from `pool`, preferring already-used nodes with
/// probability `bias` and fresh ones otherwise.
fn pick_parents(
    rng: &mut ChaCha8Rng,
    pool: &[NodeId],
    used: &BTreeSet<NodeId>,
    bias: f64,
    k: usize,
) -> Vec<NodeId> {
    let mut chosen: Vec<NodeId> = Vec::with_capacity(k);
    while chosen.len() < k.min(pool.len()) {
        let shared = rng.gen_bool(bias);
        let eligible: Vec<&NodeId> = pool
            .iter()
            .filter(|n| !chosen.contains(n) && used.contains(*n) == shared)
            .collect();
        let pick = match eligible.choose(rng) {
            Some(n) => (*n).clone(),
            None => pool
                .iter()
                .filter(|n| !chosen.contains(n))
                .collect::<Vec<_>>()
                .choose(rng)
                .map(|n| (*n).clone())
                .expect("pool has an unchosen node"),
        };
        chosen.push(pick);
    }
    chosen
}

/// Random valid diagram, fully determined by the parameters.
///
/// Chance nodes `c00..` draw parents from earlier chance nodes; logical
/// nodes `g00..` draw from all chance nodes and earlier logical nodes. The
/// last logical node is the top event and also collects every node that
/// would otherwise have no successor.
pub fn generate_random(params: &GeneratorParams) -> Result<FaultDiagram, GeneratorError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let bias = params.shared_subsystem_bias;
    let mut nodes = std::collections::BTreeMap::new();
    let mut used: BTreeSet<NodeId> = BTreeSet::new();
    let mut pool: Vec<NodeId> = Vec::new();

    for i in 0..params.chance_count {
        let k = rng.gen_range(0..=i.min(params.max_parents));
        let parents = pick_parents(&mut rng, &pool, &used, bias, k);
        used.extend(parents.iter().cloned());
        let table = random_table(&mut rng, parents.len());
        let id = chance_name(i);
        nodes.insert(id.clone(), Node::new(NodeKind::Chance(table), parents));
        pool.push(id);
    }

    let top = if params.logical_count == 0 {
        pool.last().expect("chance_count > 0").clone()
    } else {
        for j in 0..params.logical_count {
            let id = gate_name(j);
            let last = j + 1 == params.logical_count;
            let dangling: Vec<NodeId> = pool
                .iter()
                .filter(|n| !used.contains(*n))
                .cloned()
                .collect();
            let (kind, parents) = if last && !dangling.is_empty() {
                let kind = match dangling.len() {
                    1 if rng.gen_bool(0.3) => NodeKind::Not,
                    _ if rng.gen_bool(0.5) => NodeKind::And,
                    _ => NodeKind::Or,
                };
                (kind, dangling)
            } else {
                let roll: f64 = rng.gen();
                if roll < 0.2 {
                    (NodeKind::Not, pick_parents(&mut rng, &pool, &used, bias, 1))
                } else {
                    let lo = params.max_parents.min(2);
                    let k = rng.gen_range(lo..=params.max_parents);
                    let kind = if roll < 0.6 {
                        NodeKind::And
                    } else {
                        NodeKind::Or
                    };
                    (kind, pick_parents(&mut rng, &pool, &used, bias, k))
                }
            };
            used.extend(parents.iter().cloned());
            nodes.insert(id.clone(), Node::new(kind, parents));
            pool.push(id);
        }
        pool.last().expect("logical_count > 0").clone()
    };

    FaultDiagram::from_nodes(nodes, top)
        .map_err(|e| GeneratorError::InfeasibleParams(format!("generated invalid diagram: {e}")))
}

/// Random classic fault tree: parentless chance nodes, each node feeding
/// exactly one gate, the last gate being the top event.
pub fn generate_fault_tree(params: &GeneratorParams) -> Result<FaultDiagram, GeneratorError> {
    params.check()?;
    if params.logical_count == 0 && params.chance_count > 1 {
        return Err(GeneratorError::InfeasibleParams(
            "a tree over several basic events needs at least one gate".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut nodes = std::collections::BTreeMap::new();
    let mut pool: Vec<NodeId> = Vec::new();
    for i in 0..params.chance_count {
        let id = chance_name(i);
        let table = random_table(&mut rng, 0);
        nodes.insert(id.clone(), Node::new(NodeKind::Chance(table), Vec::new()));
        pool.push(id);
    }
    let mut top = pool[0].clone();
    for j in 0..params.logical_count {
        let id = gate_name(j);
        pool.shuffle(&mut rng);
        let last = j + 1 == params.logical_count;
        let k = if last {
            pool.len()
        } else {
            // Leave at least one node per remaining gate.
            let spare = pool
                .len()
                .saturating_sub(params.logical_count - j - 1)
                .max(1);
            rng.gen_range(1..=params.max_parents.max(2).min(spare))
        };
        let parents: Vec<NodeId> = pool.drain(..k.min(pool.len()).max(1)).collect();
        let kind = if parents.len() == 1 && rng.gen_bool(0.5) {
            NodeKind::Not
        } else if rng.gen_bool(0.5) {
            NodeKind::And
        } else {
            NodeKind::Or
        };
        nodes.insert(id.clone(), Node::new(kind, parents));
        pool.push(id.clone());
        top = id;
    }
    FaultDiagram::from_nodes(nodes, top)
        .map_err(|e| GeneratorError::InfeasibleParams(format!("generated invalid tree: {e}")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ingest::serialize_diagram;

    #[test]
    fn single_chance_node() {
        let d = generate_random(&GeneratorParams {
            chance_count: 1,
            logical_count: 0,
            seed: 9,
            ..Default::default()
        })
        .unwrap();
        assert_eq!(d.len(), 1);
        assert!(d.unconditional(d.top().as_str()).is_some());
    }

    #[test]
    fn deterministic_in_seed() {
        let p = GeneratorParams {
            seed: 1234,
            ..Default::default()
        };
        assert_eq!(
            serialize_diagram(&generate_random(&p).unwrap()),
            serialize_diagram(&generate_random(&p).unwrap())
        );
        let other = GeneratorParams { seed: 1235, ..p };
        assert_ne!(
            generate_random(&p).unwrap(),
            generate_random(&other).unwrap()
        );
    }

    #[test]
    fn high_bias_shares_subsystems() {
        let d = generate_random(&GeneratorParams {
            chance_count: 10,
            logical_count: 8,
            max_parents: 3,
            shared_subsystem_bias: 0.8,
            seed: 42,
        })
        .unwrap();
        let succ = d.successors_map();
        assert!(succ.values().any(|s| s.len() >= 2));
    }

    #[test]
    fn rejects_infeasible() {
        let bad = GeneratorParams {
            chance_count: 0,
            ..Default::default()
        };
        assert!(generate_random(&bad).is_err());
        let bad = GeneratorParams {
            shared_subsystem_bias: 1.5,
            ..Default::default()
        };
        assert!(generate_random(&bad).is_err());
        let bad = GeneratorParams {
            chance_count: 3,
            logical_count: 0,
            ..Default::default()
        };
        assert!(generate_fault_tree(&bad).is_err());
    }

    #[test]
    fn fault_trees_are_trees() {
        for seed in 0..50 {
            let d = generate_fault_tree(&GeneratorParams {
                chance_count: 8,
                logical_count: 5,
                seed,
                ..Default::default()
            })
            .unwrap();
            let succ = d.successors_map();
            for (id, s) in &succ {
                let expected = usize::from(*id != d.top());
                assert_eq!(s.len(), expected, "seed {seed} node {id}");
            }
            assert!(d.chance_ids().all(|c| d.parents(c.as_str()).is_empty()));
        }
    }
}
