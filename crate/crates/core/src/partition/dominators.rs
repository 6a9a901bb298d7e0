use std::collections::BTreeMap;

use crate::model::{FaultDiagram, NodeId};

/// Post-dominator tree rooted at the top event.
///
/// On a DAG the immediate post-dominator of a node is the nearest common
/// ancestor, in the tree, of its successors; processing nodes from the top
/// downwards fills the tree in one pass.
#[derive(Debug, Clone)]
pub struct PostDominators {
    ipdom: BTreeMap<NodeId, Option<NodeId>>,
    depth: BTreeMap<NodeId, usize>,
}

impl PostDominators {
    pub fn new(d: &FaultDiagram) -> Self {
        let reach = d.reaches_top();
        let succ = d.successors_map();
        let mut tree = PostDominators {
            ipdom: BTreeMap::new(),
            depth: BTreeMap::new(),
        };
        for id in d.topological_order().into_iter().rev() {
            if !reach.contains(&id) {
                continue;
            }
            if &id == d.top() {
                tree.ipdom.insert(id.clone(), None);
                tree.depth.insert(id, 0);
                continue;
            }
            let lca = succ[&id]
                .iter()
                .filter(|s| reach.contains(**s))
                .map(|s| (*s).clone())
                .reduce(|a, b| tree.common(&a, &b))
                .expect("node reaching top has a successor reaching top");
            tree.depth.insert(id.clone(), tree.depth[&lca] + 1);
            tree.ipdom.insert(id, Some(lca));
        }
        tree
    }

    pub fn contains(&self, id: &str) -> bool {
        self.ipdom.contains_key(id)
    }

    pub fn immediate(&self, id: &str) -> Option<&NodeId> {
        self.ipdom.get(id).and_then(Option::as_ref)
    }

    /// Nearest node post-dominating both `a` and `b` (either may be the answer).
    pub fn common(&self, a: &NodeId, b: &NodeId) -> NodeId {
        let (mut a, mut b) = (a, b);
        while a != b {
            if self.depth[a] >= self.depth[b] {
                a = self.ipdom[a].as_ref().expect("root has depth 0");
            } else {
                b = self.ipdom[b].as_ref().expect("root has depth 0");
            }
        }
        a.clone()
    }

    /// `id`, its immediate post-dominator, and so on up to the top event.
    pub fn chain(&self, id: &NodeId) -> Vec<NodeId> {
        let mut out = vec![id.clone()];
        while let Some(next) = self.immediate(out.last().expect("non-empty").as_str()) {
            out.push(next.clone());
        }
        out
    }
}
