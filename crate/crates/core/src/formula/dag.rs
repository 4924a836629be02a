use std::collections::HashMap;

use super::{Formula, TimeBound};

/// One deduplicated subformula; children are indices into the DAG.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum NodeKind {
    True,
    False,
    Prop(String),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Implies(usize, usize),
    Pre(usize),
    Since(usize, usize, Option<TimeBound>),
    Once(usize, Option<TimeBound>),
    Historically(usize, Option<TimeBound>),
}

impl NodeKind {
    pub fn children(&self) -> Vec<usize> {
        match *self {
            NodeKind::True | NodeKind::False | NodeKind::Prop(_) => vec![],
            NodeKind::Not(a)
            | NodeKind::Pre(a)
            | NodeKind::Once(a, _)
            | NodeKind::Historically(a, _) => vec![a],
            NodeKind::And(a, b)
            | NodeKind::Or(a, b)
            | NodeKind::Implies(a, b)
            | NodeKind::Since(a, b, _) => vec![a, b],
        }
    }

    pub fn is_proposition(&self) -> bool {
        matches!(self, NodeKind::Prop(_))
    }
}

/// Structurally unique subformulas in dependency order: every child index
/// is smaller than its parent's, and the root is the last node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubformulaDag {
    nodes: Vec<NodeKind>,
    root: usize,
}

impl SubformulaDag {
    pub fn build(f: &Formula) -> Self {
        let mut nodes = Vec::new();
        let mut index = HashMap::new();
        let root = intern(f, &mut nodes, &mut index);
        SubformulaDag { nodes, root }
    }

    pub fn nodes(&self) -> &[NodeKind] {
        &self.nodes
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }
}

fn intern(f: &Formula, nodes: &mut Vec<NodeKind>, index: &mut HashMap<NodeKind, usize>) -> usize {
    let mut go = |g: &Formula| intern(g, nodes, index);
    let kind = match f {
        Formula::True => NodeKind::True,
        Formula::False => NodeKind::False,
        Formula::Prop(p) => NodeKind::Prop(p.clone()),
        Formula::Not(a) => NodeKind::Not(go(a)),
        Formula::Pre(a) => NodeKind::Pre(go(a)),
        Formula::Once(a, b) => NodeKind::Once(go(a), *b),
        Formula::Historically(a, b) => NodeKind::Historically(go(a), *b),
        Formula::And(a, b) => {
            let (a, b) = (go(a), go(b));
            NodeKind::And(a, b)
        }
        Formula::Or(a, b) => {
            let (a, b) = (go(a), go(b));
            NodeKind::Or(a, b)
        }
        Formula::Implies(a, b) => {
            let (a, b) = (go(a), go(b));
            NodeKind::Implies(a, b)
        }
        Formula::Since(a, b, bound) => {
            let (a, b) = (go(a), go(b));
            NodeKind::Since(a, b, *bound)
        }
    };
    if let Some(&i) = index.get(&kind) {
        return i;
    }
    nodes.push(kind.clone());
    index.insert(kind, nodes.len() - 1);
    nodes.len() - 1
}
