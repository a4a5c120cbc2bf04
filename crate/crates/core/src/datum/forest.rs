use std::fmt::Write as _;

use serde::Serialize;

use super::SpecialDatum;
use crate::error::{Error, Result};

/// A vertex `v_J` of a Watanabe forest with `J = {ν, …, ξ}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct ForestNode {
    pub nu: usize,
    pub xi: usize,
    pub weight: u64,
    pub parent: Option<usize>,
    /// Children left to right (increasing `ν`).
    pub children: Vec<usize>,
    /// Free parameter `k_{ν,ξ}` of an internal node: child weight over own weight.
    pub parameter: Option<u64>,
}

impl ForestNode {
    pub fn is_leaf(&self) -> bool {
        self.children.is_empty()
    }

    pub fn len(&self) -> usize {
        self.xi - self.nu + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Display name of the free parameter, e.g. `k1,4`.
    pub fn parameter_name(&self) -> String {
        format!("k{},{}", self.nu, self.xi)
    }
}

/// Plane forest shape used to build forests by hand: leaves are numbered
/// left to right.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TreeShape {
    Leaf,
    Node(u64, Vec<TreeShape>),
}

impl TreeShape {
    /// The star `(d; k)`.
    pub fn star(d: usize, k: u64) -> Self {
        TreeShape::Node(k, vec![TreeShape::Leaf; d])
    }

    pub fn leaves(&self) -> usize {
        match self {
            TreeShape::Leaf => 1,
            TreeShape::Node(_, c) => c.iter().map(TreeShape::leaves).sum(),
        }
    }
}

/// Plane forest of a contiguous special datum. Nodes are stored in preorder.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct WatanabeForest {
    d: usize,
    nodes: Vec<ForestNode>,
    roots: Vec<usize>,
}

impl WatanabeForest {
    /// Builds a forest from plane shapes, multiplying parameters down each
    /// root path (roots get weight 1). Parameters are not checked here.
    pub fn from_shapes(trees: &[TreeShape]) -> Result<Self> {
        fn go(
            s: &TreeShape,
            parent: Option<usize>,
            weight: u64,
            next: &mut usize,
            nodes: &mut Vec<ForestNode>,
        ) -> Result<usize> {
            let id = nodes.len();
            let nu = *next;
            nodes.push(ForestNode {
                nu,
                xi: nu,
                weight,
                parent,
                children: Vec::new(),
                parameter: None,
            });
            if let TreeShape::Node(k, kids) = s {
                if kids.is_empty() {
                    return Err(Error::InvalidDatum("internal node without children".into()));
                }
                let cw = weight.checked_mul(*k).ok_or(Error::Overflow("forest weight"))?;
                let mut ids = Vec::with_capacity(kids.len());
                for c in kids {
                    ids.push(go(c, Some(id), cw, next, nodes)?);
                }
                nodes[id].children = ids;
                nodes[id].parameter = Some(*k);
                nodes[id].xi = *next - 1;
            } else {
                *next += 1;
            }
            Ok(id)
        }
        let mut nodes = Vec::new();
        let mut roots = Vec::new();
        let mut next = 1;
        for t in trees {
            roots.push(go(t, None, 1, &mut next, &mut nodes)?);
        }
        if roots.is_empty() {
            return Err(Error::InvalidDatum("empty forest".into()));
        }
        Ok(Self {
            d: next - 1,
            nodes,
            roots,
        })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn nodes(&self) -> &[ForestNode] {
        &self.nodes
    }

    pub fn node(&self, i: usize) -> &ForestNode {
        &self.nodes[i]
    }

    pub fn roots(&self) -> &[usize] {
        &self.roots
    }

    pub fn is_tree(&self) -> bool {
        self.roots.len() == 1
    }

    /// The plane shape of the subtree at `i`.
    pub fn shape(&self, i: usize) -> TreeShape {
        let n = &self.nodes[i];
        match n.parameter {
            None => TreeShape::Leaf,
            Some(k) => TreeShape::Node(k, n.children.iter().map(|&c| self.shape(c)).collect()),
        }
    }

    pub fn shapes(&self) -> Vec<TreeShape> {
        self.roots.iter().map(|&r| self.shape(r)).collect()
    }

    /// Free parameters `(name, value)` of all internal nodes in preorder.
    pub fn parameters(&self) -> Vec<(String, u64)> {
        self.nodes
            .iter()
            .filter_map(|n| n.parameter.map(|k| (n.parameter_name(), k)))
            .collect()
    }

    /// `w(J)` as a product of parameter names along the root path.
    pub fn symbolic_weight(&self, i: usize) -> String {
        let mut names = Vec::new();
        let mut cur = self.nodes[i].parent;
        while let Some(p) = cur {
            names.push(self.nodes[p].parameter_name());
            cur = self.nodes[p].parent;
        }
        if names.is_empty() {
            "1".into()
        } else {
            names.reverse();
            names.join("·")
        }
    }

    /// Indented text drawing with symbolic and numeric weights.
    pub fn render(&self) -> String {
        let mut out = String::new();
        fn go(f: &WatanabeForest, i: usize, depth: usize, out: &mut String) {
            let n = &f.nodes[i];
            let set: Vec<String> = (n.nu..=n.xi).map(|x| x.to_string()).collect();
            let _ = write!(
                out,
                "{}v{{{}}}  w = {}",
                "  ".repeat(depth),
                set.join(","),
                f.symbolic_weight(i)
            );
            if n.parent.is_some() {
                let _ = write!(out, " = {}", n.weight);
            }
            if let Some(k) = n.parameter {
                let _ = write!(out, "  [{} = {}]", n.parameter_name(), k);
            }
            out.push('\n');
            for &c in &n.children {
                go(f, c, depth + 1, out);
            }
        }
        for &r in &self.roots {
            go(self, r, 0, &mut out);
        }
        out
    }
}

pub(super) fn to_forest(datum: &SpecialDatum) -> Result<WatanabeForest> {
    datum.require_contiguous()?;
    let h = datum.hierarchy();
    let sets = datum.sets();
    let mut nodes = Vec::with_capacity(sets.len());
    fn go(
        datum: &SpecialDatum,
        h: &super::Hierarchy,
        i: usize,
        parent: Option<usize>,
        nodes: &mut Vec<ForestNode>,
    ) -> usize {
        let s = &datum.sets()[i];
        let id = nodes.len();
        nodes.push(ForestNode {
            nu: s.indices[0],
            xi: *s.indices.last().expect("nonempty"),
            weight: s.weight,
            parent,
            children: Vec::new(),
            parameter: None,
        });
        let kids: Vec<usize> = h.children[i]
            .iter()
            .map(|&c| go(datum, h, c, Some(id), nodes))
            .collect();
        if let Some(&c) = kids.first() {
            nodes[id].parameter = Some(nodes[c].weight / s.weight);
        }
        nodes[id].children = kids;
        id
    }
    let roots = h.roots.iter().map(|&r| go(datum, &h, r, None, &mut nodes)).collect();
    Ok(WatanabeForest {
        d: datum.d(),
        nodes,
        roots,
    })
}

pub(super) fn from_forest(f: &WatanabeForest) -> Result<SpecialDatum> {
    let mut expect = 1;
    for &r in &f.roots {
        if f.nodes[r].nu != expect {
            return Err(Error::InvalidDatum("trees must cover 1..=d left to right".into()));
        }
        expect = f.nodes[r].xi + 1;
    }
    if expect != f.d + 1 {
        return Err(Error::InvalidDatum("trees must cover 1..=d left to right".into()));
    }
    let mut sets = Vec::with_capacity(f.nodes.len());
    let mut weights = vec![0u64; f.nodes.len()];
    let mut stack: Vec<(usize, u64)> = f.roots.iter().map(|&r| (r, 1)).collect();
    while let Some((i, w)) = stack.pop() {
        let n = &f.nodes[i];
        weights[i] = w;
        if n.nu > n.xi {
            return Err(Error::InvalidDatum(format!("empty segment at node {i}")));
        }
        if n.children.is_empty() {
            if n.nu != n.xi {
                return Err(Error::InvalidDatum(format!(
                    "leaf {}..{} is not a singleton",
                    n.nu, n.xi
                )));
            }
        } else {
            let k = n
                .parameter
                .ok_or_else(|| Error::InvalidDatum(format!("node {i} lacks a parameter")))?;
            if k < 2 {
                return Err(Error::InvalidParameter {
                    name: n.parameter_name(),
                    value: k,
                });
            }
            let mut at = n.nu;
            for &c in &n.children {
                let ch = &f.nodes[c];
                if ch.nu != at || ch.parent != Some(i) {
                    return Err(Error::InvalidDatum(format!(
                        "children of {} do not partition it",
                        n.parameter_name()
                    )));
                }
                at = ch.xi + 1;
            }
            if at != n.xi + 1 {
                return Err(Error::InvalidDatum(format!(
                    "children of {} do not partition it",
                    n.parameter_name()
                )));
            }
            let cw = w.checked_mul(k).ok_or(Error::Overflow("forest weight"))?;
            stack.extend(n.children.iter().map(|&c| (c, cw)));
        }
        sets.push(((n.nu..=n.xi).collect(), w));
    }
    SpecialDatum::new(f.d, sets)
}
