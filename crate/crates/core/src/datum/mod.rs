//! Special data `(𝔇, w)`: laminar families of index sets with weights,
//! their validation, canonical relabelling and forest form.

mod corpus;
mod forest;
mod lattice;
mod parse;

pub use corpus::canonical_forests;
pub use forest::{ForestNode, TreeShape, WatanabeForest};
pub use lattice::{group_generators, weight_lattice, weight_lattice_of_forest, WeightLattice};
pub use parse::{parse_datum, write_forest_text, write_sets_text};

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};

/// One member `J` of `𝔇` with its weight `w(J)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct WeightedSet {
    /// Sorted 1-based indices.
    pub indices: Vec<usize>,
    pub weight: u64,
}

impl WeightedSet {
    fn contains_set(&self, other: &WeightedSet) -> bool {
        other.indices.iter().all(|i| self.indices.binary_search(i).is_ok())
    }

    fn is_disjoint(&self, other: &WeightedSet) -> bool {
        !other.indices.iter().any(|i| self.indices.binary_search(i).is_ok())
    }

    fn is_segment(&self) -> bool {
        self.indices.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

/// A special datum over `{1, …, d}`. Construction only checks that the
/// input is well formed; [`SpecialDatum::validate`] checks the five
/// defining clauses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SpecialDatum {
    d: usize,
    sets: Vec<WeightedSet>,
}

/// The five defining clauses of a special datum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Clause {
    /// Every singleton is present.
    Singletons,
    /// Any two sets are nested or disjoint.
    Laminar,
    /// Maximal sets have weight 1.
    MaximalWeight,
    /// Strict inclusion forces a strictly larger weight divisible by the outer one.
    Divisibility,
    /// Sets covered by the same set share a weight.
    SiblingWeight,
}

impl Clause {
    pub fn roman(self) -> &'static str {
        match self {
            Clause::Singletons => "(i)",
            Clause::Laminar => "(ii)",
            Clause::MaximalWeight => "(iii)",
            Clause::Divisibility => "(iv)",
            Clause::SiblingWeight => "(v)",
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let what = match self {
            Clause::Singletons => "every singleton must be present",
            Clause::Laminar => "sets must be nested or disjoint",
            Clause::MaximalWeight => "maximal sets must have weight 1",
            Clause::Divisibility => "a strict subset needs a larger weight divisible by the superset's",
            Clause::SiblingWeight => "sets covered by the same set need equal weights",
        };
        write!(f, "clause {} ({what})", self.roman())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub clause: Clause,
    pub sets: Vec<Vec<usize>>,
    pub message: String,
}

/// Outcome of [`SpecialDatum::validate`]; violations are sorted by clause.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// A canonical representative together with the relabelling used:
/// `theta[i - 1]` is the new label of old index `i`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CanonicalForm {
    pub datum: SpecialDatum,
    pub theta: Vec<usize>,
}

/// Canonical subtree encoding: the weight, then the children's encodings.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
struct Encoding {
    weight: u64,
    children: Vec<Encoding>,
}

/// Child structure of a laminar family (parents are the smallest
/// strict supersets). Children and roots are ordered by smallest index.
pub(crate) struct Hierarchy {
    pub children: Vec<Vec<usize>>,
    pub roots: Vec<usize>,
}

fn fmt_set(s: &[usize]) -> String {
    let inner: Vec<String> = s.iter().map(|i| i.to_string()).collect();
    format!("{{{}}}", inner.join(","))
}

impl SpecialDatum {
    /// Builds a datum from `(J, w(J))` pairs. Rejects out-of-range or
    /// repeated indices, empty sets, duplicate sets and zero weights.
    pub fn new(d: usize, sets: Vec<(Vec<usize>, u64)>) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDatum("d must be positive".into()));
        }
        let mut out = Vec::with_capacity(sets.len());
        for (mut idx, weight) in sets {
            if idx.is_empty() {
                return Err(Error::InvalidDatum("empty index set".into()));
            }
            idx.sort_unstable();
            if idx.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidDatum(format!("repeated index in {}", fmt_set(&idx))));
            }
            if let Some(&i) = idx.iter().find(|&&i| i == 0 || i > d) {
                return Err(Error::InvalidDatum(format!("index {i} outside 1..={d}")));
            }
            if weight == 0 {
                return Err(Error::InvalidDatum(format!("zero weight on {}", fmt_set(&idx))));
            }
            out.push(WeightedSet { indices: idx, weight });
        }
        out.sort();
        if let Some(w) = out.windows(2).find(|w| w[0].indices == w[1].indices) {
            return Err(Error::InvalidDatum(format!(
                "set {} listed twice",
                fmt_set(&w[0].indices)
            )));
        }
        Ok(Self { d, sets: out })
    }

    /// The hypersurface datum `(d; k)`: all singletons of weight `k` under
    /// the full set of weight 1.
    pub fn star(d: usize, k: u64) -> Result<Self> {
        let mut sets: Vec<(Vec<usize>, u64)> = (1..=d).map(|i| (vec![i], k)).collect();
        sets.push(((1..=d).collect(), 1));
        Self::new(d, sets)
    }

    /// `d` singletons of weight 1: the trivial group.
    pub fn trivial(d: usize) -> Self {
        Self::new(d, (1..=d).map(|i| (vec![i], 1)).collect()).expect("well formed")
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sets(&self) -> &[WeightedSet] {
        &self.sets
    }

    pub fn weight(&self, indices: &[usize]) -> Option<u64> {
        self.sets.iter().find(|s| s.indices == indices).map(|s| s.weight)
    }

    /// Checks the five defining clauses.
    pub fn validate(&self) -> ValidationReport {
        let mut v = Vec::new();
        let present = |i: usize| self.sets.iter().any(|s| s.indices == [i]);
        let missing: Vec<Vec<usize>> = (1..=self.d).filter(|&i| !present(i)).map(|i| vec![i]).collect();
        if !missing.is_empty() {
            v.push(Violation {
                clause: Clause::Singletons,
                message: format!(
                    "missing {}",
                    missing.iter().map(|s| fmt_set(s)).collect::<Vec<_>>().join(", ")
                ),
                sets: missing,
            });
        }
        let n = self.sets.len();
        let mut laminar = true;
        for a in 0..n {
            for b in a + 1..n {
                let (x, y) = (&self.sets[a], &self.sets[b]);
                if !(x.contains_set(y) || y.contains_set(x) || x.is_disjoint(y)) {
                    laminar = false;
                    v.push(Violation {
                        clause: Clause::Laminar,
                        sets: vec![x.indices.clone(), y.indices.clone()],
                        message: format!("{} and {} overlap", fmt_set(&x.indices), fmt_set(&y.indices)),
                    });
                }
            }
        }
        for (a, s) in self.sets.iter().enumerate() {
            let maximal = !self.sets.iter().enumerate().any(|(b, t)| a != b && t.contains_set(s));
            if maximal && s.weight != 1 {
                v.push(Violation {
                    clause: Clause::MaximalWeight,
                    sets: vec![s.indices.clone()],
                    message: format!("maximal set {} has weight {}", fmt_set(&s.indices), s.weight),
                });
            }
        }
        for inner in &self.sets {
            for outer in &self.sets {
                if inner.indices.len() < outer.indices.len()
                    && outer.contains_set(inner)
                    && !(inner.weight > outer.weight && inner.weight % outer.weight == 0)
                {
                    v.push(Violation {
                        clause: Clause::Divisibility,
                        sets: vec![inner.indices.clone(), outer.indices.clone()],
                        message: format!(
                            "w({}) = {} versus w({}) = {}",
                            fmt_set(&inner.indices),
                            inner.weight,
                            fmt_set(&outer.indices),
                            outer.weight
                        ),
                    });
                }
            }
        }
        if laminar {
            let h = self.hierarchy();
            for (p, kids) in h.children.iter().enumerate() {
                let w0 = kids.first().map(|&c| self.sets[c].weight);
                let odd: Vec<usize> = kids
                    .iter()
                    .copied()
                    .filter(|&c| Some(self.sets[c].weight) != w0)
                    .collect();
                if !odd.is_empty() {
                    let mut sets: Vec<Vec<usize>> = kids.iter().map(|&c| self.sets[c].indices.clone()).collect();
                    sets.push(self.sets[p].indices.clone());
                    v.push(Violation {
                        clause: Clause::SiblingWeight,
                        message: format!("children of {} carry different weights", fmt_set(&self.sets[p].indices)),
                        sets,
                    });
                }
            }
        }
        v.sort_by_key(|x| x.clause);
        ValidationReport { violations: v }
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_valid()
    }

    fn require_valid(&self) -> Result<()> {
        match self.validate().first() {
            None => Ok(()),
            Some(v) => Err(Error::InvalidDatum(format!("{}: {}", v.clause, v.message))),
        }
    }

    /// Parent/child structure; meaningful for laminar families.
    pub(crate) fn hierarchy(&self) -> Hierarchy {
        let n = self.sets.len();
        let mut parent = vec![None; n];
        for (a, s) in self.sets.iter().enumerate() {
            parent[a] = self
                .sets
                .iter()
                .enumerate()
                .filter(|&(b, t)| a != b && t.indices.len() > s.indices.len() && t.contains_set(s))
                .min_by_key(|&(_, t)| t.indices.len())
                .map(|(b, _)| b);
        }
        let mut children = vec![Vec::new(); n];
        let mut roots = Vec::new();
        for a in 0..n {
            match parent[a] {
                Some(p) => children[p].push(a),
                None => roots.push(a),
            }
        }
        let first = |i: &usize| self.sets[*i].indices[0];
        for c in children.iter_mut() {
            c.sort_by_key(first);
        }
        roots.sort_by_key(first);
        Hierarchy { children, roots }
    }

    /// Whether every set is a segment `{ν, …, ξ}` (the precondition of the
    /// forest, lattice and simplex constructions).
    pub fn is_contiguous(&self) -> bool {
        self.sets.iter().all(|s| s.is_segment())
    }

    pub(crate) fn require_contiguous(&self) -> Result<()> {
        self.require_valid()?;
        match self.sets.iter().find(|s| !s.is_segment()) {
            None => Ok(()),
            Some(s) => Err(Error::CanonicalizationRequired(format!(
                "{} is not a segment",
                fmt_set(&s.indices)
            ))),
        }
    }

    /// Relabels the indices so that every set is a segment, ordering the
    /// children of each node (and the trees) by descending canonical
    /// encoding. Isomorphic data give identical results.
    pub fn canonicalize(&self) -> Result<CanonicalForm> {
        self.require_valid()?;
        let h = self.hierarchy();
        fn encode(d: &SpecialDatum, h: &Hierarchy, i: usize, memo: &mut BTreeMap<usize, Encoding>) -> Encoding {
            if let Some(e) = memo.get(&i) {
                return e.clone();
            }
            let mut kids: Vec<Encoding> = h.children[i].iter().map(|&c| encode(d, h, c, memo)).collect();
            kids.sort_by(|a, b| b.cmp(a));
            let e = Encoding {
                weight: d.sets[i].weight,
                children: kids,
            };
            memo.insert(i, e.clone());
            e
        }
        let mut memo = BTreeMap::new();
        let order = |list: &[usize], memo: &mut BTreeMap<usize, Encoding>| -> Vec<usize> {
            let mut keyed: Vec<(Reverse<Encoding>, usize, usize)> = list
                .iter()
                .map(|&c| (Reverse(encode(self, &h, c, memo)), self.sets[c].indices[0], c))
                .collect();
            keyed.sort();
            keyed.into_iter().map(|k| k.2).collect()
        };
        let mut theta = vec![0usize; self.d];
        let mut next = 1;
        let mut stack: Vec<usize> = order(&h.roots, &mut memo).into_iter().rev().collect();
        while let Some(i) = stack.pop() {
            if h.children[i].is_empty() {
                theta[self.sets[i].indices[0] - 1] = next;
                next += 1;
            } else {
                stack.extend(order(&h.children[i], &mut memo).into_iter().rev());
            }
        }
        let sets = self
            .sets
            .iter()
            .map(|s| (s.indices.iter().map(|&i| theta[i - 1]).collect(), s.weight))
            .collect();
        Ok(CanonicalForm {
            datum: SpecialDatum::new(self.d, sets)?,
            theta,
        })
    }

    /// Applies a relabelling `i ↦ theta[i - 1]` to every set.
    pub fn relabel(&self, theta: &[usize]) -> Result<Self> {
        if theta.len() != self.d {
            return Err(Error::Dimension {
                expected: self.d,
                got: theta.len(),
            });
        }
        let sets = self
            .sets
            .iter()
            .map(|s| (s.indices.iter().map(|&i| theta[i - 1]).collect(), s.weight))
            .collect();
        Self::new(self.d, sets)
    }

    /// Forest form of a valid datum whose sets are segments.
    pub fn to_forest(&self) -> Result<WatanabeForest> {
        forest::to_forest(self)
    }

    /// Number of trees in the forest form.
    pub fn components(&self) -> usize {
        self.hierarchy().roots.len()
    }
}

impl fmt::Display for SpecialDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|s| format!("{}:{}", fmt_set(&s.indices), s.weight))
            .collect();
        write!(f, "d={} {}", self.d, parts.join(" "))
    }
}

/// Inverse of [`SpecialDatum::to_forest`]: weights are rebuilt from the free
/// parameters along each root path.
pub fn from_forest(forest: &WatanabeForest) -> Result<SpecialDatum> {
    forest::from_forest(forest)
}

/// `d` minus the number of trivial (single-vertex) trees.
pub fn splitting_codimension(forest: &WatanabeForest) -> usize {
    forest.d()
        - forest
            .roots()
            .iter()
            .filter(|&&r| forest.node(r).children.is_empty())
            .count()
}
