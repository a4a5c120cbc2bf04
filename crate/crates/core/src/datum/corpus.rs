use std::collections::BTreeSet;

use super::{from_forest, SpecialDatum, TreeShape, WatanabeForest};
use crate::error::Result;

/// Ordered compositions of `n` into exactly `parts` positive summands.
fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 1 {
        return vec![vec![n]];
    }
    (1..=n.saturating_sub(parts - 1))
        .flat_map(|first| {
            compositions(n - first, parts - 1).into_iter().map(move |mut rest| {
                rest.insert(0, first);
                rest
            })
        })
        .collect()
}

fn product(choices: &[Vec<TreeShape>]) -> Vec<Vec<TreeShape>> {
    choices.iter().fold(vec![Vec::new()], |acc, opts| {
        acc.iter()
            .flat_map(|prefix| {
                opts.iter().map(move |o| {
                    let mut p = prefix.clone();
                    p.push(o.clone());
                    p
                })
            })
            .collect()
    })
}

/// Plane trees with `n` leaves, internal nodes with at least two children
/// and parameters from `params`.
fn trees(n: usize, params: &[u64], memo: &mut Vec<Option<Vec<TreeShape>>>) -> Vec<TreeShape> {
    if let Some(t) = &memo[n] {
        return t.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push(TreeShape::Leaf);
    }
    for parts in 2..=n {
        for comp in compositions(n, parts) {
            let choices: Vec<Vec<TreeShape>> = comp.iter().map(|&c| trees(c, params, memo)).collect();
            for kids in product(&choices) {
                out.extend(params.iter().map(|&k| TreeShape::Node(k, kids.clone())));
            }
        }
    }
    memo[n] = Some(out.clone());
    out
}

/// Every canonical datum whose forest has `2 ≤ d ≤ max_d` leaves and free
/// parameters drawn from `params`, one per isomorphism class, ordered by
/// `d` and then by the canonical set list.
pub fn canonical_forests(max_d: usize, params: &[u64]) -> Result<Vec<SpecialDatum>> {
    let mut memo = vec![None; max_d + 1];
    let mut seen = BTreeSet::new();
    for d in 2..=max_d {
        for parts in 1..=d {
            for comp in compositions(d, parts) {
                let choices: Vec<Vec<TreeShape>> = comp.iter().map(|&c| trees(c, params, &mut memo)).collect();
                for shapes in product(&choices) {
                    let datum = from_forest(&WatanabeForest::from_shapes(&shapes)?)?;
                    let canon = datum.canonicalize()?.datum;
                    seen.insert((d, canon.sets().to_vec()));
                }
            }
        }
    }
    seen.into_iter()
        .map(|(d, sets)| SpecialDatum::new(d, sets.into_iter().map(|s| (s.indices, s.weight)).collect()))
        .collect()
}
