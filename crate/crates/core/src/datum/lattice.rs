use num_traits::{One, Signed, ToPrimitive};
use serde::Serialize;

use super::{SpecialDatum, WatanabeForest};
use crate::error::{Error, Result};
use crate::exact::{LatticeBasis, Rational, RationalVector};

/// The lattice `N_G = ℤ^d + Σ ℤ·g` of a diagonal abelian group together
/// with the group order `|G| = [N_G : ℤ^d]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightLattice {
    pub basis: LatticeBasis,
    pub order: u64,
}

fn vector(d: usize, plus: usize, minus: usize, weight: u64) -> RationalVector {
    let mut v = RationalVector::zeros(d);
    let c = Rational::new(1.into(), weight.into());
    v[plus - 1] = c.clone();
    v[minus - 1] = -c;
    v
}

/// One generator `(1/w(J′))(e_{ν_J} − e_{ν_{J′}})` for every non-leftmost
/// child `J′` of every `J`, ordered by `ν_{J′}`.
pub fn group_generators(datum: &SpecialDatum) -> Result<Vec<RationalVector>> {
    let f = datum.to_forest()?;
    let mut out: Vec<(usize, RationalVector)> = Vec::new();
    for n in f.nodes() {
        for &c in n.children.iter().skip(1) {
            let ch = f.node(c);
            out.push((ch.nu, vector(f.d(), n.nu, ch.nu, ch.weight)));
        }
    }
    out.sort_by_key(|x| x.0);
    Ok(out.into_iter().map(|x| x.1).collect())
}

/// Basis `{e₁, n₂, …, n_d}` of `N_G` for a single tree.
pub fn weight_lattice(datum: &SpecialDatum) -> Result<WeightLattice> {
    let f = datum.to_forest()?;
    if !f.is_tree() {
        return Err(Error::MultiTree(f.roots().len()));
    }
    forest_lattice(&f)
}

/// Like [`weight_lattice`] but accepting forests: the root of the `i`-th
/// tree (`i ≥ 2`) contributes `e₁ − e_{ν}`, which keeps `e₁` first and
/// gives the direct sum of the per-tree lattices.
pub fn weight_lattice_of_forest(datum: &SpecialDatum) -> Result<WeightLattice> {
    forest_lattice(&datum.to_forest()?)
}

/// The basis vector `n_m` of every `m` in `2..=d`.
pub(crate) fn basis_vectors(f: &WatanabeForest) -> Vec<RationalVector> {
    let d = f.d();
    let mut top: Vec<Option<usize>> = vec![None; d + 1];
    // Preorder visits the topmost node with a given ν first.
    for (i, n) in f.nodes().iter().enumerate() {
        top[n.nu].get_or_insert(i);
    }
    let mut out = vec![RationalVector::unit(d, 0)];
    for m in 2..=d {
        let n = f.node(top[m].expect("every index starts some node"));
        out.push(match n.parent {
            None => vector(d, 1, m, 1),
            Some(p) => vector(d, f.node(p).nu, m, n.weight),
        });
    }
    out
}

fn forest_lattice(f: &WatanabeForest) -> Result<WeightLattice> {
    let basis = LatticeBasis::new(basis_vectors(f), "N_G")?;
    let inv = Rational::one() / basis.determinant().abs();
    if !inv.is_integer() {
        return Err(Error::LatticeInconsistency(format!(
            "basis determinant {} has no integral reciprocal",
            basis.determinant()
        )));
    }
    let order = inv.to_integer().to_u64().ok_or(Error::Overflow("group order"))?;
    Ok(WeightLattice { basis, order })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{from_forest, TreeShape};
    use crate::exact::RationalMatrix;

    #[test]
    fn star_generators() {
        let k = 4;
        let g = group_generators(&SpecialDatum::star(3, k).unwrap()).unwrap();
        assert_eq!(
            g,
            vec![
                RationalVector::from_fraction(k as i64, &[1, -1, 0]),
                RationalVector::from_fraction(k as i64, &[1, 0, -1]),
            ]
        );
        assert!(group_generators(&SpecialDatum::trivial(3)).unwrap().is_empty());
    }

    #[test]
    fn nested_generators() {
        let (a, b) = (2, 3);
        let shape = TreeShape::Node(a, vec![TreeShape::Node(b, vec![TreeShape::Leaf; 3]), TreeShape::Leaf]);
        let d = from_forest(&WatanabeForest::from_shapes(&[shape]).unwrap()).unwrap();
        let g = group_generators(&d).unwrap();
        let ab = (a * b) as i64;
        assert_eq!(
            g,
            vec![
                RationalVector::from_fraction(ab, &[1, -1, 0, 0]),
                RationalVector::from_fraction(ab, &[1, 0, -1, 0]),
                RationalVector::from_fraction(a as i64, &[1, 0, 0, -1]),
            ]
        );
    }

    #[test]
    fn star_lattice_order() {
        let l = weight_lattice(&SpecialDatum::star(3, 2).unwrap()).unwrap();
        assert_eq!(l.order, 4);
        assert_eq!(l.basis.vectors()[1], RationalVector::from_fraction(2, &[1, -1, 0]));
        for (d, k) in [(2, 5), (4, 3), (5, 2)] {
            let l = weight_lattice(&SpecialDatum::star(d, k).unwrap()).unwrap();
            assert_eq!(l.order, k.pow(d as u32 - 1));
        }
    }

    #[test]
    fn forest_lattice_is_direct_sum() {
        let f = WatanabeForest::from_shapes(&[TreeShape::star(2, 3), TreeShape::star(2, 5)]).unwrap();
        let d = from_forest(&f).unwrap();
        assert_eq!(weight_lattice(&d), Err(Error::MultiTree(2)));
        let l = weight_lattice_of_forest(&d).unwrap();
        assert_eq!(l.order, 15);
        // Every generator lies in the lattice and ℤ^d does too.
        for g in group_generators(&d).unwrap() {
            assert!(l.basis.contains(&g).unwrap());
        }
        for i in 0..4 {
            assert!(l.basis.contains(&RationalVector::unit(4, i)).unwrap());
        }
    }

    #[test]
    fn basis_spans_exactly_the_generated_lattice() {
        // Oracle: the index of ℤ^d in ℤ^d + Σℤg equals the order of the
        // group generated by the g mod ℤ^d, found by closure.
        let shape = TreeShape::Node(
            2,
            vec![
                TreeShape::Node(3, vec![TreeShape::Leaf; 2]),
                TreeShape::Leaf,
                TreeShape::Leaf,
            ],
        );
        let d = from_forest(&WatanabeForest::from_shapes(&[shape]).unwrap()).unwrap();
        let gens = group_generators(&d).unwrap();
        let mut seen = std::collections::BTreeSet::new();
        let mut frontier = vec![RationalVector::zeros(4)];
        seen.insert(RationalVector::zeros(4));
        while let Some(x) = frontier.pop() {
            for g in &gens {
                let y = (&x + g).reduce_mod_one();
                if seen.insert(y.clone()) {
                    frontier.push(y);
                }
            }
        }
        let l = weight_lattice(&d).unwrap();
        assert_eq!(l.order as usize, seen.len());
        for x in &seen {
            assert!(l.basis.contains(x).unwrap());
        }
        let m = RationalMatrix::from_columns(l.basis.vectors()).unwrap();
        assert_eq!(
            m.det().unwrap().abs(),
            Rational::new(1.into(), (seen.len() as i64).into())
        );
    }
}
