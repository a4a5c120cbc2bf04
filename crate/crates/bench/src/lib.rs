//! Fixtures shared by the benchmarks.

use crepant::datum::{from_forest, SpecialDatum, TreeShape, WatanabeForest};

/// The hypersurface datum `(d; k)`.
pub fn star(d: usize, k: u64) -> SpecialDatum {
    SpecialDatum::star(d, k).expect("star datum")
}

/// Two disjoint segments dilated by `k1` and `k2`.
pub fn two_segments(k1: u64, k2: u64) -> SpecialDatum {
    let f = WatanabeForest::from_shapes(&[TreeShape::star(2, k1), TreeShape::star(2, k2)]).expect("forest");
    from_forest(&f).expect("datum")
}

/// A three-level tree on seven leaves with every parameter `k`.
pub fn deep_tree(k: u64) -> SpecialDatum {
    let pair = || TreeShape::Node(k, vec![TreeShape::Leaf; 2]);
    let shape = TreeShape::Node(
        k,
        vec![pair(), TreeShape::Leaf, TreeShape::Node(k, vec![pair(), pair()])],
    );
    from_forest(&WatanabeForest::from_shapes(&[shape]).expect("forest")).expect("datum")
}
