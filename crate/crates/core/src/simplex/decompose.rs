use serde::Serialize;

use super::join_hypothesis;
use crate::datum::{SpecialDatum, WatanabeForest};
use crate::error::{Error, Result};

/// Recursive join/dilation structure of `Φ(𝔰_G)`. The node for the index
/// segment `{ν, …, ξ}` describes a simplex in coordinates `ν+1..=ξ` whose
/// vertices correspond to `e_ν, …, e_ξ`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WatanabeDecomposition {
    pub nu: usize,
    pub xi: usize,
    pub kind: DecompositionKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum DecompositionKind {
    Point,
    /// Parts in left-to-right order; every part after the first is
    /// translated by `e_ν` of its own segment.
    Join(Vec<JoinPart>),
    Dilation {
        factor: u64,
        child: Box<WatanabeDecomposition>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct JoinPart {
    /// `Some(ν_i)` when the part is translated by `e_{ν_i}`.
    pub translation: Option<usize>,
    pub part: WatanabeDecomposition,
}

impl WatanabeDecomposition {
    pub fn dim(&self) -> usize {
        match &self.kind {
            DecompositionKind::Point => 0,
            DecompositionKind::Join(parts) => parts.iter().map(|p| p.part.dim()).sum::<usize>() + parts.len() - 1,
            DecompositionKind::Dilation { child, .. } => child.dim(),
        }
    }

    /// Vertices (length-`d` integer vectors, index 0 is coordinate 1)
    /// obtained by evaluating joins as unions and dilations as scaling.
    pub fn evaluate(&self, d: usize) -> Result<Vec<Vec<i64>>> {
        match &self.kind {
            DecompositionKind::Point => Ok(vec![vec![0; d]]),
            DecompositionKind::Join(parts) => {
                let mut out = Vec::new();
                for p in parts {
                    let mut vs = p.part.evaluate(d)?;
                    if let Some(t) = p.translation {
                        for v in vs.iter_mut() {
                            v[t - 1] += 1;
                        }
                    }
                    out.extend(vs);
                }
                Ok(out)
            }
            DecompositionKind::Dilation { factor, child } => {
                let f = i64::try_from(*factor).map_err(|_| Error::Overflow("dilation factor"))?;
                let mut vs = child.evaluate(d)?;
                for x in vs.iter_mut().flatten() {
                    *x = x.checked_mul(f).ok_or(Error::Overflow("vertex coordinates"))?;
                }
                Ok(vs)
            }
        }
    }

    /// Checks `dim = ξ − ν` at every node.
    pub fn check_dimensions(&self) -> Result<()> {
        if self.dim() != self.xi - self.nu {
            return Err(Error::LatticeInconsistency(format!(
                "node {}..{} has dimension {} instead of {}",
                self.nu,
                self.xi,
                self.dim(),
                self.xi - self.nu
            )));
        }
        match &self.kind {
            DecompositionKind::Point => Ok(()),
            DecompositionKind::Join(parts) => parts.iter().try_for_each(|p| p.part.check_dimensions()),
            DecompositionKind::Dilation { child, .. } => child.check_dimensions(),
        }
    }

    /// Checks the join hypothesis at every join node, each part joined
    /// against the union of the parts before it.
    pub fn check_join_hypotheses(&self, d: usize) -> Result<()> {
        match &self.kind {
            DecompositionKind::Point => Ok(()),
            DecompositionKind::Dilation { child, .. } => child.check_join_hypotheses(d),
            DecompositionKind::Join(parts) => {
                let mut acc: Vec<Vec<i64>> = Vec::new();
                for p in parts {
                    p.part.check_join_hypotheses(d)?;
                    let mut vs = p.part.evaluate(d)?;
                    if let Some(t) = p.translation {
                        for v in vs.iter_mut() {
                            v[t - 1] += 1;
                        }
                    }
                    if !acc.is_empty() {
                        join_hypothesis(&acc, &vs)
                            .map_err(|e| Error::JoinHypothesis(format!("at {}..{}: {e}", self.nu, self.xi)))?;
                    }
                    acc.extend(vs);
                }
                Ok(())
            }
        }
    }

    pub fn count_joins(&self) -> usize {
        match &self.kind {
            DecompositionKind::Point => 0,
            DecompositionKind::Join(parts) => {
                parts.len() - 1 + parts.iter().map(|p| p.part.count_joins()).sum::<usize>()
            }
            DecompositionKind::Dilation { child, .. } => child.count_joins(),
        }
    }

    /// One line per node, indented by depth.
    pub fn render(&self) -> String {
        let mut out = String::new();
        self.render_into(0, None, &mut out);
        out
    }

    fn render_into(&self, depth: usize, translation: Option<usize>, out: &mut String) {
        let pad = "  ".repeat(depth);
        let shift = translation.map_or(String::new(), |t| format!(" + e{t}"));
        match &self.kind {
            DecompositionKind::Point => out.push_str(&format!("{pad}point [{}]{shift}\n", self.nu)),
            DecompositionKind::Join(parts) => {
                out.push_str(&format!("{pad}join [{}..{}]{shift}\n", self.nu, self.xi));
                for p in parts {
                    p.part.render_into(depth + 1, p.translation, out);
                }
            }
            DecompositionKind::Dilation { factor, child } => {
                out.push_str(&format!("{pad}dilate x{factor} [{}..{}]{shift}\n", self.nu, self.xi));
                child.render_into(depth + 1, None, out);
            }
        }
    }
}

fn node(f: &WatanabeForest, i: usize) -> WatanabeDecomposition {
    let n = f.node(i);
    let Some(k) = n.parameter else {
        return WatanabeDecomposition {
            nu: n.nu,
            xi: n.xi,
            kind: DecompositionKind::Point,
        };
    };
    let parts = n
        .children
        .iter()
        .enumerate()
        .map(|(pos, &c)| JoinPart {
            translation: (pos > 0).then(|| f.node(c).nu),
            part: node(f, c),
        })
        .collect();
    WatanabeDecomposition {
        nu: n.nu,
        xi: n.xi,
        kind: DecompositionKind::Dilation {
            factor: k,
            child: Box::new(WatanabeDecomposition {
                nu: n.nu,
                xi: n.xi,
                kind: DecompositionKind::Join(parts),
            }),
        },
    }
}

/// A tree becomes a dilation by its root parameter over the join of its
/// subtrees; a forest becomes an undilated join of its trees.
pub fn decompose(datum: &SpecialDatum) -> Result<WatanabeDecomposition> {
    let f = datum.to_forest()?;
    let roots = f.roots();
    if roots.len() == 1 {
        return Ok(node(&f, roots[0]));
    }
    let parts = roots
        .iter()
        .enumerate()
        .map(|(pos, &r)| JoinPart {
            translation: (pos > 0).then(|| f.node(r).nu),
            part: node(&f, r),
        })
        .collect();
    Ok(WatanabeDecomposition {
        nu: 1,
        xi: f.d(),
        kind: DecompositionKind::Join(parts),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::{from_forest, TreeShape};
    use crate::simplex::build_forest_geometry;

    #[test]
    fn star_is_dilated_join_of_points() {
        let dec = decompose(&SpecialDatum::star(3, 4).unwrap()).unwrap();
        let DecompositionKind::Dilation { factor, child } = &dec.kind else {
            panic!()
        };
        assert_eq!(*factor, 4);
        let DecompositionKind::Join(parts) = &child.kind else {
            panic!()
        };
        assert_eq!(parts.len(), 3);
        assert!(parts.iter().all(|p| p.part.kind == DecompositionKind::Point));
        assert_eq!(
            dec.evaluate(3).unwrap(),
            vec![vec![0, 0, 0], vec![0, 4, 0], vec![0, 0, 4]]
        );
        dec.check_dimensions().unwrap();
        dec.check_join_hypotheses(3).unwrap();
    }

    #[test]
    fn forest_is_undilated_join() {
        let f = WatanabeForest::from_shapes(&[TreeShape::star(2, 3), TreeShape::star(2, 5)]).unwrap();
        let d = from_forest(&f).unwrap();
        let dec = decompose(&d).unwrap();
        let DecompositionKind::Join(parts) = &dec.kind else {
            panic!()
        };
        assert_eq!(parts[1].translation, Some(3));
        assert!(matches!(
            parts[0].part.kind,
            DecompositionKind::Dilation { factor: 3, .. }
        ));
        assert!(matches!(
            parts[1].part.kind,
            DecompositionKind::Dilation { factor: 5, .. }
        ));
        assert_eq!(dec.evaluate(4).unwrap(), build_forest_geometry(&d).unwrap().transformed);
        dec.check_dimensions().unwrap();
        dec.check_join_hypotheses(4).unwrap();
    }

    #[test]
    fn single_point_is_a_leaf() {
        let f = WatanabeForest::from_shapes(&[TreeShape::Leaf, TreeShape::Leaf]).unwrap();
        let dec = decompose(&from_forest(&f).unwrap()).unwrap();
        let DecompositionKind::Join(parts) = &dec.kind else {
            panic!()
        };
        assert_eq!(parts[0].part.kind, DecompositionKind::Point);
        assert_eq!(dec.dim(), 1);
    }

    #[test]
    fn render_lists_nodes() {
        let text = decompose(&SpecialDatum::star(2, 3).unwrap()).unwrap().render();
        assert_eq!(
            text,
            "dilate x3 [1..2]\n  join [1..2]\n    point [1]\n    point [2] + e2\n"
        );
    }
}
