use serde::Serialize;

use super::LatticeSimplex;
use crate::datum::{weight_lattice_of_forest, SpecialDatum, WatanabeForest, WeightLattice};
use crate::error::{Error, Result};
use crate::exact::{AffineMap, LatticeBasis, Rational, RationalMatrix, RationalVector};

/// The junior simplex `conv{e₁, …, e_d}` in `N_G`, the map
/// `Φ = Φ₂ ∘ Φ₁` with `Φ₁(x) = e₁ − x` and `Φ₂` the change to
/// coordinates in the basis `{e₁, n₂, …, n_d}`, and the image
/// `Φ(𝔰_G) ⊂ {x₁ = 0}`.
#[derive(Clone, Debug, Serialize)]
pub struct JuniorGeometry {
    pub datum: SpecialDatum,
    pub lattice: WeightLattice,
    pub junior: LatticeSimplex,
    #[serde(skip)]
    phi: AffineMap,
    #[serde(skip)]
    phi_inverse: AffineMap,
    /// `Φ(e₁), …, Φ(e_d)` as integer vectors of length `d` with first entry 0.
    pub transformed: Vec<Vec<i64>>,
}

impl JuniorGeometry {
    pub fn d(&self) -> usize {
        self.datum.d()
    }

    pub fn phi(&self) -> &AffineMap {
        &self.phi
    }

    pub fn phi_inverse(&self) -> &AffineMap {
        &self.phi_inverse
    }

    /// Vertices of `Φ(𝔰_G)` in the working lattice `ℤ^{d−1}` (coordinates
    /// `2..=d`).
    pub fn working_vertices(&self) -> Vec<Vec<i64>> {
        self.transformed.iter().map(|v| v[1..].to_vec()).collect()
    }

    /// `Φ⁻¹` of a point of the working lattice, a point of `N_G`.
    pub fn pull_back(&self, y: &[i64]) -> Result<RationalVector> {
        let mut full = vec![0i64];
        full.extend_from_slice(y);
        self.phi_inverse.apply(&RationalVector::from_ints(&full))
    }
}

/// `Φ(𝔰_G)` for a single tree.
pub fn build_phi(datum: &SpecialDatum) -> Result<JuniorGeometry> {
    let f = datum.to_forest()?;
    if !f.is_tree() {
        return Err(Error::MultiTree(f.roots().len()));
    }
    geometry(datum, &f)
}

/// `Φ(𝔰_G)` for any forest; for several trees the roots after the first
/// are attached to `e₁` without dilation.
pub fn build_forest_geometry(datum: &SpecialDatum) -> Result<JuniorGeometry> {
    let f = datum.to_forest()?;
    geometry(datum, &f)
}

fn geometry(datum: &SpecialDatum, f: &WatanabeForest) -> Result<JuniorGeometry> {
    let d = datum.d();
    let lattice = weight_lattice_of_forest(datum)?;
    let e1 = RationalVector::unit(d, 0);
    let mut minus = RationalMatrix::zeros(d, d);
    for i in 0..d {
        minus.set(i, i, Rational::from_integer((-1).into()));
    }
    let phi1 = AffineMap::new(minus, e1)?;
    let phi2 = AffineMap::new(lattice.basis.inverse_matrix().clone(), RationalVector::zeros(d))?;
    let phi = phi2.compose(&phi1)?;
    let phi_inverse = phi.inverse()?;
    let junior = LatticeSimplex::new(
        (0..d).map(|i| RationalVector::unit(d, i)).collect(),
        lattice.basis.clone(),
    )?;

    let mut transformed = Vec::with_capacity(d);
    for j in 0..d {
        let y = phi.apply(&RationalVector::unit(d, j))?;
        let y = y
            .to_i64()
            .ok_or_else(|| Error::LatticeInconsistency(format!("Φ(e{}) = {y} is not an integral point", j + 1)))?;
        if y[0] != 0 {
            return Err(Error::LatticeInconsistency(format!(
                "Φ(e{}) leaves the hyperplane x₁ = 0",
                j + 1
            )));
        }
        transformed.push(y);
    }
    if transformed[0].iter().any(|&x| x != 0) {
        return Err(Error::LatticeInconsistency("Φ(e₁) is not the origin".into()));
    }
    if !phi.is_lattice_isomorphism(&lattice.basis, &LatticeBasis::standard(d))? {
        return Err(Error::LatticeInconsistency("Φ does not carry N_G onto ℤ^d".into()));
    }
    let formulas = forest_vertices(f)?;
    if formulas != transformed {
        return Err(Error::LatticeInconsistency(
            "recursive vertex formulas disagree with the images Φ(e_j)".into(),
        ));
    }
    Ok(JuniorGeometry {
        datum: datum.clone(),
        lattice,
        junior,
        phi,
        phi_inverse,
        transformed,
    })
}

/// Vertices `0, 𝔶₂, …, 𝔶_d` from the recursion over the forest: the
/// children of a node with parameter `k` contribute `k·e_{ν_i}` for
/// `i ≥ 2`, `k·𝔶^{(J₁)}` for the leftmost subtree and
/// `k·(𝔶^{(J_i)} + e_{ν_i})` for the others. Extra trees of a forest hang
/// off a weight-1 virtual root.
pub fn vertex_formulas(datum: &SpecialDatum) -> Result<Vec<RationalVector>> {
    let f = datum.to_forest()?;
    Ok(forest_vertices(&f)?
        .iter()
        .map(|v| RationalVector::from_ints(v))
        .collect())
}

fn forest_vertices(f: &WatanabeForest) -> Result<Vec<Vec<i64>>> {
    let d = f.d();
    // y[m - 1] holds 𝔶_m; y₁ = 0.
    let mut y = vec![vec![0i64; d]; d];
    fn go(f: &WatanabeForest, i: usize, y: &mut [Vec<i64>]) -> Result<()> {
        let n = f.node(i);
        let Some(k) = n.parameter else { return Ok(()) };
        let k = i64::try_from(k).map_err(|_| Error::Overflow("free parameter"))?;
        for (pos, &c) in n.children.iter().enumerate() {
            go(f, c, y)?;
            let ch = f.node(c);
            if pos > 0 {
                for m in ch.nu..=ch.xi {
                    y[m - 1][ch.nu - 1] += 1;
                }
            }
            for m in ch.nu..=ch.xi {
                for x in y[m - 1].iter_mut() {
                    *x = x.checked_mul(k).ok_or(Error::Overflow("vertex coordinates"))?;
                }
            }
        }
        Ok(())
    }
    for (pos, &r) in f.roots().iter().enumerate() {
        go(f, r, &mut y)?;
        if pos > 0 {
            let n = f.node(r);
            for m in n.nu..=n.xi {
                y[m - 1][n.nu - 1] += 1;
            }
        }
    }
    Ok(y)
}
