//! Junior simplices, the transformation `Φ` to standard coordinates, and
//! the join/dilation structure of Watanabe simplices.

mod decompose;
mod geometry;
mod watanabe;

pub use decompose::{decompose, DecompositionKind, JoinPart, WatanabeDecomposition};
pub use geometry::{build_forest_geometry, build_phi, vertex_formulas, JuniorGeometry};
pub(crate) use watanabe::{join_hypothesis, top_condition};
pub use watanabe::{verify_watanabe, MAX_WATANABE_DIM};

use num_bigint::BigInt;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::int::{big_rows, hermite_rows};
use crate::exact::{lattice_points_in_simplex, LatticeBasis, RationalVector};

/// A simplex whose vertices are points of a reference lattice.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeSimplex {
    vertices: Vec<RationalVector>,
    lattice: LatticeBasis,
    #[serde(skip)]
    coords: Vec<Vec<i64>>,
}

impl LatticeSimplex {
    /// Fails if a vertex is off the lattice or the vertices are affinely
    /// dependent.
    pub fn new(vertices: Vec<RationalVector>, lattice: LatticeBasis) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::Precondition("a simplex needs a vertex".into()));
        }
        let mut coords = Vec::with_capacity(vertices.len());
        for v in &vertices {
            if v.dim() != lattice.dim() {
                return Err(Error::Dimension {
                    expected: lattice.dim(),
                    got: v.dim(),
                });
            }
            let c = lattice.coordinates(v)?;
            if !c.is_integral() {
                return Err(Error::LatticeInconsistency(format!(
                    "vertex {v} is not a lattice point"
                )));
            }
            coords.push(c.to_i64().ok_or(Error::Overflow("lattice coordinates"))?);
        }
        if affine_rank(&coords) != coords.len() - 1 {
            return Err(Error::Precondition("simplex vertices are affinely dependent".into()));
        }
        Ok(Self {
            vertices,
            lattice,
            coords,
        })
    }

    /// A simplex in `ℤ^n` with integer vertices.
    pub fn from_int_vertices(vertices: &[Vec<i64>]) -> Result<Self> {
        let n = vertices.first().map_or(0, |v| v.len());
        Self::new(
            vertices.iter().map(|v| RationalVector::from_ints(v)).collect(),
            LatticeBasis::standard(n),
        )
    }

    pub fn vertices(&self) -> &[RationalVector] {
        &self.vertices
    }

    pub fn lattice(&self) -> &LatticeBasis {
        &self.lattice
    }

    pub fn dim(&self) -> usize {
        self.vertices.len() - 1
    }

    /// Vertex coordinates in the reference lattice basis.
    pub fn integer_coordinates(&self) -> &[Vec<i64>] {
        &self.coords
    }

    pub fn lattice_points(&self) -> Result<Vec<RationalVector>> {
        lattice_points_in_simplex(&self.vertices, &self.lattice)
    }

    /// Whether the lattice points of the simplex generate
    /// `aff(simplex) ∩ lattice` as an affine lattice.
    pub fn has_integral_affine_hull(&self) -> Result<bool> {
        top_condition(&self.coords)
    }
}

/// Dimension of the affine hull of integer points.
pub(crate) fn affine_rank(points: &[Vec<i64>]) -> usize {
    let Some(p0) = points.first() else { return 0 };
    let diffs: Vec<Vec<i64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    hermite_rows(&big_rows(&diffs), p0.len()).len()
}

pub(crate) fn diffs_big(points: &[Vec<i64>], origin: &[i64]) -> Vec<Vec<BigInt>> {
    points
        .iter()
        .map(|p| {
            p.iter()
                .zip(origin)
                .map(|(a, b)| BigInt::from(a - b))
                .collect::<Vec<BigInt>>()
        })
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .collect()
}
