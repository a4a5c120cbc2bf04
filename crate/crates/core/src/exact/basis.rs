use num_traits::{One, Signed, Zero};
use serde::Serialize;

use super::{RationalMatrix, RationalVector};
use crate::error::{Error, Result};
use crate::exact::Rational;

/// A lattice in `ℝ^d` given by a basis. The inverse of the basis matrix is
/// kept so that membership tests are a single matrix-vector product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LatticeBasis {
    vectors: Vec<RationalVector>,
    label: String,
    #[serde(skip)]
    matrix: RationalMatrix,
    #[serde(skip)]
    inverse: RationalMatrix,
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    determinant: Rational,
}

impl LatticeBasis {
    /// Fails with [`Error::Singular`] if the vectors are linearly dependent.
    pub fn new(vectors: Vec<RationalVector>, label: impl Into<String>) -> Result<Self> {
        let d = vectors.len();
        if let Some(v) = vectors.iter().find(|v| v.dim() != d) {
            return Err(Error::Dimension {
                expected: d,
                got: v.dim(),
            });
        }
        let matrix = RationalMatrix::from_columns(&vectors)?;
        let determinant = matrix.det()?;
        if determinant.is_zero() {
            return Err(Error::Singular);
        }
        let inverse = matrix.inverse()?;
        Ok(Self {
            vectors,
            label: label.into(),
            matrix,
            inverse,
            determinant,
        })
    }

    /// The standard lattice `ℤ^d`.
    pub fn standard(d: usize) -> Self {
        Self::new((0..d).map(|i| RationalVector::unit(d, i)).collect(), format!("Z^{d}"))
            .expect("standard basis is invertible")
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[RationalVector] {
        &self.vectors
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Basis matrix (columns are the basis vectors).
    pub fn matrix(&self) -> &RationalMatrix {
        &self.matrix
    }

    pub fn inverse_matrix(&self) -> &RationalMatrix {
        &self.inverse
    }

    /// Signed determinant of the basis matrix.
    pub fn determinant(&self) -> &Rational {
        &self.determinant
    }

    /// Coordinates `c` with `basis · c = p`.
    pub fn coordinates(&self, p: &RationalVector) -> Result<RationalVector> {
        self.inverse.mul_vec(p)
    }

    /// The point `basis · c`.
    pub fn point(&self, c: &RationalVector) -> Result<RationalVector> {
        self.matrix.mul_vec(c)
    }

    pub fn contains(&self, p: &RationalVector) -> Result<bool> {
        Ok(self.coordinates(p)?.is_integral())
    }
}

/// Coordinates of `p` in `basis`; `p` is a lattice point iff they are integral.
pub fn lattice_coordinates(basis: &LatticeBasis, p: &RationalVector) -> Result<RationalVector> {
    basis.coordinates(p)
}

/// The affine map `x ↦ linear·x + translation` with invertible linear part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    linear: RationalMatrix,
    translation: RationalVector,
}

impl AffineMap {
    pub fn new(linear: RationalMatrix, translation: RationalVector) -> Result<Self> {
        let (r, c) = linear.shape();
        if r != c {
            return Err(Error::Shape("affine map needs a square linear part".into()));
        }
        if translation.dim() != r {
            return Err(Error::Dimension {
                expected: r,
                got: translation.dim(),
            });
        }
        if linear.det()?.is_zero() {
            return Err(Error::Singular);
        }
        Ok(Self { linear, translation })
    }

    pub fn linear(&self) -> &RationalMatrix {
        &self.linear
    }

    pub fn translation(&self) -> &RationalVector {
        &self.translation
    }

    pub fn apply(&self, x: &RationalVector) -> Result<RationalVector> {
        Ok(&self.linear.mul_vec(x)? + &self.translation)
    }

    pub fn inverse(&self) -> Result<Self> {
        let inv = self.linear.inverse()?;
        let t = -&inv.mul_vec(&self.translation)?;
        Self::new(inv, t)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        Self::new(self.linear.mul(&other.linear)?, self.apply(&other.translation)?)
    }

    /// Whether the map carries the lattice `from` onto the lattice `to`:
    /// the linear part written from `from`-coordinates to `to`-coordinates
    /// is integral with determinant ±1 and the translation lies in `to`.
    pub fn is_lattice_isomorphism(&self, from: &LatticeBasis, to: &LatticeBasis) -> Result<bool> {
        let m = to.inverse_matrix().mul(&self.linear.mul(from.matrix())?)?;
        Ok(m.is_integral() && m.det()?.abs().is_one() && to.contains(&self.translation)?)
    }
}
