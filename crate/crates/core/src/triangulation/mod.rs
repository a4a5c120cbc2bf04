//! Basic, coherent, balanced triangulations of Watanabe simplices: the
//! staircase triangulations, joins, refinement of dilations, and an
//! independent verification pass.

mod build;
mod export;
mod join;
mod refine;
mod staircase;
mod stellar;
mod verify;

pub use build::triangulate;
pub use export::write_off;
pub use join::{join, join_standard, JoinEmbedding, Placement};
pub use refine::refine_dilation;
pub use staircase::{staircase, staircase_height};
pub use stellar::stellar;
pub use verify::{
    verify_balanced, verify_basic, verify_coherent, BalanceWitness, BasicWitness, Certificate, CoherenceWitness,
    TilingWitness,
};

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{fmt_rational, Rational};

/// A lattice triangulation of a full-dimensional simplex in `ℤ^dim`
/// together with its certificate.
///
/// Vertices are stored flat (`dim` coordinates each), cells as sorted
/// vertex-index tuples (`dim + 1` each). Heights are `heights[v] / height_denominator`.
#[derive(Clone, Debug)]
pub struct CertifiedTriangulation {
    dim: usize,
    nv: usize,
    points: Vec<i64>,
    cells: Vec<u32>,
    colours: Option<Vec<u8>>,
    heights: Option<Vec<i128>>,
    height_denominator: i128,
    ambient: Vec<Vec<i64>>,
    epsilons: Vec<Rational>,
    certificate: Certificate,
}

/// Raw parts of a triangulation before certification.
#[derive(Clone, Debug, Default)]
pub struct TriangulationParts {
    pub dim: usize,
    pub points: Vec<Vec<i64>>,
    pub cells: Vec<Vec<u32>>,
    pub colours: Option<Vec<u8>>,
    /// Heights as numerators over `height_denominator`.
    pub heights: Option<Vec<i128>>,
    pub height_denominator: i128,
    pub ambient: Vec<Vec<i64>>,
}

impl CertifiedTriangulation {
    /// Checks shapes and computes the certificate. The certificate may be
    /// negative; inspect [`CertifiedTriangulation::certificate`].
    pub fn from_parts(p: TriangulationParts) -> Result<Self> {
        let dim = p.dim;
        if let Some(v) = p.points.iter().find(|v| v.len() != dim) {
            return Err(Error::Dimension {
                expected: dim,
                got: v.len(),
            });
        }
        let nv = p.points.len();
        let mut cells = Vec::with_capacity(p.cells.len() * (dim + 1));
        for c in &p.cells {
            if c.len() != dim + 1 {
                return Err(Error::Shape(format!("cell {c:?} needs {} vertices", dim + 1)));
            }
            let mut c = c.clone();
            c.sort_unstable();
            if c.windows(2).any(|w| w[0] == w[1]) || c.iter().any(|&i| i as usize >= nv) {
                return Err(Error::Shape(format!("cell {c:?} has bad vertex indices")));
            }
            cells.extend(c);
        }
        if p.ambient.len() != dim + 1 || p.ambient.iter().any(|v| v.len() != dim) {
            return Err(Error::Shape("ambient simplex must have dim + 1 vertices".into()));
        }
        if p.colours.as_ref().is_some_and(|c| c.len() != nv) || p.heights.as_ref().is_some_and(|h| h.len() != nv) {
            return Err(Error::Shape("one colour and one height per vertex".into()));
        }
        if p.height_denominator <= 0 && p.heights.is_some() {
            return Err(Error::Shape("height denominator must be positive".into()));
        }
        Self::assemble(
            dim,
            p.points.into_iter().flatten().collect(),
            cells,
            p.colours,
            p.heights,
            p.height_denominator.max(1),
            p.ambient,
            Vec::new(),
        )
    }

    #[allow(clippy::too_many_arguments)]
    pub(crate) fn assemble(
        dim: usize,
        points: Vec<i64>,
        cells: Vec<u32>,
        colours: Option<Vec<u8>>,
        heights: Option<Vec<i128>>,
        height_denominator: i128,
        ambient: Vec<Vec<i64>>,
        epsilons: Vec<Rational>,
    ) -> Result<Self> {
        let nv = points
            .len()
            .checked_div(dim)
            .unwrap_or_else(|| cells.iter().max().map_or(0, |&m| m as usize + 1));
        let mut t = Self {
            dim,
            nv,
            points,
            cells,
            colours,
            heights,
            height_denominator,
            ambient,
            epsilons,
            certificate: Certificate::default(),
        };
        t.normalise_heights();
        t.certificate = verify::certify(&t)?;
        Ok(t)
    }

    /// Divides heights and denominator by their common gcd.
    fn normalise_heights(&mut self) {
        let Some(h) = self.heights.as_mut() else { return };
        let g = h.iter().fold(self.height_denominator, |g, &x| gcd_i128(g, x));
        if g > 1 {
            for x in h.iter_mut() {
                *x /= g;
            }
            self.height_denominator /= g;
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_vertices(&self) -> usize {
        self.nv
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len() / (self.dim + 1)
    }

    pub fn point(&self, v: usize) -> &[i64] {
        &self.points[v * self.dim..(v + 1) * self.dim]
    }

    pub fn cell(&self, c: usize) -> &[u32] {
        &self.cells[c * (self.dim + 1)..(c + 1) * (self.dim + 1)]
    }

    pub fn cells(&self) -> impl Iterator<Item = &[u32]> {
        self.cells.chunks_exact(self.dim + 1)
    }

    pub fn points(&self) -> impl Iterator<Item = &[i64]> {
        (0..self.num_vertices()).map(move |v| self.point(v))
    }

    pub fn colours(&self) -> Option<&[u8]> {
        self.colours.as_deref()
    }

    pub fn colour(&self, v: usize) -> Option<u8> {
        self.colours.as_ref().map(|c| c[v])
    }

    /// Height numerators; divide by [`Self::height_denominator`].
    pub fn height_numerators(&self) -> Option<&[i128]> {
        self.heights.as_deref()
    }

    pub fn height_denominator(&self) -> i128 {
        self.height_denominator
    }

    pub fn height(&self, v: usize) -> Option<Rational> {
        self.heights
            .as_ref()
            .map(|h| Rational::new(BigInt::from(h[v]), BigInt::from(self.height_denominator)))
    }

    pub fn ambient(&self) -> &[Vec<i64>] {
        &self.ambient
    }

    /// Gluing parameters chosen by each refinement that produced this
    /// triangulation, innermost first.
    pub fn epsilons(&self) -> &[Rational] {
        &self.epsilons
    }

    pub fn certificate(&self) -> &Certificate {
        &self.certificate
    }

    /// Plain dilation `λ·t` with heights `x ↦ h(x/λ)` and colours carried
    /// along. Not basic for `λ ≥ 2`.
    pub fn dilate(&self, lambda: u64) -> Result<Self> {
        if lambda == 0 {
            return Err(Error::EmptyDilation);
        }
        let l = i64::try_from(lambda).map_err(|_| Error::Overflow("dilation factor"))?;
        let scale = |x: &i64| x.checked_mul(l).ok_or(Error::Overflow("dilated coordinates"));
        let points = self.points.iter().map(scale).collect::<Result<Vec<_>>>()?;
        let ambient = self
            .ambient
            .iter()
            .map(|v| v.iter().map(scale).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Self::assemble(
            self.dim,
            points,
            self.cells.clone(),
            self.colours.clone(),
            self.heights.clone(),
            self.height_denominator,
            ambient,
            self.epsilons.clone(),
        )
    }

    /// Serializable copy (vertices, cells, colours, heights, certificate).
    pub fn to_view(&self) -> TriangulationView {
        TriangulationView {
            dim: self.dim,
            vertices: self.points().map(|p| p.to_vec()).collect(),
            cells: self.cells().map(|c| c.to_vec()).collect(),
            colours: self.colours.clone(),
            heights: (0..self.num_vertices())
                .filter_map(|v| self.height(v).map(|h| fmt_rational(&h)))
                .collect(),
            ambient: self.ambient.clone(),
            epsilons: self.epsilons.iter().map(fmt_rational).collect(),
            certificate: self.certificate.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TriangulationView {
    pub dim: usize,
    pub vertices: Vec<Vec<i64>>,
    pub cells: Vec<Vec<u32>>,
    pub colours: Option<Vec<u8>>,
    pub heights: Vec<String>,
    pub ambient: Vec<Vec<i64>>,
    pub epsilons: Vec<String>,
    pub certificate: Certificate,
}

pub(crate) fn gcd_i128(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a as i128
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn parts(points: &[&[i64]], cells: &[&[u32]], ambient: &[&[i64]]) -> TriangulationParts {
        TriangulationParts {
            dim: ambient.len() - 1,
            points: points.iter().map(|p| p.to_vec()).collect(),
            cells: cells.iter().map(|c| c.to_vec()).collect(),
            colours: None,
            heights: None,
            height_denominator: 1,
            ambient: ambient.iter().map(|p| p.to_vec()).collect(),
        }
    }

    #[test]
    fn shape_errors() {
        let mut p = parts(
            &[&[0, 0], &[1, 0], &[0, 1]],
            &[&[0, 1, 2]],
            &[&[0, 0], &[1, 0], &[0, 1]],
        );
        p.cells = vec![vec![0, 1]];
        assert!(CertifiedTriangulation::from_parts(p.clone()).is_err());
        p.cells = vec![vec![0, 1, 1]];
        assert!(CertifiedTriangulation::from_parts(p.clone()).is_err());
        p.cells = vec![vec![0, 1, 7]];
        assert!(CertifiedTriangulation::from_parts(p).is_err());
    }

    #[test]
    fn heights_are_normalised() {
        let mut p = parts(&[&[0], &[1], &[2]], &[&[0, 1], &[1, 2]], &[&[0], &[2]]);
        p.heights = Some(vec![0, 4, 0]);
        p.height_denominator = 6;
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        assert_eq!(t.height_numerators().unwrap(), &[0, 2, 0]);
        assert_eq!(t.height_denominator(), 3);
        assert_eq!(t.height(1).unwrap(), crate::exact::rat(2, 3));
    }
}
