use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::CertifiedTriangulation;
use crate::error::{Error, Result};
use crate::exact::int::{big_rows, coordinates_in, hermite_rows, saturation, saturation_index};
use crate::exact::{LatticeBasis, Rational, RationalVector};

/// Affine map `ℤ^m → ℚ^n`, `y ↦ origin + Σ y_i·directions[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Placement {
    pub origin: RationalVector,
    pub directions: Vec<RationalVector>,
}

impl Placement {
    fn apply(&self, y: &[i64]) -> RationalVector {
        let mut out = self.origin.clone().into_entries();
        for (c, d) in y.iter().zip(&self.directions) {
            let c = Rational::from_integer(BigInt::from(*c));
            for (o, x) in out.iter_mut().zip(d.iter()) {
                *o += &c * x;
            }
        }
        RationalVector::new(out)
    }

    fn linear(&self, y: &[BigInt]) -> RationalVector {
        let n = self.origin.dim();
        let mut out = vec![Rational::zero(); n];
        for (c, d) in y.iter().zip(&self.directions) {
            let c = Rational::from_integer(c.clone());
            for (o, x) in out.iter_mut().zip(d.iter()) {
                *o += &c * x;
            }
        }
        RationalVector::new(out)
    }
}

/// Placement of two triangulated simplices in a common lattice.
#[derive(Clone, Debug)]
pub struct JoinEmbedding {
    pub lattice: LatticeBasis,
    pub first: Placement,
    pub second: Placement,
}

/// Generators of the affine lattice spanned by the vertices, as vectors
/// of `ℤ^m`: the standard basis when some cell is unimodular, otherwise a
/// Hermite basis of the vertex differences.
fn generators(t: &CertifiedTriangulation) -> Vec<Vec<BigInt>> {
    let m = t.dim();
    if t.certificate().basic.determinants.contains(&1) {
        return (0..m)
            .map(|i| (0..m).map(|j| BigInt::from(u8::from(i == j))).collect())
            .collect();
    }
    let p0 = t.point(0).to_vec();
    let diffs: Vec<Vec<i64>> = t
        .points()
        .map(|p| p.iter().zip(&p0).map(|(a, b)| a - b).collect())
        .collect();
    hermite_rows(&big_rows(&diffs), m)
}

fn integral(v: &RationalVector, what: &str) -> Result<Vec<BigInt>> {
    v.iter()
        .map(|x| x.is_integer().then(|| x.to_integer()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::JoinHypothesis(format!("{what} is not a lattice vector")))
}

/// Checks skewness and that the placed vertices generate the full lattice
/// of their affine hull. Only generators are mapped, not every vertex.
fn check(t1: &CertifiedTriangulation, t2: &CertifiedTriangulation, e: &JoinEmbedding) -> Result<()> {
    let n = e.lattice.dim();
    if e.first.directions.len() != t1.dim() || e.second.directions.len() != t2.dim() {
        return Err(Error::Shape("placement needs one direction per coordinate".into()));
    }
    let mut rows = Vec::new();
    for (t, pl) in [(t1, &e.first), (t2, &e.second)] {
        for g in generators(t) {
            rows.push(coords(e, pl.linear(&g), "a placed edge")?);
        }
    }
    let o1 = coords(e, e.first.apply(t1.point(0)), "a placed vertex")?;
    let o2 = coords(e, e.second.apply(t2.point(0)), "a placed vertex")?;
    rows.push(o2.iter().zip(&o1).map(|(a, b)| a - b).collect());
    let want = t1.dim() + t2.dim() + 1;
    let rank = hermite_rows(&rows, n).len();
    if rank != want {
        return Err(Error::JoinHypothesis(format!(
            "skewness: the affine hulls span dimension {}, expected {}",
            rank.saturating_sub(1),
            want - 1
        )));
    }
    let idx = saturation_index(&rows, n);
    if !idx.is_one() {
        return Err(Error::JoinHypothesis(format!(
            "integral affine hull: the vertices generate a sublattice of index {idx}"
        )));
    }
    Ok(())
}

fn coords(e: &JoinEmbedding, p: RationalVector, what: &str) -> Result<Vec<BigInt>> {
    integral(&e.lattice.coordinates(&p)?, what)
}

/// Join of two certified triangulations placed in skew affine subspaces.
/// Cells are the unions `s₁ ∪ s₂`, colours of the second factor are
/// shifted by `dim(t1) + 1`, and heights are extended affinely. The
/// result is expressed in coordinates of the saturated lattice of its
/// affine hull, so it is full-dimensional.
pub fn join(
    t1: &CertifiedTriangulation,
    t2: &CertifiedTriangulation,
    e: &JoinEmbedding,
) -> Result<CertifiedTriangulation> {
    let n = e.lattice.dim();
    check(t1, t2, e)?;
    let placed = [(t1, &e.first), (t2, &e.second)]
        .into_iter()
        .flat_map(|(t, pl)| t.points().map(move |p| pl.apply(p)))
        .map(|p| coords(e, p, "a placed vertex"))
        .collect::<Result<Vec<_>>>()?;
    let want = t1.dim() + t2.dim() + 1;
    let base = placed[0].clone();
    let diffs: Vec<Vec<BigInt>> = placed
        .iter()
        .map(|p| p.iter().zip(&base).map(|(a, b)| a - b).collect())
        .collect();
    let local: Vec<Vec<BigInt>> = if want == n {
        diffs
    } else {
        let basis = saturation(&diffs, n);
        coordinates_in(&basis, &diffs, n)
    };
    let points: Vec<i64> = local
        .iter()
        .flatten()
        .map(|x| x.to_i64().ok_or(Error::Overflow("joined coordinates")))
        .collect::<Result<_>>()?;
    let split = t1.num_vertices();
    let ambient_index = |t: &CertifiedTriangulation, offset: usize| -> Result<Vec<usize>> {
        t.ambient()
            .iter()
            .map(|a| {
                t.points()
                    .position(|p| p == a.as_slice())
                    .map(|i| i + offset)
                    .ok_or_else(|| Error::Precondition("ambient vertex missing from a factor".into()))
            })
            .collect()
    };
    let mut amb_idx = ambient_index(t1, 0)?;
    amb_idx.extend(ambient_index(t2, split)?);
    let ambient = amb_idx
        .iter()
        .map(|&i| points[i * want..(i + 1) * want].to_vec())
        .collect();
    assemble_join(t1, t2, want, points, ambient)
}

/// Places `t1` at `(x, 0, 0)` and `t2` at `(0, 1, y)` in
/// `ℤ^{dim t1 + 1 + dim t2}` and joins them.
pub fn join_standard(t1: &CertifiedTriangulation, t2: &CertifiedTriangulation) -> Result<CertifiedTriangulation> {
    let (m1, m2) = (t1.dim(), t2.dim());
    let n = m1 + 1 + m2;
    let lattice = LatticeBasis::standard(n);
    let embedding = JoinEmbedding {
        first: Placement {
            origin: RationalVector::zeros(n),
            directions: (0..m1).map(|i| RationalVector::unit(n, i)).collect(),
        },
        second: Placement {
            origin: RationalVector::unit(n, m1),
            directions: (0..m2).map(|i| RationalVector::unit(n, m1 + 1 + i)).collect(),
        },
        lattice,
    };
    check(t1, t2, &embedding)?;
    let mut points = Vec::with_capacity((t1.num_vertices() + t2.num_vertices()) * n);
    for p in t1.points() {
        points.extend_from_slice(p);
        points.extend(std::iter::repeat_n(0, m2 + 1));
    }
    for p in t2.points() {
        points.extend(std::iter::repeat_n(0, m1));
        points.push(1);
        points.extend_from_slice(p);
    }
    let mut ambient: Vec<Vec<i64>> = t1
        .ambient()
        .iter()
        .map(|a| {
            let mut v = a.clone();
            v.resize(n, 0);
            v
        })
        .collect();
    for a in t2.ambient() {
        let mut v = vec![0; m1];
        v.push(1);
        v.extend_from_slice(a);
        ambient.push(v);
    }
    assemble_join(t1, t2, n, points, ambient)
}

fn assemble_join(
    t1: &CertifiedTriangulation,
    t2: &CertifiedTriangulation,
    dim: usize,
    points: Vec<i64>,
    ambient: Vec<Vec<i64>>,
) -> Result<CertifiedTriangulation> {
    let split = t1.num_vertices() as u32;
    let mut cells = Vec::with_capacity(t1.num_cells() * t2.num_cells() * (dim + 1));
    for c1 in t1.cells() {
        for c2 in t2.cells() {
            cells.extend_from_slice(c1);
            cells.extend(c2.iter().map(|&v| v + split));
        }
    }
    let offset = t1.dim() as u8 + 1;
    let colours = match (t1.colours(), t2.colours()) {
        (Some(a), Some(b)) => Some(a.iter().copied().chain(b.iter().map(|&c| c + offset)).collect()),
        _ => None,
    };
    let (d1, d2) = (t1.height_denominator(), t2.height_denominator());
    let den = d1.lcm(&d2);
    let heights = match (t1.height_numerators(), t2.height_numerators()) {
        (Some(a), Some(b)) => {
            let (s1, s2) = (den / d1, den / d2);
            let scaled = a
                .iter()
                .map(|&h| h.checked_mul(s1))
                .chain(b.iter().map(|&h| h.checked_mul(s2)))
                .collect::<Option<Vec<_>>>()
                .ok_or(Error::Overflow("joined heights"))?;
            Some(scaled)
        }
        _ => None,
    };
    let mut epsilons = t1.epsilons().to_vec();
    epsilons.extend_from_slice(t2.epsilons());
    CertifiedTriangulation::assemble(dim, points, cells, colours, heights, den, ambient, epsilons)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::triangulation::staircase;

    fn point() -> CertifiedTriangulation {
        CertifiedTriangulation::assemble(
            0,
            vec![],
            vec![0],
            Some(vec![0]),
            Some(vec![0]),
            1,
            vec![vec![]],
            vec![],
        )
        .unwrap()
    }

    #[test]
    fn segments_join_to_product_count() {
        let (a, b) = (staircase(1, 3).unwrap(), staircase(1, 5).unwrap());
        let j = join_standard(&a, &b).unwrap();
        assert_eq!(j.dim(), 3);
        assert_eq!(j.num_cells(), 15);
        assert!(j.certificate().overall, "{:?}", j.certificate());
    }

    #[test]
    fn cone_over_a_triangulation() {
        let t = staircase(2, 3).unwrap();
        let j = join_standard(&point(), &t).unwrap();
        assert_eq!(j.num_cells(), t.num_cells());
        assert!(j.certificate().overall);
        let j = join_standard(&t, &point()).unwrap();
        assert!(j.certificate().overall);
    }

    #[test]
    fn index_two_sublattice_is_rejected() {
        // conv{0, e₁} and conv{2e₂, 2e₂ + e₃} in ℤ³ + ℤ·(e₁ + e₂)/2.
        let lattice = LatticeBasis::new(
            vec![
                RationalVector::new(vec![rat(1, 2), rat(1, 2), rat(0, 1)]),
                RationalVector::unit(3, 1),
                RationalVector::unit(3, 2),
            ],
            "L",
        )
        .unwrap();
        let seg = staircase(1, 1).unwrap();
        let e = JoinEmbedding {
            lattice,
            first: Placement {
                origin: RationalVector::zeros(3),
                directions: vec![RationalVector::unit(3, 0)],
            },
            second: Placement {
                origin: RationalVector::from_ints(&[0, 2, 0]),
                directions: vec![RationalVector::unit(3, 2)],
            },
        };
        match join(&seg, &seg, &e) {
            Err(Error::JoinHypothesis(msg)) => assert!(msg.contains("index 4"), "{msg}"),
            other => panic!("expected a join-hypothesis error, got {other:?}"),
        }
    }

    #[test]
    fn skew_failure_is_named() {
        let seg = staircase(1, 1).unwrap();
        let e = JoinEmbedding {
            lattice: LatticeBasis::standard(2),
            first: Placement {
                origin: RationalVector::zeros(2),
                directions: vec![RationalVector::unit(2, 0)],
            },
            second: Placement {
                origin: RationalVector::from_ints(&[2, 0]),
                directions: vec![RationalVector::unit(2, 0)],
            },
        };
        match join(&seg, &seg, &e) {
            Err(Error::JoinHypothesis(msg)) => assert!(msg.starts_with("skewness")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn general_join_in_a_bigger_space() {
        // Two unit segments placed in ℤ⁴, joined into a 3-simplex of a
        // 3-dimensional saturated sublattice.
        let seg = staircase(1, 2).unwrap();
        let e = JoinEmbedding {
            lattice: LatticeBasis::standard(4),
            first: Placement {
                origin: RationalVector::zeros(4),
                directions: vec![RationalVector::from_ints(&[1, 0, 0, 1])],
            },
            second: Placement {
                origin: RationalVector::unit(4, 1),
                directions: vec![RationalVector::unit(4, 2)],
            },
        };
        let j = join(&seg, &seg, &e).unwrap();
        assert_eq!(j.dim(), 3);
        assert_eq!(j.num_cells(), 4);
        assert!(j.certificate().overall);
    }
}
