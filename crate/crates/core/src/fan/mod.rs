//! Fans in `N_G` obtained by coning over triangulations of the junior
//! simplex, crepancy and smoothness checks, group elements and ages.

mod group;

pub use group::{check_gorenstein, minimal_nonzero_age, GroupElement, GroupLattice};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::int::{coordinates_in, det_i128, hermite_rows, integer_kernel};
use crate::exact::{fmt_rational, LatticeBasis, Rational, RationalVector};
use crate::simplex::JuniorGeometry;
use crate::triangulation::CertifiedTriangulation;

/// Maximal cones `cone(rays[i] : i ∈ cell)` in `N_G`.
#[derive(Clone, Debug, Serialize)]
pub struct ResolutionFan {
    pub lattice: LatticeBasis,
    pub rays: Vec<RationalVector>,
    pub cones: Vec<Vec<u32>>,
    /// Ray generators in coordinates of the lattice basis.
    #[serde(skip)]
    ray_coordinates: Vec<Vec<i64>>,
}

impl ResolutionFan {
    /// Checks that every ray lies in the lattice and every cone has `d` rays.
    pub fn new(lattice: LatticeBasis, rays: Vec<RationalVector>, cones: Vec<Vec<u32>>) -> Result<Self> {
        let d = lattice.dim();
        let mut ray_coordinates = Vec::with_capacity(rays.len());
        for r in &rays {
            let c = lattice.coordinates(r)?;
            let c = c
                .to_i64()
                .ok_or_else(|| Error::LatticeInconsistency(format!("ray {r} is not in the lattice")))?;
            ray_coordinates.push(c);
        }
        if let Some(c) = cones
            .iter()
            .find(|c| c.len() != d || c.iter().any(|&i| i as usize >= rays.len()))
        {
            return Err(Error::Shape(format!("cone {c:?} must list {d} valid rays")));
        }
        Ok(Self {
            lattice,
            rays,
            cones,
            ray_coordinates,
        })
    }

    /// The positive orthant `σ₀` as a single cone.
    pub fn orthant(lattice: LatticeBasis) -> Result<Self> {
        let d = lattice.dim();
        Self::new(
            lattice,
            (0..d).map(|i| RationalVector::unit(d, i)).collect(),
            vec![(0..d as u32).collect()],
        )
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    /// Multiplicity `|det|` of the cone's generators in lattice coordinates.
    pub fn multiplicity(&self, cone: usize) -> BigInt {
        let mut buf = vec![0i128; self.lattice.dim().pow(2)];
        match self.small_multiplicity(cone, &mut buf) {
            Some(x) => BigInt::from(x),
            None => {
                let small: Vec<i64> = buf.iter().map(|&x| x as i64).collect();
                crate::exact::int::det_big(&small, self.lattice.dim()).abs()
            }
        }
    }

    /// Fills `buf` with the generator matrix and returns `|det|` unless
    /// it overflows.
    fn small_multiplicity(&self, cone: usize, buf: &mut [i128]) -> Option<u128> {
        let d = self.lattice.dim();
        for (i, &r) in self.cones[cone].iter().enumerate() {
            for (j, &x) in self.ray_coordinates[r as usize].iter().enumerate() {
                buf[i * d + j] = x as i128;
            }
        }
        det_i128(buf, d).map(i128::unsigned_abs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CrepancyWitness {
    pub ok: bool,
    /// Rays off the junior hyperplane with their coordinate sums.
    pub violations: Vec<(usize, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmoothnessWitness {
    pub ok: bool,
    pub max_multiplicity: String,
    pub singular_cones: usize,
}

/// Crepant iff every ray generator has coordinate sum exactly 1.
pub fn check_crepant(fan: &ResolutionFan) -> CrepancyWitness {
    let one = Rational::from_integer(1.into());
    let violations: Vec<(usize, String)> = fan
        .rays
        .iter()
        .enumerate()
        .filter_map(|(i, r)| {
            let s = r.sum();
            (s != one).then(|| (i, fmt_rational(&s)))
        })
        .collect();
    CrepancyWitness {
        ok: violations.is_empty(),
        violations,
    }
}

/// Smooth iff every cone has multiplicity 1.
pub fn check_smooth(fan: &ResolutionFan) -> SmoothnessWitness {
    let mut small_max = 0u128;
    let mut max = BigInt::zero();
    let mut singular = 0;
    let mut buf = vec![0i128; fan.lattice.dim().pow(2)];
    for c in 0..fan.num_cones() {
        match fan.small_multiplicity(c, &mut buf) {
            Some(x) => {
                singular += usize::from(x != 1);
                small_max = small_max.max(x);
            }
            None => {
                singular += 1;
                max = max.max(fan.multiplicity(c));
            }
        }
    }
    let max = max.max(BigInt::from(small_max));
    SmoothnessWitness {
        ok: singular == 0 && fan.num_cones() > 0,
        max_multiplicity: max.to_string(),
        singular_cones: singular,
    }
}

fn integral_coordinates(lattice: &LatticeBasis, p: &RationalVector) -> Result<Vec<i64>> {
    lattice
        .coordinates(p)?
        .to_i64()
        .ok_or_else(|| Error::LatticeInconsistency(format!("{p} is not in the lattice")))
}

/// Rays over the vertices of `t`. `pull` is affine, so lattice coordinates
/// are an integral affine function of the vertex coordinates; it is
/// evaluated exactly at the origin and the unit vectors and then extended
/// in machine integers.
fn fan_from(
    lattice: LatticeBasis,
    t: &CertifiedTriangulation,
    pull: impl Fn(&[i64]) -> Result<RationalVector>,
) -> Result<ResolutionFan> {
    let (m, d) = (t.dim(), lattice.dim());
    let origin = integral_coordinates(&lattice, &pull(&vec![0; m])?)?;
    let mut steps = Vec::with_capacity(m);
    for i in 0..m {
        let mut e = vec![0i64; m];
        e[i] = 1;
        let c = integral_coordinates(&lattice, &pull(&e)?)?;
        steps.push(c.iter().zip(&origin).map(|(a, b)| a - b).collect::<Vec<i64>>());
    }
    let den = crate::exact::common_denominator(lattice.vectors().iter().flat_map(|v| v.iter()));
    let q = Rational::from_integer(den.clone());
    let numerators: Vec<Vec<i128>> = lattice
        .vectors()
        .iter()
        .map(|v| {
            v.iter()
                .map(|x| (x * &q).to_integer().to_i128().ok_or(Error::Overflow("lattice basis")))
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut rays = Vec::with_capacity(t.num_vertices());
    let mut ray_coordinates = Vec::with_capacity(t.num_vertices());
    for y in t.points() {
        let mut c = origin.clone();
        for (yi, step) in y.iter().zip(&steps) {
            for (cj, sj) in c.iter_mut().zip(step) {
                *cj = yi
                    .checked_mul(*sj)
                    .and_then(|v| cj.checked_add(v))
                    .ok_or(Error::Overflow("ray coordinates"))?;
            }
        }
        let mut num = vec![0i128; d];
        for (ci, row) in c.iter().zip(&numerators) {
            for (nj, r) in num.iter_mut().zip(row) {
                *nj = r
                    .checked_mul(*ci as i128)
                    .and_then(|v| nj.checked_add(v))
                    .ok_or(Error::Overflow("ray coordinates"))?;
            }
        }
        rays.push(RationalVector::new(
            num.into_iter().map(|x| Rational::new(x.into(), den.clone())).collect(),
        ));
        ray_coordinates.push(c);
    }
    let cones: Vec<Vec<u32>> = t.cells().map(|c| c.to_vec()).collect();
    if let Some(c) = cones.iter().find(|c| c.len() != d) {
        return Err(Error::Shape(format!("cone {c:?} must list {d} rays")));
    }
    Ok(ResolutionFan {
        lattice,
        rays,
        cones,
        ray_coordinates,
    })
}

/// Cones over the cells of `t` pulled back through `Φ⁻¹`. `t` must live
/// in the working coordinates of `geometry`.
pub fn build_fan(geometry: &JuniorGeometry, t: &CertifiedTriangulation) -> Result<ResolutionFan> {
    fan_from(geometry.lattice.basis.clone(), t, |y| geometry.pull_back(y))
}

/// Integer coordinates on the junior hyperplane of an arbitrary group
/// lattice: a point `p` gets the coordinates of `p − e₁` in a basis of
/// `{v ∈ N_G : Σv = 0}`.
#[derive(Clone, Debug)]
pub struct JuniorChart {
    pub lattice: GroupLattice,
    /// Echelon basis of the direction lattice, in `N_G` coordinates.
    directions: Vec<Vec<BigInt>>,
}

impl JuniorChart {
    pub fn new(lattice: GroupLattice) -> Result<Self> {
        let d = lattice.d();
        let sums: Vec<Rational> = lattice.basis.vectors().iter().map(|v| v.sum()).collect();
        let den = crate::exact::common_denominator(&sums);
        let row: Vec<BigInt> = sums
            .iter()
            .map(|s| (s * Rational::from_integer(den.clone())).to_integer())
            .collect();
        let directions = hermite_rows(&integer_kernel(&[row], d), d);
        if directions.len() + 1 != d {
            return Err(Error::LatticeInconsistency(
                "junior hyperplane has the wrong rank".into(),
            ));
        }
        Ok(Self { lattice, directions })
    }

    pub fn dim(&self) -> usize {
        self.directions.len()
    }

    /// Working coordinates of a lattice point on the junior hyperplane.
    pub fn to_working(&self, p: &RationalVector) -> Result<Vec<i64>> {
        let d = self.lattice.d();
        let c = self.lattice.basis.coordinates(&(p - &RationalVector::unit(d, 0)))?;
        if !c.is_integral() || p.sum() != Rational::one() {
            return Err(Error::LatticeInconsistency(format!(
                "{p} is not a junior lattice point"
            )));
        }
        let c: Vec<BigInt> = c.iter().map(|x| x.to_integer()).collect();
        coordinates_in(&self.directions, &[c], d)[0]
            .iter()
            .map(|x| x.to_i64().ok_or(Error::Overflow("working coordinates")))
            .collect()
    }

    pub fn pull_back(&self, y: &[i64]) -> Result<RationalVector> {
        let d = self.lattice.d();
        let mut c = vec![Rational::zero(); d];
        for (yi, row) in y.iter().zip(&self.directions) {
            for (cj, r) in c.iter_mut().zip(row) {
                *cj += Rational::from_integer(r * BigInt::from(*yi));
            }
        }
        let p = self.lattice.basis.point(&RationalVector::new(c))?;
        Ok(&p + &RationalVector::unit(d, 0))
    }

    /// Images of `e₁, …, e_d`.
    pub fn junior_vertices(&self) -> Result<Vec<Vec<i64>>> {
        let d = self.lattice.d();
        (0..d).map(|i| self.to_working(&RationalVector::unit(d, i))).collect()
    }
}

/// Cones over the cells of `t`, which must live in the chart's coordinates.
pub fn build_fan_in_chart(chart: &JuniorChart, t: &CertifiedTriangulation) -> Result<ResolutionFan> {
    fan_from(chart.lattice.basis.clone(), t, |y| chart.pull_back(y))
}

/// A triangulation of the junior simplex of an arbitrary group lattice
/// using all of its lattice points, by successive stellar subdivision.
/// Basic whenever `d ≤ 3`; certified either way.
pub fn triangulate_junior(chart: &JuniorChart) -> Result<CertifiedTriangulation> {
    let ambient = chart.junior_vertices()?;
    let inner = chart
        .lattice
        .exceptional_divisors()?
        .iter()
        .map(|p| chart.to_working(p))
        .collect::<Result<Vec<_>>>()?;
    crate::triangulation::stellar(ambient, inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datum::SpecialDatum;
    use crate::pipeline::resolve;

    #[test]
    fn star_three_two_pipeline() {
        let r = resolve(&SpecialDatum::star(3, 2).unwrap()).unwrap();
        assert_eq!(r.fan.num_cones(), 4);
        assert!(check_crepant(&r.fan).ok);
        assert!(check_smooth(&r.fan).ok);
    }

    #[test]
    fn orthant_multiplicity_is_group_order() {
        let g = GroupLattice::from_datum(&SpecialDatum::star(3, 2).unwrap()).unwrap();
        let f = ResolutionFan::orthant(g.basis.clone()).unwrap();
        assert_eq!(f.multiplicity(0), BigInt::from(4));
        assert!(!check_smooth(&f).ok);
        assert!(check_crepant(&f).ok);
        let triv = GroupLattice::from_datum(&SpecialDatum::trivial(3)).unwrap();
        assert!(check_smooth(&ResolutionFan::orthant(triv.basis).unwrap()).ok);
    }

    #[test]
    fn age_two_ray_is_not_crepant() {
        let g = GroupLattice::parse_inline("7:3,3,1").unwrap();
        let rays = vec![
            RationalVector::from_fraction(7, &[6, 6, 2]),
            RationalVector::unit(3, 1),
            RationalVector::unit(3, 2),
        ];
        let f = ResolutionFan::new(g.basis, rays, vec![vec![0, 1, 2]]).unwrap();
        let w = check_crepant(&f);
        assert!(!w.ok);
        assert_eq!(w.violations, vec![(0, "2".to_string())]);
    }

    #[test]
    fn one_seventh_has_seven_smooth_cones() {
        let chart = JuniorChart::new(GroupLattice::parse_inline("7:3,3,1").unwrap()).unwrap();
        let t = triangulate_junior(&chart).unwrap();
        assert_eq!(t.num_cells(), 7);
        assert!(t.certificate().basic.ok && t.certificate().coherent.ok);
        let f = build_fan_in_chart(&chart, &t).unwrap();
        assert!(check_crepant(&f).ok);
        assert!(check_smooth(&f).ok);
        for (i, v) in chart.junior_vertices().unwrap().iter().enumerate() {
            assert_eq!(chart.pull_back(v).unwrap(), RationalVector::unit(3, i));
        }
    }

    #[test]
    fn ray_outside_lattice_is_rejected() {
        let g = GroupLattice::parse_inline("7:3,3,1").unwrap();
        let rays = vec![
            RationalVector::from_fraction(2, &[1, 1, 0]),
            RationalVector::unit(3, 1),
            RationalVector::unit(3, 2),
        ];
        assert!(matches!(
            ResolutionFan::new(g.basis, rays, vec![vec![0, 1, 2]]),
            Err(Error::LatticeInconsistency(_))
        ));
    }
}
