use std::collections::VecDeque;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rustc_hash::FxHashSet;
use serde::Serialize;

use crate::datum::{group_generators, weight_lattice_of_forest, SpecialDatum};
use crate::error::{Error, Result};
use crate::exact::int::hermite_rows;
use crate::exact::{fmt_rational, LatticeBasis, Rational, RationalVector};

/// `N_G = ℤ^d + Σ ℤ·g` for a finite diagonal group given by generators
/// `g ∈ ℚ^d`, with a basis of `N_G` and the group order `[N_G : ℤ^d]`.
#[derive(Clone, Debug, Serialize)]
pub struct GroupLattice {
    pub basis: LatticeBasis,
    pub generators: Vec<RationalVector>,
    pub order: u64,
    /// Common denominator of all generators.
    pub denominator: u64,
}

/// An element of `G` represented by its point of the half-open unit cube.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroupElement {
    pub representative: RationalVector,
    /// Coordinate sum of the representative.
    #[serde(serialize_with = "crate::exact::serialize_rational")]
    pub age: Rational,
}

impl GroupElement {
    /// The age as an integer, when it is one.
    pub fn integral_age(&self) -> Option<u64> {
        self.age.is_integer().then(|| self.age.to_integer().to_u64()).flatten()
    }
}

impl std::fmt::Display for GroupElement {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}  age {}", self.representative, fmt_rational(&self.age))
    }
}

fn denominator_of(gens: &[RationalVector]) -> BigInt {
    gens.iter()
        .flat_map(|g| g.iter())
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()))
}

impl GroupLattice {
    /// The lattice of a canonical special datum, with the basis
    /// `{e₁, n₂, …, n_d}` and the generators of its group.
    pub fn from_datum(datum: &SpecialDatum) -> Result<Self> {
        let wl = weight_lattice_of_forest(datum)?;
        let generators = group_generators(datum)?;
        let denominator = denominator_of(&generators)
            .to_u64()
            .ok_or(Error::Overflow("generator denominator"))?;
        Ok(Self {
            basis: wl.basis,
            generators,
            order: wl.order,
            denominator,
        })
    }

    /// The lattice spanned by `ℤ^d` and the given generators, with its
    /// Hermite basis.
    pub fn from_generators(d: usize, generators: Vec<RationalVector>) -> Result<Self> {
        if d == 0 {
            return Err(Error::Shape("dimension must be positive".into()));
        }
        if let Some(g) = generators.iter().find(|g| g.dim() != d) {
            return Err(Error::Dimension {
                expected: d,
                got: g.dim(),
            });
        }
        let w = denominator_of(&generators);
        let mut rows: Vec<Vec<BigInt>> = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { w.clone() } else { BigInt::zero() })
                    .collect()
            })
            .collect();
        for g in &generators {
            rows.push(
                g.iter()
                    .map(|x| (x * Rational::from_integer(w.clone())).to_integer())
                    .collect(),
            );
        }
        let h = hermite_rows(&rows, d);
        let wr = Rational::from_integer(w.clone());
        let vectors: Vec<RationalVector> = h
            .iter()
            .map(|r| RationalVector::new(r.iter().map(|x| Rational::from_integer(x.clone()) / &wr).collect()))
            .collect();
        let basis = LatticeBasis::new(vectors, "N_G")?;
        let inv = Rational::one() / basis.determinant().abs();
        let order = inv.to_integer().to_u64().ok_or(Error::Overflow("group order"))?;
        Ok(Self {
            basis,
            generators,
            order,
            denominator: w.to_u64().ok_or(Error::Overflow("generator denominator"))?,
        })
    }

    /// Parses `r:a₁,…,a_d` (the generator `(1/r)(a₁,…,a_d)`), several
    /// separated by `;`.
    pub fn parse_inline(text: &str) -> Result<Self> {
        let mut gens = Vec::new();
        let mut column = 1;
        for part in text.split(';') {
            let err = |message: String| Error::Parse {
                line: 1,
                column,
                message,
            };
            let (r, body) = part
                .split_once(':')
                .ok_or_else(|| err(format!("expected `r:a1,...,ad`, found `{}`", part.trim())))?;
            let r: i64 = r
                .trim()
                .parse()
                .map_err(|_| err(format!("bad denominator `{}`", r.trim())))?;
            if r <= 0 {
                return Err(err("denominator must be positive".into()));
            }
            let entries = body
                .split(',')
                .map(|a| {
                    a.trim()
                        .parse::<i64>()
                        .map_err(|_| err(format!("bad entry `{}`", a.trim())))
                })
                .collect::<Result<Vec<_>>>()?;
            gens.push(RationalVector::from_fraction(r, &entries));
            column += part.chars().count() + 1;
        }
        let d = gens[0].dim();
        if gens.iter().any(|g| g.dim() != d) {
            return Err(Error::Parse {
                line: 1,
                column: 1,
                message: "generators have different lengths".into(),
            });
        }
        Self::from_generators(d, gens)
    }

    pub fn d(&self) -> usize {
        self.basis.dim()
    }

    /// Elements of `G` as representatives in `[0,1)^d`, found by closing
    /// `{0}` under the generators modulo `ℤ^d`, in breadth-first order.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        let d = self.d();
        let w = self.denominator as i128;
        let scaled: Vec<Vec<i128>> = self
            .generators
            .iter()
            .map(|g| {
                g.iter()
                    .map(|x| {
                        (x * Rational::from_integer(BigInt::from(w)))
                            .to_integer()
                            .to_i128()
                            .map(|v| v.rem_euclid(w))
                            .ok_or(Error::Overflow("group element"))
                    })
                    .collect()
            })
            .collect::<Result<_>>()?;
        let zero = vec![0i128; d];
        let mut seen: FxHashSet<Vec<i128>> = FxHashSet::default();
        let mut order = Vec::new();
        let mut queue = VecDeque::from([zero.clone()]);
        seen.insert(zero);
        while let Some(x) = queue.pop_front() {
            for g in &scaled {
                let y: Vec<i128> = x.iter().zip(g).map(|(a, b)| (a + b) % w).collect();
                if seen.insert(y.clone()) {
                    if seen.len() as u64 > self.order {
                        return Err(Error::LatticeInconsistency(format!(
                            "closure exceeds the group order {}",
                            self.order
                        )));
                    }
                    queue.push_back(y);
                }
            }
            order.push(x);
        }
        if order.len() as u64 != self.order {
            return Err(Error::LatticeInconsistency(format!(
                "closure has {} elements but the lattice index is {}",
                order.len(),
                self.order
            )));
        }
        let wb = BigInt::from(w);
        Ok(order
            .into_iter()
            .map(|x| {
                let rep = RationalVector::new(x.iter().map(|&v| Rational::new(v.into(), wb.clone())).collect());
                let age = rep.sum();
                GroupElement {
                    representative: rep,
                    age,
                }
            })
            .collect())
    }

    /// Whether every generator has integral coordinate sum, i.e. `G ⊂ SL`.
    pub fn is_gorenstein(&self) -> bool {
        self.generators.iter().all(|g| g.sum().is_integer())
    }

    /// Lattice points of the junior simplex `conv{e₁, …, e_d}` in `N_G`
    /// other than its vertices.
    pub fn exceptional_divisors(&self) -> Result<Vec<RationalVector>> {
        let d = self.d();
        let vertices: Vec<RationalVector> = (0..d).map(|i| RationalVector::unit(d, i)).collect();
        let pts = crate::exact::lattice_points_in_simplex(&vertices, &self.basis)?;
        Ok(pts.into_iter().filter(|p| !vertices.contains(p)).collect())
    }
}

/// Whether every group generator of the datum has integral coordinate
/// sum. Always true for valid data; checked rather than assumed.
pub fn check_gorenstein(datum: &SpecialDatum) -> Result<bool> {
    Ok(group_generators(datum)?.iter().all(|g| g.sum().is_integer()))
}

/// Ages of nonzero elements must be at least 1 on Gorenstein data.
pub fn minimal_nonzero_age(elements: &[GroupElement]) -> Option<Rational> {
    elements
        .iter()
        .filter(|e| !e.representative.is_zero())
        .map(|e| e.age.clone())
        .min()
        .filter(|a| !a.is_negative())
}
