//! Exact rational and integer linear algebra.
//!
//! Everything here is exact: rationals are `BigRational` values in lowest
//! terms and determinants come from fraction-free (Bareiss) elimination.

mod basis;
pub mod int;
mod matrix;
mod points;

pub use basis::{lattice_coordinates, AffineMap, LatticeBasis};
pub use matrix::{det, solve, RationalMatrix};
pub use points::{count_lattice_points_in_simplex, lattice_points_in_simplex};

use std::fmt;
use std::ops::{Add, Index, IndexMut, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Exact rational number, always in lowest terms with positive denominator.
pub type Rational = BigRational;

/// `n / d` as a rational.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// The integer `n` as a rational.
pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Formats a rational as `p` or `p/q`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Converts an integral rational to `i64`.
pub fn rational_to_i64(r: &Rational) -> Option<i64> {
    if r.is_integer() {
        r.numer().to_i64()
    } else {
        None
    }
}

/// Floor of a rational as a big integer.
pub(crate) fn floor_big(r: &Rational) -> BigInt {
    r.numer().div_floor(r.denom())
}

/// Ceiling of a rational as a big integer.
pub(crate) fn ceil_big(r: &Rational) -> BigInt {
    -((-r.numer()).div_floor(r.denom()))
}

/// Least common multiple of all denominators.
pub(crate) fn common_denominator<'a>(values: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    values.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// A vector of exact rationals.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalVector {
    entries: Vec<Rational>,
}

impl RationalVector {
    pub fn new(entries: Vec<Rational>) -> Self {
        Self { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            entries: vec![Rational::zero(); dim],
        }
    }

    /// The unit vector `e_i` (0-based `i`).
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut v = Self::zeros(dim);
        v.entries[i] = Rational::one();
        v
    }

    pub fn from_ints(values: &[i64]) -> Self {
        Self {
            entries: values.iter().map(|&x| int(x)).collect(),
        }
    }

    /// `(1/q)·values`.
    pub fn from_fraction(q: i64, values: &[i64]) -> Self {
        Self {
            entries: values.iter().map(|&x| rat(x, q)).collect(),
        }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<Rational> {
        self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Rational> {
        self.entries.iter()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn dot(&self, other: &Self) -> Rational {
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
    }

    pub fn sum(&self) -> Rational {
        self.entries.iter().fold(Rational::zero(), |acc, x| acc + x)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.iter().all(|x| x.is_integer())
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|x| x.is_zero())
    }

    /// Integer entries, if every entry is an integer fitting in `i64`.
    pub fn to_i64(&self) -> Option<Vec<i64>> {
        self.entries.iter().map(rational_to_i64).collect()
    }

    /// Representative of the class modulo `ℤ^d` with entries in `[0, 1)`.
    pub fn reduce_mod_one(&self) -> Self {
        Self {
            entries: self
                .entries
                .iter()
                .map(|x| x - Rational::from_integer(floor_big(x)))
                .collect(),
        }
    }
}

impl Index<usize> for RationalVector {
    type Output = Rational;
    fn index(&self, i: usize) -> &Rational {
        &self.entries[i]
    }
}

impl IndexMut<usize> for RationalVector {
    fn index_mut(&mut self, i: usize) -> &mut Rational {
        &mut self.entries[i]
    }
}

impl Add for &RationalVector {
    type Output = RationalVector;
    fn add(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        RationalVector::new(self.iter().zip(rhs.iter()).map(|(a, b)| a + b).collect())
    }
}

impl Sub for &RationalVector {
    type Output = RationalVector;
    fn sub(self, rhs: &RationalVector) -> RationalVector {
        assert_eq!(self.dim(), rhs.dim(), "vector dimensions differ");
        RationalVector::new(self.iter().zip(rhs.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Neg for &RationalVector {
    type Output = RationalVector;
    fn neg(self) -> RationalVector {
        RationalVector::new(self.iter().map(|a| -a).collect())
    }
}

impl fmt::Display for RationalVector {
    /// Writes `(a, b, c)`, or `(1/q)(a, b, c)` when a common denominator
    /// makes the entries integral.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let q = common_denominator(self.entries.iter());
        let body = |vals: Vec<String>| vals.join(",");
        if q.is_one() {
            write!(
                f,
                "({})",
                body(self.entries.iter().map(|x| x.numer().to_string()).collect())
            )
        } else {
            let qr = Rational::from_integer(q.clone());
            write!(
                f,
                "(1/{})({})",
                q,
                body(self.entries.iter().map(|x| (x * &qr).numer().to_string()).collect())
            )
        }
    }
}

impl Serialize for RationalVector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.entries.iter().map(fmt_rational).collect();
        v.serialize(s)
    }
}

/// Serializes a rational as a string such as `"3/7"`.
pub fn serialize_rational<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}
