//! Ehrhart polynomials, δ-vectors and the Stirling transfer matrix, with the
//! cohomology dimensions of crepant resolutions computed along independent
//! routes.

mod cohomology;

pub use cohomology::{
    cohomology_dims, cohomology_with, euler_characteristic, h_vector, inductive_delta, padded_join_delta, star_formula,
    Cohomology, CohomologyOptions, Route, RouteResult,
};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{count_lattice_points_in_simplex, LatticeBasis, Rational, RationalMatrix, RationalVector};

/// Largest polytope dimension accepted by [`ehrhart_bruteforce`].
pub const MAX_EHRHART_DIM: usize = 8;

/// Which Stirling numbers of the first kind fill the transfer matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum StirlingConvention {
    Signed,
    Unsigned,
}

/// Stirling number of the first kind `[n, k]`, signed or unsigned.
pub fn stirling_first(n: usize, k: usize, convention: StirlingConvention) -> BigInt {
    let mut row = vec![BigInt::one()];
    for i in 0..n {
        let f = match convention {
            StirlingConvention::Signed => -BigInt::from(i),
            StirlingConvention::Unsigned => BigInt::from(i),
        };
        let mut next = vec![BigInt::zero(); i + 2];
        for (j, x) in row.iter().enumerate() {
            next[j + 1] += x;
            next[j] += &f * x;
        }
        row = next;
    }
    row.get(k).cloned().unwrap_or_default()
}

fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(n - i) / BigInt::from(i + 1))
}

fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// The `(d+1) × (d+1)` matrix with `a = δ·𝓜ᵀ` for lattice `d`-polytopes,
/// and its inverse.
#[derive(Clone, Debug)]
pub struct TransferMatrix {
    d: usize,
    convention: StirlingConvention,
    entries: RationalMatrix,
    inverse: RationalMatrix,
}

fn transfer_entries(d: usize, convention: StirlingConvention) -> RationalMatrix {
    let n = d + 1;
    let mut m = RationalMatrix::zeros(n, n);
    let scale = Rational::from_integer(factorial(d));
    for i in 0..n {
        for j in 0..n {
            let mut s = BigInt::zero();
            for p in i..=d {
                s += stirling_first(d, p, convention) * binomial(p, i) * BigInt::from(d - j).pow((p - i) as u32);
            }
            m.set(i, j, Rational::from_integer(s) / &scale);
        }
    }
    m
}

/// Coefficients of `C(κ+d, d)` in `κ`, expanded independently of Stirling
/// numbers.
fn basic_simplex_a(d: usize) -> Vec<Rational> {
    let mut poly = vec![Rational::one()];
    for i in 1..=d {
        let mut next = vec![Rational::zero(); poly.len() + 1];
        let c = Rational::from_integer(BigInt::from(i));
        for (k, x) in poly.iter().enumerate() {
            next[k + 1] += x;
            next[k] += x * &c;
        }
        poly = next;
    }
    let f = Rational::from_integer(factorial(d));
    poly.into_iter().map(|x| x / &f).collect()
}

impl TransferMatrix {
    /// Builds `𝓜_d` under both Stirling conventions and keeps the one
    /// whose first column is the a-vector of the basic `d`-simplex.
    pub fn new(d: usize) -> Result<Self> {
        let want = basic_simplex_a(d);
        for convention in [StirlingConvention::Signed, StirlingConvention::Unsigned] {
            let entries = transfer_entries(d, convention);
            if entries.column(0).iter().eq(want.iter()) {
                let inverse = entries.inverse()?;
                if entries.mul(&inverse)? != RationalMatrix::identity(d + 1) {
                    return Err(Error::Convention(format!(
                        "𝓜_{d} times its inverse is not the identity"
                    )));
                }
                return Ok(Self {
                    d,
                    convention,
                    entries,
                    inverse,
                });
            }
        }
        Err(Error::Convention(format!(
            "no Stirling convention reproduces C(κ+{d},{d}) in the first column"
        )))
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn convention(&self) -> StirlingConvention {
        self.convention
    }

    pub fn entries(&self) -> &RationalMatrix {
        &self.entries
    }

    pub fn inverse(&self) -> &RationalMatrix {
        &self.inverse
    }

    /// `a = δ·𝓜ᵀ`.
    pub fn a_from_delta(&self, delta: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(delta.len())?;
        Ok(self
            .entries
            .mul_vec(&RationalVector::new(delta.to_vec()))?
            .into_entries())
    }

    /// `δ = a·(𝓜⁻¹)ᵀ`.
    pub fn delta_from_a(&self, a: &[Rational]) -> Result<Vec<Rational>> {
        self.check_len(a.len())?;
        Ok(self.inverse.mul_vec(&RationalVector::new(a.to_vec()))?.into_entries())
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.d + 1 {
            return Err(Error::Dimension {
                expected: self.d + 1,
                got,
            });
        }
        Ok(())
    }
}

pub fn transfer_matrix(d: usize) -> Result<TransferMatrix> {
    TransferMatrix::new(d)
}

/// `a = δ·𝓜ᵀ` with `𝓜` chosen from the length of `delta`.
pub fn a_from_delta(delta: &[Rational]) -> Result<Vec<Rational>> {
    if delta.is_empty() {
        return Err(Error::Shape("empty δ-vector".into()));
    }
    transfer_matrix(delta.len() - 1)?.a_from_delta(delta)
}

/// Ehrhart data of a lattice polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EhrhartData {
    pub vertices: Vec<RationalVector>,
    pub dim: usize,
    /// `#(κP ∩ N)` for `κ = 0, …, dim`.
    pub counts: Vec<u64>,
    /// Coefficients of `Ehr(P, κ)` from the constant term up.
    pub a: RationalVector,
    pub delta: Vec<u64>,
}

/// Converts an exact vector to nonnegative integers, or names the first
/// offending entry.
pub(crate) fn to_counts(v: &[Rational], what: &str) -> Result<Vec<u64>> {
    v.iter()
        .enumerate()
        .map(|(i, x)| {
            if !x.is_integer() || x.is_negative() {
                return Err(Error::CrossCheck(format!(
                    "{what} entry {i} is {x}, not a nonnegative integer"
                )));
            }
            x.to_integer().to_u64().ok_or(Error::Overflow("δ-vector"))
        })
        .collect()
}

/// Exact a-vector and δ-vector from the counts `Ehr(P, κ)`, `κ = 0..=m`.
/// The a-vector comes from interpolation and the δ-vector from the series
/// `Σ Ehr(P,κ) tᵏ · (1−t)^{m+1}`; the two are checked against each other
/// through `𝓜_m`.
pub fn ehrhart_from_counts(counts: &[u64]) -> Result<(Vec<Rational>, Vec<u64>)> {
    let n = counts.len();
    if n == 0 {
        return Err(Error::Shape("no counts".into()));
    }
    let m = n - 1;
    let mut vander = RationalMatrix::zeros(n, n);
    for k in 0..n {
        let mut p = BigInt::one();
        for j in 0..n {
            vander.set(k, j, Rational::from_integer(p.clone()));
            p *= BigInt::from(k);
        }
    }
    let values = RationalVector::new(counts.iter().map(|&c| Rational::from_integer(c.into())).collect());
    let a = crate::exact::solve(&vander, &values)?.into_entries();
    let mut delta = Vec::with_capacity(n);
    for i in 0..n {
        let mut s = BigInt::zero();
        for k in 0..=i {
            let term = binomial(m + 1, k) * BigInt::from(counts[i - k]);
            if k % 2 == 0 {
                s += term;
            } else {
                s -= term;
            }
        }
        delta.push(Rational::from_integer(s));
    }
    let via = transfer_matrix(m)?.a_from_delta(&delta)?;
    if via != a {
        return Err(Error::CrossCheck(
            "interpolated a-vector disagrees with the series δ-vector".into(),
        ));
    }
    Ok((a, to_counts(&delta, "δ-vector")?))
}

/// Counts `κP ∩ N` for `κ = 1..=m` (with `Ehr(P,0) = 1`) and derives the
/// a- and δ-vectors exactly.
pub fn ehrhart_bruteforce(vertices: &[RationalVector], basis: &LatticeBasis) -> Result<EhrhartData> {
    if vertices.is_empty() {
        return Err(Error::Precondition("empty polytope".into()));
    }
    let dim = vertices.len() - 1;
    if dim > MAX_EHRHART_DIM {
        return Err(Error::BudgetExceeded {
            dim,
            budget: MAX_EHRHART_DIM,
        });
    }
    let mut counts = vec![1u64];
    for k in 1..=dim {
        let kv: Vec<RationalVector> = vertices
            .iter()
            .map(|v| RationalVector::new(v.iter().map(|x| x * Rational::from_integer(k.into())).collect()))
            .collect();
        counts.push(count_lattice_points_in_simplex(&kv, basis)?);
    }
    let (a, delta) = ehrhart_from_counts(&counts)?;
    Ok(EhrhartData {
        vertices: vertices.to_vec(),
        dim,
        counts,
        a: RationalVector::new(a),
        delta,
    })
}
