use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{common_denominator, Rational, RationalVector};
use crate::error::{Error, Result};

/// Dense matrix of exact rationals, stored row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from its rows; all rows must have the same length.
    pub fn from_rows(rows: &[RationalVector]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.dim());
        if let Some(bad) = rows.iter().find(|r| r.dim() != cols) {
            return Err(Error::Shape(format!(
                "ragged rows: expected length {cols}, found {}",
                bad.dim()
            )));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.iter().flat_map(|r| r.iter().cloned()).collect(),
        })
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[RationalVector]) -> Result<Self> {
        Ok(Self::from_rows(cols)?.transpose())
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<_> = rows.iter().map(|r| RationalVector::from_ints(r)).collect();
        Self::from_rows(&rows)
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rational) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> RationalVector {
        RationalVector::new(self.data[i * self.cols..(i + 1) * self.cols].to_vec())
    }

    pub fn column(&self, j: usize) -> RationalVector {
        RationalVector::new((0..self.rows).map(|i| self.get(i, j).clone()).collect())
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = &out.data[idx] + a * other.get(k, j);
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &RationalVector) -> Result<RationalVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension {
                expected: self.cols,
                got: v.dim(),
            });
        }
        Ok(RationalVector::new(
            (0..self.rows).map(|i| self.row(i).dot(v)).collect(),
        ))
    }

    pub fn is_integral(&self) -> bool {
        self.data.iter().all(|x| x.is_integer())
    }

    pub fn det(&self) -> Result<Rational> {
        det(self)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.rows;
        if n != self.cols {
            return Err(Error::Shape("inverse of a non-square matrix".into()));
        }
        let cols = solve_many(self, &Self::identity(n))?;
        Ok(cols)
    }

    /// Integer rows scaled by the lcm of each row's denominators, together
    /// with the product of the scale factors.
    fn integer_rows(&self) -> (Vec<Vec<BigInt>>, BigInt) {
        let mut scale = BigInt::one();
        let rows = (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                let q = common_denominator(row.iter());
                scale *= &q;
                let qr = Rational::from_integer(q);
                row.iter().map(|x| (x * &qr).to_integer()).collect()
            })
            .collect();
        (rows, scale)
    }
}

/// Fraction-free elimination of `m` (square part `n` columns) in place.
/// Returns the determinant of the leading `n x n` block, or zero if singular.
/// Extra columns are carried along.
fn bareiss(m: &mut [Vec<BigInt>], n: usize) -> BigInt {
    let width = m.first().map_or(0, |r| r.len());
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..width {
                let v = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
                m[i][j] = v;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * prev
}

/// Exact determinant via fraction-free Bareiss elimination.
pub fn det(m: &RationalMatrix) -> Result<Rational> {
    let (r, c) = m.shape();
    if r != c {
        return Err(Error::Shape(format!("determinant of a {r}x{c} matrix")));
    }
    if r == 0 {
        return Ok(Rational::one());
    }
    let (mut rows, scale) = m.integer_rows();
    let d = bareiss(&mut rows, r);
    Ok(Rational::new(d, scale))
}

fn solve_many(m: &RationalMatrix, b: &RationalMatrix) -> Result<RationalMatrix> {
    let (n, c) = m.shape();
    if n != c {
        return Err(Error::Shape(format!("solve with a {n}x{c} matrix")));
    }
    if b.rows != n {
        return Err(Error::Dimension {
            expected: n,
            got: b.rows,
        });
    }
    let k = b.cols;
    // Scale each augmented row to integers; the solution is unchanged.
    let mut aug = RationalMatrix::zeros(n, n + k);
    for i in 0..n {
        for j in 0..n {
            aug.set(i, j, m.get(i, j).clone());
        }
        for j in 0..k {
            aug.set(i, n + j, b.get(i, j).clone());
        }
    }
    let (mut rows, _) = aug.integer_rows();
    if bareiss(&mut rows, n).is_zero() {
        return Err(Error::Singular);
    }
    let mut x = RationalMatrix::zeros(n, k);
    for col in 0..k {
        for i in (0..n).rev() {
            let mut acc = Rational::from_integer(rows[i][n + col].clone());
            for j in i + 1..n {
                acc -= Rational::from_integer(rows[i][j].clone()) * x.get(j, col);
            }
            x.set(i, col, acc / Rational::from_integer(rows[i][i].clone()));
        }
    }
    Ok(x)
}

/// Exact solution of `m·x = b`.
pub fn solve(m: &RationalMatrix, b: &RationalVector) -> Result<RationalVector> {
    let rhs = RationalMatrix::from_columns(std::slice::from_ref(b))?;
    Ok(solve_many(m, &rhs)?.column(0))
}
