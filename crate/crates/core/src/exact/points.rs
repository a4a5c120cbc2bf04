use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{ceil_big, common_denominator, floor_big, LatticeBasis, Rational, RationalMatrix, RationalVector};
use crate::error::{Error, Result};

/// A simplex rewritten so that lattice points can be scanned one coordinate
/// at a time. With `q = U·p` for a unimodular `U`, a point `p = c₀ + E·t` of
/// the simplex satisfies `D·q = A + L·t` where `L` is upper triangular with
/// positive diagonal in its first `m` rows and zero below.
struct Scan {
    m: usize,
    n: usize,
    den: BigInt,
    a: Vec<BigInt>,
    l: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
}

impl Scan {
    fn new(vertices: &[RationalVector], basis: &LatticeBasis) -> Result<Option<Self>> {
        let n = basis.dim();
        let coords = vertices
            .iter()
            .map(|v| {
                if v.dim() != n {
                    return Err(Error::Dimension {
                        expected: n,
                        got: v.dim(),
                    });
                }
                basis.coordinates(v)
            })
            .collect::<Result<Vec<_>>>()?;
        let m = coords.len() - 1;
        let den = common_denominator(coords.iter().flat_map(|c| c.iter()));
        let dr = Rational::from_integer(den.clone());
        let scaled = |r: &Rational| (r * &dr).to_integer();
        // Augmented rows [E' | v' | I_n], row-reduced on the first m columns.
        let mut rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r: Vec<BigInt> = (1..=m).map(|j| scaled(&(&coords[j][i] - &coords[0][i]))).collect();
                r.push(scaled(&coords[0][i]));
                r.extend((0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }));
                r
            })
            .collect();
        for col in 0..m {
            loop {
                let best = (col..n)
                    .filter(|&i| !rows[i][col].is_zero())
                    .min_by(|&a, &b| rows[a][col].abs().cmp(&rows[b][col].abs()));
                let Some(b) = best else {
                    return Err(Error::Precondition("simplex vertices are affinely dependent".into()));
                };
                rows.swap(col, b);
                let mut done = true;
                for i in col + 1..n {
                    if rows[i][col].is_zero() {
                        continue;
                    }
                    let q = rows[i][col].div_floor(&rows[col][col]);
                    let pivot = rows[col].clone();
                    for (x, p) in rows[i].iter_mut().zip(&pivot) {
                        *x -= &q * p;
                    }
                    done &= rows[i][col].is_zero();
                }
                if done {
                    break;
                }
            }
            if rows[col][col].is_negative() {
                for x in rows[col].iter_mut() {
                    *x = -&*x;
                }
            }
        }
        let a: Vec<BigInt> = rows.iter().map(|r| r[m].clone()).collect();
        // Coordinates beyond the affine hull are fixed; they must be integral.
        if (m..n).any(|i| !a[i].is_multiple_of(&den)) {
            return Ok(None);
        }
        Ok(Some(Self {
            m,
            n,
            l: rows.iter().map(|r| r[..m].to_vec()).collect(),
            u: rows.iter().map(|r| r[m + 1..].to_vec()).collect(),
            den,
            a,
        }))
    }

    /// Visits every integral `q`; at the innermost level `leaf` receives the
    /// prefix `q[1..]` and the inclusive range of `q[0]`.
    fn walk(&self, leaf: &mut dyn FnMut(&[BigInt], &BigInt, &BigInt)) {
        let mut q: Vec<BigInt> = vec![BigInt::zero(); self.n];
        for i in self.m..self.n {
            q[i] = &self.a[i] / &self.den;
        }
        if self.m == 0 {
            leaf(&q, &BigInt::zero(), &BigInt::zero());
            return;
        }
        let mut t: Vec<Rational> = vec![Rational::zero(); self.m];
        self.level(self.m - 1, &mut q, &mut t, &Rational::zero(), leaf);
    }

    fn level(
        &self,
        i: usize,
        q: &mut Vec<BigInt>,
        t: &mut Vec<Rational>,
        used: &Rational,
        leaf: &mut dyn FnMut(&[BigInt], &BigInt, &BigInt),
    ) {
        let mut r = Rational::from_integer(self.a[i].clone());
        for j in i + 1..self.m {
            r += Rational::from_integer(self.l[i][j].clone()) * &t[j];
        }
        let lii = Rational::from_integer(self.l[i][i].clone());
        let den = Rational::from_integer(self.den.clone());
        let slack = Rational::one() - used;
        let lo = ceil_big(&(&r / &den));
        let hi = floor_big(&((&r + &lii * &slack) / &den));
        if lo > hi {
            return;
        }
        if i == 0 {
            leaf(q, &lo, &hi);
            return;
        }
        let mut qi = lo;
        while qi <= hi {
            let ti = (Rational::from_integer(&qi * &self.den) - &r) / &lii;
            let next_used = used + &ti;
            t[i] = ti;
            q[i] = qi.clone();
            self.level(i - 1, q, t, &next_used, leaf);
            qi += 1;
        }
        t[i] = Rational::zero();
    }
}

/// All lattice points of the closed simplex spanned by `vertices`, in
/// lexicographic order of their ambient coordinates.
///
/// The scan runs over lattice coordinates after a unimodular change of
/// basis that makes the edge matrix triangular, so each coordinate gets an
/// exact interval given the previous ones. The vertices must be affinely
/// independent.
pub fn lattice_points_in_simplex(vertices: &[RationalVector], basis: &LatticeBasis) -> Result<Vec<RationalVector>> {
    if vertices.is_empty() {
        return Ok(Vec::new());
    }
    let Some(scan) = Scan::new(vertices, basis)? else {
        return Ok(Vec::new());
    };
    let u = RationalMatrix::from_rows(
        &scan
            .u
            .iter()
            .map(|r| RationalVector::new(r.iter().cloned().map(Rational::from_integer).collect()))
            .collect::<Vec<_>>(),
    )?;
    let u_inv = u.inverse()?;
    let mut out = Vec::new();
    let mut emit = |q: &[BigInt], lo: &BigInt, hi: &BigInt| {
        let mut q: Vec<Rational> = q.iter().cloned().map(Rational::from_integer).collect();
        let mut q0 = lo.clone();
        while &q0 <= hi {
            q[0] = Rational::from_integer(q0.clone());
            let p = u_inv
                .mul_vec(&RationalVector::new(q.clone()))
                .and_then(|c| basis.point(&c))
                .expect("dimensions agree");
            out.push(p);
            q0 += 1;
        }
    };
    scan.walk(&mut emit);
    out.sort();
    Ok(out)
}

/// Number of lattice points of the closed simplex, without listing them.
pub fn count_lattice_points_in_simplex(vertices: &[RationalVector], basis: &LatticeBasis) -> Result<u64> {
    if vertices.is_empty() {
        return Ok(0);
    }
    let Some(scan) = Scan::new(vertices, basis)? else {
        return Ok(0);
    };
    let mut total = BigInt::zero();
    scan.walk(&mut |_, lo, hi| total += hi - lo + 1);
    total.to_u64().ok_or(Error::Overflow("lattice point count"))
}
