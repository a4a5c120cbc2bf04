//! Integer lattice helpers: fast small determinants and solves on `i128`,
//! plus echelon forms, kernels and saturation over arbitrary-precision
//! integers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Largest matrix size handled by the stack-allocated fast paths.
pub const FAST_DIM: usize = 12;

/// Integer types the fast elimination runs in.
trait Word: Copy + Ord + TryFrom<i128> + Into<i128> {
    const ZERO: Self;
    const ONE: Self;
    fn mul(self, o: Self) -> Option<Self>;
    fn sub(self, o: Self) -> Option<Self>;
    fn div(self, o: Self) -> Self;
}

macro_rules! word {
    ($t:ty) => {
        impl Word for $t {
            const ZERO: Self = 0;
            const ONE: Self = 1;
            fn mul(self, o: Self) -> Option<Self> {
                self.checked_mul(o)
            }
            fn sub(self, o: Self) -> Option<Self> {
                self.checked_sub(o)
            }
            fn div(self, o: Self) -> Self {
                self / o
            }
        }
    };
}
word!(i64);
word!(i128);

/// Fraction-free elimination of the `n x w` row-major block `m` on its
/// first `n` columns. Returns the sign of the row permutation, or `Some(0)`
/// if the leading block is singular; `None` on overflow.
fn eliminate<T: Word>(m: &mut [T], n: usize, w: usize) -> Option<i8> {
    let mut sign = 1i8;
    let mut prev = T::ONE;
    for k in 0..n {
        if m[k * w + k] == T::ZERO {
            let Some(i) = (k + 1..n).find(|&i| m[i * w + k] != T::ZERO) else {
                return Some(0);
            };
            for j in 0..w {
                m.swap(i * w + j, k * w + j);
            }
            sign = -sign;
        }
        let p = m[k * w + k];
        for i in k + 1..n {
            let f = m[i * w + k];
            for j in k + 1..w {
                let v = m[i * w + j].mul(p)?.sub(f.mul(m[k * w + j])?)?;
                m[i * w + j] = v.div(prev);
            }
            m[i * w + k] = T::ZERO;
        }
        prev = p;
    }
    Some(sign)
}

/// Size of the stack buffers used below `SMALL_DIM`.
const SMALL_DIM: usize = 7;

fn det_in<T: Word>(a: &[i128], n: usize, m: &mut [T]) -> Option<i128> {
    for (x, &y) in m.iter_mut().zip(&a[..n * n]) {
        *x = T::try_from(y).ok()?;
    }
    match eliminate(m, n, n)? {
        0 => Some(0),
        s => {
            let d: i128 = m[n * n - 1].into();
            Some(if s < 0 { -d } else { d })
        }
    }
}

/// Determinant of the `n x n` row-major integer matrix `a`, or `None` on
/// overflow or when `n` exceeds [`FAST_DIM`].
pub fn det_i128(a: &[i128], n: usize) -> Option<i128> {
    if n > FAST_DIM {
        return None;
    }
    if n == 0 {
        return Some(1);
    }
    if n <= SMALL_DIM {
        if let Some(d) = det_in(a, n, &mut [0i64; SMALL_DIM * SMALL_DIM][..n * n]) {
            return Some(d);
        }
    }
    det_in(a, n, &mut [0i128; FAST_DIM * FAST_DIM][..n * n])
}

/// Determinant that falls back to big integers when `i128` overflows.
pub fn det_big(a: &[i64], n: usize) -> BigInt {
    let wide: Vec<i128> = a.iter().map(|&x| x as i128).collect();
    if let Some(d) = det_i128(&wide, n) {
        return BigInt::from(d);
    }
    let mut m: Vec<Vec<BigInt>> = (0..n)
        .map(|i| (0..n).map(|j| BigInt::from(a[i * n + j])).collect())
        .collect();
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
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    sign * prev
}

fn solve_in<T: Word>(a: &[i128], b: &[i128], n: usize, m: &mut [T]) -> Option<(i128, [i128; FAST_DIM])> {
    let w = n + 1;
    for i in 0..n {
        for j in 0..n {
            m[i * w + j] = T::try_from(a[i * n + j]).ok()?;
        }
        m[i * w + n] = T::try_from(b[i]).ok()?;
    }
    eliminate(m, n, w)?;
    let d = m[(n - 1) * w + (n - 1)];
    if d == T::ZERO {
        return None;
    }
    let mut y = [T::ZERO; FAST_DIM];
    for i in (0..n).rev() {
        let mut acc = d.mul(m[i * w + n])?;
        for j in i + 1..n {
            acc = acc.sub(m[i * w + j].mul(y[j])?)?;
        }
        y[i] = acc.div(m[i * w + i]);
    }
    let mut out = [0i128; FAST_DIM];
    for (o, v) in out.iter_mut().zip(&y[..n]) {
        *o = (*v).into();
    }
    Some((d.into(), out))
}

/// Solves `a·x = b` for an `n x n` integer matrix. Returns `(D, y)` with
/// `|D| = |det a|` and `y = D·x` integral (Cramer numerators). `None` if the
/// matrix is singular, too large, or the arithmetic overflows.
pub fn solve_scaled_i128(a: &[i128], b: &[i128], n: usize) -> Option<(i128, [i128; FAST_DIM])> {
    if n > FAST_DIM || n == 0 {
        return None;
    }
    if n <= SMALL_DIM {
        if let Some(r) = solve_in(a, b, n, &mut [0i64; SMALL_DIM * (SMALL_DIM + 1)][..n * (n + 1)]) {
            return Some(r);
        }
    }
    solve_in(a, b, n, &mut [0i128; FAST_DIM * (FAST_DIM + 1)][..n * (n + 1)])
}

/// Row-style Hermite normal form of the lattice spanned by `rows`: a list of
/// independent rows in echelon form with positive pivots and entries above
/// each pivot reduced into `[0, pivot)`.
pub fn hermite_rows(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows
        .iter()
        .filter(|r| r.iter().any(|x| !x.is_zero()))
        .cloned()
        .collect();
    let mut out_rank = 0;
    for col in 0..n {
        if out_rank == m.len() {
            break;
        }
        // Euclid on column `col` over rows out_rank.. until one nonzero remains.
        loop {
            let mut best: Option<usize> = None;
            for i in out_rank..m.len() {
                if !m[i][col].is_zero() && best.is_none_or(|b| m[i][col].abs() < m[b][col].abs()) {
                    best = Some(i);
                }
            }
            let Some(b) = best else { break };
            m.swap(out_rank, b);
            let mut done = true;
            for i in out_rank + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[out_rank][col]);
                for j in col..n {
                    let t = &q * &m[out_rank][j];
                    m[i][j] -= t;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if m[out_rank][col].is_zero() {
            continue;
        }
        if m[out_rank][col].is_negative() {
            for j in col..n {
                m[out_rank][j] = -&m[out_rank][j];
            }
        }
        let piv = m[out_rank][col].clone();
        for i in 0..out_rank {
            let q = m[i][col].div_floor(&piv);
            if !q.is_zero() {
                for j in col..n {
                    let t = &q * &m[out_rank][j];
                    m[i][j] -= t;
                }
            }
        }
        out_rank += 1;
        m.retain(|r| r.iter().any(|x| !x.is_zero()));
    }
    m.truncate(out_rank);
    m
}

/// A ℤ-basis of `{x ∈ ℤ^n : r·x = 0 for every row r}`.
pub fn integer_kernel(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    // Column operations on the matrix, tracked in a unimodular matrix u.
    let mut a: Vec<Vec<BigInt>> = rows.to_vec();
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect();
    let mut pivot_col = 0;
    for r in 0..a.len() {
        if pivot_col == n {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for c in pivot_col..n {
                if !a[r][c].is_zero() && best.is_none_or(|b| a[r][c].abs() < a[r][b].abs()) {
                    best = Some(c);
                }
            }
            let Some(b) = best else { break };
            swap_cols(&mut a, &mut u, pivot_col, b);
            let mut done = true;
            for c in pivot_col + 1..n {
                if a[r][c].is_zero() {
                    continue;
                }
                let q = a[r][c].div_floor(&a[r][pivot_col]);
                col_axpy(&mut a, &mut u, c, pivot_col, &q);
                if !a[r][c].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if !a[r][pivot_col].is_zero() {
            pivot_col += 1;
        }
    }
    (pivot_col..n)
        .map(|c| (0..n).map(|i| u[i][c].clone()).collect())
        .collect()
}

fn swap_cols(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], i: usize, j: usize) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        row.swap(i, j);
    }
}

/// Column `c` -= q · column `p`.
fn col_axpy(a: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], c: usize, p: usize, q: &BigInt) {
    for row in a.iter_mut().chain(u.iter_mut()) {
        let t = q * &row[p];
        row[c] -= t;
    }
}

/// A ℤ-basis of `ℤ^n ∩ span_ℚ(rows)`.
pub fn saturation(rows: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let perp = integer_kernel(rows, n);
    hermite_rows(&integer_kernel(&perp, n), n)
}

/// Index of the lattice spanned by `rows` in its saturation
/// `ℤ^n ∩ span_ℚ(rows)`. An empty span has index 1.
pub fn saturation_index(rows: &[Vec<BigInt>], n: usize) -> BigInt {
    let h = hermite_rows(rows, n);
    if h.is_empty() {
        return BigInt::one();
    }
    let s = saturation(&h, n);
    // Express each HNF row in the saturated basis; the index is |det|.
    let k = h.len();
    let coords = coordinates_in(&s, &h, n);
    let flat: Vec<i64> = coords
        .iter()
        .flatten()
        .map(|x| x.to_i64().expect("small coordinates"))
        .collect();
    det_big(&flat, k).abs()
}

/// Integer coordinates of each row of `vs` in the echelon basis `basis`.
/// Panics if a row is not in the lattice spanned by `basis`.
pub fn coordinates_in(basis: &[Vec<BigInt>], vs: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let pivots: Vec<usize> = basis
        .iter()
        .map(|r| (0..n).find(|&j| !r[j].is_zero()).expect("nonzero basis row"))
        .collect();
    vs.iter()
        .map(|v| {
            let mut rest = v.clone();
            let mut c = vec![BigInt::zero(); basis.len()];
            for (i, row) in basis.iter().enumerate() {
                let p = pivots[i];
                let (q, r) = rest[p].div_rem(&row[p]);
                assert!(r.is_zero(), "vector not in lattice");
                for j in 0..n {
                    let t = &q * &row[j];
                    rest[j] -= t;
                }
                c[i] = q;
            }
            assert!(rest.iter().all(|x| x.is_zero()), "vector not in lattice");
            c
        })
        .collect()
}

/// Converts `i64` rows to big integers.
pub fn big_rows(rows: &[Vec<i64>]) -> Vec<Vec<BigInt>> {
    rows.iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

/// Greatest common divisor of all values (0 for an empty or all-zero input).
pub fn gcd_all(values: impl IntoIterator<Item = i64>) -> i64 {
    values.into_iter().fold(0i64, |g, x| g.gcd(&x))
}
