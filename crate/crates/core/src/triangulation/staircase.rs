use rustc_hash::FxHashMap;

use super::CertifiedTriangulation;
use crate::error::{Error, Result};

fn heaviside(s: i128) -> i128 {
    i128::from(s > 0)
}

/// `f(t) = Σ_k (|t| − k)·H(|t| − k)`, the sum running over the finite
/// window `0 ≤ k < |t|` where the step function is nonzero. At integers
/// this equals `|t|(|t|+1)/2`.
fn heaviside_sum(t: i64) -> i128 {
    let n = (t as i128).abs();
    (0..n).map(|k| (n - k) * heaviside(n - k)).sum()
}

/// The height `ψ̄(x) = −Σ_{0 ≤ i < j ≤ d} f(x_j − x_i)` with `x₀ = 0`.
/// It is strictly concave across every wall of the staircase
/// triangulation.
pub fn staircase_height(x: &[i64]) -> i128 {
    let mut total = 0i128;
    for j in 0..x.len() {
        total += heaviside_sum(x[j]);
        for i in 0..j {
            total += heaviside_sum(x[j] - x[i]);
        }
    }
    -total
}

/// Nonincreasing sequences `λ ≥ x₁ ≥ … ≥ x_d ≥ 0`.
pub(crate) fn monotone_points(d: usize, top: i64) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(d);
    fn go(d: usize, bound: i64, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for v in (0..=bound).rev() {
            cur.push(v);
            go(d, v, cur, out);
            cur.pop();
        }
    }
    go(d, top, &mut cur, &mut out);
    out
}

/// Orders `θ` compatible with `μ`: index `i` precedes `i + 1` whenever
/// `μ_i = μ_{i+1}`.
fn admissible_orders(mu: &[i64]) -> Vec<Vec<usize>> {
    let d = mu.len();
    let mut out = Vec::new();
    let mut used = vec![false; d];
    let mut cur = Vec::with_capacity(d);
    fn go(mu: &[i64], used: &mut [bool], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let d = mu.len();
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for i in 0..d {
            if used[i] || (i > 0 && mu[i - 1] == mu[i] && !used[i - 1]) {
                continue;
            }
            used[i] = true;
            cur.push(i);
            go(mu, used, cur, out);
            cur.pop();
            used[i] = false;
        }
    }
    go(mu, &mut used, &mut cur, &mut out);
    out
}

/// Raw staircase data: points (as coordinate vectors) and cells (sorted
/// index tuples, `λ^d` of them).
pub(crate) fn staircase_cells(d: usize, lambda: u64) -> Result<(Vec<Vec<i64>>, Vec<Vec<u32>>)> {
    if lambda == 0 {
        return Err(Error::EmptyDilation);
    }
    let l = i64::try_from(lambda).map_err(|_| Error::Overflow("dilation factor"))?;
    let points = monotone_points(d, l);
    let index: FxHashMap<&[i64], u32> = points
        .iter()
        .enumerate()
        .map(|(i, p)| (p.as_slice(), i as u32))
        .collect();
    let mut cells = Vec::new();
    for mu in monotone_points(d, l - 1) {
        for theta in admissible_orders(&mu) {
            let mut x = mu.clone();
            let mut cell = Vec::with_capacity(d + 1);
            cell.push(index[x.as_slice()]);
            for &i in &theta {
                x[i] += 1;
                cell.push(index[x.as_slice()]);
            }
            cell.sort_unstable();
            cells.push(cell);
        }
    }
    Ok((points, cells))
}

/// The staircase triangulation `𝔗[d;λ]` of `λ·conv{0, e₁, e₁+e₂, …, e₁+⋯+e_d}`
/// with colours `Σx mod (d+1)` and heights [`staircase_height`].
pub fn staircase(d: usize, lambda: u64) -> Result<CertifiedTriangulation> {
    if d == 0 {
        return Err(Error::Shape("staircase dimension must be at least 1".into()));
    }
    let (points, cells) = staircase_cells(d, lambda)?;
    let l = lambda as i64;
    let colours = points
        .iter()
        .map(|p| (p.iter().sum::<i64>().rem_euclid(d as i64 + 1)) as u8)
        .collect();
    let heights = points.iter().map(|p| staircase_height(p)).collect();
    let ambient = (0..=d)
        .map(|c| (0..d).map(|i| if i < c { l } else { 0 }).collect())
        .collect();
    CertifiedTriangulation::assemble(
        d,
        points.into_iter().flatten().collect(),
        cells.into_iter().flatten().collect(),
        Some(colours),
        Some(heights),
        1,
        ambient,
        Vec::new(),
    )
}
