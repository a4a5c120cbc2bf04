use num_traits::One;

use super::{affine_rank, diffs_big, LatticeSimplex};
use crate::error::{Error, Result};
use crate::exact::int::{gcd_all, saturation, saturation_index};
use crate::exact::{lattice_points_in_simplex, LatticeBasis, RationalVector};

/// Largest dimension [`verify_watanabe`] will search.
pub const MAX_WATANABE_DIM: usize = 4;

/// Whether the lattice points of `conv(vertices)` generate
/// `aff ∩ ℤ^n` as an affine lattice.
pub(crate) fn top_condition(vertices: &[Vec<i64>]) -> Result<bool> {
    let n = vertices[0].len();
    if vertices.len() == 1 {
        return Ok(true);
    }
    let pts = lattice_points_in_simplex(
        &vertices
            .iter()
            .map(|v| RationalVector::from_ints(v))
            .collect::<Vec<_>>(),
        &LatticeBasis::standard(n),
    )?;
    let pts: Vec<Vec<i64>> = pts
        .iter()
        .map(|p| p.to_i64().ok_or(Error::Overflow("lattice point")))
        .collect::<Result<_>>()?;
    Ok(saturation_index(&diffs_big(&pts, &vertices[0]), n).is_one())
}

/// Checks the join hypothesis for two point sets in `ℤ^n`: their affine
/// hulls are skew, and `aff_ℤ(N₁ ∪ N₂)` is all of `aff(P₁ ∪ P₂) ∩ ℤ^n`,
/// where `N_i = aff(P_i) ∩ ℤ^n`. Returns the failed condition.
pub(crate) fn join_hypothesis(p1: &[Vec<i64>], p2: &[Vec<i64>]) -> std::result::Result<(), String> {
    let n = p1[0].len();
    let (d1, d2) = (affine_rank(p1), affine_rank(p2));
    let mut all = p1.to_vec();
    all.extend_from_slice(p2);
    if affine_rank(&all) != d1 + d2 + 1 {
        return Err(format!(
            "affine hulls of dimensions {d1} and {d2} are not skew (union spans {})",
            affine_rank(&all)
        ));
    }
    let mut rows = saturation(&diffs_big(p1, &p1[0]), n);
    rows.extend(saturation(&diffs_big(p2, &p2[0]), n));
    rows.extend(diffs_big(&p2[..1], &p1[0]));
    let idx = saturation_index(&rows, n);
    if !idx.is_one() {
        return Err(format!(
            "integral affine hull has index {idx} in the lattice of the join"
        ));
    }
    Ok(())
}

fn is_watanabe(v: &[Vec<i64>]) -> Result<bool> {
    let m = v.len() - 1;
    if m == 0 {
        return Ok(true);
    }
    if !top_condition(v)? {
        return Ok(false);
    }
    let edges: Vec<Vec<i64>> = v[1..]
        .iter()
        .map(|p| p.iter().zip(&v[0]).map(|(a, b)| a - b).collect())
        .collect();
    let g = gcd_all(edges.iter().flatten().copied());
    for lambda in 2..=g {
        if g % lambda != 0 {
            continue;
        }
        let mut w = vec![v[0].clone()];
        w.extend(
            edges
                .iter()
                .map(|e| e.iter().zip(&v[0]).map(|(x, o)| o + x / lambda).collect()),
        );
        if is_watanabe(&w)? {
            return Ok(true);
        }
    }
    // Joins: vertex 0 always goes to the first part.
    for mask in 1u32..(1 << m) {
        let (mut a, mut b) = (vec![v[0].clone()], Vec::new());
        for (i, p) in v[1..].iter().enumerate() {
            if mask >> i & 1 == 1 {
                b.push(p.clone());
            } else {
                a.push(p.clone());
            }
        }
        if join_hypothesis(&a, &b).is_ok() && is_watanabe(&a)? && is_watanabe(&b)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Exhaustive test of the recursive Watanabe definition: the lattice points
/// must generate the affine lattice of the hull, and the simplex must be a
/// point, a lattice translate of a dilation `λ·s′` (`λ ≥ 2` dividing every
/// edge vector), or a join of two Watanabe simplices satisfying the join
/// hypothesis. The sublattices of a join are forced to be `aff(s_i) ∩ N`.
pub fn verify_watanabe(simplex: &LatticeSimplex, max_dim: usize) -> Result<bool> {
    let budget = max_dim.min(MAX_WATANABE_DIM);
    if simplex.dim() > budget {
        return Err(Error::BudgetExceeded {
            dim: simplex.dim(),
            budget,
        });
    }
    is_watanabe(simplex.integer_coordinates())
}
