use std::collections::VecDeque;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use rustc_hash::FxHashMap;

use super::{CertifiedTriangulation, TriangulationParts};
use crate::error::{Error, Result};
use crate::exact::{common_denominator, solve, Rational, RationalMatrix, RationalVector};

const MAX_HALVINGS: u32 = 64;

fn barycentric(points: &[Vec<i64>], cell: &[u32], p: &[i64]) -> Result<Vec<Rational>> {
    let p0 = &points[cell[0] as usize];
    let cols: Vec<RationalVector> = cell[1..]
        .iter()
        .map(|&v| {
            RationalVector::from_ints(
                &points[v as usize]
                    .iter()
                    .zip(p0)
                    .map(|(a, b)| a - b)
                    .collect::<Vec<_>>(),
            )
        })
        .collect();
    let rhs = RationalVector::from_ints(&p.iter().zip(p0).map(|(a, b)| a - b).collect::<Vec<_>>());
    let x = solve(&RationalMatrix::from_columns(&cols)?, &rhs)?;
    let mut out = vec![Rational::from_integer(1.into()) - x.sum()];
    out.extend(x.into_entries());
    Ok(out)
}

fn numerators(heights: &[Rational]) -> Result<(Vec<i128>, i128)> {
    let den = common_denominator(heights);
    let d = Rational::from_integer(den.clone());
    let nums = heights
        .iter()
        .map(|h| (h * &d).to_integer().to_i128().ok_or(Error::Overflow("heights")))
        .collect::<Result<Vec<_>>>()?;
    Ok((nums, den.to_i128().ok_or(Error::Overflow("height denominator"))?))
}

fn certify(
    dim: usize,
    points: &[Vec<i64>],
    cells: &[Vec<u32>],
    heights: &[Rational],
    colours: Option<Vec<u8>>,
    ambient: &[Vec<i64>],
) -> Result<CertifiedTriangulation> {
    let (h, den) = numerators(heights)?;
    CertifiedTriangulation::from_parts(TriangulationParts {
        dim,
        points: points.to_vec(),
        cells: cells.to_vec(),
        colours,
        heights: Some(h),
        height_denominator: den,
        ambient: ambient.to_vec(),
    })
}

/// Colours the vertices by walking across walls from the first cell: the
/// vertex entering a cell takes the colour of the one it replaces. `None`
/// if two walks disagree.
pub(crate) fn propagate_colours(dim: usize, nv: usize, cells: &[Vec<u32>]) -> Option<Vec<u8>> {
    let mut by_facet: FxHashMap<Vec<u32>, Vec<(usize, u32)>> = FxHashMap::default();
    for (ci, c) in cells.iter().enumerate() {
        for k in 0..=dim {
            let f: Vec<u32> = c.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
            by_facet.entry(f).or_default().push((ci, c[k]));
        }
    }
    let mut colour: Vec<Option<u8>> = vec![None; nv];
    for (i, &v) in cells.first()?.iter().enumerate() {
        colour[v as usize] = Some(i as u8);
    }
    let mut seen = vec![false; cells.len()];
    seen[0] = true;
    let mut queue = VecDeque::from([0usize]);
    while let Some(ci) = queue.pop_front() {
        let c = &cells[ci];
        for k in 0..=dim {
            let f: Vec<u32> = c.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v).collect();
            for &(cj, opp) in &by_facet[&f] {
                if cj == ci {
                    continue;
                }
                let want = colour[c[k] as usize];
                match colour[opp as usize] {
                    None => colour[opp as usize] = want,
                    Some(x) if Some(x) != want => return None,
                    _ => {}
                }
                if !seen[cj] {
                    seen[cj] = true;
                    queue.push_back(cj);
                }
            }
        }
    }
    colour.into_iter().collect()
}

/// Triangulates `conv(ambient)` by inserting `inner` points one at a time,
/// each time replacing every cell containing the point by its stellar
/// subdivision. The inserted point is lifted by `δ` above the current
/// height function, halving `δ` until the result is coherent. Colours come
/// from [`propagate_colours`] when a consistent colouring exists.
pub fn stellar(ambient: Vec<Vec<i64>>, inner: Vec<Vec<i64>>) -> Result<CertifiedTriangulation> {
    let dim = ambient.len().saturating_sub(1);
    if ambient.iter().any(|a| a.len() != dim) {
        return Err(Error::Shape("ambient simplex must have dim + 1 vertices".into()));
    }
    let mut points = ambient.clone();
    let mut heights = vec![Rational::zero(); dim + 1];
    let mut cells: Vec<Vec<u32>> = vec![(0..=dim as u32).collect()];
    let mut inner = inner;
    inner.sort();
    inner.dedup();
    for p in inner {
        if points.contains(&p) {
            continue;
        }
        let idx = points.len() as u32;
        let mut value = None;
        let mut next = Vec::with_capacity(cells.len() + dim);
        for c in &cells {
            let b = barycentric(&points, c, &p)?;
            if b.iter().any(|x| x.is_negative()) {
                next.push(c.clone());
                continue;
            }
            let h: Rational = c.iter().zip(&b).map(|(&v, x)| x * &heights[v as usize]).sum();
            value.get_or_insert(h);
            for (k, x) in b.iter().enumerate() {
                if x.is_zero() {
                    continue;
                }
                let mut nc = c.clone();
                nc[k] = idx;
                nc.sort_unstable();
                next.push(nc);
            }
        }
        let base = value.ok_or_else(|| Error::Precondition(format!("point {p:?} lies outside the simplex")))?;
        points.push(p);
        cells = next;
        let mut delta = Rational::from_integer(BigInt::from(1));
        let mut halvings = 0;
        loop {
            heights.push(&base + &delta);
            let t = certify(dim, &points, &cells, &heights, None, &ambient)?;
            if t.certificate().coherent.ok {
                break;
            }
            heights.pop();
            halvings += 1;
            if halvings > MAX_HALVINGS {
                return Err(Error::EpsilonSearch(MAX_HALVINGS));
            }
            delta /= Rational::from_integer(BigInt::from(2));
        }
    }
    let colours = propagate_colours(dim, points.len(), &cells);
    certify(dim, &points, &cells, &heights, colours, &ambient)
}
