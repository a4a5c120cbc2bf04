use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use rustc_hash::FxHashMap;
use serde::{Serialize, Serializer};

use super::CertifiedTriangulation;
use crate::error::{Error, Result};
use crate::exact::int::{det_i128, solve_scaled_i128, FAST_DIM};
use crate::exact::{fmt_rational, solve, Rational, RationalMatrix, RationalVector};

/// Per-cell determinants `|det(n₁ − n₀, …, n_k − n₀)|`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BasicWitness {
    pub ok: bool,
    #[serde(skip)]
    pub determinants: Vec<u64>,
    pub max_determinant: u64,
    pub non_basic_cells: usize,
}

/// Whether the cells tile the ambient simplex: every facet is shared by
/// two cells lying on opposite sides or lies on the boundary, and the
/// volumes add up.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TilingWitness {
    pub ok: bool,
    pub walls: usize,
    pub boundary_facets: usize,
    pub volume_sum: u128,
    pub ambient_volume: u128,
    pub problem: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CoherenceWitness {
    pub ok: bool,
    pub tiling: TilingWitness,
    /// Smallest wall-crossing margin `h₁(v) − height(v)`.
    #[serde(serialize_with = "opt_rational")]
    pub min_margin: Option<Rational>,
    pub failing_walls: usize,
    /// Up to eight failing walls as (wall vertices, margin).
    #[serde(serialize_with = "wall_list")]
    pub examples: Vec<(Vec<u32>, Rational)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct BalanceWitness {
    pub ok: bool,
    /// Every edge joins vertices of different colours.
    pub edges_distinct: bool,
    /// Every maximal cell carries all `dim + 1` colours.
    pub cells_rainbow: bool,
    /// Up to eight offending cell indices.
    pub bad_cells: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub basic: BasicWitness,
    pub coherent: CoherenceWitness,
    pub balanced: BalanceWitness,
    pub overall: bool,
}

fn opt_rational<S: Serializer>(r: &Option<Rational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.serialize_some(&fmt_rational(r)),
        None => s.serialize_none(),
    }
}

fn wall_list<S: Serializer>(w: &[(Vec<u32>, Rational)], s: S) -> std::result::Result<S::Ok, S::Error> {
    let v: Vec<(&Vec<u32>, String)> = w.iter().map(|(a, r)| (a, fmt_rational(r))).collect();
    v.serialize(s)
}

/// Edge matrix of cell `c` (rows = coordinates, columns = edges) as `i128`.
fn edge_matrix(t: &CertifiedTriangulation, c: &[u32], out: &mut [i128]) {
    let m = t.dim;
    let p0 = t.point(c[0] as usize);
    for (j, &v) in c[1..].iter().enumerate() {
        let p = t.point(v as usize);
        for r in 0..m {
            out[r * m + j] = (p[r] - p0[r]) as i128;
        }
    }
}

fn abs_det(t: &CertifiedTriangulation, c: &[u32], buf: &mut [i128]) -> BigInt {
    let m = t.dim;
    edge_matrix(t, c, buf);
    match det_i128(&buf[..m * m], m) {
        Some(d) => BigInt::from(d.abs()),
        None => {
            let flat: Vec<i64> = buf[..m * m].iter().map(|&x| x as i64).collect();
            crate::exact::int::det_big(&flat, m).abs()
        }
    }
}

fn determinants(t: &CertifiedTriangulation) -> Vec<u64> {
    let mut buf = vec![0i128; t.dim * t.dim];
    t.cells()
        .map(|c| {
            edge_matrix(t, c, &mut buf);
            match det_i128(&buf, t.dim) {
                Some(d) => u64::try_from(d.unsigned_abs()).unwrap_or(u64::MAX),
                None => u64::try_from(abs_det(t, c, &mut buf)).unwrap_or(u64::MAX),
            }
        })
        .collect()
}

/// Computes every cell determinant; basic iff all equal 1.
pub fn verify_basic(t: &CertifiedTriangulation) -> BasicWitness {
    let determinants = determinants(t);
    let non_basic_cells = determinants.iter().filter(|&&d| d != 1).count();
    BasicWitness {
        ok: non_basic_cells == 0 && !determinants.is_empty(),
        max_determinant: determinants.iter().copied().max().unwrap_or(0),
        non_basic_cells,
        determinants,
    }
}

/// Checks every cell for distinct colours along edges and for a full set
/// of colours.
pub fn verify_balanced(t: &CertifiedTriangulation) -> Result<BalanceWitness> {
    let colours = t
        .colours()
        .ok_or_else(|| Error::IncompleteCertificate("colours missing".into()))?;
    let m = t.dim;
    let full: u64 = if m + 1 >= 64 { u64::MAX } else { (1u64 << (m + 1)) - 1 };
    let (mut edges_distinct, mut cells_rainbow) = (true, true);
    let mut bad = Vec::new();
    for (i, c) in t.cells().enumerate() {
        let mut edge_ok = true;
        for a in 0..c.len() {
            for b in a + 1..c.len() {
                edge_ok &= colours[c[a] as usize] != colours[c[b] as usize];
            }
        }
        let mask = c.iter().fold(0u64, |m, &v| {
            let col = colours[v as usize] as u32;
            if col < 64 {
                m | 1 << col
            } else {
                m
            }
        });
        let rainbow = mask == full;
        edges_distinct &= edge_ok;
        cells_rainbow &= rainbow;
        if (!edge_ok || !rainbow) && bad.len() < 8 {
            bad.push(i);
        }
    }
    Ok(BalanceWitness {
        ok: edges_distinct && cells_rainbow,
        edges_distinct,
        cells_rainbow,
        bad_cells: bad,
    })
}

/// A wall-crossing margin in height-numerator units.
#[derive(Clone, Debug)]
enum MarginValue {
    /// `num / den` with `den > 0`.
    Fast {
        num: i128,
        den: i128,
    },
    Exact(Rational),
}

impl MarginValue {
    fn to_rational(&self) -> Rational {
        match self {
            MarginValue::Fast { num, den } => Rational::new(BigInt::from(*num), BigInt::from(*den)),
            MarginValue::Exact(r) => r.clone(),
        }
    }

    fn is_positive(&self) -> bool {
        match self {
            MarginValue::Fast { num, .. } => *num > 0,
            MarginValue::Exact(r) => r.is_positive(),
        }
    }

    fn less_than(&self, other: &MarginValue) -> bool {
        match (self, other) {
            (MarginValue::Fast { num: a, den: b }, MarginValue::Fast { num: c, den: d }) => {
                match (a.checked_mul(*d), c.checked_mul(*b)) {
                    (Some(x), Some(y)) => x < y,
                    _ => self.to_rational() < other.to_rational(),
                }
            }
            _ => self.to_rational() < other.to_rational(),
        }
    }
}

/// Barycentric coordinates of a point `b` with respect to a cell `s`.
enum Bary {
    /// Coefficients `y_i / den` (one per vertex of `s`), `den > 0`.
    Fast {
        den: i128,
        y: [i128; FAST_DIM + 1],
    },
    Exact(Vec<Rational>),
}

impl Bary {
    fn of(t: &CertifiedTriangulation, s: &[u32], b: u32, buf: &mut [i128]) -> Result<Bary> {
        let m = t.dim;
        if m <= FAST_DIM {
            edge_matrix(t, s, buf);
            let p0 = t.point(s[0] as usize);
            let pb = t.point(b as usize);
            let mut rhs = [0i128; FAST_DIM];
            for r in 0..m {
                rhs[r] = (pb[r] - p0[r]) as i128;
            }
            if let Some((d, y)) = solve_scaled_i128(&buf[..m * m], &rhs[..m], m) {
                let sign = d.signum();
                let rest: Option<i128> = y[..m].iter().try_fold(d, |acc, &x| acc.checked_sub(x));
                if let Some(y0) = rest {
                    let mut all = [0i128; FAST_DIM + 1];
                    all[0] = y0 * sign;
                    for i in 0..m {
                        all[i + 1] = y[i] * sign;
                    }
                    return Ok(Bary::Fast { den: d.abs(), y: all });
                }
            }
        }
        Ok(Bary::Exact(barycentric_exact(t, s, b)?))
    }

    fn side(&self, pos: usize) -> Ordering {
        match self {
            Bary::Fast { y, .. } => y[pos].cmp(&0),
            Bary::Exact(c) => c[pos].cmp(&Rational::zero()),
        }
    }

    /// `h_s(b) − h(b)` where `h_s` is the affine function agreeing with `h`
    /// on the vertices of `s`.
    fn margin(&self, s: &[u32], b: u32, h: &[i128]) -> MarginValue {
        if let Bary::Fast { den, y } = self {
            let mut num = Some(0i128);
            for (i, &v) in s.iter().enumerate() {
                num = num.and_then(|n| n.checked_add(y[i].checked_mul(h[v as usize])?));
            }
            if let Some(n) = num.and_then(|n| n.checked_sub(den.checked_mul(h[b as usize])?)) {
                return MarginValue::Fast { num: n, den: *den };
            }
        }
        let coeffs: Vec<Rational> = match self {
            Bary::Fast { den, y } => y[..s.len()]
                .iter()
                .map(|&x| Rational::new(x.into(), (*den).into()))
                .collect(),
            Bary::Exact(c) => c.clone(),
        };
        let hv = |v: u32| Rational::from_integer(BigInt::from(h[v as usize]));
        let hs: Rational = s.iter().zip(&coeffs).map(|(&v, c)| c * hv(v)).sum();
        MarginValue::Exact(hs - hv(b))
    }
}

/// Exact barycentric coordinates of `b` with respect to `s`.
fn barycentric_exact(t: &CertifiedTriangulation, s: &[u32], b: u32) -> Result<Vec<Rational>> {
    let m = t.dim;
    let p0 = t.point(s[0] as usize);
    let cols: Vec<RationalVector> = s[1..]
        .iter()
        .map(|&v| {
            let p = t.point(v as usize);
            RationalVector::from_ints(&(0..m).map(|r| p[r] - p0[r]).collect::<Vec<_>>())
        })
        .collect();
    let pb = t.point(b as usize);
    let rhs = RationalVector::from_ints(&(0..m).map(|r| pb[r] - p0[r]).collect::<Vec<_>>());
    let x = solve(&RationalMatrix::from_columns(&cols)?, &rhs)?;
    let mut out = vec![Rational::from_integer(1.into()) - x.sum()];
    out.extend(x.into_entries());
    Ok(out)
}

enum FacetMap {
    Packed {
        bits: u32,
        map: FxHashMap<u128, (u32, u32)>,
    },
    Wide(FxHashMap<Vec<u32>, (u32, u32)>),
}

impl FacetMap {
    fn new(m: usize, nv: usize) -> Self {
        let bits = (usize::BITS - nv.max(2).saturating_sub(1).leading_zeros()).max(1);
        if (bits as usize) * m <= 128 {
            FacetMap::Packed {
                bits,
                map: FxHashMap::default(),
            }
        } else {
            FacetMap::Wide(FxHashMap::default())
        }
    }

    /// Removes and returns a matching entry, or inserts this one.
    fn toggle(&mut self, facet: &[u32], value: (u32, u32)) -> Option<(u32, u32)> {
        match self {
            FacetMap::Packed { bits, map } => {
                let key = facet.iter().fold(0u128, |k, &v| (k << *bits) | v as u128);
                match map.remove(&key) {
                    Some(x) => Some(x),
                    None => {
                        map.insert(key, value);
                        None
                    }
                }
            }
            FacetMap::Wide(map) => match map.remove(facet) {
                Some(x) => Some(x),
                None => {
                    map.insert(facet.to_vec(), value);
                    None
                }
            },
        }
    }

    fn remaining(self) -> Vec<(u32, u32)> {
        match self {
            FacetMap::Packed { map, .. } => map.into_values().collect(),
            FacetMap::Wide(map) => map.into_values().collect(),
        }
    }
}

/// Calls `f(wall, s₁, position of the opposite vertex in s₁, cell index of
/// s₂, opposite vertex of s₂)` for every facet shared by two cells and
/// returns the unmatched facets as `(cell, opposite vertex)`.
fn walk_walls(
    t: &CertifiedTriangulation,
    mut f: impl FnMut(&[u32], &[u32], usize, usize, u32) -> Result<()>,
) -> Result<Vec<(u32, u32)>> {
    let m = t.dim;
    let mut facets = FacetMap::new(m, t.num_vertices());
    let mut key = Vec::with_capacity(m);
    for (ci, c) in t.cells().enumerate() {
        for k in 0..=m {
            key.clear();
            key.extend(c.iter().enumerate().filter(|&(i, _)| i != k).map(|(_, &v)| v));
            let Some((other, a)) = facets.toggle(&key, (ci as u32, c[k])) else {
                continue;
            };
            let s1 = t.cell(other as usize);
            let pos = s1.iter().position(|&v| v == a).expect("opposite vertex in its cell");
            f(&key, s1, pos, ci, c[k])?;
        }
    }
    Ok(facets.remaining())
}

/// Bitmask per vertex of the ambient vertices whose barycentric
/// coordinate vanishes; `None` if some vertex lies outside the ambient simplex.
fn boundary_masks(t: &CertifiedTriangulation) -> Result<Option<Vec<u64>>> {
    let m = t.dim;
    let amb = &t.ambient;
    let cols: Vec<RationalVector> = amb[1..]
        .iter()
        .map(|p| RationalVector::from_ints(&(0..m).map(|r| p[r] - amb[0][r]).collect::<Vec<_>>()))
        .collect();
    let inv = RationalMatrix::from_columns(&cols)?.inverse()?;
    // Scale the inverse to integers so each vertex costs one integer product.
    let mut q = BigInt::from(1);
    for i in 0..m {
        for j in 0..m {
            q = num_integer::Integer::lcm(&q, inv.get(i, j).denom());
        }
    }
    let qr = Rational::from_integer(q.clone());
    let scaled: Option<Vec<i128>> = (0..m * m)
        .map(|k| i128::try_from((inv.get(k / m, k % m) * &qr).to_integer()).ok())
        .collect();
    let q = i128::try_from(q).ok();
    let mut masks = Vec::with_capacity(t.num_vertices());
    for v in 0..t.num_vertices() {
        let p = t.point(v);
        let diff: Vec<i128> = (0..m).map(|r| (p[r] - amb[0][r]) as i128).collect();
        let fast = match (&scaled, q) {
            (Some(a), Some(q)) => {
                let mut coords = Vec::with_capacity(m + 1);
                let mut ok = true;
                let mut sum = Some(0i128);
                for i in 0..m {
                    let mut acc = 0i128;
                    for j in 0..m {
                        match a[i * m + j].checked_mul(diff[j]).and_then(|x| acc.checked_add(x)) {
                            Some(x) => acc = x,
                            None => ok = false,
                        }
                    }
                    sum = sum.and_then(|s| s.checked_add(acc));
                    coords.push(acc);
                }
                match (ok, sum.and_then(|s| q.checked_sub(s))) {
                    (true, Some(first)) => {
                        let mut all = vec![first.cmp(&0)];
                        all.extend(coords.iter().map(|x| x.cmp(&0)));
                        Some(all)
                    }
                    _ => None,
                }
            }
            _ => None,
        };
        let signs = match fast {
            Some(s) => s,
            None => {
                let x = inv.mul_vec(&RationalVector::from_ints(
                    &diff.iter().map(|&d| d as i64).collect::<Vec<_>>(),
                ))?;
                let mut all = vec![(Rational::from_integer(1.into()) - x.sum()).cmp(&Rational::zero())];
                all.extend(x.iter().map(|c| c.cmp(&Rational::zero())));
                all
            }
        };
        if signs.contains(&Ordering::Less) {
            return Ok(None);
        }
        masks.push(
            signs
                .iter()
                .enumerate()
                .filter(|(_, s)| **s == Ordering::Equal)
                .fold(0u64, |acc, (i, _)| acc | 1 << i.min(63)),
        );
    }
    Ok(Some(masks))
}

fn ambient_volume(t: &CertifiedTriangulation) -> BigInt {
    let m = t.dim;
    let amb = &t.ambient;
    let flat: Vec<i64> = (0..m)
        .flat_map(|r| (1..=m).map(move |j| amb[j][r] - amb[0][r]))
        .collect();
    crate::exact::int::det_big(&flat, m).abs()
}

fn coherence(t: &CertifiedTriangulation, dets: &[u64], heights: Option<&[i128]>) -> Result<CoherenceWitness> {
    let m = t.dim;
    let mut tiling = TilingWitness {
        ambient_volume: u128::try_from(ambient_volume(t)).unwrap_or(u128::MAX),
        volume_sum: dets.iter().map(|&d| d as u128).sum(),
        ..Default::default()
    };
    fn fail(tiling: &mut TilingWitness, msg: String) {
        if tiling.problem.is_none() {
            tiling.problem = Some(msg);
        }
    }
    let mut w = CoherenceWitness::default();
    if tiling.volume_sum != tiling.ambient_volume {
        let msg = format!(
            "cell volumes sum to {} but the simplex has {}",
            tiling.volume_sum, tiling.ambient_volume
        );
        fail(&mut tiling, msg);
    }
    if dets.contains(&0) {
        fail(&mut tiling, "degenerate cell".into());
    }
    let present: rustc_hash::FxHashSet<&[i64]> = t.points().collect();
    for a in &t.ambient {
        if !present.contains(a.as_slice()) {
            fail(&mut tiling, format!("ambient vertex {a:?} is not a vertex"));
        }
    }
    if m == 0 {
        tiling.ok = tiling.problem.is_none() && t.num_cells() == 1;
        w.ok = tiling.ok && heights.is_some();
        w.tiling = tiling;
        return Ok(w);
    }
    let masks = boundary_masks(t)?;
    if masks.is_none() {
        fail(&mut tiling, "a vertex lies outside the simplex".into());
    }
    let mut min: Option<MarginValue> = None;
    let mut buf = vec![0i128; m * m];
    let remaining = walk_walls(t, |key, s1, pos, ci, b| {
        tiling.walls += 1;
        let bary = Bary::of(t, s1, b, &mut buf)?;
        if bary.side(pos) != Ordering::Less {
            fail(
                &mut tiling,
                format!("cells overlap across wall {key:?} (second cell {ci})"),
            );
        }
        if let Some(h) = heights {
            let mg = bary.margin(s1, b, h);
            if !mg.is_positive() {
                w.failing_walls += 1;
                if w.examples.len() < 8 {
                    let r = mg.to_rational() / Rational::from_integer(t.height_denominator.into());
                    w.examples.push((key.to_vec(), r));
                }
            }
            if min.as_ref().is_none_or(|cur| mg.less_than(cur)) {
                min = Some(mg);
            }
        }
        Ok(())
    })?;
    let masks = masks.unwrap_or_default();
    for (ci, opp) in remaining {
        tiling.boundary_facets += 1;
        if masks.is_empty() {
            continue;
        }
        let mask = t
            .cell(ci as usize)
            .iter()
            .filter(|&&v| v != opp)
            .fold(u64::MAX, |acc, &v| acc & masks[v as usize]);
        if mask == 0 {
            fail(&mut tiling, format!("cell {ci} has an unmatched interior facet"));
        }
    }
    tiling.ok = tiling.problem.is_none() && t.num_cells() > 0;
    w.min_margin = min.map(|mg| mg.to_rational() / Rational::from_integer(t.height_denominator.into()));
    w.ok = tiling.ok && heights.is_some() && w.failing_walls == 0;
    w.tiling = tiling;
    Ok(w)
}

/// Smallest `j ≤ 64` such that the heights `2^j·coarse + c·fine` have
/// strictly positive margins on every wall, or `None` if no such `j`
/// exists. `coarse` must have nonnegative margins.
pub(super) fn epsilon_exponent(
    t: &CertifiedTriangulation,
    coarse: &[i128],
    fine: &[i128],
    c: i128,
) -> Result<Option<u32>> {
    let m = t.dim;
    let mut buf = vec![0i128; m * m];
    let mut need = 0u32;
    let mut impossible = false;
    walk_walls(t, |_, s1, _, _, b| {
        if impossible {
            return Ok(());
        }
        let bary = Bary::of(t, s1, b, &mut buf)?;
        let (ma, mb) = (bary.margin(s1, b, coarse), bary.margin(s1, b, fine));
        let j = match (&ma, &mb) {
            (_, MarginValue::Fast { num: b, .. }) if *b > 0 && !ma.to_sign_negative() => Some(0),
            (MarginValue::Fast { num: a, .. }, MarginValue::Fast { num: b, .. }) if *a > 0 => {
                // 2^j·a > c·(−b)
                match c.checked_mul(-b) {
                    Some(q) => Some(bits_needed(q / a + 1)),
                    None => exact_bits(&ma, &mb, c),
                }
            }
            _ => exact_bits(&ma, &mb, c),
        };
        match j {
            Some(j) if j <= 64 => need = need.max(j),
            _ => impossible = true,
        }
        Ok(())
    })?;
    Ok((!impossible).then_some(need))
}

impl MarginValue {
    fn to_sign_negative(&self) -> bool {
        match self {
            MarginValue::Fast { num, .. } => *num < 0,
            MarginValue::Exact(r) => r.is_negative(),
        }
    }
}

/// Smallest `j` with `2^j ≥ r`, for `r ≥ 1`.
fn bits_needed(r: i128) -> u32 {
    if r <= 1 {
        0
    } else {
        128 - (r - 1).leading_zeros()
    }
}

fn exact_bits(ma: &MarginValue, mb: &MarginValue, c: i128) -> Option<u32> {
    let (a, b) = (ma.to_rational(), mb.to_rational());
    if a.is_negative() {
        return None;
    }
    if b.is_positive() {
        return Some(0);
    }
    if a.is_zero() {
        return None;
    }
    let q: BigInt = (-b * Rational::from_integer(c.into()) / a).floor().to_integer() + 1;
    let bits = (q - 1u8).bits() as u32;
    Some(bits)
}

/// Tiling check plus strict wall-crossing convexity: for every interior
/// wall, the affine function agreeing with the heights on one cell must
/// exceed the height at the opposite vertex of the other cell.
pub fn verify_coherent(t: &CertifiedTriangulation) -> Result<CoherenceWitness> {
    let heights = t
        .height_numerators()
        .ok_or_else(|| Error::IncompleteCertificate("heights missing".into()))?;
    coherence(t, &determinants(t), Some(heights))
}

pub(super) fn certify(t: &CertifiedTriangulation) -> Result<Certificate> {
    let basic = verify_basic(t);
    let coherent = coherence(t, &basic.determinants, t.height_numerators())?;
    let balanced = match verify_balanced(t) {
        Ok(b) => b,
        Err(Error::IncompleteCertificate(_)) => BalanceWitness::default(),
        Err(e) => return Err(e),
    };
    let overall = basic.ok && coherent.ok && balanced.ok;
    Ok(Certificate {
        basic,
        coherent,
        balanced,
        overall,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::triangulation::{CertifiedTriangulation, TriangulationParts};

    fn tri(points: &[&[i64]], cells: &[&[u32]], ambient: &[&[i64]]) -> TriangulationParts {
        TriangulationParts {
            dim: ambient.len() - 1,
            points: points.iter().map(|p| p.to_vec()).collect(),
            cells: cells.iter().map(|c| c.to_vec()).collect(),
            colours: None,
            heights: None,
            height_denominator: 1,
            ambient: ambient.iter().map(|p| p.to_vec()).collect(),
        }
    }

    fn square_halves() -> TriangulationParts {
        // conv{(0,0),(2,0),(0,2)} split along x = 1 is not a triangulation
        // by triangles; use the 2-cell split of conv{(0,0),(2,0),(0,2)}
        // through (1,1) instead.
        tri(
            &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]],
            &[&[0, 1, 3], &[0, 2, 3]],
            &[&[0, 0], &[2, 0], &[0, 2]],
        )
    }

    #[test]
    fn single_unimodular_simplex() {
        let mut p = tri(
            &[&[0, 0], &[1, 0], &[0, 1]],
            &[&[0, 1, 2]],
            &[&[0, 0], &[1, 0], &[0, 1]],
        );
        p.colours = Some(vec![0, 1, 2]);
        p.heights = Some(vec![0, 0, 0]);
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        let c = t.certificate();
        assert!(c.basic.ok && c.coherent.ok && c.balanced.ok && c.overall);
        assert_eq!(c.basic.determinants, vec![1]);
        assert_eq!(c.coherent.tiling.boundary_facets, 3);
    }

    #[test]
    fn flat_and_affine_heights_are_not_coherent() {
        let mut p = square_halves();
        p.heights = Some(vec![0, 0, 0, 0]);
        let t = CertifiedTriangulation::from_parts(p.clone()).unwrap();
        let w = verify_coherent(&t).unwrap();
        assert!(w.tiling.ok);
        assert!(!w.ok);
        assert_eq!(w.min_margin, Some(Rational::zero()));
        p.heights = Some(vec![3, 3 + 2 * 5, 3 - 2 * 7, 3 + 5 - 7]);
        let t = CertifiedTriangulation::from_parts(p.clone()).unwrap();
        assert!(!verify_coherent(&t).unwrap().ok);
        // A concave bump at (1,1) makes it coherent.
        p.heights = Some(vec![0, 0, 0, 1]);
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        let w = verify_coherent(&t).unwrap();
        assert!(w.ok, "{w:?}");
        assert_eq!(w.min_margin, Some(Rational::from_integer(2.into())));
    }

    #[test]
    fn missing_data_is_incomplete() {
        let t = CertifiedTriangulation::from_parts(square_halves()).unwrap();
        assert!(matches!(verify_coherent(&t), Err(Error::IncompleteCertificate(_))));
        assert!(matches!(verify_balanced(&t), Err(Error::IncompleteCertificate(_))));
        assert!(!t.certificate().overall);
    }

    #[test]
    fn overlapping_cells_fail_tiling() {
        // Two copies of the same cell plus nothing else: volume is wrong and
        // the shared facets pair with cells on the same side.
        let p = tri(
            &[&[0, 0], &[1, 0], &[0, 1], &[1, 1]],
            &[&[0, 1, 2], &[1, 2, 3], &[0, 1, 3]],
            &[&[0, 0], &[2, 0], &[0, 2]],
        );
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        assert!(!t.certificate().coherent.tiling.ok);
    }

    #[test]
    fn missing_cell_fails_tiling() {
        let p = tri(
            &[&[0, 0], &[2, 0], &[0, 2], &[1, 1]],
            &[&[0, 1, 3]],
            &[&[0, 0], &[2, 0], &[0, 2]],
        );
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        let w = &t.certificate().coherent.tiling;
        assert!(!w.ok);
        assert_eq!(w.volume_sum, 2);
        assert_eq!(w.ambient_volume, 4);
    }

    #[test]
    fn determinants_of_a_dilated_triangle() {
        let p = tri(
            &[&[0, 0], &[3, 0], &[0, 3]],
            &[&[0, 1, 2]],
            &[&[0, 0], &[3, 0], &[0, 3]],
        );
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        let b = verify_basic(&t);
        assert!(!b.ok);
        assert_eq!(b.determinants, vec![9]);
    }

    #[test]
    fn colouring_checks_agree() {
        let mut p = tri(
            &[&[0, 0], &[1, 0], &[0, 1]],
            &[&[0, 1, 2]],
            &[&[0, 0], &[1, 0], &[0, 1]],
        );
        p.colours = Some(vec![0, 1, 1]);
        let t = CertifiedTriangulation::from_parts(p).unwrap();
        let b = verify_balanced(&t).unwrap();
        assert!(!b.ok && !b.edges_distinct && !b.cells_rainbow);
        assert_eq!(b.bad_cells, vec![0]);
    }
}
