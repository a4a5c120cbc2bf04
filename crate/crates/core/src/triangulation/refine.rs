use rustc_hash::FxHashMap;

use super::staircase::{monotone_points, staircase_cells, staircase_height};
use super::{verify, CertifiedTriangulation};
use crate::error::{Error, Result};
use crate::exact::Rational;

const MAX_HALVINGS: u32 = 64;

/// Replaces every cell `F` of `λ·t` by the image of the staircase
/// triangulation `𝔗[dim;λ]` under the colour-respecting affine map
/// `Φ_F: λ·𝔰_dim → λF`, and glues the heights as
/// `ψ̂(x) = ψ(x/λ) + ε·ψ̄(Φ_F⁻¹(x))` with `ε = 2^{−j}` the first power of
/// one half making every wall-crossing inequality strict.
///
/// `t` must carry a positive certificate. The result is certified from
/// scratch; `λ = 1` returns a copy of `t`.
pub fn refine_dilation(t: &CertifiedTriangulation, lambda: u64) -> Result<CertifiedTriangulation> {
    if lambda == 0 {
        return Err(Error::EmptyDilation);
    }
    if !t.certificate().overall {
        return Err(Error::Precondition(
            "refinement needs a basic, coherent, balanced triangulation".into(),
        ));
    }
    if lambda == 1 {
        return Ok(t.clone());
    }
    let m = t.dim();
    let l = i64::try_from(lambda).map_err(|_| Error::Overflow("dilation factor"))?;
    let l128 = l as i128;
    if m == 0 {
        return Ok(t.clone());
    }
    let colours = t.colours().expect("balanced triangulations carry colours");
    let coarse_h = t.height_numerators().expect("coherent triangulations carry heights");
    let den = t.height_denominator();

    // Staircase pieces in y-coordinates.
    let (stair_points, stair_cells) = staircase_cells(m, lambda)?;
    debug_assert_eq!(stair_points, monotone_points(m, l));
    let stair_psi: Vec<i128> = stair_points.iter().map(|y| staircase_height(y)).collect();
    let stair_colour: Vec<u8> = stair_points
        .iter()
        .map(|y| (y.iter().sum::<i64>().rem_euclid(m as i64 + 1)) as u8)
        .collect();

    let mut index: FxHashMap<Vec<i64>, u32> = FxHashMap::default();
    let mut points: Vec<i64> = Vec::new();
    let mut fine_colours: Vec<u8> = Vec::new();
    let mut lin: Vec<i128> = Vec::new();
    let mut psi: Vec<i128> = Vec::new();
    let mut cells: Vec<u32> = Vec::with_capacity(t.num_cells() * stair_cells.len() * (m + 1));
    let mut local = vec![0u32; stair_points.len()];
    let mut x = vec![0i64; m];
    for cell in t.cells() {
        // F_c = vertex of colour c.
        let mut by_colour = vec![0u32; m + 1];
        for &v in cell {
            by_colour[colours[v as usize] as usize] = v;
        }
        let f: Vec<&[i64]> = by_colour.iter().map(|&v| t.point(v as usize)).collect();
        let hf: Vec<i128> = by_colour.iter().map(|&v| coarse_h[v as usize]).collect();
        for (k, y) in stair_points.iter().enumerate() {
            // Barycentric weights of x/λ on F: (λ − y₁, y₁ − y₂, …, y_m) / λ.
            let mut w = Vec::with_capacity(m + 1);
            w.push(l - y[0]);
            for c in 1..m {
                w.push(y[c - 1] - y[c]);
            }
            w.push(y[m - 1]);
            for (r, xr) in x.iter_mut().enumerate() {
                let mut acc = 0i64;
                for c in 0..=m {
                    acc = w[c]
                        .checked_mul(f[c][r])
                        .and_then(|p| acc.checked_add(p))
                        .ok_or(Error::Overflow("refined coordinates"))?;
                }
                *xr = acc;
            }
            let lpsi = (0..=m).try_fold(0i128, |acc, c| acc.checked_add((w[c] as i128).checked_mul(hf[c])?));
            let lpsi = lpsi.ok_or(Error::Overflow("refined heights"))?;
            let id = match index.get(&x) {
                Some(&id) => {
                    let i = id as usize;
                    if fine_colours[i] != stair_colour[k] || psi[i] != stair_psi[k] || lin[i] != lpsi {
                        return Err(Error::LatticeInconsistency(format!(
                            "neighbouring pieces disagree at {x:?}"
                        )));
                    }
                    id
                }
                None => {
                    let id = u32::try_from(fine_colours.len()).map_err(|_| Error::Overflow("vertex count"))?;
                    index.insert(x.clone(), id);
                    points.extend_from_slice(&x);
                    fine_colours.push(stair_colour[k]);
                    lin.push(lpsi);
                    psi.push(stair_psi[k]);
                    id
                }
            };
            local[k] = id;
        }
        for sc in &stair_cells {
            let mut c: Vec<u32> = sc.iter().map(|&k| local[k as usize]).collect();
            c.sort_unstable();
            cells.extend(c);
        }
    }
    drop(index);

    let ambient = t
        .ambient()
        .iter()
        .map(|a| {
            a.iter()
                .map(|&v| v.checked_mul(l).ok_or(Error::Overflow("refined coordinates")))
                .collect()
        })
        .collect::<Result<Vec<Vec<i64>>>>()?;
    // Certify the geometry with the coarse heights alone to get wall data,
    // then pick ε.
    let scale = l128.checked_mul(den).ok_or(Error::Overflow("height denominator"))?;
    let probe = CertifiedTriangulation {
        dim: m,
        nv: fine_colours.len(),
        points,
        cells,
        colours: None,
        heights: None,
        height_denominator: 1,
        ambient,
        epsilons: Vec::new(),
        certificate: Default::default(),
    };
    let j = verify::epsilon_exponent(&probe, &lin, &psi, scale)?
        .filter(|&j| j <= MAX_HALVINGS)
        .ok_or(Error::EpsilonSearch(MAX_HALVINGS))?;
    let pow = 1i128
        .checked_shl(j)
        .filter(|p| *p > 0)
        .ok_or(Error::Overflow("epsilon"))?;
    let heights = lin
        .iter()
        .zip(&psi)
        .map(|(&a, &b)| a.checked_mul(pow)?.checked_add(scale.checked_mul(b)?))
        .collect::<Option<Vec<_>>>()
        .ok_or(Error::Overflow("refined heights"))?;
    let height_denominator = scale.checked_mul(pow).ok_or(Error::Overflow("height denominator"))?;
    let mut epsilons = t.epsilons().to_vec();
    epsilons.push(Rational::new(1.into(), num_bigint::BigInt::from(pow)));
    CertifiedTriangulation::assemble(
        m,
        probe.points,
        probe.cells,
        Some(fine_colours),
        Some(heights),
        height_denominator,
        probe.ambient,
        epsilons,
    )
}
