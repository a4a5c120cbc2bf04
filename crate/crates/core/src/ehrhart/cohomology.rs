use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use rustc_hash::FxHashSet;
use serde::Serialize;

use super::{ehrhart_bruteforce, to_counts, transfer_matrix, StirlingConvention};
use crate::datum::SpecialDatum;
use crate::error::{Error, Result};
use crate::exact::{Rational, RationalVector};
use crate::simplex::{build_forest_geometry, decompose, DecompositionKind, WatanabeDecomposition};
use crate::triangulation::{triangulate, CertifiedTriangulation};

/// How a δ-vector of `𝔰_G` was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    /// Lattice-point counts of `κ·𝔰_G` in `N_G`.
    BruteForce,
    /// Convolution at joins, a-vector scaling at dilations.
    Induction,
    /// h-vector of the basic triangulation.
    HVector,
    /// Closed column formula for `(d; k)` data.
    StarFormula,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::BruteForce => "brute-force",
            Route::Induction => "induction",
            Route::HVector => "h-vector",
            Route::StarFormula => "star-formula",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RouteResult {
    pub route: Route,
    pub delta: Vec<u64>,
}

/// Size limits for the expensive routes. A route over its limit is
/// skipped and listed in [`Cohomology::skipped`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CohomologyOptions {
    /// Largest `|G|` for lattice-point counting.
    pub max_bruteforce_order: u64,
    /// Largest `|G|` for building the triangulation and its face lattice.
    pub max_hvector_order: u64,
}

impl Default for CohomologyOptions {
    fn default() -> Self {
        Self {
            max_bruteforce_order: 20_000,
            max_hvector_order: 200_000,
        }
    }
}

/// Betti numbers `dim H^{2i}`, `i = 0..d−1`, of a crepant resolution.
#[derive(Clone, Debug, Serialize)]
pub struct Cohomology {
    pub d: usize,
    pub order: u64,
    pub dims: Vec<u64>,
    /// a-vector of `𝔰_G`.
    pub a: RationalVector,
    pub euler: u64,
    pub convention: StirlingConvention,
    pub routes: Vec<RouteResult>,
    pub skipped: Vec<(Route, String)>,
}

fn ints(v: &[u64]) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_integer(x.into())).collect()
}

fn convolve(x: &[Rational], y: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); x.len() + y.len() - 1];
    for (i, a) in x.iter().enumerate() {
        for (j, b) in y.iter().enumerate() {
            out[i + j] += a * b;
        }
    }
    out
}

fn induction(dec: &WatanabeDecomposition) -> Result<Vec<Rational>> {
    match &dec.kind {
        DecompositionKind::Point => Ok(vec![Rational::from_integer(1.into())]),
        DecompositionKind::Join(parts) => {
            let mut acc = induction(&parts[0].part)?;
            for p in &parts[1..] {
                acc = convolve(&acc, &induction(&p.part)?);
            }
            // A join of dimension d₁ + d₂ + 1 has δ of degree at most d₁ + d₂.
            acc.resize(dec.dim() + 1, Rational::zero());
            Ok(acc)
        }
        DecompositionKind::Dilation { factor, child } => {
            let delta = induction(child)?;
            let m = transfer_matrix(delta.len() - 1)?;
            let lambda = Rational::from_integer((*factor).into());
            let mut scale = Rational::from_integer(1.into());
            let a: Vec<Rational> = m
                .a_from_delta(&delta)?
                .into_iter()
                .map(|x| {
                    let y = x * &scale;
                    scale *= &lambda;
                    y
                })
                .collect();
            m.delta_from_a(&a)
        }
    }
}

/// δ-vector of the simplex described by `dec`, by recursion: a join
/// convolves the δ-vectors of its parts, each obtained from its own
/// a-vector through its own `𝓜⁻¹`; a dilation by `λ` multiplies `a_j` by
/// `λ^j` and maps back through `𝓜⁻¹`.
pub fn inductive_delta(dec: &WatanabeDecomposition) -> Result<Vec<u64>> {
    to_counts(&induction(dec)?, "inductive δ-vector")
}

/// The join formula read with both factors' a-vectors zero-padded to
/// length `d` and pushed through `𝓜_{d−1}⁻¹`. Kept for comparison; it does
/// not agree with the convolution once a factor has dimension below `d−1`.
pub fn padded_join_delta(a1: &[Rational], a2: &[Rational], d: usize) -> Result<Vec<Rational>> {
    let m = transfer_matrix(d - 1)?;
    let pad = |a: &[Rational]| -> Result<Vec<Rational>> {
        if a.len() > d {
            return Err(Error::Dimension {
                expected: d,
                got: a.len(),
            });
        }
        let mut v = a.to_vec();
        v.resize(d, Rational::zero());
        m.delta_from_a(&v)
    };
    let (x, y) = (pad(a1)?, pad(a2)?);
    let mut out = vec![Rational::zero(); d];
    for (i, o) in out.iter_mut().enumerate() {
        for p in 0..=i {
            *o += &x[p] * &y[i - p];
        }
    }
    Ok(out)
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// h-vector of a triangulation of an `m`-ball, from its face numbers.
pub fn h_vector(t: &CertifiedTriangulation) -> Result<Vec<u64>> {
    let m = t.dim();
    // f[i] counts faces with i vertices, so f[0] is the empty face.
    let mut f = vec![0u64; m + 2];
    f[0] = 1;
    let mut seen: Vec<FxHashSet<Vec<u32>>> = vec![FxHashSet::default(); m + 2];
    for c in t.cells() {
        for mask in 1u32..(1 << (m + 1)) {
            let face: Vec<u32> = (0..=m).filter(|&i| mask >> i & 1 == 1).map(|i| c[i]).collect();
            let k = face.len();
            if seen[k].insert(face) {
                f[k] += 1;
            }
        }
    }
    let h: Vec<Rational> = (0..=m + 1)
        .map(|k| {
            let s: i128 = (0..=k)
                .map(|i| {
                    let term = binomial(m + 1 - i, k - i) * f[i] as i128;
                    if (k - i) % 2 == 0 {
                        term
                    } else {
                        -term
                    }
                })
                .sum();
            Rational::from_integer(s.into())
        })
        .collect();
    if !h[m + 1].is_zero() {
        return Err(Error::CrossCheck(format!("h_{} of a ball must vanish", m + 1)));
    }
    to_counts(&h[..=m], "h-vector")
}

/// δ-vector of `𝔰_G` for the datum `(d; k)` from the closed column
/// formula: `a_j = k^j·𝓜_{d−1}[j][0]`, then `𝓜_{d−1}⁻¹`.
pub fn star_formula(d: usize, k: u64) -> Result<Vec<u64>> {
    if d == 0 {
        return Err(Error::Shape("d must be positive".into()));
    }
    let m = transfer_matrix(d - 1)?;
    let kr = Rational::from_integer(k.into());
    let mut p = Rational::from_integer(1.into());
    let a: Vec<Rational> = (0..d)
        .map(|j| {
            let x = m.entries().get(j, 0) * &p;
            p *= &kr;
            x
        })
        .collect();
    to_counts(&m.delta_from_a(&a)?, "star formula δ-vector")
}

fn star_parameter(datum: &SpecialDatum) -> Option<u64> {
    let k = datum.weight(&[1])?;
    (datum.d() >= 2 && SpecialDatum::star(datum.d(), k).ok()? == *datum).then_some(k)
}

/// [`cohomology_with`] under the default size limits.
pub fn cohomology_dims(datum: &SpecialDatum) -> Result<Cohomology> {
    cohomology_with(datum, CohomologyOptions::default())
}

/// Computes the δ-vector of `𝔰_G` along every route within the limits and
/// fails with a cross-check error unless all of them agree. The Euler
/// characteristic `Σδ` is checked against `|G|` and `(d−1)!·a_{d−1}`.
pub fn cohomology_with(datum: &SpecialDatum, options: CohomologyOptions) -> Result<Cohomology> {
    if let Some(v) = datum.validate().first() {
        return Err(Error::InvalidDatum(v.message.clone()));
    }
    let geometry = build_forest_geometry(datum)?;
    let order = geometry.lattice.order;
    let d = datum.d();
    let dec = decompose(datum)?;
    let mut routes = vec![RouteResult {
        route: Route::Induction,
        delta: inductive_delta(&dec)?,
    }];
    let mut skipped = Vec::new();
    if order <= options.max_bruteforce_order {
        let e = ehrhart_bruteforce(geometry.junior.vertices(), geometry.junior.lattice())?;
        routes.push(RouteResult {
            route: Route::BruteForce,
            delta: e.delta,
        });
    } else {
        skipped.push((
            Route::BruteForce,
            format!("|G| = {order} exceeds {}", options.max_bruteforce_order),
        ));
    }
    if order <= options.max_hvector_order {
        routes.push(RouteResult {
            route: Route::HVector,
            delta: h_vector(&triangulate(&dec)?)?,
        });
    } else {
        skipped.push((
            Route::HVector,
            format!("|G| = {order} exceeds {}", options.max_hvector_order),
        ));
    }
    if let Some(k) = star_parameter(datum) {
        routes.push(RouteResult {
            route: Route::StarFormula,
            delta: star_formula(d, k)?,
        });
    }
    let dims = routes[0].delta.clone();
    if let Some(r) = routes.iter().find(|r| r.delta != dims) {
        return Err(Error::CrossCheck(format!(
            "{} gives {:?} but {} gives {:?}",
            routes[0].route, dims, r.route, r.delta
        )));
    }
    if dims.len() != d {
        return Err(Error::CrossCheck(format!(
            "δ-vector has length {} for d = {d}",
            dims.len()
        )));
    }
    let euler: u64 = dims.iter().sum();
    if euler != order {
        return Err(Error::CrossCheck(format!("Σδ = {euler} but |G| = {order}")));
    }
    let m = transfer_matrix(d - 1)?;
    let a = m.a_from_delta(&ints(&dims))?;
    let fact: BigInt = (1..d).map(BigInt::from).product();
    let lead = Rational::from_integer(fact) * &a[d - 1];
    if lead.to_integer().to_u64() != Some(euler) || !lead.is_integer() {
        return Err(Error::CrossCheck(format!("(d−1)!·a_(d−1) = {lead} but Σδ = {euler}")));
    }
    Ok(Cohomology {
        d,
        order,
        dims,
        a: RationalVector::new(a),
        euler,
        convention: m.convention(),
        routes,
        skipped,
    })
}

/// `χ = Σ dim H^{2i}`.
pub fn euler_characteristic(datum: &SpecialDatum) -> Result<u64> {
    Ok(cohomology_dims(datum)?.euler)
}
