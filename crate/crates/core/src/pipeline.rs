//! The full chain datum → geometry → decomposition → triangulation → fan.

use serde::Serialize;

use crate::datum::SpecialDatum;
use crate::error::{Error, Result};
use crate::fan::{build_fan, check_crepant, check_smooth, CrepancyWitness, ResolutionFan, SmoothnessWitness};
use crate::simplex::{build_forest_geometry, decompose, JuniorGeometry, WatanabeDecomposition};
use crate::triangulation::{triangulate, CertifiedTriangulation};

/// Everything computed for one datum.
#[derive(Clone, Debug, Serialize)]
pub struct Resolution {
    pub geometry: JuniorGeometry,
    pub decomposition: WatanabeDecomposition,
    #[serde(skip)]
    pub triangulation: CertifiedTriangulation,
    #[serde(skip)]
    pub fan: ResolutionFan,
    pub crepant: CrepancyWitness,
    pub smooth: SmoothnessWitness,
}

impl Resolution {
    /// Basic, coherent, balanced, crepant and smooth.
    pub fn ok(&self) -> bool {
        self.triangulation.certificate().overall && self.crepant.ok && self.smooth.ok
    }
}

/// Triangulates `Φ(𝔰_G)` for a contiguous datum and builds the fan.
/// Checks the decomposition against the transformed simplex first.
pub fn resolve(datum: &SpecialDatum) -> Result<Resolution> {
    let report = datum.validate();
    if let Some(v) = report.first() {
        return Err(Error::InvalidDatum(v.message.clone()));
    }
    let geometry = build_forest_geometry(datum)?;
    let decomposition = decompose(datum)?;
    decomposition.check_dimensions()?;
    if decomposition.evaluate(datum.d())? != geometry.transformed {
        return Err(Error::LatticeInconsistency(
            "the decomposition does not evaluate to the transformed simplex".into(),
        ));
    }
    let triangulation = triangulate(&decomposition)?;
    let mut amb = triangulation.ambient().to_vec();
    let mut want = geometry.working_vertices();
    amb.sort();
    want.sort();
    if amb != want {
        return Err(Error::LatticeInconsistency(
            "triangulation does not cover Φ(𝔰_G)".into(),
        ));
    }
    let fan = build_fan(&geometry, &triangulation)?;
    let crepant = check_crepant(&fan);
    let smooth = check_smooth(&fan);
    Ok(Resolution {
        geometry,
        decomposition,
        triangulation,
        fan,
        crepant,
        smooth,
    })
}
