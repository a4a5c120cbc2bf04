use super::{join_standard, refine_dilation, CertifiedTriangulation};
use crate::error::Result;
use crate::simplex::{DecompositionKind, WatanabeDecomposition};

fn point() -> Result<CertifiedTriangulation> {
    CertifiedTriangulation::assemble(
        0,
        Vec::new(),
        vec![0],
        Some(vec![0]),
        Some(vec![0]),
        1,
        vec![Vec::new()],
        Vec::new(),
    )
}

/// Builds a basic, coherent, balanced triangulation by recursion over the
/// decomposition: points are trivial, joins use [`join_standard`] and
/// dilations use [`refine_dilation`]. The result lives in the coordinates
/// `ν+1..=ξ` of the root node.
pub fn triangulate(decomposition: &WatanabeDecomposition) -> Result<CertifiedTriangulation> {
    match &decomposition.kind {
        DecompositionKind::Point => point(),
        DecompositionKind::Join(parts) => {
            let mut acc = triangulate(&parts[0].part)?;
            for p in &parts[1..] {
                acc = join_standard(&acc, &triangulate(&p.part)?)?;
            }
            Ok(acc)
        }
        DecompositionKind::Dilation { factor, child } => refine_dilation(&triangulate(child)?, *factor),
    }
}
