use std::fmt::Write;

use super::CertifiedTriangulation;
use crate::error::{Error, Result};

/// Object File Format text for a triangulation of dimension at most 3.
/// Lower-dimensional points are padded with zeros; in dimension 3 every
/// tetrahedron is written as its four triangles.
pub fn write_off(t: &CertifiedTriangulation) -> Result<String> {
    let m = t.dim();
    if m > 3 {
        return Err(Error::Shape(format!(
            "OFF export supports dimension at most 3, not {m}"
        )));
    }
    let faces: Vec<Vec<u32>> = if m == 3 {
        t.cells()
            .flat_map(|c| {
                (0..4).map(move |skip| {
                    c.iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, &v)| v)
                        .collect()
                })
            })
            .collect()
    } else {
        t.cells().map(|c| c.to_vec()).collect()
    };
    let mut out = String::from("OFF\n");
    let _ = writeln!(out, "{} {} 0", t.num_vertices(), faces.len());
    for p in t.points() {
        let mut xyz = p.to_vec();
        xyz.resize(3, 0);
        let _ = writeln!(out, "{} {} {}", xyz[0], xyz[1], xyz[2]);
    }
    for f in faces {
        let idx: Vec<String> = f.iter().map(|v| v.to_string()).collect();
        let _ = writeln!(out, "{} {}", f.len(), idx.join(" "));
    }
    Ok(out)
}
