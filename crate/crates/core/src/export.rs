//! ASCII PLY export with per-vertex colors.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Result, SymmetryError};
use crate::mesh::TriangleMesh;

const STOPS: [(f64, [f64; 3]); 3] = [
    (0.0, [30.0, 60.0, 200.0]),
    (0.5, [80.0, 190.0, 150.0]),
    (1.0, [250.0, 230.0, 40.0]),
];

/// Blue at 0, green at 0.5, yellow at 1.
pub fn colormap(t: f64) -> [u8; 3] {
    let t = if t.is_finite() { t.clamp(0.0, 1.0) } else { 0.0 };
    let i = if t <= STOPS[1].0 { 0 } else { 1 };
    let ((t0, c0), (t1, c1)) = (STOPS[i], STOPS[i + 1]);
    let s = (t - t0) / (t1 - t0);
    std::array::from_fn(|k| (c0[k] + s * (c1[k] - c0[k])).round() as u8)
}

/// Renders `mesh` as ASCII PLY colored by `field`, normalized to its own
/// min/max. The range is recorded in comment lines; non-finite values get
/// the low end of the colormap.
pub fn ply_string(mesh: &TriangleMesh, field: &[f64], name: &str) -> Result<String> {
    if field.len() != mesh.n_vertices() {
        return Err(SymmetryError::Dimension(format!(
            "field has {} values for {} vertices",
            field.len(),
            mesh.n_vertices()
        )));
    }
    let finite = field.iter().copied().filter(|v| v.is_finite());
    let min = finite.clone().fold(f64::INFINITY, f64::min);
    let max = finite.fold(f64::NEG_INFINITY, f64::max);
    // Fields that are constant up to round-off get the middle color.
    let flat = !(max - min > 1e-9 * max.abs().max(min.abs()));

    let mut out = String::new();
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "comment field {name}");
    let _ = writeln!(out, "comment field_min {min:e}");
    let _ = writeln!(out, "comment field_max {max:e}");
    let _ = writeln!(out, "element vertex {}", mesh.n_vertices());
    out.push_str("property float x\nproperty float y\nproperty float z\n");
    out.push_str("property uchar red\nproperty uchar green\nproperty uchar blue\n");
    let _ = writeln!(out, "element face {}", mesh.n_faces());
    out.push_str("property list uchar int vertex_indices\nend_header\n");
    for (p, &v) in mesh.vertices().iter().zip(field) {
        let t = if flat { 0.5 } else { (v - min) / (max - min) };
        let [r, g, b] = colormap(t);
        let _ = writeln!(out, "{} {} {} {r} {g} {b}", p[0], p[1], p[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    Ok(out)
}

pub fn write_ply(path: impl AsRef<Path>, mesh: &TriangleMesh, field: &[f64], name: &str) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, ply_string(mesh, field, name)?).map_err(|e| SymmetryError::io(path, e))
}
