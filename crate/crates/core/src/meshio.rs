//! OFF and OBJ readers/writers. Only vertex positions and triangle faces are
//! consumed; normals, texture coordinates and materials are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Result, SymmetryError};
use crate::mesh::{Point3, TriangleMesh};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshFormat {
    Off,
    Obj,
}

impl MeshFormat {
    /// Guesses the format from a file extension (case-insensitive).
    pub fn from_path(path: &Path) -> Option<Self> {
        let ext = path.extension()?.to_str()?.to_ascii_lowercase();
        match ext.as_str() {
            "off" => Some(Self::Off),
            "obj" => Some(Self::Obj),
            _ => None,
        }
    }
}

impl FromStr for MeshFormat {
    type Err = SymmetryError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "off" => Ok(Self::Off),
            "obj" => Ok(Self::Obj),
            other => Err(SymmetryError::Config(format!("unknown mesh format `{other}`"))),
        }
    }
}

/// Reads and validates a mesh. The format is taken from `format` or, when
/// `None`, from the file extension.
pub fn parse_mesh(path: impl AsRef<Path>, format: Option<MeshFormat>) -> Result<TriangleMesh> {
    let path = path.as_ref();
    let format = match format.or_else(|| MeshFormat::from_path(path)) {
        Some(f) => f,
        None => {
            return Err(SymmetryError::Config(format!(
                "cannot infer mesh format of {}",
                path.display()
            )))
        }
    };
    let text = fs::read_to_string(path).map_err(|e| SymmetryError::io(path, e))?;
    parse_mesh_str(&text, format)
}

pub fn parse_mesh_str(text: &str, format: MeshFormat) -> Result<TriangleMesh> {
    let (vertices, faces) = match format {
        MeshFormat::Off => read_off(text)?,
        MeshFormat::Obj => read_obj(text)?,
    };
    TriangleMesh::new(vertices, faces)
}

fn parse_err(line: usize, message: impl Into<String>) -> SymmetryError {
    SymmetryError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_num<T: FromStr>(tok: &str, line: usize, what: &str) -> Result<T> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

type RawMesh = (Vec<Point3>, Vec<[usize; 3]>);

fn read_off(text: &str) -> Result<RawMesh> {
    // (1-based line number, tokens) for every non-empty, non-comment line
    let mut lines = text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then(|| (i + 1, l.split_whitespace().collect::<Vec<_>>()))
    });

    let (line_no, header) = lines.next().ok_or_else(|| parse_err(1, "empty file"))?;
    let mut counts: Vec<&str> = if header[0] == "OFF" {
        header[1..].to_vec()
    } else if let Some(rest) = header[0].strip_prefix("OFF") {
        // "OFF3 4 6" style headers are not valid OFF
        return Err(parse_err(line_no, format!("unsupported header `OFF{rest}`")));
    } else {
        return Err(parse_err(line_no, "missing OFF header"));
    };
    let mut counts_line = line_no;
    if counts.is_empty() {
        let (l, toks) = lines
            .next()
            .ok_or_else(|| parse_err(line_no, "missing counts line"))?;
        counts = toks;
        counts_line = l;
    }
    if counts.len() < 2 {
        return Err(parse_err(counts_line, "counts line needs vertex and face counts"));
    }
    let nv: usize = parse_num(counts[0], counts_line, "vertex count")?;
    let nf: usize = parse_num(counts[1], counts_line, "face count")?;

    let mut vertices = Vec::with_capacity(nv);
    for _ in 0..nv {
        let (l, toks) = lines
            .next()
            .ok_or_else(|| parse_err(counts_line, "unexpected end of file in vertex list"))?;
        if toks.len() < 3 {
            return Err(parse_err(l, "vertex line needs three coordinates"));
        }
        vertices.push([
            parse_num(toks[0], l, "coordinate")?,
            parse_num(toks[1], l, "coordinate")?,
            parse_num(toks[2], l, "coordinate")?,
        ]);
    }

    let mut faces = Vec::with_capacity(nf);
    for _ in 0..nf {
        let (l, toks) = lines
            .next()
            .ok_or_else(|| parse_err(counts_line, "unexpected end of file in face list"))?;
        let arity: usize = parse_num(toks[0], l, "face arity")?;
        if arity != 3 {
            return Err(parse_err(l, format!("only triangles are supported, got {arity}-gon")));
        }
        if toks.len() < 4 {
            return Err(parse_err(l, "face line needs three indices"));
        }
        faces.push([
            parse_num(toks[1], l, "vertex index")?,
            parse_num(toks[2], l, "vertex index")?,
            parse_num(toks[3], l, "vertex index")?,
        ]);
    }
    Ok((vertices, faces))
}

fn read_obj(text: &str) -> Result<RawMesh> {
    let mut vertices = Vec::new();
    let mut faces = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let l = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        let mut toks = line.split_whitespace();
        match toks.next() {
            Some("v") => {
                let coords: Vec<&str> = toks.collect();
                if coords.len() < 3 {
                    return Err(parse_err(l, "vertex record needs three coordinates"));
                }
                vertices.push([
                    parse_num(coords[0], l, "coordinate")?,
                    parse_num(coords[1], l, "coordinate")?,
                    parse_num(coords[2], l, "coordinate")?,
                ]);
            }
            Some("f") => {
                let refs: Vec<&str> = toks.collect();
                if refs.len() != 3 {
                    return Err(parse_err(
                        l,
                        format!("only triangles are supported, got {} indices", refs.len()),
                    ));
                }
                let mut face = [0usize; 3];
                for (slot, r) in face.iter_mut().zip(&refs) {
                    // "i", "i/t", "i//n", "i/t/n"
                    let idx: i64 = parse_num(r.split('/').next().unwrap_or(""), l, "vertex index")?;
                    *slot = match idx {
                        0 => return Err(parse_err(l, "OBJ indices are 1-based; got 0")),
                        i if i > 0 => (i - 1) as usize,
                        i => {
                            let rel = vertices.len() as i64 + i;
                            if rel < 0 {
                                return Err(parse_err(l, format!("relative index {i} out of range")));
                            }
                            rel as usize
                        }
                    };
                }
                faces.push(face);
            }
            _ => {}
        }
    }
    Ok((vertices, faces))
}

pub fn off_string(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    out.push_str("OFF\n");
    let _ = writeln!(out, "{} {} 0", mesh.n_vertices(), mesh.n_faces());
    for p in mesh.vertices() {
        let _ = writeln!(out, "{:.17e} {:.17e} {:.17e}", p[0], p[1], p[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "3 {} {} {}", f[0], f[1], f[2]);
    }
    out
}

pub fn obj_string(mesh: &TriangleMesh) -> String {
    let mut out = String::new();
    for p in mesh.vertices() {
        let _ = writeln!(out, "v {:.17e} {:.17e} {:.17e}", p[0], p[1], p[2]);
    }
    for f in mesh.faces() {
        let _ = writeln!(out, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    out
}

pub fn write_mesh(mesh: &TriangleMesh, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let text = match MeshFormat::from_path(path) {
        Some(MeshFormat::Obj) => obj_string(mesh),
        _ => off_string(mesh),
    };
    fs::write(path, text).map_err(|e| SymmetryError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    const TET_OFF: &str = "OFF
# unit tetrahedron
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 2 1
3 0 1 3
3 0 3 2
3 1 2 3
";

    #[test]
    fn reads_tetrahedron_off() {
        let m = parse_mesh_str(TET_OFF, MeshFormat::Off).unwrap();
        assert_eq!(m.n_vertices(), 4);
        assert_eq!(m.n_faces(), 4);
        assert_eq!(m.edges().len(), 6);
    }

    #[test]
    fn off_counts_on_header_line() {
        let text = TET_OFF.replacen("OFF\n# unit tetrahedron\n4 4 0", "OFF 4 4 0", 1);
        assert_eq!(parse_mesh_str(&text, MeshFormat::Off).unwrap().n_vertices(), 4);
    }

    #[test]
    fn obj_index_out_of_range_is_validation_error() {
        let mut text = String::new();
        for i in 0..8 {
            text.push_str(&format!("v {} {} {}\n", i & 1, (i >> 1) & 1, (i >> 2) & 1));
        }
        text.push_str("f 1 2 9\n");
        let err = parse_mesh_str(&text, MeshFormat::Obj).unwrap_err();
        assert!(matches!(err, SymmetryError::Validation { .. }), "{err}");
    }

    #[test]
    fn obj_ignores_normals_and_texcoords() {
        let text = "mtllib x.mtl\nv 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\nusemtl a\nf 1/1/1 2/1/1 3//1\n";
        let m = parse_mesh_str(text, MeshFormat::Obj).unwrap();
        assert_eq!(m.faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn obj_negative_indices_are_relative() {
        let text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n";
        assert_eq!(parse_mesh_str(text, MeshFormat::Obj).unwrap().faces(), &[[0, 1, 2]]);
    }

    #[test]
    fn malformed_lines_report_line_numbers() {
        let text = "OFF\n3 1 0\n0 0 0\n1 0 zero\n0 1 0\n3 0 1 2\n";
        match parse_mesh_str(text, MeshFormat::Off) {
            Err(SymmetryError::Parse { line, .. }) => assert_eq!(line, 4),
            other => panic!("unexpected {other:?}"),
        }
        let quad = "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n";
        assert!(matches!(
            parse_mesh_str(quad, MeshFormat::Off),
            Err(SymmetryError::Parse { line: 7, .. })
        ));
    }

    #[test]
    fn off_round_trip_preserves_geometry() {
        let m = parse_mesh_str(TET_OFF, MeshFormat::Off).unwrap();
        let again = parse_mesh_str(&off_string(&m), MeshFormat::Off).unwrap();
        assert_eq!(m.vertices(), again.vertices());
        assert_eq!(m.faces(), again.faces());
        let obj = parse_mesh_str(&obj_string(&m), MeshFormat::Obj).unwrap();
        assert_eq!(m.faces(), obj.faces());
    }
}
