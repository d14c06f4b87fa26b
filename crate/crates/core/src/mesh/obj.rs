//! Wavefront OBJ subset: `v`, `vt` and triangular `f` records.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::geometry::Point3;
use crate::mesh::TriMesh;
use crate::scalar::Real;

/// Raw contents of an OBJ file before mesh validation.
#[derive(Debug, Clone, Default)]
pub struct ObjData<T> {
    pub vertices: Vec<Point3<T>>,
    pub texcoords: Vec<[T; 2]>,
    pub faces: Vec<[usize; 3]>,
    /// Comment lines without the leading `#`, trimmed.
    pub comments: Vec<String>,
}

pub fn read_obj<T: Real>(text: &str) -> Result<ObjData<T>> {
    let mut out = ObjData { vertices: Vec::new(), texcoords: Vec::new(), faces: Vec::new(), comments: Vec::new() };
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let trimmed = raw.trim();
        if let Some(c) = trimmed.strip_prefix('#') {
            out.comments.push(c.trim().to_string());
            continue;
        }
        let mut tok = trimmed.split_whitespace();
        let Some(tag) = tok.next() else { continue };
        let rest: Vec<&str> = tok.collect();
        match tag {
            "v" => {
                if rest.len() < 3 {
                    return Err(Error::Parse { line, message: "vertex needs three coordinates".into() });
                }
                let mut p = [T::zero(); 3];
                for k in 0..3 {
                    p[k] = parse_real(rest[k], line)?;
                }
                out.vertices.push(p);
            }
            "vt" => {
                if rest.len() < 2 {
                    return Err(Error::Parse { line, message: "texture coordinate needs two values".into() });
                }
                out.texcoords.push([parse_real(rest[0], line)?, parse_real(rest[1], line)?]);
            }
            "f" => {
                if rest.len() < 3 {
                    return Err(Error::Parse { line, message: "face needs three vertices".into() });
                }
                if rest.len() > 3 {
                    return Err(Error::NonTriangularFace { line });
                }
                let mut f = [0usize; 3];
                for k in 0..3 {
                    let idx = rest[k].split('/').next().unwrap_or("");
                    let i: i64 = idx
                        .parse()
                        .map_err(|_| Error::Parse { line, message: format!("bad face index '{}'", rest[k]) })?;
                    let n = out.vertices.len() as i64;
                    let resolved = if i > 0 { i - 1 } else if i < 0 { n + i } else { -1 };
                    if resolved < 0 {
                        return Err(Error::Parse { line, message: format!("face index {i} out of range") });
                    }
                    f[k] = resolved as usize;
                }
                out.faces.push(f);
            }
            _ => {}
        }
    }
    Ok(out)
}

fn parse_real<T: Real>(s: &str, line: usize) -> Result<T> {
    let x: f64 = s.parse().map_err(|_| Error::Parse { line, message: format!("bad number '{s}'") })?;
    T::from_f64(x).ok_or_else(|| Error::Parse { line, message: format!("bad number '{s}'") })
}

pub fn load_mesh<T: Real>(path: impl AsRef<Path>) -> Result<TriMesh<T>> {
    let text = fs::read_to_string(path)?;
    let data = read_obj::<T>(&text)?;
    TriMesh::new(data.vertices, data.faces)
}

/// Serializes a mesh, optionally with one texture coordinate per vertex sharing the vertex index.
pub fn write_obj<T: Real>(mesh: &TriMesh<T>, uv: Option<&[[T; 2]]>, comments: &[String]) -> String {
    let mut s = String::new();
    for c in comments {
        let _ = writeln!(s, "# {c}");
    }
    for p in mesh.vertices() {
        let _ = writeln!(s, "v {:.17e} {:.17e} {:.17e}", p[0].as_f64(), p[1].as_f64(), p[2].as_f64());
    }
    if let Some(uv) = uv {
        for t in uv {
            let _ = writeln!(s, "vt {:.17e} {:.17e}", t[0].as_f64(), t[1].as_f64());
        }
    }
    for f in mesh.faces() {
        if uv.is_some() {
            let _ = writeln!(s, "f {0}/{0} {1}/{1} {2}/{2}", f[0] + 1, f[1] + 1, f[2] + 1);
        } else {
            let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_triangle() {
        let data = read_obj::<f64>("v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n").unwrap();
        let m = TriMesh::new(data.vertices, data.faces).unwrap();
        assert_eq!(m.n_vertices(), 3);
        assert_eq!(m.n_faces(), 1);
    }

    #[test]
    fn quad_rejected() {
        let err = read_obj::<f64>("v 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nf 1 2 3 4\n").unwrap_err();
        assert!(matches!(err, Error::NonTriangularFace { line: 5 }));
        assert!(err.to_string().contains("non-triangular face"));
    }

    #[test]
    fn slash_indices_and_round_trip() {
        let m = crate::mesh::generate::icosphere::<f64>(1);
        let uv: Vec<[f64; 2]> = (0..m.n_vertices()).map(|i| [i as f64 * 0.01, 0.5]).collect();
        let text = write_obj(&m, Some(&uv), &["genus 0".to_string()]);
        let data = read_obj::<f64>(&text).unwrap();
        assert_eq!(data.comments, vec!["genus 0".to_string()]);
        assert_eq!(data.faces, m.faces());
        assert_eq!(data.vertices, m.vertices());
        assert_eq!(data.texcoords, uv);
    }

    #[test]
    fn bad_number_reports_line() {
        let err = read_obj::<f64>("v 0 0 0\nv 1 x 0\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
    }
}
