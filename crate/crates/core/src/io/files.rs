//! Plain-text shape files: curves as `x,y` CSV, meshes as OFF.

use std::fs;
use std::path::Path;

use nalgebra::{Vector2, Vector3};

use crate::error::{Error, GeomError};
use crate::geom::{Curve2, Hypersurface, Mesh3, Shape};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShapeFormat {
    Csv,
    Off,
}

impl ShapeFormat {
    pub fn of(shape: &Shape) -> Self {
        match shape {
            Shape::Curve(_) => Self::Csv,
            Shape::Mesh(_) => Self::Off,
        }
    }

    pub fn extension(self) -> &'static str {
        match self {
            Self::Csv => "csv",
            Self::Off => "off",
        }
    }

    fn from_path(path: &Path, text: &str) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(e) if e.eq_ignore_ascii_case("off") => Self::Off,
            Some(e) if e.eq_ignore_ascii_case("csv") => Self::Csv,
            _ if text.trim_start().starts_with("OFF") => Self::Off,
            _ => Self::Csv,
        }
    }
}

fn parse_err(path: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_string(),
        line,
        message: message.into(),
    }
}

fn number(path: &str, line: usize, tok: &str) -> Result<f64, Error> {
    let v: f64 = tok
        .trim()
        .parse()
        .map_err(|_| parse_err(path, line, format!("'{}' is not a number", tok.trim())))?;
    if !v.is_finite() {
        return Err(parse_err(path, line, format!("non-finite value '{}'", tok.trim())));
    }
    Ok(v)
}

/// Lines that carry data, with their 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
}

/// Maps an invariant violation onto the file line responsible for it.
fn locate(err: GeomError, vertex_lines: &[usize], face_lines: &[usize], last: usize, path: &str) -> Error {
    let v = |i: usize| vertex_lines.get(i).copied().unwrap_or(last);
    let f = |i: usize| face_lines.get(i).copied().unwrap_or(last);
    let line = match &err {
        GeomError::NonFinite { index } | GeomError::DegenerateEdge { index } | GeomError::Cusp { index } => v(*index),
        GeomError::SelfIntersection { first, .. } => v(*first),
        GeomError::IndexOutOfRange { face, .. }
        | GeomError::DegenerateFace { face }
        | GeomError::FlippedFace { face } => f(*face),
        GeomError::NonManifoldVertex { vertex } => v(*vertex),
        _ => last,
    };
    parse_err(path, line, err.to_string())
}

pub fn parse_csv(text: &str, path: &str, auto_orient: bool) -> Result<Curve2, Error> {
    let mut pts = Vec::new();
    let mut lines = Vec::new();
    let mut last = 0;
    for (ln, l) in content_lines(text) {
        last = ln;
        let fields: Vec<&str> = l.split(',').collect();
        if fields.len() != 2 {
            return Err(parse_err(path, ln, format!("expected 'x,y', got {} fields", fields.len())));
        }
        pts.push(Vector2::new(number(path, ln, fields[0])?, number(path, ln, fields[1])?));
        lines.push(ln);
    }
    Curve2::with_orientation(pts, auto_orient).map_err(|e| locate(e, &lines, &[], last, path))
}

pub fn parse_off(text: &str, path: &str) -> Result<Mesh3, Error> {
    let mut it = content_lines(text);
    let (ln, header) = it.next().ok_or_else(|| parse_err(path, 1, "empty file"))?;
    // the counts may share the header line
    let counts_inline = header.strip_prefix("OFF").ok_or_else(|| parse_err(path, ln, "missing 'OFF' header"))?;
    let (cl, counts) = if counts_inline.trim().is_empty() {
        it.next().ok_or_else(|| parse_err(path, ln, "missing counts line"))?
    } else {
        (ln, counts_inline.trim())
    };
    let c: Vec<&str> = counts.split_whitespace().collect();
    if c.len() < 2 {
        return Err(parse_err(path, cl, "counts line needs vertex and face counts"));
    }
    let count = |s: &str| s.parse::<usize>().map_err(|_| parse_err(path, cl, format!("'{s}' is not a count")));
    let (nv, nf) = (count(c[0])?, count(c[1])?);
    let mut last = cl;
    let mut verts = Vec::with_capacity(nv);
    let mut vlines = Vec::with_capacity(nv);
    for k in 0..nv {
        let (ln, l) = it.next().ok_or_else(|| parse_err(path, last, format!("missing vertex {k} of {nv}")))?;
        last = ln;
        let x: Vec<&str> = l.split_whitespace().collect();
        if x.len() != 3 {
            return Err(parse_err(path, ln, format!("vertex {k} needs 3 coordinates, got {}", x.len())));
        }
        verts.push(Vector3::new(number(path, ln, x[0])?, number(path, ln, x[1])?, number(path, ln, x[2])?));
        vlines.push(ln);
    }
    let mut faces = Vec::with_capacity(nf);
    let mut flines = Vec::with_capacity(nf);
    for k in 0..nf {
        let (ln, l) = it.next().ok_or_else(|| parse_err(path, last, format!("missing face {k} of {nf}")))?;
        last = ln;
        let x: Vec<&str> = l.split_whitespace().collect();
        if x.first() != Some(&"3") || x.len() != 4 {
            return Err(parse_err(path, ln, format!("face {k} must be '3 i j k'")));
        }
        let mut f = [0usize; 3];
        for (slot, tok) in f.iter_mut().zip(&x[1..]) {
            *slot = tok
                .parse()
                .map_err(|_| parse_err(path, ln, format!("face {k}: '{tok}' is not an index")))?;
            if *slot >= nv {
                return Err(parse_err(path, ln, format!("face {k}: vertex {slot} out of range")));
            }
        }
        faces.push(f);
        flines.push(ln);
    }
    if let Some((ln, _)) = it.next() {
        return Err(parse_err(path, ln, "unexpected content after the last face"));
    }
    Mesh3::new(verts, faces).map_err(|e| locate(e, &vlines, &flines, last, path))
}

pub fn parse_shape(text: &str, path: &Path, auto_orient: bool) -> Result<Shape, Error> {
    let name = path.display().to_string();
    Ok(match ShapeFormat::from_path(path, text) {
        ShapeFormat::Csv => parse_csv(text, &name, auto_orient)?.into(),
        ShapeFormat::Off => parse_off(text, &name)?.into(),
    })
}

pub fn load_shape(path: &Path, auto_orient: bool) -> Result<Shape, Error> {
    let text = fs::read_to_string(path)?;
    parse_shape(&text, path, auto_orient)
}

/// Text in the shape's native format, 17 significant digits.
pub fn format_shape(shape: &Shape) -> String {
    let mut out = String::new();
    match shape {
        Shape::Curve(c) => {
            for p in c.vertices() {
                out.push_str(&format!("{:.16e},{:.16e}\n", p.x, p.y));
            }
        }
        Shape::Mesh(m) => {
            out.push_str(&format!("OFF\n{} {} 0\n", m.vertices().len(), m.faces().len()));
            for p in m.vertices() {
                out.push_str(&format!("{:.16e} {:.16e} {:.16e}\n", p.x, p.y, p.z));
            }
            for f in m.faces() {
                out.push_str(&format!("3 {} {} {}\n", f[0], f[1], f[2]));
            }
        }
    }
    out
}

pub fn save_shape(shape: &Shape, path: &Path) -> Result<(), Error> {
    fs::write(path, format_shape(shape))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::generate::{circle, icosphere};

    #[test]
    fn csv_round_trip_is_exact() {
        let c: Shape = circle(0.7, [0.1, -0.3], 37).unwrap().into();
        let back = parse_shape(&format_shape(&c), Path::new("c.csv"), false).unwrap();
        assert_eq!(c.coordinates(), back.coordinates());
    }

    #[test]
    fn off_round_trip_is_exact() {
        let m: Shape = icosphere(0.5, 2).unwrap().into();
        let back = parse_shape(&format_shape(&m), Path::new("m.off"), false).unwrap();
        assert_eq!(m.coordinates(), back.coordinates());
        assert_eq!(m.as_mesh().unwrap().faces(), back.as_mesh().unwrap().faces());
    }

    #[test]
    fn three_points_rejected() {
        let err = parse_csv("0,0\n1,0\n0,1\n", "t.csv", false).unwrap_err();
        assert!(err.to_string().contains("at least 8"), "{err}");
    }

    #[test]
    fn bad_number_names_line() {
        let err = parse_csv("0,0\n1,0\n1,x\n0,1\n", "t.csv", false).unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }), "{err}");
    }

    #[test]
    fn clockwise_csv_needs_auto_orient() {
        let text = "0,0\n0,1\n0,2\n1,2\n2,2\n2,1\n2,0\n1,0\n";
        assert!(parse_csv(text, "t.csv", false).is_err());
        let c = parse_csv(text, "t.csv", true).unwrap();
        assert!(c.signed_area() > 0.0);
    }

    #[test]
    fn flipped_face_is_named() {
        let text = "OFF\n4 4 0\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n";
        assert!(parse_off(text, "t.off").is_ok());
        let flipped = text.replace("3 0 1 3", "3 0 3 1");
        let err = parse_off(&flipped, "t.off").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("face"), "{msg}");
        assert!(matches!(err, Error::Parse { line, .. } if line >= 7), "{msg}");
    }
}
