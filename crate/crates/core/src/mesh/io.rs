//! Plain-text mesh format.
//!
//! ```text
//! # comment lines start with '#'
//! nv nt
//! x y marker      (nv lines; marker optional, inferred when absent)
//! i j k           (nt lines; 0-based vertex indices)
//! ```
//!
//! Floats are written with 17 significant digits.

use std::fs;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::str::FromStr;

use crate::{Error, Result, Scalar};

use super::{build_mesh, signed_double_area, Mesh, Vertex};

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: message.into() }
}

fn token<V: FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<V> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("invalid {what} `{tok}`")))
}

/// Parses a mesh from its text representation.
pub fn parse_mesh<T: Scalar>(text: &str) -> Result<Mesh<T>> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "empty file, expected `nv nt`"))?;
    let mut it = header.split_whitespace();
    let nv: usize = token(it.next(), hline, "vertex count")?;
    let nt: usize = token(it.next(), hline, "cell count")?;
    if it.next().is_some() {
        return Err(parse_err(hline, "header must be `nv nt`"));
    }

    let mut vertices = Vec::with_capacity(nv);
    let mut any_marker_missing = false;
    for k in 0..nv {
        let (ln, l) = lines
            .next()
            .ok_or_else(|| parse_err(hline, format!("expected {nv} vertices, found {k}")))?;
        let mut it = l.split_whitespace();
        let x: f64 = token(it.next(), ln, "x coordinate")?;
        let y: f64 = token(it.next(), ln, "y coordinate")?;
        let marker: u32 = match it.next() {
            Some(tok) => token(Some(tok), ln, "boundary marker")?,
            None => {
                any_marker_missing = true;
                0
            }
        };
        if it.next().is_some() {
            return Err(parse_err(ln, "vertex line must be `x y [marker]`"));
        }
        if !(x.is_finite() && y.is_finite()) {
            return Err(parse_err(ln, "non-finite coordinate"));
        }
        vertices.push(Vertex::with_marker(T::lit(x), T::lit(y), marker));
    }

    let mut cells = Vec::with_capacity(nt);
    let mut cell_lines = Vec::with_capacity(nt);
    for k in 0..nt {
        let (ln, l) =
            lines.next().ok_or_else(|| parse_err(hline, format!("expected {nt} cells, found {k}")))?;
        let mut it = l.split_whitespace();
        let mut tri = [0usize; 3];
        for (slot, name) in tri.iter_mut().zip(["i", "j", "k"]) {
            *slot = token(it.next(), ln, &format!("vertex index {name}"))?;
            if *slot >= nv {
                return Err(parse_err(ln, format!("vertex index {} out of range", *slot)));
            }
        }
        if it.next().is_some() {
            return Err(parse_err(ln, "cell line must be `i j k`"));
        }
        let [a, b, c] = tri;
        let degenerate = a == b
            || b == c
            || a == c
            || signed_double_area(vertices[a].pos(), vertices[b].pos(), vertices[c].pos()) == T::zero();
        if degenerate {
            return Err(parse_err(ln, format!("degenerate cell at line {ln}")));
        }
        cells.push(tri);
        cell_lines.push(ln);
    }
    if let Some((ln, _)) = lines.next() {
        return Err(parse_err(ln, "unexpected trailing content"));
    }

    let mut mesh = build_mesh(vertices, cells).map_err(|e| match e {
        Error::DuplicateCell { cell, first } => {
            parse_err(cell_lines[cell], format!("cell duplicates the cell at line {}", cell_lines[first]))
        }
        Error::NonConforming { cell, a, b } => {
            parse_err(cell_lines[cell], format!("non-conforming cell at edge ({a}, {b})"))
        }
        Error::DegenerateCell { cell } => parse_err(cell_lines[cell], "degenerate cell"),
        other => other,
    })?;
    if any_marker_missing {
        mesh.infer_boundary_markers();
    }
    Ok(mesh)
}

pub fn load_mesh<T: Scalar>(path: impl AsRef<Path>) -> Result<Mesh<T>> {
    parse_mesh(&fs::read_to_string(path)?)
}

/// Writes the mesh in the text format.
pub fn write_mesh<T: Scalar, W: Write>(mesh: &Mesh<T>, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", mesh.num_vertices(), mesh.num_cells())?;
    for v in mesh.vertices() {
        writeln!(out, "{:.16e} {:.16e} {}", v.x.to_f64_lossy(), v.y.to_f64_lossy(), v.boundary_marker)?;
    }
    for c in mesh.cells() {
        writeln!(out, "{} {} {}", c.v[0], c.v[1], c.v[2])?;
    }
    out.flush()?;
    Ok(())
}

pub fn save_mesh<T: Scalar>(mesh: &Mesh<T>, path: impl AsRef<Path>) -> Result<()> {
    let file = fs::File::create(path)?;
    write_mesh(mesh, BufWriter::new(file))
}
