//! Reader for the `.node` / `.ele` pair written by Shewchuk's Triangle.

use crate::{Error, Result, Scalar};

use super::{build_mesh, Mesh, Vertex};

fn parse_err(file: &str, line: usize, message: impl Into<String>) -> Error {
    Error::Parse { line, message: format!("{file}: {}", message.into()) }
}

/// Data lines with `#` comments stripped, numbered from 1.
fn records(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("");
        let toks: Vec<&str> = l.split_whitespace().collect();
        (!toks.is_empty()).then_some((i + 1, toks))
    })
}

fn num<V: std::str::FromStr>(file: &str, line: usize, tok: Option<&&str>, what: &str) -> Result<V> {
    let tok = tok.ok_or_else(|| parse_err(file, line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(file, line, format!("invalid {what} `{tok}`")))
}

/// Builds a mesh from the contents of a `.node` and an `.ele` file.
///
/// Vertex numbering may start at 0 or 1 (taken from the first vertex).
/// Attributes are ignored; node boundary markers are kept when present and
/// inferred otherwise. Only linear (3-node) triangles are accepted.
pub fn parse_triangle<T: Scalar>(node: &str, ele: &str) -> Result<Mesh<T>> {
    let mut nodes = records(node);
    let (hl, h) = nodes.next().ok_or_else(|| parse_err("node", 1, "empty file"))?;
    let nv: usize = num("node", hl, h.first(), "vertex count")?;
    let dim: usize = num("node", hl, h.get(1), "dimension")?;
    let nattr: usize = num("node", hl, h.get(2), "attribute count")?;
    let nmark: usize = num("node", hl, h.get(3), "marker count")?;
    if dim != 2 {
        return Err(parse_err("node", hl, "only two-dimensional meshes are supported"));
    }
    let mut base = None;
    let mut vertices = Vec::with_capacity(nv);
    for k in 0..nv {
        let (ln, t) = nodes.next().ok_or_else(|| parse_err("node", hl, format!("expected {nv} vertices, found {k}")))?;
        let id: usize = num("node", ln, t.first(), "vertex number")?;
        let first = *base.get_or_insert(id);
        if id != first + k {
            return Err(parse_err("node", ln, format!("vertex number {id} out of sequence")));
        }
        let x: f64 = num("node", ln, t.get(1), "x coordinate")?;
        let y: f64 = num("node", ln, t.get(2), "y coordinate")?;
        let marker: u32 = if nmark > 0 { num("node", ln, t.get(3 + nattr), "boundary marker")? } else { 0 };
        vertices.push(Vertex::with_marker(T::lit(x), T::lit(y), marker));
    }
    let base = base.unwrap_or(0);

    let mut eles = records(ele);
    let (hl, h) = eles.next().ok_or_else(|| parse_err("ele", 1, "empty file"))?;
    let nt: usize = num("ele", hl, h.first(), "triangle count")?;
    let per: usize = num("ele", hl, h.get(1), "nodes per triangle")?;
    if per != 3 {
        return Err(parse_err("ele", hl, "only 3-node triangles are supported"));
    }
    let mut cells = Vec::with_capacity(nt);
    for k in 0..nt {
        let (ln, t) = eles.next().ok_or_else(|| parse_err("ele", hl, format!("expected {nt} triangles, found {k}")))?;
        let mut tri = [0usize; 3];
        for (i, slot) in tri.iter_mut().enumerate() {
            let id: usize = num("ele", ln, t.get(1 + i), "vertex number")?;
            *slot = id
                .checked_sub(base)
                .filter(|&v| v < nv)
                .ok_or_else(|| parse_err("ele", ln, format!("vertex number {id} out of range")))?;
        }
        cells.push(tri);
    }
    let mut mesh = build_mesh(vertices, cells)?;
    if nmark == 0 {
        mesh.infer_boundary_markers();
    }
    Ok(mesh)
}
