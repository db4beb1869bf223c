//! Conforming triangulations: storage, connectivity, per-cell geometry,
//! generators and the plain-text file format.
//!
//! Local numbering follows one convention everywhere: local edge `i` of a
//! cell is opposite local vertex `i`, i.e. it joins vertices `i+1` and `i+2`
//! (indices mod 3), and the edge vector `ℓ_i = a_{i+2} - a_{i+1}`.

mod generate;
mod geometry;
mod io;
mod triangle;

use std::collections::HashMap;

pub use generate::{generate_graded, generate_l_shape, generate_uniform, Grading, Rect};
pub use geometry::{cell_geometry, CellGeometry};
pub use io::{load_mesh, parse_mesh, save_mesh, write_mesh};
pub use triangle::parse_triangle;

use crate::{Error, Result, Scalar, Vec2};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex<T> {
    pub x: T,
    pub y: T,
    /// 0 = interior, >0 = boundary segment id.
    pub boundary_marker: u32,
}

impl<T: Scalar> Vertex<T> {
    pub fn new(x: T, y: T) -> Self {
        Self { x, y, boundary_marker: 0 }
    }

    pub fn with_marker(x: T, y: T, boundary_marker: u32) -> Self {
        Self { x, y, boundary_marker }
    }

    #[inline]
    pub fn pos(&self) -> Vec2<T> {
        Vec2::new(self.x, self.y)
    }
}

/// Triangle given by three vertex indices in counterclockwise order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Cell {
    pub v: [usize; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Edge {
    /// Sorted vertex indices.
    pub endpoints: [usize; 2],
    /// First adjacent cell and, for interior edges, the second one.
    pub cells: (usize, Option<usize>),
    pub boundary: bool,
}

impl Edge {
    pub fn adjacent_cells(&self) -> impl Iterator<Item = usize> {
        std::iter::once(self.cells.0).chain(self.cells.1)
    }
}

#[derive(Clone, Debug)]
pub struct Mesh<T> {
    vertices: Vec<Vertex<T>>,
    cells: Vec<Cell>,
    edges: Vec<Edge>,
    cell_edges: Vec<[usize; 3]>,
    boundary_vertex: Vec<bool>,
    neighbors: Vec<Vec<usize>>,
}

impl<T: Scalar> Mesh<T> {
    pub fn vertices(&self) -> &[Vertex<T>] {
        &self.vertices
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// Per-cell edge indices; entry `i` is the edge opposite local vertex `i`.
    pub fn cell_edges(&self) -> &[[usize; 3]] {
        &self.cell_edges
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn num_cells(&self) -> usize {
        self.cells.len()
    }

    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    #[inline]
    pub fn position(&self, v: usize) -> Vec2<T> {
        self.vertices[v].pos()
    }

    pub fn cell_points(&self, k: usize) -> [Vec2<T>; 3] {
        let [a, b, c] = self.cells[k].v;
        [self.position(a), self.position(b), self.position(c)]
    }

    /// Geometry of cell `k`. Cells are validated at build time, so this
    /// cannot fail for a mesh produced by [`build_mesh`].
    pub fn geometry(&self, k: usize) -> CellGeometry<T> {
        CellGeometry::from_points(self.cell_points(k)).expect("cells have positive area after build")
    }

    /// True when the vertex lies on an edge with a single adjacent cell.
    #[inline]
    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.boundary_vertex[v]
    }

    /// Vertices sharing an edge with `v`, in ascending order.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[v]
    }

    /// `V - E + T`; equals 1 for a triangulation of a simply connected domain.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertices.len() as i64 - self.edges.len() as i64 + self.cells.len() as i64
    }

    /// Total area of the triangulated domain.
    pub fn area(&self) -> T {
        crate::scalar::compensated_sum((0..self.num_cells()).map(|k| {
            let [a, b, c] = self.cell_points(k);
            (b - a).cross(c - a) * T::lit(0.5)
        }))
    }

    /// Gives every topological boundary vertex without a marker the marker 1.
    pub(crate) fn infer_boundary_markers(&mut self) {
        for (v, on_boundary) in self.vertices.iter_mut().zip(&self.boundary_vertex) {
            if *on_boundary && v.boundary_marker == 0 {
                v.boundary_marker = 1;
            }
        }
    }

    /// Local index (0..3) of `edge` within cell `k`.
    pub fn local_edge_index(&self, k: usize, edge: usize) -> Option<usize> {
        self.cell_edges[k].iter().position(|&e| e == edge)
    }
}

#[inline]
fn signed_double_area<T: Scalar>(a: Vec2<T>, b: Vec2<T>, c: Vec2<T>) -> T {
    (b - a).cross(c - a)
}

/// Builds the edge structure and adjacency of a triangulation.
///
/// Clockwise cells are reoriented by swapping their last two vertices. Cells
/// with repeated vertices or zero area, duplicated cells, and edges shared by
/// more than two cells (or traversed twice in the same direction) are
/// rejected with an error naming the offending cell.
pub fn build_mesh<T: Scalar>(vertices: Vec<Vertex<T>>, cells: Vec<[usize; 3]>) -> Result<Mesh<T>> {
    let nv = vertices.len();
    for (i, v) in vertices.iter().enumerate() {
        if !v.pos().is_finite() {
            return Err(Error::NonFiniteVertex { vertex: i });
        }
    }

    let mut oriented = Vec::with_capacity(cells.len());
    let mut seen: HashMap<[usize; 3], usize> = HashMap::with_capacity(cells.len());
    for (k, tri) in cells.iter().enumerate() {
        for &idx in tri {
            if idx >= nv {
                return Err(Error::IndexOutOfRange { cell: k, index: idx, count: nv });
            }
        }
        let [a, b, c] = *tri;
        if a == b || b == c || a == c {
            return Err(Error::DegenerateCell { cell: k });
        }
        let area2 = signed_double_area(vertices[a].pos(), vertices[b].pos(), vertices[c].pos());
        if area2 == T::zero() || !area2.is_finite() {
            return Err(Error::DegenerateCell { cell: k });
        }
        let v = if area2 < T::zero() { [a, c, b] } else { [a, b, c] };
        let mut key = v;
        key.sort_unstable();
        if let Some(&first) = seen.get(&key) {
            return Err(Error::DuplicateCell { cell: k, first });
        }
        seen.insert(key, k);
        oriented.push(Cell { v });
    }

    let mut edges: Vec<Edge> = Vec::with_capacity(oriented.len() * 3 / 2 + nv);
    // directed traversal (from, to) of the first cell, per edge
    let mut first_dir: Vec<(usize, usize)> = Vec::with_capacity(edges.capacity());
    let mut lookup: HashMap<(usize, usize), usize> = HashMap::with_capacity(edges.capacity());
    let mut cell_edges = Vec::with_capacity(oriented.len());
    for (k, cell) in oriented.iter().enumerate() {
        let mut local = [0usize; 3];
        for (i, slot) in local.iter_mut().enumerate() {
            let from = cell.v[(i + 1) % 3];
            let to = cell.v[(i + 2) % 3];
            let key = (from.min(to), from.max(to));
            match lookup.get(&key) {
                None => {
                    let id = edges.len();
                    edges.push(Edge { endpoints: [key.0, key.1], cells: (k, None), boundary: true });
                    first_dir.push((from, to));
                    lookup.insert(key, id);
                    *slot = id;
                }
                Some(&id) => {
                    let e = &mut edges[id];
                    if e.cells.1.is_some() || first_dir[id] == (from, to) {
                        return Err(Error::NonConforming { cell: k, a: key.0, b: key.1 });
                    }
                    e.cells.1 = Some(k);
                    e.boundary = false;
                    *slot = id;
                }
            }
        }
        cell_edges.push(local);
    }

    let mut boundary_vertex = vec![false; nv];
    let mut neighbors = vec![Vec::new(); nv];
    for e in &edges {
        let [a, b] = e.endpoints;
        if e.boundary {
            boundary_vertex[a] = true;
            boundary_vertex[b] = true;
        }
        neighbors[a].push(b);
        neighbors[b].push(a);
    }
    for n in &mut neighbors {
        n.sort_unstable();
    }

    Ok(Mesh { vertices, cells: oriented, edges, cell_edges, boundary_vertex, neighbors })
}
