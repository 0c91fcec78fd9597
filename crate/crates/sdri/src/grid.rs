//! Rectangular grid over the container `(-l,l) x (-L,L)` with indexed
//! vertices, cells, and lattice edges.
//!
//! Every region in this crate is a union of grid cells plus marked lattice
//! edges, so all geometric queries reduce to integer index arithmetic. The
//! level `y = 0` must lie on a grid line (`ny` even): substrate heights are
//! measured against it.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;

/// Cell index: column `i` in `0..nx`, row `j` in `0..ny` (row 0 at the bottom).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CellId {
    pub i: u32,
    pub j: u32,
}

impl CellId {
    pub fn new(i: usize, j: usize) -> Self {
        CellId {
            i: i as u32,
            j: j as u32,
        }
    }
}

/// Lattice vertex index: `i` in `0..=nx`, `j` in `0..=ny`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId {
    pub i: u32,
    pub j: u32,
}

impl VertexId {
    pub fn new(i: usize, j: usize) -> Self {
        VertexId {
            i: i as u32,
            j: j as u32,
        }
    }
}

/// Axis of a lattice edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Axis {
    /// Unit segment from `(i,j)` to `(i+1,j)`.
    Horizontal,
    /// Unit segment from `(i,j)` to `(i,j+1)`.
    Vertical,
}

/// Lattice edge: base vertex (lower-left endpoint) plus axis.
///
/// The ordering `(vertex, axis)` is the canonical edge order used for
/// deterministic accumulation and component labeling.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId {
    pub vertex: VertexId,
    pub axis: Axis,
}

impl EdgeId {
    pub fn horizontal(i: usize, j: usize) -> Self {
        EdgeId {
            vertex: VertexId::new(i, j),
            axis: Axis::Horizontal,
        }
    }

    pub fn vertical(i: usize, j: usize) -> Self {
        EdgeId {
            vertex: VertexId::new(i, j),
            axis: Axis::Vertical,
        }
    }
}

/// The container rectangle `(-l,l) x (-L,L)` subdivided into `nx x ny` cells.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    pub l: f64,
    #[serde(rename = "L")]
    pub big_l: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Grid {
    /// Builds a grid; `ny` must be even so that `y = 0` is a grid line.
    pub fn new(l: f64, big_l: f64, nx: usize, ny: usize) -> Result<Self, GeometryError> {
        if !(l > 0.0) || !(big_l > 0.0) {
            return Err(GeometryError::InvalidGrid(format!(
                "half-extents must be positive, got l={l}, L={big_l}"
            )));
        }
        if nx < 1 || ny < 2 {
            return Err(GeometryError::InvalidGrid(format!(
                "need nx >= 1 and ny >= 2, got nx={nx}, ny={ny}"
            )));
        }
        if !ny.is_multiple_of(2) {
            return Err(GeometryError::InvalidGrid(format!(
                "ny must be even so that y = 0 lies on a grid line, got ny={ny}"
            )));
        }
        Ok(Grid { l, big_l, nx, ny })
    }

    /// Unit square helper used throughout the tests.
    pub fn square(n: usize) -> Self {
        Grid::new(1.0, 1.0, n, n).expect("square grid")
    }

    pub fn hx(&self) -> f64 {
        2.0 * self.l / self.nx as f64
    }

    pub fn hy(&self) -> f64 {
        2.0 * self.big_l / self.ny as f64
    }

    /// Area of one cell.
    pub fn cell_area(&self) -> f64 {
        self.hx() * self.hy()
    }

    /// Row index of the `y = 0` grid line.
    pub fn zero_row(&self) -> usize {
        self.ny / 2
    }

    pub fn cell_count(&self) -> usize {
        self.nx * self.ny
    }

    pub fn vertex_count(&self) -> usize {
        (self.nx + 1) * (self.ny + 1)
    }

    pub fn cell_index(&self, c: CellId) -> usize {
        c.j as usize * self.nx + c.i as usize
    }

    pub fn vertex_index(&self, v: VertexId) -> usize {
        v.j as usize * (self.nx + 1) + v.i as usize
    }

    pub fn x_line(&self, i: usize) -> f64 {
        -self.l + i as f64 * self.hx()
    }

    pub fn y_line(&self, j: usize) -> f64 {
        -self.big_l + j as f64 * self.hy()
    }

    pub fn vertex_pos(&self, v: VertexId) -> (f64, f64) {
        (self.x_line(v.i as usize), self.y_line(v.j as usize))
    }

    pub fn cell_center(&self, c: CellId) -> (f64, f64) {
        (
            self.x_line(c.i as usize) + 0.5 * self.hx(),
            self.y_line(c.j as usize) + 0.5 * self.hy(),
        )
    }

    pub fn cells(&self) -> impl Iterator<Item = CellId> + '_ {
        let nx = self.nx;
        (0..self.ny).flat_map(move |j| (0..nx).map(move |i| CellId::new(i, j)))
    }

    /// All lattice edges in canonical `(vertex, axis)` order.
    pub fn edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::with_capacity(self.nx * (self.ny + 1) + (self.nx + 1) * self.ny);
        for j in 0..=self.ny {
            for i in 0..=self.nx {
                if i < self.nx {
                    out.push(EdgeId::horizontal(i, j));
                }
                if j < self.ny {
                    out.push(EdgeId::vertical(i, j));
                }
            }
        }
        out.sort();
        out
    }

    pub fn edge_valid(&self, e: EdgeId) -> bool {
        let (i, j) = (e.vertex.i as usize, e.vertex.j as usize);
        match e.axis {
            Axis::Horizontal => i < self.nx && j <= self.ny,
            Axis::Vertical => i <= self.nx && j < self.ny,
        }
    }

    /// True when the edge lies on the container boundary; such edges carry no
    /// surface energy.
    pub fn edge_on_wall(&self, e: EdgeId) -> bool {
        let (i, j) = (e.vertex.i as usize, e.vertex.j as usize);
        match e.axis {
            Axis::Horizontal => j == 0 || j == self.ny,
            Axis::Vertical => i == 0 || i == self.nx,
        }
    }

    pub fn edge_length(&self, e: EdgeId) -> f64 {
        match e.axis {
            Axis::Horizontal => self.hx(),
            Axis::Vertical => self.hy(),
        }
    }

    pub fn edge_midpoint(&self, e: EdgeId) -> (f64, f64) {
        let (x, y) = self.vertex_pos(e.vertex);
        match e.axis {
            Axis::Horizontal => (x + 0.5 * self.hx(), y),
            Axis::Vertical => (x, y + 0.5 * self.hy()),
        }
    }

    pub fn edge_endpoints(&self, e: EdgeId) -> (VertexId, VertexId) {
        let VertexId { i, j } = e.vertex;
        match e.axis {
            Axis::Horizontal => (e.vertex, VertexId { i: i + 1, j }),
            Axis::Vertical => (e.vertex, VertexId { i, j: j + 1 }),
        }
    }

    /// The two cells adjacent to an edge in fixed order: (below, above) for a
    /// horizontal edge, (left, right) for a vertical one. `None` outside Ω.
    pub fn edge_cells(&self, e: EdgeId) -> [Option<CellId>; 2] {
        let (i, j) = (e.vertex.i as usize, e.vertex.j as usize);
        match e.axis {
            Axis::Horizontal => [
                if j > 0 {
                    Some(CellId::new(i, j - 1))
                } else {
                    None
                },
                if j < self.ny {
                    Some(CellId::new(i, j))
                } else {
                    None
                },
            ],
            Axis::Vertical => [
                if i > 0 {
                    Some(CellId::new(i - 1, j))
                } else {
                    None
                },
                if i < self.nx {
                    Some(CellId::new(i, j))
                } else {
                    None
                },
            ],
        }
    }

    /// Outward unit normal for a reduced-boundary edge whose inside cell is
    /// `inside` (the first/second slot of [`Grid::edge_cells`]).
    pub fn edge_normal_from(&self, e: EdgeId, inside_first_slot: bool) -> (f64, f64) {
        match (e.axis, inside_first_slot) {
            (Axis::Horizontal, true) => (0.0, 1.0),
            (Axis::Horizontal, false) => (0.0, -1.0),
            (Axis::Vertical, true) => (1.0, 0.0),
            (Axis::Vertical, false) => (-1.0, 0.0),
        }
    }

    /// The four edges bounding a cell.
    pub fn cell_edges(&self, c: CellId) -> [EdgeId; 4] {
        let (i, j) = (c.i as usize, c.j as usize);
        [
            EdgeId::horizontal(i, j),
            EdgeId::horizontal(i, j + 1),
            EdgeId::vertical(i, j),
            EdgeId::vertical(i + 1, j),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_odd_ny() {
        assert!(Grid::new(1.0, 1.0, 4, 5).is_err());
        assert!(Grid::new(1.0, 1.0, 4, 4).is_ok());
    }

    #[test]
    fn edge_cells_orientation() {
        let g = Grid::square(4);
        let e = EdgeId::horizontal(1, 2);
        let [below, above] = g.edge_cells(e);
        assert_eq!(below, Some(CellId::new(1, 1)));
        assert_eq!(above, Some(CellId::new(1, 2)));
        let e = EdgeId::vertical(0, 1);
        let [left, right] = g.edge_cells(e);
        assert_eq!(left, None);
        assert_eq!(right, Some(CellId::new(0, 1)));
        assert!(g.edge_on_wall(e));
    }

    #[test]
    fn cell_sizes() {
        let g = Grid::new(2.0, 1.0, 8, 4).unwrap();
        assert!((g.hx() - 0.5).abs() < 1e-15);
        assert!((g.hy() - 0.5).abs() < 1e-15);
        assert_eq!(g.zero_row(), 2);
    }
}
