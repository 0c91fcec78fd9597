//! Composite regions: grid cells plus marked slit and filament edges.

use std::collections::BTreeSet;

use crate::grid::{CellId, EdgeId, Grid};

/// Region occupied by the two-phase composite: a cell set together with
/// slit edges (both neighbours inside, density-1 boundary) and filament
/// edges (both neighbours outside, density-0 boundary).
#[derive(Clone, Debug, PartialEq)]
pub struct CompositeRegion {
    cells: Vec<bool>,
    pub slits: BTreeSet<EdgeId>,
    pub filaments: BTreeSet<EdgeId>,
}

impl CompositeRegion {
    pub fn from_cells(grid: &Grid, cells: impl IntoIterator<Item = CellId>) -> Self {
        let mut flags = vec![false; grid.cell_count()];
        for c in cells {
            flags[grid.cell_index(c)] = true;
        }
        CompositeRegion {
            cells: flags,
            slits: BTreeSet::new(),
            filaments: BTreeSet::new(),
        }
    }

    pub fn from_flags(flags: Vec<bool>) -> Self {
        CompositeRegion {
            cells: flags,
            slits: BTreeSet::new(),
            filaments: BTreeSet::new(),
        }
    }

    pub fn contains_cell(&self, grid: &Grid, c: CellId) -> bool {
        self.cells[grid.cell_index(c)]
    }

    pub fn set_cell(&mut self, grid: &Grid, c: CellId, inside: bool) {
        self.cells[grid.cell_index(c)] = inside;
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn cell_flags(&self) -> &[bool] {
        &self.cells
    }

    /// Number of adjacent composite cells of an edge.
    pub fn edge_density(&self, grid: &Grid, e: EdgeId) -> u8 {
        grid.edge_cells(e)
            .iter()
            .flatten()
            .filter(|&&c| self.contains_cell(grid, c))
            .count() as u8
    }

    /// Full topological boundary edge set of the region (reduced boundary,
    /// slits, filaments), including container-wall edges.
    pub fn boundary_edges(&self, grid: &Grid) -> Vec<EdgeId> {
        let mut out = BTreeSet::new();
        for e in grid.edges() {
            let [a, b] = grid.edge_cells(e);
            let ins = |c: Option<CellId>| c.map(|c| self.contains_cell(grid, c)).unwrap_or(false);
            let da = ins(a);
            let db = ins(b);
            if da != db {
                out.insert(e);
            }
            if (a.is_none() || b.is_none()) && (da || db) {
                out.insert(e);
            }
        }
        out.extend(self.slits.iter().copied());
        out.extend(self.filaments.iter().copied());
        out.into_iter().collect()
    }

    /// Boundary edges strictly inside Ω.
    pub fn interior_boundary_edges(&self, grid: &Grid) -> Vec<EdgeId> {
        self.boundary_edges(grid)
            .into_iter()
            .filter(|&e| !grid.edge_on_wall(e))
            .collect()
    }
}
