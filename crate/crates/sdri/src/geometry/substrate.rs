//! Substrate regions: subgraph of a height profile minus a closed crack set.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::geometry::profile::HeightProfile;
use crate::grid::{CellId, EdgeId, Grid};

/// Finite set of lattice edges representing internal substrate cracks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrackSet {
    edges: BTreeSet<EdgeId>,
}

impl CrackSet {
    pub fn new() -> Self {
        CrackSet::default()
    }

    pub fn from_edges(edges: impl IntoIterator<Item = EdgeId>) -> Self {
        CrackSet {
            edges: edges.into_iter().collect(),
        }
    }

    pub fn contains(&self, e: EdgeId) -> bool {
        self.edges.contains(&e)
    }

    pub fn insert(&mut self, e: EdgeId) {
        self.edges.insert(e);
    }

    pub fn remove(&mut self, e: EdgeId) -> bool {
        self.edges.remove(&e)
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Substrate with a height profile and internal cracks; cell set and boundary
/// edge sets are derived once at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct SubstrateRegion {
    pub profile: HeightProfile,
    pub cracks: CrackSet,
    cells: Vec<bool>,
    spike_edges: BTreeSet<EdgeId>,
}

/// Builds the substrate from a height profile and a crack set.
///
/// Every crack edge must lie in the closed subgraph, i.e. have at least one
/// adjacent substrate cell; edges violating this are reported by id.
pub fn substrate_from_height(
    grid: &Grid,
    profile: HeightProfile,
    cracks: CrackSet,
) -> Result<SubstrateRegion, GeometryError> {
    let mut cells = vec![false; grid.cell_count()];
    for c in grid.cells() {
        if (c.j as usize) < profile.rows()[c.i as usize] {
            cells[grid.cell_index(c)] = true;
        }
    }
    for e in cracks.iter() {
        if !grid.edge_valid(e) {
            return Err(GeometryError::CrackOutsideSubstrate(e));
        }
        let inside = grid
            .edge_cells(e)
            .iter()
            .flatten()
            .any(|&c| cells[grid.cell_index(c)]);
        if !inside {
            return Err(GeometryError::CrackOutsideSubstrate(e));
        }
    }
    let spike_edges = profile.spike_edges().into_iter().collect();
    Ok(SubstrateRegion {
        profile,
        cracks,
        cells,
        spike_edges,
    })
}

impl SubstrateRegion {
    pub fn contains_cell(&self, grid: &Grid, c: CellId) -> bool {
        self.cells[grid.cell_index(c)]
    }

    pub fn cell_count(&self) -> usize {
        self.cells.iter().filter(|&&b| b).count()
    }

    pub fn cell_flags(&self) -> &[bool] {
        &self.cells
    }

    pub fn is_spike_edge(&self, e: EdgeId) -> bool {
        self.spike_edges.contains(&e)
    }

    pub fn spike_edge_set(&self) -> &BTreeSet<EdgeId> {
        &self.spike_edges
    }

    /// Number of adjacent substrate cells of an edge (0, 1 or 2 inside Ω).
    pub fn edge_density(&self, grid: &Grid, e: EdgeId) -> u8 {
        grid.edge_cells(e)
            .iter()
            .flatten()
            .filter(|&&c| self.contains_cell(grid, c))
            .count() as u8
    }

    /// Full boundary edge set: outer subgraph boundary, cracks, and spikes.
    /// Includes edges on the container wall (needed for signed distances);
    /// energy integrals filter those out.
    pub fn boundary_edges(&self, grid: &Grid) -> Vec<EdgeId> {
        let mut out = BTreeSet::new();
        for e in grid.edges() {
            let [a, b] = grid.edge_cells(e);
            let ins = |c: Option<CellId>| c.map(|c| self.contains_cell(grid, c)).unwrap_or(false);
            let da = ins(a);
            let db = ins(b);
            if da != db || (da && db && self.cracks.contains(e)) {
                out.insert(e);
            }
            // Edges on the wall with substrate on the single existing side.
            if (a.is_none() || b.is_none()) && (da || db) {
                out.insert(e);
            }
        }
        out.extend(self.spike_edges.iter().copied());
        out.into_iter().collect()
    }

    /// Boundary edges strictly inside Ω (the energy-carrying part of ∂S).
    pub fn interior_boundary_edges(&self, grid: &Grid) -> Vec<EdgeId> {
        self.boundary_edges(grid)
            .into_iter()
            .filter(|&e| !grid.edge_on_wall(e))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_box_has_no_interior_boundary() {
        let g = Grid::square(4);
        let s = substrate_from_height(&g, HeightProfile::full(&g), CrackSet::new()).unwrap();
        assert_eq!(s.cell_count(), 16);
        assert!(s.interior_boundary_edges(&g).is_empty());
    }

    #[test]
    fn flat_graph_boundary_length() {
        let g = Grid::square(4);
        let s = substrate_from_height(&g, HeightProfile::flat_zero(&g), CrackSet::new()).unwrap();
        let len: f64 = s
            .interior_boundary_edges(&g)
            .iter()
            .map(|&e| g.edge_length(e))
            .sum();
        assert!((len - 2.0).abs() < 1e-15, "flat profile exposes y=0, length 2l");
    }

    #[test]
    fn jump_profile_vertical_edges() {
        // Heights 0, 0.5, 0.25 on 3 columns: vertical jump length 0.75.
        let g = Grid::new(1.0, 1.0, 3, 8).unwrap();
        let p = HeightProfile::from_cells_above_zero(&g, &[0, 2, 1], &[]).unwrap();
        let s = substrate_from_height(&g, p, CrackSet::new()).unwrap();
        let vertical: f64 = s
            .interior_boundary_edges(&g)
            .iter()
            .filter(|e| matches!(e.axis, crate::grid::Axis::Vertical))
            .map(|&e| g.edge_length(e))
            .sum();
        assert!((vertical - 0.75).abs() < 1e-12);
    }

    #[test]
    fn crack_outside_subgraph_is_named() {
        let g = Grid::square(4);
        let bad = EdgeId::horizontal(1, 3); // well above the flat substrate
        let err = substrate_from_height(
            &g,
            HeightProfile::flat_zero(&g),
            CrackSet::from_edges([bad]),
        )
        .unwrap_err();
        assert_eq!(err, GeometryError::CrackOutsideSubstrate(bad));
    }
}
