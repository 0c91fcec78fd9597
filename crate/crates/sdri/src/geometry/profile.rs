//! Upper-semicontinuous height profiles snapped to grid lines.
//!
//! A profile stores, per column, the number of substrate cell rows counted
//! from the container floor, plus optional vertical spikes (filaments) rising
//! above the local essential height at interior grid lines. Upper
//! semicontinuity is enforced by the representation itself: the value at a
//! column line is the max of the two adjacent columns, or the spike top.

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::grid::{EdgeId, Grid};

/// Vertical filament at an interior column line.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Spike {
    /// Interior grid-line index in `1..nx`.
    pub line: usize,
    /// Top grid row of the spike, in `1..=ny`; must exceed the taller of the
    /// two adjacent column heights.
    pub top_row: usize,
}

/// Per-column substrate height with spikes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HeightProfile {
    /// Substrate rows per column, counted from the floor; `zero_row <= rows[i] <= ny`
    /// keeps the height in `[0, L]`.
    rows: Vec<usize>,
    spikes: Vec<Spike>,
}

impl HeightProfile {
    /// Profile from per-column row counts (rows measured from the floor).
    pub fn from_rows(grid: &Grid, rows: Vec<usize>, mut spikes: Vec<Spike>) -> Result<Self, GeometryError> {
        if rows.len() != grid.nx {
            return Err(GeometryError::InvalidProfile(format!(
                "expected {} columns, got {}",
                grid.nx,
                rows.len()
            )));
        }
        for (i, &r) in rows.iter().enumerate() {
            if r < grid.zero_row() || r > grid.ny {
                return Err(GeometryError::InvalidProfile(format!(
                    "column {i} has {r} rows; admissible heights need {}..={} (0 <= h <= L)",
                    grid.zero_row(),
                    grid.ny
                )));
            }
        }
        spikes.sort();
        for w in spikes.windows(2) {
            if w[0].line == w[1].line {
                return Err(GeometryError::InvalidProfile(format!(
                    "duplicate spike at line {}",
                    w[0].line
                )));
            }
        }
        for s in &spikes {
            if s.line == 0 || s.line >= grid.nx {
                return Err(GeometryError::InvalidProfile(format!(
                    "spike line {} is not an interior grid line",
                    s.line
                )));
            }
            let base = rows[s.line - 1].max(rows[s.line]);
            if s.top_row <= base {
                return Err(GeometryError::InvalidProfile(format!(
                    "spike at line {} must rise above the adjacent columns (top {} <= base {})",
                    s.line, s.top_row, base
                )));
            }
            if s.top_row > grid.ny {
                return Err(GeometryError::InvalidProfile(format!(
                    "spike at line {} exceeds the container (top {})",
                    s.line, s.top_row
                )));
            }
        }
        Ok(HeightProfile { rows, spikes })
    }

    /// Profile from heights above `y = 0`, in cell units.
    pub fn from_cells_above_zero(
        grid: &Grid,
        cells: &[usize],
        spikes_above_zero: &[(usize, usize)],
    ) -> Result<Self, GeometryError> {
        let rows = cells.iter().map(|c| c + grid.zero_row()).collect();
        let spikes = spikes_above_zero
            .iter()
            .map(|&(line, top)| Spike {
                line,
                top_row: top + grid.zero_row(),
            })
            .collect();
        HeightProfile::from_rows(grid, rows, spikes)
    }

    /// Flat profile at `y = 0`.
    pub fn flat_zero(grid: &Grid) -> Self {
        HeightProfile {
            rows: vec![grid.zero_row(); grid.nx],
            spikes: Vec::new(),
        }
    }

    /// Full-box profile (`h = L` everywhere).
    pub fn full(grid: &Grid) -> Self {
        HeightProfile {
            rows: vec![grid.ny; grid.nx],
            spikes: Vec::new(),
        }
    }

    pub fn rows(&self) -> &[usize] {
        &self.rows
    }

    pub fn spikes(&self) -> &[Spike] {
        &self.spikes
    }

    /// Physical height of column `i`.
    pub fn value(&self, grid: &Grid, i: usize) -> f64 {
        grid.y_line(self.rows[i])
    }

    /// Row count at an interior grid line: max of neighbours, or the spike top.
    pub fn rows_at_line(&self, line: usize) -> usize {
        let base = self.rows[line - 1].max(self.rows[line]);
        match self.spikes.iter().find(|s| s.line == line) {
            Some(s) => s.top_row,
            None => base,
        }
    }

    /// Lattice edges of every spike, in canonical order.
    pub fn spike_edges(&self) -> Vec<EdgeId> {
        let mut out = Vec::new();
        for s in &self.spikes {
            let base = self.rows[s.line - 1].max(self.rows[s.line]);
            for j in base..s.top_row {
                out.push(EdgeId::vertical(s.line, j));
            }
        }
        out.sort();
        out
    }
}

/// Pointwise variation of the profile together with the length of the graph
/// completion of the subgraph boundary.
///
/// The variation counts each interior jump once and each spike twice (up and
/// down); the graph completion traverses every spike up and back, so its
/// length is `2l + Σ|jumps| + 2 Σ spike lengths`. The pair always satisfies
/// the sandwich `Var h <= len <= 2l + 2 Var h`.
pub fn pointwise_variation(grid: &Grid, profile: &HeightProfile) -> (f64, f64) {
    let hy = grid.hy();
    let mut jumps = 0.0;
    for w in profile.rows().windows(2) {
        jumps += (w[0] as f64 - w[1] as f64).abs() * hy;
    }
    let mut spikes = 0.0;
    for s in profile.spikes() {
        let base = profile.rows()[s.line - 1].max(profile.rows()[s.line]);
        spikes += (s.top_row - base) as f64 * hy;
    }
    let var = jumps + 2.0 * spikes;
    let graph_len = 2.0 * grid.l + jumps + 2.0 * spikes;
    (var, graph_len)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_profile_has_no_variation() {
        let g = Grid::square(4);
        let p = HeightProfile::flat_zero(&g);
        let (var, len) = pointwise_variation(&g, &p);
        assert_eq!(var, 0.0);
        assert!((len - 2.0).abs() < 1e-15);
    }

    #[test]
    fn jump_profile_matches_enumeration() {
        // Heights 0, 0.5, 0.25 on three columns of a 3x8 grid over l=L=1.
        let g = Grid::new(1.0, 1.0, 3, 8).unwrap();
        let p = HeightProfile::from_cells_above_zero(&g, &[0, 2, 1], &[]).unwrap();
        let (var, len) = pointwise_variation(&g, &p);
        assert!((var - 0.75).abs() < 1e-15);
        assert!((len - 2.75).abs() < 1e-15);
        // Sandwich from the discrete analogue of the variation bound.
        assert!(var <= len && len <= 2.0 * g.l + 2.0 * var + 1e-15);
    }

    #[test]
    fn spike_counts_twice_in_variation_and_graph_length() {
        let g = Grid::square(8);
        let p = HeightProfile::from_cells_above_zero(&g, &[0; 8], &[(4, 2)]).unwrap();
        let s = 2.0 * g.hy();
        let (var, len) = pointwise_variation(&g, &p);
        assert!((var - 2.0 * s).abs() < 1e-15);
        assert!((len - (2.0 + 2.0 * s)).abs() < 1e-15);
    }

    #[test]
    fn spike_must_exceed_neighbours() {
        let g = Grid::square(4);
        let r = vec![g.zero_row(); 4];
        assert!(HeightProfile::from_rows(&g, r.clone(), vec![Spike { line: 2, top_row: 2 }]).is_err());
        assert!(HeightProfile::from_rows(&g, r, vec![Spike { line: 2, top_row: 3 }]).is_ok());
    }
}
