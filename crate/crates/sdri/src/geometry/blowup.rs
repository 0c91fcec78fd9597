//! Blow-up: restriction of a configuration to a square window, rescaled to
//! the unit square.

use std::collections::BTreeSet;

use crate::error::GeometryError;
use crate::geometry::composite::CompositeRegion;
use crate::geometry::config::Configuration;
use crate::geometry::profile::{HeightProfile, Spike};
use crate::geometry::substrate::{substrate_from_height, CrackSet};
use crate::grid::{CellId, EdgeId, Grid, VertexId};

fn to_multiple(value: f64, step: f64) -> Result<i64, GeometryError> {
    let k = value / step;
    let r = k.round();
    if (k - r).abs() > 1e-9 {
        Err(GeometryError::InvalidWindow(format!(
            "{value} is not a multiple of the cell size {step}"
        )))
    } else {
        Ok(r as i64)
    }
}

/// Restricts `cfg` to the window `Q_rho(y0)` and rescales it by `1/rho`,
/// preserving edge markings.
///
/// Requirements: the window must lie inside Ω, its corners must sit on grid
/// lines, and the substrate content of the window must again be a subgraph
/// over the window floor reaching at least the window midline (so the result
/// is representable with a nonnegative height). Violations are reported as
/// [`GeometryError::InvalidWindow`].
pub fn blowup(cfg: &Configuration, y0: (f64, f64), rho: f64) -> Result<Configuration, GeometryError> {
    let grid = &cfg.grid;
    if !(rho > 0.0) {
        return Err(GeometryError::InvalidWindow("rho must be positive".into()));
    }
    let kx = to_multiple(rho, grid.hx())?;
    let ky = to_multiple(rho, grid.hy())?;
    let ox = to_multiple(y0.0 - (-grid.l), grid.hx())?; // window offsets in cells
    let oy = to_multiple(y0.1 - (-grid.big_l), grid.hy())?;
    let i0 = ox - kx;
    let j0 = oy - ky;
    let i1 = ox + kx;
    let j1 = oy + ky;
    if i0 < 0 || j0 < 0 || i1 > grid.nx as i64 || j1 > grid.ny as i64 {
        return Err(GeometryError::InvalidWindow(format!(
            "window Q_{rho}({}, {}) exceeds Ω",
            y0.0, y0.1
        )));
    }
    let (i0, j0) = (i0 as usize, j0 as usize);
    let nx = 2 * kx as usize;
    let ny = 2 * ky as usize;
    let out_grid = Grid::new(1.0, 1.0, nx, ny)?;

    // Substrate columns: cells must form a bottom prefix of the window.
    let mut rows = Vec::with_capacity(nx);
    for i in 0..nx {
        let mut top = 0usize;
        let mut gap = false;
        for j in 0..ny {
            let c = CellId::new(i0 + i, j0 + j);
            if cfg.substrate.contains_cell(grid, c) {
                if gap {
                    return Err(GeometryError::InvalidWindow(format!(
                        "substrate content of column {i} is not a bottom prefix"
                    )));
                }
                top = j + 1;
            } else {
                gap = true;
            }
        }
        if top < out_grid.zero_row() {
            return Err(GeometryError::InvalidWindow(format!(
                "substrate column {i} falls below the window midline (not representable with h >= 0)"
            )));
        }
        rows.push(top);
    }

    let map_edge = |e: EdgeId| -> Option<EdgeId> {
        let (i, j) = (e.vertex.i as usize, e.vertex.j as usize);
        if i < i0 || j < j0 {
            return None;
        }
        let (li, lj) = (i - i0, j - j0);
        let mapped = EdgeId {
            vertex: VertexId::new(li, lj),
            axis: e.axis,
        };
        // The window frame becomes the new domain wall; marks on it are dropped.
        (out_grid.edge_valid(mapped) && !out_grid.edge_on_wall(mapped)).then_some(mapped)
    };

    // Spikes clipped to the window.
    let mut spikes = Vec::new();
    for s in cfg.substrate.profile.spikes() {
        let line = s.line as i64 - i0 as i64;
        if line <= 0 || line >= nx as i64 {
            continue;
        }
        let line = line as usize;
        let base = rows[line - 1].max(rows[line]);
        let top = (s.top_row as i64 - j0 as i64).clamp(0, ny as i64) as usize;
        if top > base {
            spikes.push(Spike { line, top_row: top });
        }
    }
    let profile = HeightProfile::from_rows(&out_grid, rows, spikes)?;
    let cracks = CrackSet::from_edges(cfg.substrate.cracks.iter().filter_map(map_edge));
    let substrate = substrate_from_height(&out_grid, profile, cracks)?;

    let mut flags = vec![false; out_grid.cell_count()];
    for j in 0..ny {
        for i in 0..nx {
            let c = CellId::new(i0 + i, j0 + j);
            if cfg.composite.contains_cell(grid, c) {
                flags[out_grid.cell_index(CellId::new(i, j))] = true;
            }
        }
    }
    let mut composite = CompositeRegion::from_flags(flags);
    composite.slits = cfg
        .composite
        .slits
        .iter()
        .copied()
        .filter_map(map_edge)
        .collect::<BTreeSet<_>>();
    composite.filaments = cfg
        .composite
        .filaments
        .iter()
        .copied()
        .filter_map(map_edge)
        .collect::<BTreeSet<_>>();

    Ok(Configuration {
        grid: out_grid,
        substrate,
        composite,
    })
}
