//! Signed distance fields sampled at cell centers.

use crate::error::GeometryError;
use crate::grid::{EdgeId, Grid};

/// Exact Euclidean distance from a point to a closed lattice-edge segment.
pub fn point_edge_distance(grid: &Grid, p: (f64, f64), e: EdgeId) -> f64 {
    let (ax, ay) = grid.vertex_pos(e.vertex);
    let (bx, by) = match e.axis {
        crate::grid::Axis::Horizontal => (ax + grid.hx(), ay),
        crate::grid::Axis::Vertical => (ax, ay + grid.hy()),
    };
    let (dx, dy) = (bx - ax, by - ay);
    let len2 = dx * dx + dy * dy;
    let t = (((p.0 - ax) * dx + (p.1 - ay) * dy) / len2).clamp(0.0, 1.0);
    let (cx, cy) = (ax + t * dx, ay + t * dy);
    ((p.0 - cx).powi(2) + (p.1 - cy).powi(2)).sqrt()
}

/// Signed distance to the boundary edge set of a region, sampled at every
/// cell center: negative on interior cells, positive on exterior cells.
///
/// `inside` flags cells belonging to the region; `boundary` is its full
/// topological boundary edge set (container-wall edges included, so that a
/// full box has distance `-min(l, L)` at the center).
pub fn sdist_field(
    grid: &Grid,
    inside: &[bool],
    boundary: &[EdgeId],
) -> Result<Vec<f64>, GeometryError> {
    if boundary.is_empty() {
        return Err(GeometryError::EmptyBoundary);
    }
    let mut out = Vec::with_capacity(grid.cell_count());
    for c in grid.cells() {
        let p = grid.cell_center(c);
        let mut d = f64::INFINITY;
        for &e in boundary {
            d = d.min(point_edge_distance(grid, p, e));
        }
        if inside[grid.cell_index(c)] {
            d = -d;
        }
        out.push(d);
    }
    Ok(out)
}

/// Signed distance at one arbitrary point.
pub fn sdist_at(
    grid: &Grid,
    inside_point: bool,
    boundary: &[EdgeId],
    p: (f64, f64),
) -> Result<f64, GeometryError> {
    if boundary.is_empty() {
        return Err(GeometryError::EmptyBoundary);
    }
    let mut d = f64::INFINITY;
    for &e in boundary {
        d = d.min(point_edge_distance(grid, p, e));
    }
    Ok(if inside_point { -d } else { d })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{substrate_from_height, CrackSet, HeightProfile};

    #[test]
    fn point_on_edge_has_zero_distance() {
        let g = Grid::square(4);
        let e = EdgeId::horizontal(1, 2);
        let mid = g.edge_midpoint(e);
        assert!(point_edge_distance(&g, mid, e) < 1e-15);
    }

    #[test]
    fn full_box_center_distance() {
        let g = Grid::square(4);
        let s = substrate_from_height(&g, HeightProfile::full(&g), CrackSet::new()).unwrap();
        let field = sdist_field(&g, s.cell_flags(), &s.boundary_edges(&g)).unwrap();
        // Centers of the four middle cells sit at distance 0.75 from ∂Ω.
        let idx = g.cell_index(crate::grid::CellId::new(1, 1));
        assert!((field[idx] + 0.75).abs() < 1e-12);
        let center = sdist_at(&g, true, &s.boundary_edges(&g), (0.0, 0.0)).unwrap();
        assert!((center + 1.0).abs() < 1e-12, "center of the unit box sits at -1");
    }

    #[test]
    fn empty_boundary_is_an_error() {
        let g = Grid::square(2);
        let err = sdist_field(&g, &[false; 4], &[]).unwrap_err();
        assert_eq!(err, GeometryError::EmptyBoundary);
    }

    #[test]
    fn sign_tracks_membership() {
        let g = Grid::square(4);
        let s = substrate_from_height(&g, HeightProfile::flat_zero(&g), CrackSet::new()).unwrap();
        let field = sdist_field(&g, s.cell_flags(), &s.boundary_edges(&g)).unwrap();
        for c in g.cells() {
            let v = field[g.cell_index(c)];
            if s.contains_cell(&g, c) {
                assert!(v < 0.0);
            } else {
                assert!(v > 0.0);
            }
        }
    }
}
