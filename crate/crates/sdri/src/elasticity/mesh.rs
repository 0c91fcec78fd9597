//! Split-node quadrilateral mesh over the composite cells.
//!
//! Lattice vertices are duplicated into one node per connectivity class of
//! the incident cells, where two cells neighbouring across an edge are joined
//! unless the edge is a slit. A chain tip (one cut edge at a vertex) leaves
//! the vertex whole, so crack tips stay closed.

use crate::geometry::Configuration;
use crate::grid::{CellId, VertexId};

/// One bilinear element per composite cell; node order SW, SE, NE, NW.
#[derive(Clone, Debug)]
pub struct MeshElement {
    pub cell: CellId,
    pub nodes: [usize; 4],
    pub substrate: bool,
}

#[derive(Clone, Debug)]
pub struct MeshNode {
    pub vertex: VertexId,
    pub pos: (f64, f64),
}

#[derive(Clone, Debug)]
pub struct SplitMesh {
    pub nodes: Vec<MeshNode>,
    pub elements: Vec<MeshElement>,
    /// Component id per node, numbered by smallest node id.
    pub node_component: Vec<usize>,
    pub component_count: usize,
    pub hx: f64,
    pub hy: f64,
}

impl SplitMesh {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    /// Nodes of one component, ascending.
    pub fn component_nodes(&self, comp: usize) -> impl Iterator<Item = usize> + '_ {
        self.node_component
            .iter()
            .enumerate()
            .filter(move |(_, &c)| c == comp)
            .map(|(i, _)| i)
    }
}

/// Builds the split-node mesh for the composite region of `cfg`.
pub fn build_mesh(cfg: &Configuration) -> SplitMesh {
    let grid = &cfg.grid;
    let in_a = |c: CellId| cfg.composite.contains_cell(grid, c);
    // Per-vertex quadrant slots: SW, SE, NE, NW.
    let quadrants = |v: VertexId| -> [Option<CellId>; 4] {
        let (i, j) = (v.i as i64, v.j as i64);
        let cell = |ci: i64, cj: i64| -> Option<CellId> {
            if ci < 0 || cj < 0 || ci >= grid.nx as i64 || cj >= grid.ny as i64 {
                None
            } else {
                let c = CellId::new(ci as usize, cj as usize);
                in_a(c).then_some(c)
            }
        };
        [cell(i - 1, j - 1), cell(i, j - 1), cell(i, j), cell(i - 1, j)]
    };

    // Pairs of circularly adjacent quadrants and the edge separating them.
    let separators = |v: VertexId| {
        let (i, j) = (v.i as usize, v.j as usize);
        [
            (0usize, 1usize, crate::grid::EdgeId::vertical(i, j.wrapping_sub(1))),
            (1, 2, crate::grid::EdgeId::horizontal(i, j)),
            (2, 3, crate::grid::EdgeId::vertical(i, j)),
            (3, 0, crate::grid::EdgeId::horizontal(i.wrapping_sub(1), j)),
        ]
    };

    let mut nodes: Vec<MeshNode> = Vec::new();
    // node id for (vertex index, quadrant slot) where a cell is present
    let mut slot_node = vec![usize::MAX; grid.vertex_count() * 4];

    for j in 0..=grid.ny {
        for i in 0..=grid.nx {
            let v = VertexId::new(i, j);
            let q = quadrants(v);
            if q.iter().all(Option::is_none) {
                continue;
            }
            // Union quadrant slots across non-slit edges.
            let mut parent = [0usize, 1, 2, 3];
            fn find(p: &mut [usize; 4], x: usize) -> usize {
                let mut r = x;
                while p[r] != r {
                    r = p[r];
                }
                p[x] = r;
                r
            }
            for (a, b, e) in separators(v) {
                if q[a].is_some() && q[b].is_some() && grid.edge_valid(e) && !cfg.composite.slits.contains(&e) {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    if ra != rb {
                        let (lo, hi) = (ra.min(rb), ra.max(rb));
                        parent[hi] = lo;
                    }
                }
            }
            let vi = grid.vertex_index(v);
            let mut class_node = [usize::MAX; 4];
            for slot in 0..4 {
                if q[slot].is_none() {
                    continue;
                }
                let root = find(&mut parent, slot);
                if class_node[root] == usize::MAX {
                    class_node[root] = nodes.len();
                    nodes.push(MeshNode {
                        vertex: v,
                        pos: grid.vertex_pos(v),
                    });
                }
                slot_node[vi * 4 + slot] = class_node[root];
            }
        }
    }

    let mut elements = Vec::new();
    for c in grid.cells() {
        if !in_a(c) {
            continue;
        }
        let (i, j) = (c.i as usize, c.j as usize);
        // Corner vertices and, at each, the quadrant slot this cell occupies.
        let corner = |vi: usize, vj: usize, slot: usize| {
            slot_node[grid.vertex_index(VertexId::new(vi, vj)) * 4 + slot]
        };
        let nodes = [
            corner(i, j, 2),         // SW vertex: cell is its NE quadrant
            corner(i + 1, j, 3),     // SE vertex: NW quadrant
            corner(i + 1, j + 1, 0), // NE vertex: SW quadrant
            corner(i, j + 1, 1),     // NW vertex: SE quadrant
        ];
        debug_assert!(nodes.iter().all(|&n| n != usize::MAX));
        elements.push(MeshElement {
            cell: c,
            nodes,
            substrate: cfg.substrate.contains_cell(grid, c),
        });
    }

    // Connected components over nodes through elements.
    let mut parent: Vec<usize> = (0..nodes.len()).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut c = x;
        while p[c] != r {
            let n = p[c];
            p[c] = r;
            c = n;
        }
        r
    }
    for el in &elements {
        for w in el.nodes.windows(2) {
            let (a, b) = (find(&mut parent, w[0]), find(&mut parent, w[1]));
            if a != b {
                let (lo, hi) = (a.min(b), a.max(b));
                parent[hi] = lo;
            }
        }
    }
    let mut node_component = vec![usize::MAX; nodes.len()];
    let mut component_count = 0;
    for n in 0..nodes.len() {
        let r = find(&mut parent, n);
        if node_component[r] == usize::MAX {
            node_component[r] = component_count;
            component_count += 1;
        }
        node_component[n] = node_component[r];
    }

    SplitMesh {
        nodes,
        elements,
        node_component,
        component_count,
        hx: grid.hx(),
        hy: grid.hy(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{substrate_from_height, Configuration, CrackSet, HeightProfile};
    use crate::grid::{EdgeId, Grid};

    fn full_box(n: usize) -> Configuration {
        let g = Grid::square(n);
        let s = substrate_from_height(&g, HeightProfile::full(&g), CrackSet::new()).unwrap();
        Configuration::film_free(g, s)
    }

    #[test]
    fn full_box_node_count() {
        let cfg = full_box(4);
        let mesh = build_mesh(&cfg);
        assert_eq!(mesh.node_count(), 25);
        assert_eq!(mesh.elements.len(), 16);
        assert_eq!(mesh.component_count, 1);
    }

    #[test]
    fn single_slit_keeps_tips_closed() {
        // One interior slit edge: both endpoints are chain tips, so the
        // vertex-stencil enumeration leaves every vertex whole.
        let mut cfg = full_box(4);
        let e = EdgeId::horizontal(1, 2);
        cfg.substrate.cracks.insert(e);
        cfg.composite.slits.insert(e);
        let mesh = build_mesh(&cfg);
        assert_eq!(mesh.node_count(), 25, "tips are not split");
        assert_eq!(mesh.component_count, 1);
    }

    #[test]
    fn slit_chain_splits_interior_vertices() {
        // Horizontal chain of two slits: the shared vertex carries opposite
        // cuts on a straight line through it, so it splits in two.
        let mut cfg = full_box(4);
        for e in [EdgeId::horizontal(1, 2), EdgeId::horizontal(2, 2)] {
            cfg.substrate.cracks.insert(e);
            cfg.composite.slits.insert(e);
        }
        let mesh = build_mesh(&cfg);
        assert_eq!(mesh.node_count(), 26, "one interior vertex duplicated");
        assert_eq!(mesh.component_count, 1, "tips keep the sides hinged");
    }
}
