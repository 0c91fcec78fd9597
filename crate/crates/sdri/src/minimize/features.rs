//! Film islands, extended composite voids, and substrate grains.
//!
//! A film component is an island when its boundary meets the coherent
//! interface in exactly one connected piece; a complement component is an
//! extended void when its boundary meets the exposed-substrate/delaminated
//! interface set in one piece (delaminated slit chains extend voids under the
//! film); substrate-interior components are graded the same way. The full
//! film/substrate component is reported whether or not it has contact.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::GeometryError;
use crate::geometry::{boundary_components, classify_boundary, BoundaryClass, Configuration};
use crate::grid::{CellId, EdgeId, Grid, VertexId};

/// One island, void, or grain.
#[derive(Clone, Debug)]
pub struct Feature {
    pub cells: Vec<CellId>,
    /// Marked-edge elements of the component (slits and filaments belonging
    /// to an extended void; empty for islands and grains).
    pub edge_elements: Vec<EdgeId>,
    /// Contact edges: the coherent interface for islands/grains, the
    /// substrate free boundary plus delaminated interface for voids.
    pub contact: Vec<EdgeId>,
    pub contact_components: usize,
    /// Whether the feature exhausts its phase (full island / full grain).
    pub is_full: bool,
}

#[derive(Clone, Debug, Default)]
pub struct Features {
    pub islands: Vec<Feature>,
    pub voids: Vec<Feature>,
    pub grains: Vec<Feature>,
}

struct Uf(Vec<usize>);

impl Uf {
    fn new(n: usize) -> Self {
        Uf((0..n).collect())
    }
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut c = x;
        while self.0[c] != r {
            let n = self.0[c];
            self.0[c] = r;
            c = n;
        }
        r
    }
    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.0[hi] = lo;
        }
    }
}

fn group_cells(grid: &Grid, member: impl Fn(CellId) -> bool, open_across: impl Fn(EdgeId) -> bool) -> Vec<Vec<CellId>> {
    let mut uf = Uf::new(grid.cell_count());
    for e in grid.edges() {
        let [a, b] = grid.edge_cells(e);
        if let (Some(a), Some(b)) = (a, b) {
            if member(a) && member(b) && open_across(e) {
                uf.union(grid.cell_index(a), grid.cell_index(b));
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<CellId>> = BTreeMap::new();
    for c in grid.cells() {
        if member(c) {
            let r = uf.find(grid.cell_index(c));
            groups.entry(r).or_default().push(c);
        }
    }
    groups.into_values().collect()
}

fn contact_of(
    grid: &Grid,
    cells: &BTreeSet<CellId>,
    edges_by_class: &BTreeMap<BoundaryClass, Vec<EdgeId>>,
    classes: &[BoundaryClass],
    side: impl Fn(EdgeId, &BTreeSet<CellId>) -> bool,
) -> (Vec<EdgeId>, usize) {
    let mut contact = Vec::new();
    for class in classes {
        if let Some(edges) = edges_by_class.get(class) {
            for &e in edges {
                if side(e, cells) {
                    contact.push(e);
                }
            }
        }
    }
    contact.sort();
    contact.dedup();
    let (n, _) = boundary_components(grid, &contact);
    (contact, n)
}

/// Enumerates islands, extended voids, and grains of an admissible
/// configuration.
pub fn enumerate_features(cfg: &Configuration) -> Result<Features, GeometryError> {
    let grid = &cfg.grid;
    let labels = classify_boundary(cfg)?;
    let mut by_class: BTreeMap<BoundaryClass, Vec<EdgeId>> = BTreeMap::new();
    for e in &labels.entries {
        by_class.entry(e.class).or_default().push(e.edge);
    }

    let in_a = |c: CellId| cfg.composite.contains_cell(grid, c);
    let in_s = |c: CellId| cfg.substrate.contains_cell(grid, c);
    let film = |c: CellId| in_a(c) && !in_s(c);
    let vapor = |c: CellId| !in_a(c);

    let adjacent_to = |e: EdgeId, cells: &BTreeSet<CellId>| {
        grid.edge_cells(e).iter().flatten().any(|c| cells.contains(c))
    };

    // Film components: interior connectivity, so slits disconnect.
    let film_total: usize = grid.cells().filter(|&c| film(c)).count();
    let mut islands = Vec::new();
    for group in group_cells(grid, film, |e| !cfg.composite.slits.contains(&e)) {
        let set: BTreeSet<CellId> = group.iter().copied().collect();
        let (contact, n) = contact_of(
            grid,
            &set,
            &by_class,
            &[BoundaryClass::Coherent, BoundaryClass::SubstrateFlawCoherent],
            |e, cells| adjacent_to(e, cells),
        );
        let is_full = group.len() == film_total;
        if n == 1 || is_full {
            islands.push(Feature {
                cells: group,
                edge_elements: Vec::new(),
                contact,
                contact_components: n,
                is_full,
            });
        }
    }

    // Substrate interior components: cracks disconnect.
    let substrate_total = cfg.substrate.cell_count();
    let mut grains = Vec::new();
    for group in group_cells(grid, in_s, |e| !cfg.substrate.cracks.contains(e)) {
        let set: BTreeSet<CellId> = group.iter().copied().collect();
        let (contact, n) = contact_of(
            grid,
            &set,
            &by_class,
            &[BoundaryClass::Coherent, BoundaryClass::SubstrateFlawCoherent],
            |e, cells| adjacent_to(e, cells),
        );
        let is_full = group.len() == substrate_total;
        if n == 1 || is_full {
            grains.push(Feature {
                cells: group,
                edge_elements: Vec::new(),
                contact,
                contact_components: n,
                is_full,
            });
        }
    }

    // Complement components: vapor cells via shared vertices (closed sets),
    // extended by slit and filament chains touching them.
    let vapor_cells: Vec<CellId> = grid.cells().filter(|&c| vapor(c)).collect();
    let marked: Vec<EdgeId> = cfg
        .composite
        .slits
        .iter()
        .chain(cfg.composite.filaments.iter())
        .copied()
        .collect();
    let n_cells = vapor_cells.len();
    let mut uf = Uf::new(n_cells + marked.len());
    let cell_slot: BTreeMap<CellId, usize> = vapor_cells.iter().copied().enumerate().map(|(k, c)| (c, k)).collect();
    let edge_slot: BTreeMap<EdgeId, usize> = marked.iter().copied().enumerate().map(|(k, e)| (e, n_cells + k)).collect();
    // Vertex incidence joins everything that shares a lattice vertex.
    let mut by_vertex: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (&c, &slot) in &cell_slot {
        let (i, j) = (c.i as usize, c.j as usize);
        for vi in [i, i + 1] {
            for vj in [j, j + 1] {
                by_vertex.entry(VertexId::new(vi, vj)).or_default().push(slot);
            }
        }
    }
    for (&e, &slot) in &edge_slot {
        let (p, q) = grid.edge_endpoints(e);
        by_vertex.entry(p).or_default().push(slot);
        by_vertex.entry(q).or_default().push(slot);
    }
    for group in by_vertex.values() {
        for w in group.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    let mut comp: BTreeMap<usize, (Vec<CellId>, Vec<EdgeId>)> = BTreeMap::new();
    for (&c, &slot) in &cell_slot {
        comp.entry(uf.find(slot)).or_default().0.push(c);
    }
    for (&e, &slot) in &edge_slot {
        comp.entry(uf.find(slot)).or_default().1.push(e);
    }

    let void_classes = [
        BoundaryClass::SubstrateFree,
        BoundaryClass::Incoherent,
        BoundaryClass::SubstrateCrackDelaminated,
        BoundaryClass::SubstrateFilamentFilmCrack,
        BoundaryClass::SubstrateFilamentExposed,
    ];
    let mut voids = Vec::new();
    for (cells, edge_elements) in comp.into_values() {
        let set: BTreeSet<CellId> = cells.iter().copied().collect();
        let own: BTreeSet<EdgeId> = edge_elements.iter().copied().collect();
        let (contact, n) = contact_of(grid, &set, &by_class, &void_classes, |e, cells| {
            own.contains(&e) || adjacent_to(e, cells)
        });
        if n == 1 {
            voids.push(Feature {
                cells,
                edge_elements,
                contact,
                contact_components: n,
                is_full: false,
            });
        }
    }

    Ok(Features {
        islands,
        voids,
        grains,
    })
}
