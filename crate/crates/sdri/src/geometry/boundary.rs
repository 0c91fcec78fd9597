//! Boundary component counting and the interface taxonomy.
//!
//! Every Ω-interior edge of `∂A ∪ ∂S` falls into exactly one of eleven
//! classes, decided purely from the in/out status of its two adjacent cells
//! in the composite and substrate plus the edge markings (slit, filament,
//! crack, spike). The classes drive the surface-energy weights.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::GeometryError;
use crate::geometry::config::Configuration;
use crate::grid::{EdgeId, Grid};

/// Union-find over arbitrary indices.
struct UnionFind {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            size: vec![1; n],
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra] < self.size[rb] {
            self.parent[ra] = rb;
            self.size[rb] += self.size[ra];
        } else {
            self.parent[rb] = ra;
            self.size[ra] += self.size[rb];
        }
    }
}

/// Connected components of an edge set, where two edges are adjacent when
/// they share a lattice vertex (curves may touch at corners).
///
/// Returns the component count and a per-edge component label; components are
/// numbered by their smallest edge id, so the labeling does not depend on the
/// order edges are supplied in.
pub fn boundary_components(grid: &Grid, edges: &[EdgeId]) -> (usize, BTreeMap<EdgeId, usize>) {
    let mut sorted: Vec<EdgeId> = edges.to_vec();
    sorted.sort();
    sorted.dedup();
    let n = sorted.len();
    if n == 0 {
        return (0, BTreeMap::new());
    }
    let mut by_vertex: BTreeMap<crate::grid::VertexId, Vec<usize>> = BTreeMap::new();
    for (idx, &e) in sorted.iter().enumerate() {
        let (p, q) = grid.edge_endpoints(e);
        by_vertex.entry(p).or_default().push(idx);
        by_vertex.entry(q).or_default().push(idx);
    }
    let mut uf = UnionFind::new(n);
    for group in by_vertex.values() {
        for w in group.windows(2) {
            uf.union(w[0], w[1]);
        }
    }
    // Number components by their smallest member (sorted order gives that).
    let mut labels = BTreeMap::new();
    let mut next = 0usize;
    let mut root_label: BTreeMap<usize, usize> = BTreeMap::new();
    for (idx, &e) in sorted.iter().enumerate() {
        let root = uf.find(idx);
        let label = *root_label.entry(root).or_insert_with(|| {
            let l = next;
            next += 1;
            l
        });
        labels.insert(e, label);
    }
    (next, labels)
}

/// The eleven interface classes of the two-phase taxonomy.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BoundaryClass {
    /// Film free boundary, `∂*A \ ∂S`.
    FilmFree,
    /// Exposed substrate, `∂*A ∩ ∂*S`.
    SubstrateFree,
    /// Crack inside the film bulk, `(∂A \ ∂S) ∩ A⁽¹⁾`.
    FilmCrack,
    /// Film filament in the vapor, `(∂A \ ∂S) ∩ A⁽⁰⁾`.
    FilmFilament,
    /// Bonded film–substrate interface, `(∂*S \ ∂A) ∩ A⁽¹⁾`.
    Coherent,
    /// Debonded film–substrate interface, `∂*S ∩ ∂A ∩ A⁽¹⁾`.
    Incoherent,
    /// Substrate crack open to the composite boundary, `∂S ∩ ∂A ∩ S⁽¹⁾`.
    SubstrateCrackDelaminated,
    /// Substrate filament in the vapor, `∂S ∩ ∂A ∩ A⁽⁰⁾`.
    SubstrateFilamentExposed,
    /// Substrate filament lying on the film free boundary,
    /// `∂S ∩ ∂*A ∩ S⁽⁰⁾` (the disputed-weight class).
    SubstrateFilamentOnFilmFree,
    /// Substrate crack or filament inside coherently attached film,
    /// `(∂S \ ∂A) ∩ (S⁽¹⁾ ∪ S⁽⁰⁾) ∩ A⁽¹⁾`.
    SubstrateFlawCoherent,
    /// Substrate filament that is simultaneously a film crack,
    /// `∂S ∩ ∂A ∩ S⁽⁰⁾ ∩ A⁽¹⁾`.
    SubstrateFilamentFilmCrack,
}

impl BoundaryClass {
    pub const ALL: [BoundaryClass; 11] = [
        BoundaryClass::FilmFree,
        BoundaryClass::SubstrateFree,
        BoundaryClass::FilmCrack,
        BoundaryClass::FilmFilament,
        BoundaryClass::Coherent,
        BoundaryClass::Incoherent,
        BoundaryClass::SubstrateCrackDelaminated,
        BoundaryClass::SubstrateFilamentExposed,
        BoundaryClass::SubstrateFilamentOnFilmFree,
        BoundaryClass::SubstrateFlawCoherent,
        BoundaryClass::SubstrateFilamentFilmCrack,
    ];

    pub fn index(self) -> usize {
        BoundaryClass::ALL.iter().position(|&c| c == self).unwrap()
    }

    /// Whether edges of this class belong to ∂A.
    pub fn in_composite_boundary(self) -> bool {
        !matches!(
            self,
            BoundaryClass::Coherent | BoundaryClass::SubstrateFlawCoherent
        )
    }

    /// Whether edges of this class belong to ∂S.
    pub fn in_substrate_boundary(self) -> bool {
        !matches!(
            self,
            BoundaryClass::FilmFree | BoundaryClass::FilmCrack | BoundaryClass::FilmFilament
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            BoundaryClass::FilmFree => "film-free",
            BoundaryClass::SubstrateFree => "substrate-free",
            BoundaryClass::FilmCrack => "film-crack",
            BoundaryClass::FilmFilament => "film-filament",
            BoundaryClass::Coherent => "coherent",
            BoundaryClass::Incoherent => "incoherent",
            BoundaryClass::SubstrateCrackDelaminated => "substrate-crack-delaminated",
            BoundaryClass::SubstrateFilamentExposed => "substrate-filament-exposed",
            BoundaryClass::SubstrateFilamentOnFilmFree => "substrate-filament-on-film-free",
            BoundaryClass::SubstrateFlawCoherent => "substrate-flaw-coherent",
            BoundaryClass::SubstrateFilamentFilmCrack => "substrate-filament-film-crack",
        }
    }
}

/// One classified boundary edge.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LabeledEdge {
    pub edge: EdgeId,
    pub class: BoundaryClass,
    /// Unit normal, one of ±e₁/±e₂: outward for reduced boundaries, the
    /// canonical +e₁/+e₂ for two-sided edges. All tensions are even in the
    /// direction, so the sign never affects energies.
    pub normal: (f64, f64),
    pub length: f64,
}

/// The ψ-partition of the Ω-interior boundary, plus the wall edges that are
/// excluded from every energy integral.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct LabeledBoundary {
    pub entries: Vec<LabeledEdge>,
    pub domain_wall: Vec<EdgeId>,
}

impl LabeledBoundary {
    /// Total Ω-interior boundary length `H¹(Ω ∩ (∂A ∪ ∂S))`.
    pub fn total_length(&self) -> f64 {
        self.entries.iter().map(|e| e.length).sum()
    }

    /// Length carried by one class.
    pub fn class_length(&self, class: BoundaryClass) -> f64 {
        self.entries
            .iter()
            .filter(|e| e.class == class)
            .map(|e| e.length)
            .sum()
    }
}

/// Classifies a single Ω-interior edge; `None` when the edge carries no
/// boundary. Exposed so the classifier can be driven edge-by-edge (the
/// incremental energy update in the minimizer relies on this).
pub fn classify_edge(cfg: &Configuration, e: EdgeId) -> Result<Option<LabeledEdge>, GeometryError> {
    let grid = &cfg.grid;
    debug_assert!(grid.edge_valid(e) && !grid.edge_on_wall(e));
    let [c0, c1] = grid.edge_cells(e);
    let (c0, c1) = (c0.expect("interior edge"), c1.expect("interior edge"));
    let a0 = cfg.composite.contains_cell(grid, c0);
    let a1 = cfg.composite.contains_cell(grid, c1);
    let s0 = cfg.substrate.contains_cell(grid, c0);
    let s1 = cfg.substrate.contains_cell(grid, c1);
    let a = a0 as u8 + a1 as u8;
    let s = s0 as u8 + s1 as u8;
    let slit = cfg.composite.slits.contains(&e);
    let filament = cfg.composite.filaments.contains(&e);
    let crack = cfg.substrate.cracks.contains(e);
    let spike = cfg.substrate.is_spike_edge(e);

    let outward_a = grid.edge_normal_from(e, a0);
    let outward_s = grid.edge_normal_from(e, s0);
    let canonical = match e.axis {
        crate::grid::Axis::Horizontal => (0.0, 1.0),
        crate::grid::Axis::Vertical => (1.0, 0.0),
    };
    let length = grid.edge_length(e);
    let mk = |class: BoundaryClass, normal: (f64, f64)| {
        Ok(Some(LabeledEdge {
            edge: e,
            class,
            normal,
            length,
        }))
    };

    match (a, s) {
        (1, 0) => {
            if spike {
                mk(BoundaryClass::SubstrateFilamentOnFilmFree, outward_a)
            } else {
                mk(BoundaryClass::FilmFree, outward_a)
            }
        }
        (1, 1) => mk(BoundaryClass::SubstrateFree, outward_a),
        (1, 2) => Err(GeometryError::InconsistentStencil(e, "s=2 with a=1 breaks nesting")),
        (2, 0) => match (slit, spike) {
            (true, true) => mk(BoundaryClass::SubstrateFilamentFilmCrack, canonical),
            (true, false) => mk(BoundaryClass::FilmCrack, canonical),
            (false, true) => mk(BoundaryClass::SubstrateFlawCoherent, canonical),
            (false, false) => Ok(None),
        },
        (2, 1) => {
            if slit {
                mk(BoundaryClass::Incoherent, outward_s)
            } else {
                mk(BoundaryClass::Coherent, outward_s)
            }
        }
        (2, 2) => {
            if crack {
                if slit {
                    mk(BoundaryClass::SubstrateCrackDelaminated, canonical)
                } else {
                    mk(BoundaryClass::SubstrateFlawCoherent, canonical)
                }
            } else if slit {
                Err(GeometryError::InconsistentStencil(e, "slit in substrate bulk not a crack"))
            } else {
                Ok(None)
            }
        }
        (0, 0) => {
            if filament {
                if spike {
                    mk(BoundaryClass::SubstrateFilamentExposed, canonical)
                } else {
                    mk(BoundaryClass::FilmFilament, canonical)
                }
            } else if spike {
                Err(GeometryError::InconsistentStencil(e, "spike outside composite closure"))
            } else {
                Ok(None)
            }
        }
        _ => Err(GeometryError::InconsistentStencil(e, "impossible density pair")),
    }
}

/// Labels every Ω-interior edge of `∂A ∪ ∂S` with exactly one class.
///
/// Assumes the configuration passed structural validation; representation
/// bugs surface as [`GeometryError::InconsistentStencil`].
pub fn classify_boundary(cfg: &Configuration) -> Result<LabeledBoundary, GeometryError> {
    let grid = &cfg.grid;
    let mut entries = Vec::new();
    let mut domain_wall = Vec::new();
    for e in grid.edges() {
        if grid.edge_on_wall(e) {
            // Wall edges bounding material are labeled domain-wall and
            // excluded from every integral.
            let touches = grid
                .edge_cells(e)
                .iter()
                .flatten()
                .any(|&c| cfg.composite.contains_cell(grid, c));
            if touches {
                domain_wall.push(e);
            }
            continue;
        }
        if let Some(labeled) = classify_edge(cfg, e)? {
            entries.push(labeled);
        }
    }
    Ok(LabeledBoundary {
        entries,
        domain_wall,
    })
}
