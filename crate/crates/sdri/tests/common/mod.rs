//! Shared test fixtures and the independent brute-force energy enumerator.
//!
//! The oracle re-derives every edge's interface class from raw cell stencils
//! and the marked edge sets, transcribing the taxonomy as a cascade of set
//! predicates. It never touches the library's classifier, so agreement is a
//! genuine dual-route check.

#![allow(dead_code)]

use sdri::geometry::{
    substrate_from_height, Configuration, CrackSet, HeightProfile, SubstrateRegion,
};
use sdri::grid::{Axis, CellId, EdgeId, Grid};
use sdri::tension::{SpikeOnFilmFreeRule, SurfaceTensions};

/// Per-edge record produced by the oracle.
#[derive(Clone, Copy, Debug)]
pub struct OracleEdge {
    pub edge: EdgeId,
    /// Index into the taxonomy, 0..11, matching `BoundaryClass::ALL` order.
    pub class: usize,
    pub energy: f64,
    pub length: f64,
    pub in_composite_boundary: bool,
    pub in_substrate_boundary: bool,
}

pub struct OracleBreakdown {
    pub edges: Vec<OracleEdge>,
    pub total: f64,
    pub per_class: [f64; 11],
    pub composite_boundary_length: f64,
    pub substrate_only_boundary_length: f64,
}

/// Brute-force surface energy: independent class derivation per edge.
pub fn oracle_surface_energy(cfg: &Configuration, tensions: &SurfaceTensions) -> OracleBreakdown {
    let grid = &cfg.grid;
    let rows = cfg.substrate.profile.rows();
    let spikes = cfg.substrate.profile.spikes();

    let in_s = |c: CellId| (c.j as usize) < rows[c.i as usize];
    let in_a = |c: CellId| cfg.composite.contains_cell(grid, c);
    let is_spike_edge = |e: EdgeId| -> bool {
        if e.axis != Axis::Vertical {
            return false;
        }
        let (i, j) = (e.vertex.i as usize, e.vertex.j as usize);
        spikes.iter().any(|s| {
            s.line == i && {
                let base = rows[s.line - 1].max(rows[s.line]);
                j >= base && j < s.top_row
            }
        })
    };

    let mut out = OracleBreakdown {
        edges: Vec::new(),
        total: 0.0,
        per_class: [0.0; 11],
        composite_boundary_length: 0.0,
        substrate_only_boundary_length: 0.0,
    };

    for e in grid.edges() {
        if grid.edge_on_wall(e) {
            continue;
        }
        let [c0, c1] = grid.edge_cells(e);
        let (c0, c1) = (c0.unwrap(), c1.unwrap());
        let (a0, a1) = (in_a(c0), in_a(c1));
        let (s0, s1) = (in_s(c0), in_s(c1));
        let a = a0 as u8 + a1 as u8;
        let s = s0 as u8 + s1 as u8;
        let slit = cfg.composite.slits.contains(&e);
        let fil = cfg.composite.filaments.contains(&e);
        let crack = cfg.substrate.cracks.contains(e);
        let spike = is_spike_edge(e);

        let in_da = a == 1 || (a == 2 && slit) || (a == 0 && fil);
        let in_ds = s == 1 || (s == 2 && crack) || spike;
        if !in_da && !in_ds {
            continue;
        }

        let x = grid.edge_midpoint(e);
        let nu_a = if a == 1 {
            grid.edge_normal_from(e, a0)
        } else {
            canonical(e)
        };
        let nu_s = if s == 1 {
            grid.edge_normal_from(e, s0)
        } else {
            canonical(e)
        };
        let film = |nu| tensions.film_at(x, nu);
        let regime = |nu| tensions.regime_at(x, nu);
        let fil_regime = |nu| tensions.filament_regime_at(x, nu);
        let bond = |nu| tensions.interface_at(x, nu);

        // Transcription of the refined classifier, one predicate per case.
        let mut hits: Vec<(usize, f64)> = Vec::new();
        if a == 1 && !in_ds {
            hits.push((0, film(nu_a))); // film free boundary
        }
        if a == 1 && s == 1 {
            hits.push((1, regime(nu_a))); // exposed substrate
        }
        if in_da && !in_ds && a == 2 {
            hits.push((2, 2.0 * film(nu_a))); // film crack
        }
        if in_da && !in_ds && a == 0 {
            hits.push((3, 2.0 * fil_regime(nu_a))); // film filament
        }
        if s == 1 && !in_da && a == 2 {
            hits.push((4, bond(nu_s))); // coherent interface
        }
        if s == 1 && in_da && a == 2 {
            hits.push((5, film(nu_a) + regime(nu_a))); // incoherent interface
        }
        if in_ds && in_da && s == 2 {
            hits.push((6, 2.0 * regime(nu_a))); // delaminated substrate crack
        }
        if in_ds && in_da && a == 0 {
            hits.push((7, 2.0 * fil_regime(nu_a))); // exposed substrate filament
        }
        if in_ds && a == 1 && s == 0 {
            let w = match tensions.spike_on_film_free {
                SpikeOnFilmFreeRule::FilmTension => film(nu_a),
                SpikeOnFilmFreeRule::RegimeTension => regime(nu_a),
            };
            hits.push((8, w)); // substrate filament on the film free boundary
        }
        if in_ds && !in_da && (s == 2 || s == 0) && a == 2 {
            hits.push((9, 2.0 * bond(nu_s))); // substrate flaw under coherent film
        }
        if in_ds && in_da && s == 0 && a == 2 {
            hits.push((10, 2.0 * film(nu_s))); // substrate filament = film crack
        }

        assert_eq!(
            hits.len(),
            1,
            "oracle predicates must fire exactly once at {e:?} (a={a}, s={s}, slit={slit}, fil={fil}, crack={crack}, spike={spike}); got {hits:?}"
        );
        // Case indices coincide with BoundaryClass::ALL order.
        let (class_idx, weight) = hits[0];
        let length = grid.edge_length(e);
        let energy = weight * length;
        out.per_class[class_idx] += energy;
        out.total += energy;
        if in_da {
            out.composite_boundary_length += length;
        } else {
            out.substrate_only_boundary_length += length;
        }
        out.edges.push(OracleEdge {
            edge: e,
            class: class_idx,
            energy,
            length,
            in_composite_boundary: in_da,
            in_substrate_boundary: in_ds,
        });
    }
    out
}

fn canonical(e: EdgeId) -> (f64, f64) {
    match e.axis {
        Axis::Horizontal => (0.0, 1.0),
        Axis::Vertical => (1.0, 0.0),
    }
}

/// The worked fixture: 4x4 unit grid, flat substrate at y = 0, two film cells
/// over the middle of the interface.
pub fn island_example() -> Configuration {
    let grid = Grid::square(4);
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    cfg.composite.set_cell(&grid, CellId::new(1, 2), true);
    cfg.composite.set_cell(&grid, CellId::new(2, 2), true);
    cfg
}

/// Same fixture with the left interface edge debonded.
pub fn island_example_delaminated() -> Configuration {
    let mut cfg = island_example();
    cfg.composite.slits.insert(EdgeId::horizontal(1, 2));
    cfg
}

pub fn full_box(n: usize) -> Configuration {
    let grid = Grid::square(n);
    let substrate =
        substrate_from_height(&grid, HeightProfile::full(&grid), CrackSet::new()).unwrap();
    Configuration::film_free(grid, substrate)
}

pub fn flat_substrate(grid: &Grid) -> SubstrateRegion {
    substrate_from_height(grid, HeightProfile::flat_zero(grid), CrackSet::new()).unwrap()
}

/// The worked tension triple `(film, substrate, interface) = (1, 1.5, 0.5)`.
pub fn worked_tensions() -> SurfaceTensions {
    SurfaceTensions::isotropic(1.0, 1.5, 0.5)
}
