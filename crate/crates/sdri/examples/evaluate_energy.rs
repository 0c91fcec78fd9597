//! Builds the two-cell island fixture, prints its energy breakdown, and shows
//! localization and the reduced fixed-substrate energy.
//!
//! Run: cargo run --example evaluate_energy

use sdri::energy::{localized_surface_energy, reduced_energy_fprime, surface_energy};
use sdri::geometry::{substrate_from_height, BoundaryClass, Configuration, CrackSet, HeightProfile};
use sdri::grid::{CellId, EdgeId, Grid};
use sdri::tension::SurfaceTensions;

fn main() {
    // 4x4 unit grid, flat substrate at y = 0, two film cells on top.
    let grid = Grid::square(4);
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    cfg.composite.set_cell(&grid, CellId::new(1, 2), true);
    cfg.composite.set_cell(&grid, CellId::new(2, 2), true);

    let tensions = SurfaceTensions::isotropic(1.0, 1.5, 0.5);
    let breakdown = surface_energy(&cfg, &tensions).unwrap();
    println!("surface energy S = {}", breakdown.surface);
    for class in BoundaryClass::ALL {
        let v = breakdown.class(class);
        if v != 0.0 {
            println!("  {:32} {v}", class.name());
        }
    }

    let left = localized_surface_energy(&cfg, &tensions, (-1.0, -1.0, 0.0, 1.0)).unwrap();
    let right = localized_surface_energy(&cfg, &tensions, (0.0, -1.0, 1.0, 1.0)).unwrap();
    println!("localized halves: {left} + {right} = {}", left + right);

    let f_prime = reduced_energy_fprime(&cfg, &tensions, 0.0).unwrap();
    println!("reduced fixed-substrate energy F' = {f_prime}");

    // Debonding one interface edge swaps the coherent price for the
    // incoherent one.
    cfg.composite.slits.insert(EdgeId::horizontal(1, grid.zero_row()));
    let debonded = surface_energy(&cfg, &tensions).unwrap();
    println!("after debonding one interface edge: S = {}", debonded.surface);
}
