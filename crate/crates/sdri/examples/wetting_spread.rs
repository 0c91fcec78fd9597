//! Volume-constrained annealing from an island start under wetting tensions:
//! covering the substrate is cheaper than leaving it exposed, so the island
//! spreads.
//!
//! Run: cargo run --example wetting_spread

use sdri::elasticity::{IsotropicPhase, Material};
use sdri::energy::surface_energy;
use sdri::geometry::{
    classify_boundary, substrate_from_height, BoundaryClass, Configuration, CrackSet,
    HeightProfile,
};
use sdri::grid::{CellId, Grid};
use sdri::minimize::{minimize_constrained, MinimizeParams, Schedule};
use sdri::tension::SurfaceTensions;

fn main() {
    let grid = Grid::new(1.0, 1.0, 16, 16).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut island = Configuration::film_free(grid.clone(), substrate);
    for c in 6..10 {
        for r in 8..10 {
            island.composite.set_cell(&grid, CellId::new(c, r), true);
        }
    }

    let tensions = SurfaceTensions::isotropic(1.0, 2.0, 0.2);
    let material = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));
    let params = MinimizeParams {
        m: (1, 4),
        volumes: Some((island.substrate_area(), island.composite_area())),
        schedule: Schedule { t0: 0.15, cooling: 0.9985, steps: 6000 },
        seed: 7,
        ..Default::default()
    };

    let start = surface_energy(&island, &tensions).unwrap();
    let traj = minimize_constrained(&island, &tensions, &material, &params).unwrap();
    let end = surface_energy(&traj.best.configuration, &tensions).unwrap();
    let exposed = |cfg| {
        classify_boundary(cfg)
            .unwrap()
            .class_length(BoundaryClass::SubstrateFree)
    };
    println!("island start: S = {}", start.surface);
    println!("  exposed substrate length {}", exposed(&island));
    println!("annealed best: S = {}", end.surface);
    println!("  exposed substrate length {}", exposed(&traj.best.configuration));
}
