//! Volume-constrained annealing of a thin layer under dewetting tensions:
//! the layer beads up into an island with less interface.
//!
//! Run: cargo run --example anneal_dewetting

use sdri::elasticity::{IsotropicPhase, Material};
use sdri::energy::surface_energy;
use sdri::geometry::{substrate_from_height, Configuration, CrackSet, HeightProfile};
use sdri::grid::{CellId, Grid};
use sdri::minimize::{minimize_constrained, MinimizeParams, Schedule};
use sdri::tension::SurfaceTensions;

fn main() {
    let grid = Grid::new(1.0, 1.0, 16, 16).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut layer = Configuration::film_free(grid.clone(), substrate);
    for c in 0..16 {
        layer.composite.set_cell(&grid, CellId::new(c, 8), true);
    }

    // Exposing the substrate is cheap: the layer should dewet.
    let tensions = SurfaceTensions::isotropic(1.0, 0.5, 0.5);
    let material = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));
    let params = MinimizeParams {
        m: (1, 4),
        volumes: Some((layer.substrate_area(), layer.composite_area())),
        schedule: Schedule { t0: 0.15, cooling: 0.9985, steps: 6000 },
        seed: 17,
        ..Default::default()
    };

    let start = surface_energy(&layer, &tensions).unwrap().surface;
    let traj = minimize_constrained(&layer, &tensions, &material, &params).unwrap();
    println!("layer start   S = {start}");
    println!("annealed best S = {} (step {})", traj.best.surface, traj.best.step);
    println!("accepted moves: {}", traj.accepted_count);

    let out = std::path::Path::new("target/examples-out");
    std::fs::create_dir_all(out).unwrap();
    std::fs::write(out.join("dewetting-start.svg"), sdri::render::render_svg(&layer)).unwrap();
    std::fs::write(
        out.join("dewetting-best.svg"),
        sdri::render::render_svg(&traj.best.configuration),
    )
    .unwrap();
    println!("snapshots in {}", out.display());
}
