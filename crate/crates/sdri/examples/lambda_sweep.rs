//! Penalized-volume sweep: as the penalty weight grows, the best
//! configuration's volume error shrinks.
//!
//! Run: cargo run --example lambda_sweep

use sdri::elasticity::{IsotropicPhase, Material};
use sdri::geometry::{substrate_from_height, Configuration, CrackSet, HeightProfile};
use sdri::grid::{CellId, Grid};
use sdri::minimize::{minimize_penalized, MinimizeParams, Schedule};
use sdri::tension::SurfaceTensions;

fn main() {
    let grid = Grid::new(1.0, 1.0, 8, 8).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    for c in 3..5 {
        cfg.composite.set_cell(&grid, CellId::new(c, 4), true);
    }
    let targets = (cfg.substrate_area(), cfg.composite_area() + 2.0 * grid.cell_area());
    let tensions = SurfaceTensions::isotropic(1.0, 1.5, 0.5);
    let material = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));

    println!("lambda,best_f,volume_error");
    for lambda in [1.0, 10.0, 100.0] {
        let params = MinimizeParams {
            m: (1, 4),
            volumes: Some(targets),
            lambda: (lambda, lambda),
            schedule: Schedule { t0: 0.3, cooling: 0.998, steps: 4000 },
            seed: 808,
            ..Default::default()
        };
        let traj = minimize_penalized(&cfg, &tensions, &material, &params).unwrap();
        let best = &traj.best.configuration;
        let err = (best.substrate_area() - targets.0).abs()
            + (best.composite_area() - targets.1).abs();
        println!("{lambda},{},{err}", traj.best.f);
    }
}
