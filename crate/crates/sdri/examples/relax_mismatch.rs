//! Mismatch elasticity on a coherent film layer, and the relaxation gained by
//! delaminating the interface.
//!
//! Run: cargo run --example relax_mismatch

use sdri::elasticity::{relax, IsotropicPhase, Material};
use sdri::geometry::{substrate_from_height, Configuration, CrackSet, HeightProfile};
use sdri::grid::{CellId, EdgeId, Grid};

fn main() {
    let grid = Grid::new(1.0, 1.0, 16, 16).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut coherent = Configuration::film_free(grid.clone(), substrate);
    for c in 0..16 {
        for r in 8..10 {
            coherent.composite.set_cell(&grid, CellId::new(c, r), true);
        }
    }
    let material = Material::isotropic(
        IsotropicPhase::new(1.0, 1.0),
        IsotropicPhase::new(1.6, 1.1),
    )
    .with_dilational_mismatch(0.02);

    let (mesh, _, w_coherent) = relax(&coherent, &material).unwrap();
    println!(
        "coherent layer: {} nodes, {} elements, {} component(s), W = {w_coherent:.6e}",
        mesh.node_count(),
        mesh.elements.len(),
        mesh.component_count
    );

    let mut debonded = coherent.clone();
    for c in 0..16 {
        debonded.composite.slits.insert(EdgeId::horizontal(c, 8));
    }
    let (mesh, _, w_free) = relax(&debonded, &material).unwrap();
    println!(
        "fully delaminated: {} components, W = {w_free:.6e}",
        mesh.component_count
    );
    println!("relaxation gained: {:.6e}", w_coherent - w_free);
}
