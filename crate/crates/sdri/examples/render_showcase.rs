//! Renders a configuration exercising every interface class: coherent and
//! debonded contact, a substrate crack, a spike, and a film filament.
//!
//! Run: cargo run --example render_showcase

use sdri::geometry::{
    classify_boundary, substrate_from_height, validate_configuration, Configuration, CrackSet,
    HeightProfile,
};
use sdri::grid::{CellId, EdgeId, Grid};

fn main() {
    let grid = Grid::new(1.0, 1.0, 12, 8).unwrap();
    let zero = grid.zero_row();
    // Stepped substrate with one spike at line 9.
    let heights = vec![1, 1, 1, 0, 0, 0, 0, 0, 1, 1, 2, 2];
    let profile = HeightProfile::from_cells_above_zero(&grid, &heights, &[(9, 3)]).unwrap();
    // A crack hanging from the step face.
    let cracks = CrackSet::from_edges([EdgeId::vertical(3, zero - 1), EdgeId::vertical(3, zero - 2)]);
    let substrate = substrate_from_height(&grid, profile, cracks).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    // Film pooled in the valley, coherent on the left span, debonded on one edge.
    for c in 3..8 {
        for r in 0..2 {
            cfg.composite.set_cell(&grid, CellId::new(c, zero + r), true);
        }
    }
    cfg.composite.slits.insert(EdgeId::horizontal(5, zero));
    // Cover the spike with a filament mark and grow one filament whisker off
    // the film's top corner.
    for e in cfg.substrate.profile.spike_edges() {
        cfg.composite.filaments.insert(e);
    }
    cfg.composite.filaments.insert(EdgeId::vertical(8, zero + 2));

    let report = validate_configuration(&cfg, (2, 3));
    println!("admissible: {} ({} / {} components)",
        report.admissible, report.substrate_components, report.composite_components);
    let labels = classify_boundary(&cfg).unwrap();
    for class in sdri::geometry::BoundaryClass::ALL {
        let len = labels.class_length(class);
        if len > 0.0 {
            println!("  {:32} length {len}", class.name());
        }
    }
    let out = std::path::Path::new("target/examples-out");
    std::fs::create_dir_all(out).unwrap();
    std::fs::write(out.join("showcase.svg"), sdri::render::render_svg(&cfg)).unwrap();
    println!("wrote {}", out.join("showcase.svg").display());
}
