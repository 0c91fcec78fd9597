//! Validates the standing hypotheses for a tension triple and material:
//! norm structure and bracketing constants, the compatibility inequality,
//! and the coercivity constant of each phase.
//!
//! Run: cargo run --example hypotheses_report

use sdri::elasticity::{IsotropicPhase, Material};
use sdri::grid::Grid;
use sdri::tension::{validate_hypotheses, FinslerNorm, SurfaceTensions};

fn main() {
    let grid = Grid::square(8);
    let material = Material::isotropic(
        IsotropicPhase::new(1.0, 1.0),
        IsotropicPhase::new(1.6, 1.1),
    );

    let good = SurfaceTensions::new(
        FinslerNorm::elliptic(1.0, 0.1, 1.2),
        FinslerNorm::crystalline(vec![(1.4, 0.2), (0.0, 1.1)]),
        FinslerNorm::isotropic(0.5),
    );
    let report = validate_hypotheses(&grid, &good, &material).unwrap();
    println!("well-posed triple:");
    println!("  c1 = {:.4}, c2 = {:.4}", report.c1, report.c2);
    println!("  norms ok: {}, compatibility ok: {}", report.h1_ok, report.h2_ok);
    println!("  c3 film = {:.4}, c3 substrate = {:.4}", report.c3_film, report.c3_substrate);

    // An interface tension that dwarfs the others breaks the compatibility
    // inequality; the report carries the worst witness.
    let bad = SurfaceTensions::isotropic(1.0, 1.5, 3.0);
    let report = validate_hypotheses(&grid, &bad, &material).unwrap();
    let ((x, y), (nx, ny), margin) = report.h2_worst;
    println!("violating triple: compatibility ok = {}", report.h2_ok);
    println!("  worst witness at ({x:.2}, {y:.2}), direction ({nx:.2}, {ny:.2}), margin {margin:.3}");
}
