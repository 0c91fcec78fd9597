//! The anisotropic segment-minimality oracle: lattice shortest paths can
//! never undercut the straight chord when edges are priced by a norm.
//!
//! Run: cargo run --example segment_minimality

use sdri::analysis::segment_minimality_check;
use sdri::grid::Grid;
use sdri::tension::FinslerNorm;

fn main() {
    let grid = Grid::square(8);
    let cases = [
        ("axis l1", FinslerNorm::weighted_axis(1.0, 1.0)),
        ("euclidean", FinslerNorm::isotropic(1.0)),
        ("elliptic 2:1", FinslerNorm::elliptic(4.0, 0.0, 1.0)),
        (
            "crystalline square",
            FinslerNorm::crystalline(vec![(1.0, 0.0), (0.0, 1.0)]),
        ),
        (
            "crystalline hex-ish",
            FinslerNorm::crystalline(vec![(1.0, 0.0), (0.5, 0.9), (-0.5, 0.9)]),
        ),
    ];
    for (name, phi) in &cases {
        let (path, chord, pass) = segment_minimality_check(phi, (0, 0), (3, 2), &grid);
        println!(
            "{name:20} path {path:.6}  chord {chord:.6}  slack {:+.2e}  pass {pass}",
            path - chord
        );
    }
}
