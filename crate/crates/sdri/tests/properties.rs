//! Property tests for the structural invariants.

mod common;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use sdri::geometry::{
    boundary_components, classify_boundary, pointwise_variation, substrate_from_height, CrackSet,
    HeightProfile, Spike,
};
use sdri::grid::{CellId, Grid};

proptest! {
    /// Component counting and labeling ignore the order edges arrive in.
    #[test]
    fn component_labeling_is_order_free(
        cells in prop::collection::btree_set((0usize..6, 0usize..6), 1..8),
        rotate in 0usize..32,
    ) {
        let grid = Grid::square(6);
        let mut edges = Vec::new();
        for &(i, j) in &cells {
            edges.extend(grid.cell_edges(CellId::new(i, j)));
        }
        edges.sort();
        edges.dedup();
        let (n1, l1) = boundary_components(&grid, &edges);
        let k = rotate % edges.len().max(1);
        edges.rotate_left(k);
        edges.reverse();
        let (n2, l2) = boundary_components(&grid, &edges);
        prop_assert_eq!(n1, n2);
        prop_assert_eq!(l1, l2);
    }

    /// The variation/graph-length sandwich holds for every profile the
    /// representation can express, spikes included.
    #[test]
    fn variation_sandwich(
        cells in prop::collection::vec(0usize..=4, 1..12),
        spike_line in 1usize..12,
        spike_extra in 1usize..3,
    ) {
        let nx = cells.len();
        let grid = Grid::new(1.0, 1.0, nx, 8).unwrap();
        let mut spikes = Vec::new();
        if nx > 1 {
            let line = 1 + (spike_line % (nx - 1));
            let base = cells[line - 1].max(cells[line]);
            let top = base + spike_extra;
            if top <= 4 {
                spikes.push((line, top));
            }
        }
        let profile = HeightProfile::from_cells_above_zero(&grid, &cells, &spikes).unwrap();
        let (var, len) = pointwise_variation(&grid, &profile);
        prop_assert!(var <= len + 1e-12);
        prop_assert!(len <= 2.0 * grid.l + 2.0 * var + 1e-12);
    }

    /// Serialization round-trips are structurally lossless and byte-stable.
    #[test]
    fn document_round_trip(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::new(1.0, 1.0, 7, 6).unwrap();
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let s1 = sdri::io::configuration_to_string(&cfg);
        let back = sdri::io::configuration_from_str(&s1).unwrap();
        prop_assert_eq!(&back, &cfg);
        prop_assert_eq!(sdri::io::configuration_to_string(&back), s1);
    }

    /// Every admissible configuration classifies with one label per edge and
    /// the class partition reproduces the boundary length.
    #[test]
    fn classification_partitions(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let grid = Grid::new(1.0, 1.0, 8, 6).unwrap();
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let labels = classify_boundary(&cfg).unwrap();
        let (bs, ba) = cfg.interior_boundaries();
        let union: std::collections::BTreeSet<_> = bs.into_iter().chain(ba).collect();
        prop_assert_eq!(labels.entries.len(), union.len());
        let sum: f64 = labels.entries.iter().map(|e| e.length).sum();
        let h1: f64 = union.iter().map(|&e| grid.edge_length(e)).sum();
        prop_assert!((sum - h1).abs() <= 1e-12 * h1.max(1.0));
    }
}

#[test]
fn spike_representation_rejects_non_usc_shapes() {
    // The representation itself enforces upper semicontinuity: a "spike"
    // level with the neighbouring column is unrepresentable.
    let grid = Grid::square(4);
    let rows = vec![grid.zero_row(); 4];
    let err = HeightProfile::from_rows(&grid, rows, vec![Spike { line: 1, top_row: grid.zero_row() }]);
    assert!(err.is_err());
    // And a crack outside the subgraph closure cannot be constructed either.
    let profile = HeightProfile::flat_zero(&grid);
    let err = substrate_from_height(
        &grid,
        profile,
        CrackSet::from_edges([sdri::grid::EdgeId::vertical(2, 3)]),
    );
    assert!(err.is_err());
}
