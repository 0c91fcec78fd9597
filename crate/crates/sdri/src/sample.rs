//! Seeded generators for admissible configurations and hypothesis-satisfying
//! tension triples; the random corpus behind the verification harness.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::geometry::{
    substrate_from_height, validate_configuration, Configuration, CrackSet, HeightProfile, Spike,
};
use crate::grid::{CellId, EdgeId, Grid};
use crate::tension::{FinslerNorm, SurfaceTensions};

/// Random admissible configuration on the given grid: a bounded-variation
/// height profile with occasional spikes, film blobs grown over it, and a
/// sprinkle of cracks, delaminations, film cracks, and filaments.
///
/// The returned configuration always passes validation with its own component
/// counts, so callers pick the budget.
pub fn random_admissible(rng: &mut ChaCha8Rng, grid: &Grid) -> Configuration {
    loop {
        if let Some(cfg) = try_random(rng, grid) {
            let report = validate_configuration(&cfg, (usize::MAX, usize::MAX));
            if report.admissible {
                return cfg;
            }
        }
    }
}

fn try_random(rng: &mut ChaCha8Rng, grid: &Grid) -> Option<Configuration> {
    let zero = grid.zero_row();
    // Height profile: clipped random walk.
    let mut rows = Vec::with_capacity(grid.nx);
    let mut level = zero + rng.gen_range(0..=grid.ny / 4);
    for _ in 0..grid.nx {
        let step: i64 = match rng.gen_range(0u32..10) {
            0..=1 => -1,
            2..=3 => 1,
            4 => rng.gen_range(-2..=2),
            _ => 0,
        };
        level = (level as i64 + step).clamp(zero as i64, grid.ny as i64 - 1) as usize;
        rows.push(level);
    }
    // Spikes at a few interior lines.
    let mut spikes = Vec::new();
    for line in 1..grid.nx {
        if rng.gen_bool(0.08) {
            let base = rows[line - 1].max(rows[line]);
            if base < grid.ny {
                let top = rng.gen_range(base + 1..=grid.ny.min(base + 3));
                spikes.push(Spike { line, top_row: top });
            }
        }
    }
    let profile = HeightProfile::from_rows(grid, rows.clone(), spikes).ok()?;

    // Film: a few blobs grown cell by cell above the substrate.
    let mut in_a: Vec<bool> = (0..grid.cell_count()).map(|_| false).collect();
    for c in grid.cells() {
        if (c.j as usize) < rows[c.i as usize] {
            in_a[grid.cell_index(c)] = true;
        }
    }
    let blobs = rng.gen_range(0..4);
    for _ in 0..blobs {
        let c0 = CellId::new(rng.gen_range(0..grid.nx), rng.gen_range(0..grid.ny));
        if in_a[grid.cell_index(c0)] {
            continue;
        }
        // Drop the seed onto the surface of whatever is below it.
        let mut col = c0.i as usize;
        let mut row = c0.j as usize;
        while row > 0 && !in_a[grid.cell_index(CellId::new(col, row - 1))] {
            row -= 1;
        }
        let size = rng.gen_range(1..=6usize);
        let mut frontier = vec![CellId::new(col, row)];
        for _ in 0..size {
            if frontier.is_empty() {
                break;
            }
            let idx = rng.gen_range(0..frontier.len());
            let c = frontier.swap_remove(idx);
            if in_a[grid.cell_index(c)] {
                continue;
            }
            in_a[grid.cell_index(c)] = true;
            col = c.i as usize;
            row = c.j as usize;
            if col > 0 {
                frontier.push(CellId::new(col - 1, row));
            }
            if col + 1 < grid.nx {
                frontier.push(CellId::new(col + 1, row));
            }
            if row + 1 < grid.ny {
                frontier.push(CellId::new(col, row + 1));
            }
        }
    }

    // Occasionally a detached one-cell island floating in the vapor.
    if rng.gen_bool(0.3) {
        let c = CellId::new(rng.gen_range(0..grid.nx), rng.gen_range(0..grid.ny));
        let free = !in_a[grid.cell_index(c)];
        if free {
            in_a[grid.cell_index(c)] = true;
        }
    }

    let mut composite = crate::geometry::CompositeRegion::from_flags(in_a);

    // Cracks: short vertical runs hanging from the substrate surface.
    let mut cracks = CrackSet::new();
    for _ in 0..rng.gen_range(0..3) {
        let line = rng.gen_range(1..grid.nx);
        let surface = rows[line - 1].min(rows[line]);
        if surface == 0 {
            continue;
        }
        let len = rng.gen_range(1..=surface.min(3));
        for t in 0..len {
            let e = EdgeId::vertical(line, surface - 1 - t);
            cracks.insert(e);
            if rng.gen_bool(0.5) {
                composite.slits.insert(e);
            }
        }
    }
    let substrate = substrate_from_height(grid, profile, cracks).ok()?;

    // Delaminate a random stretch of the interface.
    for e in grid.edges() {
        if grid.edge_on_wall(e) {
            continue;
        }
        let a = composite.edge_density(grid, e);
        let s = substrate.edge_density(grid, e);
        if a == 2 && s == 1 && rng.gen_bool(0.12) {
            composite.slits.insert(e);
        }
        // Film cracks in the bulk of the film.
        if a == 2
            && s == 0
            && !substrate.is_spike_edge(e)
            && rng.gen_bool(0.02)
        {
            composite.slits.insert(e);
        }
    }

    // Cover spikes: explicit filaments where no composite cell touches them.
    for &e in substrate.spike_edge_set() {
        if composite.edge_density(grid, e) == 0 {
            composite.filaments.insert(e);
        }
    }

    // A few film filaments grown off the composite boundary.
    let boundary_vertices: std::collections::BTreeSet<_> = composite
        .interior_boundary_edges(grid)
        .into_iter()
        .flat_map(|e| {
            let (p, q) = grid.edge_endpoints(e);
            [p, q]
        })
        .collect();
    let all_edges = grid.edges();
    for _ in 0..rng.gen_range(0..3) {
        let e = all_edges[rng.gen_range(0..all_edges.len())];
        if grid.edge_on_wall(e) || composite.edge_density(grid, e) != 0 {
            continue;
        }
        let (p, q) = grid.edge_endpoints(e);
        if boundary_vertices.contains(&p) || boundary_vertices.contains(&q) {
            composite.filaments.insert(e);
        }
    }

    Some(Configuration {
        grid: grid.clone(),
        substrate,
        composite,
    })
}

/// Random Finsler norm of any supported kind with values around unity.
pub fn random_norm(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> FinslerNorm {
    let base = rng.gen_range(lo..hi);
    match rng.gen_range(0u32..4) {
        0 => FinslerNorm::isotropic(base),
        1 => FinslerNorm::weighted_axis(base, rng.gen_range(lo..hi)),
        2 => {
            // SPD matrix with controlled anisotropy.
            let a = base * base;
            let b = rng.gen_range(lo..hi).powi(2);
            let c = rng.gen_range(-0.3..0.3) * a.min(b);
            FinslerNorm::elliptic(a, c, b)
        }
        _ => {
            let n = rng.gen_range(2..5);
            let mut vectors = Vec::with_capacity(n);
            for k in 0..n {
                let t = std::f64::consts::PI * (k as f64 + rng.gen_range(0.0..0.4)) / n as f64;
                let r = rng.gen_range(lo..hi);
                vectors.push((r * t.cos(), r * t.sin()));
            }
            FinslerNorm::crystalline(vectors)
        }
    }
}

/// Random tension triple satisfying (H1) and (H2), by rejection sampling over
/// the sampled direction set.
pub fn random_valid_tensions(rng: &mut ChaCha8Rng, grid: &Grid) -> SurfaceTensions {
    loop {
        let t = SurfaceTensions::new(
            random_norm(rng, 0.5, 1.6),
            random_norm(rng, 0.5, 2.2),
            random_norm(rng, 0.2, 0.9),
        );
        let (c1, _) = t.tension_bounds(grid);
        if !(c1 > 1e-6) {
            continue;
        }
        let mut h2 = true;
        for xi in crate::tension::lattice_normals()
            .iter()
            .chain(crate::tension::sample_directions(64).iter())
        {
            let x = (0.1 * grid.l, -0.2 * grid.big_l);
            if t.regime_at(x, *xi) < (t.interface_at(x, *xi) - t.film_at(x, *xi)).abs() - 1e-12 {
                h2 = false;
                break;
            }
        }
        if h2 {
            return t;
        }
    }
}
