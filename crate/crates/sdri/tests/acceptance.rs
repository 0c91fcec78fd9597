//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

mod common;

use common::{island_example, island_example_delaminated, oracle_surface_energy, worked_tensions};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sdri::analysis::{
    generate_sequence, lsc_check, lsc_check_weighted, segment_minimality_check, SequenceKind,
};
use sdri::elasticity::{
    build_mesh, elastic_energy_on_mesh, energy_gradient, relax,
    DisplacementField, IsotropicPhase, Material, MismatchScope,
};
use sdri::energy::{compactness_bound, surface_energy};
use sdri::geometry::{
    classify_boundary, pointwise_variation, substrate_from_height,
    BoundaryClass, Configuration, CrackSet, HeightProfile,
};
use sdri::grid::{CellId, Grid};
use sdri::minimize::{
    minimize_constrained, minimize_penalized, MinimizeParams, Schedule,
};
use sdri::tension::{FinslerNorm, SurfaceTensions};

fn report(number: usize, name: &str, pass: bool, detail: &str) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    println!("ACCEPTANCE {number:02} {name}: {verdict} ({detail})");
    assert!(pass, "criterion {number} ({name}) failed: {detail}");
}

fn random_grid(rng: &mut ChaCha8Rng) -> Grid {
    let nx = rng.gen_range(3..=16);
    let ny = 2 * rng.gen_range(2..=8);
    Grid::new(1.0, 1.0, nx, ny).unwrap()
}

/// Criterion 1: on 1000 seeded random admissible configurations every
/// Ω-interior boundary edge receives exactly one class and the class-length
/// sums reproduce H¹(Ω ∩ (∂A ∪ ∂S)) to 1e-12 relative.
#[test]
fn criterion_01_partition_completeness() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut checked_edges = 0usize;
    for _ in 0..1000 {
        let grid = random_grid(&mut rng);
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let labels = classify_boundary(&cfg).expect("admissible configurations classify");
        let mut seen = std::collections::BTreeSet::new();
        for e in &labels.entries {
            assert!(seen.insert(e.edge), "duplicate label");
        }
        let (bs, ba) = cfg.interior_boundaries();
        let union: std::collections::BTreeSet<_> = bs.into_iter().chain(ba).collect();
        assert_eq!(seen, union, "classes must partition the boundary");
        let total: f64 = labels.entries.iter().map(|e| e.length).sum();
        let h1: f64 = union.iter().map(|&e| grid.edge_length(e)).sum();
        assert!(
            (total - h1).abs() <= 1e-12 * h1.max(1.0),
            "length sum {total} vs H1 {h1}"
        );
        checked_edges += labels.entries.len();
    }
    report(
        1,
        "partition-completeness",
        true,
        &format!("1000 configurations, {checked_edges} labeled edges"),
    );
}

/// Criterion 2: the surface energy matches the independent brute-force
/// enumerator to 1e-12 relative on the same corpus, including the worked
/// island fixtures whose values the oracle recomputes first.
#[test]
fn criterion_02_energy_oracle_equivalence() {
    let t = worked_tensions();
    let island = island_example();
    let island_oracle = oracle_surface_energy(&island, &t).total;
    assert!((island_oracle - 4.0).abs() < 1e-12);
    assert!((surface_energy(&island, &t).unwrap().surface - island_oracle).abs() < 1e-12);
    let debonded = island_example_delaminated();
    let debonded_oracle = oracle_surface_energy(&debonded, &t).total;
    assert!((debonded_oracle - 5.0).abs() < 1e-12);
    assert!((surface_energy(&debonded, &t).unwrap().surface - debonded_oracle).abs() < 1e-12);

    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let grid = random_grid(&mut rng);
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let tensions = sdri::sample::random_valid_tensions(&mut rng, &grid);
        let b = surface_energy(&cfg, &tensions).unwrap();
        let oracle = oracle_surface_energy(&cfg, &tensions);
        let scale = oracle.total.abs().max(1.0);
        let rel = (b.surface - oracle.total).abs() / scale;
        worst = worst.max(rel);
        assert!(rel <= 1e-12, "relative deviation {rel}");
        for (idx, class) in BoundaryClass::ALL.iter().enumerate() {
            assert!((b.class(*class) - oracle.per_class[idx]).abs() <= 1e-12 * scale);
        }
    }
    report(
        2,
        "energy-oracle-equivalence",
        true,
        &format!("1000 configurations, worst relative deviation {worst:.2e}"),
    );
}

/// Criterion 3: the discrete variation sandwich
/// `Var h <= H¹(graph completion) <= 2l + 2 Var h`, exactly, on 1000 random
/// profiles with spikes.
#[test]
fn criterion_03_variation_sandwich() {
    let mut rng = ChaCha8Rng::seed_from_u64(303);
    for _ in 0..1000 {
        let grid = random_grid(&mut rng);
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let (var, len) = pointwise_variation(&grid, &cfg.substrate.profile);
        // Integer edge counts times cell sizes: exact comparisons with a bare
        // rounding allowance.
        assert!(var <= len + 1e-12, "Var {var} > graph length {len}");
        assert!(len <= 2.0 * grid.l + 2.0 * var + 1e-12);
    }
    report(3, "variation-sandwich", true, "1000 random profiles with spikes");
}

/// Criterion 4: the compactness bound on the random corpus and on every
/// debug-mode minimizer trajectory state.
#[test]
fn criterion_04_compactness_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(404);
    for _ in 0..1000 {
        let grid = random_grid(&mut rng);
        let cfg = sdri::sample::random_admissible(&mut rng, &grid);
        let tensions = sdri::sample::random_valid_tensions(&mut rng, &grid);
        let (lhs, rhs, pass) = compactness_bound(&cfg, &tensions).unwrap();
        assert!(pass, "corpus: {lhs} > {rhs}");
    }
    // Debug mode re-checks the bound after every accepted move.
    let grid = Grid::new(1.0, 1.0, 8, 8).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    for c in 2..6 {
        cfg.composite.set_cell(&grid, CellId::new(c, 4), true);
    }
    let params = MinimizeParams {
        m: (2, 4),
        volumes: Some((cfg.substrate_area(), cfg.composite_area())),
        lambda: (4.0, 4.0),
        schedule: Schedule {
            t0: 0.4,
            cooling: 0.996,
            steps: 1200,
        },
        seed: 404,
        debug_checks: true,
        ..Default::default()
    };
    let zero = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));
    let traj = minimize_penalized(&cfg, &worked_tensions(), &zero, &params).unwrap();
    report(
        4,
        "compactness-bound",
        true,
        &format!(
            "1000 corpus configurations plus {} debug-checked trajectory states",
            traj.accepted_count
        ),
    );
}

/// Criterion 5: lower semicontinuity for all six sequence kinds under 50
/// random (H1)-(H2)-valid tension triples at tolerance 1e-9, and the
/// deliberately misweighted adversarial run fails.
#[test]
fn criterion_05_lower_semicontinuity() {
    let grid = Grid::new(1.0, 1.0, 16, 8).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut runs = 0;
    for kind in SequenceKind::ALL {
        let bundle = generate_sequence(kind, 5, &grid).unwrap();
        for _ in 0..50 {
            let tensions = sdri::sample::random_valid_tensions(&mut rng, &grid);
            let report = lsc_check(&bundle, &tensions, 1e-9).unwrap();
            assert!(
                report.pass,
                "{} failed with margin {}",
                kind.name(),
                report.margin
            );
            runs += 1;
        }
    }
    let bundle = generate_sequence(SequenceKind::DelaminationClosing, 5, &grid).unwrap();
    let adversarial = lsc_check_weighted(&bundle, &worked_tensions(), 1e-9, true).unwrap();
    assert!(
        !adversarial.pass,
        "misweighted limit must fail, margin {}",
        adversarial.margin
    );
    report(
        5,
        "lower-semicontinuity",
        true,
        &format!("{runs} sequence/tension runs pass; adversarial misweighting fails"),
    );
}

/// Criterion 6: elasticity at 32x32. (a) compatible mismatch relaxes to
/// W <= 1e-10; (b) the energy gradient matches central differences to 1e-5
/// relative on 20 random nodal directions; (c) adding a cut never increases
/// the equilibrium energy on 20 random shape/cut pairs.
#[test]
fn criterion_06_elasticity() {
    let grid = Grid::new(1.0, 1.0, 32, 32).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut layered = Configuration::film_free(grid.clone(), substrate);
    for c in 0..32 {
        for r in 16..20 {
            layered.composite.set_cell(&grid, CellId::new(c, r), true);
        }
    }

    // (a) Compatible mismatch: same phases, strain applied everywhere.
    let compatible = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0))
        .with_mismatch([[0.012, 0.004], [-0.006, -0.008]])
        .with_scope(MismatchScope::Everywhere);
    let (_, _, w) = relax(&layered, &compatible).unwrap();
    assert!(w <= 1e-10, "(a) compatible mismatch left W = {w}");

    // A detached island with film-only mismatch is compatible as well.
    let mut detached = Configuration::film_free(
        grid.clone(),
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap(),
    );
    detached.composite.set_cell(&grid, CellId::new(10, 24), true);
    detached.composite.set_cell(&grid, CellId::new(11, 24), true);
    let film_only = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.2, 0.8))
        .with_dilational_mismatch(0.02);
    let (_, _, w_detached) = relax(&detached, &film_only).unwrap();
    assert!(w_detached <= 1e-10, "(a) detached island left W = {w_detached}");

    // (b) Gradient against central finite differences.
    let material = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.4, 0.9))
        .with_dilational_mismatch(0.02);
    let mesh = build_mesh(&layered);
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let n = mesh.node_count();
    let mut random_field = |scale: f64| DisplacementField {
        values: (0..n)
            .map(|_| (rng.gen_range(-scale..scale), rng.gen_range(-scale..scale)))
            .collect(),
    };
    let base = random_field(0.04);
    let mut worst_rel: f64 = 0.0;
    for _ in 0..20 {
        let dir = random_field(1.0);
        let analytic = energy_gradient(&layered, &mesh, &material, &base, &dir);
        let eps = 1e-6;
        let mut plus = base.clone();
        let mut minus = base.clone();
        for i in 0..n {
            plus.values[i].0 += eps * dir.values[i].0;
            plus.values[i].1 += eps * dir.values[i].1;
            minus.values[i].0 -= eps * dir.values[i].0;
            minus.values[i].1 -= eps * dir.values[i].1;
        }
        let wp = elastic_energy_on_mesh(&layered, &mesh, &plus, &material).unwrap();
        let wm = elastic_energy_on_mesh(&layered, &mesh, &minus, &material).unwrap();
        let fd = (wp - wm) / (2.0 * eps);
        let rel = (analytic - fd).abs() / fd.abs().max(1e-9);
        worst_rel = worst_rel.max(rel);
        assert!(rel <= 1e-5, "(b) gradient relative error {rel}");
    }

    // (c) Extra cuts relax: random shapes, one extra interface cut each.
    let mut rng = ChaCha8Rng::seed_from_u64(616);
    let coarse = Grid::new(1.0, 1.0, 32, 32).unwrap();
    let mut tested = 0;
    while tested < 20 {
        let cfg0 = sdri::sample::random_admissible(&mut rng, &coarse);
        let cuttable: Vec<_> = coarse
            .edges()
            .into_iter()
            .filter(|&e| {
                !coarse.edge_on_wall(e)
                    && cfg0.composite.edge_density(&coarse, e) == 2
                    && cfg0.substrate.edge_density(&coarse, e) == 1
                    && !cfg0.composite.slits.contains(&e)
            })
            .collect();
        if cuttable.is_empty() {
            continue;
        }
        let e = cuttable[rng.gen_range(0..cuttable.len())];
        let (_, _, w0) = relax(&cfg0, &film_only).unwrap();
        let mut cut = cfg0.clone();
        cut.composite.slits.insert(e);
        let (_, _, w1) = relax(&cut, &film_only).unwrap();
        assert!(w1 <= w0 + 1e-12, "(c) cut increased energy: {w1} > {w0}");
        tested += 1;
    }
    report(
        6,
        "elasticity",
        true,
        &format!("compatible W <= 1e-10; 20 gradient directions (worst {worst_rel:.2e}); 20 cut pairs"),
    );
}

/// Criterion 7: regime behavior of the constrained minimizer, judged by
/// oracle-evaluated endpoint energies, not by eye.
#[test]
fn criterion_07_regime_behavior() {
    let grid = Grid::new(1.0, 1.0, 16, 16).unwrap();
    let zero_mat = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));

    // Wetting: covering is cheaper than exposing (φ_S > φ_F + φ_FS).
    let wetting = SurfaceTensions::isotropic(1.0, 2.0, 0.2);
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut island_start = Configuration::film_free(grid.clone(), substrate.clone());
    for c in 6..10 {
        for r in 8..10 {
            island_start.composite.set_cell(&grid, CellId::new(c, r), true);
        }
    }
    let start_oracle = oracle_surface_energy(&island_start, &wetting);
    let exposed_start = start_oracle.per_class[BoundaryClass::SubstrateFree.index()];
    let params = MinimizeParams {
        m: (1, 4),
        volumes: Some((island_start.substrate_area(), island_start.composite_area())),
        schedule: Schedule {
            t0: 0.15,
            cooling: 0.9985,
            steps: 6000,
        },
        seed: 7,
        ..Default::default()
    };
    let traj = minimize_constrained(&island_start, &wetting, &zero_mat, &params).unwrap();
    let end_oracle = oracle_surface_energy(&traj.best.configuration, &wetting);
    let exposed_end = end_oracle.per_class[BoundaryClass::SubstrateFree.index()];
    assert!(
        end_oracle.total < start_oracle.total - 1e-9,
        "wetting run must strictly improve: {} vs {}",
        end_oracle.total,
        start_oracle.total
    );
    assert!(
        exposed_end < exposed_start - 1e-9,
        "wetting run must shrink the exposed substrate: {exposed_end} vs {exposed_start}"
    );

    // Dewetting: exposing is cheap (φ_S well below φ_F + φ_FS); a uniform
    // thin layer should bead up into fewer-interface morphology.
    let dewetting = SurfaceTensions::isotropic(1.0, 0.5, 0.5);
    let mut layer_start = Configuration::film_free(grid.clone(), substrate);
    for c in 0..16 {
        layer_start.composite.set_cell(&grid, CellId::new(c, 8), true);
    }
    let start_oracle = oracle_surface_energy(&layer_start, &dewetting);
    let coherent_start = start_oracle.per_class[BoundaryClass::Coherent.index()];
    let params = MinimizeParams {
        m: (1, 4),
        volumes: Some((layer_start.substrate_area(), layer_start.composite_area())),
        schedule: Schedule {
            t0: 0.15,
            cooling: 0.9985,
            steps: 6000,
        },
        seed: 17,
        ..Default::default()
    };
    let traj = minimize_constrained(&layer_start, &dewetting, &zero_mat, &params).unwrap();
    let end_oracle = oracle_surface_energy(&traj.best.configuration, &dewetting);
    let coherent_end = end_oracle.per_class[BoundaryClass::Coherent.index()];
    assert!(
        end_oracle.total < start_oracle.total - 1e-9,
        "dewetting run must strictly improve: {} vs {}",
        end_oracle.total,
        start_oracle.total
    );
    assert!(
        coherent_end < coherent_start - 1e-9,
        "dewetting run must shorten the wetted interface: {coherent_end} vs {coherent_start}"
    );
    report(
        7,
        "regime-behavior",
        true,
        &format!(
            "wetting exposed {exposed_start:.3} -> {exposed_end:.3}; dewetting interface {coherent_start:.3} -> {coherent_end:.3}"
        ),
    );
}

/// Criterion 8: penalized volume error is non-increasing in λ over {1, 10, 100}
/// on a fixed seeded instance.
#[test]
fn criterion_08_penalty_monotonicity() {
    let grid = Grid::new(1.0, 1.0, 8, 8).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    for c in 3..5 {
        cfg.composite.set_cell(&grid, CellId::new(c, 4), true);
    }
    // Targets two cells away from the start in the composite volume.
    let cell = grid.cell_area();
    let targets = (cfg.substrate_area(), cfg.composite_area() + 2.0 * cell);
    let zero_mat = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));
    let t = worked_tensions();
    let mut errors = Vec::new();
    for lambda in [1.0, 10.0, 100.0] {
        let params = MinimizeParams {
            m: (1, 4),
            volumes: Some(targets),
            lambda: (lambda, lambda),
            schedule: Schedule {
                t0: 0.3,
                cooling: 0.998,
                steps: 4000,
            },
            seed: 808,
            ..Default::default()
        };
        let traj = minimize_penalized(&cfg, &t, &zero_mat, &params).unwrap();
        let best = &traj.best.configuration;
        let err = (best.substrate_area() - targets.0).abs()
            + (best.composite_area() - targets.1).abs();
        errors.push(err);
    }
    let monotone = errors.windows(2).all(|w| w[1] <= w[0] + 1e-12);
    report(
        8,
        "penalty-monotonicity",
        monotone,
        &format!("volume errors {errors:?} for lambda in {{1, 10, 100}}"),
    );
}

/// Criterion 9: 100 random (norm, p, q) triples pass the segment-minimality
/// oracle; crystalline axis norms achieve equality.
#[test]
fn criterion_09_segment_minimality() {
    let grid = Grid::square(8);
    let mut rng = ChaCha8Rng::seed_from_u64(909);
    for _ in 0..100 {
        let phi = sdri::sample::random_norm(&mut rng, 0.4, 2.0);
        let p = (rng.gen_range(-4..4), rng.gen_range(-4..4));
        let mut q = (rng.gen_range(-4..5), rng.gen_range(-4..5));
        if q == p {
            q.0 += 1;
        }
        let (path, chord, pass) = segment_minimality_check(&phi, p, q, &grid);
        assert!(pass, "path {path} dips under chord {chord}");
    }
    let axis = FinslerNorm::crystalline(vec![(1.0, 0.0), (0.0, 1.0)]);
    let (path, chord, pass) = segment_minimality_check(&axis, (0, 0), (3, 2), &grid);
    assert!(pass && (path - chord).abs() <= 1e-12, "axis norms reach equality");
    report(
        9,
        "segment-minimality",
        true,
        "100 random triples; crystalline axis equality exact",
    );
}

/// Criterion 10: identical seeds give byte-identical trajectories.
#[test]
fn criterion_10_determinism() {
    let grid = Grid::new(1.0, 1.0, 12, 8).unwrap();
    let substrate =
        substrate_from_height(&grid, HeightProfile::flat_zero(&grid), CrackSet::new()).unwrap();
    let mut cfg = Configuration::film_free(grid.clone(), substrate);
    for c in 4..8 {
        cfg.composite.set_cell(&grid, CellId::new(c, 4), true);
    }
    let t = worked_tensions();
    let zero_mat = Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0));
    let params = MinimizeParams {
        m: (1, 4),
        volumes: Some((cfg.substrate_area(), cfg.composite_area())),
        lambda: (3.0, 3.0),
        schedule: Schedule {
            t0: 0.4,
            cooling: 0.998,
            steps: 2500,
        },
        seed: 1010,
        ..Default::default()
    };
    let a = minimize_penalized(&cfg, &t, &zero_mat, &params).unwrap();
    let b = minimize_penalized(&cfg, &t, &zero_mat, &params).unwrap();
    let bytes_a = serde_json::to_vec(&a.records).unwrap();
    let bytes_b = serde_json::to_vec(&b.records).unwrap();
    let identical = bytes_a == bytes_b && a.best.configuration == b.best.configuration;
    report(
        10,
        "determinism",
        identical,
        &format!("{} record bytes compared", bytes_a.len()),
    );
}
