mod common;

use common::{flat_substrate, full_box, island_example};
use sdri::elasticity::{
    build_mesh, elastic_energy_on_mesh, energy_gradient, relax, solve_equilibrium,
    DisplacementField, IsotropicPhase, Material, MismatchScope, PhaseLaw,
};
use sdri::geometry::Configuration;
use sdri::grid::{CellId, EdgeId, Grid};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn unit_material() -> Material {
    Material::isotropic(IsotropicPhase::new(1.0, 1.0), IsotropicPhase::new(1.0, 1.0))
}

/// Voigt matrix whose quadratic form is exactly the Frobenius norm |M|².
fn frobenius_material() -> Material {
    let d = PhaseLaw::Voigt {
        voigt: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 0.5]],
    };
    Material {
        film: d.clone(),
        substrate: d,
        mismatch: [[0.0; 2]; 2],
        scope: MismatchScope::FilmOnly,
        per_cell_e0: None,
    }
}

#[test]
fn zero_mismatch_relaxes_to_zero() {
    let cfg = full_box(4);
    let (_, u, w) = relax(&cfg, &unit_material()).unwrap();
    assert!(w.abs() < 1e-20);
    assert!(u.values.iter().all(|&(x, y)| x == 0.0 && y == 0.0));
}

#[test]
fn compatible_mismatch_everywhere_is_stress_free() {
    // Same Lamé pair in both phases, mismatch applied everywhere: the affine
    // field u = M0 x is compatible, so the equilibrium energy vanishes.
    let grid = Grid::square(6);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    for c in 0..6 {
        for r in 3..5 {
            cfg.composite.set_cell(&grid, CellId::new(c, r), true);
        }
    }
    let material = unit_material()
        .with_mismatch([[0.01, 0.003], [-0.002, -0.004]])
        .with_scope(MismatchScope::Everywhere);
    let (_, _, w) = relax(&cfg, &material).unwrap();
    assert!(w <= 1e-10, "compatible strain must relax completely, got {w}");
}

#[test]
fn detached_island_relaxes_its_own_mismatch() {
    // A floating film island is its own mesh component; with E0 = sym(M0) on
    // the film only, u = M0 x on the island and 0 on the substrate is exact.
    let grid = Grid::square(6);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    cfg.composite.set_cell(&grid, CellId::new(2, 4), true);
    cfg.composite.set_cell(&grid, CellId::new(3, 4), true);
    let material = unit_material().with_dilational_mismatch(0.01);
    let (mesh, _, w) = relax(&cfg, &material).unwrap();
    assert_eq!(mesh.component_count, 2, "island floats apart from the substrate");
    assert!(w <= 1e-10, "detached mismatch is compatible, got {w}");
}

#[test]
fn attached_film_is_stressed_and_delamination_relaxes() {
    // Coherent one-row film layer under dilational mismatch against a rigid
    // thick substrate: positive energy that full delamination releases.
    let grid = Grid::square(8);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    for c in 0..8 {
        cfg.composite.set_cell(&grid, CellId::new(c, 4), true);
    }
    let material = unit_material().with_dilational_mismatch(0.02);
    let (_, _, w_coherent) = relax(&cfg, &material).unwrap();
    assert!(w_coherent > 1e-8, "coherent mismatched layer carries stress");

    let mut debonded = cfg.clone();
    for c in 0..8 {
        debonded.composite.slits.insert(EdgeId::horizontal(c, 4));
    }
    let (mesh, _, w_free) = relax(&debonded, &material).unwrap();
    assert_eq!(mesh.component_count, 2);
    assert!(w_free <= 1e-10, "fully debonded layer is stress free");
    assert!(w_free <= w_coherent + 1e-12);
}

#[test]
fn each_extra_cut_never_increases_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let grid = Grid::square(8);
    let material = unit_material().with_dilational_mismatch(0.015);
    for _ in 0..6 {
        let cfg0 = sdri::sample::random_admissible(&mut rng, &grid);
        let (_, _, w0) = relax(&cfg0, &material).unwrap();
        // Cut one more coherent interface edge if available.
        let candidate = grid.edges().into_iter().find(|&e| {
            !grid.edge_on_wall(e)
                && cfg0.composite.edge_density(&grid, e) == 2
                && cfg0.substrate.edge_density(&grid, e) == 1
                && !cfg0.composite.slits.contains(&e)
        });
        let Some(e) = candidate else { continue };
        let mut cut = cfg0.clone();
        cut.composite.slits.insert(e);
        let (_, _, w1) = relax(&cut, &material).unwrap();
        assert!(
            w1 <= w0 + 1e-12,
            "extra cut increased energy: {w1} > {w0}"
        );
    }
}

#[test]
fn rigid_motions_leave_energy_unchanged() {
    let grid = Grid::square(6);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    for c in 1..5 {
        cfg.composite.set_cell(&grid, CellId::new(c, 3), true);
    }
    let material = unit_material().with_dilational_mismatch(0.01);
    let mesh = build_mesh(&cfg);
    let u = solve_equilibrium(&cfg, &mesh, &material).unwrap();
    let w = elastic_energy_on_mesh(&cfg, &mesh, &u, &material).unwrap();
    // Per-component rigid displacement: translation plus rotation.
    let mut shifted = u.clone();
    for (n, v) in shifted.values.iter_mut().enumerate() {
        let comp = mesh.node_component[n];
        let (tx, ty, omega) = match comp {
            0 => (0.3, -0.2, 0.05),
            _ => (-0.1, 0.4, -0.03),
        };
        let (x, y) = mesh.nodes[n].pos;
        v.0 += tx - omega * y;
        v.1 += ty + omega * x;
    }
    let w_shifted = elastic_energy_on_mesh(&cfg, &mesh, &shifted, &material).unwrap();
    assert!(
        (w - w_shifted).abs() <= 1e-12 * w.max(1.0),
        "rigid motion changed the energy: {w} vs {w_shifted}"
    );
}

#[test]
fn gradient_matches_central_differences() {
    let grid = Grid::square(6);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    for c in 0..6 {
        cfg.composite.set_cell(&grid, CellId::new(c, 3), true);
    }
    let material = unit_material().with_dilational_mismatch(0.02);
    let mesh = build_mesh(&cfg);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let n = mesh.node_count();
    let random_field = |rng: &mut ChaCha8Rng| DisplacementField {
        values: (0..n)
            .map(|_| (rng.gen_range(-0.05..0.05), rng.gen_range(-0.05..0.05)))
            .collect(),
    };
    let base = random_field(&mut rng);
    for _ in 0..5 {
        let dir = random_field(&mut rng);
        let analytic = energy_gradient(&cfg, &mesh, &material, &base, &dir);
        let eps = 1e-6;
        let mut plus = base.clone();
        let mut minus = base.clone();
        for i in 0..n {
            plus.values[i].0 += eps * dir.values[i].0;
            plus.values[i].1 += eps * dir.values[i].1;
            minus.values[i].0 -= eps * dir.values[i].0;
            minus.values[i].1 -= eps * dir.values[i].1;
        }
        let wp = elastic_energy_on_mesh(&cfg, &mesh, &plus, &material).unwrap();
        let wm = elastic_energy_on_mesh(&cfg, &mesh, &minus, &material).unwrap();
        let fd = (wp - wm) / (2.0 * eps);
        assert!(
            (analytic - fd).abs() <= 1e-5 * fd.abs().max(1e-6),
            "gradient mismatch: analytic {analytic}, finite differences {fd}"
        );
    }
}

#[test]
fn coercivity_bound_holds_at_equilibrium() {
    let grid = Grid::square(6);
    let mut cfg = Configuration::film_free(grid.clone(), flat_substrate(&grid));
    for c in 0..6 {
        cfg.composite.set_cell(&grid, CellId::new(c, 3), true);
    }
    let material = Material::isotropic(IsotropicPhase::new(0.8, 1.2), IsotropicPhase::new(1.5, 0.9))
        .with_dilational_mismatch(0.02);
    let c3 = material
        .film
        .coercivity()
        .unwrap()
        .min(material.substrate.coercivity().unwrap());
    let mesh = build_mesh(&cfg);
    let u = solve_equilibrium(&cfg, &mesh, &material).unwrap();
    let w = elastic_energy_on_mesh(&cfg, &mesh, &u, &material).unwrap();
    // |E(u) - E0|² through the Frobenius Voigt matrix, same mismatch.
    let mut frob = frobenius_material();
    frob.mismatch = material.mismatch;
    let norm2 = elastic_energy_on_mesh(&cfg, &mesh, &u, &frob).unwrap();
    assert!(
        w + 1e-12 >= 2.0 * c3 * norm2,
        "coercivity violated: {w} < 2·{c3}·{norm2}"
    );
}

#[test]
fn mismatched_displacement_length_is_an_error() {
    let cfg = island_example();
    let mesh = build_mesh(&cfg);
    let bad = DisplacementField::zeros(mesh.node_count() + 1);
    assert!(elastic_energy_on_mesh(&cfg, &mesh, &bad, &unit_material()).is_err());
}

#[test]
fn zero_energy_means_matching_strain_at_quadrature_points() {
    // W = 0 exactly when E(u) = E0 at every Gauss point: measure the strain
    // deviation through the Frobenius-form material.
    let cfg = full_box(6);
    let material = unit_material()
        .with_mismatch([[0.02, 0.01], [0.0, -0.01]])
        .with_scope(MismatchScope::Everywhere);
    let mesh = build_mesh(&cfg);
    let u = solve_equilibrium(&cfg, &mesh, &material).unwrap();
    let w = elastic_energy_on_mesh(&cfg, &mesh, &u, &material).unwrap();
    assert!(w <= 1e-10);
    let mut frob = frobenius_material();
    frob.mismatch = material.mismatch;
    frob.scope = MismatchScope::Everywhere;
    let deviation = elastic_energy_on_mesh(&cfg, &mesh, &u, &frob).unwrap();
    assert!(deviation <= 1e-10, "strain must match the mismatch pointwise, got {deviation}");
}

#[test]
fn per_cell_strain_table_is_honoured() {
    let grid = Grid::square(4);
    let cfg = full_box(4);
    let mut material = unit_material();
    // A strain table that is itself compatible (constant): relaxes to zero.
    material.per_cell_e0 = Some(vec![[0.01, 0.01, 0.0]; grid.cell_count()]);
    let (_, _, w) = relax(&cfg, &material).unwrap();
    assert!(w <= 1e-10);
}
