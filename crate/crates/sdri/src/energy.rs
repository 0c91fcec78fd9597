//! Exact evaluation of the composite surface energy, its localization, the
//! reduced fixed-substrate energy, and the total (penalized) energy.

use serde::{Deserialize, Serialize};

use crate::elasticity::Material;
use crate::error::EnergyError;
use crate::geometry::{
    classify_boundary, validate_configuration, BoundaryClass, Configuration, LabeledBoundary,
    LabeledEdge,
};
use crate::tension::{SpikeOnFilmFreeRule, SurfaceTensions};

/// Per-class surface sums, elastic energy, penalties, and the grand total.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    /// Keyed by [`BoundaryClass::ALL`] order.
    pub per_class: [f64; 11],
    pub surface: f64,
    pub elastic: f64,
    pub penalty_substrate: f64,
    pub penalty_composite: f64,
    pub total: f64,
    /// H¹ lengths of Ω ∩ ∂A and Ω ∩ (∂S \ ∂A), for the compactness bound.
    pub composite_boundary_length: f64,
    pub substrate_only_boundary_length: f64,
}

impl EnergyBreakdown {
    pub fn class(&self, c: BoundaryClass) -> f64 {
        self.per_class[c.index()]
    }
}

/// Energy weight of one labeled edge: the tension of its class evaluated at
/// the edge midpoint in the edge normal, times the edge length.
pub fn edge_energy(tensions: &SurfaceTensions, x: (f64, f64), e: &LabeledEdge) -> f64 {
    let nu = e.normal;
    let w = match e.class {
        BoundaryClass::FilmFree => tensions.film_at(x, nu),
        BoundaryClass::SubstrateFree => tensions.regime_at(x, nu),
        BoundaryClass::FilmCrack => 2.0 * tensions.film_at(x, nu),
        BoundaryClass::FilmFilament => 2.0 * tensions.filament_regime_at(x, nu),
        BoundaryClass::Coherent => tensions.interface_at(x, nu),
        BoundaryClass::Incoherent => tensions.film_at(x, nu) + tensions.regime_at(x, nu),
        BoundaryClass::SubstrateCrackDelaminated => 2.0 * tensions.regime_at(x, nu),
        BoundaryClass::SubstrateFilamentExposed => 2.0 * tensions.filament_regime_at(x, nu),
        BoundaryClass::SubstrateFilamentOnFilmFree => match tensions.spike_on_film_free {
            SpikeOnFilmFreeRule::FilmTension => tensions.film_at(x, nu),
            SpikeOnFilmFreeRule::RegimeTension => tensions.regime_at(x, nu),
        },
        BoundaryClass::SubstrateFlawCoherent => 2.0 * tensions.interface_at(x, nu),
        BoundaryClass::SubstrateFilamentFilmCrack => 2.0 * tensions.film_at(x, nu),
    };
    w * e.length
}

fn breakdown_from_labels(
    cfg: &Configuration,
    labels: &LabeledBoundary,
    tensions: &SurfaceTensions,
) -> EnergyBreakdown {
    let mut out = EnergyBreakdown::default();
    for e in &labels.entries {
        let x = cfg.grid.edge_midpoint(e.edge);
        let v = edge_energy(tensions, x, e);
        out.per_class[e.class.index()] += v;
        out.surface += v;
        if e.class.in_composite_boundary() {
            out.composite_boundary_length += e.length;
        } else {
            out.substrate_only_boundary_length += e.length;
        }
    }
    out.total = out.surface;
    out
}

/// Surface energy of an admissible configuration.
///
/// Sums, in fixed edge order, weight(class)(midpoint, ν) · length over the
/// labeled Ω-interior boundary. Inadmissible configurations are refused with
/// the full report attached.
pub fn surface_energy(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
) -> Result<EnergyBreakdown, EnergyError> {
    let violations = cfg.structural_violations();
    if !violations.is_empty() {
        let report = validate_configuration(cfg, (usize::MAX, usize::MAX));
        return Err(EnergyError::Inadmissible(report));
    }
    let labels = classify_boundary(cfg)?;
    Ok(breakdown_from_labels(cfg, &labels, tensions))
}

/// Surface energy restricted to a grid-aligned window `[x0, x1] x [y0, y1]`.
///
/// An edge belongs to the window when its midpoint lies in the half-open
/// rectangle `[x0, x1) x [y0, y1)` (extended to the closed side on the
/// container wall), which makes the restriction additive over partitions.
pub fn localized_surface_energy(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
    window: (f64, f64, f64, f64),
) -> Result<f64, EnergyError> {
    let grid = &cfg.grid;
    let (x0, y0, x1, y1) = window;
    let aligned = |v: f64, step: f64, origin: f64| -> bool {
        let k = (v - origin) / step;
        (k - k.round()).abs() < 1e-9
    };
    if !aligned(x0, grid.hx(), -grid.l)
        || !aligned(x1, grid.hx(), -grid.l)
        || !aligned(y0, grid.hy(), -grid.big_l)
        || !aligned(y1, grid.hy(), -grid.big_l)
    {
        return Err(EnergyError::WindowNotAligned(format!(
            "window ({x0}, {y0}) - ({x1}, {y1}) does not sit on grid lines"
        )));
    }
    let violations = cfg.structural_violations();
    if !violations.is_empty() {
        let report = validate_configuration(cfg, (usize::MAX, usize::MAX));
        return Err(EnergyError::Inadmissible(report));
    }
    let labels = classify_boundary(cfg)?;
    let eps = 1e-12 * grid.hx().min(grid.hy());
    let mut sum = 0.0;
    for e in &labels.entries {
        let (mx, my) = grid.edge_midpoint(e.edge);
        let in_x = mx >= x0 - eps && (mx < x1 - eps || (x1 >= grid.l - eps && mx <= x1 + eps));
        let in_y = my >= y0 - eps && (my < y1 - eps || (y1 >= grid.big_l - eps && my <= y1 + eps));
        if in_x && in_y {
            sum += edge_energy(tensions, (mx, my), e);
        }
    }
    Ok(sum)
}

/// Reduced energy for a fixed regular substrate: subtracts the coherent
/// interface term over `Ω ∩ ∂*S` and the exposed-filament term over
/// `Ω ∩ (∂A \ ∂S) ∩ A⁽⁰⁾` from `F = S + W`.
///
/// Defined only when the substrate boundary is a Lipschitz graph, i.e. has
/// neither cracks nor spikes.
pub fn reduced_energy_fprime(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
    elastic: f64,
) -> Result<f64, EnergyError> {
    if !cfg.substrate.cracks.is_empty() {
        return Err(EnergyError::SubstrateNotRegular("substrate has cracks"));
    }
    if !cfg.substrate.profile.spikes().is_empty() {
        return Err(EnergyError::SubstrateNotRegular("substrate has spikes"));
    }
    let breakdown = surface_energy(cfg, tensions)?;
    let labels = classify_boundary(cfg)?;
    let mut coherent_term = 0.0;
    let mut filament_term = 0.0;
    for e in &labels.entries {
        let x = cfg.grid.edge_midpoint(e.edge);
        match e.class {
            // Ω ∩ ∂*S: exposed substrate, coherent and incoherent interfaces
            // all carry a reduced-boundary substrate edge.
            BoundaryClass::SubstrateFree | BoundaryClass::Coherent | BoundaryClass::Incoherent => {
                coherent_term += tensions.interface_at(x, e.normal) * e.length;
            }
            BoundaryClass::FilmFilament => {
                filament_term += 2.0 * tensions.filament_regime_at(x, e.normal) * e.length;
            }
            _ => {}
        }
    }
    Ok(breakdown.surface + elastic - coherent_term - filament_term)
}

/// Volume penalties `λ1 |area(A) - v1| + λ0 |area(S) - v0|`.
pub fn volume_penalty(
    cfg: &Configuration,
    lambda: (f64, f64),
    volumes: (f64, f64),
) -> (f64, f64) {
    let s_err = (cfg.substrate_area() - volumes.0).abs();
    let a_err = (cfg.composite_area() - volumes.1).abs();
    (lambda.0 * s_err, lambda.1 * a_err)
}

/// Total energy `F = S + W`, optionally in penalized form.
pub fn total_energy(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
    material: &Material,
    lambda: Option<(f64, f64)>,
    volumes: Option<(f64, f64)>,
) -> Result<EnergyBreakdown, EnergyError> {
    let mut breakdown = surface_energy(cfg, tensions)?;
    let w = if material.mismatch == [[0.0; 2]; 2] && material.per_cell_e0.is_none() {
        0.0
    } else {
        crate::elasticity::relax(cfg, material)
            .map_err(|e| EnergyError::Elastic(e.to_string()))?
            .2
    };
    breakdown.elastic = w;
    if let (Some(lambda), Some(volumes)) = (lambda, volumes) {
        let (p0, p1) = volume_penalty(cfg, lambda, volumes);
        breakdown.penalty_substrate = p0;
        breakdown.penalty_composite = p1;
    }
    breakdown.total = breakdown.surface
        + breakdown.elastic
        + breakdown.penalty_substrate
        + breakdown.penalty_composite;
    Ok(breakdown)
}

/// The compactness inequality `c1 (H¹(Ω∩∂A) + H¹(Ω∩∂S\∂A)) <= 2 S`.
pub fn compactness_bound(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
) -> Result<(f64, f64, bool), EnergyError> {
    let b = surface_energy(cfg, tensions)?;
    let (c1, _) = tensions.tension_bounds(&cfg.grid);
    let lhs = c1 * (b.composite_boundary_length + b.substrate_only_boundary_length);
    let rhs = 2.0 * b.surface;
    Ok((lhs, rhs, lhs <= rhs + 1e-12))
}
