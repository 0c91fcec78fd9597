//! Volume-constrained and penalized minimization by annealed local moves.
//!
//! The energy is nonconvex over a discrete configuration space, so the
//! optimizer is Metropolis simulated annealing over the move catalog, with
//! the shrink/fill/open constructions as composite moves. Surface increments
//! are evaluated exactly on the affected edge stencil; the elastic term is
//! re-solved on a cadence and after every accepted topology move, and used
//! stale in between.

mod features;
mod moves;

pub use features::{enumerate_features, Feature, Features};
pub use moves::{affected_edges, apply_move, FeatureContext, Move, MoveRejection};

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::elasticity::Material;
use crate::energy::{edge_energy, surface_energy, volume_penalty};
use crate::error::ElasticityError;
use crate::geometry::{classify_edge, validate_configuration, Configuration, Violation};
use crate::grid::{CellId, EdgeId};
use crate::tension::SurfaceTensions;

/// Strictly cooling geometric annealing schedule.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct Schedule {
    pub t0: f64,
    /// Multiplier applied each step; must lie in (0, 1).
    pub cooling: f64,
    pub steps: usize,
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule {
            t0: 0.5,
            cooling: 0.999,
            steps: 4000,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MinimizeParams {
    /// Component budgets (m0 for ∂S, m1 for ∂A).
    pub m: (usize, usize),
    /// Target volumes (v0 for the substrate, v1 for the composite).
    pub volumes: Option<(f64, f64)>,
    /// Penalty weights (λ0, λ1) for the penalized problem.
    pub lambda: (f64, f64),
    pub schedule: Schedule,
    pub seed: u64,
    /// Elastic re-solve cadence in accepted moves; 1 re-solves always.
    pub elastic_cadence: usize,
    /// Re-validate and re-check the compactness bound on every accepted
    /// state, and cross-check the incremental surface against a full sum.
    pub debug_checks: bool,
}

impl Default for MinimizeParams {
    fn default() -> Self {
        MinimizeParams {
            m: (1, 4),
            volumes: None,
            lambda: (0.0, 0.0),
            schedule: Schedule::default(),
            seed: 1,
            elastic_cadence: 25,
            debug_checks: false,
        }
    }
}

impl MinimizeParams {
    fn validate(&self, cfg: &Configuration) -> Result<(), MinimizeError> {
        if !(self.schedule.cooling > 0.0 && self.schedule.cooling < 1.0) {
            return Err(MinimizeError::BadParams(format!(
                "cooling factor {} is not strictly cooling",
                self.schedule.cooling
            )));
        }
        if !(self.schedule.t0 > 0.0) {
            return Err(MinimizeError::BadParams("initial temperature must be positive".into()));
        }
        if let Some((v0, v1)) = self.volumes {
            if v0 > v1 {
                return Err(MinimizeError::BadParams(format!(
                    "volume targets need v0 <= v1, got ({v0}, {v1})"
                )));
            }
            let area = 4.0 * cfg.grid.l * cfg.grid.big_l;
            if v0 < area / 2.0 - 1e-9 || v1 >= area + 1e-9 {
                return Err(MinimizeError::BadParams(format!(
                    "volume targets must lie in [area/2, area) = [{}, {})",
                    area / 2.0,
                    area
                )));
            }
        }
        if self.lambda.0 < 0.0 || self.lambda.1 < 0.0 {
            return Err(MinimizeError::BadParams("penalty weights must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Debug)]
pub enum MinimizeError {
    InitialInadmissible(Vec<Violation>),
    VolumeMismatch { expected: (f64, f64), got: (f64, f64) },
    BadParams(String),
    Energy(crate::error::EnergyError),
    Elastic(ElasticityError),
}

impl fmt::Display for MinimizeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MinimizeError::InitialInadmissible(v) => {
                write!(f, "initial configuration inadmissible ({} violations)", v.len())
            }
            MinimizeError::VolumeMismatch { expected, got } => write!(
                f,
                "initial volumes {:?} do not match targets {:?} within one cell",
                got, expected
            ),
            MinimizeError::BadParams(msg) => write!(f, "bad parameters: {msg}"),
            MinimizeError::Energy(e) => write!(f, "{e}"),
            MinimizeError::Elastic(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for MinimizeError {}

impl From<crate::error::EnergyError> for MinimizeError {
    fn from(e: crate::error::EnergyError) -> Self {
        MinimizeError::Energy(e)
    }
}

impl From<ElasticityError> for MinimizeError {
    fn from(e: ElasticityError) -> Self {
        MinimizeError::Elastic(e)
    }
}

/// One per proposal step.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct IterationRecord {
    pub step: usize,
    pub accepted: bool,
    pub kind: String,
    pub f: f64,
    pub surface: f64,
    pub elastic: f64,
    pub penalty: f64,
    pub volume_substrate: f64,
    pub volume_composite: f64,
    pub components_substrate: usize,
    pub components_composite: usize,
}

#[derive(Clone, Debug)]
pub struct BestSnapshot {
    pub configuration: Configuration,
    pub f: f64,
    pub surface: f64,
    pub elastic: f64,
    pub penalty: f64,
    pub step: usize,
}

#[derive(Clone, Debug)]
pub struct Trajectory {
    pub records: Vec<IterationRecord>,
    pub best: BestSnapshot,
    pub seed: u64,
    pub accepted_count: usize,
}

/// Surface energy of the affected stencil only.
fn stencil_surface(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
    edges: &[EdgeId],
) -> Result<f64, crate::error::GeometryError> {
    let mut sum = 0.0;
    for &e in edges {
        if let Some(labeled) = classify_edge(cfg, e)? {
            sum += edge_energy(tensions, cfg.grid.edge_midpoint(e), &labeled);
        }
    }
    Ok(sum)
}

struct Annealer<'a> {
    tensions: &'a SurfaceTensions,
    material: &'a Material,
    params: &'a MinimizeParams,
    elastic_active: bool,
    constrained: bool,
}

/// Called after every accepted move with the accepted-move ordinal and state.
pub type AcceptObserver<'o> = dyn FnMut(usize, &Configuration) + 'o;

impl<'a> Annealer<'a> {
    fn solve_elastic(&self, cfg: &Configuration) -> Result<f64, MinimizeError> {
        if !self.elastic_active {
            return Ok(0.0);
        }
        Ok(crate::elasticity::relax(cfg, self.material)?.2)
    }

    fn penalty(&self, cfg: &Configuration) -> f64 {
        match (self.constrained, self.params.volumes) {
            (false, Some(v)) => {
                let (p0, p1) = volume_penalty(cfg, self.params.lambda, v);
                p0 + p1
            }
            _ => 0.0,
        }
    }

    fn propose(&self, cfg: &Configuration, rng: &mut ChaCha8Rng) -> Option<Move> {
        if self.constrained {
            self.propose_constrained(cfg, rng)
        } else {
            self.propose_penalized(cfg, rng)
        }
    }

    fn propose_penalized(&self, cfg: &Configuration, rng: &mut ChaCha8Rng) -> Option<Move> {
        let grid = &cfg.grid;
        let roll = rng.gen_range(0u32..100);
        match roll {
            0..=21 => pick(rng, addable_cells(cfg)).map(Move::AddFilmCell),
            22..=43 => pick(rng, film_cells(cfg)).map(Move::RemoveFilmCell),
            44..=65 => {
                let column = rng.gen_range(0..grid.nx);
                let delta = if rng.gen_bool(0.5) { 1 } else { -1 };
                Some(Move::HeightStep { column, delta })
            }
            66..=81 => pick(rng, delaminatable_edges(cfg)).map(Move::ToggleDelamination),
            82..=84 => pick(rng, crackable_edges(cfg)).map(Move::AddCrack),
            85..=87 => pick(rng, cfg.substrate.cracks.iter().collect()).map(Move::RemoveCrack),
            88..=89 => pick(rng, filamentable_edges(cfg)).map(Move::AddFilament),
            90..=91 => {
                pick(rng, cfg.composite.filaments.iter().copied().collect()).map(Move::RemoveFilament)
            }
            _ => {
                let feats = enumerate_features(cfg).ok()?;
                let mut catalog: Vec<Move> = Vec::new();
                catalog.extend((0..feats.islands.len()).map(Move::ShrinkIsland));
                catalog.extend((0..feats.voids.len()).map(Move::FillVoid));
                catalog.extend(
                    (0..feats.grains.len())
                        .filter(|&g| !feats.grains[g].is_full || feats.grains[g].contact_components == 1)
                        .map(Move::OpenGrain),
                );
                pick(rng, catalog)
            }
        }
    }

    fn propose_constrained(&self, cfg: &Configuration, rng: &mut ChaCha8Rng) -> Option<Move> {
        let grid = &cfg.grid;
        let roll = rng.gen_range(0u32..100);
        match roll {
            0..=54 => {
                let remove = pick(rng, film_cells(cfg))?;
                let add = pick(rng, addable_cells(cfg))?;
                (remove != add).then_some(Move::TransportFilmCell { remove, add })
            }
            55..=79 => {
                let rows = cfg.substrate.profile.rows();
                let ups: Vec<usize> = (0..grid.nx)
                    .filter(|&c| {
                        rows[c] < grid.ny
                            && cfg.composite.contains_cell(grid, CellId::new(c, rows[c]))
                    })
                    .collect();
                let downs: Vec<usize> = (0..grid.nx).filter(|&c| rows[c] > grid.zero_row()).collect();
                let up = pick(rng, ups)?;
                let down = pick(rng, downs)?;
                (up != down).then_some(Move::PairedHeightStep { up, down })
            }
            _ => pick(rng, delaminatable_edges(cfg)).map(Move::ToggleDelamination),
        }
    }

    fn run(
        &self,
        cfg0: &Configuration,
        observer: &mut AcceptObserver<'_>,
    ) -> Result<Trajectory, MinimizeError> {
        self.params.validate(cfg0)?;
        let report = validate_configuration(cfg0, self.params.m);
        if !report.admissible {
            return Err(MinimizeError::InitialInadmissible(report.violations));
        }
        if self.constrained {
            let targets = self.params.volumes.ok_or_else(|| {
                MinimizeError::BadParams("constrained mode needs volume targets".into())
            })?;
            let got = (cfg0.substrate_area(), cfg0.composite_area());
            let cell = cfg0.grid.cell_area();
            if (got.0 - targets.0).abs() > cell + 1e-12 || (got.1 - targets.1).abs() > cell + 1e-12 {
                return Err(MinimizeError::VolumeMismatch {
                    expected: targets,
                    got,
                });
            }
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        let mut cfg = cfg0.clone();
        let mut surface = surface_energy(&cfg, self.tensions)?.surface;
        let mut elastic = self.solve_elastic(&cfg)?;
        let mut penalty = self.penalty(&cfg);
        let mut comp = (report.substrate_components, report.composite_components);
        let mut temperature = self.params.schedule.t0;
        let mut accepted_count = 0usize;

        let mut best = BestSnapshot {
            configuration: cfg.clone(),
            f: surface + elastic + penalty,
            surface,
            elastic,
            penalty,
            step: 0,
        };
        let mut records = Vec::with_capacity(self.params.schedule.steps);

        for step in 0..self.params.schedule.steps {
            let proposal = self.propose(&cfg, &mut rng);
            let mut accepted = false;
            let mut kind = "none";
            if let Some(mv) = proposal {
                kind = mv.kind();
                let feats_ctx;
                let feats_store;
                if matches!(mv, Move::ShrinkIsland(_) | Move::FillVoid(_) | Move::OpenGrain(_)) {
                    feats_store = enumerate_features(&cfg).map_err(crate::error::EnergyError::from)?;
                    feats_ctx = Some(FeatureContext {
                        islands: &feats_store.islands,
                        voids: &feats_store.voids,
                        grains: &feats_store.grains,
                    });
                } else {
                    feats_ctx = None;
                }
                if let Ok(candidate) = apply_move(&cfg, &mv, self.params.m, feats_ctx.as_ref()) {
                    let stencil = affected_edges(&cfg, &candidate);
                    let old_part =
                        stencil_surface(&cfg, self.tensions, &stencil).map_err(crate::error::EnergyError::from)?;
                    let new_part = stencil_surface(&candidate, self.tensions, &stencil)
                        .map_err(crate::error::EnergyError::from)?;
                    let cand_surface = surface + new_part - old_part;
                    let cand_penalty = self.penalty(&candidate);
                    let delta = (cand_surface + elastic + cand_penalty)
                        - (surface + elastic + penalty);
                    let accept = delta <= 0.0
                        || rng.gen_range(0.0..1.0) < (-delta / temperature.max(1e-300)).exp();
                    if accept {
                        accepted = true;
                        accepted_count += 1;
                        let topology = mv.is_topology_move();
                        cfg = candidate;
                        observer(accepted_count, &cfg);
                        surface = cand_surface;
                        penalty = cand_penalty;
                        let rep = validate_configuration(&cfg, self.params.m);
                        comp = (rep.substrate_components, rep.composite_components);
                        if self.elastic_active
                            && (topology || accepted_count.is_multiple_of(self.params.elastic_cadence))
                        {
                            elastic = self.solve_elastic(&cfg)?;
                        }
                        if self.params.debug_checks {
                            assert!(rep.admissible, "accepted state must stay admissible");
                            let full = surface_energy(&cfg, self.tensions)?.surface;
                            assert!(
                                (full - surface).abs() <= 1e-9 * full.abs().max(1.0),
                                "incremental surface {surface} drifted from {full}"
                            );
                            surface = full;
                            let (lhs, rhs, ok) =
                                crate::energy::compactness_bound(&cfg, self.tensions)?;
                            assert!(ok, "compactness bound violated: {lhs} > {rhs}");
                        }
                        let f_now = surface + elastic + penalty;
                        if f_now < best.f {
                            // Candidate best: settle the elastic term exactly
                            // before enshrining it.
                            if self.elastic_active {
                                elastic = self.solve_elastic(&cfg)?;
                            }
                            let f_exact = surface + elastic + penalty;
                            if f_exact < best.f {
                                best = BestSnapshot {
                                    configuration: cfg.clone(),
                                    f: f_exact,
                                    surface,
                                    elastic,
                                    penalty,
                                    step: step + 1,
                                };
                            }
                        }
                    }
                }
            }
            records.push(IterationRecord {
                step,
                accepted,
                kind: kind.to_string(),
                f: surface + elastic + penalty,
                surface,
                elastic,
                penalty,
                volume_substrate: cfg.substrate_area(),
                volume_composite: cfg.composite_area(),
                components_substrate: comp.0,
                components_composite: comp.1,
            });
            temperature *= self.params.schedule.cooling;
        }

        Ok(Trajectory {
            records,
            best,
            seed: self.params.seed,
            accepted_count,
        })
    }
}

fn pick<T>(rng: &mut ChaCha8Rng, mut candidates: Vec<T>) -> Option<T> {
    if candidates.is_empty() {
        None
    } else {
        let idx = rng.gen_range(0..candidates.len());
        Some(candidates.swap_remove(idx))
    }
}

fn film_cells(cfg: &Configuration) -> Vec<CellId> {
    let grid = &cfg.grid;
    grid.cells()
        .filter(|&c| cfg.composite.contains_cell(grid, c) && !cfg.substrate.contains_cell(grid, c))
        .collect()
}

fn addable_cells(cfg: &Configuration) -> Vec<CellId> {
    let grid = &cfg.grid;
    grid.cells()
        .filter(|&c| {
            if cfg.composite.contains_cell(grid, c) {
                return false;
            }
            grid.cell_edges(c).iter().any(|&e| {
                grid.edge_cells(e)
                    .iter()
                    .flatten()
                    .any(|&n| n != c && cfg.composite.contains_cell(grid, n))
            })
        })
        .collect()
}

fn delaminatable_edges(cfg: &Configuration) -> Vec<EdgeId> {
    let grid = &cfg.grid;
    grid.edges()
        .into_iter()
        .filter(|&e| {
            if grid.edge_on_wall(e) {
                return false;
            }
            let a = cfg.composite.edge_density(grid, e);
            let s = cfg.substrate.edge_density(grid, e);
            (a == 2 && s == 1) || (a == 2 && s == 2 && cfg.substrate.cracks.contains(e))
        })
        .collect()
}

fn crackable_edges(cfg: &Configuration) -> Vec<EdgeId> {
    let grid = &cfg.grid;
    grid.edges()
        .into_iter()
        .filter(|&e| {
            !grid.edge_on_wall(e)
                && !cfg.substrate.cracks.contains(e)
                && cfg.substrate.edge_density(grid, e) >= 1
        })
        .collect()
}

fn filamentable_edges(cfg: &Configuration) -> Vec<EdgeId> {
    let grid = &cfg.grid;
    let boundary: std::collections::BTreeSet<crate::grid::VertexId> = cfg
        .composite
        .interior_boundary_edges(grid)
        .into_iter()
        .chain(cfg.composite.filaments.iter().copied())
        .flat_map(|e| {
            let (p, q) = grid.edge_endpoints(e);
            [p, q]
        })
        .collect();
    grid.edges()
        .into_iter()
        .filter(|&e| {
            if grid.edge_on_wall(e) || cfg.composite.filaments.contains(&e) {
                return false;
            }
            if cfg.composite.edge_density(grid, e) != 0 {
                return false;
            }
            let (p, q) = grid.edge_endpoints(e);
            boundary.contains(&p) || boundary.contains(&q)
        })
        .collect()
}

/// Penalized minimization of `F^λ = S + W + λ·|volume error|`.
pub fn minimize_penalized(
    cfg0: &Configuration,
    tensions: &SurfaceTensions,
    material: &Material,
    params: &MinimizeParams,
) -> Result<Trajectory, MinimizeError> {
    minimize_penalized_observed(cfg0, tensions, material, params, &mut |_, _| {})
}

pub fn minimize_penalized_observed(
    cfg0: &Configuration,
    tensions: &SurfaceTensions,
    material: &Material,
    params: &MinimizeParams,
    observer: &mut AcceptObserver<'_>,
) -> Result<Trajectory, MinimizeError> {
    let elastic_active =
        material.mismatch != [[0.0; 2]; 2] || material.per_cell_e0.is_some();
    Annealer {
        tensions,
        material,
        params,
        elastic_active,
        constrained: false,
    }
    .run(cfg0, observer)
}

/// Volume-constrained minimization: only volume-preserving proposals, so the
/// trajectory keeps the initial volumes exactly.
pub fn minimize_constrained(
    cfg0: &Configuration,
    tensions: &SurfaceTensions,
    material: &Material,
    params: &MinimizeParams,
) -> Result<Trajectory, MinimizeError> {
    minimize_constrained_observed(cfg0, tensions, material, params, &mut |_, _| {})
}

pub fn minimize_constrained_observed(
    cfg0: &Configuration,
    tensions: &SurfaceTensions,
    material: &Material,
    params: &MinimizeParams,
    observer: &mut AcceptObserver<'_>,
) -> Result<Trajectory, MinimizeError> {
    let elastic_active =
        material.mismatch != [[0.0; 2]; 2] || material.per_cell_e0.is_some();
    Annealer {
        tensions,
        material,
        params,
        elastic_active,
        constrained: true,
    }
    .run(cfg0, observer)
}
