//! Desk-scale verification harness: converging configuration sequences,
//! lower-semicontinuity checks, the compactness bound, and the
//! segment-minimality oracle.

use std::collections::BinaryHeap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::energy::{edge_energy, surface_energy};
use crate::error::{EnergyError, GeometryError};
use crate::geometry::{
    classify_boundary, sdist_field, substrate_from_height, validate_configuration, BoundaryClass,
    Configuration, CrackSet, HeightProfile,
};
use crate::grid::{CellId, EdgeId, Grid};
use crate::tension::{FinslerNorm, SurfaceTensions};

/// Families of τ-converging sequences; each maps an index `k` to a
/// configuration on a fixed grid.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SequenceKind {
    Neckpinch,
    VanishingFilament,
    IslandShrink,
    WettingCollapse,
    DelaminationClosing,
    SubstrateCrackClosing,
}

impl SequenceKind {
    pub const ALL: [SequenceKind; 6] = [
        SequenceKind::Neckpinch,
        SequenceKind::VanishingFilament,
        SequenceKind::IslandShrink,
        SequenceKind::WettingCollapse,
        SequenceKind::DelaminationClosing,
        SequenceKind::SubstrateCrackClosing,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SequenceKind::Neckpinch => "neckpinch",
            SequenceKind::VanishingFilament => "vanishing-filament",
            SequenceKind::IslandShrink => "island-shrink",
            SequenceKind::WettingCollapse => "wetting-collapse",
            SequenceKind::DelaminationClosing => "delamination-closing",
            SequenceKind::SubstrateCrackClosing => "substrate-crack-closing",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        SequenceKind::ALL.iter().copied().find(|k| k.name() == s)
    }

    /// Component budget the members and limit are declared admissible for.
    pub fn budget(self) -> (usize, usize) {
        match self {
            // The limit splits into two floating islands over the substrate.
            SequenceKind::Neckpinch => (1, 3),
            _ => (1, 2),
        }
    }
}

#[derive(Debug)]
pub enum AnalysisError {
    GridTooCoarse {
        kind: SequenceKind,
        needed: (usize, usize),
        smallest_k: usize,
    },
    NotAdmissible {
        kind: SequenceKind,
        index: usize,
    },
    NotConvergent {
        kind: SequenceKind,
        index: usize,
        gap: f64,
        allowed: f64,
    },
    Geometry(GeometryError),
    Energy(EnergyError),
}

impl fmt::Display for AnalysisError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AnalysisError::GridTooCoarse { kind, needed, smallest_k } => write!(
                f,
                "grid too coarse for {}: need at least {}x{} (smallest representable index k = {})",
                kind.name(),
                needed.0,
                needed.1,
                smallest_k
            ),
            AnalysisError::NotAdmissible { kind, index } => {
                write!(f, "{} member {index} is not admissible", kind.name())
            }
            AnalysisError::NotConvergent { kind, index, gap, allowed } => write!(
                f,
                "{} member {index} misses its convergence schedule: gap {gap:.6} > {allowed:.6}",
                kind.name()
            ),
            AnalysisError::Geometry(e) => write!(f, "{e}"),
            AnalysisError::Energy(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for AnalysisError {}

impl From<GeometryError> for AnalysisError {
    fn from(e: GeometryError) -> Self {
        AnalysisError::Geometry(e)
    }
}

impl From<EnergyError> for AnalysisError {
    fn from(e: EnergyError) -> Self {
        AnalysisError::Energy(e)
    }
}

/// A certified τ-converging sequence with its declared limit.
#[derive(Clone, Debug)]
pub struct SequenceBundle {
    pub kind: SequenceKind,
    pub members: Vec<Configuration>,
    pub limit: Configuration,
    pub report: ConvergenceReport,
}

/// Sup-norm signed-distance gaps and boundary lengths per index.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub gaps_composite: Vec<f64>,
    pub gaps_substrate: Vec<f64>,
    pub lengths_composite: Vec<f64>,
    pub lengths_substrate: Vec<f64>,
    pub sup_length_composite: f64,
    pub sup_length_substrate: f64,
}

fn flat_film_free(grid: &Grid) -> Result<Configuration, GeometryError> {
    let substrate = substrate_from_height(grid, HeightProfile::flat_zero(grid), CrackSet::new())?;
    Ok(Configuration::film_free(grid.clone(), substrate))
}

fn add_film_block(
    cfg: &mut Configuration,
    cols: std::ops::Range<usize>,
    rows_above_zero: std::ops::Range<usize>,
) {
    let grid = cfg.grid.clone();
    let zero = grid.zero_row();
    for c in cols {
        for r in rows_above_zero.clone() {
            cfg.composite.set_cell(&grid, CellId::new(c, zero + r), true);
        }
    }
}

fn build_member(kind: SequenceKind, k: usize, grid: &Grid) -> Result<Configuration, GeometryError> {
    let zero = grid.zero_row();
    let half = grid.ny / 2;
    match kind {
        SequenceKind::VanishingFilament => {
            // Spike of ceil(ny / 2k) cells at the middle line, carried as
            // composite filament edges.
            let h = half.div_ceil(k).max(1);
            let profile =
                HeightProfile::from_cells_above_zero(grid, &vec![0; grid.nx], &[(grid.nx / 2, h)])?;
            let substrate = substrate_from_height(grid, profile, CrackSet::new())?;
            let mut cfg = Configuration::film_free(grid.clone(), substrate);
            for e in cfg.substrate.profile.spike_edges() {
                cfg.composite.filaments.insert(e);
            }
            Ok(cfg)
        }
        SequenceKind::WettingCollapse => {
            let t = half.div_ceil(2 * k).max(1);
            let mut cfg = flat_film_free(grid)?;
            add_film_block(&mut cfg, 0..grid.nx, 0..t);
            Ok(cfg)
        }
        SequenceKind::IslandShrink => {
            // Centered square island losing one cell ring per index.
            let s0 = (grid.nx / 2).min(half);
            let s = s0.saturating_sub(2 * (k - 1)).max(1);
            let c0 = (grid.nx - s) / 2;
            let mut cfg = flat_film_free(grid)?;
            add_film_block(&mut cfg, c0..c0 + s, 0..s.min(half));
            Ok(cfg)
        }
        SequenceKind::Neckpinch => {
            // Two floating film blobs with a film-filament neck growing out of
            // the left blob; the neck spans the gap at k = 1 and shrinks to
            // nothing. A cell-thick neck would cover part of the blob faces
            // and could undercut the limit energy; the zero-width filament is
            // the pinch at its honest grid price 2φ'.
            let mut cfg = build_limit(SequenceKind::Neckpinch, grid)?;
            let mid = grid.nx / 2;
            let gap = 4usize; // columns between the blob faces
            let len = gap / k;
            let row = zero + 3;
            for t in 0..len {
                cfg.composite
                    .filaments
                    .insert(EdgeId::horizontal(mid - 2 + t, row));
            }
            Ok(cfg)
        }
        SequenceKind::DelaminationClosing => {
            // Full layer with a debonded middle span that closes at finite k.
            let t = (grid.ny / 4).max(1);
            let mut cfg = flat_film_free(grid)?;
            add_film_block(&mut cfg, 0..grid.nx, 0..t);
            let w = (grid.nx / 4) / k; // floor: the span genuinely vanishes
            let mid = grid.nx / 2;
            for c in mid - w..mid + w {
                cfg.composite.slits.insert(EdgeId::horizontal(c, zero));
            }
            Ok(cfg)
        }
        SequenceKind::SubstrateCrackClosing => {
            // Substrate raised above the midline with a vertical delaminated
            // crack hanging from its surface; the crack closes at finite k.
            let lift = (half / 2).max(1);
            let profile = HeightProfile::from_cells_above_zero(grid, &vec![lift; grid.nx], &[])?;
            let surface = zero + lift;
            let len = lift / k; // floor
            let mid = grid.nx / 2;
            let mut cracks = CrackSet::new();
            for t in 0..len {
                cracks.insert(EdgeId::vertical(mid, surface - 1 - t));
            }
            let substrate = substrate_from_height(grid, profile, cracks)?;
            let mut cfg = Configuration::film_free(grid.clone(), substrate);
            for e in cfg.substrate.cracks.iter().collect::<Vec<_>>() {
                cfg.composite.slits.insert(e);
            }
            Ok(cfg)
        }
    }
}

fn build_limit(kind: SequenceKind, grid: &Grid) -> Result<Configuration, GeometryError> {
    let zero = grid.zero_row();
    match kind {
        SequenceKind::VanishingFilament
        | SequenceKind::IslandShrink
        | SequenceKind::WettingCollapse => flat_film_free(grid),
        SequenceKind::Neckpinch => {
            let mid = grid.nx / 2;
            let top = 4.min(grid.ny - zero);
            let mut cfg = flat_film_free(grid)?;
            add_film_block(&mut cfg, 1..mid - 2, 2..top);
            add_film_block(&mut cfg, mid + 2..grid.nx - 1, 2..top);
            Ok(cfg)
        }
        SequenceKind::DelaminationClosing => {
            let t = (grid.ny / 4).max(1);
            let mut cfg = flat_film_free(grid)?;
            add_film_block(&mut cfg, 0..grid.nx, 0..t);
            Ok(cfg)
        }
        SequenceKind::SubstrateCrackClosing => {
            let lift = (grid.ny / 4).max(1);
            let profile = HeightProfile::from_cells_above_zero(grid, &vec![lift; grid.nx], &[])?;
            let substrate = substrate_from_height(grid, profile, CrackSet::new())?;
            Ok(Configuration::film_free(grid.clone(), substrate))
        }
    }
}

/// Convergence schedule: the largest admissible sup-distance gap per index.
/// Gaps shrink with the feature being erased, floored by one-cell
/// quantization on the fixed grid.
fn schedule(kind: SequenceKind, k: usize, grid: &Grid) -> f64 {
    let cell = (grid.hx().powi(2) + grid.hy().powi(2)).sqrt();
    let half = grid.ny / 2;
    match kind {
        SequenceKind::VanishingFilament => half.div_ceil(k) as f64 * grid.hy() + cell,
        SequenceKind::WettingCollapse => half.div_ceil(2 * k) as f64 * grid.hy() + cell,
        SequenceKind::IslandShrink => {
            let s0 = (grid.nx / 2).min(half);
            let s = s0.saturating_sub(2 * (k - 1)).max(1) as f64;
            s * grid.hx().max(grid.hy()) + cell
        }
        SequenceKind::Neckpinch => {
            let len = 4 / k;
            if len == 0 {
                1e-12
            } else {
                len as f64 * grid.hx() + cell
            }
        }
        SequenceKind::DelaminationClosing => {
            let w = (grid.nx / 4) / k;
            if w == 0 {
                1e-12
            } else {
                (grid.ny / 4) as f64 * grid.hy() + cell
            }
        }
        SequenceKind::SubstrateCrackClosing => {
            let lift = (half / 2).max(1);
            let len = lift / k;
            if len == 0 {
                1e-12
            } else {
                len as f64 * grid.hy() + cell
            }
        }
    }
}

fn min_grid(kind: SequenceKind) -> (usize, usize) {
    match kind {
        SequenceKind::Neckpinch => (12, 8),
        SequenceKind::IslandShrink => (6, 6),
        _ => (4, 4),
    }
}

/// Generates `K` members plus the limit, validates each against the declared
/// budget, and certifies the convergence numerically (never assumed from the
/// construction).
pub fn generate_sequence(
    kind: SequenceKind,
    count: usize,
    grid: &Grid,
) -> Result<SequenceBundle, AnalysisError> {
    let needed = min_grid(kind);
    if grid.nx < needed.0 || grid.ny < needed.1 {
        return Err(AnalysisError::GridTooCoarse {
            kind,
            needed,
            smallest_k: 1,
        });
    }
    let limit = build_limit(kind, grid)?;
    let mut members = Vec::with_capacity(count);
    for k in 1..=count {
        members.push(build_member(kind, k, grid)?);
    }
    let m = kind.budget();
    for (idx, cfg) in members.iter().chain(std::iter::once(&limit)).enumerate() {
        if !validate_configuration(cfg, m).admissible {
            return Err(AnalysisError::NotAdmissible { kind, index: idx });
        }
    }
    let report = tau_convergence_report(&members, &limit)?;
    for (idx, &gap) in report.gaps_composite.iter().enumerate() {
        let allowed = schedule(kind, idx + 1, grid);
        let gap = gap.max(report.gaps_substrate[idx]);
        if gap > allowed {
            return Err(AnalysisError::NotConvergent {
                kind,
                index: idx + 1,
                gap,
                allowed,
            });
        }
    }
    Ok(SequenceBundle {
        kind,
        members,
        limit,
        report,
    })
}

/// Sup-norm signed-distance gaps over cell centers for both boundaries, plus
/// boundary-length summaries.
pub fn tau_convergence_report(
    members: &[Configuration],
    limit: &Configuration,
) -> Result<ConvergenceReport, AnalysisError> {
    let grid = &limit.grid;
    let sd = |cfg: &Configuration| -> Result<(Vec<f64>, Vec<f64>), AnalysisError> {
        let a = sdist_field(
            grid,
            cfg.composite.cell_flags(),
            &cfg.composite.boundary_edges(grid),
        )?;
        let s = sdist_field(
            grid,
            cfg.substrate.cell_flags(),
            &cfg.substrate.boundary_edges(grid),
        )?;
        Ok((a, s))
    };
    let boundary_len = |cfg: &Configuration| -> (f64, f64) {
        let (bs, ba) = cfg.interior_boundaries();
        (
            ba.iter().map(|&e| grid.edge_length(e)).sum(),
            bs.iter().map(|&e| grid.edge_length(e)).sum(),
        )
    };
    let (limit_a, limit_s) = sd(limit)?;
    let mut report = ConvergenceReport {
        gaps_composite: Vec::new(),
        gaps_substrate: Vec::new(),
        lengths_composite: Vec::new(),
        lengths_substrate: Vec::new(),
        sup_length_composite: 0.0,
        sup_length_substrate: 0.0,
    };
    for cfg in members {
        assert_eq!(cfg.grid, *grid, "sequence members must share the limit grid");
        let (a, s) = sd(cfg)?;
        let gap_a = a
            .iter()
            .zip(&limit_a)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let gap_s = s
            .iter()
            .zip(&limit_s)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        let (la, ls) = boundary_len(cfg);
        report.gaps_composite.push(gap_a);
        report.gaps_substrate.push(gap_s);
        report.lengths_composite.push(la);
        report.lengths_substrate.push(ls);
        report.sup_length_composite = report.sup_length_composite.max(la);
        report.sup_length_substrate = report.sup_length_substrate.max(ls);
    }
    Ok(report)
}

/// Lower-semicontinuity verdict for one sequence.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct LscReport {
    pub surface_values: Vec<f64>,
    pub surface_limit: f64,
    /// `min_{k >= K0} S_k - S_limit` for every tail start `K0`.
    pub tail_margins: Vec<f64>,
    pub margin: f64,
    pub pass: bool,
}

/// Checks `liminf S_k >= S_limit` on the finite sequence: every tail minimum
/// must clear the limit up to `tolerance`.
pub fn lsc_check(
    bundle: &SequenceBundle,
    tensions: &SurfaceTensions,
    tolerance: f64,
) -> Result<LscReport, AnalysisError> {
    lsc_check_weighted(bundle, tensions, tolerance, false)
}

/// Same as [`lsc_check`]; with `misweight_limit` the limit's coherent and
/// incoherent interface weights are swapped, an intentionally wrong ψ that a
/// sound harness must flag as a failure.
pub fn lsc_check_weighted(
    bundle: &SequenceBundle,
    tensions: &SurfaceTensions,
    tolerance: f64,
    misweight_limit: bool,
) -> Result<LscReport, AnalysisError> {
    let mut surface_values = Vec::with_capacity(bundle.members.len());
    for cfg in &bundle.members {
        surface_values.push(surface_energy(cfg, tensions)?.surface);
    }
    let surface_limit = if misweight_limit {
        let labels = classify_boundary(&bundle.limit)?;
        let grid = &bundle.limit.grid;
        let mut sum = 0.0;
        for e in &labels.entries {
            let x = grid.edge_midpoint(e.edge);
            let mut swapped = *e;
            swapped.class = match e.class {
                BoundaryClass::Coherent => BoundaryClass::Incoherent,
                BoundaryClass::Incoherent => BoundaryClass::Coherent,
                other => other,
            };
            sum += edge_energy(tensions, x, &swapped);
        }
        sum
    } else {
        surface_energy(&bundle.limit, tensions)?.surface
    };
    let n = surface_values.len();
    let mut tail_margins = vec![0.0; n];
    let mut running = f64::INFINITY;
    for k0 in (0..n).rev() {
        running = running.min(surface_values[k0]);
        tail_margins[k0] = running - surface_limit;
    }
    let margin = tail_margins.first().copied().unwrap_or(0.0);
    Ok(LscReport {
        surface_values,
        surface_limit,
        tail_margins,
        margin,
        pass: margin >= -tolerance,
    })
}

/// The compactness inequality for one configuration:
/// `c1 (H¹(Ω∩∂A) + H¹(Ω∩∂S\∂A)) <= 2 S`.
pub fn compactness_bound_check(
    cfg: &Configuration,
    tensions: &SurfaceTensions,
) -> Result<(f64, f64, bool), AnalysisError> {
    Ok(crate::energy::compactness_bound(cfg, tensions)?)
}

/// Shortest lattice path (axis plus diagonal steps) against the straight
/// chord, both priced by the norm. Subadditivity makes the chord an exact
/// lower bound, not an asymptotic one.
pub fn segment_minimality_check(
    phi: &FinslerNorm,
    p: (i64, i64),
    q: (i64, i64),
    grid: &Grid,
) -> (f64, f64, bool) {
    assert!(p != q, "endpoints must differ");
    let (hx, hy) = (grid.hx(), grid.hy());
    let chord_vec = ((q.0 - p.0) as f64 * hx, (q.1 - p.1) as f64 * hy);
    let origin = (0.0, 0.0);
    let chord = phi.eval(origin, chord_vec);

    // Dijkstra over the vertex lattice spanned by the endpoints' bounding box
    // with padding: a norm never pays to wander, but the oracle should not
    // assume that.
    let pad = 2i64;
    let (x0, x1) = (p.0.min(q.0) - pad, p.0.max(q.0) + pad);
    let (y0, y1) = (p.1.min(q.1) - pad, p.1.max(q.1) + pad);
    let w = (x1 - x0 + 1) as usize;
    let h = (y1 - y0 + 1) as usize;
    let idx = |x: i64, y: i64| ((y - y0) as usize) * w + (x - x0) as usize;
    let mut dist = vec![f64::INFINITY; w * h];

    #[derive(PartialEq)]
    struct Entry(f64, usize);
    impl Eq for Entry {}
    impl PartialOrd for Entry {
        fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
            Some(self.cmp(other))
        }
    }
    impl Ord for Entry {
        fn cmp(&self, other: &Self) -> std::cmp::Ordering {
            other.0.total_cmp(&self.0).then(other.1.cmp(&self.1))
        }
    }

    let steps: [(i64, i64); 8] = [
        (1, 0),
        (-1, 0),
        (0, 1),
        (0, -1),
        (1, 1),
        (1, -1),
        (-1, 1),
        (-1, -1),
    ];
    let mut heap = BinaryHeap::new();
    dist[idx(p.0, p.1)] = 0.0;
    heap.push(Entry(0.0, idx(p.0, p.1)));
    let target = idx(q.0, q.1);
    while let Some(Entry(d, v)) = heap.pop() {
        if d > dist[v] {
            continue;
        }
        if v == target {
            break;
        }
        let x = x0 + (v % w) as i64;
        let y = y0 + (v / w) as i64;
        for (sx, sy) in steps {
            let (nx, ny) = (x + sx, y + sy);
            if nx < x0 || nx > x1 || ny < y0 || ny > y1 {
                continue;
            }
            let step_vec = (sx as f64 * hx, sy as f64 * hy);
            let nd = d + phi.eval(origin, step_vec);
            let ni = idx(nx, ny);
            if nd < dist[ni] {
                dist[ni] = nd;
                heap.push(Entry(nd, ni));
            }
        }
    }
    let path = dist[target];
    (path, chord, path >= chord - 1e-12)
}
