//! The move catalog: elementary cell/edge edits plus the constructive
//! shrink/fill/open modifications.
//!
//! Applying a move never mutates the input: it produces a fresh configuration
//! that passed full validation, or a typed rejection. Stale edge marks left
//! behind by a cell edit (a slit losing a neighbour, a filament gaining one)
//! are re-normalized instead of tripping the validator; marks are only
//! dropped, never invented.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::geometry::{
    substrate_from_height, validate_configuration, Configuration, HeightProfile, Spike, Violation,
};
use crate::grid::{CellId, EdgeId, Grid, VertexId};
use crate::minimize::features::Feature;

/// One local modification of a configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Move {
    AddFilmCell(CellId),
    RemoveFilmCell(CellId),
    /// Raise or lower one substrate column by one row. Lowering turns the
    /// top substrate cell into film; raising absorbs the cell above into the
    /// substrate (adding it to the composite if needed).
    HeightStep { column: usize, delta: i8 },
    /// Re-bond or debond an interface edge or a substrate crack.
    ToggleDelamination(EdgeId),
    AddCrack(EdgeId),
    RemoveCrack(EdgeId),
    AddFilament(EdgeId),
    RemoveFilament(EdgeId),
    /// Remove an island and replace its coherent interface by the rasterized
    /// chord between its contact endpoints.
    ShrinkIsland(usize),
    /// Add the void's cells to the composite and re-bond its delaminated tail.
    FillVoid(usize),
    /// Carve the grain back to the chord of its contact, leaving a new void.
    OpenGrain(usize),
    /// Volume-preserving pair: one film cell moves to a new location.
    TransportFilmCell { remove: CellId, add: CellId },
    /// Volume-preserving pair of height steps in two columns.
    PairedHeightStep { up: usize, down: usize },
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::AddFilmCell(_) => "add-film-cell",
            Move::RemoveFilmCell(_) => "remove-film-cell",
            Move::HeightStep { .. } => "height-step",
            Move::ToggleDelamination(_) => "toggle-delamination",
            Move::AddCrack(_) => "add-crack",
            Move::RemoveCrack(_) => "remove-crack",
            Move::AddFilament(_) => "add-filament",
            Move::RemoveFilament(_) => "remove-filament",
            Move::ShrinkIsland(_) => "shrink-island",
            Move::FillVoid(_) => "fill-void",
            Move::OpenGrain(_) => "open-grain",
            Move::TransportFilmCell { .. } => "transport-film-cell",
            Move::PairedHeightStep { .. } => "paired-height-step",
        }
    }

    /// Moves that change the cut set or the region topology force an elastic
    /// re-solve when accepted.
    pub fn is_topology_move(&self) -> bool {
        matches!(
            self,
            Move::ToggleDelamination(_)
                | Move::AddCrack(_)
                | Move::RemoveCrack(_)
                | Move::ShrinkIsland(_)
                | Move::FillVoid(_)
                | Move::OpenGrain(_)
        )
    }
}

/// Typed rejection: the original configuration is untouched.
#[derive(Clone, Debug)]
pub enum MoveRejection {
    /// Payload does not refer to an applicable entity.
    BadPayload(String),
    /// The modified configuration failed validation.
    Inadmissible(Vec<Violation>),
}

impl fmt::Display for MoveRejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MoveRejection::BadPayload(msg) => write!(f, "rejected: {msg}"),
            MoveRejection::Inadmissible(v) => write!(f, "rejected: {} violation(s)", v.len()),
        }
    }
}

/// Features resolved against the current configuration, passed alongside
/// composite moves.
pub struct FeatureContext<'a> {
    pub islands: &'a [Feature],
    pub voids: &'a [Feature],
    pub grains: &'a [Feature],
}

fn add_cell_to_composite(cfg: &mut Configuration, c: CellId) {
    let grid = cfg.grid.clone();
    cfg.composite.set_cell(&grid, c, true);
    for e in grid.cell_edges(c) {
        cfg.composite.filaments.remove(&e);
    }
}

fn normalize_marks(cfg: &mut Configuration) {
    let grid = cfg.grid.clone();
    let slits: Vec<EdgeId> = cfg.composite.slits.iter().copied().collect();
    for e in slits {
        let a = cfg.composite.edge_density(&grid, e);
        let s = cfg.substrate.edge_density(&grid, e);
        let keep = a == 2 && (s != 2 || cfg.substrate.cracks.contains(e));
        if !keep {
            cfg.composite.slits.remove(&e);
        }
    }
    let filaments: Vec<EdgeId> = cfg.composite.filaments.iter().copied().collect();
    for e in filaments {
        if cfg.composite.edge_density(&grid, e) != 0 {
            cfg.composite.filaments.remove(&e);
        }
    }
}

fn rebuild_substrate(
    cfg: &mut Configuration,
    rows: Vec<usize>,
    spikes: Vec<Spike>,
    drop_dead_cracks: bool,
) -> Result<(), MoveRejection> {
    let grid = cfg.grid.clone();
    let profile = HeightProfile::from_rows(&grid, rows, spikes)
        .map_err(|e| MoveRejection::BadPayload(e.to_string()))?;
    let mut cracks = cfg.substrate.cracks.clone();
    if drop_dead_cracks {
        // Cracks must stay in the closed subgraph; chord moves may strand some.
        let probe = substrate_from_height(&grid, profile.clone(), crate::geometry::CrackSet::new())
            .map_err(|e| MoveRejection::BadPayload(e.to_string()))?;
        let alive: Vec<EdgeId> = cracks
            .iter()
            .filter(|&e| {
                grid.edge_cells(e)
                    .iter()
                    .flatten()
                    .any(|&c| probe.contains_cell(&grid, c))
            })
            .collect();
        cracks = crate::geometry::CrackSet::from_edges(alive);
    }
    cfg.substrate = substrate_from_height(&grid, profile, cracks)
        .map_err(|e| MoveRejection::BadPayload(e.to_string()))?;
    Ok(())
}

/// Drops spikes that no longer rise above their adjacent columns.
fn surviving_spikes(rows: &[usize], spikes: &[Spike]) -> Vec<Spike> {
    spikes
        .iter()
        .copied()
        .filter(|s| s.top_row > rows[s.line - 1].max(rows[s.line]))
        .collect()
}

/// Endpoints of a simple contact arc: the two odd-degree vertices.
fn arc_endpoints(grid: &Grid, edges: &[EdgeId]) -> Result<(VertexId, VertexId), MoveRejection> {
    let mut degree: std::collections::BTreeMap<VertexId, usize> = std::collections::BTreeMap::new();
    for &e in edges {
        let (p, q) = grid.edge_endpoints(e);
        *degree.entry(p).or_insert(0) += 1;
        *degree.entry(q).or_insert(0) += 1;
    }
    let odd: Vec<VertexId> = degree
        .iter()
        .filter(|(_, &d)| d % 2 == 1)
        .map(|(&v, _)| v)
        .collect();
    if odd.len() != 2 {
        return Err(MoveRejection::BadPayload(format!(
            "contact chain is not a simple arc ({} odd vertices)",
            odd.len()
        )));
    }
    let (mut p, mut q) = (odd[0], odd[1]);
    if (q.i, q.j) < (p.i, p.j) {
        std::mem::swap(&mut p, &mut q);
    }
    Ok((p, q))
}

/// Staircase rasterization of the chord between two lattice vertices: the
/// target row for every column the chord spans, clamped to admissible
/// heights. Never shorter than the straight chord in any lattice norm.
fn chord_rows(grid: &Grid, p: VertexId, q: VertexId) -> Vec<(usize, usize)> {
    let (i0, i1) = (p.i as usize, q.i as usize);
    if i0 == i1 {
        return Vec::new();
    }
    let span = (i1 - i0) as f64;
    let mut out = Vec::new();
    for c in i0..i1 {
        let t = (c as f64 + 0.5 - i0 as f64) / span;
        let val = p.j as f64 + t * (q.j as f64 - p.j as f64);
        let row = (val + 0.5).floor().clamp(grid.zero_row() as f64, grid.ny as f64) as usize;
        out.push((c, row));
    }
    out
}

/// Applies a move and validates the result against the component budget `m`.
pub fn apply_move(
    cfg: &Configuration,
    mv: &Move,
    m: (usize, usize),
    features: Option<&FeatureContext<'_>>,
) -> Result<Configuration, MoveRejection> {
    let mut out = cfg.clone();
    let grid = cfg.grid.clone();
    match mv {
        Move::AddFilmCell(c) => {
            if out.composite.contains_cell(&grid, *c) {
                return Err(MoveRejection::BadPayload("cell already in composite".into()));
            }
            add_cell_to_composite(&mut out, *c);
        }
        Move::RemoveFilmCell(c) => {
            if !out.composite.contains_cell(&grid, *c) {
                return Err(MoveRejection::BadPayload("cell not in composite".into()));
            }
            if out.substrate.contains_cell(&grid, *c) {
                return Err(MoveRejection::BadPayload("cannot remove a substrate cell".into()));
            }
            out.composite.set_cell(&grid, *c, false);
        }
        Move::HeightStep { column, delta } => {
            apply_height_step(&mut out, *column, *delta)?;
        }
        Move::ToggleDelamination(e) => {
            if !grid.edge_valid(*e) || grid.edge_on_wall(*e) {
                return Err(MoveRejection::BadPayload("edge outside Ω".into()));
            }
            let a = out.composite.edge_density(&grid, *e);
            let s = out.substrate.edge_density(&grid, *e);
            let interface = a == 2 && s == 1;
            let crack = a == 2 && s == 2 && out.substrate.cracks.contains(*e);
            if !(interface || crack) {
                return Err(MoveRejection::BadPayload(
                    "edge is neither on the interface nor a bulk crack".into(),
                ));
            }
            if !out.composite.slits.remove(e) {
                out.composite.slits.insert(*e);
            }
        }
        Move::AddCrack(e) => {
            if out.substrate.cracks.contains(*e) {
                return Err(MoveRejection::BadPayload("edge already a crack".into()));
            }
            let mut cracks = out.substrate.cracks.clone();
            cracks.insert(*e);
            out.substrate = substrate_from_height(&grid, out.substrate.profile.clone(), cracks)
                .map_err(|err| MoveRejection::BadPayload(err.to_string()))?;
        }
        Move::RemoveCrack(e) => {
            if !out.substrate.cracks.contains(*e) {
                return Err(MoveRejection::BadPayload("edge is not a crack".into()));
            }
            let mut cracks = out.substrate.cracks.clone();
            cracks.remove(*e);
            out.composite.slits.remove(e);
            out.substrate = substrate_from_height(&grid, out.substrate.profile.clone(), cracks)
                .map_err(|err| MoveRejection::BadPayload(err.to_string()))?;
        }
        Move::AddFilament(e) => {
            if out.composite.filaments.contains(e) {
                return Err(MoveRejection::BadPayload("edge already a filament".into()));
            }
            if out.composite.edge_density(&grid, *e) != 0 {
                return Err(MoveRejection::BadPayload("filament needs both neighbours outside".into()));
            }
            out.composite.filaments.insert(*e);
        }
        Move::RemoveFilament(e) => {
            if !out.composite.filaments.remove(e) {
                return Err(MoveRejection::BadPayload("edge is not a filament".into()));
            }
        }
        Move::ShrinkIsland(idx) => {
            let feats = features.ok_or_else(|| MoveRejection::BadPayload("no feature context".into()))?;
            let island = feats
                .islands
                .get(*idx)
                .ok_or_else(|| MoveRejection::BadPayload(format!("no island {idx}")))?;
            shrink_island(&mut out, island)?;
        }
        Move::FillVoid(idx) => {
            let feats = features.ok_or_else(|| MoveRejection::BadPayload("no feature context".into()))?;
            let void = feats
                .voids
                .get(*idx)
                .ok_or_else(|| MoveRejection::BadPayload(format!("no void {idx}")))?;
            for &c in &void.cells {
                add_cell_to_composite(&mut out, c);
            }
            for &e in &void.edge_elements {
                out.composite.slits.remove(&e);
                out.composite.filaments.remove(&e);
            }
        }
        Move::OpenGrain(idx) => {
            let feats = features.ok_or_else(|| MoveRejection::BadPayload("no feature context".into()))?;
            let grain = feats
                .grains
                .get(*idx)
                .ok_or_else(|| MoveRejection::BadPayload(format!("no grain {idx}")))?;
            open_grain(&mut out, grain)?;
        }
        Move::TransportFilmCell { remove, add } => {
            if !out.composite.contains_cell(&grid, *remove)
                || out.substrate.contains_cell(&grid, *remove)
            {
                return Err(MoveRejection::BadPayload("remove target is not a film cell".into()));
            }
            if out.composite.contains_cell(&grid, *add) {
                return Err(MoveRejection::BadPayload("add target already occupied".into()));
            }
            out.composite.set_cell(&grid, *remove, false);
            add_cell_to_composite(&mut out, *add);
        }
        Move::PairedHeightStep { up, down } => {
            if up == down {
                return Err(MoveRejection::BadPayload("paired step needs two columns".into()));
            }
            // For volume preservation the raised cell must already be film.
            let r = out.substrate.profile.rows()[*up];
            if r >= grid.ny {
                return Err(MoveRejection::BadPayload("column already full".into()));
            }
            let raised = CellId::new(*up, r);
            if !out.composite.contains_cell(&grid, raised) {
                return Err(MoveRejection::BadPayload(
                    "raised cell is not film; pair would change the composite volume".into(),
                ));
            }
            apply_height_step(&mut out, *up, 1)?;
            apply_height_step(&mut out, *down, -1)?;
        }
    }
    normalize_marks(&mut out);
    let report = validate_configuration(&out, m);
    if !report.admissible {
        return Err(MoveRejection::Inadmissible(report.violations));
    }
    Ok(out)
}

fn apply_height_step(out: &mut Configuration, column: usize, delta: i8) -> Result<(), MoveRejection> {
    let grid = out.grid.clone();
    if column >= grid.nx {
        return Err(MoveRejection::BadPayload(format!("column {column} out of range")));
    }
    let mut rows = out.substrate.profile.rows().to_vec();
    let spikes = out.substrate.profile.spikes().to_vec();
    match delta {
        1 => {
            if rows[column] >= grid.ny {
                return Err(MoveRejection::BadPayload("column already at the top".into()));
            }
            let new_cell = CellId::new(column, rows[column]);
            rows[column] += 1;
            let spikes = surviving_spikes(&rows, &spikes);
            rebuild_substrate(out, rows, spikes, false)?;
            add_cell_to_composite(out, new_cell);
            // Slits on the absorbed cell's edges die unless they are cracks.
            for e in grid.cell_edges(new_cell) {
                if out.composite.slits.contains(&e) && !out.substrate.cracks.contains(e) {
                    out.composite.slits.remove(&e);
                }
            }
        }
        -1 => {
            if rows[column] <= grid.zero_row() {
                return Err(MoveRejection::BadPayload("column already at h = 0".into()));
            }
            rows[column] -= 1;
            let spikes = surviving_spikes(&rows, &spikes);
            // The abandoned top cell stays in the composite as film; cracks
            // stranded above the new height reject the move.
            rebuild_substrate(out, rows, spikes, false)?;
        }
        _ => return Err(MoveRejection::BadPayload("height step must be ±1".into())),
    }
    Ok(())
}

/// Drops crack edges touching the re-laid column span; the constructions
/// replace that stretch of substrate wholesale, and a buried crack detached
/// from the new surface would split ∂S.
fn purge_span_cracks(out: &mut Configuration, span: std::ops::Range<usize>) {
    let grid = out.grid.clone();
    let doomed: Vec<EdgeId> = out
        .substrate
        .cracks
        .iter()
        .filter(|e| {
            grid.edge_cells(*e)
                .iter()
                .flatten()
                .any(|c| span.contains(&(c.i as usize)))
        })
        .collect();
    let mut cracks = out.substrate.cracks.clone();
    for e in doomed {
        cracks.remove(e);
        out.composite.slits.remove(&e);
    }
    out.substrate =
        substrate_from_height(&grid, out.substrate.profile.clone(), cracks).expect("same profile");
}

fn shrink_island(out: &mut Configuration, island: &Feature) -> Result<(), MoveRejection> {
    let grid = out.grid.clone();
    if island.contact.is_empty() {
        return Err(MoveRejection::BadPayload("island has no coherent contact".into()));
    }
    let (p, q) = arc_endpoints(&grid, &island.contact)?;
    let targets = chord_rows(&grid, p, q);
    for &c in &island.cells {
        out.composite.set_cell(&grid, c, false);
    }
    purge_span_cracks(out, p.i as usize..q.i as usize);
    let mut rows = out.substrate.profile.rows().to_vec();
    for &(c, row) in &targets {
        // Substrate above the chord becomes void; everything below the chord
        // (island material included) is absorbed into the substrate.
        for j in row..rows[c] {
            out.composite.set_cell(&grid, CellId::new(c, j), false);
        }
        for j in rows[c]..row {
            add_cell_to_composite(out, CellId::new(c, j));
        }
        rows[c] = row;
    }
    let spikes = surviving_spikes(&rows, out.substrate.profile.spikes());
    rebuild_substrate(out, rows, spikes, true)
}

fn open_grain(out: &mut Configuration, grain: &Feature) -> Result<(), MoveRejection> {
    let grid = out.grid.clone();
    if grain.contact.is_empty() {
        return Err(MoveRejection::BadPayload("grain has no coherent contact".into()));
    }
    let (p, q) = arc_endpoints(&grid, &grain.contact)?;
    let targets = chord_rows(&grid, p, q);
    purge_span_cracks(out, p.i as usize..q.i as usize);
    let mut rows = out.substrate.profile.rows().to_vec();
    for &(c, row) in &targets {
        let new_row = rows[c].min(row);
        for j in new_row..rows[c] {
            // Carved substrate leaves the composite too: a new void opens.
            out.composite.set_cell(&grid, CellId::new(c, j), false);
        }
        rows[c] = new_row;
    }
    let spikes = surviving_spikes(&rows, out.substrate.profile.spikes());
    rebuild_substrate(out, rows, spikes, true)
}

/// Edges whose classification can change under a move: the four edges of
/// every touched cell plus every explicitly toggled edge and the spikes of
/// touched columns. Used for the incremental energy update.
pub fn affected_edges(cfg_before: &Configuration, cfg_after: &Configuration) -> Vec<EdgeId> {
    let grid = &cfg_before.grid;
    let mut out: BTreeSet<EdgeId> = BTreeSet::new();
    for c in grid.cells() {
        let idx = grid.cell_index(c);
        if cfg_before.composite.cell_flags()[idx] != cfg_after.composite.cell_flags()[idx]
            || cfg_before.substrate.cell_flags()[idx] != cfg_after.substrate.cell_flags()[idx]
        {
            out.extend(grid.cell_edges(c));
        }
    }
    let sym = |a: &BTreeSet<EdgeId>, b: &BTreeSet<EdgeId>, out: &mut BTreeSet<EdgeId>| {
        out.extend(a.symmetric_difference(b));
    };
    sym(&cfg_before.composite.slits, &cfg_after.composite.slits, &mut out);
    sym(&cfg_before.composite.filaments, &cfg_after.composite.filaments, &mut out);
    let cracks_before: BTreeSet<EdgeId> = cfg_before.substrate.cracks.iter().collect();
    let cracks_after: BTreeSet<EdgeId> = cfg_after.substrate.cracks.iter().collect();
    sym(&cracks_before, &cracks_after, &mut out);
    let spikes_before: BTreeSet<EdgeId> = cfg_before.substrate.spike_edge_set().clone();
    let spikes_after: BTreeSet<EdgeId> = cfg_after.substrate.spike_edge_set().clone();
    sym(&spikes_before, &spikes_after, &mut out);
    out.into_iter()
        .filter(|&e| grid.edge_valid(e) && !grid.edge_on_wall(e))
        .collect()
}
