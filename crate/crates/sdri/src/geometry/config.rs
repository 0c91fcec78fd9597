//! Admissible configurations and their validation.

use std::fmt;

use crate::geometry::boundary::boundary_components;
use crate::geometry::composite::CompositeRegion;
use crate::geometry::substrate::SubstrateRegion;
use crate::grid::{EdgeId, Grid};

/// A substrate nested in a composite region on a shared grid; the variational
/// unknown of the whole crate.
#[derive(Clone, Debug, PartialEq)]
pub struct Configuration {
    pub grid: Grid,
    pub substrate: SubstrateRegion,
    pub composite: CompositeRegion,
}

/// One broken constraint, carrying enough payload to point at the culprit.
#[derive(Clone, Debug, PartialEq)]
pub enum Violation {
    /// A substrate cell is not a composite cell (S ⊄ Ā).
    SubstrateOutsideComposite { cell_index: usize },
    /// Slit edge without both neighbour cells inside the composite.
    SlitNeighboursOutside(EdgeId),
    /// Slit edge buried in the substrate interior without being a crack
    /// (∂A ∩ Int(S) ≠ ∅).
    SlitInsideSubstrate(EdgeId),
    /// Filament edge with a neighbour cell inside the composite.
    FilamentNeighbourInside(EdgeId),
    /// Filament edge sharing no vertex with the composite boundary or with
    /// another filament.
    FilamentDetached(EdgeId),
    /// Marked edge lying on the container wall.
    MarkOnWall(EdgeId),
    /// Substrate spike edge not contained in the closure of the composite.
    SpikeOutsideComposite(EdgeId),
    /// Component budget exceeded for ∂S (`substrate = true`) or ∂A.
    TooManyComponents {
        substrate: bool,
        count: usize,
        budget: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::SubstrateOutsideComposite { cell_index } => {
                write!(f, "substrate cell {cell_index} outside composite (S ⊄ Ā)")
            }
            Violation::SlitNeighboursOutside(e) => {
                write!(f, "slit {e:?} lacks interior cells on both sides")
            }
            Violation::SlitInsideSubstrate(e) => {
                write!(f, "∂A ∩ Int(S) ≠ ∅: slit {e:?} inside substrate bulk is not a crack")
            }
            Violation::FilamentNeighbourInside(e) => {
                write!(f, "filament {e:?} has a composite cell neighbour")
            }
            Violation::FilamentDetached(e) => write!(f, "filament {e:?} attached to nothing"),
            Violation::MarkOnWall(e) => write!(f, "marked edge {e:?} lies on ∂Ω"),
            Violation::SpikeOutsideComposite(e) => {
                write!(f, "substrate spike edge {e:?} outside the composite closure")
            }
            Violation::TooManyComponents {
                substrate,
                count,
                budget,
            } => {
                let which = if *substrate { "∂S" } else { "∂A" };
                write!(f, "{which} has {count} components, budget {budget}")
            }
        }
    }
}

/// Outcome of [`validate_configuration`]: violations are data, not failures.
#[derive(Clone, Debug, PartialEq)]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub substrate_components: usize,
    pub composite_components: usize,
    pub violations: Vec<Violation>,
    pub budget: (usize, usize),
}

impl Configuration {
    /// Composite that exactly equals the substrate (empty film).
    pub fn film_free(grid: Grid, substrate: SubstrateRegion) -> Self {
        let composite = CompositeRegion::from_flags(substrate.cell_flags().to_vec());
        Configuration {
            grid,
            substrate,
            composite,
        }
    }

    /// Area of the composite region (cell count times cell area).
    pub fn composite_area(&self) -> f64 {
        self.composite.cell_count() as f64 * self.grid.cell_area()
    }

    /// Area of the substrate region.
    pub fn substrate_area(&self) -> f64 {
        self.substrate.cell_count() as f64 * self.grid.cell_area()
    }

    /// Structural violations, ignoring component budgets.
    pub fn structural_violations(&self) -> Vec<Violation> {
        let grid = &self.grid;
        let mut out = Vec::new();

        for (idx, (&in_s, &in_a)) in self
            .substrate
            .cell_flags()
            .iter()
            .zip(self.composite.cell_flags())
            .enumerate()
        {
            if in_s && !in_a {
                out.push(Violation::SubstrateOutsideComposite { cell_index: idx });
            }
        }

        for &e in &self.composite.slits {
            if grid.edge_on_wall(e) || !grid.edge_valid(e) {
                out.push(Violation::MarkOnWall(e));
                continue;
            }
            if self.composite.edge_density(grid, e) != 2 {
                out.push(Violation::SlitNeighboursOutside(e));
            }
            if self.substrate.edge_density(grid, e) == 2 && !self.substrate.cracks.contains(e) {
                out.push(Violation::SlitInsideSubstrate(e));
            }
        }

        // Vertices touched by the composite edge-boundary or by filaments,
        // for the attachment rule.
        let mut anchored = std::collections::BTreeSet::new();
        for e in grid.edges() {
            let [a, b] = grid.edge_cells(e);
            let ins = |c: Option<crate::grid::CellId>| {
                c.map(|c| self.composite.contains_cell(grid, c)).unwrap_or(false)
            };
            if ins(a) != ins(b) {
                let (p, q) = grid.edge_endpoints(e);
                anchored.insert(p);
                anchored.insert(q);
            }
        }
        let mut filament_vertices = std::collections::BTreeMap::new();
        for &e in &self.composite.filaments {
            let (p, q) = grid.edge_endpoints(e);
            *filament_vertices.entry(p).or_insert(0usize) += 1;
            *filament_vertices.entry(q).or_insert(0usize) += 1;
        }
        for &e in &self.composite.filaments {
            if grid.edge_on_wall(e) || !grid.edge_valid(e) {
                out.push(Violation::MarkOnWall(e));
                continue;
            }
            if self.composite.edge_density(grid, e) != 0 {
                out.push(Violation::FilamentNeighbourInside(e));
            }
            let (p, q) = grid.edge_endpoints(e);
            let touches_boundary = anchored.contains(&p) || anchored.contains(&q);
            let touches_other_filament =
                filament_vertices.get(&p).copied().unwrap_or(0) > 1
                    || filament_vertices.get(&q).copied().unwrap_or(0) > 1;
            if !touches_boundary && !touches_other_filament {
                out.push(Violation::FilamentDetached(e));
            }
        }

        // Spikes are substrate material, hence must sit in the closure of A:
        // an adjacent composite cell or an explicit filament mark.
        for &e in self.substrate.spike_edge_set() {
            let covered = self.composite.edge_density(grid, e) >= 1
                || self.composite.filaments.contains(&e);
            if !covered {
                out.push(Violation::SpikeOutsideComposite(e));
            }
        }

        out
    }

    /// Ω-interior edge sets of ∂S and ∂A (the energy-carrying boundaries).
    pub fn interior_boundaries(&self) -> (Vec<EdgeId>, Vec<EdgeId>) {
        (
            self.substrate.interior_boundary_edges(&self.grid),
            self.composite.interior_boundary_edges(&self.grid),
        )
    }
}

/// Checks every invariant of the configuration and counts boundary components
/// against the budget `m = (m0, m1)`; all problems are listed in the report.
pub fn validate_configuration(cfg: &Configuration, m: (usize, usize)) -> AdmissibilityReport {
    let mut violations = cfg.structural_violations();
    let (bs, ba) = cfg.interior_boundaries();
    let (substrate_components, _) = boundary_components(&cfg.grid, &bs);
    let (composite_components, _) = boundary_components(&cfg.grid, &ba);
    if substrate_components > m.0 {
        violations.push(Violation::TooManyComponents {
            substrate: true,
            count: substrate_components,
            budget: m.0,
        });
    }
    if composite_components > m.1 {
        violations.push(Violation::TooManyComponents {
            substrate: false,
            count: composite_components,
            budget: m.1,
        });
    }
    AdmissibilityReport {
        admissible: violations.is_empty(),
        substrate_components,
        composite_components,
        violations,
        budget: m,
    }
}
