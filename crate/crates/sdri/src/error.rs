//! Error types shared across the crate.

use std::fmt;

use crate::geometry::AdmissibilityReport;
use crate::grid::EdgeId;

#[derive(Clone, Debug, PartialEq)]
pub enum GeometryError {
    InvalidGrid(String),
    InvalidProfile(String),
    /// A crack edge does not lie in the closed subgraph of the height profile.
    CrackOutsideSubstrate(EdgeId),
    /// Signed distance is undefined for a region with empty boundary.
    EmptyBoundary,
    /// Blow-up window is invalid (outside Ω, not grid aligned, or with
    /// substrate content that is not a subgraph over the window floor).
    InvalidWindow(String),
    /// An edge stencil reached during classification that no admissible
    /// configuration can produce; indicates a representation bug.
    InconsistentStencil(EdgeId, &'static str),
}

impl fmt::Display for GeometryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GeometryError::InvalidGrid(msg) => write!(f, "invalid grid: {msg}"),
            GeometryError::InvalidProfile(msg) => write!(f, "invalid height profile: {msg}"),
            GeometryError::CrackOutsideSubstrate(e) => {
                write!(f, "crack edge {e:?} lies outside the closed subgraph")
            }
            GeometryError::EmptyBoundary => write!(f, "undefined signed distance: empty boundary"),
            GeometryError::InvalidWindow(msg) => write!(f, "invalid blow-up window: {msg}"),
            GeometryError::InconsistentStencil(e, what) => {
                write!(f, "internal consistency error at edge {e:?}: {what}")
            }
        }
    }
}

impl std::error::Error for GeometryError {}

#[derive(Clone, Debug)]
pub enum EnergyError {
    /// The configuration violates admissibility; carries the full report.
    Inadmissible(AdmissibilityReport),
    /// Localized energy asked for a window that is not grid aligned.
    WindowNotAligned(String),
    /// Reduced energy is defined only for substrates without cracks/spikes.
    SubstrateNotRegular(&'static str),
    /// Elastic subproblem failed while evaluating a total energy.
    Elastic(String),
    Geometry(GeometryError),
}

impl fmt::Display for EnergyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnergyError::Inadmissible(rep) => {
                write!(f, "inadmissible configuration: {} violation(s)", rep.violations.len())
            }
            EnergyError::WindowNotAligned(msg) => write!(f, "window not grid aligned: {msg}"),
            EnergyError::SubstrateNotRegular(what) => {
                write!(f, "reduced energy defined only for fixed regular substrate: {what}")
            }
            EnergyError::Elastic(msg) => write!(f, "elastic solve failed: {msg}"),
            EnergyError::Geometry(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for EnergyError {}

impl From<GeometryError> for EnergyError {
    fn from(e: GeometryError) -> Self {
        EnergyError::Geometry(e)
    }
}

#[derive(Clone, Debug)]
pub enum ElasticityError {
    /// Elasticity tensor is not positive definite on symmetric matrices.
    NotPositiveDefinite(String),
    /// Conjugate gradients failed to reach the target residual.
    SolverStalled { iterations: usize, residual: f64 },
    /// Displacement vector does not match the mesh it is evaluated on.
    MeshMismatch { expected: usize, got: usize },
    Energy(EnergyError),
}

impl fmt::Display for ElasticityError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ElasticityError::NotPositiveDefinite(msg) => {
                write!(f, "elasticity tensor not positive definite: {msg}")
            }
            ElasticityError::SolverStalled { iterations, residual } => write!(
                f,
                "equilibrium solver stalled after {iterations} iterations (residual {residual:.3e})"
            ),
            ElasticityError::MeshMismatch { expected, got } => {
                write!(f, "displacement has {got} nodes, mesh has {expected}")
            }
            ElasticityError::Energy(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for ElasticityError {}

impl From<EnergyError> for ElasticityError {
    fn from(e: EnergyError) -> Self {
        ElasticityError::Energy(e)
    }
}

impl From<GeometryError> for ElasticityError {
    fn from(e: GeometryError) -> Self {
        ElasticityError::Energy(EnergyError::Geometry(e))
    }
}
