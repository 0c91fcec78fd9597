//! Grid-based representation, validation, and labeling of admissible
//! two-phase configurations.

mod blowup;
mod boundary;
mod composite;
mod config;
mod profile;
mod sdist;
mod substrate;

pub use blowup::blowup;
pub use boundary::{
    boundary_components, classify_boundary, classify_edge, BoundaryClass, LabeledBoundary,
    LabeledEdge,
};
pub use composite::CompositeRegion;
pub use config::{validate_configuration, AdmissibilityReport, Configuration, Violation};
pub use profile::{pointwise_variation, HeightProfile, Spike};
pub use sdist::{point_edge_distance, sdist_at, sdist_field};
pub use substrate::{substrate_from_height, CrackSet, SubstrateRegion};
