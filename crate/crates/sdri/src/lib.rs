//! Discrete laboratory for two-phase film/substrate morphologies in the
//! stress-driven rearrangement setting.
//!
//! Configurations are unions of grid cells plus marked lattice edges (slits,
//! filaments, cracks). On top of that representation the crate provides:
//!
//! - exact evaluation of the anisotropic composite surface energy through an
//!   eleven-class interface taxonomy ([`energy`], [`geometry`]);
//! - linear elasticity with mismatch strain on split-node meshes, so
//!   displacement jumps follow cracks and delaminated interfaces
//!   ([`elasticity`]);
//! - volume-constrained and penalized annealed minimization with the
//!   constructive shrink/fill/open moves as the composite move catalog
//!   ([`minimize`]);
//! - empirical checks of the structural inequalities: the variation/length
//!   sandwich, the compactness bound, lower semicontinuity along converging
//!   sequences, and anisotropic minimality of segments ([`analysis`]).
//!
//! The `examples/` directory carries one runnable example per capability;
//! the `sdri` binary is a thin batch front end over the same entry points.

pub mod analysis;
pub mod elasticity;
pub mod energy;
pub mod error;
pub mod geometry;
pub mod grid;
pub mod io;
pub mod minimize;
pub mod render;
pub mod sample;
pub mod tension;

pub use elasticity::{build_mesh, relax, solve_equilibrium, DisplacementField, Material};
pub use energy::{surface_energy, total_energy, EnergyBreakdown};
pub use geometry::{
    classify_boundary, validate_configuration, Configuration, HeightProfile, SubstrateRegion,
};
pub use grid::Grid;
pub use tension::{FinslerNorm, SurfaceTensions};
