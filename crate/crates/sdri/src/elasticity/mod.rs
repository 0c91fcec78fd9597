//! Linear elasticity with mismatch strain on the composite region.
//!
//! Displacements live on a split-node quadrilateral mesh: jumps are permitted
//! exactly across slit chains (cracks, delaminated interfaces), everything
//! else is conforming.

mod mesh;
mod solve;

pub use mesh::{build_mesh, SplitMesh};
pub use solve::{
    elastic_energy, elastic_energy_on_mesh, energy_gradient, relax, solve_equilibrium,
    solve_equilibrium_with, DisplacementField, SolveSettings,
};

use serde::{Deserialize, Serialize};

use crate::error::ElasticityError;

/// Isotropic plane-strain Lamé pair.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IsotropicPhase {
    pub lambda: f64,
    pub mu: f64,
}

impl IsotropicPhase {
    pub fn new(lambda: f64, mu: f64) -> Self {
        IsotropicPhase { lambda, mu }
    }
}

/// Constitutive law of one phase: isotropic Lamé or a full Voigt matrix.
///
/// Voigt convention: strain vector `(e11, e22, 2 e12)`, stress `(s11, s22, s12)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PhaseLaw {
    Isotropic(IsotropicPhase),
    Voigt { voigt: [[f64; 3]; 3] },
}

impl PhaseLaw {
    pub fn voigt(&self) -> [[f64; 3]; 3] {
        match self {
            PhaseLaw::Isotropic(p) => {
                let d = p.lambda + 2.0 * p.mu;
                [
                    [d, p.lambda, 0.0],
                    [p.lambda, d, 0.0],
                    [0.0, 0.0, p.mu],
                ]
            }
            PhaseLaw::Voigt { voigt } => *voigt,
        }
    }

    /// Largest `c3` with `C M : M >= 2 c3 M : M` on symmetric matrices,
    /// i.e. half the smallest eigenvalue of the tensor action.
    ///
    /// Errors when the tensor is not positive definite.
    pub fn coercivity(&self) -> Result<f64, ElasticityError> {
        let c = self.voigt();
        // The Frobenius form M:M equals e^T diag(1,1,1/2) e in the Voigt
        // strain vector, so the generalized problem reduces to the ordinary
        // eigenvalues of D^{-1/2} C D^{-1/2} with D = diag(1,1,1/2).
        let s = std::f64::consts::SQRT_2;
        let scale = [1.0, 1.0, s];
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = c[i][j] * scale[i] * scale[j];
            }
        }
        let eig = symmetric_eigenvalues_3x3(m);
        let min = eig[0].min(eig[1]).min(eig[2]);
        if min <= 0.0 {
            return Err(ElasticityError::NotPositiveDefinite(format!(
                "smallest eigenvalue of the tensor action is {min:.6e}"
            )));
        }
        Ok(0.5 * min)
    }
}

/// Where the mismatch strain applies.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MismatchScope {
    /// `E0 = sym(M0)` in the film, zero in the substrate (the model).
    #[default]
    FilmOnly,
    /// `E0 = sym(M0)` everywhere (compatible-strain harness mode).
    Everywhere,
}

/// Per-phase elasticity plus the mismatch descriptor `u0(x) = M0 x`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub film: PhaseLaw,
    pub substrate: PhaseLaw,
    /// The affine mismatch map; the stress-free strain is `sym(M0)`.
    pub mismatch: [[f64; 2]; 2],
    #[serde(default)]
    pub scope: MismatchScope,
    /// Optional per-cell stress-free strain table `(e11, e22, 2 e12)`,
    /// overriding the affine mismatch (test hook).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_cell_e0: Option<Vec<[f64; 3]>>,
}

impl Material {
    pub fn isotropic(film: IsotropicPhase, substrate: IsotropicPhase) -> Self {
        Material {
            film: PhaseLaw::Isotropic(film),
            substrate: PhaseLaw::Isotropic(substrate),
            mismatch: [[0.0, 0.0], [0.0, 0.0]],
            scope: MismatchScope::default(),
            per_cell_e0: None,
        }
    }

    pub fn with_dilational_mismatch(mut self, eps0: f64) -> Self {
        self.mismatch = [[eps0, 0.0], [0.0, eps0]];
        self
    }

    pub fn with_mismatch(mut self, m0: [[f64; 2]; 2]) -> Self {
        self.mismatch = m0;
        self
    }

    pub fn with_scope(mut self, scope: MismatchScope) -> Self {
        self.scope = scope;
        self
    }

    /// Mismatch strain in Voigt form, `sym(M0)`.
    pub fn mismatch_voigt(&self) -> [f64; 3] {
        let m = &self.mismatch;
        [m[0][0], m[1][1], m[0][1] + m[1][0]]
    }
}

/// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations.
pub(crate) fn symmetric_eigenvalues_3x3(mut a: [[f64; 3]; 3]) -> [f64; 3] {
    for _ in 0..64 {
        let off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if off < 1e-30 {
            break;
        }
        for p in 0..2 {
            for q in (p + 1)..3 {
                if a[p][q].abs() < 1e-18 {
                    continue;
                }
                let theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let mut rot = [[0.0; 3]; 3];
                for i in 0..3 {
                    rot[i][i] = 1.0;
                }
                rot[p][p] = c;
                rot[q][q] = c;
                rot[p][q] = s;
                rot[q][p] = -s;
                // a <- rot^T a rot
                let mut tmp = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        let mut acc = 0.0;
                        for k in 0..3 {
                            acc += a[i][k] * rot[k][j];
                        }
                        tmp[i][j] = acc;
                    }
                }
                let mut next = [[0.0; 3]; 3];
                for i in 0..3 {
                    for j in 0..3 {
                        let mut acc = 0.0;
                        for k in 0..3 {
                            acc += rot[k][i] * tmp[k][j];
                        }
                        next[i][j] = acc;
                    }
                }
                a = next;
            }
        }
    }
    [a[0][0], a[1][1], a[2][2]]
}
