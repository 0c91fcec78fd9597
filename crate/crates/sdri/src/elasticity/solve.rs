//! Equilibrium solve and energy evaluation on the split mesh.
//!
//! The discrete elastic energy is `W(u) = Σ_e Σ_gp (B u - e0)ᵀ C (B u - e0)`
//! with 2x2 Gauss quadrature per element (exact for bilinear elements on
//! rectangles). Pure Neumann problem: three rigid degrees of freedom are
//! pinned per mesh component, which leaves the energy untouched.

use crate::elasticity::mesh::SplitMesh;
use crate::elasticity::Material;
use crate::error::ElasticityError;
use crate::geometry::Configuration;

/// Two displacement values per mesh node.
#[derive(Clone, Debug, PartialEq)]
pub struct DisplacementField {
    pub values: Vec<(f64, f64)>,
}

impl DisplacementField {
    pub fn zeros(n: usize) -> Self {
        DisplacementField {
            values: vec![(0.0, 0.0); n],
        }
    }

    pub fn as_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(2 * self.values.len());
        for &(x, y) in &self.values {
            v.push(x);
            v.push(y);
        }
        v
    }

    pub fn from_flat(v: &[f64]) -> Self {
        DisplacementField {
            values: v.chunks(2).map(|c| (c[0], c[1])).collect(),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolveSettings {
    pub rel_tolerance: f64,
    pub max_iterations: usize,
}

impl Default for SolveSettings {
    fn default() -> Self {
        SolveSettings {
            rel_tolerance: 1e-10,
            max_iterations: 200_000,
        }
    }
}

const GAUSS: [f64; 2] = [-0.577_350_269_189_625_8, 0.577_350_269_189_625_8];

/// Strain-displacement rows at a Gauss point of a rectangular Q1 element.
/// Returns [3][8]: Voigt strain (e11, e22, 2 e12) from the 8 nodal dofs.
fn b_matrix(hx: f64, hy: f64, xi: f64, eta: f64) -> [[f64; 8]; 3] {
    // Shape function derivatives on the reference square.
    let dn_dxi = [
        -(1.0 - eta) / 4.0,
        (1.0 - eta) / 4.0,
        (1.0 + eta) / 4.0,
        -(1.0 + eta) / 4.0,
    ];
    let dn_deta = [
        -(1.0 - xi) / 4.0,
        -(1.0 + xi) / 4.0,
        (1.0 + xi) / 4.0,
        (1.0 - xi) / 4.0,
    ];
    let mut b = [[0.0; 8]; 3];
    for a in 0..4 {
        let dx = dn_dxi[a] * 2.0 / hx;
        let dy = dn_deta[a] * 2.0 / hy;
        b[0][2 * a] = dx;
        b[1][2 * a + 1] = dy;
        b[2][2 * a] = dy;
        b[2][2 * a + 1] = dx;
    }
    b
}

struct ElementQuadrature {
    /// Per Gauss point: B matrix and integration weight (detJ * w).
    points: Vec<([[f64; 8]; 3], f64)>,
}

fn quadrature(hx: f64, hy: f64) -> ElementQuadrature {
    let det_w = hx * hy / 4.0;
    let mut points = Vec::with_capacity(4);
    for &xi in &GAUSS {
        for &eta in &GAUSS {
            points.push((b_matrix(hx, hy, xi, eta), det_w));
        }
    }
    ElementQuadrature { points }
}

/// Stress-free strain of an element, in Voigt form.
fn resolve_e0(mesh: &SplitMesh, material: &Material, el: usize, cells_per_row: usize) -> [f64; 3] {
    if let Some(table) = &material.per_cell_e0 {
        let c = mesh.elements[el].cell;
        return table[c.j as usize * cells_per_row + c.i as usize];
    }
    match material.scope {
        crate::elasticity::MismatchScope::Everywhere => material.mismatch_voigt(),
        crate::elasticity::MismatchScope::FilmOnly => {
            if mesh.elements[el].substrate {
                [0.0; 3]
            } else {
                material.mismatch_voigt()
            }
        }
    }
}

/// Sparse matrix in CSR form.
struct Csr {
    row_ptr: Vec<usize>,
    cols: Vec<usize>,
    vals: Vec<f64>,
    diag: Vec<f64>,
}

impl Csr {
    fn mul(&self, x: &[f64], y: &mut [f64]) {
        for (r, y_r) in y.iter_mut().enumerate() {
            let mut acc = 0.0;
            for k in self.row_ptr[r]..self.row_ptr[r + 1] {
                acc += self.vals[k] * x[self.cols[k]];
            }
            *y_r = acc;
        }
    }
}

/// Assembled quadratic model `W(u) = uᵀK u - 2 fᵀu + c0`.
pub(crate) struct ElasticProblem {
    k: Csr,
    f: Vec<f64>,
    c0: f64,
    constrained: Vec<bool>,
    n_dofs: usize,
}

fn phase_voigt(mesh: &SplitMesh, material: &Material, el: usize) -> [[f64; 3]; 3] {
    if mesh.elements[el].substrate {
        material.substrate.voigt()
    } else {
        material.film.voigt()
    }
}

pub(crate) fn assemble(
    mesh: &SplitMesh,
    material: &Material,
    cells_per_row: usize,
) -> ElasticProblem {
    let n_dofs = 2 * mesh.node_count();
    let quad = quadrature(mesh.hx, mesh.hy);
    // Triplet assembly, then CSR.
    let mut triplets: Vec<(usize, usize, f64)> = Vec::new();
    let mut f = vec![0.0; n_dofs];
    let mut c0 = 0.0;
    for (ei, el) in mesh.elements.iter().enumerate() {
        let c = phase_voigt(mesh, material, ei);
        let e0 = resolve_e0(mesh, material, ei, cells_per_row);
        let mut ke = [[0.0; 8]; 8];
        let mut fe = [0.0; 8];
        for (b, w) in &quad.points {
            // cb = C * B
            let mut cb = [[0.0; 8]; 3];
            for i in 0..3 {
                for j in 0..8 {
                    cb[i][j] = (0..3).map(|k| c[i][k] * b[k][j]).sum();
                }
            }
            for i in 0..8 {
                for j in 0..8 {
                    ke[i][j] += w * (0..3).map(|k| b[k][i] * cb[k][j]).sum::<f64>();
                }
                fe[i] += w * (0..3).map(|k| cb[k][i] * e0[k]).sum::<f64>();
            }
            let ce0: Vec<f64> = (0..3).map(|i| (0..3).map(|k| c[i][k] * e0[k]).sum()).collect();
            c0 += w * (0..3).map(|i| ce0[i] * e0[i]).sum::<f64>();
        }
        let dofs: Vec<usize> = el
            .nodes
            .iter()
            .flat_map(|&n| [2 * n, 2 * n + 1])
            .collect();
        for i in 0..8 {
            f[dofs[i]] += fe[i];
            for j in 0..8 {
                if ke[i][j] != 0.0 {
                    triplets.push((dofs[i], dofs[j], ke[i][j]));
                }
            }
        }
    }
    triplets.sort_by_key(|t| (t.0, t.1));
    let mut row_ptr = vec![0usize; n_dofs + 1];
    let mut cols: Vec<usize> = Vec::new();
    let mut vals: Vec<f64> = Vec::new();
    let mut last: Option<(usize, usize)> = None;
    for (r, cidx, v) in triplets {
        if last == Some((r, cidx)) {
            *vals.last_mut().unwrap() += v;
        } else {
            cols.push(cidx);
            vals.push(v);
            last = Some((r, cidx));
        }
        row_ptr[r + 1] = cols.len();
    }
    for r in 0..n_dofs {
        if row_ptr[r + 1] < row_ptr[r] {
            row_ptr[r + 1] = row_ptr[r];
        }
    }
    let mut diag = vec![0.0; n_dofs];
    for r in 0..n_dofs {
        for k in row_ptr[r]..row_ptr[r + 1] {
            if cols[k] == r {
                diag[r] += vals[k];
            }
        }
    }

    // Rigid pinning: per component fix both dofs of the smallest node and the
    // vertical dof of the farthest-in-x node (two point constraints kill the
    // rotation since the x offsets differ).
    let mut constrained = vec![false; n_dofs];
    for comp in 0..mesh.component_count {
        let nodes: Vec<usize> = mesh.component_nodes(comp).collect();
        let a = nodes[0];
        constrained[2 * a] = true;
        constrained[2 * a + 1] = true;
        let ax = mesh.nodes[a].pos.0;
        let b = nodes
            .iter()
            .copied()
            .filter(|&n| (mesh.nodes[n].pos.0 - ax).abs() > 1e-12)
            .max_by(|&p, &q| {
                let dp = (mesh.nodes[p].pos.0 - ax).abs();
                let dq = (mesh.nodes[q].pos.0 - ax).abs();
                dp.partial_cmp(&dq).unwrap().then(q.cmp(&p))
            });
        if let Some(b) = b {
            constrained[2 * b + 1] = true;
        }
    }

    ElasticProblem {
        k: Csr {
            row_ptr,
            cols,
            vals,
            diag,
        },
        f,
        c0,
        constrained,
        n_dofs,
    }
}

impl ElasticProblem {
    fn project(&self, v: &mut [f64]) {
        for (i, &c) in self.constrained.iter().enumerate() {
            if c {
                v[i] = 0.0;
            }
        }
    }

    /// Preconditioned conjugate gradients on the pinned subspace.
    fn solve(&self, settings: SolveSettings) -> Result<Vec<f64>, ElasticityError> {
        let n = self.n_dofs;
        let mut u = vec![0.0; n];
        let mut r = self.f.clone();
        self.project(&mut r);
        let f_norm = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        if f_norm == 0.0 {
            return Ok(u);
        }
        let inv_diag: Vec<f64> = self
            .k
            .diag
            .iter()
            .map(|&d| if d > 0.0 { 1.0 / d } else { 0.0 })
            .collect();
        let mut z: Vec<f64> = r.iter().zip(&inv_diag).map(|(a, b)| a * b).collect();
        self.project(&mut z);
        let mut p = z.clone();
        let mut rz: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
        let mut kp = vec![0.0; n];
        for it in 0..settings.max_iterations {
            self.k.mul(&p, &mut kp);
            self.project(&mut kp);
            let pkp: f64 = p.iter().zip(&kp).map(|(a, b)| a * b).sum();
            if pkp <= 0.0 {
                return Err(ElasticityError::SolverStalled {
                    iterations: it,
                    residual: f64::NAN,
                });
            }
            let alpha = rz / pkp;
            for i in 0..n {
                u[i] += alpha * p[i];
                r[i] -= alpha * kp[i];
            }
            let res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
            if res <= settings.rel_tolerance * f_norm {
                return Ok(u);
            }
            for i in 0..n {
                z[i] = r[i] * inv_diag[i];
            }
            self.project(&mut z);
            let rz_next: f64 = r.iter().zip(&z).map(|(a, b)| a * b).sum();
            let beta = rz_next / rz;
            rz = rz_next;
            for i in 0..n {
                p[i] = z[i] + beta * p[i];
            }
        }
        let res = r.iter().map(|v| v * v).sum::<f64>().sqrt();
        Err(ElasticityError::SolverStalled {
            iterations: settings.max_iterations,
            residual: res / f_norm,
        })
    }

    /// `W(u)` from the assembled quadratic model.
    fn energy(&self, u: &[f64]) -> f64 {
        let mut ku = vec![0.0; self.n_dofs];
        self.k.mul(u, &mut ku);
        let uku: f64 = u.iter().zip(&ku).map(|(a, b)| a * b).sum();
        let fu: f64 = self.f.iter().zip(u).map(|(a, b)| a * b).sum();
        uku - 2.0 * fu + self.c0
    }

    /// Gradient `∇W(u) = 2 (K u - f)` on the full dof set.
    fn gradient(&self, u: &[f64]) -> Vec<f64> {
        let mut ku = vec![0.0; self.n_dofs];
        self.k.mul(u, &mut ku);
        ku.iter().zip(&self.f).map(|(a, b)| 2.0 * (a - b)).collect()
    }
}

/// Minimizes the discrete elastic energy over the mesh of `cfg`.
pub fn solve_equilibrium(
    cfg: &Configuration,
    mesh: &SplitMesh,
    material: &Material,
) -> Result<DisplacementField, ElasticityError> {
    solve_equilibrium_with(cfg, mesh, material, SolveSettings::default())
}

pub fn solve_equilibrium_with(
    cfg: &Configuration,
    mesh: &SplitMesh,
    material: &Material,
    settings: SolveSettings,
) -> Result<DisplacementField, ElasticityError> {
    let problem = assemble(mesh, material, cfg.grid.nx);
    let u = problem.solve(settings)?;
    debug_assert!(
        problem.energy(&u) >= -1e-9 * problem.c0.abs().max(1.0),
        "equilibrium energy must stay nonnegative"
    );
    Ok(DisplacementField::from_flat(&u))
}

/// Elastic energy of a displacement on the mesh of `cfg`.
pub fn elastic_energy(
    cfg: &Configuration,
    u: &DisplacementField,
    material: &Material,
) -> Result<f64, ElasticityError> {
    let mesh = crate::elasticity::build_mesh(cfg);
    elastic_energy_on_mesh(cfg, &mesh, u, material)
}

/// Elastic energy evaluated element-by-element with 2x2 Gauss quadrature;
/// an independent path from the assembled quadratic model.
pub fn elastic_energy_on_mesh(
    cfg: &Configuration,
    mesh: &SplitMesh,
    u: &DisplacementField,
    material: &Material,
) -> Result<f64, ElasticityError> {
    if u.values.len() != mesh.node_count() {
        return Err(ElasticityError::MeshMismatch {
            expected: mesh.node_count(),
            got: u.values.len(),
        });
    }
    let quad = quadrature(mesh.hx, mesh.hy);
    let mut w = 0.0;
    for (ei, el) in mesh.elements.iter().enumerate() {
        let c = phase_voigt(mesh, material, ei);
        let e0 = resolve_e0(mesh, material, ei, cfg.grid.nx);
        let mut ue = [0.0; 8];
        for (a, &n) in el.nodes.iter().enumerate() {
            ue[2 * a] = u.values[n].0;
            ue[2 * a + 1] = u.values[n].1;
        }
        for (b, wgt) in &quad.points {
            let mut eps = [0.0; 3];
            for i in 0..3 {
                eps[i] = (0..8).map(|j| b[i][j] * ue[j]).sum::<f64>() - e0[i];
            }
            let mut density = 0.0;
            for i in 0..3 {
                for k in 0..3 {
                    density += eps[i] * c[i][k] * eps[k];
                }
            }
            w += wgt * density;
        }
    }
    Ok(w)
}

/// Directional derivative of the discrete energy at `u` along `dir`.
pub fn energy_gradient(
    cfg: &Configuration,
    mesh: &SplitMesh,
    material: &Material,
    u: &DisplacementField,
    dir: &DisplacementField,
) -> f64 {
    let problem = assemble(mesh, material, cfg.grid.nx);
    let grad = problem.gradient(&u.as_flat());
    grad.iter().zip(dir.as_flat()).map(|(g, d)| g * d).sum()
}

/// Convenience: mesh, solve, and report `(u, W)` in one call.
pub fn relax(
    cfg: &Configuration,
    material: &Material,
) -> Result<(SplitMesh, DisplacementField, f64), ElasticityError> {
    let mesh = crate::elasticity::build_mesh(cfg);
    let u = solve_equilibrium(cfg, &mesh, material)?;
    let w = elastic_energy_on_mesh(cfg, &mesh, &u, material)?;
    Ok((mesh, u, w))
}
