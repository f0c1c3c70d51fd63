use super::mesh::Mesh;
use super::tensor::{invert_small, MaterialTensor};
use crate::error::{AmgError, Result};
use crate::soc::AuxiliaryData;
use crate::sparse::CsrMatrix;

/// Reference-element corner signs, in connectivity order.
const QUAD: [[f64; 3]; 4] = [[-1.0, -1.0, 0.0], [1.0, -1.0, 0.0], [1.0, 1.0, 0.0], [-1.0, 1.0, 0.0]];
const HEX: [[f64; 3]; 8] = [
    [-1.0, -1.0, -1.0],
    [1.0, -1.0, -1.0],
    [1.0, 1.0, -1.0],
    [-1.0, 1.0, -1.0],
    [-1.0, -1.0, 1.0],
    [1.0, -1.0, 1.0],
    [1.0, 1.0, 1.0],
    [-1.0, 1.0, 1.0],
];

/// Per-node Dirichlet data; `None` marks a free node.
#[derive(Debug, Clone)]
pub struct BoundaryConditions {
    pub dirichlet: Vec<Option<f64>>,
}

impl BoundaryConditions {
    pub fn none(n_nodes: usize) -> Self {
        Self { dirichlet: vec![None; n_nodes] }
    }

    pub fn from_fn(mesh: &Mesh, f: impl Fn(usize, &[f64; 3]) -> Option<f64>) -> Self {
        Self { dirichlet: mesh.coords.iter().enumerate().map(|(i, x)| f(i, x)).collect() }
    }
}

/// Linear system with the auxiliary data the strength measures need.
#[derive(Debug, Clone)]
pub struct AssembledProblem {
    pub matrix: CsrMatrix,
    pub rhs: Vec<f64>,
    pub coords: Vec<[f64; 3]>,
    pub node_materials: Vec<MaterialTensor>,
    pub dirichlet: Vec<bool>,
    pub dim: usize,
}

impl AssembledProblem {
    pub fn n(&self) -> usize {
        self.matrix.n_rows()
    }

    pub fn auxiliary(&self) -> AuxiliaryData {
        AuxiliaryData { coords: self.coords.clone(), materials: self.node_materials.clone() }
    }
}

fn corners(dim: usize) -> &'static [[f64; 3]] {
    if dim == 2 {
        &QUAD
    } else {
        &HEX
    }
}

fn shape(dim: usize, xi: &[f64; 3]) -> (Vec<f64>, Vec<[f64; 3]>) {
    let c = corners(dim);
    let scale = 0.5f64.powi(dim as i32);
    let mut n = Vec::with_capacity(c.len());
    let mut dn = Vec::with_capacity(c.len());
    for s in c {
        let f: [f64; 3] = std::array::from_fn(|k| if k < dim { 1.0 + s[k] * xi[k] } else { 1.0 });
        n.push(scale * f[0] * f[1] * f[2]);
        let mut g = [0.0; 3];
        for k in 0..dim {
            let mut p = scale * s[k];
            for (l, fl) in f.iter().enumerate().take(dim) {
                if l != k {
                    p *= fl;
                }
            }
            g[k] = p;
        }
        dn.push(g);
    }
    (n, dn)
}

fn gauss_points(dim: usize) -> Vec<[f64; 3]> {
    let g = 1.0 / 3f64.sqrt();
    corners(dim).iter().map(|c| c.map(|s| s * g)).collect()
}

/// Stiffness `k_ab = int (sigma grad N_a) . grad N_b` and consistent load
/// `f_a = int N_a` of one element, by 2^dim-point Gauss quadrature.
pub fn element_matrices(dim: usize, nodes: &[[f64; 3]], sigma: &MaterialTensor) -> Option<(Vec<Vec<f64>>, Vec<f64>)> {
    let nn = nodes.len();
    let mut k = vec![vec![0.0; nn]; nn];
    let mut f = vec![0.0; nn];
    for qp in gauss_points(dim) {
        let (n, dn) = shape(dim, &qp);
        // J_ij = d x_i / d xi_j
        let mut jac = [[0.0; 3]; 3];
        for (x, g) in nodes.iter().zip(&dn) {
            for i in 0..dim {
                for j in 0..dim {
                    jac[i][j] += x[i] * g[j];
                }
            }
        }
        let (inv, det) = invert_small(dim, &jac)?;
        if det <= 0.0 {
            return None;
        }
        // grad N_a = J^{-T} dN_a/dxi
        let grads: Vec<[f64; 3]> = dn
            .iter()
            .map(|g| {
                let mut out = [0.0; 3];
                for (i, o) in out.iter_mut().enumerate().take(dim) {
                    for j in 0..dim {
                        *o += inv[j][i] * g[j];
                    }
                }
                out
            })
            .collect();
        let flux: Vec<[f64; 3]> = grads.iter().map(|g| sigma.apply(g)).collect();
        for a in 0..nn {
            f[a] += n[a] * det;
            for b in 0..nn {
                let mut s = 0.0;
                for d in 0..dim {
                    s += flux[a][d] * grads[b][d];
                }
                k[a][b] += s * det;
            }
        }
    }
    // the integrand is symmetric; remove quadrature round-off asymmetry
    for a in 0..nn {
        for b in a + 1..nn {
            let s = 0.5 * (k[a][b] + k[b][a]);
            k[a][b] = s;
            k[b][a] = s;
        }
    }
    Some((k, f))
}

/// Unweighted mean of the tensors of all elements containing each node.
pub fn nodal_material_average(mesh: &Mesh, element_material: &[MaterialTensor]) -> Result<Vec<MaterialTensor>> {
    if element_material.len() != mesh.n_elements() {
        return Err(AmgError::DimensionMismatch { expected: mesh.n_elements(), actual: element_material.len() });
    }
    mesh.node_patches()
        .iter()
        .enumerate()
        .map(|(node, patch)| {
            MaterialTensor::mean(patch.iter().map(|&e| &element_material[e])).ok_or(AmgError::IsolatedNode { node })
        })
        .collect()
}

/// Assembles `-div(sigma grad u) = source` on `mesh` with element-constant
/// tensors, then applies Dirichlet data by symmetric elimination: Dirichlet
/// rows become unit rows and their columns are moved to the right-hand side.
pub fn assemble(
    mesh: &Mesh,
    element_material: &[MaterialTensor],
    bc: &BoundaryConditions,
    source: f64,
) -> Result<AssembledProblem> {
    let n = mesh.n_nodes();
    if element_material.len() != mesh.n_elements() {
        return Err(AmgError::DimensionMismatch { expected: mesh.n_elements(), actual: element_material.len() });
    }
    if bc.dirichlet.len() != n {
        return Err(AmgError::DimensionMismatch { expected: n, actual: bc.dirichlet.len() });
    }
    for t in element_material {
        t.check_spd()?;
        if t.dim() != mesh.dim {
            return Err(AmgError::NotSpd(format!("tensor dimension {} on a {}D mesh", t.dim(), mesh.dim)));
        }
    }
    let node_materials = nodal_material_average(mesh, element_material)?;

    let npe = 1usize << mesh.dim;
    let mut triplets = Vec::with_capacity(mesh.n_elements() * npe * npe);
    let mut load = vec![0.0; n];
    for (e, nodes) in mesh.elements.iter().enumerate() {
        let xs: Vec<[f64; 3]> = nodes.iter().map(|&i| mesh.coords[i]).collect();
        let (k, f) = element_matrices(mesh.dim, &xs, &element_material[e]).ok_or(AmgError::DegenerateElement { element: e })?;
        for (a, &ia) in nodes.iter().enumerate() {
            load[ia] += source * f[a];
            for (b, &ib) in nodes.iter().enumerate() {
                triplets.push((ia, ib, k[a][b]));
            }
        }
    }
    let full = CsrMatrix::from_triplets(n, n, &triplets)?;

    let mut rows = Vec::with_capacity(n);
    let mut rhs = load;
    for i in 0..n {
        if let Some(g) = bc.dirichlet[i] {
            rows.push(vec![(i, 1.0)]);
            rhs[i] = g;
            continue;
        }
        let (cols, vals) = full.row(i);
        let mut row = Vec::with_capacity(cols.len());
        for (&j, &v) in cols.iter().zip(vals) {
            match bc.dirichlet[j] {
                Some(g) => rhs[i] -= v * g,
                None => row.push((j, v)),
            }
        }
        rows.push(row);
    }
    let matrix = CsrMatrix::from_sorted_rows(n, n, rows);

    Ok(AssembledProblem {
        matrix,
        rhs,
        coords: mesh.coords.clone(),
        node_materials,
        dirichlet: bc.dirichlet.iter().map(Option::is_some).collect(),
        dim: mesh.dim,
    })
}
