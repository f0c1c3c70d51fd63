//! Generators for the benchmark problems.

use super::assemble::{assemble, AssembledProblem, BoundaryConditions};
use super::mesh::Mesh;
use super::tensor::MaterialTensor;
use crate::error::{AmgError, Result};

/// Inner radius, outer radius and thickness of the annulus benchmark.
pub const ANNULUS_GEOMETRY: (f64, f64, f64) = (0.5, 1.0, 0.1);

/// Tensor of the two-domain problem at a point: identity left of `x = 0`,
/// `diag(kappa, 1)` from `x = 0` on.
pub fn two_domain_tensor(x: f64, kappa: f64) -> MaterialTensor {
    if x < 0.0 {
        MaterialTensor::identity(2)
    } else {
        MaterialTensor::diagonal(&[kappa, 1.0])
    }
}

/// Two-domain problem on `(-1,1)^2` with `n_per_dir` elements per side,
/// homogeneous Dirichlet data on the whole boundary and unit source.
pub fn two_domain_problem(n_per_dir: usize, kappa: f64) -> Result<AssembledProblem> {
    if n_per_dir < 2 {
        return Err(AmgError::InvalidConfig(format!("n_per_dir must be >= 2, got {n_per_dir}")));
    }
    if !(kappa >= 1.0) {
        return Err(AmgError::InvalidConfig(format!("kappa must be >= 1, got {kappa}")));
    }
    let mesh = Mesh::rectangle(n_per_dir, n_per_dir, [-1.0, 1.0], [-1.0, 1.0]);
    let mats: Vec<_> = (0..mesh.n_elements()).map(|e| two_domain_tensor(mesh.centroid(e)[0], kappa)).collect();
    let bc = BoundaryConditions::from_fn(&mesh, |_, x| {
        let on_edge = x[0] == -1.0 || x[0] == 1.0 || x[1] == -1.0 || x[1] == 1.0;
        on_edge.then_some(0.0)
    });
    assemble(&mesh, &mats, &bc, 1.0)
}

/// Orthogonal frame at `(x, y)` whose first row is the circumferential
/// direction and second row the radial direction.
pub fn annulus_frame(x: f64, y: f64) -> [[f64; 3]; 3] {
    let r = x.hypot(y);
    [[-y / r, x / r, 0.0], [x / r, y / r, 0.0], [0.0, 0.0, 1.0]]
}

/// Tensor with conductivity `kappa` along the circumferential direction and
/// 1 radially and through the thickness.
pub fn annulus_tensor(x: f64, y: f64, kappa: f64) -> MaterialTensor {
    MaterialTensor::rotated(3, annulus_frame(x, y), [kappa, 1.0, 1.0])
}

/// Hexahedral annulus with `u = 1` on the inner and `u = 0` on the outer
/// radius, natural conditions on the flat faces and unit source.
pub fn annulus_problem(n_r: usize, n_t: usize, n_z: usize, kappa: f64) -> Result<AssembledProblem> {
    if n_r < 1 || n_t < 3 || n_z < 1 {
        return Err(AmgError::InvalidConfig(format!("invalid annulus mesh {n_r}x{n_t}x{n_z}")));
    }
    if !(kappa > 0.0) {
        return Err(AmgError::InvalidConfig(format!("kappa must be positive, got {kappa}")));
    }
    let (ri, ro, t) = ANNULUS_GEOMETRY;
    let mesh = Mesh::annulus(n_r, n_t, n_z, ri, ro, t);
    let mats: Vec<_> = (0..mesh.n_elements())
        .map(|e| {
            let c = mesh.centroid(e);
            annulus_tensor(c[0], c[1], kappa)
        })
        .collect();
    let bc = BoundaryConditions::from_fn(&mesh, |i, _| match i % (n_r + 1) {
        0 => Some(1.0),
        k if k == n_r => Some(0.0),
        _ => None,
    });
    assemble(&mesh, &mats, &bc, 1.0)
}

/// Layered strip on the unit square: `n_layers` horizontal bands of
/// `n_y_per_layer` element rows each, cycling through `conductivities`.
/// Homogeneous Dirichlet on top and bottom.
pub fn layered_stack_problem(
    n_layers: usize,
    n_x: usize,
    n_y_per_layer: usize,
    conductivities: &[f64],
) -> Result<AssembledProblem> {
    if n_layers == 0 || n_x == 0 || n_y_per_layer == 0 || conductivities.is_empty() {
        return Err(AmgError::InvalidConfig("layered stack needs at least one layer, element and material".into()));
    }
    if let Some(c) = conductivities.iter().find(|c| !(**c > 0.0)) {
        return Err(AmgError::NotSpd(format!("conductivity {c}")));
    }
    let ny = n_layers * n_y_per_layer;
    let mesh = Mesh::rectangle(n_x, ny, [0.0, 1.0], [0.0, 1.0]);
    let mats: Vec<_> = (0..mesh.n_elements())
        .map(|e| {
            let layer = (e / n_x) / n_y_per_layer;
            MaterialTensor::isotropic(2, conductivities[layer % conductivities.len()])
        })
        .collect();
    let bc = BoundaryConditions::from_fn(&mesh, |_, x| (x[1] == 0.0 || x[1] == 1.0).then_some(0.0));
    assemble(&mesh, &mats, &bc, 1.0)
}
