//! Structured finite element discretisations of `-div(sigma grad u) = f`.

mod assemble;
mod export;
mod mesh;
mod problems;
mod tensor;

pub use assemble::{assemble, element_matrices, nodal_material_average, AssembledProblem, BoundaryConditions};
pub use export::{write_coords_csv, write_dirichlet_csv, write_materials_csv};
pub use mesh::Mesh;
pub use problems::{
    annulus_frame, annulus_problem, annulus_tensor, layered_stack_problem, two_domain_problem, two_domain_tensor,
    ANNULUS_GEOMETRY,
};
pub use tensor::MaterialTensor;
