//! Finite-difference discretization of the Dirichlet form `∫ |X1 u|² + |X2 u|²`
//! on voxel grids and its lowest eigenvalues.

mod eigen;
mod form;
mod spectrum;

pub use form::SparseForm;
pub use spectrum::{
    domain_spectrum, lowest_eigenvalues, refine_study, GridId, RefinementStudy, Spectrum, DEFAULT_EIGEN_TOL,
};
