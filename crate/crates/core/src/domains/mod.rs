//! Bounded domains and the C-C functionals built on the boundary distance:
//! `d(x)`, the in-radius `R(Ω)`, inner tubes `Ω^β` and `σ(Ω)`.

mod boundary;
mod metrics;
mod optim;
mod spec;
mod voxel;

pub use boundary::{boundary_distance, DEFAULT_BOUNDARY_SAMPLES};
pub use metrics::{
    eikonal_residual, in_radius, sigma, tube_volume, DistanceField, DomainMetrics, EikonalStats, SIGMA_GRID_RATIO,
};
pub use spec::DomainSpec;
pub use voxel::{voxelize, VoxelDomain};
