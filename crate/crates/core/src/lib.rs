//! Carnot-Carathéodory geometry on the first Heisenberg group and numerical
//! verification of Melas-type bounds for the Dirichlet Heisenberg Laplacian.
//!
//! The crate is split along the data flow:
//!
//! * [`hgeom`]: group law, geodesics, the C-C distance and ball volumes.
//! * [`domains`]: bounded domains, voxelization, boundary distance, in-radius,
//!   tube volumes and σ(Ω).
//! * [`spectral`]: discretization of the Heisenberg Laplacian quadratic form and
//!   the lowest Dirichlet eigenvalues.
//! * [`bounds`]: Riesz means and every explicit bound, collected in a
//!   [`bounds::BoundReport`].

// `!(x > 0.0)` is used on purpose so that NaN inputs are rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod domains;
mod error;
pub mod fmt;
pub mod hgeom;
pub mod quadrature;
pub mod spectral;

pub use error::{Error, Result};
pub use hgeom::{GeodesicCoord, GroupPoint};
