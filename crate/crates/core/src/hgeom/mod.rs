//! Geometry of the first Heisenberg group with its Carnot-Carathéodory metric.

mod distance;
mod geodesic;
mod point;
mod volume;

pub use distance::{cc_distance, cc_distance_origin, mu, mu_is_monotone, solve_turning_angle};
pub use geodesic::{geodesic_jacobian, geodesic_point, GeodesicCoord};
pub use point::{dilate, group_inverse, group_multiply, GroupPoint};
pub use volume::{ball_height, cc_ball_volume, mc_ball_volume, unit_ball_volume, unit_ball_volume_constant, CCMetrics};
