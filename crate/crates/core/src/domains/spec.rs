use std::f64::consts::PI;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::hgeom::{ball_height, cc_ball_volume, cc_distance, dilate, GroupPoint};

/// An open bounded domain of the Heisenberg group.
///
/// Serialized as `{"type":"box","min":[..],"max":[..]}`,
/// `{"type":"euclidean_ball","center":[..],"radius":r}` or
/// `{"type":"cc_ball","center":[..],"radius":r}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainSpec {
    Box { min: [f64; 3], max: [f64; 3] },
    EuclideanBall { center: [f64; 3], radius: f64 },
    CcBall { center: [f64; 3], radius: f64 },
}

impl DomainSpec {
    pub fn unit_box() -> Self {
        DomainSpec::Box { min: [0.0; 3], max: [1.0; 3] }
    }

    pub fn cc_ball(center: GroupPoint, radius: f64) -> Self {
        DomainSpec::CcBall { center: center.to_array(), radius }
    }

    pub fn euclidean_ball(center: GroupPoint, radius: f64) -> Self {
        DomainSpec::EuclideanBall { center: center.to_array(), radius }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: DomainSpec =
            serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("domain spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidArgument(format!("domain_file {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("domain spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            DomainSpec::Box { min, max } => {
                if min.iter().chain(&max).any(|v| !v.is_finite()) {
                    return invalid("box corners must be finite");
                }
                if (0..3).any(|i| min[i] >= max[i]) {
                    return invalid(format!("box needs min < max componentwise, got {min:?} / {max:?}"));
                }
            }
            DomainSpec::EuclideanBall { center, radius } | DomainSpec::CcBall { center, radius } => {
                if center.iter().any(|v| !v.is_finite()) {
                    return invalid("ball center must be finite");
                }
                if !(radius > 0.0) || !radius.is_finite() {
                    return invalid(format!("ball radius must be positive, got {radius}"));
                }
            }
        }
        Ok(())
    }

    /// Strict interior membership.
    pub fn contains(&self, p: GroupPoint) -> bool {
        match *self {
            DomainSpec::Box { min, max } => {
                let x = p.to_array();
                (0..3).all(|i| x[i] > min[i] && x[i] < max[i])
            }
            DomainSpec::EuclideanBall { center, radius } => {
                let x = p.to_array();
                let s: f64 = (0..3).map(|i| (x[i] - center[i]).powi(2)).sum();
                s < radius * radius
            }
            DomainSpec::CcBall { center, radius } => cc_distance(center.into(), p).map(|d| d < radius).unwrap_or(false),
        }
    }

    /// Axis-aligned box containing the closure of the domain.
    pub fn bounding_box(&self) -> ([f64; 3], [f64; 3]) {
        match *self {
            DomainSpec::Box { min, max } => (min, max),
            DomainSpec::EuclideanBall { center, radius } => (center.map(|c| c - radius), center.map(|c| c + radius)),
            DomainSpec::CcBall { center, radius } => {
                // c ⊞ q with q ∈ B_r: the twist term is at most ½ r |c'|
                let dz = ball_height(radius) + 0.5 * radius * center[0].hypot(center[1]);
                (
                    [center[0] - radius, center[1] - radius, center[2] - dz],
                    [center[0] + radius, center[1] + radius, center[2] + dz],
                )
            }
        }
    }

    /// Lebesgue volume of the domain.
    pub fn volume(&self) -> f64 {
        match *self {
            DomainSpec::Box { min, max } => (0..3).map(|i| max[i] - min[i]).product(),
            DomainSpec::EuclideanBall { radius, .. } => 4.0 / 3.0 * PI * radius.powi(3),
            DomainSpec::CcBall { radius, .. } => cc_ball_volume(radius),
        }
    }

    /// Image under the dilation `δ_r`, when it is again a domain of the same kind.
    pub fn dilated(&self, r: f64) -> Result<Self> {
        dilate(r, GroupPoint::ORIGIN)?;
        match *self {
            DomainSpec::Box { min, max } => Ok(DomainSpec::Box {
                min: [r * min[0], r * min[1], r * r * min[2]],
                max: [r * max[0], r * max[1], r * r * max[2]],
            }),
            DomainSpec::CcBall { center, radius } => {
                Ok(DomainSpec::CcBall { center: dilate(r, center.into())?.to_array(), radius: r * radius })
            }
            DomainSpec::EuclideanBall { .. } => {
                invalid("the dilation of a Euclidean ball is an ellipsoid, which is not representable")
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_schema_round_trip() {
        let text = r#"{"type":"box","min":[0,0,0],"max":[1,2,3]}"#;
        let spec = DomainSpec::from_json(text).unwrap();
        assert_eq!(spec, DomainSpec::Box { min: [0.0; 3], max: [1.0, 2.0, 3.0] });
        assert_eq!(DomainSpec::from_json(&spec.to_json()).unwrap(), spec);

        let ball = DomainSpec::from_json(r#"{"type":"cc_ball","center":[0,0,0],"radius":1}"#).unwrap();
        assert_eq!(ball, DomainSpec::cc_ball(GroupPoint::ORIGIN, 1.0));
        let e = DomainSpec::from_json(r#"{"type":"euclidean_ball","center":[1,0,0],"radius":0.5}"#).unwrap();
        assert!(matches!(e, DomainSpec::EuclideanBall { .. }));
        assert!(ball.to_json().contains(r#""type":"cc_ball""#));
    }

    #[test]
    fn rejects_malformed_specs() {
        assert!(DomainSpec::from_json(r#"{"type":"box","min":[0,0,0],"max":[1,0,1]}"#).is_err());
        assert!(DomainSpec::from_json(r#"{"type":"cc_ball","center":[0,0,0],"radius":-1}"#).is_err());
        assert!(DomainSpec::from_json(r#"{"type":"torus","radius":1}"#).is_err());
        assert!(DomainSpec::from_json(r#"{"type":"box","min":[0,0,0]}"#).is_err());
    }

    #[test]
    fn cc_ball_lies_in_bounding_box() {
        use crate::hgeom::{geodesic_point, group_multiply, GeodesicCoord};
        let c = GroupPoint::new(0.7, -0.4, 0.2);
        let spec = DomainSpec::cc_ball(c, 0.8);
        let (lo, hi) = spec.bounding_box();
        for i in 0..40 {
            for j in 0..40 {
                let w = std::f64::consts::TAU * (i as f64 + 0.5) / 40.0;
                let th = std::f64::consts::TAU * j as f64 / 40.0;
                let q = geodesic_point(GeodesicCoord::new(0.8, w / 0.8, th).unwrap());
                let x = group_multiply(c, q).to_array();
                assert!((0..3).all(|a| x[a] >= lo[a] - 1e-12 && x[a] <= hi[a] + 1e-12));
            }
        }
    }

    #[test]
    fn dilation_of_box_and_ball() {
        let b = DomainSpec::unit_box().dilated(2.0).unwrap();
        assert_eq!(b, DomainSpec::Box { min: [0.0; 3], max: [2.0, 2.0, 4.0] });
        assert_eq!(b.volume(), 16.0);
        let c = DomainSpec::cc_ball(GroupPoint::new(1.0, 0.0, 1.0), 0.5).dilated(3.0).unwrap();
        assert_eq!(c, DomainSpec::cc_ball(GroupPoint::new(3.0, 0.0, 9.0), 1.5));
        assert!(DomainSpec::euclidean_ball(GroupPoint::ORIGIN, 1.0).dilated(2.0).is_err());
    }
}
