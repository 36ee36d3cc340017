use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// A point `(x1, x2, x3)` of the first Heisenberg group.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct GroupPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl GroupPoint {
    pub const ORIGIN: GroupPoint = GroupPoint { x1: 0.0, x2: 0.0, x3: 0.0 };

    pub const fn new(x1: f64, x2: f64, x3: f64) -> Self {
        Self { x1, x2, x3 }
    }

    pub fn is_finite(&self) -> bool {
        self.x1.is_finite() && self.x2.is_finite() && self.x3.is_finite()
    }

    /// Euclidean length of the horizontal projection `(x1, x2)`.
    pub fn horizontal_norm(&self) -> f64 {
        self.x1.hypot(self.x2)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.x1, self.x2, self.x3]
    }
}

impl From<[f64; 3]> for GroupPoint {
    fn from(a: [f64; 3]) -> Self {
        Self::new(a[0], a[1], a[2])
    }
}

impl From<GroupPoint> for [f64; 3] {
    fn from(p: GroupPoint) -> Self {
        p.to_array()
    }
}

/// `a ⊞ b = (a1+b1, a2+b2, a3+b3 − ½(a1 b2 − a2 b1))`.
pub fn group_multiply(a: GroupPoint, b: GroupPoint) -> GroupPoint {
    GroupPoint { x1: a.x1 + b.x1, x2: a.x2 + b.x2, x3: a.x3 + b.x3 - 0.5 * (a.x1 * b.x2 - a.x2 * b.x1) }
}

/// The inverse is coordinatewise negation.
pub fn group_inverse(a: GroupPoint) -> GroupPoint {
    GroupPoint { x1: -a.x1, x2: -a.x2, x3: -a.x3 }
}

/// Anisotropic dilation `(r x1, r x2, r² x3)`; a group automorphism for `r > 0`.
pub fn dilate(r: f64, a: GroupPoint) -> Result<GroupPoint> {
    if !(r > 0.0) || !r.is_finite() {
        return invalid(format!("dilation factor must be positive, got {r}"));
    }
    Ok(GroupPoint { x1: r * a.x1, x2: r * a.x2, x3: r * r * a.x3 })
}

impl Mul for GroupPoint {
    type Output = GroupPoint;

    fn mul(self, rhs: GroupPoint) -> GroupPoint {
        group_multiply(self, rhs)
    }
}
