//! Unit-speed geodesics from the origin in coordinates `(t, k, θ)`.

use std::f64::consts::TAU;

use crate::error::{invalid, Result};

use super::GroupPoint;

/// Below this `|ω|` the trigonometric ratios switch to their power series.
const SERIES_CUTOFF: f64 = 1.0;

/// Arc length `t`, curvature parameter `k` and launch angle `theta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeodesicCoord {
    pub t: f64,
    pub k: f64,
    pub theta: f64,
}

impl GeodesicCoord {
    /// Validates `t ≥ 0` and `|k| t ≤ 2π`; `theta` is reduced to `[0, 2π)`.
    pub fn new(t: f64, k: f64, theta: f64) -> Result<Self> {
        if !(t.is_finite() && k.is_finite() && theta.is_finite()) {
            return invalid("geodesic coordinates must be finite");
        }
        if t < 0.0 {
            return invalid(format!("arc length must be non-negative, got {t}"));
        }
        if (k * t).abs() > TAU * (1.0 + 1e-12) {
            return invalid(format!("|k|·t = {} exceeds 2π", (k * t).abs()));
        }
        Ok(Self { t, k, theta: theta.rem_euclid(TAU) })
    }

    /// The turning angle `ω = k t`.
    pub fn omega(&self) -> f64 {
        self.k * self.t
    }
}

/// `sin(x) / x` with the removable singularity filled in.
pub(crate) fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0 * (1.0 - x2 / 42.0))
    } else {
        x.sin() / x
    }
}

/// `(ω − sin ω) / ω³`.
pub(crate) fn excess_ratio(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        // Σ_{n≥1} (−1)^{n+1} ω^{2n−2} / (2n+1)!
        let w2 = w * w;
        let mut term = 1.0 / 6.0;
        let mut sum = term;
        for n in 2..=10 {
            let n = n as f64;
            term *= -w2 / ((2.0 * n) * (2.0 * n + 1.0));
            sum += term;
        }
        sum
    } else {
        (w - w.sin()) / (w * w * w)
    }
}

/// `(ω sin ω − 2(1 − cos ω)) / ω⁴`, the Jacobian of the geodesic map divided by `t⁴`.
pub(crate) fn jacobian_ratio(w: f64) -> f64 {
    if w.abs() < SERIES_CUTOFF {
        // Σ_{m≥1} (−1)^m 2m ω^{2m−2} / (2m+2)!
        let w2 = w * w;
        let mut power = 1.0; // ω^{2m−2}
        let mut fact = 24.0; // (2m+2)!
        let mut sum = 0.0;
        for m in 1..=10 {
            let mf = m as f64;
            let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * 2.0 * mf * power / fact;
            power *= w2;
            fact *= (2.0 * mf + 3.0) * (2.0 * mf + 4.0);
        }
        sum
    } else {
        (w * w.sin() - 2.0 * (1.0 - w.cos())) / (w * w * w * w)
    }
}

/// The point reached by the geodesic with coordinates `g`.
///
/// Written as `t·sin(θ+ω/2)·sinc(ω/2)` etc., which equals the arc formula for
/// `k ≠ 0` and its limit `(t sin θ, t cos θ, 0)` for `k = 0` without cancellation.
pub fn geodesic_point(g: GeodesicCoord) -> GroupPoint {
    let t = g.t;
    let w = g.omega();
    let phase = g.theta + 0.5 * w;
    let s = t * sinc(0.5 * w);
    GroupPoint { x1: s * phase.sin(), x2: s * phase.cos(), x3: 0.5 * t * t * w * excess_ratio(w) }
}

/// Determinant of the geodesic map, `(kt sin kt − 2(1 − cos kt)) / k⁴`.
///
/// Independent of θ; non-positive on `0 ≤ kt ≤ 2π` with limit `−t⁴/12` as `k → 0`.
pub fn geodesic_jacobian(g: GeodesicCoord) -> f64 {
    let t2 = g.t * g.t;
    t2 * t2 * jacobian_ratio(g.omega())
}
