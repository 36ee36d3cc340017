//! The Carnot-Carathéodory distance, obtained by inverting the geodesic map.
//!
//! A point with horizontal radius `r > 0` and height `z` is reached by a
//! geodesic of turning angle `ω ∈ [0, 2π)` solving `μ(ω) = |z| / r²` with
//!
//! ```text
//! μ(ω) = (ω − sin ω) / (8 sin²(ω/2))
//! ```
//!
//! and then `d = ω r / (2 sin(ω/2))`. Points on the `x3`-axis are reached at
//! `ω = 2π`, where `d = 2√(π|z|)`.

use std::f64::consts::{PI, TAU};
use std::sync::OnceLock;

use crate::error::{invalid, Error, Result};

use super::geodesic::{excess_ratio, sinc};
use super::{group_inverse, group_multiply, GroupPoint};

const MAX_ITERATIONS: usize = 200;

/// Points with `r ≤ AXIS_RATIO·√|z|` are treated as lying on the cut locus.
/// The ratio is dilation invariant.
const AXIS_RATIO: f64 = 1e-12;

/// `μ(ω) = ω (ω − sin ω)/ω³ / (2 sinc²(ω/2))`, free of cancellation near 0.
pub fn mu(w: f64) -> f64 {
    let s = sinc(0.5 * w);
    w * excess_ratio(w) / (2.0 * s * s)
}

fn mu_derivative(w: f64) -> f64 {
    if w < 1e-3 {
        return 1.0 / 12.0 + w * w / 120.0;
    }
    let s = (0.5 * w).sin();
    0.25 - (w - w.sin()) * w.sin() / (16.0 * s * s * s * s)
}

/// Checks that `μ` is strictly increasing on an `n`-point grid of `(0, 2π)`.
pub fn mu_is_monotone(n: usize) -> bool {
    let mut prev = 0.0;
    (1..n).all(|i| {
        let v = mu(TAU * i as f64 / n as f64);
        let ok = v > prev;
        prev = v;
        ok
    })
}

fn mu_verified() -> bool {
    static CHECK: OnceLock<bool> = OnceLock::new();
    *CHECK.get_or_init(|| mu_is_monotone(10_000))
}

/// Solves `μ(ω) = target` on `(0, 2π)`.
///
/// Newton steps are kept inside a bisection bracket, so the iteration always
/// converges; the loop ends once the bracket is below `1e-12` and the last
/// Newton correction has reached rounding level.
pub fn solve_turning_angle(target: f64) -> Result<f64> {
    if !(target >= 0.0) || !target.is_finite() {
        return invalid(format!("turning-angle target must be finite and non-negative, got {target}"));
    }
    if target == 0.0 {
        return Ok(0.0);
    }
    if !mu_verified() {
        return Err(Error::NumericalFailure {
            message: "μ(ω) failed its monotonicity check".into(),
            residual: f64::NAN,
        });
    }
    let (mut lo, mut hi) = (0.0_f64, TAU);
    let mut w = if target < 0.25 { 12.0 * target } else { (TAU - (PI / target).sqrt()).clamp(0.5, TAU - 1e-12) };
    w = w.clamp(lo, hi);
    let mut last_step = f64::INFINITY;
    for _ in 0..MAX_ITERATIONS {
        let f = mu(w) - target;
        if f == 0.0 {
            return Ok(w);
        }
        if f > 0.0 {
            hi = w;
        } else {
            lo = w;
        }
        let d = mu_derivative(w);
        let newton = w - f / d;
        let next = if d > 0.0 && newton > lo && newton < hi && (newton - w).abs() < 0.5 * last_step.max(hi - lo) {
            newton
        } else {
            0.5 * (lo + hi)
        };
        last_step = (next - w).abs();
        w = next;
        if hi - lo < 1e-12 && last_step <= 4.0 * f64::EPSILON * w.max(f64::MIN_POSITIVE) {
            return Ok(w);
        }
        if last_step <= 2.0 * f64::EPSILON * w.max(f64::MIN_POSITIVE) {
            return Ok(w);
        }
    }
    Err(Error::NumericalFailure {
        message: format!("turning-angle solve did not converge for μ = {target}"),
        residual: mu(w) - target,
    })
}

/// `d(p, 0)`.
pub fn cc_distance_origin(p: GroupPoint) -> Result<f64> {
    if !p.is_finite() {
        return invalid(format!("non-finite point {:?}", p.to_array()));
    }
    let r = p.horizontal_norm();
    let z = p.x3.abs();
    if z == 0.0 {
        return Ok(r);
    }
    if r <= AXIS_RATIO * z.sqrt() {
        return Ok(2.0 * (PI * z).sqrt());
    }
    let w = solve_turning_angle(z / (r * r))?;
    Ok(r / sinc(0.5 * w))
}

/// `d(a, b) = d(0, a⁻¹ ⊞ b)` by left invariance.
pub fn cc_distance(a: GroupPoint, b: GroupPoint) -> Result<f64> {
    cc_distance_origin(group_multiply(group_inverse(a), b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hgeom::{dilate, geodesic_point, GeodesicCoord};
    use proptest::prelude::*;

    #[test]
    fn mu_is_increasing_and_matches_definition() {
        assert!(mu_is_monotone(10_000));
        for &w in &[0.3, 1.0, 2.5, 5.0, 6.2] {
            let raw = (w - f64::sin(w)) / (8.0 * (0.5 * w).sin().powi(2));
            assert!((mu(w) - raw).abs() < 1e-13 * raw);
        }
        assert!((mu(1e-6) - 1e-6 / 12.0).abs() < 1e-18);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        for &w in &[0.01, 0.5, 2.0, 4.0, 6.0] {
            let h = 1e-6;
            let fd = (mu(w + h) - mu(w - h)) / (2.0 * h);
            assert!((mu_derivative(w) - fd).abs() < 1e-6 * fd.max(1.0), "{w}");
        }
    }

    #[test]
    fn distance_examples() {
        assert_eq!(cc_distance_origin(GroupPoint::new(1.0, 0.0, 0.0)).unwrap(), 1.0);
        let axis = cc_distance_origin(GroupPoint::new(0.0, 0.0, 1.0)).unwrap();
        assert!((axis - 2.0 * PI.sqrt()).abs() < 1e-15);
        assert!((axis - 3.5449077).abs() < 1e-7);
        let d = cc_distance_origin(GroupPoint::new(2.0, 0.0, std::f64::consts::FRAC_PI_2)).unwrap();
        assert!((d - PI).abs() < 1e-13);
        assert_eq!(cc_distance_origin(GroupPoint::ORIGIN).unwrap(), 0.0);
    }

    #[test]
    fn axis_distance_matches_brute_force_arc_search() {
        // Minimize arc length over geodesics landing on (0, 0, z): only kt = 2π
        // closes the horizontal loop, so scan t and solve k t = 2π.
        let z = 1.0;
        let mut best = f64::INFINITY;
        for i in 1..=20_000 {
            let t = 5.0 * i as f64 / 20_000.0;
            let k = TAU / t;
            let p = geodesic_point(GeodesicCoord::new(t, k, 0.3).unwrap());
            if (p.x3 - z).abs() < 2e-4 && p.horizontal_norm() < 1e-9 {
                best = best.min(t);
            }
        }
        assert!((best - 2.0 * PI.sqrt()).abs() < 1e-3, "{best}");
    }

    #[test]
    fn rejects_non_finite_points() {
        assert!(matches!(cc_distance_origin(GroupPoint::new(f64::NAN, 0.0, 0.0)), Err(Error::InvalidArgument(_))));
        assert!(cc_distance_origin(GroupPoint::new(0.0, f64::INFINITY, 0.0)).is_err());
    }

    #[test]
    fn round_trip_near_cut_time() {
        for &w in &[1e-12, 1e-6, 0.05, 3.0, TAU - 0.05, TAU - 1e-3] {
            for &t in &[0.1, 1.0, 7.0] {
                let p = geodesic_point(GeodesicCoord::new(t, w / t, 1.1).unwrap());
                let d = cc_distance_origin(p).unwrap();
                assert!((d - t).abs() <= 1e-8 * t.max(1.0), "ω={w} t={t} d={d}");
            }
        }
    }

    fn coord() -> impl Strategy<Value = f64> {
        -2.0..2.0f64
    }

    fn point() -> impl Strategy<Value = GroupPoint> {
        (coord(), coord(), coord()).prop_map(|(a, b, c)| GroupPoint::new(a, b, c))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(500))]

        #[test]
        fn symmetric_and_triangle(x in point(), y in point(), z in point()) {
            let dxy = cc_distance(x, y).unwrap();
            let dyx = cc_distance(y, x).unwrap();
            prop_assert!((dxy - dyx).abs() <= 1e-9 * dxy.max(1.0));
            let dxz = cc_distance(x, z).unwrap();
            let dzy = cc_distance(z, y).unwrap();
            prop_assert!(dxy <= dxz + dzy + 1e-9);
        }

        #[test]
        fn left_invariant(x in point(), y in point(), z in point()) {
            let d = cc_distance(x, y).unwrap();
            let dt = cc_distance(z * x, z * y).unwrap();
            prop_assert!((d - dt).abs() <= 1e-8);
        }

        #[test]
        fn dilation_homogeneous(x in point(), y in point(), r in 0.1..10.0f64) {
            let d = cc_distance(x, y).unwrap();
            let dr = cc_distance(dilate(r, x).unwrap(), dilate(r, y).unwrap()).unwrap();
            prop_assert!((dr - r * d).abs() <= 1e-8 * r);
        }

        #[test]
        fn bounded_below_by_horizontal_length(x in point()) {
            let d = cc_distance_origin(x).unwrap();
            prop_assert!(d + 1e-15 >= x.horizontal_norm());
        }

        #[test]
        fn inverts_geodesic_map(t in 0.01..5.0f64, w in 1e-6..(TAU - 0.01), sign in prop::bool::ANY, th in 0.0..TAU) {
            let k = if sign { w / t } else { -w / t };
            let p = geodesic_point(GeodesicCoord::new(t, k, th).unwrap());
            let d = cc_distance_origin(p).unwrap();
            prop_assert!((d - t).abs() <= 1e-8);
        }
    }
}
