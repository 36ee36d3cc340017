//! Volume of the unit C-C ball by quadrature and by Monte Carlo rejection.

use std::f64::consts::TAU;
use std::sync::OnceLock;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quadrature::GaussLegendre;

use super::geodesic::jacobian_ratio;
use super::{cc_distance_origin, GroupPoint};

const GAUSS_NODES: usize = 8;
const MC_BATCH: usize = 4096;

/// Largest `|x3|` on `B_r(0)` is `r²/(2π)`, reached at turning angle `π`.
pub fn ball_height(r: f64) -> f64 {
    r * r / TAU
}

/// A ball-volume estimate together with its uncertainty.
///
/// For quadrature the uncertainty is the change against half the resolution;
/// for Monte Carlo it is the binomial standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CCMetrics {
    pub unit_ball_volume: f64,
    pub estimate_stderr: f64,
}

fn quadrature(panels: usize) -> f64 {
    let rule = GaussLegendre::new(GAUSS_NODES);
    // |det Φ| = t⁴ |J(ω)| with ω = kt, dk = dω/t; θ contributes 2π, ±ω a factor 2
    let radial = rule.integrate(0.0, 1.0, panels, |t| t * t * t);
    let angular = rule.integrate(0.0, TAU, panels, |w| -jacobian_ratio(w));
    TAU * 2.0 * radial * angular
}

/// `|B_1(0)|` from composite Gauss–Legendre quadrature over `(t, ω)`.
pub fn unit_ball_volume(quadrature_resolution: usize) -> Result<CCMetrics> {
    if quadrature_resolution < 16 {
        return invalid(format!("quadrature resolution must be at least 16, got {quadrature_resolution}"));
    }
    let fine = quadrature(quadrature_resolution);
    let coarse = quadrature(quadrature_resolution / 2);
    Ok(CCMetrics { unit_ball_volume: fine, estimate_stderr: (fine - coarse).abs() })
}

/// `|B_1(0)|` at resolution 128, computed once.
pub fn unit_ball_volume_constant() -> f64 {
    static VOLUME: OnceLock<f64> = OnceLock::new();
    *VOLUME.get_or_init(|| quadrature(128))
}

/// Rejection estimate of `|B_r(0)|` from `n_samples` uniform draws in its bounding box.
///
/// Samples are drawn in fixed batches of 4096, each from its own ChaCha stream
/// of `seed`, so the estimate does not depend on the number of worker threads.
pub fn mc_ball_volume(r: f64, n_samples: usize, seed: u64) -> Result<CCMetrics> {
    if !(r > 0.0) || !r.is_finite() {
        return invalid(format!("ball radius must be positive, got {r}"));
    }
    if n_samples < 10_000 {
        return invalid(format!("Monte Carlo needs at least 10^4 samples, got {n_samples}"));
    }
    let h = ball_height(r);
    let n_batches = n_samples.div_ceil(MC_BATCH);
    let hits = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(b as u64);
            let count = MC_BATCH.min(n_samples - b * MC_BATCH);
            let mut hits = 0usize;
            for _ in 0..count {
                let p = GroupPoint::new(rng.gen_range(-r..r), rng.gen_range(-r..r), rng.gen_range(-h..h));
                if p.horizontal_norm() >= r {
                    continue;
                }
                if cc_distance_origin(p)? < r {
                    hits += 1;
                }
            }
            Ok(hits)
        })
        .collect::<Result<Vec<usize>>>()?
        .into_iter()
        .sum::<usize>();
    let box_volume = 4.0 * r * r * 2.0 * h;
    let p = hits as f64 / n_samples as f64;
    Ok(CCMetrics {
        unit_ball_volume: box_volume * p,
        estimate_stderr: box_volume * (p * (1.0 - p) / n_samples as f64).sqrt(),
    })
}

/// Volume of the C-C ball `B_r(c)`; balls scale like `r⁴` and are translation invariant.
pub fn cc_ball_volume(r: f64) -> f64 {
    r.powi(4) * unit_ball_volume_constant()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn quadrature_matches_high_precision_value() {
        // reference from adaptive arbitrary-precision quadrature of the same integral
        let v = unit_ball_volume(64).unwrap();
        assert!((v.unit_ball_volume - 0.825_875_762_209_175_3).abs() < 1e-12);
        assert!(v.estimate_stderr < 1e-10);
        assert!(v.unit_ball_volume > 0.0 && v.unit_ball_volume <= 1.0);
    }

    #[test]
    fn rejects_low_resolution() {
        assert!(unit_ball_volume(8).is_err());
        assert!(mc_ball_volume(1.0, 100, 1).is_err());
        assert!(mc_ball_volume(0.0, 20_000, 1).is_err());
    }

    #[test]
    fn monte_carlo_brackets_quadrature() {
        let q = unit_ball_volume_constant();
        let mc = mc_ball_volume(1.0, 200_000, 7).unwrap();
        assert!((mc.unit_ball_volume - q).abs() <= 3.0 * mc.estimate_stderr, "{mc:?} vs {q}");
    }

    #[test]
    fn monte_carlo_is_seeded() {
        let a = mc_ball_volume(1.0, 20_000, 42).unwrap();
        let b = mc_ball_volume(1.0, 20_000, 42).unwrap();
        assert_eq!(a.unit_ball_volume.to_bits(), b.unit_ball_volume.to_bits());
        let c = mc_ball_volume(1.0, 20_000, 43).unwrap();
        assert_ne!(a.unit_ball_volume.to_bits(), c.unit_ball_volume.to_bits());
    }

    #[test]
    fn monte_carlo_scales_like_r4() {
        let q = unit_ball_volume_constant();
        for r in [0.5, 2.0] {
            let mc = mc_ball_volume(r, 100_000, 3).unwrap();
            let scaled = mc.unit_ball_volume / r.powi(4);
            let err = mc.estimate_stderr / r.powi(4);
            assert!((scaled - q).abs() <= 3.0 * err, "r = {r}: {scaled} vs {q}");
        }
    }

    #[test]
    fn ball_height_is_attained_at_half_turn() {
        use crate::hgeom::{geodesic_point, GeodesicCoord};
        let p = geodesic_point(GeodesicCoord::new(1.0, PI, 0.0).unwrap());
        assert!((p.x3 - ball_height(1.0)).abs() < 1e-15);
        for i in 1..200 {
            let w = TAU * i as f64 / 200.0;
            let q = geodesic_point(GeodesicCoord::new(1.0, w, 0.0).unwrap());
            assert!(q.x3 <= ball_height(1.0) + 1e-15);
        }
    }
}
