//! C-C distance from an interior point to the boundary of a domain.
//!
//! * C-C balls use the closed form `d(x) = r − d(c, x)`.
//! * Box faces are searched face by face. On a vertical face the height of the
//!   boundary point only enters through the twisted coordinate `w`, and the
//!   distance grows with `|w|` at fixed horizontal offset, so the best height is
//!   `w` clamped towards zero and only one face parameter remains. Horizontal
//!   faces are sampled on a grid and refined with Nelder–Mead.
//! * Euclidean spheres are sampled on a Fibonacci lattice and refined with
//!   Nelder–Mead in the two angles.

use std::f64::consts::{PI, TAU};

use crate::error::{invalid, Result};
use crate::hgeom::{cc_distance, cc_distance_origin, GroupPoint};

use super::optim::{golden_section, nelder_mead_2d};
use super::DomainSpec;

/// Boundary samples used when callers do not choose a budget.
pub const DEFAULT_BOUNDARY_SAMPLES: usize = 600;

const MIN_BOUNDARY_SAMPLES: usize = 100;

/// `d(x)`: C-C distance from `p` to the boundary, or 0 when `p` is not inside.
pub fn boundary_distance(spec: &DomainSpec, p: GroupPoint, n_boundary_samples: usize) -> Result<f64> {
    if n_boundary_samples < MIN_BOUNDARY_SAMPLES {
        return invalid(format!("need at least {MIN_BOUNDARY_SAMPLES} boundary samples, got {n_boundary_samples}"));
    }
    if !p.is_finite() {
        return invalid(format!("non-finite point {:?}", p.to_array()));
    }
    if !spec.contains(p) {
        return Ok(0.0);
    }
    match *spec {
        DomainSpec::CcBall { center, radius } => Ok((radius - cc_distance(center.into(), p)?).max(0.0)),
        DomainSpec::Box { min, max } => {
            let faces = box_face_distances(min, max, p, n_boundary_samples, true)?;
            Ok(faces.iter().copied().fold(f64::INFINITY, f64::min))
        }
        DomainSpec::EuclideanBall { center, radius } => sphere_distance(center, radius, p, n_boundary_samples),
    }
}

/// Distance from `p` to the point `y`, expressed through `q = p⁻¹ ⊞ y`.
fn offset_distance(dx: f64, dy: f64, w: f64) -> f64 {
    cc_distance_origin(GroupPoint::new(dx, dy, w)).unwrap_or(f64::INFINITY)
}

/// Distances from an interior point to the six faces `x1 = min, x1 = max, x2 = min,
/// x2 = max, x3 = min, x3 = max`.
///
/// With `prune`, faces that provably cannot beat the running minimum are reported
/// as `+∞`.
pub(crate) fn box_face_distances(
    min: [f64; 3],
    max: [f64; 3],
    p: GroupPoint,
    n_samples: usize,
    prune: bool,
) -> Result<[f64; 6]> {
    let per_face = (n_samples / 6).max(16);
    let mut out = [f64::INFINITY; 6];
    let mut best = f64::INFINITY;

    // vertical faces, nearest first
    let mut vertical = [
        (0usize, min[0], (p.x1 - min[0]).abs()),
        (1, max[0], (max[0] - p.x1).abs()),
        (2, min[1], (p.x2 - min[1]).abs()),
        (3, max[1], (max[1] - p.x2).abs()),
    ];
    vertical.sort_by(|a, b| a.2.total_cmp(&b.2));
    for &(slot, level, gap) in &vertical {
        if prune && gap >= best {
            continue;
        }
        let d = vertical_face(min, max, p, slot / 2, level, per_face);
        out[slot] = d;
        best = best.min(d);
    }
    for (slot, level) in [(4usize, min[2]), (5, max[2])] {
        let cutoff = if prune { best } else { f64::INFINITY };
        let d = horizontal_face(min, max, p, level, per_face, cutoff);
        out[slot] = d;
        best = best.min(d);
    }
    Ok(out)
}

/// Face `x_axis = level` for `axis ∈ {0, 1}`.
fn vertical_face(min: [f64; 3], max: [f64; 3], p: GroupPoint, axis: usize, level: f64, n: usize) -> f64 {
    let other = 1 - axis;
    let (lo, hi) = (min[other], max[other]);
    // q = p⁻¹ ⊞ y = (y1 − p1, y2 − p2, y3 − p3 + ½(p1 y2 − p2 y1))
    let eval = |s: f64| {
        let (y1, y2) = if axis == 0 { (level, s) } else { (s, level) };
        let twist = 0.5 * (p.x1 * y2 - p.x2 * y1) - p.x3;
        let w = 0.0_f64.clamp(min[2] + twist, max[2] + twist);
        offset_distance(y1 - p.x1, y2 - p.x2, w)
    };
    let foot = if axis == 0 { p.x2 } else { p.x1 };
    let straight = eval(foot);
    let gap = if axis == 0 { (level - p.x1).abs() } else { (level - p.x2).abs() };
    if straight <= gap {
        // the horizontal segment to the face is admissible and no curve is shorter
        return straight;
    }
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (foot, straight);
    let mut best_i = None;
    for i in 0..n {
        let s = lo + h * i as f64;
        let v = eval(s);
        if v < best.1 {
            best = (s, v);
            best_i = Some(i);
        }
    }
    let centre = best_i.map(|i| lo + h * i as f64).unwrap_or(foot);
    let a = (centre - h).max(lo);
    let b = (centre + h).min(hi);
    let tol = 1e-13 * (hi - lo).max(1.0);
    let (s, v) = golden_section(eval, a, b, tol);
    if v < best.1 {
        best = (s, v);
    }
    best.1
}

/// Face `x3 = level`.
fn horizontal_face(min: [f64; 3], max: [f64; 3], p: GroupPoint, level: f64, n: usize, cutoff: f64) -> f64 {
    let rho = p.horizontal_norm();
    let dz = level - p.x3;
    let (mut a1, mut b1, mut a2, mut b2) = (min[0], max[0], min[1], max[1]);
    if cutoff.is_finite() {
        // only points with horizontal offset below the cutoff can compete, and there
        // |w| ≥ |dz| − ½ρ·cutoff while d ≥ √(2π|w|)
        let wmin = dz.abs() - 0.5 * rho * cutoff;
        if wmin > 0.0 && (TAU * wmin).sqrt() >= cutoff {
            return f64::INFINITY;
        }
        a1 = a1.max(p.x1 - cutoff);
        b1 = b1.min(p.x1 + cutoff);
        a2 = a2.max(p.x2 - cutoff);
        b2 = b2.min(p.x2 + cutoff);
        if a1 > b1 || a2 > b2 {
            return f64::INFINITY;
        }
    }
    let eval = |y: [f64; 2]| {
        let y1 = y[0].clamp(min[0], max[0]);
        let y2 = y[1].clamp(min[1], max[1]);
        let w = dz + 0.5 * (p.x1 * y2 - p.x2 * y1);
        offset_distance(y1 - p.x1, y2 - p.x2, w)
    };
    let g = ((n as f64).sqrt().ceil() as usize).max(4);
    let (h1, h2) = ((b1 - a1) / (g - 1) as f64, (b2 - a2) / (g - 1) as f64);
    let mut best = ([p.x1, p.x2], f64::INFINITY);
    for i in 0..g {
        for j in 0..g {
            let y = [a1 + h1 * i as f64, a2 + h2 * j as f64];
            if (y[0] - p.x1).hypot(y[1] - p.x2) >= best.1.min(cutoff) {
                continue;
            }
            let v = eval(y);
            if v < best.1 {
                best = (y, v);
            }
        }
    }
    if !best.1.is_finite() {
        return f64::INFINITY;
    }
    let step = [h1.max(1e-9), h2.max(1e-9)];
    let scale = (max[0] - min[0]).max(max[1] - min[1]);
    let (_, v) = nelder_mead_2d(eval, best.0, step, 1e-13 * scale.max(1.0), 600);
    v.min(best.1)
}

fn sphere_point(center: [f64; 3], radius: f64, phi: f64, psi: f64) -> GroupPoint {
    GroupPoint::new(
        center[0] + radius * phi.sin() * psi.cos(),
        center[1] + radius * phi.sin() * psi.sin(),
        center[2] + radius * phi.cos(),
    )
}

fn sphere_distance(center: [f64; 3], radius: f64, p: GroupPoint, n: usize) -> Result<f64> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    let eval = |a: [f64; 2]| cc_distance(p, sphere_point(center, radius, a[0], a[1])).unwrap_or(f64::INFINITY);
    let mut best = ([0.0, 0.0], f64::INFINITY);
    for i in 0..n {
        let z = 1.0 - (2.0 * i as f64 + 1.0) / n as f64;
        let angles = [z.acos(), golden_angle * i as f64];
        let y = sphere_point(center, radius, angles[0], angles[1]);
        if (y.x1 - p.x1).hypot(y.x2 - p.x2) >= best.1 {
            continue;
        }
        let v = cc_distance(p, y)?;
        if v < best.1 {
            best = (angles, v);
        }
    }
    let step = (4.0 * PI / n as f64).sqrt();
    let (_, v) = nelder_mead_2d(eval, best.0, [step, step], 1e-13, 800);
    Ok(v.min(best.1))
}
