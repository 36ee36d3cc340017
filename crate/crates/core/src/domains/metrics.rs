use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::hgeom::{group_inverse, group_multiply, unit_ball_volume_constant, GroupPoint};

use super::boundary::{box_face_distances, DEFAULT_BOUNDARY_SAMPLES};
use super::{boundary_distance, voxelize, DomainSpec, VoxelDomain};

/// Ratio of the geometric β-grid used for σ(Ω).
pub const SIGMA_GRID_RATIO: f64 = 1.15;

/// Geometric quantities of a domain entering the spectral bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DomainMetrics {
    pub volume: f64,
    pub in_radius: f64,
    pub sigma: f64,
    pub unit_ball_volume: f64,
}

/// Boundary distance evaluated at every occupied cell center of a voxel grid.
#[derive(Debug, Clone)]
pub struct DistanceField {
    spec: DomainSpec,
    vox: VoxelDomain,
    cells: Vec<usize>,
    values: Vec<f64>,
    in_radius: f64,
}

impl DistanceField {
    pub fn new(spec: &DomainSpec, resolution: usize) -> Result<Self> {
        let vox = voxelize(spec, resolution)?;
        if vox.is_empty() {
            return invalid("domain has no occupied cells at this resolution");
        }
        let cells: Vec<usize> = vox.occupied().collect();
        let values = cells
            .par_iter()
            .map(|&i| boundary_distance(spec, vox.center(vox.cell(i)), DEFAULT_BOUNDARY_SAMPLES))
            .collect::<Result<Vec<f64>>>()?;
        // first-found maximum over the grid seeds the pattern search
        let (best_pos, _) =
            values.iter().enumerate().fold((0, f64::NEG_INFINITY), |acc, (i, &v)| if v > acc.1 { (i, v) } else { acc });
        let start = vox.center(vox.cell(cells[best_pos]));
        let in_radius = pattern_search(spec, start, vox.spacing, values[best_pos])?;
        Ok(Self { spec: *spec, vox, cells, values, in_radius })
    }

    pub fn voxels(&self) -> &VoxelDomain {
        &self.vox
    }

    pub fn spec(&self) -> &DomainSpec {
        &self.spec
    }

    /// `(cell index, d(center))` for every occupied cell.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.cells.iter().copied().zip(self.values.iter().copied())
    }

    pub fn in_radius(&self) -> f64 {
        self.in_radius
    }

    /// Voxel measure of `{x ∈ Ω : d(x) < β}`.
    pub fn tube_volume(&self, beta: f64) -> Result<f64> {
        if !(beta > 0.0) || beta > self.in_radius * (1.0 + 1e-9) {
            return invalid(format!("beta must lie in (0, R(Ω)] = (0, {}], got {beta}", self.in_radius));
        }
        let count = self.values.iter().filter(|&&d| d < beta).count();
        Ok(count as f64 * self.vox.cell_volume())
    }

    /// β-grid `R, R/1.15, R/1.15², …` with `n_beta` points, largest first.
    pub fn beta_grid(&self, n_beta: usize) -> Vec<f64> {
        (0..n_beta).map(|j| self.in_radius / SIGMA_GRID_RATIO.powi(j as i32)).collect()
    }

    /// `min_β |Ω^β| / β` over [`Self::beta_grid`].
    pub fn sigma(&self, n_beta: usize) -> Result<f64> {
        if n_beta < 8 {
            return invalid(format!("sigma needs at least 8 β values, got {n_beta}"));
        }
        let mut best = f64::INFINITY;
        for beta in self.beta_grid(n_beta) {
            best = best.min(self.tube_volume(beta)? / beta);
        }
        Ok(best)
    }

    pub fn metrics(&self, n_beta: usize) -> Result<DomainMetrics> {
        Ok(DomainMetrics {
            volume: self.vox.volume(),
            in_radius: self.in_radius,
            sigma: self.sigma(n_beta)?,
            unit_ball_volume: unit_ball_volume_constant(),
        })
    }
}

/// Pattern search over the 26 neighbour directions maximizing `d` from `start`.
///
/// Moves are left translations `x ⊞ (s1, s2, s3)`, so the pattern follows the
/// group structure and reaches cusps of `d` such as the center of a C-C ball.
/// A successful direction is followed with doubling strides; when no direction
/// improves, the steps are halved until they are negligible against the grid
/// spacing. Diagonal moves are needed because `d` is a minimum over faces and has
/// ridges that stall axis-only searches.
fn pattern_search(spec: &DomainSpec, start: GroupPoint, spacing: [f64; 3], start_value: f64) -> Result<f64> {
    const HALVINGS: usize = 50;
    const MAX_EVALS: usize = 200_000;
    let directions: Vec<[f64; 3]> = (0..27)
        .filter(|&i| i != 13)
        .map(|i| [(i / 9) as f64 - 1.0, ((i / 3) % 3) as f64 - 1.0, (i % 3) as f64 - 1.0])
        .collect();
    let d = |x: [f64; 3]| boundary_distance(spec, x.into(), DEFAULT_BOUNDARY_SAMPLES);
    let shift = |x: [f64; 3], dir: &[f64; 3], scale: f64, step: [f64; 3]| {
        group_multiply(x.into(), [0, 1, 2].map(|a| scale * dir[a] * step[a]).into()).to_array()
    };
    let mut x = start.to_array();
    let mut fx = start_value;
    let mut step = spacing;
    let mut halvings = 0;
    let mut evals = 0;
    while halvings < HALVINGS && evals < MAX_EVALS {
        let mut moved = false;
        for dir in &directions {
            let y = shift(x, dir, 1.0, step);
            let fy = d(y)?;
            evals += 1;
            if fy > fx {
                (x, fx) = (y, fy);
                moved = true;
                let mut stride = 2.0;
                loop {
                    let y = shift(x, dir, stride, step);
                    let fy = d(y)?;
                    evals += 1;
                    if fy <= fx {
                        break;
                    }
                    (x, fx) = (y, fy);
                    stride *= 2.0;
                }
                break;
            }
        }
        if !moved {
            step = step.map(|s| 0.5 * s);
            halvings += 1;
        }
    }
    Ok(fx)
}

/// `R(Ω) = sup d(x)`: grid maximum over cell centers, refined by pattern search.
pub fn in_radius(spec: &DomainSpec, resolution: usize) -> Result<f64> {
    let vox = voxelize(spec, resolution)?;
    let mut best: Option<(GroupPoint, f64)> = None;
    for i in vox.occupied() {
        let p = vox.center(vox.cell(i));
        let d = boundary_distance(spec, p, DEFAULT_BOUNDARY_SAMPLES)?;
        if best.is_none_or(|(_, b)| d > b) {
            best = Some((p, d));
        }
    }
    let Some((p, d)) = best else {
        return invalid("domain has no occupied cells at this resolution");
    };
    pattern_search(spec, p, vox.spacing, d)
}

/// Voxel measure of the inner collar `Ω^β`.
pub fn tube_volume(spec: &DomainSpec, beta: f64, resolution: usize) -> Result<f64> {
    DistanceField::new(spec, resolution)?.tube_volume(beta)
}

/// `σ(Ω) = inf_{0<β≤R} |Ω^β| / β` on a geometric β-grid ending at `R`.
pub fn sigma(spec: &DomainSpec, resolution: usize, n_beta: usize) -> Result<f64> {
    if n_beta < 8 {
        return invalid(format!("sigma needs at least 8 β values, got {n_beta}"));
    }
    DistanceField::new(spec, resolution)?.sigma(n_beta)
}

/// Deviation of `|X1 d|² + |X2 d|²` from 1 over the sampled points.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EikonalStats {
    pub mean: f64,
    pub max: f64,
    pub samples: usize,
}

fn halton(mut i: usize, base: usize) -> f64 {
    let mut f = 1.0;
    let mut r = 0.0;
    while i > 0 {
        f /= base as f64;
        r += f * (i % base) as f64;
        i /= base;
    }
    r
}

/// Whether `d` is smooth enough at `p` for a central difference of width `h`.
fn away_from_singular_set(spec: &DomainSpec, p: GroupPoint, d: f64, h: f64) -> Result<bool> {
    if d <= 3.0 * h {
        return Ok(false);
    }
    Ok(match *spec {
        // d = r − d(c, ·) is smooth off the vertical axis through the center
        DomainSpec::CcBall { center, radius } => {
            group_multiply(group_inverse(center.into()), p).horizontal_norm() > 0.05 * radius
        }
        // exclude the ridge where the nearest face switches
        DomainSpec::Box { min, max } => {
            let mut f = box_face_distances(min, max, p, DEFAULT_BOUNDARY_SAMPLES, false)?;
            f.sort_by(f64::total_cmp);
            f[1] - f[0] > 10.0 * h
        }
        DomainSpec::EuclideanBall { .. } => true,
    })
}

/// Central differences of `d` along the left-invariant fields `X1`, `X2` at
/// `n_points` quasi-random interior points.
pub fn eikonal_residual(spec: &DomainSpec, n_points: usize, h: f64) -> Result<EikonalStats> {
    if n_points == 0 || !(h > 0.0) {
        return invalid("eikonal check needs n_points > 0 and h > 0");
    }
    let (lo, hi) = spec.bounding_box();
    let d = |p: GroupPoint| boundary_distance(spec, p, DEFAULT_BOUNDARY_SAMPLES);
    let mut deviations = Vec::with_capacity(n_points);
    let mut i = 0usize;
    while deviations.len() < n_points && i < 200 * n_points {
        i += 1;
        let u = [halton(i, 2), halton(i, 3), halton(i, 5)];
        let p = GroupPoint::from([0, 1, 2].map(|a| lo[a] + u[a] * (hi[a] - lo[a])));
        if !spec.contains(p) {
            continue;
        }
        let dp = d(p)?;
        if !away_from_singular_set(spec, p, dp, h)? {
            continue;
        }
        // p ⊞ (±h, 0, 0) and p ⊞ (0, ±h, 0) are the flows of X1 and X2
        let x1 = (d(group_multiply(p, GroupPoint::new(h, 0.0, 0.0)))?
            - d(group_multiply(p, GroupPoint::new(-h, 0.0, 0.0)))?)
            / (2.0 * h);
        let x2 = (d(group_multiply(p, GroupPoint::new(0.0, h, 0.0)))?
            - d(group_multiply(p, GroupPoint::new(0.0, -h, 0.0)))?)
            / (2.0 * h);
        deviations.push((x1 * x1 + x2 * x2 - 1.0).abs());
    }
    if deviations.is_empty() {
        return invalid("no admissible interior sample points for the eikonal check");
    }
    let n = deviations.len();
    Ok(EikonalStats {
        mean: deviations.iter().sum::<f64>() / n as f64,
        max: deviations.iter().copied().fold(0.0, f64::max),
        samples: n,
    })
}
