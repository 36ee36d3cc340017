use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::domains::{voxelize, DomainSpec, VoxelDomain};
use crate::error::{invalid, Result};
use crate::fmt::sig9;

use super::eigen::lowest_eigenpairs;
use super::SparseForm;

/// Default residual tolerance for eigenpairs.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-8;

/// Identifies the voxel grid a spectrum was computed on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridId {
    pub origin: [f64; 3],
    pub spacing: [f64; 3],
    pub dims: [usize; 3],
    pub occupied: usize,
}

impl From<&VoxelDomain> for GridId {
    fn from(vox: &VoxelDomain) -> Self {
        Self { origin: vox.origin, spacing: vox.spacing, dims: vox.dims, occupied: vox.occupied_count() }
    }
}

/// Lowest Dirichlet eigenvalues of the discretized operator on one grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub residuals: Vec<f64>,
    pub count: usize,
    pub grid_id: GridId,
}

impl Spectrum {
    /// Largest computed eigenvalue; Riesz means are complete up to here.
    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    /// `N(λ) = #{k : λ_k ≤ λ}` over the computed eigenvalues.
    pub fn counting(&self, lambda: f64) -> usize {
        self.eigenvalues.partition_point(|&e| e <= lambda)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("index,eigenvalue,residual\n");
        for (i, (e, r)) in self.eigenvalues.iter().zip(&self.residuals).enumerate() {
            let _ = writeln!(out, "{},{},{}", i + 1, sig9(*e), sig9(*r));
        }
        out
    }
}

/// The `m` smallest eigenvalues of the form on `vox`, residuals at most `tol`.
pub fn lowest_eigenvalues(form: &SparseForm, vox: &VoxelDomain, m: usize, tol: f64) -> Result<Spectrum> {
    let pairs = lowest_eigenpairs(form, m, tol)?;
    Ok(Spectrum {
        count: pairs.values.len(),
        eigenvalues: pairs.values,
        residuals: pairs.residuals,
        grid_id: vox.into(),
    })
}

/// Voxelize, assemble and solve in one step.
pub fn domain_spectrum(spec: &DomainSpec, resolution: usize, m: usize, tol: f64) -> Result<Spectrum> {
    let vox = voxelize(spec, resolution)?;
    let form = SparseForm::assemble(&vox)?;
    lowest_eigenvalues(&form, &vox, m, tol)
}

/// Spectra on several grids with Richardson extrapolation from the last three.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefinementStudy {
    pub resolutions: Vec<usize>,
    pub spectra: Vec<Spectrum>,
    /// Observed convergence order per eigenvalue, when three grids are available.
    pub order: Option<Vec<f64>>,
    /// Extrapolated eigenvalues per index.
    pub extrapolated: Vec<f64>,
}

/// Observed order `p` from values on grids `h, h/q1, h/q1/q2`, solved by bisection
/// for general (non-uniform) refinement ratios.
fn observed_order(h: [f64; 3], v: [f64; 3]) -> Option<f64> {
    let (d1, d2) = (v[1] - v[0], v[2] - v[1]);
    if d1 == 0.0 || d2 == 0.0 || d1.signum() != d2.signum() {
        return None;
    }
    // (v1 − v0)/(v2 − v1) = (h0^p − h1^p)/(h1^p − h2^p)
    let target = d1 / d2;
    let g = |p: f64| (h[0].powf(p) - h[1].powf(p)) / (h[1].powf(p) - h[2].powf(p)) - target;
    let (mut lo, mut hi) = (0.05, 8.0);
    if g(lo).signum() == g(hi).signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid).signum() == g(lo).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

pub fn refine_study(spec: &DomainSpec, resolutions: &[usize], m: usize, tol: f64) -> Result<RefinementStudy> {
    if resolutions.len() < 2 {
        return invalid("a refinement study needs at least two resolutions");
    }
    let spectra = resolutions.iter().map(|&r| domain_spectrum(spec, r, m, tol)).collect::<Result<Vec<_>>>()?;
    let h: Vec<f64> = resolutions.iter().map(|&r| 1.0 / r as f64).collect();
    let n = spectra.len();
    let (order, extrapolated) = if n >= 3 {
        let hs = [h[n - 3], h[n - 2], h[n - 1]];
        let orders: Vec<f64> = (0..m)
            .map(|j| {
                let v = [spectra[n - 3].eigenvalues[j], spectra[n - 2].eigenvalues[j], spectra[n - 1].eigenvalues[j]];
                observed_order(hs, v).unwrap_or(f64::NAN)
            })
            .collect();
        let extrapolated = (0..m)
            .map(|j| {
                let p = if orders[j].is_finite() { orders[j] } else { 1.0 };
                richardson(hs[1], hs[2], spectra[n - 2].eigenvalues[j], spectra[n - 1].eigenvalues[j], p)
            })
            .collect();
        (Some(orders), extrapolated)
    } else {
        let extrapolated = (0..m)
            .map(|j| richardson(h[n - 2], h[n - 1], spectra[n - 2].eigenvalues[j], spectra[n - 1].eigenvalues[j], 1.0))
            .collect();
        (None, extrapolated)
    };
    Ok(RefinementStudy { resolutions: resolutions.to_vec(), spectra, order, extrapolated })
}

/// Extrapolates `v(h) = v* + C h^p` to `h = 0` from two grids.
fn richardson(h_coarse: f64, h_fine: f64, coarse: f64, fine: f64, p: f64) -> f64 {
    let q = (h_coarse / h_fine).powf(p);
    if (q - 1.0).abs() < 1e-12 {
        return fine;
    }
    fine + (fine - coarse) / (q - 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observed_order_recovers_synthetic_rate() {
        let h = [1.0 / 16.0, 1.0 / 24.0, 1.0 / 32.0];
        let v = h.map(|x: f64| 18.0 + 5.0 * x.powf(1.3));
        assert!((observed_order(h, v).unwrap() - 1.3).abs() < 1e-9);
        assert!((richardson(h[1], h[2], v[1], v[2], 1.3) - 18.0).abs() < 1e-9);
    }

    #[test]
    fn csv_has_fixed_layout() {
        let s = Spectrum {
            eigenvalues: vec![1.5, 20.0],
            residuals: vec![1e-10, 0.0],
            count: 2,
            grid_id: GridId { origin: [0.0; 3], spacing: [1.0; 3], dims: [1; 3], occupied: 1 },
        };
        assert_eq!(
            s.to_csv(),
            "index,eigenvalue,residual\n1,1.50000000e0,1.00000000e-10\n2,2.00000000e1,0.00000000e0\n"
        );
        assert_eq!(s.counting(1.5), 1);
        assert_eq!(s.counting(1.4), 0);
    }
}
