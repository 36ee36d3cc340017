use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::spectral::Spectrum;

/// Geometric data entering the eigenvalue bounds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundParams {
    pub volume: f64,
    pub in_radius: f64,
    pub unit_ball_volume: f64,
    pub sigma: f64,
    /// Hardy constant `c`; the improved bound is only evaluated when it is known.
    pub hardy_c: Option<f64>,
}

impl BoundParams {
    pub fn new(volume: f64, in_radius: f64, unit_ball_volume: f64, sigma: f64, hardy_c: Option<f64>) -> Result<Self> {
        let params = Self { volume, in_radius, unit_ball_volume, sigma, hardy_c };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("volume", self.volume),
            ("in_radius", self.in_radius),
            ("unit_ball_volume", self.unit_ball_volume),
            ("sigma", self.sigma),
        ] {
            if !(v >= 0.0) || !v.is_finite() {
                return invalid(format!("{name} must be finite and non-negative, got {v}"));
            }
        }
        if !(self.volume > 0.0) {
            return invalid("volume must be positive");
        }
        if let Some(c) = self.hardy_c {
            check_hardy_c(c)?;
        }
        Ok(())
    }
}

fn check_hardy_c(c: f64) -> Result<()> {
    if !(c >= 2.0) || !c.is_finite() {
        return invalid(format!("hardy_c must be a finite value ≥ 2, got {c}"));
    }
    Ok(())
}

/// `Σ_k (λ − λ_k)₊` over the computed eigenvalues.
///
/// Fails with a coverage error above the largest computed eigenvalue, where the
/// truncated sum would silently under-count.
pub fn riesz_mean(spectrum: &Spectrum, lambda: f64) -> Result<f64> {
    let top = spectrum.max_eigenvalue();
    if spectrum.eigenvalues.is_empty() || lambda > top {
        return Err(Error::Coverage { lambda, covered: top });
    }
    Ok(spectrum.eigenvalues.iter().map(|&e| (lambda - e).max(0.0)).sum())
}

/// `|Ω| λ³ / 96`.
pub fn hl_bound(params: &BoundParams, lambda: f64) -> f64 {
    params.volume * lambda.powi(3) / 96.0
}

/// Coefficient of `λ²` subtracted in [`melas_bound`].
pub fn melas_correction(params: &BoundParams) -> f64 {
    params.unit_ball_volume.powi(2) * params.in_radius.powi(6) / (3.0 * 512.0 * params.volume)
}

/// `max{0, |Ω|λ³/96 − |B₁|² R⁶ λ² / (3·2⁹ |Ω|)}`.
pub fn melas_bound(params: &BoundParams, lambda: f64) -> f64 {
    (hl_bound(params, lambda) - melas_correction(params) * lambda * lambda).max(0.0)
}

/// Largest `λ` at which [`melas_bound`] still vanishes: `|B₁|² R⁶ / (16 |Ω|²)`.
pub fn melas_threshold(params: &BoundParams) -> f64 {
    params.unit_ball_volume.powi(2) * params.in_radius.powi(6) / (16.0 * params.volume.powi(2))
}

/// Lower bound for `Σ_{j≤n} λ_j`.
pub fn liyau_sum_bound(params: &BoundParams, n: usize) -> f64 {
    let n = n as f64;
    8.0 * 2f64.sqrt() / 3.0 * params.volume.powf(-0.5) * n.powf(1.5)
        + params.unit_ball_volume.powi(2) * params.in_radius.powi(6) / (48.0 * params.volume.powi(2)) * n
}

/// Exponent of `λ` in the correction of [`improved_bound`].
pub fn improved_exponent(c: f64) -> f64 {
    2.0 + 1.0 / (c + 2.0)
}

/// Coefficient `K` of the correction `K λ^{2 + 1/(c+2)}` in [`improved_bound`].
pub fn improved_coefficient(params: &BoundParams, c: f64) -> Result<f64> {
    check_hardy_c(c)?;
    let e = (2.0 * c + 2.0) / (c + 2.0);
    Ok((1.0 + 2.0 / c) / 96.0
        * params.sigma.powf(e)
        * (4.0 * c + 4.0).powf(-e)
        * params.volume.powf(-1.0 / (1.0 + 2.0 / c)))
}

/// Improved bound under a Hardy inequality with constant `c = params.hardy_c`.
pub fn improved_bound(params: &BoundParams, lambda: f64) -> Result<f64> {
    let Some(c) = params.hardy_c else {
        return invalid("improved bound needs hardy_c");
    };
    let k = improved_coefficient(params, c)?;
    Ok((hl_bound(params, lambda) - k * lambda.powf(improved_exponent(c))).max(0.0))
}
