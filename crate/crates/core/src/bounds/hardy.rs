use serde::{Deserialize, Serialize};

use crate::domains::{boundary_distance, voxelize, DomainSpec, DEFAULT_BOUNDARY_SAMPLES};
use crate::error::{invalid, Result};
use crate::hgeom::{group_multiply, GroupPoint};

/// Energy ratio of the test functions `g_ε = d^{1/2+ε}` on a C-C ball.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HardyQuotient {
    pub epsilon: f64,
    /// `∫ |X1 g|² + |X2 g|²  /  ∫ g²/d²`.
    pub quotient: f64,
    /// `∫ g²/d²  /  ∫ |X1 g|² + |X2 g|²`, a lower bound for the squared Hardy constant.
    pub constant_sq: f64,
}

/// Evaluates the quotient on the cell centers of a voxel grid, with `X1 g`, `X2 g`
/// from central differences of `g` along the left-translation flows.
pub fn hardy_quotient(spec: &DomainSpec, epsilon: f64, resolution: usize) -> Result<HardyQuotient> {
    let DomainSpec::CcBall { radius, .. } = *spec else {
        return invalid("the Hardy quotient needs a cc_ball domain");
    };
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return invalid(format!("epsilon must lie in (0, 1], got {epsilon}"));
    }
    let vox = voxelize(spec, resolution)?;
    let power = 0.5 + epsilon;
    let d = |p: GroupPoint| boundary_distance(spec, p, DEFAULT_BOUNDARY_SAMPLES);
    let mut energy = 0.0;
    let mut weighted = 0.0;
    for i in vox.occupied() {
        let p = vox.center(vox.cell(i));
        let dp = d(p)?;
        if dp <= 0.0 {
            continue;
        }
        // d is 1-Lipschitz, so steps below d stay inside
        let h = (1e-5 * radius).min(0.25 * dp);
        let g = |q: GroupPoint| -> Result<f64> { Ok(d(q)?.powf(power)) };
        let x1 = (g(group_multiply(p, GroupPoint::new(h, 0.0, 0.0)))?
            - g(group_multiply(p, GroupPoint::new(-h, 0.0, 0.0)))?)
            / (2.0 * h);
        let x2 = (g(group_multiply(p, GroupPoint::new(0.0, h, 0.0)))?
            - g(group_multiply(p, GroupPoint::new(0.0, -h, 0.0)))?)
            / (2.0 * h);
        energy += x1 * x1 + x2 * x2;
        weighted += dp.powf(2.0 * power - 2.0);
    }
    if !(weighted > 0.0) || !(energy > 0.0) {
        return invalid("grid too coarse for the Hardy quotient");
    }
    Ok(HardyQuotient { epsilon, quotient: energy / weighted, constant_sq: weighted / energy })
}
