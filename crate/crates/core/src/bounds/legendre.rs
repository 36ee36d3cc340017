use crate::error::{invalid, Result};

/// `sup_i (p x_i − f_i)` over a sampled convex function.
///
/// The supremum of `p x − f` over the piecewise-linear interpolant is attained at
/// a sample, so kinks such as the one of `max{0, g}` are handled exactly as long
/// as the kink is one of the samples.
pub fn legendre_transform(xs: &[f64], fs: &[f64], p: f64) -> Result<f64> {
    check_convex(xs, fs)?;
    Ok(xs.iter().zip(fs).map(|(&x, &f)| p * x - f).fold(f64::NEG_INFINITY, f64::max))
}

/// Checks that `xs` is strictly ascending and the slopes of `fs` do not decrease.
pub fn check_convex(xs: &[f64], fs: &[f64]) -> Result<()> {
    if xs.is_empty() || xs.len() != fs.len() {
        return invalid("convex samples need equal, non-zero numbers of abscissae and values");
    }
    if xs.windows(2).any(|w| !(w[1] > w[0])) {
        return invalid("sample abscissae must be strictly ascending");
    }
    let slopes: Vec<f64> = xs.windows(2).zip(fs.windows(2)).map(|(x, f)| (f[1] - f[0]) / (x[1] - x[0])).collect();
    for (i, s) in slopes.windows(2).enumerate() {
        let scale = s[0].abs().max(s[1].abs()).max(1.0);
        if s[1] < s[0] - 1e-9 * scale {
            return invalid(format!("samples are not convex near x = {}", xs[i + 1]));
        }
    }
    Ok(())
}
