//! Fixed float formatting shared by every report writer.

/// Formats `x` with nine significant digits in scientific notation.
///
/// The output depends only on the bit pattern of `x`, so reports written from
/// identical inputs are byte-identical.
pub fn sig9(x: f64) -> String {
    if x.is_nan() {
        return "nan".to_string();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0.00000000e0".to_string();
    }
    format!("{:.8e}", x)
}
