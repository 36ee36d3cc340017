use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::fmt::sig9;
use crate::spectral::Spectrum;

use super::formulas::{hl_bound, improved_bound, melas_bound, riesz_mean, BoundParams};

/// Relative slack, as a fraction of the leading term, allowed for discretization error.
pub const DEFAULT_SLACK: f64 = 0.02;

/// Riesz means against every bound on a λ-grid. Margins are `bound − riesz`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub lambda_grid: Vec<f64>,
    pub riesz: Vec<f64>,
    pub hl: Vec<f64>,
    pub melas: Vec<f64>,
    pub improved: Option<Vec<f64>>,
    pub margin_hl: Vec<f64>,
    pub margin_melas: Vec<f64>,
    pub margin_improved: Option<Vec<f64>>,
    /// Largest λ for which the computed spectrum is complete.
    pub valid_up_to: f64,
    pub slack: f64,
}

/// A negative margin exceeding the slack.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub bound: &'static str,
    pub lambda: f64,
    pub margin: f64,
}

/// Evaluates all bounds with the default slack.
pub fn verify(spectrum: &Spectrum, params: &BoundParams, lambda_grid: &[f64]) -> Result<BoundReport> {
    verify_with_slack(spectrum, params, lambda_grid, DEFAULT_SLACK)
}

pub fn verify_with_slack(
    spectrum: &Spectrum,
    params: &BoundParams,
    lambda_grid: &[f64],
    slack: f64,
) -> Result<BoundReport> {
    params.validate()?;
    if lambda_grid.is_empty() {
        return invalid("empty lambda grid");
    }
    if lambda_grid.windows(2).any(|w| !(w[1] > w[0])) || !(lambda_grid[0] >= 0.0) {
        return invalid("lambda grid must be non-negative and strictly ascending");
    }
    if !(slack >= 0.0) {
        return invalid(format!("slack must be non-negative, got {slack}"));
    }
    let riesz = lambda_grid.iter().map(|&l| riesz_mean(spectrum, l)).collect::<Result<Vec<_>>>()?;
    let hl: Vec<f64> = lambda_grid.iter().map(|&l| hl_bound(params, l)).collect();
    let melas: Vec<f64> = lambda_grid.iter().map(|&l| melas_bound(params, l)).collect();
    let improved = match params.hardy_c {
        Some(_) => Some(lambda_grid.iter().map(|&l| improved_bound(params, l)).collect::<Result<Vec<_>>>()?),
        None => None,
    };
    let margin = |b: &[f64]| -> Vec<f64> { b.iter().zip(&riesz).map(|(b, r)| b - r).collect() };
    Ok(BoundReport {
        lambda_grid: lambda_grid.to_vec(),
        margin_hl: margin(&hl),
        margin_melas: margin(&melas),
        margin_improved: improved.as_deref().map(margin),
        riesz,
        hl,
        melas,
        improved,
        valid_up_to: spectrum.max_eigenvalue(),
        slack,
    })
}

/// `n` equally spaced values from `a` to `b` inclusive.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 }).collect(),
    }
}

impl BoundReport {
    /// Margins below `−slack · hl`.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let mut check = |name: &'static str, margins: &[f64]| {
            for ((&l, &m), &hl) in self.lambda_grid.iter().zip(margins).zip(&self.hl) {
                if m < -self.slack * hl {
                    out.push(Violation { bound: name, lambda: l, margin: m });
                }
            }
        };
        check("hl", &self.margin_hl);
        check("melas", &self.margin_melas);
        if let Some(m) = &self.margin_improved {
            check("improved", m);
        }
        out
    }

    pub fn min_margin_hl(&self) -> f64 {
        self.margin_hl.iter().copied().fold(f64::INFINITY, f64::min)
    }

    fn cells(&self, i: usize) -> [String; 8] {
        let opt = |v: &Option<Vec<f64>>| v.as_ref().map(|v| sig9(v[i]));
        [
            sig9(self.lambda_grid[i]),
            sig9(self.riesz[i]),
            sig9(self.hl[i]),
            sig9(self.melas[i]),
            opt(&self.improved).unwrap_or_default(),
            sig9(self.margin_hl[i]),
            sig9(self.margin_melas[i]),
            opt(&self.margin_improved).unwrap_or_default(),
        ]
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,riesz,hl,melas,improved,margin_hl,margin_melas,margin_improved\n");
        for i in 0..self.lambda_grid.len() {
            out.push_str(&self.cells(i).join(","));
            out.push('\n');
        }
        out
    }

    /// JSON with the CSV column names, one array per column and the same formatted values.
    pub fn to_json(&self) -> String {
        const NAMES: [&str; 8] =
            ["lambda", "riesz", "hl", "melas", "improved", "margin_hl", "margin_melas", "margin_improved"];
        let rows: Vec<[String; 8]> = (0..self.lambda_grid.len()).map(|i| self.cells(i)).collect();
        let mut out = String::from("{\n");
        for (c, name) in NAMES.iter().enumerate() {
            let column: Vec<&str> = rows.iter().map(|r| if r[c].is_empty() { "null" } else { r[c].as_str() }).collect();
            let _ = writeln!(out, "  \"{name}\": [{}],", column.join(", "));
        }
        let _ = writeln!(out, "  \"valid_up_to\": {},", sig9(self.valid_up_to));
        let _ = writeln!(out, "  \"slack\": {}", sig9(self.slack));
        out.push_str("}\n");
        out
    }
}
