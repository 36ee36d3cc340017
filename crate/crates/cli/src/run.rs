use std::path::{Path, PathBuf};

use hmelas::bounds::{hardy_quotient, linear_grid, verify_with_slack, BoundParams, BoundReport};
use hmelas::domains::voxelize;
use hmelas::domains::{DistanceField, DomainSpec};
use hmelas::fmt::sig9;
use hmelas::hgeom::{cc_distance, mc_ball_volume, unit_ball_volume, unit_ball_volume_constant};
use hmelas::spectral::{lowest_eigenvalues, SparseForm, Spectrum, DEFAULT_EIGEN_TOL};

use crate::args::{Cli, Command, DomainArgs, Format, Output};
use crate::table::Table;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] hmelas::Error),
    #[error("out {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    BoundViolation,
}

type Result<T> = std::result::Result<T, CliError>;

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(CliError::Usage(msg.into()))
}

fn load_domain(args: &DomainArgs) -> Result<DomainSpec> {
    let Some(path) = &args.domain_file else {
        return usage("missing required option domain_file (--domain-file)");
    };
    if args.resolution < 8 {
        return usage(format!("resolution must be at least 8, got {}", args.resolution));
    }
    DomainSpec::from_file(path).map_err(|e| match e {
        hmelas::Error::InvalidArgument(m) if !m.starts_with("domain_file") => {
            CliError::Usage(format!("domain_file {}: {m}", path.display()))
        }
        other => other.into(),
    })
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    std::fs::write(path, text).map_err(|source| CliError::Write { path: path.to_path_buf(), source })
}

fn emit(output: &Output, csv: impl FnOnce() -> String, json: impl FnOnce() -> String) -> Result<()> {
    if let Some(path) = &output.out {
        let text = match output.format {
            Format::Csv => csv(),
            Format::Json => json(),
        };
        if text.lines().count() < 2 {
            return usage("refusing to write an empty report");
        }
        write_file(path, &text)?;
    }
    Ok(())
}

fn emit_table(output: &Output, table: &Table) -> Result<()> {
    if table.rows.is_empty() {
        return usage("refusing to write an empty report");
    }
    emit(output, || table.to_csv(), || table.to_json())
}

fn one_row(columns: Vec<&'static str>, values: &[f64]) -> Table {
    let mut t = Table::new(columns);
    t.push(values.iter().map(|&v| sig9(v)).collect());
    t
}

fn spectrum_table(s: &Spectrum) -> Table {
    let mut t = Table::new(vec!["index", "eigenvalue", "residual"]);
    for (i, (e, r)) in s.eigenvalues.iter().zip(&s.residuals).enumerate() {
        t.push(vec![(i + 1).to_string(), sig9(*e), sig9(*r)]);
    }
    t
}

fn compute_spectrum(spec: &DomainSpec, resolution: usize, num_eigs: usize) -> Result<Spectrum> {
    if num_eigs == 0 {
        return usage("num_eigs must be at least 1");
    }
    let vox = voxelize(spec, resolution)?;
    let form = SparseForm::assemble(&vox)?;
    if 4 * num_eigs > form.dimension() {
        return usage(format!(
            "num_eigs {num_eigs} exceeds a quarter of the {} grid unknowns; raise resolution",
            form.dimension()
        ));
    }
    Ok(lowest_eigenvalues(&form, &vox, num_eigs, DEFAULT_EIGEN_TOL)?)
}

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Dist { from, to, output } => {
            let d = cc_distance(*from, *to)?;
            emit_table(output, &one_row(vec!["distance"], &[d]))?;
            println!("dist {}", sig9(d));
        }
        Command::BallVol { resolution, samples, seed, output } => {
            let quad = unit_ball_volume(*resolution)?;
            let mc = mc_ball_volume(1.0, *samples, *seed)?;
            let z =
                (quad.unit_ball_volume - mc.unit_ball_volume).abs() / quad.estimate_stderr.hypot(mc.estimate_stderr);
            emit_table(
                output,
                &one_row(
                    vec!["quadrature", "quadrature_stderr", "monte_carlo", "monte_carlo_stderr"],
                    &[quad.unit_ball_volume, quad.estimate_stderr, mc.unit_ball_volume, mc.estimate_stderr],
                ),
            )?;
            println!(
                "ball-vol quadrature {} monte_carlo {} ± {} ({:.2} standard errors apart)",
                sig9(quad.unit_ball_volume),
                sig9(mc.unit_ball_volume),
                sig9(mc.estimate_stderr),
                z
            );
        }
        Command::Inradius { domain, output } => {
            let spec = load_domain(domain)?;
            let r = hmelas::domains::in_radius(&spec, domain.resolution)?;
            emit_table(output, &one_row(vec!["in_radius"], &[r]))?;
            println!("inradius {}", sig9(r));
        }
        Command::Tube { domain, beta, output } => {
            let spec = load_domain(domain)?;
            let Some(beta) = *beta else {
                return usage("missing required option beta (--beta)");
            };
            let field = DistanceField::new(&spec, domain.resolution)?;
            let r = field.in_radius();
            if !(beta > 0.0 && beta <= r) {
                return usage(format!("beta must lie in (0, {}], got {beta}", sig9(r)));
            }
            let tube = field.tube_volume(beta)?;
            let lower = (r.powi(4) - (r - beta).powi(4)) * unit_ball_volume_constant();
            emit_table(
                output,
                &one_row(vec!["beta", "tube_volume", "lower_bound", "margin"], &[beta, tube, lower, tube - lower]),
            )?;
            let status = if tube >= lower { "holds" } else { "violated" };
            println!("tube {} lower bound {} ({status})", sig9(tube), sig9(lower));
        }
        Command::Sigma { domain, n_beta, output } => {
            let spec = load_domain(domain)?;
            let field = DistanceField::new(&spec, domain.resolution)?;
            let sigma = field.sigma(*n_beta)?;
            let r = field.in_radius();
            let lower = r.powi(3) * unit_ball_volume_constant();
            emit_table(
                output,
                &one_row(
                    vec!["sigma", "in_radius", "volume", "ball_lower_bound"],
                    &[sigma, r, field.voxels().volume(), lower],
                ),
            )?;
            println!("sigma {} lower bound {}", sig9(sigma), sig9(lower));
        }
        Command::Eigen { domain, num_eigs, output } => {
            let spec = load_domain(domain)?;
            let s = compute_spectrum(&spec, domain.resolution, *num_eigs)?;
            emit(output, || s.to_csv(), || spectrum_table(&s).to_json())?;
            println!("eigen lambda_1 {} lambda_{} {}", sig9(s.eigenvalues[0]), s.count, sig9(s.max_eigenvalue()));
        }
        Command::Verify { domain, num_eigs, lambda_max, lambda_points, hardy_c, slack, output } => {
            let spec = load_domain(domain)?;
            if *lambda_points == 0 {
                return usage("lambda_points must be at least 1");
            }
            let s = compute_spectrum(&spec, domain.resolution, *num_eigs)?;
            let field = DistanceField::new(&spec, domain.resolution)?;
            let metrics = field.metrics(16)?;
            let c = hardy_c.or(matches!(spec, DomainSpec::CcBall { .. }).then_some(2.0));
            let params =
                BoundParams::new(metrics.volume, metrics.in_radius, metrics.unit_ball_volume, metrics.sigma, c)
                    .map_err(|e| CliError::Usage(format!("hardy_c: {e}")))?;
            let top = lambda_max.unwrap_or(s.max_eigenvalue());
            if top.is_nan() || top <= 0.0 {
                return usage(format!("lambda_max must be positive, got {top}"));
            }
            let bottom = if top > s.eigenvalues[0] { s.eigenvalues[0] } else { 0.0 };
            let report: BoundReport =
                verify_with_slack(&s, &params, &linear_grid(bottom, top, *lambda_points), *slack)?;
            emit(output, || report.to_csv(), || report.to_json())?;
            let violations = report.violations();
            println!(
                "verify {} eigenvalues up to {}: min margin_hl {}, {} violation(s) beyond {}% slack",
                s.count,
                sig9(report.valid_up_to),
                sig9(report.min_margin_hl()),
                violations.len(),
                slack * 100.0
            );
            if !violations.is_empty() {
                return Ok(Status::BoundViolation);
            }
        }
        Command::Hardy { domain, epsilon, output } => {
            let spec = load_domain(domain)?;
            let q = hardy_quotient(&spec, *epsilon, domain.resolution)?;
            emit_table(
                output,
                &one_row(vec!["epsilon", "quotient", "constant_sq"], &[q.epsilon, q.quotient, q.constant_sq]),
            )?;
            println!(
                "hardy epsilon {} quotient {} constant_sq {}",
                sig9(q.epsilon),
                sig9(q.quotient),
                sig9(q.constant_sq)
            );
        }
    }
    Ok(Status::Ok)
}
