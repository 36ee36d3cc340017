use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use hmelas::GroupPoint;

#[derive(Debug, Parser)]
#[command(name = "hmelas", version, about = "C-C geometry and eigenvalue bounds on the Heisenberg group")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Args)]
pub struct Output {
    /// Report file; without it only the summary line is printed.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Args)]
pub struct DomainArgs {
    /// JSON domain description, e.g. {"type":"cc_ball","center":[0,0,0],"radius":1}.
    #[arg(long)]
    pub domain_file: Option<PathBuf>,
    /// Cells per axis of the voxel grid.
    #[arg(long, default_value_t = 32)]
    pub resolution: usize,
}

fn parse_point(s: &str) -> Result<GroupPoint, String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != 3 {
        return Err(format!("expected three comma-separated numbers, got '{s}'"));
    }
    let mut v = [0.0; 3];
    for (slot, part) in v.iter_mut().zip(&parts) {
        *slot = part.parse::<f64>().map_err(|e| format!("'{part}': {e}"))?;
        if !slot.is_finite() {
            return Err(format!("'{part}' is not finite"));
        }
    }
    Ok(GroupPoint::from(v))
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// C-C distance between two points.
    Dist {
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        from: GroupPoint,
        #[arg(long, value_parser = parse_point, allow_hyphen_values = true)]
        to: GroupPoint,
        #[command(flatten)]
        output: Output,
    },
    /// Volume of the unit C-C ball by quadrature and Monte Carlo.
    BallVol {
        /// Quadrature resolution.
        #[arg(long, default_value_t = 128)]
        resolution: usize,
        #[arg(long, default_value_t = 1_000_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        output: Output,
    },
    /// In-radius R(Ω).
    Inradius {
        #[command(flatten)]
        domain: DomainArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Volume of the inner tube {d < β}.
    Tube {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long)]
        beta: Option<f64>,
        #[command(flatten)]
        output: Output,
    },
    /// σ(Ω) = inf |Ω^β|/β.
    Sigma {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 16)]
        n_beta: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Lowest Dirichlet eigenvalues.
    Eigen {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 20)]
        num_eigs: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Riesz means against every bound; exits with status 2 on a violation.
    Verify {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 30)]
        num_eigs: usize,
        /// Top of the λ-grid; defaults to the largest computed eigenvalue.
        #[arg(long)]
        lambda_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        lambda_points: usize,
        /// Hardy constant; defaults to 2 on C-C balls, otherwise the improved bound is skipped.
        #[arg(long)]
        hardy_c: Option<f64>,
        /// Allowed negative margin as a fraction of |Ω|λ³/96.
        #[arg(long, default_value_t = hmelas::bounds::DEFAULT_SLACK)]
        slack: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Energy quotient of d^{1/2+ε} on a C-C ball.
    Hardy {
        #[command(flatten)]
        domain: DomainArgs,
        #[arg(long, default_value_t = 0.125)]
        epsilon: f64,
        #[command(flatten)]
        output: Output,
    },
}
