use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

#[derive(Debug, Parser)]
#[command(name = "mop-ratio", version, about = "Ratio asymptotics of multiple orthogonal polynomials")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Limits of the recurrence coefficients along a ray (JSON).
    Limits(Settings),
    /// Principal branch, all roots and branch points of the limit equation (JSON).
    Branch(Settings),
    /// Neighbor ratios and log-derivatives at given points (CSV).
    Eval(Settings),
    /// Ratio convergence against the predicted limit (CSV).
    Converge(Settings),
    /// Real zeros (CSV).
    Zeros(Settings),
    /// Zero histogram against the Stieltjes-transform density (CSV).
    Density(Settings),
    /// Runs the acceptance suite.
    Selftest(Settings),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Limits(_) => "limits",
            Command::Branch(_) => "branch",
            Command::Eval(_) => "eval",
            Command::Converge(_) => "converge",
            Command::Zeros(_) => "zeros",
            Command::Density(_) => "density",
            Command::Selftest(_) => "selftest",
        }
    }

    pub fn settings(&self) -> &Settings {
        match self {
            Command::Limits(s)
            | Command::Branch(s)
            | Command::Eval(s)
            | Command::Converge(s)
            | Command::Zeros(s)
            | Command::Density(s)
            | Command::Selftest(s) => s,
        }
    }
}

/// Run configuration. Every field may also come from a JSON file given with
/// `--config`, using the long flag names with `_` for `-`; flags win.
#[derive(Debug, Clone, Default, Args, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Settings {
    /// jacobi-pineiro | hermite | laguerre1 | laguerre2 | charlier | constant | table
    #[arg(long, visible_alias = "limits-from")]
    pub family: Option<String>,
    /// Number of directions (checked against the parameters).
    #[arg(long)]
    pub r: Option<usize>,
    /// Ray direction weights, summing to 1 [default: uniform].
    #[arg(long, value_delimiter = ',')]
    pub q: Option<Vec<f64>>,
    /// Scaling exponent of the ray [default: 0].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Direction, 1-based.
    #[arg(long)]
    pub k: Option<usize>,
    /// Ray parameters n.
    #[arg(long, value_delimiter = ',')]
    pub n: Option<Vec<usize>>,
    /// Explicit multi-index, instead of points on the ray.
    #[arg(long, value_delimiter = ',')]
    pub index: Option<Vec<usize>>,
    /// Points as a+bi strings.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub x: Option<Vec<String>>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub svg: Option<PathBuf>,
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// Double-double arithmetic in the evaluators.
    #[arg(long)]
    pub extended_precision: bool,
    /// Smallest |Im x| for ratio propagation [default: 1e-8].
    #[arg(long)]
    pub delta_min: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub alpha: Option<Vec<f64>>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<f64>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub c: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub a: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub b: Option<Vec<f64>>,
    /// Scale Hermite c_j by sqrt(n) or Charlier a_j by n.
    #[arg(long)]
    pub scale_params: bool,
    /// Coefficient table (JSON); for jacobi-pineiro it supplies b.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Histogram bins [default: 12].
    #[arg(long)]
    pub bins: Option<usize>,
}

impl Settings {
    /// Flags from `self`, gaps filled from `file`.
    pub fn over(self, file: Settings) -> Settings {
        Settings {
            family: self.family.or(file.family),
            r: self.r.or(file.r),
            q: self.q.or(file.q),
            gamma: self.gamma.or(file.gamma),
            k: self.k.or(file.k),
            n: self.n.or(file.n),
            index: self.index.or(file.index),
            x: self.x.or(file.x),
            out: self.out.or(file.out),
            svg: self.svg.or(file.svg),
            config: self.config,
            extended_precision: self.extended_precision || file.extended_precision,
            delta_min: self.delta_min.or(file.delta_min),
            alpha: self.alpha.or(file.alpha),
            beta: self.beta.or(file.beta),
            c: self.c.or(file.c),
            a: self.a.or(file.a),
            b: self.b.or(file.b),
            scale_params: self.scale_params || file.scale_params,
            table: self.table.or(file.table),
            bins: self.bins.or(file.bins),
        }
    }
}
