use std::fs;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use crate::error::CliError;

#[derive(Parser, Debug)]
#[command(
    name = "affsph",
    version,
    about = "Explicit hyperbolic affine spheres: meshes, verification and family sweeps"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Write a triangle mesh of a surface or of a cone boundary.
    Mesh(Flags),
    /// Run the verification suite and write a report.
    Verify(Flags),
    /// Tabulate invariants of a family over a grid of angles t.
    Sweep(Flags),
    /// Find c whose lattice modulus at exponent p matches that of (p1, c1).
    MatchModulus(Flags),
}

impl Command {
    pub fn flags(&self) -> &Flags {
        match self {
            Command::Mesh(f) | Command::Verify(f) | Command::Sweep(f) | Command::MatchModulus(f) => f,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Obj,
    Csv,
    Json,
}

/// Every option can also come from a key-value file given by `--config`;
/// flags on the command line win.
#[derive(Args, Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Flags {
    /// TOML file with defaults for any of the other options.
    #[arg(long)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    /// case1-raw, case1, case1-family, general, family, c-zero, case5, case3, ode-chart or ellipsoid.
    #[arg(long)]
    pub surface: Option<String>,
    /// Cone case 1..5 for `mesh`.
    #[arg(long)]
    pub cone: Option<u8>,
    /// Family member as p=..,c=..,t=..[,s=..].
    #[arg(long, allow_hyphen_values = true)]
    pub family: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub q: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub s: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub t: Option<f64>,
    /// Lower opening of the case-4 cone.
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub p1: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    pub c1: Option<f64>,
    /// Grid resolution AxB.
    #[arg(long)]
    pub grid: Option<String>,
    /// Parameter range a,b along the first chart coordinate.
    #[arg(long, allow_hyphen_values = true)]
    pub xrange: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub yrange: Option<String>,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Overrides the tolerance of every check that runs.
    #[arg(long, allow_hyphen_values = true)]
    pub tol: Option<f64>,
    /// Run a single named check.
    #[arg(long)]
    pub only: Option<String>,
    /// Number of angles in [0, 2π/3) for `sweep`.
    #[arg(long)]
    pub tcount: Option<usize>,
}

macro_rules! prefer {
    ($a:expr, $b:expr, $($f:ident),*) => {
        Flags { config: $a.config.clone(), $($f: $a.$f.clone().or($b.$f.clone()),)* }
    };
}

impl Flags {
    /// Fill unset options from the config file, if one is named.
    pub fn resolve(&self) -> Result<Flags, CliError> {
        let Some(path) = &self.config else {
            return Ok(self.clone());
        };
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        let file: Flags =
            toml::from_str(&text).map_err(|e| CliError::Config(format!("config {}: {e}", path.display())))?;
        Ok(prefer!(
            self, file, surface, cone, family, p, q, c, s, t, alpha, p1, c1, grid, xrange, yrange, out, format, tol,
            only, tcount
        ))
    }

    pub fn grid(&self) -> Result<Option<(usize, usize)>, CliError> {
        let Some(g) = &self.grid else { return Ok(None) };
        let bad = || CliError::Config(format!("--grid expects AxB with A, B >= 2, got {g:?}"));
        let (a, b) = g.split_once(['x', 'X']).ok_or_else(bad)?;
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().parse().map_err(|_| bad())?;
        if a < 2 || b < 2 {
            return Err(bad());
        }
        Ok(Some((a, b)))
    }

    pub fn xrange(&self) -> Result<Option<(f64, f64)>, CliError> {
        parse_range("--xrange", self.xrange.as_deref())
    }

    pub fn yrange(&self) -> Result<Option<(f64, f64)>, CliError> {
        parse_range("--yrange", self.yrange.as_deref())
    }

    pub fn tol(&self) -> Result<Option<f64>, CliError> {
        match self.tol {
            Some(t) if !(t.is_finite() && t > 0.0) => Err(CliError::Config(format!("--tol must be positive, got {t}"))),
            other => Ok(other),
        }
    }
}

fn parse_range(flag: &str, text: Option<&str>) -> Result<Option<(f64, f64)>, CliError> {
    let Some(text) = text else { return Ok(None) };
    let bad = || CliError::Config(format!("{flag} expects a,b with a < b, got {text:?}"));
    let (a, b) = text.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(bad());
    }
    Ok(Some((a, b)))
}
