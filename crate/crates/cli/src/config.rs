use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, ValueEnum};
use defect_core::lax::RegimeParams;
use serde::Serialize;

/// Why a command stopped: bad input (exit 2) or a failed computation (exit 1).
#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Runtime(String),
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Usage(m) => write!(f, "usage error: {m}"),
            Failure::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<defect_core::Error> for Failure {
    fn from(e: defect_core::Error) -> Self {
        match e {
            defect_core::Error::ResourceBound { .. } | defect_core::Error::InvalidParameter(_) => Failure::Usage(e.to_string()),
            other => Failure::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum RegimeArg {
    Xxx,
    Critical,
    Noncritical,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// `start:stop:count`, endpoints included.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Grid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Grid {
    pub fn points(&self) -> Vec<f64> {
        if self.count == 1 {
            return vec![self.start];
        }
        let step = (self.stop - self.start) / (self.count - 1) as f64;
        (0..self.count).map(|k| self.start + step * k as f64).collect()
    }
}

impl FromStr for Grid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parts: Vec<&str> = s.split(':').collect();
        let [a, b, n] = parts[..] else {
            return Err(format!("expected start:stop:count, got {s:?}"));
        };
        let num = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
        let (start, stop) = (num(a)?, num(b)?);
        let count: usize = n.trim().parse().map_err(|e| format!("{n:?}: {e}"))?;
        if count < 1 {
            return Err("grid count must be >= 1".into());
        }
        if !start.is_finite() || !stop.is_finite() {
            return Err("grid endpoints must be finite".into());
        }
        Ok(Self { start, stop, count })
    }
}

/// Parses `1/2`, `0.5` or `1` into `2S`.
pub fn parse_spin(s: &str) -> Result<usize, String> {
    let value = match s.split_once('/') {
        Some((n, d)) => {
            let n: f64 = n.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            let d: f64 = d.trim().parse().map_err(|e| format!("{s:?}: {e}"))?;
            n / d
        }
        None => s.trim().parse().map_err(|e| format!("{s:?}: {e}"))?,
    };
    let two_s = 2.0 * value;
    if !(two_s >= 1.0) || (two_s - two_s.round()).abs() > 1e-12 {
        return Err(format!("spin must be a positive half-integer, got {s}"));
    }
    Ok(two_s.round() as usize)
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    #[arg(long, value_enum, default_value = "xxx")]
    pub regime: RegimeArg,
    /// Anisotropy of the critical regime, 0 < μ < π.
    #[arg(long, allow_hyphen_values = true)]
    pub mu: Option<f64>,
    /// Anisotropy of the non-critical regime, η > 0.
    #[arg(long, allow_hyphen_values = true)]
    pub eta: Option<f64>,
    /// Defect inhomogeneity Θ.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub theta: f64,
    /// Truncation dimension D of the defect space.
    #[arg(long, default_value_t = 6)]
    pub fock_dim: usize,
    /// Spin S of a type-II defect (non-critical only), e.g. 1/2 or 1.
    #[arg(long, value_parser = parse_spin)]
    pub spin: Option<usize>,
    /// Spectral grid as start:stop:count.
    #[arg(long, default_value = "-2:2:21", allow_hyphen_values = true)]
    pub grid: Grid,
    /// Replaces every tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: &'static str,
    pub regime: RegimeArg,
    pub params: RegimeParams,
    pub fock_dim: usize,
    pub two_s: Option<usize>,
    pub grid: Grid,
    pub tol: Option<f64>,
    pub seed: u64,
    pub out: Option<PathBuf>,
    pub format: Format,
}

impl RunConfig {
    pub fn new(command: &'static str, c: &Common, default_format: Format) -> Result<Self, Failure> {
        let usage = |m: &str| Err(Failure::Usage(m.to_string()));
        let params = match c.regime {
            RegimeArg::Xxx => {
                if c.mu.is_some() || c.eta.is_some() {
                    return usage("--mu and --eta do not apply to the xxx regime");
                }
                RegimeParams::xxx(c.theta)
            }
            RegimeArg::Critical => {
                if c.eta.is_some() {
                    return usage("--eta does not apply to the critical regime");
                }
                let Some(mu) = c.mu else {
                    return usage("the critical regime needs --mu");
                };
                RegimeParams::critical(mu, c.theta)?
            }
            RegimeArg::Noncritical => {
                if c.mu.is_some() {
                    return usage("--mu does not apply to the noncritical regime");
                }
                let Some(eta) = c.eta else {
                    return usage("the noncritical regime needs --eta");
                };
                RegimeParams::noncritical(eta, c.theta)?
            }
        };
        if c.spin.is_some() && c.regime != RegimeArg::Noncritical {
            return usage("--spin (type-II defect) needs the noncritical regime");
        }
        if !c.theta.is_finite() {
            return usage("--theta must be finite");
        }
        if let Some(t) = c.tol {
            if !(t >= 0.0) {
                return usage("--tol must be >= 0");
            }
        }
        if c.fock_dim < 3 {
            return usage("--fock-dim must be >= 3");
        }
        Ok(Self {
            command,
            regime: c.regime,
            params,
            fock_dim: c.fock_dim,
            two_s: c.spin,
            grid: c.grid,
            tol: c.tol,
            seed: c.seed,
            out: c.out.clone(),
            format: c.format.unwrap_or(default_format),
        })
    }

    /// The tolerance for one check: the `--tol` override or the default.
    pub fn tol_or(&self, default: f64) -> f64 {
        self.tol.unwrap_or(default)
    }

    pub fn header(&self, extra: BTreeMap<String, f64>) -> Header {
        Header {
            command: self.command,
            regime: self.regime,
            mu: self.params.mu(),
            eta: self.params.eta(),
            theta: self.params.theta,
            fock_dim: self.fock_dim,
            spin: self.two_s.map(|t| t as f64 / 2.0),
            grid: self.grid,
            tol: self.tol,
            seed: self.seed,
            extra,
        }
    }
}

/// First record of every output: the full configuration.
#[derive(Debug, Clone, Serialize)]
pub struct Header {
    pub command: &'static str,
    pub regime: RegimeArg,
    pub mu: Option<f64>,
    pub eta: Option<f64>,
    pub theta: f64,
    pub fock_dim: usize,
    pub spin: Option<f64>,
    pub grid: Grid,
    pub tol: Option<f64>,
    pub seed: u64,
    pub extra: BTreeMap<String, f64>,
}
