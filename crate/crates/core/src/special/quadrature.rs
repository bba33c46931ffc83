use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// Offset (midpoint) trapezoid rule; never samples ω = 0.
    Trapezoid,
    /// Composite 16-point Gauss–Legendre panels.
    GaussLegendre,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Upper limit of the folded `[0, cutoff]` integral.
    pub cutoff: f64,
    pub nodes: usize,
    pub scheme: Scheme,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            cutoff: 40.0,
            nodes: 4096,
            scheme: Scheme::GaussLegendre,
        }
    }
}

const PANEL: usize = 16;

impl QuadratureSpec {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff > 0.0) || !self.cutoff.is_finite() {
            return Err(Error::InvalidParameter(format!("cutoff must be > 0, got {}", self.cutoff)));
        }
        if self.nodes < 16 {
            return Err(Error::InvalidParameter(format!("need >= 16 nodes, got {}", self.nodes)));
        }
        Ok(())
    }

    /// Same rule with half the nodes; the difference serves as an error estimate.
    pub fn coarsened(&self) -> Self {
        Self {
            nodes: (self.nodes / 2).max(16),
            ..*self
        }
    }
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 0 { 1.0 } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (z * pn - pn1) / (z * z - 1.0);
            let dz = pn / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

/// `∫_0^cutoff f(ω) dω` with the rule in `spec`. The endpoint `ω = 0` is never sampled.
pub fn integrate_half_line(f: impl Fn(f64) -> C64, spec: &QuadratureSpec) -> Result<C64> {
    spec.validate()?;
    let mut acc = C64::new(0.0, 0.0);
    match spec.scheme {
        Scheme::Trapezoid => {
            let h = spec.cutoff / spec.nodes as f64;
            for j in 0..spec.nodes {
                acc += f((j as f64 + 0.5) * h);
            }
            acc *= h;
        }
        Scheme::GaussLegendre => {
            let (x, w) = gauss_legendre(PANEL);
            let panels = spec.nodes.div_ceil(PANEL);
            let h = spec.cutoff / panels as f64;
            for p in 0..panels {
                let mid = (p as f64 + 0.5) * h;
                for (xi, wi) in x.iter().zip(&w) {
                    acc += f(mid + 0.5 * h * xi) * (wi * 0.5 * h);
                }
            }
        }
    }
    Ok(acc)
}
