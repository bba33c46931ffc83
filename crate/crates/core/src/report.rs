use serde::{Deserialize, Serialize};

use crate::C64;

/// Outcome of evaluating one operator or scalar identity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity: String,
    pub spectral: Vec<C64>,
    /// Frobenius norm of `LHS − RHS` restricted to `subspace`.
    pub residual: f64,
    pub subspace: String,
}

impl ResidualReport {
    pub fn new(identity: impl Into<String>, spectral: Vec<C64>, residual: f64, subspace: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            spectral,
            residual,
            subspace: subspace.into(),
        }
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.residual.is_finite() && self.residual < tol
    }
}

/// Largest residual in a batch, `0` when empty.
pub fn worst(reports: &[ResidualReport]) -> f64 {
    reports
        .iter()
        .map(|r| if r.residual.is_finite() { r.residual } else { f64::INFINITY })
        .fold(0.0, f64::max)
}
