//! Scalar thermodynamic objects: kernels, state densities and transmission
//! amplitudes, each available through a closed form and through the
//! integral (continuous regimes) or lattice-sum (non-critical) route.

pub mod breather;
pub mod density;
pub mod kernels;

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::lax::{critical_s_product, soliton_scalar, Regime, RegimeParams, Sign};
use crate::special::{
    amplitude_integral, amplitude_integral_anchored, amplitude_sum, default_k_max, gamma_ratio, infinite_gamma_product,
    ln_q_gamma, GammaProductTerm, ProductTruncation, QuadratureSpec, Truncated,
};
use crate::{Error, Result, C64, I};

pub use breather::{breather_amplitude, breather_closed};
pub use density::{convolution_density, state_density, Density};
pub use kernels::{AnyKernel, KernelTable, KERNEL_NAMES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    Closed,
    Integral,
    Sum,
}

impl std::fmt::Display for Route {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Route::Closed => "closed",
            Route::Integral => "integral",
            Route::Sum => "sum",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AmplitudeResult {
    pub value: C64,
    pub route: Route,
    pub error_estimate: f64,
}

impl AmplitudeResult {
    fn new(value: C64, route: Route, error_estimate: f64) -> Self {
        Self {
            value,
            route,
            error_estimate: error_estimate.max(0.0),
        }
    }

    fn from_truncated(t: Truncated, route: Route) -> Self {
        Self::new(t.value, route, t.error)
    }
}

/// Truncation settings shared by every route.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmplitudeConfig {
    pub quadrature: QuadratureSpec,
    pub product: ProductTruncation,
    /// Lattice sums stop once the kernel envelope `e^{−decay·k}` is below this.
    pub sum_tol: f64,
}

impl Default for AmplitudeConfig {
    fn default() -> Self {
        Self {
            quadrature: QuadratureSpec::default(),
            product: ProductTruncation::default(),
            sum_tol: 1e-17,
        }
    }
}

/// Relative rounding level assigned to closed Gamma-ratio forms.
const CLOSED_REL_ERR: f64 = 1e-14;

pub(crate) fn as_pole(e: Error, at: C64) -> Error {
    match e {
        Error::GammaPole { .. } | Error::RatioPole { .. } | Error::QGammaPole { .. } => {
            Error::PrefactorPole { at, value: 0.0 }
        }
        other => other,
    }
}

fn unavailable(what: &str, route: Route, regime: Regime) -> Error {
    Error::InvalidParameter(format!("{what} has no {route} route in the {regime} regime"))
}

/// `ln Γ_Q(x)` and its truncation error.
fn ln_qg(x: C64, q: f64, trunc: &ProductTruncation) -> Result<Truncated> {
    ln_q_gamma(x, q, trunc).map_err(|e| as_pole(e, x))
}

/// `∏Γ_Q(num)/∏Γ_Q(den)` with a propagated error.
fn q_gamma_ratio(num: &[C64], den: &[C64], q: f64, trunc: &ProductTruncation) -> Result<(C64, f64)> {
    let mut ln = C64::new(0.0, 0.0);
    let mut err = 0.0;
    for (args, s) in [(num, 1.0), (den, -1.0)] {
        for &x in args {
            let t = ln_qg(x, q, trunc)?;
            ln += t.value * s;
            err += t.error;
        }
    }
    let v = ln.exp();
    Ok((v, v.norm() * (err + CLOSED_REL_ERR)))
}

fn closed_gamma(num: &[C64], den: &[C64], at: C64) -> Result<(C64, f64)> {
    let v = gamma_ratio(num, den).map_err(|e| as_pole(e, at))?;
    Ok((v, v.norm() * CLOSED_REL_ERR))
}

/// Factors of the critical `T^±` product, each divided by its value at `λ̂ = 0`
/// so that the product converges and `T^±(0) = 1`.
pub fn critical_amplitude_product(sign: Sign, gamma: f64, lambda_hat: C64) -> Result<GammaProductTerm> {
    let x = I * lambda_hat;
    let (g1, g3) = (gamma / 2.0, 1.5 * gamma);
    let r = |v: f64| C64::new(v, 0.0);
    match sign {
        Sign::Plus => GammaProductTerm::new(
            vec![x + g1, -x + g1 + 1.0, r(g3), r(g3 + 1.0)],
            vec![x + g3, -x + g3 + 1.0, r(g1), r(g1 + 1.0)],
            2.0 * gamma,
        ),
        Sign::Minus => GammaProductTerm::new(
            vec![x + g3 + 1.0, -x + g3, r(g1 + 1.0), r(g1)],
            vec![x + g1 + 1.0, -x + g1, r(g3 + 1.0), r(g3)],
            2.0 * gamma,
        ),
    }
}

/// The non-critical `T^±` exactly as the `Γ_{q⁴}` ratios, without the
/// `(1−q⁴)^{±1/2}` normalization that the lattice sum produces.
pub fn noncritical_printed_amplitude(sign: Sign, lambda_hat: f64, eta: f64, trunc: &ProductTruncation) -> Result<C64> {
    let q4 = (-4.0 * eta).exp();
    let z = I * (lambda_hat / 2.0);
    let (num, den) = match sign {
        Sign::Plus => (-z + 0.75, -z + 0.25),
        Sign::Minus => (z + 0.25, z + 0.75),
    };
    q_gamma_ratio(&[num], &[den], q4, trunc).map(|(v, _)| v)
}

/// Closed form of `T^±` at a possibly complex `λ̂`, with an error estimate.
/// Conventions as in [`amplitude`].
pub fn closed_amplitude(params: &RegimeParams, sign: Sign, lambda_hat: C64, trunc: &ProductTruncation) -> Result<(C64, f64)> {
    let z = I * lambda_hat / 2.0;
    match params.regime() {
        Regime::Xxx => match sign {
            Sign::Plus => closed_gamma(&[-z + 0.25], &[-z + 0.75], lambda_hat),
            Sign::Minus => closed_gamma(&[z + 0.75], &[z + 0.25], lambda_hat),
        },
        Regime::Critical => {
            let g = params.gamma().expect("critical");
            let term = critical_amplitude_product(sign, g, lambda_hat)?;
            infinite_gamma_product(&term, trunc)
                .map(|t| (t.value, t.error))
                .map_err(|e| as_pole(e, lambda_hat))
        }
        Regime::NonCritical => {
            let eta = params.eta().expect("non-critical");
            let q4 = (-4.0 * eta).exp();
            let norm = (-(-4.0 * eta).exp_m1()).sqrt();
            let ((v, err), f) = match sign {
                Sign::Plus => (q_gamma_ratio(&[-z + 0.75], &[-z + 0.25], q4, trunc)?, norm),
                Sign::Minus => (q_gamma_ratio(&[z + 0.25], &[z + 0.75], q4, trunc)?, 1.0 / norm),
            };
            Ok((v * f, err * f))
        }
    }
}

/// Closed `Γ_{q⁴}` form of the spin-`S` amplitude at a possibly complex `λ̂`.
pub fn type2_closed(lambda_hat: C64, eta: f64, two_s: usize, trunc: &ProductTruncation) -> Result<(C64, f64)> {
    if two_s == 0 {
        return Err(Error::InvalidParameter("2S must be a positive integer".into()));
    }
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!("η must be > 0, got {eta}")));
    }
    let h = (two_s as f64 - 1.0) / 4.0;
    let z = I * lambda_hat / 2.0;
    q_gamma_ratio(&[-z + h + 0.25, z + h + 0.75], &[-z + h + 0.75, z + h + 0.25], (-4.0 * eta).exp(), trunc)
}

/// Soliton/hole–defect transmission amplitude `T^±(λ̂)`.
///
/// - XXX: Gamma ratio, or the integral of `r̂ₜ^±`.
/// - Critical: the convergent product normalized to `T^±(0) = 1`, or the
///   integral of `r̂ₜ^±` with the same normalization (the kernel has a pole at
///   `ω = 0`, so only differences in `λ̂` are finite).
/// - Non-critical: the lattice sum of `r̂ₜ^±`, or the `Γ_{q⁴}` ratio times
///   `(1−q⁴)^{±1/2}`, which is what the sum evaluates to.
pub fn amplitude(params: &RegimeParams, sign: Sign, lambda_hat: f64, route: Route, cfg: &AmplitudeConfig) -> Result<AmplitudeResult> {
    let regime = params.regime();
    let at = C64::new(lambda_hat, 0.0);
    let kernel_name = format!("rt{sign}");
    match (regime, route) {
        (_, Route::Closed) => {
            let (v, err) = closed_amplitude(params, sign, at, &cfg.product)?;
            Ok(AmplitudeResult::new(v, route, err))
        }
        (Regime::Xxx, Route::Integral) => {
            let k = KernelTable::new(*params).continuous(&kernel_name)?;
            amplitude_integral(&k, lambda_hat, &cfg.quadrature).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        (Regime::Critical, Route::Integral) => {
            let k = KernelTable::new(*params).continuous(&kernel_name)?;
            amplitude_integral_anchored(&k, lambda_hat, &cfg.quadrature).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        (Regime::NonCritical, Route::Sum) => {
            let eta = params.eta().expect("non-critical");
            let k = KernelTable::new(*params).discrete(&kernel_name)?;
            let k_max = default_k_max(k.decay(), cfg.sum_tol);
            amplitude_sum(&k, lambda_hat, eta, k_max).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        _ => Err(unavailable("T^±", route, regime)),
    }
}

/// Spin-`S` defect amplitude in the non-critical regime, `S̃ = S − 1/2`.
pub fn type2_amplitude(lambda_hat: f64, eta: f64, two_s: usize, route: Route, cfg: &AmplitudeConfig) -> Result<AmplitudeResult> {
    let params = RegimeParams::noncritical(eta, 0.0)?;
    let table = KernelTable::new(params);
    match route {
        Route::Closed => {
            let (v, err) = type2_closed(C64::new(lambda_hat, 0.0), eta, two_s, &cfg.product)?;
            Ok(AmplitudeResult::new(v, route, err))
        }
        Route::Sum => {
            let k = table.type2(two_s)?;
            let k_max = default_k_max(k.decay(), cfg.sum_tol);
            amplitude_sum(&k, lambda_hat, eta, k_max).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        Route::Integral => Err(unavailable("the type-II amplitude", route, Regime::NonCritical)),
    }
}

/// Scalar prefactor `S_s(λ)` of the bulk S-matrix, in closed form or from the
/// hole-hole kernel `r̂`.
pub fn soliton_s_amplitude(params: &RegimeParams, lambda: f64, route: Route, cfg: &AmplitudeConfig) -> Result<AmplitudeResult> {
    let at = C64::new(lambda, 0.0);
    let regime = params.regime();
    match (regime, route) {
        (_, Route::Closed) => {
            let v = soliton_scalar(params, at, &cfg.product).map_err(|e| as_pole(e, at))?;
            let err = match regime {
                Regime::Critical => {
                    let term = critical_s_product(params.gamma().expect("critical"), at)?;
                    infinite_gamma_product(&term, &cfg.product)?.error
                }
                _ => v.norm() * CLOSED_REL_ERR,
            };
            Ok(AmplitudeResult::new(v, route, err))
        }
        (Regime::Xxx | Regime::Critical, Route::Integral) => {
            let k = KernelTable::new(*params).continuous("r")?;
            amplitude_integral(&k, lambda, &cfg.quadrature).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        (Regime::NonCritical, Route::Sum) => {
            let eta = params.eta().expect("non-critical");
            let k = KernelTable::new(*params).discrete("r")?;
            let k_max = default_k_max(k.decay(), cfg.sum_tol);
            amplitude_sum(&k, lambda, eta, k_max).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        _ => Err(unavailable("S_s", route, regime)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CouplingSector {
    Attractive,
    Boundary,
    Repulsive,
}

/// Sine-Gordon coupling candidates for an anisotropy `μ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CouplingMap {
    pub mu: f64,
    /// `8(π − μ)`.
    pub repulsive_beta2: f64,
    /// `8μ`.
    pub attractive_beta2: f64,
    pub sector: CouplingSector,
}

impl CouplingMap {
    /// `β²` of the selected sector (both candidates coincide at the boundary).
    pub fn beta2(&self) -> f64 {
        match self.sector {
            CouplingSector::Repulsive => self.repulsive_beta2,
            _ => self.attractive_beta2,
        }
    }
}

/// Sector split at `μ = π/2`: below it `β² = 8μ < 4π` (attractive), above
/// it `β² = 8(π − μ)`.
pub fn coupling_map(mu: f64) -> Result<CouplingMap> {
    if !(mu > 0.0 && mu < PI) {
        return Err(Error::InvalidParameter(format!("μ must lie in (0, π), got {mu}")));
    }
    let half = PI / 2.0;
    let sector = if (mu - half).abs() < 1e-12 {
        CouplingSector::Boundary
    } else if mu < half {
        CouplingSector::Attractive
    } else {
        CouplingSector::Repulsive
    };
    Ok(CouplingMap {
        mu,
        repulsive_beta2: 8.0 * (PI - mu),
        attractive_beta2: 8.0 * mu,
        sector,
    })
}
