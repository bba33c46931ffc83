//! Row types and builders for `amplitude`, `spectrum` and `bae`.

use std::f64::consts::PI;

use clap::ValueEnum;
use defect_core::amplitudes::{
    amplitude, breather_amplitude, breather_closed, soliton_s_amplitude, type2_amplitude, AmplitudeConfig, Route,
};
use defect_core::lax::{Regime, RegimeParams, Sign};
use defect_core::monodromy::{bae_residual, commuting_norms, reference_residual, sector_spectrum, solve_bae, BaeKind, ChainSpec};
use defect_core::{c, C64};
use serde::Serialize;

use crate::config::{Failure, RunConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    /// Soliton/hole–defect `T^±`.
    Soliton,
    /// `n`-breather amplitudes `T_b^{±(n)}` (critical).
    Breather,
    /// Spin-`S` amplitude (non-critical).
    Type2,
    /// Bulk S-matrix scalar `S_s`.
    SMatrix,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignArg {
    Plus,
    Minus,
}

impl From<SignArg> for Sign {
    fn from(s: SignArg) -> Self {
        match s {
            SignArg::Plus => Sign::Plus,
            SignArg::Minus => Sign::Minus,
        }
    }
}

/// One grid point of a `±` pair of amplitudes. A pole leaves the values
/// empty and is named in `status`.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct PairRow {
    pub lambda: f64,
    pub plus_re: Option<f64>,
    pub plus_im: Option<f64>,
    pub minus_re: Option<f64>,
    pub minus_im: Option<f64>,
    pub discrepancy: Option<f64>,
    pub status: String,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScalarRow {
    pub lambda: f64,
    pub re: Option<f64>,
    pub im: Option<f64>,
    pub discrepancy: Option<f64>,
    pub status: String,
}

pub enum AmplitudeTable {
    Pair(Vec<PairRow>),
    Scalar(Vec<ScalarRow>),
}

impl AmplitudeTable {
    pub fn worst_discrepancy(&self) -> f64 {
        let it: Vec<Option<f64>> = match self {
            AmplitudeTable::Pair(r) => r.iter().map(|r| r.discrepancy).collect(),
            AmplitudeTable::Scalar(r) => r.iter().map(|r| r.discrepancy).collect(),
        };
        it.into_iter().flatten().fold(0.0, f64::max)
    }
}

fn pair_row(lambda: f64, eval: impl Fn() -> defect_core::Result<(C64, C64, f64)>) -> PairRow {
    match eval() {
        Ok((p, m, d)) => PairRow {
            lambda,
            plus_re: Some(p.re),
            plus_im: Some(p.im),
            minus_re: Some(m.re),
            minus_im: Some(m.im),
            discrepancy: Some(d),
            status: "ok".into(),
        },
        Err(e) => PairRow {
            lambda,
            plus_re: None,
            plus_im: None,
            minus_re: None,
            minus_im: None,
            discrepancy: None,
            status: format!("pole: {e}"),
        },
    }
}

fn scalar_row(lambda: f64, eval: impl Fn() -> defect_core::Result<(C64, f64)>) -> ScalarRow {
    match eval() {
        Ok((v, d)) => ScalarRow {
            lambda,
            re: Some(v.re),
            im: Some(v.im),
            discrepancy: Some(d),
            status: "ok".into(),
        },
        Err(e) => ScalarRow {
            lambda,
            re: None,
            im: None,
            discrepancy: None,
            status: format!("pole: {e}"),
        },
    }
}

fn alternative_route(p: &RegimeParams) -> Route {
    match p.regime() {
        Regime::NonCritical => Route::Sum,
        _ => Route::Integral,
    }
}

/// Default discrepancy tolerance of a family in a regime.
pub fn route_tolerance(p: &RegimeParams, family: Family, order: usize) -> f64 {
    match (family, p.regime()) {
        (Family::Breather, _) if order > 1 => 1e-14,
        (Family::Type2, _) | (_, Regime::NonCritical) => 1e-8,
        _ => 1e-6,
    }
}

pub fn amplitude_table(cfg: &RunConfig, family: Family, order: usize) -> Result<AmplitudeTable, Failure> {
    let p = cfg.params;
    let acfg = AmplitudeConfig::default();
    let alt = alternative_route(&p);
    let pts = cfg.grid.points();
    Ok(match family {
        Family::Soliton => AmplitudeTable::Pair(
            pts.iter()
                .map(|&x| {
                    pair_row(x, || {
                        let tp = amplitude(&p, Sign::Plus, x, Route::Closed, &acfg)?.value;
                        let tm = amplitude(&p, Sign::Minus, x, Route::Closed, &acfg)?.value;
                        let dp = (amplitude(&p, Sign::Plus, x, alt, &acfg)?.value - tp).norm();
                        let dm = (amplitude(&p, Sign::Minus, x, alt, &acfg)?.value - tm).norm();
                        Ok((tp, tm, dp.max(dm)))
                    })
                })
                .collect(),
        ),
        Family::Breather => {
            let Some(gamma) = p.gamma() else {
                return Err(Failure::Usage("breather amplitudes need the critical regime".into()));
            };
            if order == 0 {
                return Err(Failure::Usage("--order must be >= 1".into()));
            }
            AmplitudeTable::Pair(
                pts.iter()
                    .map(|&x| pair_row(x, || breather_point(x, gamma, order, &acfg)))
                    .collect(),
            )
        }
        Family::Type2 => {
            let Some(eta) = p.eta() else {
                return Err(Failure::Usage("type-II amplitudes need the noncritical regime".into()));
            };
            let two_s = cfg.two_s.unwrap_or(1);
            AmplitudeTable::Scalar(
                pts.iter()
                    .map(|&x| {
                        scalar_row(x, || {
                            let v = type2_amplitude(x, eta, two_s, Route::Closed, &acfg)?.value;
                            let d = (type2_amplitude(x, eta, two_s, Route::Sum, &acfg)?.value - v).norm();
                            Ok((v, d))
                        })
                    })
                    .collect(),
            )
        }
        Family::SMatrix => AmplitudeTable::Scalar(
            pts.iter()
                .map(|&x| {
                    scalar_row(x, || {
                        let v = soliton_s_amplitude(&p, x, Route::Closed, &acfg)?.value;
                        let d = (soliton_s_amplitude(&p, x, alt, &acfg)?.value - v).norm();
                        Ok((v, d))
                    })
                })
                .collect(),
        ),
    })
}

/// `n = 1`: closed values, discrepancy against the integral route (whose
/// minus-sign value is `−closed`). `n ≥ 2`: fused values, discrepancy against
/// the product of shifted `n = 1` evaluations.
fn breather_point(x: f64, gamma: f64, n: usize, acfg: &AmplitudeConfig) -> defect_core::Result<(C64, C64, f64)> {
    let tp = breather_amplitude(Sign::Plus, n, x, gamma, Route::Closed, acfg)?.value;
    let tm = breather_amplitude(Sign::Minus, n, x, gamma, Route::Closed, acfg)?.value;
    let d = if n == 1 {
        let ip = breather_amplitude(Sign::Plus, 1, x, gamma, Route::Integral, acfg)?.value;
        let im = breather_amplitude(Sign::Minus, 1, x, gamma, Route::Integral, acfg)?.value;
        (ip - tp).norm().max((im + tm).norm())
    } else {
        let shifted = |s: Sign| -> defect_core::Result<C64> {
            (1..=n).try_fold(c(1.0), |acc, l| {
                let z = C64::new(x, 0.5 * (n as f64 + 1.0 - 2.0 * l as f64));
                Ok(acc * breather_closed(s, z * (PI / gamma), gamma)?)
            })
        };
        let dp = (shifted(Sign::Plus)? - tp).norm() / tp.norm();
        let dm = (shifted(Sign::Minus)? - tm).norm() / tm.norm();
        dp.max(dm)
    };
    Ok((tp, tm, d))
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SpectrumRow {
    pub lambda: f64,
    pub charge: usize,
    pub sector_dim: usize,
    pub exact: bool,
    pub index: usize,
    pub eig_re: f64,
    pub eig_im: f64,
    pub reference_re: f64,
    pub reference_im: f64,
    pub reference_residual: f64,
    pub commutator_residual: f64,
}

/// Eigenvalues of `t(λ)` by charge sector. `lambda2` is the partner point of
/// the commutator column.
pub fn spectrum_table(cfg: &RunConfig, n_bulk: usize, defect_site: usize, lambda2: f64) -> Result<Vec<SpectrumRow>, Failure> {
    let rep = cfg.params.defect_rep(cfg.fock_dim)?;
    let spec = ChainSpec::new(n_bulk, defect_site, cfg.params, rep)?;
    let mut rows = Vec::new();
    for x in cfg.grid.points() {
        let lam = c(x);
        let reference = spec.reference_eigenvalue(lam);
        let ref_res = reference_residual(&spec, lam)?.residual;
        let comm = commuting_norms(&spec, lam, c(lambda2))?.0;
        for sector in sector_spectrum(&spec, lam)? {
            for (index, e) in sector.eigenvalues.iter().enumerate() {
                rows.push(SpectrumRow {
                    lambda: x,
                    charge: sector.charge,
                    sector_dim: sector.dim,
                    exact: sector.exact,
                    index,
                    eig_re: e.re,
                    eig_im: e.im,
                    reference_re: reference.re,
                    reference_im: reference.im,
                    reference_residual: ref_res,
                    commutator_residual: comm,
                });
            }
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BaeRow {
    pub index: usize,
    pub root_re: f64,
    pub root_im: f64,
    pub residual_re: f64,
    pub residual_im: f64,
    pub residual_abs: f64,
}

/// Solves (or, with `eval_only`, evaluates) the Bethe equations from the
/// given starting roots.
pub fn bae_table(
    cfg: &RunConfig,
    n_bulk: usize,
    sign: Sign,
    initial: &[C64],
    eval_only: bool,
    tol: f64,
) -> Result<Vec<BaeRow>, Failure> {
    let kind = match cfg.two_s {
        Some(two_s) => BaeKind::TypeII { two_s },
        None => BaeKind::Standard(sign),
    };
    let roots = if eval_only || initial.is_empty() {
        initial.to_vec()
    } else {
        solve_bae(&cfg.params, n_bulk, kind, initial, tol, 200).map_err(|e| Failure::Runtime(e.to_string()))?
    };
    let res = bae_residual(&cfg.params, n_bulk, kind, &roots)?;
    Ok(roots
        .iter()
        .zip(res)
        .enumerate()
        .map(|(index, (r, f))| BaeRow {
            index,
            root_re: r.re,
            root_im: r.im,
            residual_re: f.re,
            residual_im: f.im,
            residual_abs: f.norm(),
        })
        .collect())
}

/// Parses `re,im` (or a bare real part).
pub fn parse_complex(s: &str) -> Result<C64, String> {
    let (re, im) = match s.split_once(',') {
        Some((a, b)) => (a, b),
        None => (s, "0"),
    };
    let f = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("{x:?}: {e}"));
    Ok(C64::new(f(re)?, f(im)?))
}
