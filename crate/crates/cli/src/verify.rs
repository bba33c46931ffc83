//! The identity suite behind `defects verify`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use defect_core::amplitudes::{
    amplitude, breather_amplitude, breather_closed, closed_amplitude, soliton_s_amplitude, type2_amplitude, AmplitudeConfig, Route,
};
use defect_core::lax::{make_r, make_s_matrix, rll_residual, unitarity_residuals, yang_baxter_residual, LaxPair, Regime, Sign};
use defect_core::monodromy::{charge_residual, commuting_norms, reference_residual, rtt_norms, ChainSpec};
use defect_core::special::ProductTruncation;
use defect_core::tmatrix::{rttb_residual, type2_rttb_residual, unitarity_crossing_residual, TransmissionPair, TypeIIMatrix, Which};
use defect_core::{c, C64, I};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::config::RunConfig;

/// Number of seeded spectral pairs.
pub const PAIRS: usize = 3;
/// Bulk sites of the chain used for RTT and the commuting family.
pub const CHAIN_SITES: usize = 3;

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub identity: String,
    pub params: String,
    /// Absent when the evaluation itself failed.
    pub residual: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub detail: String,
}

struct Suite<'a> {
    cfg: &'a RunConfig,
    records: Vec<Record>,
}

impl Suite<'_> {
    fn push(&mut self, identity: &str, params: String, default_tol: f64, out: defect_core::Result<(f64, String)>) {
        let tolerance = self.cfg.tol_or(default_tol);
        let (residual, detail) = match out {
            Ok((r, d)) => (Some(r), d),
            Err(e) => (None, e.to_string()),
        };
        let pass = residual.is_some_and(|r| r.is_finite() && r < tolerance);
        self.records.push(Record {
            identity: identity.to_string(),
            params,
            residual,
            tolerance,
            pass,
            detail,
        });
    }
}

fn pair_label(l1: f64, l2: f64) -> String {
    format!("l1={l1:.6};l2={l2:.6}")
}

fn max_over<T>(items: impl IntoIterator<Item = T>, f: impl Fn(T) -> defect_core::Result<f64>) -> defect_core::Result<f64> {
    items.into_iter().try_fold(0.0f64, |acc, x| Ok(acc.max(f(x)?)))
}

/// Seeded spectral pairs in `[-1.5, 1.5]`.
pub fn spectral_pairs(seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..PAIRS).map(|_| (rng.random_range(-1.5..1.5), rng.random_range(-1.5..1.5))).collect()
}

pub fn header_extra(seed: u64) -> BTreeMap<String, f64> {
    let mut extra = BTreeMap::new();
    for (k, (a, b)) in spectral_pairs(seed).into_iter().enumerate() {
        extra.insert(format!("pair{k}.l1"), a);
        extra.insert(format!("pair{k}.l2"), b);
    }
    extra
}

pub fn run(cfg: &RunConfig) -> Vec<Record> {
    let p = cfg.params;
    let d = cfg.fock_dim;
    let trunc = ProductTruncation::default();
    let amp_cfg = AmplitudeConfig::default();
    let mut s = Suite { cfg, records: Vec::new() };
    let rep = p.defect_rep(d);
    let chain = rep.clone().and_then(|r| ChainSpec::new(CHAIN_SITES, 1, p, r));
    let pair = TransmissionPair::new(p, d);
    let type2 = (p.regime() == Regime::NonCritical).then(|| TypeIIMatrix::new(p.eta().expect("non-critical"), cfg.two_s.unwrap_or(1)));

    for (a, b) in spectral_pairs(cfg.seed) {
        let (l1, l2) = (c(a), c(b));
        let lbl = pair_label(a, b);
        s.push("yang-baxter R", lbl.clone(), 1e-10, yang_baxter_residual(|x| Ok(make_r(&p, x)), l1, l2).map(|r| (r, "absolute".into())));
        s.push(
            "yang-baxter S",
            lbl.clone(),
            1e-10,
            yang_baxter_residual(|x| make_s_matrix(&p, x, &trunc), l1, l2).map(|r| (r, "absolute".into())),
        );
        s.push(
            "RLL",
            lbl.clone(),
            1e-11,
            rep.clone().and_then(|r| rll_residual(&p, &r, l1, l2)).map(|r| (r.residual, r.subspace)),
        );
        s.push(
            "RTT",
            lbl.clone(),
            1e-10,
            chain.clone().and_then(|ch| rtt_norms(&ch, l1, l2)).map(|(r, n)| (r / n, format!("relative to |R T T P| = {n:.3e}"))),
        );
        s.push(
            "commuting transfer matrices",
            lbl.clone(),
            1e-10,
            chain
                .clone()
                .and_then(|ch| commuting_norms(&ch, l1, l2))
                .map(|(r, n)| (r / n, format!("relative to |t t P| = {n:.3e}"))),
        );
        for which in [Which::T, Which::TBar] {
            s.push(
                &format!("rttb {which}"),
                lbl.clone(),
                1e-9,
                pair.clone().and_then(|pr| rttb_residual(&pr, which, l1, l2)).map(|r| (r.residual, r.subspace)),
            );
        }
        match pair.clone().and_then(|pr| unitarity_crossing_residual(&pr, l1)) {
            Ok([u, x]) => {
                s.push("uni-cross unitarity", format!("l={a:.6}"), 1e-9, Ok((u.residual, u.identity)));
                s.push("uni-cross crossing", format!("l={a:.6}"), 1e-9, Ok((x.residual, x.identity)));
            }
            Err(e) => s.push("uni-cross", format!("l={a:.6}"), 1e-9, Err(e)),
        }
        if let Some(m) = &type2 {
            s.push(
                "rttb type-II",
                lbl.clone(),
                1e-9,
                m.clone().and_then(|m| type2_rttb_residual(&m, l1, l2)).map(|r| (r.residual, r.identity)),
            );
        }
    }

    let lax_grid: Vec<C64> = (0..9).map(|k| c(-1.7 + 0.45 * k as f64)).collect();
    let lax = rep.clone().and_then(|r| LaxPair::new(p, r));
    s.push(
        "L-hat two routes",
        "9-point grid [-1.7, 1.9]".into(),
        1e-13,
        lax.clone()
            .and_then(|lp| {
                max_over(&lax_grid, |&x| {
                    let d = lp.l_hat(x)?.matrix() - lp.l_hat_crossed(x)?.matrix();
                    Ok(d.iter().map(|z| z.norm()).fold(0.0, f64::max))
                })
            })
            .map(|r| (r, "max entry".into())),
    );
    s.push(
        "unitarity and crossing-unitarity scalars",
        "9-point grid [-1.7, 1.9]".into(),
        1e-11,
        lax.and_then(|lp| unitarity_residuals(&lp, &lax_grid)).map(|u| {
            let worst = u.reports.iter().map(|r| r.residual).fold(0.0, f64::max);
            (worst, format!("{} checks, {} skipped at scalar zeros", u.reports.len(), u.skipped.len()))
        }),
    );
    let (a0, _) = spectral_pairs(cfg.seed)[0];
    s.push(
        "reference state eigenvalue",
        format!("l={a0:.6}"),
        1e-10,
        chain.clone().and_then(|ch| reference_residual(&ch, c(a0))).map(|r| (r.residual, "relative".into())),
    );
    s.push(
        "charge conservation",
        format!("l={a0:.6}"),
        1e-12,
        chain.and_then(|ch| charge_residual(&ch, c(a0))).map(|r| (r.residual, r.subspace)),
    );

    let grid = cfg.grid.points();
    let glabel = format!("grid {}:{}:{}", cfg.grid.start, cfg.grid.stop, cfg.grid.count);
    let (alt, route_tol) = match p.regime() {
        Regime::NonCritical => (Route::Sum, 1e-8),
        _ => (Route::Integral, 1e-6),
    };
    for sign in [Sign::Plus, Sign::Minus] {
        s.push(
            &format!("amplitude T{sign} routes"),
            glabel.clone(),
            route_tol,
            max_over(&grid, |&x| {
                Ok((amplitude(&p, sign, x, alt, &amp_cfg)?.value - amplitude(&p, sign, x, Route::Closed, &amp_cfg)?.value).norm())
            })
            .map(|r| (r, format!("{alt} vs closed"))),
        );
    }
    s.push(
        "amplitude unitarity",
        glabel.clone(),
        1e-10,
        max_over(&grid, |&x| {
            let prod = closed_amplitude(&p, Sign::Minus, c(x), &trunc)?.0 * closed_amplitude(&p, Sign::Plus, c(-x), &trunc)?.0;
            Ok((prod - 1.0).norm())
        })
        .map(|r| (r, "T-(l) T+(-l) = 1".into())),
    );
    s.push(
        "S_s routes",
        glabel.clone(),
        route_tol,
        max_over(&grid, |&x| {
            Ok((soliton_s_amplitude(&p, x, alt, &amp_cfg)?.value - soliton_s_amplitude(&p, x, Route::Closed, &amp_cfg)?.value).norm())
        })
        .map(|r| (r, format!("{alt} vs closed"))),
    );
    if let Some(gamma) = p.gamma() {
        breather_records(&mut s, gamma, &grid, &glabel, &amp_cfg);
    }
    if let (Some(eta), Some(_)) = (p.eta(), &type2) {
        let two_s = cfg.two_s.unwrap_or(1);
        s.push(
            "type-II routes",
            format!("{glabel};2S={two_s}"),
            1e-8,
            max_over(&grid, |&x| {
                Ok((type2_amplitude(x, eta, two_s, Route::Sum, &amp_cfg)?.value
                    - type2_amplitude(x, eta, two_s, Route::Closed, &amp_cfg)?.value)
                    .norm())
            })
            .map(|r| (r, "sum vs closed".into())),
        );
    }
    s.records
}

fn breather_records(s: &mut Suite<'_>, gamma: f64, grid: &[f64], glabel: &str, amp_cfg: &AmplitudeConfig) {
    s.push(
        "breather crossing",
        glabel.to_string(),
        1e-10,
        max_over(grid, |&x| {
            let th = c(PI * x / gamma);
            Ok((breather_closed(Sign::Minus, th, gamma)? - breather_closed(Sign::Plus, -th + I * PI, gamma)?).norm())
        })
        .map(|r| (r, format!("theta = pi l / gamma, gamma = {gamma:.6}"))),
    );
    s.push(
        "breather integral route",
        glabel.to_string(),
        1e-6,
        max_over(grid, |&x| {
            let plus = breather_amplitude(Sign::Plus, 1, x, gamma, Route::Integral, amp_cfg)?.value
                - breather_amplitude(Sign::Plus, 1, x, gamma, Route::Closed, amp_cfg)?.value;
            let minus = breather_amplitude(Sign::Minus, 1, x, gamma, Route::Integral, amp_cfg)?.value
                + breather_amplitude(Sign::Minus, 1, x, gamma, Route::Closed, amp_cfg)?.value;
            Ok(plus.norm().max(minus.norm()))
        })
        .map(|r| (r, "integral vs closed; the minus integral equals -closed".into())),
    );
}

