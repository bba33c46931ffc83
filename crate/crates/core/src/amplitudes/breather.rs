//! Breather–defect transmission in the critical regime.

use std::f64::consts::PI;

use crate::amplitudes::{AmplitudeConfig, AmplitudeResult, KernelTable, Route};
use crate::lax::{RegimeParams, Sign};
use crate::special::amplitude_integral;
use crate::{Error, Result, C64, I};

/// Lightest-breather amplitude `T_b^{±(1)}` as a function of `θ̂ = πλ̂/γ`.
pub fn breather_closed(sign: Sign, theta_hat: C64, gamma: f64) -> Result<C64> {
    if !(gamma > 0.0) {
        return Err(Error::InvalidParameter(format!("γ must be > 0, got {gamma}")));
    }
    let a = I * (PI / (4.0 * gamma));
    let h = theta_hat / 2.0;
    let half_pi = I * (PI / 2.0);
    let (num, den) = match sign {
        Sign::Plus => (h + a, h + a - half_pi),
        Sign::Minus => (h - a - half_pi, h - a),
    };
    let d = den.sinh();
    if d.norm() < 1e-12 {
        return Err(Error::PrefactorPole {
            at: theta_hat,
            value: d.norm(),
        });
    }
    Ok(-num.sinh() / d)
}

fn fused(sign: Sign, n: usize, lambda_hat: f64, gamma: f64) -> Result<C64> {
    let mut acc = C64::new(1.0, 0.0);
    for l in 1..=n {
        let shifted = C64::new(lambda_hat, 0.5 * (n as f64 + 1.0 - 2.0 * l as f64));
        acc *= breather_closed(sign, shifted * (PI / gamma), gamma)?;
    }
    Ok(acc)
}

/// `n`-breather amplitude `∏_{l=1}^{n} T_b^{(1)}(λ̂ + (i/2)(n+1−2l))`.
///
/// The integral route exists for `n = 1` and evaluates
/// `exp[−∫ dω/ω e^{−iωλ̂} t̂_b^±(ω)]`. For the minus sign it equals the closed
/// form times `−1`.
pub fn breather_amplitude(
    sign: Sign,
    n: usize,
    lambda_hat: f64,
    gamma: f64,
    route: Route,
    cfg: &AmplitudeConfig,
) -> Result<AmplitudeResult> {
    if n == 0 {
        return Err(Error::InvalidParameter("breather order n must be >= 1".into()));
    }
    match route {
        Route::Closed => {
            let v = fused(sign, n, lambda_hat, gamma)?;
            Ok(AmplitudeResult::new(v, route, v.norm() * 1e-15 * n as f64))
        }
        Route::Integral if n == 1 => {
            let params = RegimeParams::critical_from_gamma(gamma, 0.0)?;
            let k = KernelTable::new(params).continuous(&format!("tb{sign}"))?;
            amplitude_integral(&k, lambda_hat, &cfg.quadrature).map(|t| AmplitudeResult::from_truncated(t, route))
        }
        _ => Err(Error::InvalidParameter(format!("breather amplitude n = {n} has no {route} route"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn value_at_origin_is_tangent() {
        for g in [0.7, 1.5, 3.0] {
            let v = breather_closed(Sign::Plus, c(0.0), g).unwrap();
            assert!((v - c((PI / (4.0 * g)).tan())).norm() < 1e-14);
        }
    }

    #[test]
    fn crossing_on_grid() {
        for k in -5..=5 {
            let th = C64::new(0.37 * k as f64, 0.1);
            for g in [0.8, 1.5] {
                let lhs = breather_closed(Sign::Minus, th, g).unwrap();
                let rhs = breather_closed(Sign::Plus, -th + I * PI, g).unwrap();
                assert!((lhs - rhs).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn fusion_of_one_is_identity() {
        let cfg = AmplitudeConfig::default();
        let a = breather_amplitude(Sign::Plus, 1, 0.4, 1.5, Route::Closed, &cfg).unwrap();
        let b = breather_closed(Sign::Plus, c(0.4 * PI / 1.5), 1.5).unwrap();
        assert_eq!(a.value, b);
        let two = breather_amplitude(Sign::Minus, 2, 0.4, 1.5, Route::Closed, &cfg).unwrap().value;
        let direct = breather_closed(Sign::Minus, C64::new(0.4, 0.5) * (PI / 1.5), 1.5).unwrap()
            * breather_closed(Sign::Minus, C64::new(0.4, -0.5) * (PI / 1.5), 1.5).unwrap();
        assert!((two - direct).norm() < 1e-15);
    }

    #[test]
    fn integral_route() {
        // 30-digit quadrature values at γ = 1.5, λ̂ = 0.4
        let cfg = AmplitudeConfig::default();
        let plus = breather_amplitude(Sign::Plus, 1, 0.4, 1.5, Route::Integral, &cfg).unwrap().value;
        assert!((plus - C64::new(0.462_637_821_111_728_7, -0.501_755_025_251_043_3)).norm() < 1e-10);
        let minus = breather_amplitude(Sign::Minus, 1, 0.4, 1.5, Route::Integral, &cfg).unwrap().value;
        assert!((minus - C64::new(0.993_228_654_138_597, -1.077_208_662_360_997)).norm() < 1e-10);
        for lam in [-1.1, 0.0, 0.4, 2.0] {
            for s in [Sign::Plus, Sign::Minus] {
                let i = breather_amplitude(s, 1, lam, 1.5, Route::Integral, &cfg).unwrap().value;
                let cl = breather_amplitude(s, 1, lam, 1.5, Route::Closed, &cfg).unwrap().value;
                let want = if s == Sign::Plus { cl } else { -cl };
                assert!((i - want).norm() < 1e-9, "{s} {lam}");
            }
        }
        assert!(breather_amplitude(Sign::Plus, 2, 0.4, 1.5, Route::Integral, &cfg).is_err());
    }
}
