//! One-hole state densities `σ^±(λ) = σ₀(λ) + (1/N)(Σⱼ r(λ−λ̃ⱼ) + rₜ^±(λ−Θ))`.

use serde::{Deserialize, Serialize};

use crate::amplitudes::{AmplitudeConfig, KernelTable};
use crate::lax::{Regime, RegimeParams, Sign};
use crate::special::{default_k_max, invert_continuous, invert_discrete, Kernel, Singularity, Truncated};
use crate::{Error, Result, C64};

/// A density split into its `N`-independent part and the coefficient of `1/N`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Density {
    pub bulk: C64,
    pub per_site: C64,
    pub error_estimate: f64,
}

impl Density {
    pub fn total(&self, n_sites: f64) -> C64 {
        self.bulk + self.per_site / n_sites
    }
}

struct Inverter<'a> {
    params: &'a RegimeParams,
    cfg: &'a AmplitudeConfig,
}

impl Inverter<'_> {
    fn continuous(&self, k: &Kernel, lambda: f64) -> Result<Truncated> {
        invert_continuous(k, lambda, &self.cfg.quadrature)
    }

    fn named(&self, name: &str, lambda: f64) -> Result<Truncated> {
        let table = KernelTable::new(*self.params);
        match self.params.regime() {
            Regime::NonCritical => {
                let k = table.discrete(name)?;
                let eta = self.params.eta().expect("non-critical");
                invert_discrete(&k, lambda, eta, default_k_max(k.decay(), self.cfg.sum_tol))
            }
            _ => self.continuous(&table.continuous(name)?, lambda),
        }
    }
}

fn assemble(
    lambda: f64,
    theta: f64,
    holes: &[f64],
    defect: Option<Sign>,
    mut eval: impl FnMut(&str, f64) -> Result<Truncated>,
) -> Result<Density> {
    let bulk = eval("sigma0", lambda)?;
    let mut per_site = C64::new(0.0, 0.0);
    let mut err = bulk.error;
    for &h in holes {
        let r = eval("r", lambda - h)?;
        per_site += r.value;
        err += r.error;
    }
    if let Some(s) = defect {
        let r = eval(&format!("rt{s}"), lambda - theta)?;
        per_site += r.value;
        err += r.error;
    }
    Ok(Density {
        bulk: bulk.value,
        per_site,
        error_estimate: err,
    })
}

/// Density from the resolved kernels `σ̂₀`, `r̂` and `r̂ₜ^±`. One-sided
/// kernels make the `1/N` part complex.
pub fn state_density(
    params: &RegimeParams,
    lambda: f64,
    holes: &[f64],
    defect: Option<Sign>,
    cfg: &AmplitudeConfig,
) -> Result<Density> {
    let inv = Inverter { params, cfg };
    assemble(lambda, params.theta, holes, defect, |name, x| inv.named(name, x))
}

/// Critical-regime density obtained by solving the linear integral equation
/// `−σ = b₁ + (1/N)𝔟^±(λ−Θ) − a₂ * σ + (1/N)a₂(λ−λ̃)` in Fourier space from
/// `b̂₁`, `â₂` and `𝔟̂^±`, then inverting.
pub fn convolution_density(
    params: &RegimeParams,
    lambda: f64,
    holes: &[f64],
    defect: Option<Sign>,
    cfg: &AmplitudeConfig,
) -> Result<Density> {
    if params.regime() != Regime::Critical {
        return Err(Error::InvalidParameter(format!(
            "the convolution form is stated for the critical regime, got {}",
            params.regime()
        )));
    }
    let table = KernelTable::new(*params);
    let a2 = table.continuous("a2")?;
    let resolve = |name: &str, num: Kernel| -> Result<Kernel> {
        let target = table.continuous(name)?;
        let a2 = a2.clone();
        Kernel::new(
            format!("{name} (resolved)"),
            target.singularity(),
            target.decay(),
            move |w| num.eval(w) / (a2.eval(w) - 1.0),
        )
    };
    let inv = Inverter { params, cfg };
    assemble(lambda, params.theta, holes, defect, |name, x| {
        let k = match name {
            "sigma0" => resolve(name, table.continuous("b1")?)?,
            "r" => resolve(name, a2.clone())?,
            _ => {
                let s = name.strip_prefix("rt").expect("defect kernel");
                let k = resolve(name, table.continuous(&format!("frak_b{s}"))?)?;
                debug_assert!(matches!(k.singularity(), Singularity::SimplePole { .. }));
                k
            }
        };
        inv.continuous(&k, x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{c, I};
    use std::f64::consts::PI;

    #[test]
    fn ground_state_only() {
        let cfg = AmplitudeConfig::default();
        let xxx = RegimeParams::xxx(0.0);
        let d = state_density(&xxx, 0.0, &[], None, &cfg).unwrap();
        assert!((d.bulk - c(0.5)).norm() < 1e-12);
        assert_eq!(d.per_site, c(0.0));
        for lam in [0.3, -1.2] {
            let d = state_density(&xxx, lam, &[], None, &cfg).unwrap();
            assert!((d.bulk - c(0.5 / (PI * lam).cosh())).norm() < 1e-12);
        }
    }

    #[test]
    fn convolution_and_resolved_forms_agree() {
        let cfg = AmplitudeConfig::default();
        let p = RegimeParams::critical_from_gamma(1.5, 0.2).unwrap();
        for lam in [-2.0, -0.5, 0.0, 0.7, 1.9] {
            for defect in [Some(Sign::Plus), Some(Sign::Minus), None] {
                let a = state_density(&p, lam, &[0.4, -0.9], defect, &cfg).unwrap();
                let b = convolution_density(&p, lam, &[0.4, -0.9], defect, &cfg).unwrap();
                assert!((a.bulk - b.bulk).norm() < 1e-8);
                assert!((a.per_site - b.per_site).norm() < 1e-8, "{lam} {defect:?}");
            }
        }
        assert!(convolution_density(&RegimeParams::xxx(0.0), 0.0, &[], None, &cfg).is_err());
    }

    #[test]
    fn critical_ground_density_solves_real_space_equation() {
        // Nyström solution of σ − a₂ * σ = −b₁ on a truncated line, with a₂
        // and b₁ built from the logarithmic derivatives of e₂ and g₁
        let gamma = 1.5;
        let p = RegimeParams::critical_from_gamma(gamma, 0.0).unwrap();
        let mu = p.mu().unwrap();
        let a2 = |x: f64| {
            let x = c(x);
            I / (2.0 * PI) * mu * ((mu * (x + I)).tanh().inv() - (mu * (x - I)).tanh().inv())
        };
        let b1 = |x: f64| {
            let x = c(x);
            I / (2.0 * PI) * mu * ((mu * (x + I * 0.5)).tanh() - (mu * (x - I * 0.5)).tanh())
        };
        let (half, n) = (20.0, 801usize);
        let h = 2.0 * half / (n - 1) as f64;
        let xs: Vec<f64> = (0..n).map(|i| -half + h * i as f64).collect();
        let mat = nalgebra::DMatrix::from_fn(n, n, |i, j| {
            let d = if i == j { c(1.0) } else { c(0.0) };
            d - a2(xs[i] - xs[j]) * h
        });
        let rhs = nalgebra::DVector::from_iterator(n, xs.iter().map(|&x| -b1(x)));
        let sol = mat.lu().solve(&rhs).unwrap();
        let cfg = AmplitudeConfig::default();
        for i in [n / 2, n / 2 + 20, n / 2 - 55] {
            let d = state_density(&p, xs[i], &[], None, &cfg).unwrap();
            assert!((sol[i] - d.bulk).norm() < 1e-8, "λ = {}: {} vs {}", xs[i], sol[i], d.bulk);
        }
    }

    #[test]
    fn noncritical_ground_density_normalization() {
        // ∫ over one period of σ₀ is σ̂₀(0) = 1/2
        let p = RegimeParams::noncritical(0.6, 0.0).unwrap();
        let cfg = AmplitudeConfig::default();
        let period = PI / 0.6;
        let m = 400;
        let s: C64 = (0..m)
            .map(|j| {
                let lam = -period / 2.0 + period * (j as f64 + 0.5) / m as f64;
                state_density(&p, lam, &[], None, &cfg).unwrap().bulk
            })
            .sum::<C64>()
            * (period / m as f64);
        assert!((s - c(0.5)).norm() < 1e-12);
    }
}
