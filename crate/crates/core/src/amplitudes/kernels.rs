//! Fourier-space kernels of the thermodynamic densities.
//!
//! Continuous regimes (XXX, critical) use `f(λ) = (1/2π)∫ e^{−iωλ} f̂(ω) dω`;
//! the non-critical regime uses the discrete pair
//! `f(λ) = (η/π) Σ_k e^{−2iηkλ} f̂(k)`.
//!
//! | name | meaning |
//! |------|---------|
//! | `sigma0` | ground-state density |
//! | `rt+`, `rt-` | defect contribution to the one-hole density |
//! | `a<n>` | `â_n` |
//! | `frak_a+`, `frak_a-` | `𝔞̂^±` |
//! | `b<n>` | `b̂_n` (critical) |
//! | `frak_b+`, `frak_b-` | `𝔟̂^±` (critical) |
//! | `B+`, `B-` | defect term of the negative-parity density with breathers (critical) |
//! | `sigma0_bar` | breather ground density (critical) |
//! | `tb+`, `tb-` | breather transmission kernels (critical) |
//! | `r` | hole-hole kernel |

use crate::lax::{Regime, RegimeParams, Sign};
use crate::special::{DiscreteKernel, Kernel, Singularity};
use crate::{c, Error, Result};

/// A kernel of either Fourier convention.
#[derive(Debug, Clone)]
pub enum AnyKernel {
    Continuous(Kernel),
    Discrete(DiscreteKernel),
}

impl AnyKernel {
    pub fn name(&self) -> &str {
        match self {
            AnyKernel::Continuous(k) => k.name(),
            AnyKernel::Discrete(k) => k.name(),
        }
    }

    pub fn continuous(self) -> Option<Kernel> {
        match self {
            AnyKernel::Continuous(k) => Some(k),
            AnyKernel::Discrete(_) => None,
        }
    }

    pub fn discrete(self) -> Option<DiscreteKernel> {
        match self {
            AnyKernel::Discrete(k) => Some(k),
            AnyKernel::Continuous(_) => None,
        }
    }
}

/// Names every regime understands; `a<n>` and `b<n>` take a numeric suffix.
pub const KERNEL_NAMES: [&str; 17] = [
    "sigma0",
    "rt+",
    "rt-",
    "a1",
    "a2",
    "frak_a+",
    "frak_a-",
    "b1",
    "b2",
    "frak_b+",
    "frak_b-",
    "B+",
    "B-",
    "sigma0_bar",
    "tb+",
    "tb-",
    "r",
];

/// Kernel lookup for one regime.
#[derive(Debug, Clone, Copy)]
pub struct KernelTable {
    params: RegimeParams,
}

/// `x` on the side selected by `keep`, zero on the other, mean of both limits at the origin.
fn one_sided(w: f64, keep_negative: bool, x: f64) -> f64 {
    if w == 0.0 {
        0.5 * x
    } else if (w < 0.0) == keep_negative {
        x
    } else {
        0.0
    }
}

fn parse_sign(name: &str, stem: &str) -> Option<Sign> {
    match name.strip_prefix(stem)? {
        "+" => Some(Sign::Plus),
        "-" => Some(Sign::Minus),
        _ => None,
    }
}

impl KernelTable {
    pub fn new(params: RegimeParams) -> Self {
        Self { params }
    }

    pub fn params(&self) -> &RegimeParams {
        &self.params
    }

    fn unknown(&self, name: &str) -> Error {
        Error::UnknownKernel {
            name: name.to_string(),
            regime: self.params.regime().to_string(),
        }
    }

    pub fn kernel(&self, name: &str) -> Result<AnyKernel> {
        match self.params.regime() {
            Regime::Xxx => self.xxx(name).map(AnyKernel::Continuous),
            Regime::Critical => self.critical(name).map(AnyKernel::Continuous),
            Regime::NonCritical => self.noncritical(name).map(AnyKernel::Discrete),
        }
    }

    /// Continuous kernel or an `UnknownKernel` error in the non-critical regime.
    pub fn continuous(&self, name: &str) -> Result<Kernel> {
        self.kernel(name)?.continuous().ok_or_else(|| self.unknown(name))
    }

    /// Discrete kernel or an `UnknownKernel` error in the continuous regimes.
    pub fn discrete(&self, name: &str) -> Result<DiscreteKernel> {
        self.kernel(name)?.discrete().ok_or_else(|| self.unknown(name))
    }

    fn index(&self, name: &str, stem: &str) -> Option<f64> {
        name.strip_prefix(stem)?.parse::<f64>().ok().filter(|n| *n > 0.0)
    }

    fn xxx(&self, name: &str) -> Result<Kernel> {
        if let Some(n) = self.index(name, "a") {
            return Kernel::new(name, Singularity::Regular, n / 2.0, move |w| c((-n * w.abs() / 2.0).exp()));
        }
        if let Some(s) = parse_sign(name, "rt") {
            let neg = s == Sign::Plus;
            return Kernel::new(name, Singularity::Jump, 0.5, move |w| c(one_sided(w, neg, 0.5 / (w / 2.0).cosh())));
        }
        if let Some(s) = parse_sign(name, "frak_a") {
            let neg = s == Sign::Plus;
            return Kernel::new(name, Singularity::Jump, 0.5, move |w| c(one_sided(w, neg, (-w.abs() / 2.0).exp())));
        }
        match name {
            "sigma0" => Kernel::new(name, Singularity::Regular, 0.5, |w| c(0.5 / (w / 2.0).cosh())),
            "r" => Kernel::new(name, Singularity::Regular, 1.0, |w| c((-w.abs() / 2.0).exp() / (2.0 * (w / 2.0).cosh()))),
            _ => Err(self.unknown(name)),
        }
    }

    fn critical(&self, name: &str) -> Result<Kernel> {
        let nu = self.params.nu().expect("critical");
        let g = nu - 1.0;
        let invalid = |msg: String| Err(Error::InvalidParameter(format!("kernel {name}: {msg}")));
        if let Some(n) = self.index(name, "a") {
            if n >= 2.0 * nu {
                return invalid(format!("needs 0 < n < 2ν = {}", 2.0 * nu));
            }
            let decay = n.min(2.0 * nu - n) / 2.0;
            return Kernel::new(name, Singularity::Regular, decay, move |w| {
                c(if w == 0.0 { (nu - n) / nu } else { ((nu - n) * w / 2.0).sinh() / (nu * w / 2.0).sinh() })
            });
        }
        if let Some(n) = self.index(name, "b") {
            if (n - nu).abs() < 1e-12 || n >= 2.0 * nu {
                return invalid(format!("needs 0 < n < 2ν = {}, n ≠ ν", 2.0 * nu));
            }
            let m = if n < nu { n } else { n - 2.0 * nu };
            let decay = (nu - m.abs()) / 2.0;
            return Kernel::new(name, Singularity::Regular, decay, move |w| {
                c(if w == 0.0 { -m / nu } else { -(m * w / 2.0).sinh() / (nu * w / 2.0).sinh() })
            });
        }
        if let Some(s) = parse_sign(name, "rt").or_else(|| parse_sign(name, "B")) {
            let f = s.factor();
            return Kernel::new(name, Singularity::SimplePole { residue: -f / 2.0 }, g / 2.0, move |w| {
                c(-f * (f * w / 2.0).exp() / (4.0 * (w / 2.0).sinh() * (g * w / 2.0).cosh()))
            });
        }
        if let Some(s) = parse_sign(name, "frak_b") {
            let f = s.factor();
            return Kernel::new(name, Singularity::SimplePole { residue: f / nu }, g / 2.0, move |w| {
                c(f * (f * w / 2.0).exp() / (2.0 * (nu * w / 2.0).sinh()))
            });
        }
        if let Some(s) = parse_sign(name, "frak_a") {
            let f = s.factor();
            return Kernel::new(name, Singularity::SimplePole { residue: f / nu }, 0.5, move |w| {
                c(f * (-f * g * w / 2.0).exp() / (2.0 * (nu * w / 2.0).sinh()))
            });
        }
        if let Some(s) = parse_sign(name, "tb") {
            let f = s.factor();
            return Kernel::new(name, Singularity::Regular, (g - (g - 1.0).abs()) / 2.0, move |w| {
                c(-(-f * (nu - 2.0) * w / 2.0).exp() / (2.0 * (g * w / 2.0).cosh()))
            });
        }
        match name {
            "sigma0" => Kernel::new(name, Singularity::Regular, g / 2.0, move |w| c(0.5 / (g * w / 2.0).cosh())),
            "sigma0_bar" => Kernel::new(name, Singularity::Regular, (g - (g - 1.0).abs()) / 2.0, move |w| {
                c(((nu - 2.0) * w / 2.0).cosh() / (g * w / 2.0).cosh())
            }),
            "r" => Kernel::new(name, Singularity::Regular, g.min(1.0), move |w| {
                c(if w == 0.0 {
                    -(nu - 2.0) / 2.0
                } else {
                    -((nu - 2.0) * w / 2.0).sinh() / (2.0 * (g * w / 2.0).cosh() * (w / 2.0).sinh())
                })
            }),
            _ => Err(self.unknown(name)),
        }
    }

    fn noncritical(&self, name: &str) -> Result<DiscreteKernel> {
        let eta = self.params.eta().expect("non-critical");
        if let Some(n) = self.index(name, "a") {
            return DiscreteKernel::new(name, n * eta, move |k| c((-n * eta * k.abs() as f64).exp()));
        }
        if let Some(s) = parse_sign(name, "rt") {
            let neg = s == Sign::Plus;
            return DiscreteKernel::new(name, eta, move |k| {
                c(one_sided(k as f64, neg, -0.5 / (eta * k as f64).cosh()))
            });
        }
        if let Some(s) = parse_sign(name, "frak_a") {
            let neg = s == Sign::Plus;
            return DiscreteKernel::new(name, eta, move |k| c(one_sided(k as f64, neg, -(-eta * k.abs() as f64).exp())));
        }
        match name {
            "sigma0" => DiscreteKernel::new(name, eta, move |k| c(0.5 / (eta * k as f64).cosh())),
            "r" => DiscreteKernel::new(name, 2.0 * eta, move |k| {
                let x = (-2.0 * eta * k.abs() as f64).exp();
                c(x / (1.0 + x))
            }),
            _ => Err(self.unknown(name)),
        }
    }

    /// Spin-`S` defect kernel `e^{−ηy|k|}/(1+e^{−2η|k|})`, `y = 2S`
    /// (non-critical only).
    pub fn type2(&self, two_s: usize) -> Result<DiscreteKernel> {
        let eta = self.params.eta().ok_or_else(|| self.unknown("type2"))?;
        if two_s == 0 {
            return Err(Error::InvalidParameter("2S must be a positive integer".into()));
        }
        let y = two_s as f64;
        DiscreteKernel::new(format!("type2(y={two_s})"), y * eta, move |k| {
            let k = k.abs() as f64;
            c((-eta * y * k).exp() / (1.0 + (-2.0 * eta * k).exp()))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::C64;

    #[test]
    fn lookups_by_regime() {
        let xxx = KernelTable::new(RegimeParams::xxx(0.0));
        assert!(xxx.continuous("sigma0").is_ok());
        assert!(matches!(xxx.kernel("tb+"), Err(Error::UnknownKernel { .. })));
        assert!(matches!(xxx.kernel("nonsense"), Err(Error::UnknownKernel { .. })));
        let nc = KernelTable::new(RegimeParams::noncritical(0.5, 0.0).unwrap());
        assert!(nc.discrete("r").is_ok());
        assert!(nc.continuous("r").is_err());
        let crit = KernelTable::new(RegimeParams::critical_from_gamma(1.5, 0.0).unwrap());
        for name in KERNEL_NAMES {
            assert!(crit.kernel(name).is_ok(), "{name}");
        }
        // ν = 2.5: b_n needs n ≠ ν
        assert!(crit.kernel("b2.5").is_err());
        assert!(crit.kernel("a5").is_err());
    }

    #[test]
    fn critical_pole_residues() {
        // ω·r̂ₜ^± → ∓1/2
        let crit = KernelTable::new(RegimeParams::critical_from_gamma(1.5, 0.0).unwrap());
        for (name, want) in [("rt+", -0.5), ("rt-", 0.5)] {
            let k = crit.continuous(name).unwrap();
            for w in [1e-5, -1e-5] {
                assert!((k.eval(w) * w - c(want)).norm() < 1e-5);
            }
        }
    }

    #[test]
    fn hole_kernel_resolves_convolution() {
        // r̂ = â₂/(â₂ − 1), σ̂₀ = b̂₁/(â₂ − 1), r̂ₜ^± = 𝔟̂^±/(â₂ − 1)
        let crit = KernelTable::new(RegimeParams::critical_from_gamma(1.3, 0.0).unwrap());
        let get = |n: &str| crit.continuous(n).unwrap();
        let (a2, b1, r, s0) = (get("a2"), get("b1"), get("r"), get("sigma0"));
        for w in [-3.0, -0.4, 0.2, 1.7, 6.0] {
            let d = a2.eval(w) - 1.0;
            assert!((r.eval(w) - a2.eval(w) / d).norm() < 1e-13);
            assert!((s0.eval(w) - b1.eval(w) / d).norm() < 1e-13);
            for s in ["+", "-"] {
                let rt = get(&format!("rt{s}"));
                let fb = get(&format!("frak_b{s}"));
                assert!((rt.eval(w) - fb.eval(w) / d).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn one_sided_kernels_average_at_origin() {
        let xxx = KernelTable::new(RegimeParams::xxx(0.0));
        let k = xxx.continuous("rt+").unwrap();
        assert_eq!(k.eval(0.0), c(0.25));
        assert_eq!(k.eval(1.0), C64::new(0.0, 0.0));
        let nc = KernelTable::new(RegimeParams::noncritical(0.5, 0.0).unwrap());
        assert_eq!(nc.discrete("r").unwrap().eval(0), c(0.5));
        assert_eq!(nc.discrete("rt-").unwrap().eval(-2), c(0.0));
    }
}
