use std::fmt;
use std::sync::Arc;

use crate::special::qgamma::expm1;
use crate::special::quadrature::{integrate_half_line, QuadratureSpec};
use crate::special::Truncated;
use crate::{Error, Result, C64};

/// Behaviour of a kernel at `ω = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Singularity {
    Regular,
    /// Finite one-sided limits that differ (half-line supported kernels).
    Jump,
    /// `k(ω) ≈ residue/ω` from both sides.
    SimplePole { residue: f64 },
}

type ContinuousFn = Arc<dyn Fn(f64) -> C64 + Send + Sync>;
type DiscreteFn = Arc<dyn Fn(i64) -> C64 + Send + Sync>;

/// A kernel in `ω`-space that decays like `e^{-decay·|ω|}`.
#[derive(Clone)]
pub struct Kernel {
    name: String,
    eval: ContinuousFn,
    singularity: Singularity,
    decay: f64,
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("name", &self.name)
            .field("singularity", &self.singularity)
            .field("decay", &self.decay)
            .finish()
    }
}

const PROBE: f64 = 1e-7;
const PROBE_TOL: f64 = 1e-4;

impl Kernel {
    /// Builds a kernel and checks numerically that it behaves at the origin as declared.
    pub fn new(
        name: impl Into<String>,
        singularity: Singularity,
        decay: f64,
        f: impl Fn(f64) -> C64 + Send + Sync + 'static,
    ) -> Result<Self> {
        let k = Self {
            name: name.into(),
            eval: Arc::new(f),
            singularity,
            decay,
        };
        if !(decay > 0.0) || !decay.is_finite() {
            return Err(Error::InvalidParameter(format!("kernel {} needs decay > 0", k.name)));
        }
        k.check_origin()?;
        Ok(k)
    }

    pub fn zero() -> Self {
        Self {
            name: "zero".into(),
            eval: Arc::new(|_| C64::new(0.0, 0.0)),
            singularity: Singularity::Regular,
            decay: 1.0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn singularity(&self) -> Singularity {
        self.singularity
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn eval(&self, w: f64) -> C64 {
        (self.eval)(w)
    }

    /// `k(0⁺) − k(0⁻)`, zero for regular kernels.
    pub fn jump(&self) -> C64 {
        match self.singularity {
            Singularity::Regular | Singularity::SimplePole { .. } => C64::new(0.0, 0.0),
            Singularity::Jump => self.eval(1e-12) - self.eval(-1e-12),
        }
    }

    fn check_origin(&self) -> Result<()> {
        let (kp, km) = (self.eval(PROBE), self.eval(-PROBE));
        let (pp, pm) = (kp * PROBE, km * -PROBE);
        let fail = |detail: String| {
            Err(Error::KernelSingularity {
                name: self.name.clone(),
                detail,
            })
        };
        match self.singularity {
            Singularity::Regular | Singularity::Jump => {
                if pp.norm() > PROBE_TOL || pm.norm() > PROBE_TOL {
                    return fail(format!("ω·k(ω) does not vanish at the origin ({pp}, {pm})"));
                }
                if self.singularity == Singularity::Regular && (kp - km).norm() > PROBE_TOL * (1.0 + kp.norm()) {
                    return fail(format!("declared regular but jumps by {}", kp - km));
                }
            }
            Singularity::SimplePole { residue } => {
                let r = C64::new(residue, 0.0);
                if (pp - r).norm() > PROBE_TOL || (pm - r).norm() > PROBE_TOL {
                    return fail(format!("ω·k(ω) → ({pp}, {pm}), declared residue {residue}"));
                }
            }
        }
        Ok(())
    }

    fn effective_spec(&self, spec: &QuadratureSpec) -> QuadratureSpec {
        QuadratureSpec {
            cutoff: spec.cutoff.max(33.0 / self.decay),
            ..*spec
        }
    }

    fn tail_estimate(&self, cutoff: f64) -> f64 {
        (self.eval(cutoff).norm() + self.eval(-cutoff).norm()) / (self.decay * cutoff)
            + self.jump().norm() * (-2.0 * cutoff).exp() / (2.0 * cutoff)
    }
}

/// Integrates with `spec` and with half the nodes; returns the fine value
/// and the difference plus the cutoff tail as an error estimate.
fn two_level(f: impl Fn(f64) -> C64, spec: &QuadratureSpec, tail: f64) -> Result<(C64, f64)> {
    let fine = integrate_half_line(&f, spec)?;
    let coarse = integrate_half_line(&f, &spec.coarsened())?;
    Ok((fine, (fine - coarse).norm() + tail))
}

fn exp_truncated(ln: C64, ln_err: f64, terms: usize) -> Truncated {
    let value = ln.exp();
    Truncated {
        value,
        error: value.norm() * ln_err,
        terms,
    }
}

/// `exp[−∫ dω/ω e^{−iωλ} k(ω)]` over the real line.
///
/// The two half-lines are folded onto `ω > 0`. A jump `J` at the origin
/// leaves a `J/ω` singularity in the folded integrand, which is removed by
/// subtracting `J e^{−2ω}/ω`; this fixes the same normalization as the
/// classical Gamma-ratio integral representations. Kernels with a pole at
/// the origin are rejected; see [`amplitude_integral_anchored`].
pub fn amplitude_integral(kernel: &Kernel, lambda: f64, spec: &QuadratureSpec) -> Result<Truncated> {
    if let Singularity::SimplePole { residue } = kernel.singularity {
        return Err(Error::KernelSingularity {
            name: kernel.name.clone(),
            detail: format!("pole with residue {residue} at ω = 0 makes the integral diverge"),
        });
    }
    let spec = kernel.effective_spec(spec);
    let jump = kernel.jump();
    let i = C64::new(0.0, 1.0);
    let integrand = |w: f64| {
        let h = (-i * w * lambda).exp() * kernel.eval(w) - (i * w * lambda).exp() * kernel.eval(-w);
        (h - jump * (-2.0 * w).exp()) / w
    };
    let (val, err) = two_level(integrand, &spec, kernel.tail_estimate(spec.cutoff))?;
    Ok(exp_truncated(-val, err, spec.nodes))
}

/// Same exponent as [`amplitude_integral`] minus its value at `λ = 0`, so the
/// result is normalized to 1 at the origin. Finite for kernels with a simple
/// pole at `ω = 0`.
pub fn amplitude_integral_anchored(kernel: &Kernel, lambda: f64, spec: &QuadratureSpec) -> Result<Truncated> {
    let spec = kernel.effective_spec(spec);
    let i = C64::new(0.0, 1.0);
    let integrand = |w: f64| {
        let h = expm1(-i * w * lambda) * kernel.eval(w) - expm1(i * w * lambda) * kernel.eval(-w);
        h / w
    };
    let (val, err) = two_level(integrand, &spec, kernel.tail_estimate(spec.cutoff))?;
    Ok(exp_truncated(-val, err, spec.nodes))
}

/// `(1/2π) ∫ e^{−iωλ} f̂(ω) dω`, as a principal value for kernels with a
/// simple pole at the origin (the folded integrand is then finite at `ω = 0`).
pub fn invert_continuous(kernel: &Kernel, lambda: f64, spec: &QuadratureSpec) -> Result<Truncated> {
    let spec = kernel.effective_spec(spec);
    let i = C64::new(0.0, 1.0);
    let integrand = |w: f64| (-i * w * lambda).exp() * kernel.eval(w) + (i * w * lambda).exp() * kernel.eval(-w);
    let tail = (kernel.eval(spec.cutoff).norm() + kernel.eval(-spec.cutoff).norm()) / kernel.decay;
    let (val, err) = two_level(integrand, &spec, tail)?;
    let s = 0.5 / std::f64::consts::PI;
    Ok(Truncated {
        value: val * s,
        error: err * s,
        terms: spec.nodes,
    })
}

/// A kernel on integer modes `k` with `|f̂(k)| ≤ C e^{−decay·|k|}`.
#[derive(Clone)]
pub struct DiscreteKernel {
    name: String,
    eval: DiscreteFn,
    decay: f64,
}

impl fmt::Debug for DiscreteKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("DiscreteKernel")
            .field("name", &self.name)
            .field("decay", &self.decay)
            .finish()
    }
}

impl DiscreteKernel {
    pub fn new(name: impl Into<String>, decay: f64, f: impl Fn(i64) -> C64 + Send + Sync + 'static) -> Result<Self> {
        let name = name.into();
        if !(decay > 0.0) || !decay.is_finite() {
            return Err(Error::InvalidParameter(format!("kernel {name} needs decay > 0")));
        }
        Ok(Self {
            name,
            eval: Arc::new(f),
            decay,
        })
    }

    pub fn zero() -> Self {
        Self {
            name: "zero".into(),
            eval: Arc::new(|_| C64::new(0.0, 0.0)),
            decay: 1.0,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn decay(&self) -> f64 {
        self.decay
    }

    pub fn eval(&self, k: i64) -> C64 {
        (self.eval)(k)
    }

    /// Geometric bound on `Σ_{|k|>k_max} |f̂(k)|/|k|`.
    fn tail_bound(&self, k_max: usize) -> f64 {
        let k = k_max as i64;
        let edge = self.eval(k).norm().max(self.eval(-k).norm());
        let r = (-self.decay).exp();
        2.0 * edge * r / (1.0 - r) / (k_max as f64 + 1.0)
    }
}

/// Smallest `k_max` with `e^{−decay·k_max} < tol`.
pub fn default_k_max(decay: f64, tol: f64) -> usize {
    ((1.0 / tol).ln() / decay).ceil().max(1.0) as usize + 1
}

/// `exp[−Σ_{k≠0} (1/k) e^{−2iηkλ} f̂(k)]`, truncated at `|k| ≤ k_max`.
pub fn amplitude_sum(kernel: &DiscreteKernel, lambda: f64, eta: f64, k_max: usize) -> Result<Truncated> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!("η must be > 0, got {eta}")));
    }
    let i = C64::new(0.0, 1.0);
    let mut acc = C64::new(0.0, 0.0);
    for k in 1..=k_max as i64 {
        let ph = (-2.0 * i * eta * k as f64 * lambda).exp();
        acc += (ph * kernel.eval(k) - kernel.eval(-k) / ph) / k as f64;
    }
    Ok(exp_truncated(-acc, kernel.tail_bound(k_max), k_max))
}

/// `(η/π) Σ_k e^{−2iηkλ} f̂(k)`.
pub fn invert_discrete(kernel: &DiscreteKernel, lambda: f64, eta: f64, k_max: usize) -> Result<Truncated> {
    if !(eta > 0.0) {
        return Err(Error::InvalidParameter(format!("η must be > 0, got {eta}")));
    }
    let i = C64::new(0.0, 1.0);
    let mut acc = kernel.eval(0);
    for k in 1..=k_max as i64 {
        let ph = (-2.0 * i * eta * k as f64 * lambda).exp();
        acc += ph * kernel.eval(k) + kernel.eval(-k) / ph;
    }
    let s = eta / std::f64::consts::PI;
    Ok(Truncated {
        value: acc * s,
        error: kernel.tail_bound(k_max) * (k_max as f64 + 1.0) * s,
        terms: k_max,
    })
}
