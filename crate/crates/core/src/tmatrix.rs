//! Operator-valued transmission matrices `𝕋`, `𝕋̄` and the spin-`S` matrix.
//!
//! Every matrix is a `2×2` block operator on `aux ⊗ defect` times a scalar
//! prefactor built from the closed-form amplitudes. The matrix part and the
//! prefactor are exposed separately so that residuals can be checked with the
//! scalar stripped.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::amplitudes::{closed_amplitude, type2_closed};
use crate::lax::{interior_on_last, make_s_matrix, Regime, RegimeParams, Sign};
use crate::oscillator::{DefectRep, HarmonicRep, QOscRep, SpinRep};
use crate::special::ProductTruncation;
use crate::tensor::{aux_blocks, embed_sites, partial_transpose, CMatrix, TensorOperator, TensorSpace};
use crate::{Error, ResidualReport, Result, C64, I};

/// Critical-regime reparametrization `u = λ̂/γ`, `μ̃ = πγ`, `q̃ = e^{iμ̃}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalRenorm {
    pub gamma: f64,
    pub mu_tilde: f64,
    pub q_tilde: C64,
}

impl CriticalRenorm {
    pub fn new(gamma: f64) -> Self {
        let mu_tilde = PI * gamma;
        Self {
            gamma,
            mu_tilde,
            q_tilde: (I * mu_tilde).exp(),
        }
    }

    pub fn u(&self, lambda_hat: C64) -> C64 {
        lambda_hat / self.gamma
    }

    /// `q̃^s` on the branch `e^{s·iμ̃}`.
    pub fn q_pow(&self, s: f64) -> C64 {
        (I * self.mu_tilde * s).exp()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    T,
    TBar,
}

impl std::fmt::Display for Which {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Which::T => "T",
            Which::TBar => "Tbar",
        })
    }
}

/// The type-I pair `𝕋`, `𝕋̄` of one regime.
#[derive(Debug, Clone)]
pub struct TransmissionPair {
    pub params: RegimeParams,
    pub rep: DefectRep,
    /// Set only in the critical regime.
    pub renorm: Option<CriticalRenorm>,
    pub trunc: ProductTruncation,
}

fn blocks(a: CMatrix, b: CMatrix, c: CMatrix, d: CMatrix) -> TensorOperator {
    aux_blocks(&a, &b, &c, &d).expect("square blocks of equal size")
}

fn check_prefactor(den: C64, at: C64) -> Result<()> {
    if den.norm() < 1e-12 || !den.is_finite() {
        return Err(Error::PrefactorPole { at, value: den.norm() });
    }
    Ok(())
}

impl TransmissionPair {
    /// Builds the pair with a fresh defect representation of dimension `dim`:
    /// harmonic (XXX), q-oscillator with `q̃` (critical) or with `q` (non-critical).
    pub fn new(params: RegimeParams, dim: usize) -> Result<Self> {
        let (rep, renorm) = match params.regime() {
            Regime::Xxx => (DefectRep::Harmonic(HarmonicRep::new(dim)?), None),
            Regime::Critical => {
                let r = CriticalRenorm::new(params.gamma().expect("critical"));
                (DefectRep::QOsc(QOscRep::with_log(dim, I * r.mu_tilde)?), Some(r))
            }
            Regime::NonCritical => (params.defect_rep(dim)?, None),
        };
        Ok(Self {
            params,
            rep,
            renorm,
            trunc: ProductTruncation::default(),
        })
    }

    fn amp(&self, sign: Sign, lambda_hat: C64) -> Result<C64> {
        closed_amplitude(&self.params, sign, lambda_hat, &self.trunc).map(|(v, _)| v)
    }

    /// Shift of the crossing relation: `i` in `λ̂`, or `i` in `u` (`iγ` in `λ̂`).
    pub fn crossing_shift(&self) -> C64 {
        match self.renorm {
            Some(r) => I * r.gamma,
            None => I,
        }
    }

    /// The operator part of `𝕋` or `𝕋̄`, without its scalar prefactor.
    pub fn matrix_part(&self, which: Which, lambda_hat: C64) -> TensorOperator {
        match (&self.rep, which) {
            (DefectRep::Harmonic(h), _) => {
                let id = h.identity();
                let nbar = &h.n - &id * C64::new(0.5, 0.0);
                match which {
                    Which::T => blocks(&id * (I * lambda_hat + 1.0) + &nbar, h.a.clone(), h.a_dag.clone(), id),
                    Which::TBar => blocks(id.clone(), -&h.a, -&h.a_dag, &nbar - &id * (I * lambda_hat)),
                }
            }
            (DefectRep::QOsc(r), _) => match self.renorm {
                Some(rn) => {
                    let e = (rn.mu_tilde * rn.u(lambda_hat)).exp();
                    let qt = rn.q_tilde;
                    match which {
                        Which::T => blocks(&r.v * (qt / e) - &r.x_inv * (e / qt), r.a_dag.clone(), r.a.clone(), &r.v * (-e / qt)),
                        Which::TBar => blocks(&r.v * (-1.0 / e), -&r.a_dag, -&r.a, &r.v * e - &r.x_inv / e),
                    }
                }
                None => {
                    let eta = self.params.eta().expect("non-critical");
                    let e = (-I * eta * lambda_hat).exp();
                    let q = self.params.q();
                    match which {
                        Which::T => blocks(&r.v * (e * q) - &r.x_inv / (q * e), r.a_dag.clone(), r.a.clone(), &r.v * (-1.0 / (e * q))),
                        Which::TBar => blocks(&r.v * (-e), -&r.a_dag, -&r.a, &r.v / e - &r.x_inv * e),
                    }
                }
            },
            (DefectRep::Spin(_), _) => unreachable!("type-I pairs never carry a spin rep"),
        }
    }

    /// Scalar in front of [`matrix_part`](Self::matrix_part).
    pub fn prefactor(&self, which: Which, lambda_hat: C64) -> Result<C64> {
        match self.params.regime() {
            Regime::Xxx => match which {
                Which::T => {
                    let den = I * lambda_hat + 0.5;
                    check_prefactor(den, lambda_hat)?;
                    Ok(self.amp(Sign::Minus, lambda_hat)? / den)
                }
                Which::TBar => self.amp(Sign::Plus, lambda_hat),
            },
            Regime::Critical => {
                let rn = self.renorm.expect("critical renorm");
                let x = rn.mu_tilde * rn.u(lambda_hat);
                match which {
                    Which::T => {
                        let den = (-x).exp() * rn.q_pow(0.5) - x.exp() * rn.q_pow(-0.5);
                        check_prefactor(den, lambda_hat)?;
                        Ok((-x / 2.0).exp() * self.amp(Sign::Minus, lambda_hat)? / den)
                    }
                    Which::TBar => Ok(-(x / 2.0).exp() * rn.q_pow(0.5) * self.amp(Sign::Plus, lambda_hat)?),
                }
            }
            Regime::NonCritical => {
                let eta = self.params.eta().expect("non-critical");
                let e = (-I * eta * lambda_hat).exp();
                let qh = (self.params.ln_q() * 0.5).exp();
                match which {
                    Which::T => {
                        let den = e * qh - 1.0 / (e * qh);
                        check_prefactor(den, lambda_hat)?;
                        Ok(e * self.amp(Sign::Plus, lambda_hat)? / den)
                    }
                    Which::TBar => Ok(-qh * self.amp(Sign::Minus, lambda_hat)?),
                }
            }
        }
    }

    pub fn matrix(&self, which: Which, lambda_hat: C64) -> Result<TensorOperator> {
        Ok(self.matrix_part(which, lambda_hat).scale(self.prefactor(which, lambda_hat)?))
    }

    pub fn t(&self, lambda_hat: C64) -> Result<TensorOperator> {
        self.matrix(Which::T, lambda_hat)
    }

    pub fn t_bar(&self, lambda_hat: C64) -> Result<TensorOperator> {
        self.matrix(Which::TBar, lambda_hat)
    }

    pub fn s_matrix(&self, lambda: C64) -> Result<TensorOperator> {
        make_s_matrix(&self.params, lambda, &self.trunc)
    }
}

/// Spin-`S` transmission matrix of the non-critical regime.
#[derive(Debug, Clone)]
pub struct TypeIIMatrix {
    pub params: RegimeParams,
    pub rep: SpinRep,
    pub trunc: ProductTruncation,
}

impl TypeIIMatrix {
    pub fn new(eta: f64, two_s: usize) -> Result<Self> {
        let params = RegimeParams::noncritical(eta, 0.0)?;
        if two_s == 0 {
            return Err(Error::InvalidParameter("2S must be a positive integer".into()));
        }
        Ok(Self {
            params,
            rep: SpinRep::with_log(two_s, params.ln_q()),
            trunc: ProductTruncation::default(),
        })
    }

    fn eta(&self) -> f64 {
        self.params.eta().expect("non-critical")
    }

    /// `S̃ = S − 1/2`.
    pub fn shifted_spin(&self) -> f64 {
        self.rep.spin() - 0.5
    }

    pub fn matrix_part(&self, lambda_hat: C64) -> TensorOperator {
        let eta = self.eta();
        let d = self.rep.dim();
        let sz = |sign: f64| {
            DMatrix::from_fn(d, d, |i, j| {
                if i == j {
                    (eta * (-lambda_hat + I * (sign * self.rep.s_z[(i, i)].re) + I * 0.5)).sin()
                } else {
                    C64::new(0.0, 0.0)
                }
            })
        };
        let c = (I * eta).sin();
        blocks(sz(1.0), &self.rep.s_minus * c, &self.rep.s_plus * c, sz(-1.0))
    }

    pub fn prefactor(&self, lambda_hat: C64) -> Result<C64> {
        let eta = self.eta();
        let den = (eta * (-lambda_hat + I * self.shifted_spin() + I * 0.5)).sin();
        check_prefactor(den, lambda_hat)?;
        let (t, _) = type2_closed(lambda_hat, eta, self.rep.two_s, &self.trunc)?;
        Ok(t / den)
    }

    pub fn t(&self, lambda_hat: C64) -> Result<TensorOperator> {
        Ok(self.matrix_part(lambda_hat).scale(self.prefactor(lambda_hat)?))
    }

    pub fn s_matrix(&self, lambda: C64) -> Result<TensorOperator> {
        make_s_matrix(&self.params, lambda, &self.trunc)
    }
}

/// `‖S₁₂𝕋₁𝕋₂ − 𝕋₂𝕋₁S₁₂‖ / ‖S₁₂𝕋₁𝕋₂‖` on `aux₁ ⊗ aux₂ ⊗ defect`,
/// right-multiplied by the interior projector (two-state buffer). The
/// normalization makes the residual blind to scalar prefactors.
pub fn quadratic_algebra_residual(s: &TensorOperator, t1: &TensorOperator, t2: &TensorOperator, rep: &DefectRep) -> Result<f64> {
    let n = t1.dim() / 2;
    let space = TensorSpace::new(vec![2, 2, n])?;
    let s12 = embed_sites(s, &[0, 1], &space)?;
    let a1 = embed_sites(t1, &[0, 2], &space)?;
    let b2 = embed_sites(t2, &[1, 2], &space)?;
    let lhs = s12.matmul(&a1)?.matmul(&b2)?;
    let rhs = b2.matmul(&a1)?.matmul(&s12)?;
    let proj = interior_on_last(&space, rep, 2);
    let zero = TensorOperator::zeros(space);
    let scale = lhs.residual_on(&zero, &proj)?;
    if scale == 0.0 {
        return Err(Error::InvalidParameter("S T T vanishes on the interior".into()));
    }
    Ok(lhs.residual_on(&rhs, &proj)? / scale)
}

/// Quadratic algebra for one member of a type-I pair at `(λ̂₁, λ̂₂)`.
pub fn rttb_residual(pair: &TransmissionPair, which: Which, l1: C64, l2: C64) -> Result<ResidualReport> {
    let res = quadratic_algebra_residual(
        &pair.s_matrix(l1 - l2)?,
        &pair.matrix(which, l1)?,
        &pair.matrix(which, l2)?,
        &pair.rep,
    )?;
    Ok(ResidualReport::new(
        format!("S T T = T T S ({which}, {})", pair.params.regime()),
        vec![l1, l2],
        res,
        format!("aux x aux x interior(D={}, buffer 2), relative", pair.rep.dim()),
    ))
}

pub fn type2_rttb_residual(m: &TypeIIMatrix, l1: C64, l2: C64) -> Result<ResidualReport> {
    let rep = DefectRep::Spin(m.rep.clone());
    let res = quadratic_algebra_residual(&m.s_matrix(l1 - l2)?, &m.t(l1)?, &m.t(l2)?, &rep)?;
    Ok(ResidualReport::new(
        format!("S T T = T T S (type-II, 2S={})", m.rep.two_s),
        vec![l1, l2],
        res,
        "aux x aux x spin, relative",
    ))
}

/// `‖𝕋(λ̂)𝕋̄(−λ̂) − 1‖` and `‖𝕋̄^{t₁}(λ̂+s)𝕋^{t₁}(−λ̂+s) − 1‖` with `s` the
/// crossing shift, on the interior (one-state buffer).
pub fn unitarity_crossing_residual(pair: &TransmissionPair, lambda_hat: C64) -> Result<[ResidualReport; 2]> {
    let unit = pair.t(lambda_hat)?.matmul(&pair.t_bar(-lambda_hat)?)?;
    let space = unit.space().clone();
    let proj = interior_on_last(&space, &pair.rep, 1);
    let id = TensorOperator::identity(space);
    let s = pair.crossing_shift();
    let cross = partial_transpose(&pair.t_bar(lambda_hat + s)?, 0)?.matmul(&partial_transpose(&pair.t(-lambda_hat + s)?, 0)?)?;
    let sub = format!("aux x interior(D={}, buffer 1)", pair.rep.dim());
    let regime = pair.params.regime();
    Ok([
        ResidualReport::new(
            format!("T(l) Tbar(-l) = 1 ({regime})"),
            vec![lambda_hat],
            unit.residual_on(&id, &proj)?,
            sub.clone(),
        ),
        ResidualReport::new(
            format!("Tbar^t1(l+s) T^t1(-l+s) = 1 ({regime}, s = {s})"),
            vec![lambda_hat],
            cross.residual_on(&id, &proj)?,
            sub,
        ),
    ])
}
