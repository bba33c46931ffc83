//! Bulk R-matrices, defect Lax operators and bulk S-matrices.
//!
//! Every operator on `aux ⊗ X` is a `2×2` block matrix `[[A, B], [C, D]]`
//! whose block `(a, b)` maps auxiliary state `b` to `a`. In the XXZ regimes
//! all fractional powers of `q` are taken as `e^{s·iμ}`, with `μ = iη` in the
//! non-critical regime, so `q^{1/2}` is never ambiguous.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::oscillator::{DefectRep, HarmonicRep, QOscRep};
use crate::special::{gamma_ratio, infinite_gamma_product, q_gamma, GammaProductTerm, ProductTruncation};
use crate::tensor::{aux_block, aux_blocks, embed_sites, partial_transpose, permutation_operator, CMatrix, TensorOperator, TensorSpace};
use crate::{Error, ResidualReport, Result, C64, I};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Regime {
    Xxx,
    Critical,
    NonCritical,
}

impl std::fmt::Display for Regime {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Regime::Xxx => "xxx",
            Regime::Critical => "critical",
            Regime::NonCritical => "noncritical",
        })
    }
}

/// `+` for quantities built on `L`, `−` for those built on `L̂`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `+1.0` or `−1.0`.
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

impl std::fmt::Display for Sign {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+",
            Sign::Minus => "-",
        })
    }
}

/// Regime tag, anisotropy and defect rapidity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeParams {
    regime: Regime,
    /// `μ` for the critical regime, `η` for the non-critical one, unused for XXX.
    anisotropy: f64,
    pub theta: f64,
}

impl RegimeParams {
    pub fn xxx(theta: f64) -> Self {
        Self {
            regime: Regime::Xxx,
            anisotropy: 0.0,
            theta,
        }
    }

    /// `q = e^{iμ}`, `0 < μ < π`.
    pub fn critical(mu: f64, theta: f64) -> Result<Self> {
        if !(mu > 0.0 && mu < PI) {
            return Err(Error::InvalidParameter(format!("critical regime needs 0 < μ < π, got {mu}")));
        }
        Ok(Self {
            regime: Regime::Critical,
            anisotropy: mu,
            theta,
        })
    }

    /// Critical regime with `γ = ν − 1 = π/μ − 1`.
    pub fn critical_from_gamma(gamma: f64, theta: f64) -> Result<Self> {
        if !(gamma > 0.0) || !gamma.is_finite() {
            return Err(Error::InvalidParameter(format!("γ must be > 0, got {gamma}")));
        }
        Self::critical(PI / (gamma + 1.0), theta)
    }

    /// `q = e^{−η}`, `η > 0`.
    pub fn noncritical(eta: f64, theta: f64) -> Result<Self> {
        if !(eta > 0.0) || !eta.is_finite() {
            return Err(Error::InvalidParameter(format!("non-critical regime needs η > 0, got {eta}")));
        }
        Ok(Self {
            regime: Regime::NonCritical,
            anisotropy: eta,
            theta,
        })
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn mu(&self) -> Option<f64> {
        (self.regime == Regime::Critical).then_some(self.anisotropy)
    }

    pub fn eta(&self) -> Option<f64> {
        (self.regime == Regime::NonCritical).then_some(self.anisotropy)
    }

    /// `ν = π/μ` (critical only).
    pub fn nu(&self) -> Option<f64> {
        self.mu().map(|mu| PI / mu)
    }

    /// `γ = ν − 1` (critical only).
    pub fn gamma(&self) -> Option<f64> {
        self.nu().map(|nu| nu - 1.0)
    }

    /// `iμ` (critical) or `−η` (non-critical); zero for XXX.
    pub fn ln_q(&self) -> C64 {
        match self.regime {
            Regime::Xxx => C64::new(0.0, 0.0),
            Regime::Critical => C64::new(0.0, self.anisotropy),
            Regime::NonCritical => C64::new(-self.anisotropy, 0.0),
        }
    }

    pub fn q(&self) -> C64 {
        self.ln_q().exp()
    }

    /// `μ` as a complex number (`iη` in the non-critical regime).
    fn mu_c(&self) -> C64 {
        self.ln_q() / I
    }

    fn q_pow(&self, s: f64) -> C64 {
        (self.ln_q() * s).exp()
    }

    /// The defect representation matching this regime.
    pub fn defect_rep(&self, dim: usize) -> Result<DefectRep> {
        Ok(match self.regime {
            Regime::Xxx => DefectRep::Harmonic(HarmonicRep::new(dim)?),
            _ => DefectRep::QOsc(QOscRep::with_log(dim, self.ln_q())?),
        })
    }

    /// Scalar on the right of `L(λ) L̂(−λ) = s(λ)·1`.
    pub fn scalar_unit(&self, lambda: C64) -> C64 {
        match self.regime {
            Regime::Xxx => I * (lambda + I),
            _ => {
                let e = (self.mu_c() * lambda).exp();
                -(e - 1.0 / e) / e
            }
        }
    }

    /// Scalar on the right of `L^{t₁}(−λ−i) L̂^{t₁}(λ−i) = s(λ)·1`.
    pub fn scalar_cross(&self, lambda: C64) -> C64 {
        match self.regime {
            Regime::Xxx => -I * (lambda - I),
            _ => {
                let e = (self.mu_c() * lambda).exp();
                e * (e - 1.0 / e)
            }
        }
    }
}

fn diag2(a: C64, b: C64) -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[a, C64::new(0.0, 0.0), C64::new(0.0, 0.0), b])
}

fn sigma_plus() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)])
}

/// Bulk R-matrix on `C² ⊗ C²`.
pub fn make_r(params: &RegimeParams, lambda: C64) -> TensorOperator {
    match params.regime {
        Regime::Xxx => {
            let p = permutation_operator(2).expect("d = 2");
            TensorOperator::identity(p.space().clone())
                .scale(lambda)
                .add(&p.scale(I))
                .expect("same space")
        }
        _ => {
            let e = (params.mu_c() * lambda).exp();
            let (qh, qmh) = (params.q_pow(0.5), params.q_pow(-0.5));
            let q = params.q();
            let a = diag2(qh, qmh) * (e * qh) - diag2(qmh, qh) * (qmh / e);
            let d = diag2(qmh, qh) * (e * qh) - diag2(qh, qmh) * (qmh / e);
            let sp = sigma_plus();
            let b = sp.transpose() * (q - 1.0 / q);
            let c = sp * (q - 1.0 / q);
            aux_blocks(&a, &b, &c, &d).expect("2x2 blocks")
        }
    }
}

fn rep_for<'a>(params: &RegimeParams, rep: &'a DefectRep) -> Result<RepView<'a>> {
    match (params.regime, rep) {
        (Regime::Xxx, DefectRep::Harmonic(h)) => Ok(RepView::Harmonic(h)),
        (Regime::Critical | Regime::NonCritical, DefectRep::QOsc(r)) => {
            if (r.ln_q - params.ln_q()).norm() > 1e-12 {
                return Err(Error::RepMismatch(format!(
                    "q-oscillator built with ln q = {}, regime has {}",
                    r.ln_q,
                    params.ln_q()
                )));
            }
            Ok(RepView::QOsc(r))
        }
        (regime, rep) => Err(Error::RepMismatch(format!("{} rep cannot carry the {regime} Lax operator", rep.kind()))),
    }
}

enum RepView<'a> {
    Harmonic(&'a HarmonicRep),
    QOsc(&'a QOscRep),
}

/// Defect Lax operator `L(λ)` on `aux ⊗ defect`.
pub fn make_l(params: &RegimeParams, lambda: C64, rep: &DefectRep) -> Result<TensorOperator> {
    match rep_for(params, rep)? {
        RepView::Harmonic(h) => {
            let one = h.identity();
            aux_blocks(
                &(&one * lambda + &h.n * I + &one * I),
                &(&h.a * I),
                &(&h.a_dag * I),
                &(&one * I),
            )
        }
        RepView::QOsc(r) => {
            let e = (params.mu_c() * lambda).exp();
            let (qh, qmh) = (params.q_pow(0.5), params.q_pow(-0.5));
            aux_blocks(
                &(&r.x * (e * qh) - &r.x_inv * (qmh / e)),
                &r.a_dag,
                &r.a,
                &(&r.x * (-qmh / e)),
            )
        }
    }
}

/// Conjugate Lax operator `L̂(λ)` from its explicit entries.
pub fn make_l_hat(params: &RegimeParams, lambda: C64, rep: &DefectRep) -> Result<TensorOperator> {
    match rep_for(params, rep)? {
        RepView::Harmonic(h) => {
            let one = h.identity();
            aux_blocks(
                &(&one * I),
                &(&h.a * -I),
                &(&h.a_dag * -I),
                &(&one * -lambda + &h.n * I),
            )
        }
        RepView::QOsc(r) => {
            let e = (params.mu_c() * lambda).exp();
            let (qh, qmh) = (params.q_pow(0.5), params.q_pow(-0.5));
            aux_blocks(
                &(&r.x * (-e * qh)),
                &(-&r.a_dag),
                &(-&r.a),
                &(&r.x * (qmh / e) - &r.x_inv * (e * qh)),
            )
        }
    }
}

/// `V = antidiag(i, −i)`.
pub fn crossing_v() -> CMatrix {
    DMatrix::from_row_slice(2, 2, &[C64::new(0.0, 0.0), I, -I, C64::new(0.0, 0.0)])
}

/// `λ ↦ V₁ L^{t₁}(−λ−i) V₁` for an operator-valued function on `aux ⊗ X`.
pub fn crossing_transform<F>(l: F) -> impl Fn(C64) -> Result<TensorOperator>
where
    F: Fn(C64) -> Result<TensorOperator>,
{
    move |lambda| {
        let op = l(-lambda - I)?;
        let dims = op.space().factor_dims();
        if dims.len() < 2 || dims[0] != 2 {
            return Err(Error::InvalidSpace(format!(
                "crossing needs a 2-dimensional auxiliary factor first, got {dims:?}"
            )));
        }
        let n = op.dim() / 2;
        let v = TensorOperator::local(crossing_v().kronecker(&CMatrix::identity(n, n)))?;
        let v = TensorOperator::new(op.space().clone(), v.into_matrix())?;
        v.matmul(&partial_transpose(&op, 0)?)?.matmul(&v)
    }
}

/// Projector `1_aux ⊗ … ⊗ P_interior` acting on the last factor.
pub fn interior_on_last(space: &TensorSpace, rep: &DefectRep, buffer: usize) -> TensorOperator {
    let last = space.num_factors() - 1;
    let d = rep.dim();
    match rep {
        DefectRep::Spin(_) => TensorOperator::identity(space.clone()),
        _ => TensorOperator::projector(space.clone(), |idx| idx[last] + buffer < d),
    }
}

/// `‖R₁₂ A₁ B₂ − B₂ A₁ R₁₂‖_F` on `aux₁ ⊗ aux₂ ⊗ X`, right-multiplied by
/// `1 ⊗ 1 ⊗ P` with `P` the interior projector of `rep`.
///
/// `a` and `b` act on `aux ⊗ X`; `r` on `aux ⊗ aux`.
pub fn quadratic_residual(
    r: &TensorOperator,
    a: &TensorOperator,
    b: &TensorOperator,
    rep: &DefectRep,
    buffer: usize,
) -> Result<f64> {
    let n = a.dim() / 2;
    let space = TensorSpace::new(vec![2, 2, n])?;
    let r12 = embed_sites(r, &[0, 1], &space)?;
    let a1 = embed_sites(a, &[0, 2], &space)?;
    let b2 = embed_sites(b, &[1, 2], &space)?;
    let lhs = r12.matmul(&a1)?.matmul(&b2)?;
    let rhs = b2.matmul(&a1)?.matmul(&r12)?;
    lhs.residual_on(&rhs, &interior_on_last(&space, rep, buffer))
}

/// `‖R₁₂(λ₁−λ₂) R₁₃(λ₁) R₂₃(λ₂) − R₂₃(λ₂) R₁₃(λ₁) R₁₂(λ₁−λ₂)‖_F`.
pub fn yang_baxter_residual(r: impl Fn(C64) -> Result<TensorOperator>, l1: C64, l2: C64) -> Result<f64> {
    let space = TensorSpace::new(vec![2, 2, 2])?;
    let r12 = embed_sites(&r(l1 - l2)?, &[0, 1], &space)?;
    let r13 = embed_sites(&r(l1)?, &[0, 2], &space)?;
    let r23 = embed_sites(&r(l2)?, &[1, 2], &space)?;
    let lhs = r12.matmul(&r13)?.matmul(&r23)?;
    let rhs = r23.matmul(&r13)?.matmul(&r12)?;
    Ok(lhs.sub(&rhs)?.frobenius())
}

/// `‖R₁₂(λ₁−λ₂) L₁(λ₁) L₂(λ₂) − L₂(λ₂) L₁(λ₁) R₁₂(λ₁−λ₂)‖` on the interior
/// (two-state buffer).
pub fn rll_residual(params: &RegimeParams, rep: &DefectRep, l1: C64, l2: C64) -> Result<ResidualReport> {
    let r = make_r(params, l1 - l2);
    let res = quadratic_residual(&r, &make_l(params, l1, rep)?, &make_l(params, l2, rep)?, rep, 2)?;
    Ok(ResidualReport::new(
        format!("RLL {}", params.regime),
        vec![l1, l2],
        res,
        format!("aux x aux x interior(D={}, buffer 2)", rep.dim()),
    ))
}

/// `L`, `L̂` and their unitarity scalars for one regime and representation.
#[derive(Debug, Clone)]
pub struct LaxPair {
    pub params: RegimeParams,
    pub rep: DefectRep,
}

impl LaxPair {
    pub fn new(params: RegimeParams, rep: DefectRep) -> Result<Self> {
        rep_for(&params, &rep)?;
        Ok(Self { params, rep })
    }

    pub fn l(&self, lambda: C64) -> Result<TensorOperator> {
        make_l(&self.params, lambda, &self.rep)
    }

    pub fn l_hat(&self, lambda: C64) -> Result<TensorOperator> {
        make_l_hat(&self.params, lambda, &self.rep)
    }

    /// `L̂` obtained from `L` by crossing.
    pub fn l_hat_crossed(&self, lambda: C64) -> Result<TensorOperator> {
        crossing_transform(|mu| self.l(mu))(lambda)
    }

    pub fn scalar_unit(&self, lambda: C64) -> C64 {
        self.params.scalar_unit(lambda)
    }

    pub fn scalar_cross(&self, lambda: C64) -> C64 {
        self.params.scalar_cross(lambda)
    }
}

/// Residual reports plus the grid points skipped because a scalar vanished.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitarityCheck {
    pub reports: Vec<ResidualReport>,
    pub skipped: Vec<C64>,
}

/// Unitarity and crossing-unitarity on a λ grid, measured on the interior
/// (one-state buffer). Points where either scalar has modulus below `1e-8`
/// are skipped.
pub fn unitarity_residuals(pair: &LaxPair, grid: &[C64]) -> Result<UnitarityCheck> {
    let mut reports = Vec::new();
    let mut skipped = Vec::new();
    for &lambda in grid {
        let (su, sc) = (pair.scalar_unit(lambda), pair.scalar_cross(lambda));
        if su.norm() < 1e-8 || sc.norm() < 1e-8 {
            skipped.push(lambda);
            continue;
        }
        let unit = pair.l(lambda)?.matmul(&pair.l_hat(-lambda)?)?;
        let space = unit.space().clone();
        let proj = interior_on_last(&space, &pair.rep, 1);
        let id = TensorOperator::identity(space);
        let sub = format!("aux x interior(D={}, buffer 1)", pair.rep.dim());
        reports.push(ResidualReport::new(
            "L(l) Lhat(-l) = s_unit(l)",
            vec![lambda],
            unit.residual_on(&id.scale(su), &proj)?,
            sub.clone(),
        ));
        let cross = partial_transpose(&pair.l(-lambda - I)?, 0)?.matmul(&partial_transpose(&pair.l_hat(lambda - I)?, 0)?)?;
        reports.push(ResidualReport::new(
            "L^t1(-l-i) Lhat^t1(l-i) = s_cross(l)",
            vec![lambda],
            cross.residual_on(&id.scale(sc), &proj)?,
            sub,
        ));
    }
    Ok(UnitarityCheck { reports, skipped })
}

/// Six-vertex layout `[[a,0,0,0],[0,b,c,0],[0,c,b,0],[0,0,0,a]]`.
pub fn six_vertex(a: C64, b: C64, c: C64) -> TensorOperator {
    let z = C64::new(0.0, 0.0);
    let m = DMatrix::from_row_slice(4, 4, &[a, z, z, z, z, b, c, z, z, c, b, z, z, z, z, a]);
    TensorOperator::new(TensorSpace::new(vec![2, 2]).expect("valid"), m).expect("finite")
}

/// Six-vertex weights `(a, b, c)` of the bulk S-matrix.
pub fn s_matrix_weights(params: &RegimeParams, lambda: C64) -> (C64, C64, C64) {
    match params.regime {
        Regime::Xxx => (I * lambda + 1.0, I * lambda, C64::new(1.0, 0.0)),
        Regime::Critical => {
            let g = params.gamma().expect("critical");
            (((I * lambda + g) * PI).sin(), (I * PI * lambda).sin(), C64::new((PI * g).sin(), 0.0))
        }
        Regime::NonCritical => {
            let eta = params.eta().expect("non-critical");
            (((-lambda + I) * eta).sin(), -(lambda * eta).sin(), (I * eta).sin())
        }
    }
}

/// The convergent Gamma product of the critical soliton scalar.
pub fn critical_s_product(gamma: f64, lambda: C64) -> Result<GammaProductTerm> {
    let x = I * lambda;
    GammaProductTerm::new(
        vec![x + 2.0 * gamma, x + 1.0, -x + gamma, -x + gamma + 1.0],
        vec![x + gamma, x + gamma + 1.0, -x + 2.0 * gamma, -x + 1.0],
        2.0 * gamma,
    )
}

/// Closed-form scalar prefactor `S_s(λ)` of the bulk S-matrix.
pub fn soliton_scalar(params: &RegimeParams, lambda: C64, trunc: &ProductTruncation) -> Result<C64> {
    let x = I * lambda;
    match params.regime {
        Regime::Xxx => gamma_ratio(&[-x / 2.0 + 0.5, x / 2.0 + 1.0], &[-x / 2.0 + 1.0, x / 2.0 + 0.5]),
        Regime::Critical => {
            let g = params.gamma().expect("critical");
            infinite_gamma_product(&critical_s_product(g, lambda)?, trunc).map(|t| t.value)
        }
        Regime::NonCritical => {
            let q4 = (-4.0 * params.eta().expect("non-critical")).exp();
            let g = |z: C64| q_gamma(z, q4, trunc);
            Ok(g(-x / 2.0 + 0.5)? * g(x / 2.0 + 1.0)? / (g(-x / 2.0 + 1.0)? * g(x / 2.0 + 0.5)?))
        }
    }
}

/// Bulk S-matrix `S_s(λ)/a(λ) · six_vertex(a, b, c)`.
pub fn make_s_matrix(params: &RegimeParams, lambda: C64, trunc: &ProductTruncation) -> Result<TensorOperator> {
    let (a, b, c) = s_matrix_weights(params, lambda);
    if a.norm() < 1e-12 {
        return Err(Error::PrefactorPole {
            at: lambda,
            value: a.norm(),
        });
    }
    let s = soliton_scalar(params, lambda, trunc).map_err(|e| match e {
        Error::GammaPole { .. } | Error::RatioPole { .. } | Error::QGammaPole { .. } => Error::PrefactorPole {
            at: lambda,
            value: 0.0,
        },
        other => other,
    })?;
    Ok(six_vertex(a, b, c).scale(s / a))
}

/// Block `(row, col)` of an `aux ⊗ X` operator.
pub fn block(op: &TensorOperator, row: usize, col: usize) -> CMatrix {
    aux_block(op, row, col)
}
