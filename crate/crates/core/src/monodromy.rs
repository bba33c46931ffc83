//! Defect-bearing monodromy and transfer matrices for small chains.
//!
//! Sites are numbered `1..=N+1`; the defect sits at site `n` and every other
//! site is a spin-1/2. The monodromy acts on `aux ⊗ site₁ ⊗ … ⊗ site_{N+1}`
//! and is the ordered product `R_{0,N+1}(λ) … L_{0,n}(λ−Θ) … R_{0,1}(λ)`.
//!
//! Truncating the oscillator breaks the algebra only at the top state. Every
//! operator here conserves a charge `Q` (spin grading plus occupation, see
//! [`ChainSpec::site_charges`]) in which the off-diagonal Lax entries shift
//! the occupation by ±1, so on sectors with `Q ≤ D−2` the truncation is never
//! reached and the identities hold exactly.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

pub use crate::lax::Sign;
use crate::lax::{make_l, make_r, Regime, RegimeParams};
use crate::oscillator::DefectRep;
use crate::tensor::{embed_sites, partial_trace, CMatrix, TensorOperator, TensorSpace};
use crate::{Error, ResidualReport, Result, C64, I};

/// Default bound on the chain dimension `2^N·D`.
pub const DEFAULT_BOUND: usize = 4096;

#[derive(Debug, Clone)]
pub struct ChainSpec {
    pub n_bulk: usize,
    /// 1-based defect position, `1 ≤ n ≤ N+1`.
    pub defect_site: usize,
    pub params: RegimeParams,
    pub rep: DefectRep,
    pub bound: usize,
}

impl ChainSpec {
    pub fn new(n_bulk: usize, defect_site: usize, params: RegimeParams, rep: DefectRep) -> Result<Self> {
        Self::with_bound(n_bulk, defect_site, params, rep, DEFAULT_BOUND)
    }

    pub fn with_bound(n_bulk: usize, defect_site: usize, params: RegimeParams, rep: DefectRep, bound: usize) -> Result<Self> {
        if defect_site < 1 || defect_site > n_bulk + 1 {
            return Err(Error::InvalidParameter(format!(
                "defect site {defect_site} outside 1..={}",
                n_bulk + 1
            )));
        }
        make_l(&params, C64::new(0.0, 0.0), &rep)?;
        let dim = 2usize
            .checked_pow(n_bulk as u32)
            .and_then(|p| p.checked_mul(rep.dim()))
            .unwrap_or(usize::MAX);
        if dim > bound {
            return Err(Error::ResourceBound { dim, bound });
        }
        Ok(Self {
            n_bulk,
            defect_site,
            params,
            rep,
            bound,
        })
    }

    /// Truncation dimension `D` of the defect.
    pub fn fock_dim(&self) -> usize {
        self.rep.dim()
    }

    pub fn chain_dims(&self) -> Vec<usize> {
        (1..=self.n_bulk + 1)
            .map(|k| if k == self.defect_site { self.rep.dim() } else { 2 })
            .collect()
    }

    pub fn chain_space(&self) -> TensorSpace {
        TensorSpace::new(self.chain_dims()).expect("positive dims")
    }

    /// `aux ⊗ chain`.
    pub fn full_space(&self) -> TensorSpace {
        TensorSpace::new(std::iter::once(2).chain(self.chain_dims()).collect()).expect("positive dims")
    }

    /// Charge carried by a spin-1/2 basis state: `#down` for XXX, `#up` for XXZ.
    pub fn spin_charge(&self, index: usize) -> usize {
        match self.params.regime() {
            Regime::Xxx => index,
            _ => 1 - index,
        }
    }

    /// Charge of every basis index of every chain site; the defect contributes
    /// its occupation number.
    pub fn site_charges(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .enumerate()
            .map(|(k, &x)| if k + 1 == self.defect_site { x } else { self.spin_charge(x) })
            .sum()
    }

    /// Diagonal charge operator on the chain.
    pub fn charge_operator(&self) -> TensorOperator {
        let space = self.chain_space();
        let n = space.dim();
        let diag: Vec<C64> = (0..n)
            .map(|i| C64::new(self.site_charges(&space.multi_index(i)) as f64, 0.0))
            .collect();
        TensorOperator::new(space, DMatrix::from_diagonal(&DVector::from_vec(diag))).expect("finite")
    }

    /// Highest charge sector untouched by the truncation.
    pub fn exact_ceiling(&self) -> usize {
        match self.rep {
            DefectRep::Spin(_) => usize::MAX,
            _ => self.fock_dim() - 2,
        }
    }

    fn chain_projector(&self) -> TensorOperator {
        let ceiling = self.exact_ceiling();
        TensorOperator::projector(self.chain_space(), |m| self.site_charges(m) <= ceiling)
    }

    /// Index of the reference state: spins up (XXX) or down (XXZ), defect in `|0⟩`.
    pub fn reference_index(&self) -> usize {
        let spin = match self.params.regime() {
            Regime::Xxx => 0,
            _ => 1,
        };
        let multi: Vec<usize> = (1..=self.n_bulk + 1)
            .map(|k| if k == self.defect_site { 0 } else { spin })
            .collect();
        self.chain_space().flat_index(&multi)
    }

    /// Eigenvalue of `t(λ)` on the reference state, the sum of the products of
    /// the diagonal Lax weights on the local reference states.
    pub fn reference_eigenvalue(&self, lambda: C64) -> C64 {
        let n = self.n_bulk as i32;
        let shifted = lambda - self.params.theta;
        match self.params.regime() {
            Regime::Xxx => (lambda + I).powi(n) * (shifted + I) + I * lambda.powi(n),
            _ => {
                let mu = self.params.ln_q() / I;
                let q = self.params.q();
                let e = (mu * lambda).exp();
                let ed = (mu * shifted).exp();
                (e - 1.0 / e).powi(n) * (ed * q - 1.0 / (ed * q)) + (e * q - 1.0 / (e * q)).powi(n) * (-1.0 / ed)
            }
        }
    }
}

/// `R_{0,N+1}(λ) … L_{0,n}(λ−Θ) … R_{0,1}(λ)`.
pub fn build_monodromy(spec: &ChainSpec, lambda: C64) -> Result<TensorOperator> {
    let space = spec.full_space();
    let mut t: Option<TensorOperator> = None;
    for k in (1..=spec.n_bulk + 1).rev() {
        let local = if k == spec.defect_site {
            make_l(&spec.params, lambda - spec.params.theta, &spec.rep)?
        } else {
            make_r(&spec.params, lambda)
        };
        let op = embed_sites(&local, &[0, k], &space)?;
        t = Some(match t {
            None => op,
            Some(acc) => acc.matmul(&op)?,
        });
    }
    Ok(t.expect("at least one site"))
}

/// Auxiliary trace of the monodromy.
pub fn transfer_matrix(spec: &ChainSpec, lambda: C64) -> Result<TensorOperator> {
    partial_trace(&build_monodromy(spec, lambda)?, 0)
}

fn sector_label(spec: &ChainSpec) -> String {
    format!("charge sectors Q <= {} (N={}, D={})", spec.exact_ceiling(), spec.n_bulk, spec.fock_dim())
}

/// `‖(R₁₂(λ₁−λ₂) T₁(λ₁) T₂(λ₂) − T₂(λ₂) T₁(λ₁) R₁₂(λ₁−λ₂))P‖` and `‖R₁₂T₁T₂P‖`,
/// with `P` the projector on total charge (both auxiliary spins included) `≤ D−2`.
pub fn rtt_norms(spec: &ChainSpec, l1: C64, l2: C64) -> Result<(f64, f64)> {
    let chain = spec.chain_dims();
    let space = TensorSpace::new([2, 2].into_iter().chain(chain.iter().copied()).collect())?;
    let rest: Vec<usize> = (2..space.num_factors()).collect();
    let sites1: Vec<usize> = std::iter::once(0).chain(rest.iter().copied()).collect();
    let sites2: Vec<usize> = std::iter::once(1).chain(rest.iter().copied()).collect();
    let r12 = embed_sites(&make_r(&spec.params, l1 - l2), &[0, 1], &space)?;
    let t1 = embed_sites(&build_monodromy(spec, l1)?, &sites1, &space)?;
    let t2 = embed_sites(&build_monodromy(spec, l2)?, &sites2, &space)?;
    let lhs = r12.matmul(&t1)?.matmul(&t2)?;
    let rhs = t2.matmul(&t1)?.matmul(&r12)?;
    let ceiling = spec.exact_ceiling();
    let proj = TensorOperator::projector(space.clone(), |m| {
        spec.spin_charge(m[0]) + spec.spin_charge(m[1]) + spec.site_charges(&m[2..]) <= ceiling
    });
    Ok((lhs.residual_on(&rhs, &proj)?, lhs.residual_on(&TensorOperator::zeros(space), &proj)?))
}

/// Absolute RTT residual from [`rtt_norms`].
pub fn rtt_residual(spec: &ChainSpec, l1: C64, l2: C64) -> Result<ResidualReport> {
    Ok(ResidualReport::new(
        "RTT",
        vec![l1, l2],
        rtt_norms(spec, l1, l2)?.0,
        format!("aux x aux x chain, total {}", sector_label(spec)),
    ))
}

/// `‖[t(λ₁), t(λ₂)]P‖` and `‖t(λ₁)t(λ₂)P‖` on chain sectors `Q ≤ D−2`.
pub fn commuting_norms(spec: &ChainSpec, l1: C64, l2: C64) -> Result<(f64, f64)> {
    let (a, b) = (transfer_matrix(spec, l1)?, transfer_matrix(spec, l2)?);
    let ab = a.matmul(&b)?;
    let proj = spec.chain_projector();
    let zero = TensorOperator::zeros(ab.space().clone());
    Ok((ab.residual_on(&b.matmul(&a)?, &proj)?, ab.residual_on(&zero, &proj)?))
}

/// Absolute commutator residual from [`commuting_norms`].
pub fn commuting_residual(spec: &ChainSpec, l1: C64, l2: C64) -> Result<ResidualReport> {
    Ok(ResidualReport::new(
        "[t(l1), t(l2)] = 0",
        vec![l1, l2],
        commuting_norms(spec, l1, l2)?.0,
        sector_label(spec),
    ))
}

/// `‖[t(λ), Q]‖` on chain sectors `Q ≤ D−2`.
pub fn charge_residual(spec: &ChainSpec, lambda: C64) -> Result<ResidualReport> {
    let c = transfer_matrix(spec, lambda)?.commutator(&spec.charge_operator())?;
    let zero = TensorOperator::zeros(c.space().clone());
    Ok(ResidualReport::new(
        "[t(l), Q] = 0",
        vec![lambda],
        c.residual_on(&zero, &spec.chain_projector())?,
        sector_label(spec),
    ))
}

/// Relative error `‖t(λ)|Ω⟩ − Λ(λ)|Ω⟩‖ / |Λ(λ)|` of the reference state.
pub fn reference_residual(spec: &ChainSpec, lambda: C64) -> Result<ResidualReport> {
    let t = transfer_matrix(spec, lambda)?;
    let idx = spec.reference_index();
    let want = spec.reference_eigenvalue(lambda);
    let mut col = t.matrix().column(idx).into_owned();
    col[idx] -= want;
    Ok(ResidualReport::new(
        "t(l)|Omega> = Lambda(l)|Omega>",
        vec![lambda],
        col.norm() / want.norm().max(f64::MIN_POSITIVE),
        "reference state",
    ))
}

/// Eigenvalues of `t(λ)` in one charge sector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectorSpectrum {
    pub charge: usize,
    pub dim: usize,
    /// Whether the sector lies below the truncation ceiling.
    pub exact: bool,
    pub eigenvalues: Vec<C64>,
}

fn restrict(m: &CMatrix, idx: &[usize]) -> CMatrix {
    DMatrix::from_fn(idx.len(), idx.len(), |i, j| m[(idx[i], idx[j])])
}

/// Spectrum of `t(λ)` grouped by charge sector, eigenvalues sorted by real then
/// imaginary part.
pub fn sector_spectrum(spec: &ChainSpec, lambda: C64) -> Result<Vec<SectorSpectrum>> {
    let t = transfer_matrix(spec, lambda)?;
    let space = spec.chain_space();
    let mut sectors: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for i in 0..space.dim() {
        sectors.entry(spec.site_charges(&space.multi_index(i))).or_default().push(i);
    }
    let ceiling = spec.exact_ceiling();
    let mut out = Vec::new();
    for (charge, idx) in sectors {
        let block = restrict(t.matrix(), &idx);
        let mut eigenvalues: Vec<C64> = block
            .eigenvalues()
            .ok_or_else(|| Error::InvalidParameter(format!("eigenvalue iteration failed in sector {charge}")))?
            .iter()
            .copied()
            .collect();
        eigenvalues.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        out.push(SectorSpectrum {
            charge,
            dim: idx.len(),
            exact: charge <= ceiling,
            eigenvalues,
        });
    }
    Ok(out)
}

/// Which family of Bethe equations to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum BaeKind {
    /// `𝔢^±(λᵢ−Θ) e₁^N(λᵢ) = −∏ⱼ e₂(λᵢ−λⱼ)`.
    Standard(Sign),
    /// Negative-parity strings (critical): `𝔤^±(λᵢ−Θ) g₁^N(λᵢ) = −∏ⱼ e₂(λᵢ−λⱼ)`.
    NegativeParity(Sign),
    /// Negative-parity roots in the presence of two breathers `λ̄₁, λ̄₂`.
    BreatherRoots { sign: Sign, breathers: [C64; 2] },
    /// The breather equation for `λ̄₁`; `roots` are the negative-parity roots.
    BreatherItself { sign: Sign, breathers: [C64; 2] },
    /// Spin-`S` defect: `e_{2S}(λᵢ−Θ) e₁^N(λᵢ) = −∏ⱼ e₂(λᵢ−λⱼ)`.
    TypeII { two_s: usize },
}

/// The elementary functions entering the Bethe equations of one regime.
#[derive(Debug, Clone, Copy)]
pub struct BaeFunctions {
    params: RegimeParams,
}

impl BaeFunctions {
    pub fn new(params: RegimeParams) -> Self {
        Self { params }
    }

    fn mu(&self) -> C64 {
        self.params.ln_q() / I
    }

    /// `sinh(μx)`, `sin(ηx)` or `x`.
    fn s(&self, x: C64) -> C64 {
        match self.params.regime() {
            Regime::Xxx => x,
            Regime::Critical => (self.mu() * x).sinh(),
            Regime::NonCritical => (x * self.params.eta().expect("non-critical")).sin(),
        }
    }

    /// `e^{−μλ}` or `e^{−iηλ}` (both `e^{−μλ}` with `μ = iη`); 1 for XXX.
    fn phase(&self, x: C64) -> C64 {
        (-self.mu() * x).exp()
    }

    pub fn e(&self, n: f64, x: C64) -> C64 {
        let h = I * (n / 2.0);
        self.s(x + h) / self.s(x - h)
    }

    pub fn frak_e(&self, sign: Sign, x: C64) -> C64 {
        let h = I * 0.5;
        match (self.params.regime(), sign) {
            (Regime::Xxx, Sign::Plus) => x + h,
            (Regime::Xxx, Sign::Minus) => 1.0 / (x - h),
            (_, Sign::Plus) => self.phase(x) / self.s(x + h),
            (_, Sign::Minus) => self.phase(x) * self.s(x - h),
        }
    }

    fn require_critical(&self) -> Result<C64> {
        match self.params.regime() {
            Regime::Critical => Ok(self.mu()),
            r => Err(Error::InvalidParameter(format!("negative-parity strings need the critical regime, got {r}"))),
        }
    }

    pub fn g(&self, n: f64, x: C64) -> Result<C64> {
        let mu = self.require_critical()?;
        let h = I * (n / 2.0);
        Ok((mu * (x + h)).cosh() / (mu * (x - h)).cosh())
    }

    pub fn frak_g(&self, sign: Sign, x: C64) -> Result<C64> {
        let mu = self.require_critical()?;
        let h = I * 0.5;
        let ph = (-mu * x).exp();
        Ok(match sign {
            Sign::Plus => ph / (mu * (x + h)).cosh(),
            Sign::Minus => ph * (mu * (x - h)).cosh(),
        })
    }
}

fn check_distinct(roots: &[C64]) -> Result<()> {
    for i in 0..roots.len() {
        for j in 0..i {
            if (roots[i] - roots[j]).norm() < 1e-12 {
                return Err(Error::CoincidentRoots(j, i));
            }
        }
    }
    Ok(())
}

/// Left side minus right side of the Bethe equations for every root. The
/// products over `j` run over all supplied roots, including `j = i` where
/// `e₂(0) = −1`; `M` is the length of `roots`.
pub fn bae_residual(params: &RegimeParams, n_bulk: usize, kind: BaeKind, roots: &[C64]) -> Result<Vec<C64>> {
    check_distinct(roots)?;
    let f = BaeFunctions::new(*params);
    let n = n_bulk as i32;
    let theta = params.theta;
    let bulk = |x: C64| f.e(2.0, x);
    let prod = |x: C64, w: &dyn Fn(C64) -> Result<C64>| -> Result<C64> {
        roots.iter().try_fold(C64::new(1.0, 0.0), |acc, &r| Ok(acc * w(x - r)?))
    };
    let mut out = Vec::with_capacity(roots.len());
    match kind {
        BaeKind::Standard(sign) => {
            for &x in roots {
                out.push(f.frak_e(sign, x - theta) * f.e(1.0, x).powi(n) + prod(x, &|y| Ok(bulk(y)))?);
            }
        }
        BaeKind::TypeII { two_s } => {
            for &x in roots {
                out.push(f.e(two_s as f64, x - theta) * f.e(1.0, x).powi(n) + prod(x, &|y| Ok(bulk(y)))?);
            }
        }
        BaeKind::NegativeParity(sign) => {
            for &x in roots {
                out.push(f.frak_g(sign, x - theta)? * f.g(1.0, x)?.powi(n) + prod(x, &|y| Ok(bulk(y)))?);
            }
        }
        BaeKind::BreatherRoots { sign, breathers } => {
            for &x in roots {
                let extra = f.g(2.0, x - breathers[0])? * f.g(2.0, x - breathers[1])?;
                out.push(f.frak_g(sign, x - theta)? * f.g(1.0, x)?.powi(n) + prod(x, &|y| Ok(bulk(y)))? * extra);
            }
        }
        BaeKind::BreatherItself { sign, breathers } => {
            f.require_critical()?;
            let b1 = breathers[0];
            let lhs = f.frak_e(sign, b1 - theta) * f.e(1.0, b1).powi(n);
            let rhs = prod(b1, &|y| f.g(2.0, y))? * f.e(2.0, b1 - breathers[1]);
            out.push(lhs + rhs);
        }
    }
    Ok(out)
}

/// Damped Newton iteration on [`bae_residual`] with a finite-difference
/// Jacobian. Returns the roots once the largest residual is below `tol`.
pub fn solve_bae(
    params: &RegimeParams,
    n_bulk: usize,
    kind: BaeKind,
    initial: &[C64],
    tol: f64,
    max_iter: usize,
) -> Result<Vec<C64>> {
    let m = initial.len();
    let mut x = initial.to_vec();
    let norm = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let mut fx = bae_residual(params, n_bulk, kind, &x)?;
    if matches!(kind, BaeKind::BreatherItself { .. }) {
        return Err(Error::InvalidParameter("the breather equation fixes λ̄₁, not the roots".into()));
    }
    for _ in 0..max_iter {
        if norm(&fx) < tol {
            return Ok(x);
        }
        let mut jac = DMatrix::<C64>::zeros(m, m);
        for j in 0..m {
            let h = 1e-7 * (1.0 + x[j].norm());
            let mut xp = x.clone();
            xp[j] += h;
            let fp = bae_residual(params, n_bulk, kind, &xp)?;
            let mut xm = x.clone();
            xm[j] -= h;
            let fm = bae_residual(params, n_bulk, kind, &xm)?;
            for i in 0..m {
                jac[(i, j)] = (fp[i] - fm[i]) / (2.0 * h);
            }
        }
        let rhs = DVector::from_iterator(m, fx.iter().map(|z| -z));
        let step = jac
            .lu()
            .solve(&rhs)
            .ok_or_else(|| Error::InvalidParameter("singular Bethe Jacobian".into()))?;
        let mut damp = 1.0;
        loop {
            let trial: Vec<C64> = x.iter().zip(step.iter()).map(|(a, s)| a + s * damp).collect();
            if let Ok(ft) = bae_residual(params, n_bulk, kind, &trial) {
                if norm(&ft) < norm(&fx) || damp < 1e-3 {
                    x = trial;
                    fx = ft;
                    break;
                }
            }
            damp *= 0.5;
            if damp < 1e-4 {
                break;
            }
        }
    }
    if norm(&fx) < tol {
        Ok(x)
    } else {
        Err(Error::NotConverged {
            tol,
            max_terms: max_iter,
            tail: norm(&fx),
        })
    }
}
