//! Truncated oscillator representations and finite spin representations.
//!
//! The harmonic rep is the polynomial model `a = x`, `a† = −d/dx` on
//! monomials `|n⟩ = xⁿ`, so `a†|0⟩ = 0`, `[a, a†] = 1` and `N = a a†` has
//! spectrum `0, −1, −2, ..`. Truncating at dimension `D` breaks the
//! relations only in the image of the top state; identities are therefore
//! measured on an interior projector that drops the top `buffer` states.
//!
//! The q-oscillator is built from the Weyl pair `X|n⟩ = q^{n+1/2}|n⟩`,
//! `Y|n⟩ = |n+1⟩` with `V = X`, `a = YX` and `a† = (X⁻¹ − qX)Y⁻¹`. The
//! offset `1/2` in the exponent is the only one giving both `a†|0⟩ = 0`
//! (which needs `q^{−c+1/2} = q^{c+1/2}` at `n = 0`, i.e. `c = 1/2` for the
//! coefficient `q^{−n+1/2} − q^{n+1/2}` of `a†`) and `V|0⟩ = q^{1/2}|0⟩`.

use nalgebra::DMatrix;

use crate::tensor::CMatrix;
use crate::{Error, ResidualReport, Result, C64};

fn zeros(d: usize) -> CMatrix {
    DMatrix::zeros(d, d)
}

fn eye(d: usize) -> CMatrix {
    DMatrix::identity(d, d)
}

/// Diagonal projector onto basis states `n ≤ dim − 1 − buffer`.
pub fn interior_projector(dim: usize, buffer: usize) -> CMatrix {
    DMatrix::from_fn(dim, dim, |i, j| {
        if i == j && i + buffer < dim {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn relation(name: &str, lhs: &CMatrix, rhs: &CMatrix, proj: Option<(&CMatrix, usize)>) -> ResidualReport {
    let diff = lhs - rhs;
    let (residual, subspace) = match proj {
        Some((p, buffer)) => ((diff * p).norm(), format!("interior n <= D-1-{buffer}")),
        None => (diff.norm(), "full".to_string()),
    };
    ResidualReport::new(name, vec![], residual, subspace)
}

#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicRep {
    pub dim: usize,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    pub n: CMatrix,
}

impl HarmonicRep {
    pub fn new(dim: usize) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidParameter(format!("oscillator dimension must be >= 3, got {dim}")));
        }
        let mut a = zeros(dim);
        let mut a_dag = zeros(dim);
        for n in 0..dim - 1 {
            a[(n + 1, n)] = C64::new(1.0, 0.0);
            a_dag[(n, n + 1)] = C64::new(-((n + 1) as f64), 0.0);
        }
        let n = &a * &a_dag;
        Ok(Self { dim, a, a_dag, n })
    }

    pub fn identity(&self) -> CMatrix {
        eye(self.dim)
    }

    pub fn interior(&self, buffer: usize) -> CMatrix {
        interior_projector(self.dim, buffer)
    }

    /// Defining relations projected onto the interior (one-state buffer).
    pub fn algebra_residuals(&self) -> Vec<ResidualReport> {
        let p = self.interior(1);
        let proj = Some((&p, 1));
        let comm = |x: &CMatrix, y: &CMatrix| x * y - y * x;
        vec![
            relation("[a,a+] = 1", &comm(&self.a, &self.a_dag), &self.identity(), proj),
            relation("N = a a+", &self.n, &(&self.a * &self.a_dag), proj),
            relation("[N,a] = -a", &comm(&self.n, &self.a), &(-&self.a), proj),
            relation("[N,a+] = a+", &comm(&self.n, &self.a_dag), &self.a_dag, proj),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QOscRep {
    pub dim: usize,
    pub q: C64,
    /// The branch of `ln q` used for every fractional power.
    pub ln_q: C64,
    pub v: CMatrix,
    pub x: CMatrix,
    pub x_inv: CMatrix,
    pub y: CMatrix,
    pub y_inv: CMatrix,
    pub a: CMatrix,
    pub a_dag: CMatrix,
    /// Smallest `m < dim` with `q^m = 1`, if any. The spectrum of `X` then
    /// degenerates and the rep is reducible, though the matrices still obey
    /// the defining relations.
    pub root_of_unity: Option<usize>,
}

impl QOscRep {
    /// Uses the principal logarithm of `q`.
    pub fn new(dim: usize, q: C64) -> Result<Self> {
        if q.norm() == 0.0 || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite and nonzero, got {q}")));
        }
        Self::with_log(dim, q.ln())
    }

    /// Builds the rep for `q = e^{ln_q}`.
    pub fn with_log(dim: usize, ln_q: C64) -> Result<Self> {
        if dim < 3 {
            return Err(Error::InvalidParameter(format!("oscillator dimension must be >= 3, got {dim}")));
        }
        let q = ln_q.exp();
        let on_circle = (q.norm() - 1.0).abs() < 1e-12;
        let real_unit = q.im.abs() < 1e-15 && q.re > 0.0 && q.re < 1.0;
        if !(on_circle || real_unit) || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must satisfy |q| = 1 or 0 < q < 1, got {q}")));
        }
        let pow = |s: f64| (ln_q * s).exp();
        let x = DMatrix::from_fn(dim, dim, |i, j| if i == j { pow(i as f64 + 0.5) } else { C64::new(0.0, 0.0) });
        let x_inv = DMatrix::from_fn(dim, dim, |i, j| if i == j { pow(-(i as f64) - 0.5) } else { C64::new(0.0, 0.0) });
        let mut y = zeros(dim);
        for n in 0..dim - 1 {
            y[(n + 1, n)] = C64::new(1.0, 0.0);
        }
        let y_inv = y.transpose();
        let a = &y * &x;
        let a_dag = (&x_inv - &x * q) * &y_inv;
        let root_of_unity = (1..dim).find(|&m| ((ln_q * m as f64).exp() - 1.0).norm() < 1e-12);
        Ok(Self {
            dim,
            q,
            ln_q,
            v: x.clone(),
            x,
            x_inv,
            y,
            y_inv,
            a,
            a_dag,
            root_of_unity,
        })
    }

    /// `q^s` on the stored branch.
    pub fn q_pow(&self, s: f64) -> C64 {
        (self.ln_q * s).exp()
    }

    pub fn identity(&self) -> CMatrix {
        eye(self.dim)
    }

    pub fn interior(&self, buffer: usize) -> CMatrix {
        interior_projector(self.dim, buffer)
    }

    pub fn algebra_residuals(&self) -> Vec<ResidualReport> {
        let p = self.interior(1);
        let proj = Some((&p, 1));
        let q = self.q;
        let v2 = &self.v * &self.v;
        let one = self.identity();
        vec![
            relation("XY = qYX", &(&self.x * &self.y), &(&self.y * &self.x * q), proj),
            relation("a+ a = 1 - qV^2", &(&self.a_dag * &self.a), &(&one - &v2 * q), proj),
            relation("a a+ = 1 - V^2/q", &(&self.a * &self.a_dag), &(&one - &v2 / q), proj),
            relation("Va = q aV", &(&self.v * &self.a), &(&self.a * &self.v * q), proj),
            relation("Va+ = a+V/q", &(&self.v * &self.a_dag), &(&self.a_dag * &self.v / q), proj),
        ]
    }
}

/// q-number `[n]_q = (qⁿ − q⁻ⁿ)/(q − q⁻¹)`, equal to `n` at `q = 1`.
pub fn q_number(n: f64, ln_q: C64) -> C64 {
    if ln_q.norm() < 1e-300 {
        return C64::new(n, 0.0);
    }
    (ln_q * n).sinh() / ln_q.sinh()
}

/// Spin-`S` representation of `U_q(sl₂)` on the basis `m = S, S−1, .., −S`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinRep {
    /// `2S`.
    pub two_s: usize,
    pub ln_q: C64,
    pub s_z: CMatrix,
    pub s_plus: CMatrix,
    pub s_minus: CMatrix,
}

impl SpinRep {
    pub fn new(two_s: usize, q: C64) -> Result<Self> {
        if q.norm() == 0.0 || !q.is_finite() {
            return Err(Error::InvalidParameter(format!("q must be finite and nonzero, got {q}")));
        }
        Ok(Self::with_log(two_s, q.ln()))
    }

    pub fn with_log(two_s: usize, ln_q: C64) -> Self {
        let d = two_s + 1;
        let s = two_s as f64 / 2.0;
        let m = |i: usize| s - i as f64;
        let s_z = DMatrix::from_fn(d, d, |i, j| if i == j { C64::new(m(i), 0.0) } else { C64::new(0.0, 0.0) });
        let mut s_plus = zeros(d);
        for i in 1..d {
            // S⁺|m⟩ = √([S−m][S+m+1]) |m+1⟩ with m = m(i), m + 1 = m(i − 1)
            let mi = m(i);
            s_plus[(i - 1, i)] = (q_number(s - mi, ln_q) * q_number(s + mi + 1.0, ln_q)).sqrt();
        }
        let s_minus = s_plus.transpose();
        Self {
            two_s,
            ln_q,
            s_z,
            s_plus,
            s_minus,
        }
    }

    pub fn spin(&self) -> f64 {
        self.two_s as f64 / 2.0
    }

    pub fn dim(&self) -> usize {
        self.two_s + 1
    }

    pub fn identity(&self) -> CMatrix {
        eye(self.dim())
    }

    pub fn algebra_residuals(&self) -> Vec<ResidualReport> {
        let comm = |x: &CMatrix, y: &CMatrix| x * y - y * x;
        let two_sz = self.s_z.map(|z| q_number(2.0 * z.re, self.ln_q));
        vec![
            relation("[S+,S-] = [2Sz]_q", &comm(&self.s_plus, &self.s_minus), &two_sz, None),
            relation("[Sz,S+] = S+", &comm(&self.s_z, &self.s_plus), &self.s_plus, None),
            relation("[Sz,S-] = -S-", &comm(&self.s_z, &self.s_minus), &(-&self.s_minus), None),
        ]
    }
}

/// Any of the representations a defect can carry.
#[derive(Debug, Clone, PartialEq)]
pub enum DefectRep {
    Harmonic(HarmonicRep),
    QOsc(QOscRep),
    Spin(SpinRep),
}

impl DefectRep {
    pub fn dim(&self) -> usize {
        match self {
            DefectRep::Harmonic(r) => r.dim,
            DefectRep::QOsc(r) => r.dim,
            DefectRep::Spin(r) => r.dim(),
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            DefectRep::Harmonic(_) => "harmonic",
            DefectRep::QOsc(_) => "q-oscillator",
            DefectRep::Spin(_) => "spin",
        }
    }

    /// Projector onto states that stay clear of the truncation; the identity
    /// for spin reps.
    pub fn interior(&self, buffer: usize) -> CMatrix {
        match self {
            DefectRep::Spin(r) => r.identity(),
            _ => interior_projector(self.dim(), buffer),
        }
    }

    pub fn algebra_residuals(&self) -> Vec<ResidualReport> {
        match self {
            DefectRep::Harmonic(r) => r.algebra_residuals(),
            DefectRep::QOsc(r) => r.algebra_residuals(),
            DefectRep::Spin(r) => r.algebra_residuals(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;

    #[test]
    fn harmonic_small_case() {
        let r = HarmonicRep::new(3).unwrap();
        let want = DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(0.0), c(-1.0), c(-2.0)]));
        assert_eq!(r.n, want);
        // a†|0⟩ = 0, N|0⟩ = 0
        assert!(r.a_dag.column(0).norm() == 0.0);
        assert!(r.n.column(0).norm() == 0.0);
        assert!(HarmonicRep::new(2).is_err());
    }

    #[test]
    fn harmonic_relations_on_interior() {
        for d in [4, 8, 12] {
            let r = HarmonicRep::new(d).unwrap();
            for rep in r.algebra_residuals() {
                assert!(rep.residual < 1e-13, "{}: {}", rep.identity, rep.residual);
            }
        }
    }

    #[test]
    fn harmonic_boundary_violation() {
        // [a,a†] = 1 fails only at the top state, where it equals −(D−1)
        let d = 8;
        let r = HarmonicRep::new(d).unwrap();
        let diff = &r.a * &r.a_dag - &r.a_dag * &r.a - r.identity();
        assert!((diff.norm() - d as f64).abs() < 1e-12);
        assert!(diff.norm() >= (d - 2) as f64);
    }

    #[test]
    fn ladder_operators_shift_by_one() {
        let r = HarmonicRep::new(6).unwrap();
        let q = QOscRep::new(6, C64::from_polar(1.0, 0.7)).unwrap();
        for (raise, lower) in [(&r.a, &r.a_dag), (&q.a, &q.a_dag)] {
            for i in 0..6 {
                for j in 0..6 {
                    if i != j + 1 {
                        assert_eq!(raise[(i, j)], c(0.0));
                    }
                    if j != i + 1 {
                        assert_eq!(lower[(i, j)], c(0.0));
                    }
                }
            }
        }
    }

    #[test]
    fn q_oscillator_relations() {
        for q in [C64::from_polar(1.0, 0.7), c((-0.4f64).exp()), C64::from_polar(1.0, 2.1)] {
            let r = QOscRep::new(8, q).unwrap();
            assert_eq!(r.root_of_unity, None);
            for rep in r.algebra_residuals() {
                assert!(rep.residual < 1e-12, "q = {q}, {}: {}", rep.identity, rep.residual);
            }
            // a†a|n⟩ = (1 − q^{2n+2})|n⟩ below the top state
            let ada = &r.a_dag * &r.a;
            for n in 0..7 {
                let want = C64::new(1.0, 0.0) - r.q_pow(2.0 * n as f64 + 2.0);
                assert!((ada[(n, n)] - want).norm() < 1e-13);
            }
            // reference state
            assert!(r.a_dag.column(0).norm() < 1e-15);
            assert!((r.v[(0, 0)] - r.q_pow(0.5)).norm() < 1e-15);
            assert!((&r.a * &r.a_dag)[(0, 0)].norm() < 1e-14);
        }
    }

    #[test]
    fn q_oscillator_flags_roots_of_unity() {
        let r = QOscRep::with_log(6, C64::new(0.0, 1.5 * std::f64::consts::PI)).unwrap();
        assert_eq!(r.root_of_unity, Some(4));
        // the matrices still satisfy the relations
        assert!(crate::report::worst(&r.algebra_residuals()) < 1e-12);
        assert!(QOscRep::new(6, c(1.5)).is_err());
        assert!(QOscRep::new(2, c(0.5)).is_err());
    }

    #[test]
    fn spin_half_is_pauli() {
        let r = SpinRep::new(1, c((-0.5f64).exp())).unwrap();
        assert_eq!(r.s_plus[(0, 1)], c(1.0));
        assert_eq!(r.s_z[(0, 0)], c(0.5));
        assert_eq!(r.s_z[(1, 1)], c(-0.5));
    }

    #[test]
    fn spin_relations() {
        for two_s in 0..6 {
            for q in [c((-0.5f64).exp()), c(1.0), C64::from_polar(1.0, 0.3)] {
                let r = SpinRep::new(two_s, q).unwrap();
                assert!(crate::report::worst(&r.algebra_residuals()) < 1e-13);
            }
        }
        // classical limit: [S⁺,S⁻] = 2Sᶻ
        let r = SpinRep::new(2, c(1.0)).unwrap();
        let comm = &r.s_plus * &r.s_minus - &r.s_minus * &r.s_plus;
        assert!((comm - &r.s_z * c(2.0)).norm() < 1e-14);
    }
}
