//! Dense complex operators on explicit tensor-product spaces.
//!
//! Factor indices are zero-based. A basis vector of a space with factor
//! dimensions `[d0, d1, ..]` is indexed by the multi-index `(i0, i1, ..)`
//! flattened row-major, so the leftmost factor varies slowest.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::{Error, Result, C64};

pub type CMatrix = DMatrix<C64>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TensorSpace {
    factor_dims: Vec<usize>,
}

impl TensorSpace {
    pub fn new(factor_dims: Vec<usize>) -> Result<Self> {
        if factor_dims.is_empty() {
            return Err(Error::InvalidSpace("no factors".into()));
        }
        if let Some(i) = factor_dims.iter().position(|&d| d == 0) {
            return Err(Error::InvalidSpace(format!("factor {i} has dimension 0")));
        }
        Ok(Self { factor_dims })
    }

    pub fn single(dim: usize) -> Result<Self> {
        Self::new(vec![dim])
    }

    pub fn factor_dims(&self) -> &[usize] {
        &self.factor_dims
    }

    pub fn num_factors(&self) -> usize {
        self.factor_dims.len()
    }

    pub fn dim(&self) -> usize {
        self.factor_dims.iter().product()
    }

    pub fn concat(&self, other: &TensorSpace) -> TensorSpace {
        let mut dims = self.factor_dims.clone();
        dims.extend_from_slice(&other.factor_dims);
        TensorSpace { factor_dims: dims }
    }

    /// Row-major strides; the last factor has stride 1.
    pub fn strides(&self) -> Vec<usize> {
        let mut strides = vec![1; self.factor_dims.len()];
        for i in (0..self.factor_dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * self.factor_dims[i + 1];
        }
        strides
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut out = vec![0; self.factor_dims.len()];
        for (slot, &d) in out.iter_mut().zip(&self.factor_dims).rev() {
            *slot = flat % d;
            flat /= d;
        }
        out
    }

    pub fn flat_index(&self, multi: &[usize]) -> usize {
        multi
            .iter()
            .zip(&self.factor_dims)
            .fold(0, |acc, (&i, &d)| acc * d + i)
    }

    fn check_factor(&self, factor: usize) -> Result<()> {
        if factor >= self.factor_dims.len() {
            return Err(Error::BadFactor {
                index: factor,
                count: self.factor_dims.len(),
            });
        }
        Ok(())
    }

    fn without(&self, factor: usize) -> Option<TensorSpace> {
        if self.factor_dims.len() < 2 {
            return None;
        }
        let mut dims = self.factor_dims.clone();
        dims.remove(factor);
        Some(TensorSpace { factor_dims: dims })
    }
}

/// A square complex matrix tied to the space it acts on.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorOperator {
    space: TensorSpace,
    entries: CMatrix,
}

impl TensorOperator {
    pub fn new(space: TensorSpace, entries: CMatrix) -> Result<Self> {
        let expected = space.dim();
        if entries.nrows() != expected || entries.ncols() != expected {
            return Err(Error::BadShape {
                rows: entries.nrows(),
                cols: entries.ncols(),
                expected,
            });
        }
        if entries.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { space, entries })
    }

    /// Operator on a single factor of dimension `m.nrows()`.
    pub fn local(m: CMatrix) -> Result<Self> {
        let space = TensorSpace::single(m.nrows())?;
        Self::new(space, m)
    }

    pub fn identity(space: TensorSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            entries: CMatrix::identity(d, d),
        }
    }

    pub fn zeros(space: TensorSpace) -> Self {
        let d = space.dim();
        Self {
            space,
            entries: CMatrix::zeros(d, d),
        }
    }

    /// Diagonal 0/1 operator keeping the basis states whose multi-index satisfies `keep`.
    pub fn projector(space: TensorSpace, keep: impl Fn(&[usize]) -> bool) -> Self {
        let d = space.dim();
        let mut entries = CMatrix::zeros(d, d);
        for i in 0..d {
            if keep(&space.multi_index(i)) {
                entries[(i, i)] = C64::new(1.0, 0.0);
            }
        }
        Self { space, entries }
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }

    pub fn into_matrix(self) -> CMatrix {
        self.entries
    }

    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn frobenius(&self) -> f64 {
        self.entries.norm()
    }

    fn same_space(&self, other: &Self) -> Result<()> {
        if self.space != other.space {
            return Err(Error::SpaceMismatch {
                left: self.space.factor_dims.clone(),
                right: other.space.factor_dims.clone(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries * &other.entries,
        })
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries + &other.entries,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries - &other.entries,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            space: self.space.clone(),
            entries: &self.entries * s,
        }
    }

    pub fn commutator(&self, other: &Self) -> Result<Self> {
        self.same_space(other)?;
        Ok(Self {
            space: self.space.clone(),
            entries: &self.entries * &other.entries - &other.entries * &self.entries,
        })
    }

    pub fn transpose(&self) -> Self {
        Self {
            space: self.space.clone(),
            entries: self.entries.transpose(),
        }
    }

    pub fn kron(&self, other: &Self) -> Self {
        kron(self, other)
    }

    pub fn partial_transpose(&self, factor: usize) -> Result<Self> {
        partial_transpose(self, factor)
    }

    /// Frobenius norm of `(self − other)·P`; measures an identity on the range of `P`.
    pub fn residual_on(&self, other: &Self, projector: &Self) -> Result<f64> {
        self.same_space(other)?;
        self.same_space(projector)?;
        Ok(((&self.entries - &other.entries) * &projector.entries).norm())
    }
}

pub fn kron(a: &TensorOperator, b: &TensorOperator) -> TensorOperator {
    TensorOperator {
        space: a.space.concat(&b.space),
        entries: a.entries.kronecker(&b.entries),
    }
}

/// Swap operator on `C^d ⊗ C^d`.
pub fn permutation_operator(d: usize) -> Result<TensorOperator> {
    if d < 2 {
        return Err(Error::InvalidParameter(format!(
            "permutation needs d >= 2, got {d}"
        )));
    }
    let space = TensorSpace::new(vec![d, d])?;
    let mut entries = CMatrix::zeros(d * d, d * d);
    for a in 0..d {
        for b in 0..d {
            entries[(b * d + a, a * d + b)] = C64::new(1.0, 0.0);
        }
    }
    Ok(TensorOperator { space, entries })
}

pub fn partial_transpose(m: &TensorOperator, factor: usize) -> Result<TensorOperator> {
    m.space.check_factor(factor)?;
    let space = &m.space;
    let stride = space.strides()[factor];
    let d = space.factor_dims[factor];
    let n = m.dim();
    let mut out = CMatrix::zeros(n, n);
    for r in 0..n {
        let ri = (r / stride) % d;
        for c in 0..n {
            let ci = (c / stride) % d;
            let r2 = r - ri * stride + ci * stride;
            let c2 = c - ci * stride + ri * stride;
            out[(r2, c2)] = m.entries[(r, c)];
        }
    }
    Ok(TensorOperator {
        space: space.clone(),
        entries: out,
    })
}

/// Places a single-factor matrix at `site`, identity elsewhere.
pub fn embed(op: &CMatrix, site: usize, space: &TensorSpace) -> Result<TensorOperator> {
    space.check_factor(site)?;
    let local = TensorOperator::local(op.clone())?;
    embed_sites(&local, &[site], space)
}

/// Places a multi-factor operator on the listed factors of `space`, in the
/// given order, with identity on the remaining factors.
pub fn embed_sites(op: &TensorOperator, sites: &[usize], space: &TensorSpace) -> Result<TensorOperator> {
    if sites.len() != op.space.num_factors() {
        return Err(Error::InvalidParameter(format!(
            "{} sites given for an operator on {} factors",
            sites.len(),
            op.space.num_factors()
        )));
    }
    for (k, &s) in sites.iter().enumerate() {
        space.check_factor(s)?;
        if sites[..k].contains(&s) {
            return Err(Error::InvalidParameter(format!("site {s} repeated")));
        }
        let expected = space.factor_dims[s];
        let got = op.space.factor_dims[k];
        if got != expected {
            return Err(Error::DimensionMismatch { got, expected });
        }
    }
    let strides = space.strides();
    let rest: Vec<usize> = (0..space.num_factors()).filter(|f| !sites.contains(f)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&f| space.factor_dims[f]).collect();
    let rest_count: usize = rest_dims.iter().product();

    // flat offset contributed by each local basis index
    let local_space = &op.space;
    let local_offsets: Vec<usize> = (0..local_space.dim())
        .map(|i| {
            local_space
                .multi_index(i)
                .iter()
                .zip(sites)
                .map(|(&x, &s)| x * strides[s])
                .sum()
        })
        .collect();

    let n = space.dim();
    let mut out = CMatrix::zeros(n, n);
    let mut rest_idx = vec![0usize; rest.len()];
    for _ in 0..rest_count {
        let base: usize = rest_idx
            .iter()
            .zip(&rest)
            .map(|(&x, &f)| x * strides[f])
            .sum();
        for (i, &oi) in local_offsets.iter().enumerate() {
            for (j, &oj) in local_offsets.iter().enumerate() {
                let v = op.entries[(i, j)];
                if v != C64::new(0.0, 0.0) {
                    out[(base + oi, base + oj)] = v;
                }
            }
        }
        for k in (0..rest_idx.len()).rev() {
            rest_idx[k] += 1;
            if rest_idx[k] < rest_dims[k] {
                break;
            }
            rest_idx[k] = 0;
        }
    }
    Ok(TensorOperator {
        space: space.clone(),
        entries: out,
    })
}

/// Traces out one factor.
pub fn partial_trace(m: &TensorOperator, factor: usize) -> Result<TensorOperator> {
    m.space.check_factor(factor)?;
    let reduced = m
        .space
        .without(factor)
        .ok_or_else(|| Error::InvalidSpace("cannot trace out the only factor".into()))?;
    let stride = m.space.strides()[factor];
    let d = m.space.factor_dims[factor];
    let n = reduced.dim();
    let mut out = CMatrix::zeros(n, n);
    // reduced flat index -> full flat index with the traced factor at 0
    let lift = |i: usize| -> usize {
        let hi = i / stride;
        let lo = i % stride;
        hi * stride * d + lo
    };
    for r in 0..n {
        let fr = lift(r);
        for c in 0..n {
            let fc = lift(c);
            let mut acc = C64::new(0.0, 0.0);
            for k in 0..d {
                acc += m.entries[(fr + k * stride, fc + k * stride)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(TensorOperator {
        space: reduced,
        entries: out,
    })
}

/// Builds a `2×2` auxiliary block operator `[[a, b], [c, d]]` on `C^2 ⊗ C^n`.
pub fn aux_blocks(a: &CMatrix, b: &CMatrix, c: &CMatrix, d: &CMatrix) -> Result<TensorOperator> {
    let n = a.nrows();
    for m in [a, b, c, d] {
        if m.nrows() != n || m.ncols() != n {
            return Err(Error::BadShape {
                rows: m.nrows(),
                cols: m.ncols(),
                expected: n,
            });
        }
    }
    let mut entries = CMatrix::zeros(2 * n, 2 * n);
    entries.view_mut((0, 0), (n, n)).copy_from(a);
    entries.view_mut((0, n), (n, n)).copy_from(b);
    entries.view_mut((n, 0), (n, n)).copy_from(c);
    entries.view_mut((n, n), (n, n)).copy_from(d);
    TensorOperator::new(TensorSpace::new(vec![2, n])?, entries)
}

/// Block `(row, col)` of an operator on `C^2 ⊗ C^n`.
pub fn aux_block(op: &TensorOperator, row: usize, col: usize) -> CMatrix {
    let n = op.dim() / 2;
    op.entries.view((row * n, col * n), (n, n)).into_owned()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn sz() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![c(1.0), c(-1.0)]))
    }

    fn random_matrix(n: usize, vals: &[(f64, f64)]) -> CMatrix {
        CMatrix::from_fn(n, n, |i, j| {
            let (re, im) = vals[(i * n + j) % vals.len()];
            C64::new(re, im)
        })
    }

    fn max_diff(a: &CMatrix, b: &CMatrix) -> f64 {
        (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn kron_identities() {
        let i2 = TensorOperator::identity(TensorSpace::single(2).unwrap());
        let i3 = TensorOperator::identity(TensorSpace::single(3).unwrap());
        let k = kron(&i2, &i3);
        assert_eq!(k.space().factor_dims(), &[2, 3]);
        assert_eq!(k.matrix(), &CMatrix::identity(6, 6));

        let z = TensorOperator::local(sz()).unwrap();
        let zz = kron(&z, &z);
        let expected = [1.0, -1.0, -1.0, 1.0];
        for (i, e) in expected.iter().enumerate() {
            assert_eq!(zz.matrix()[(i, i)], c(*e));
        }
        assert_eq!(zz.matrix().iter().filter(|v| v.norm() > 0.0).count(), 4);
    }

    #[test]
    fn permutation_layout() {
        let p = permutation_operator(2).unwrap();
        let m = p.matrix();
        for (r, col) in [(0, 0), (1, 2), (2, 1), (3, 3)] {
            assert_eq!(m[(r, col)], c(1.0));
        }
        assert_eq!(m.iter().filter(|v| v.norm() > 0.0).count(), 4);
        for d in [2, 3] {
            let p = permutation_operator(d).unwrap();
            let p2 = p.matmul(&p).unwrap();
            assert_eq!(p2.matrix(), &CMatrix::identity(d * d, d * d));
        }
        assert!(permutation_operator(1).is_err());
    }

    #[test]
    fn partial_transpose_basics() {
        let space = TensorSpace::new(vec![2, 3]).unwrap();
        let id = TensorOperator::identity(space.clone());
        assert_eq!(partial_transpose(&id, 0).unwrap(), id);
        assert!(matches!(
            partial_transpose(&id, 2),
            Err(Error::BadFactor { index: 2, count: 2 })
        ));
    }

    #[test]
    fn embed_and_trace() {
        let space = TensorSpace::new(vec![2, 2, 3]).unwrap();
        let e = embed(&CMatrix::identity(2, 2), 1, &space).unwrap();
        assert_eq!(e.matrix(), &CMatrix::identity(12, 12));
        assert!(matches!(
            embed(&CMatrix::identity(3, 3), 0, &space),
            Err(Error::DimensionMismatch { got: 3, expected: 2 })
        ));

        // σz at 0 and 1 equals σz⊗σz⊗I
        let z0 = embed(&sz(), 0, &space).unwrap();
        let z1 = embed(&sz(), 1, &space).unwrap();
        let prod = z0.matmul(&z1).unwrap();
        let direct = sz().kronecker(&sz()).kronecker(&CMatrix::identity(3, 3));
        assert_eq!(prod.matrix(), &direct);

        let a = random_matrix(3, &[(0.3, 0.1), (-1.2, 0.5), (0.7, -0.4), (2.0, 0.0)]);
        let full = kron(
            &TensorOperator::local(sz()).unwrap(),
            &TensorOperator::local(a.clone()).unwrap(),
        );
        let tr = partial_trace(&full, 0).unwrap();
        assert_eq!(tr.matrix(), &(a * c(0.0)));
    }

    #[test]
    fn space_mismatch_is_rejected() {
        let a = TensorOperator::identity(TensorSpace::new(vec![2, 3]).unwrap());
        let b = TensorOperator::identity(TensorSpace::new(vec![3, 2]).unwrap());
        assert!(matches!(a.matmul(&b), Err(Error::SpaceMismatch { .. })));
    }

    #[test]
    fn non_finite_rejected() {
        let mut m = CMatrix::identity(2, 2);
        m[(0, 1)] = C64::new(f64::NAN, 0.0);
        assert_eq!(TensorOperator::local(m), Err(Error::NonFinite));
    }

    fn cmat(n: usize) -> impl Strategy<Value = CMatrix> {
        prop::collection::vec((-2.0f64..2.0, -2.0f64..2.0), n * n)
            .prop_map(move |v| CMatrix::from_fn(n, n, |i, j| C64::new(v[i * n + j].0, v[i * n + j].1)))
    }

    proptest! {
        #[test]
        fn kron_mixed_product(a in cmat(2), b in cmat(2), cc in cmat(2), d in cmat(2)) {
            let lhs = a.kronecker(&b) * cc.kronecker(&d);
            let rhs = (&a * &cc).kronecker(&(&b * &d));
            prop_assert!(max_diff(&lhs, &rhs) < 1e-12);
        }

        #[test]
        fn kron_associative(a in cmat(2), b in cmat(3), cc in cmat(2)) {
            let (a, b, cc) = (
                TensorOperator::local(a).unwrap(),
                TensorOperator::local(b).unwrap(),
                TensorOperator::local(cc).unwrap(),
            );
            let l = kron(&kron(&a, &b), &cc);
            let r = kron(&a, &kron(&b, &cc));
            prop_assert_eq!(l.space(), r.space());
            prop_assert!(max_diff(l.matrix(), r.matrix()) < 1e-12);
        }

        #[test]
        fn permutation_swaps_factors(a in cmat(3), b in cmat(3)) {
            let p = permutation_operator(3).unwrap();
            let ab = a.kronecker(&b);
            let ba = b.kronecker(&a);
            let swapped = p.matrix() * ab * p.matrix();
            prop_assert!(max_diff(&swapped, &ba) < 1e-12);
        }

        #[test]
        fn partial_transpose_of_product(a in cmat(2), b in cmat(3)) {
            let m = kron(&TensorOperator::local(a.clone()).unwrap(), &TensorOperator::local(b.clone()).unwrap());
            let t0 = partial_transpose(&m, 0).unwrap();
            prop_assert!(max_diff(t0.matrix(), &a.transpose().kronecker(&b)) < 1e-14);
            let t1 = partial_transpose(&m, 1).unwrap();
            prop_assert!(max_diff(t1.matrix(), &a.kronecker(&b.transpose())) < 1e-14);
        }

        #[test]
        fn partial_transpose_involution_and_norm(m in cmat(6), f in 0usize..2) {
            let op = TensorOperator::new(TensorSpace::new(vec![2, 3]).unwrap(), m).unwrap();
            let t = partial_transpose(&op, f).unwrap();
            assert_abs_diff_eq!(t.frobenius(), op.frobenius(), epsilon = 1e-12);
            let tt = partial_transpose(&t, f).unwrap();
            prop_assert_eq!(tt, op);
        }

        #[test]
        fn embedded_ops_commute(a in cmat(2), b in cmat(3), i in 0usize..3, j in 0usize..3) {
            prop_assume!(i != j);
            let space = TensorSpace::new(vec![2, 3, 2]).unwrap();
            let pick = |site: usize| if site == 1 { b.clone() } else { a.clone() };
            let ea = embed(&pick(i), i, &space).unwrap();
            let eb = embed(&pick(j), j, &space).unwrap();
            let comm = ea.commutator(&eb).unwrap();
            prop_assert!(comm.frobenius() < 1e-12);
        }

        #[test]
        fn embed_sites_matches_kron_order(a in cmat(2), b in cmat(2)) {
            let space = TensorSpace::new(vec![2, 2, 3]).unwrap();
            let ab = kron(&TensorOperator::local(a.clone()).unwrap(), &TensorOperator::local(b.clone()).unwrap());
            let on01 = embed_sites(&ab, &[0, 1], &space).unwrap();
            let direct = a.kronecker(&b).kronecker(&CMatrix::identity(3, 3));
            prop_assert!(max_diff(on01.matrix(), &direct) < 1e-14);
            let on10 = embed_sites(&ab, &[1, 0], &space).unwrap();
            let swapped = b.kronecker(&a).kronecker(&CMatrix::identity(3, 3));
            prop_assert!(max_diff(on10.matrix(), &swapped) < 1e-14);
        }
    }
}
