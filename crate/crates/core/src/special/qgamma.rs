use crate::special::{ProductTruncation, Truncated};
use crate::{Error, Result, C64};

/// `e^w − 1` without cancellation for small `w`.
pub(crate) fn expm1(w: C64) -> C64 {
    let (a, b) = (w.re, w.im);
    let half = (0.5 * b).sin();
    C64::new(a.exp_m1() * b.cos() - 2.0 * half * half, a.exp() * b.sin())
}

/// `ln Γ_q(x)` from `(1−q)^{1−x} ∏_{j≥0} (1−q^{1+j})/(1−q^{x+j})`, summed
/// until the geometric bound on the remaining log-terms is below `tail_tol`.
pub fn ln_q_gamma(x: C64, q: f64, trunc: &ProductTruncation) -> Result<Truncated> {
    trunc.validate()?;
    if !(q > 0.0 && q < 1.0) {
        return Err(Error::InvalidParameter(format!("q-Gamma needs 0 < q < 1, got {q}")));
    }
    let lq = q.ln();
    let mut acc = (C64::new(1.0, 0.0) - x) * (-lq.exp_m1()).ln();
    let tail_bound = |j: usize| -> f64 {
        let u1 = q.powf(1.0 + j as f64);
        let ux = q.powf(x.re + j as f64);
        let m = u1.max(ux);
        if m >= 0.5 {
            return f64::INFINITY;
        }
        (u1 + ux) / ((1.0 - q) * (1.0 - m))
    };
    for j in 0..trunc.max_terms {
        let jf = j as f64;
        let one_minus_qx = -expm1((x + jf) * lq);
        if one_minus_qx.norm() < 1e-14 {
            return Err(Error::QGammaPole { x, j });
        }
        acc += C64::new((-(lq * (1.0 + jf)).exp_m1()).ln(), 0.0) - one_minus_qx.ln();
        let bound = tail_bound(j + 1);
        if bound < trunc.tail_tol {
            return Ok(Truncated {
                value: acc,
                error: bound,
                terms: j + 1,
            });
        }
    }
    Err(Error::NotConverged {
        tol: trunc.tail_tol,
        max_terms: trunc.max_terms,
        tail: tail_bound(trunc.max_terms),
    })
}

pub fn q_gamma(x: C64, q: f64, trunc: &ProductTruncation) -> Result<C64> {
    ln_q_gamma(x, q, trunc).map(|t| t.value.exp())
}
