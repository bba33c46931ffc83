use crate::special::gamma::{bernoulli_number, bernoulli_poly, ln_gamma_ratio_shifted, log_gamma};
use crate::special::Truncated;
use crate::{Error, Result, C64};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductTruncation {
    pub max_terms: usize,
    /// Absolute bound on the log of the neglected tail.
    pub tail_tol: f64,
}

impl ProductTruncation {
    pub fn new(max_terms: usize, tail_tol: f64) -> Result<Self> {
        let t = Self { max_terms, tail_tol };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        if self.max_terms < 1 {
            return Err(Error::InvalidParameter("max_terms must be >= 1".into()));
        }
        if !(self.tail_tol > 0.0) {
            return Err(Error::InvalidParameter("tail_tol must be > 0".into()));
        }
        Ok(())
    }
}

impl Default for ProductTruncation {
    fn default() -> Self {
        Self {
            max_terms: 1_000_000,
            tail_tol: 1e-14,
        }
    }
}

/// The `k`-th factor `∏Γ(num_i + step·k) / ∏Γ(den_i + step·k)` of an
/// infinite product over `k = 0, 1, ..`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaProductTerm {
    pub num: Vec<C64>,
    pub den: Vec<C64>,
    pub step: f64,
}

/// Orders of the asymptotic tail expansion kept / used for the error estimate.
const TAIL_ORDER: usize = 12;

impl GammaProductTerm {
    pub fn new(num: Vec<C64>, den: Vec<C64>, step: f64) -> Result<Self> {
        if !(step > 0.0) || !step.is_finite() {
            return Err(Error::InvalidParameter(format!("product step must be > 0, got {step}")));
        }
        Ok(Self { num, den, step })
    }

    pub fn ln_factor(&self, k: usize) -> Result<C64> {
        let shift = self.step * k as f64;
        if let Some(v) = ln_gamma_ratio_shifted(&self.num, &self.den, shift) {
            return Ok(v);
        }
        let mut acc = C64::new(0.0, 0.0);
        for (args, sign) in [(&self.num, 1.0), (&self.den, -1.0)] {
            for &a in args.iter() {
                acc += log_gamma(a + shift)? * sign;
            }
        }
        Ok(acc)
    }

    /// Coefficient of `(step·k)^{-n}` in the large-`k` expansion of `ln factor_k`.
    fn asymptotic_coeff(&self, n: usize) -> C64 {
        let s: C64 = self.num.iter().map(|&a| bernoulli_poly(n + 1, a)).sum::<C64>()
            - self.den.iter().map(|&a| bernoulli_poly(n + 1, a)).sum::<C64>();
        let sign = if n % 2 == 1 { 1.0 } else { -1.0 };
        s * (sign / (n * (n + 1)) as f64)
    }

    fn check_convergent(&self) -> Result<()> {
        if self.num.len() != self.den.len() {
            return Err(Error::Divergent(format!(
                "{} numerator vs {} denominator Gamma functions",
                self.num.len(),
                self.den.len()
            )));
        }
        let scale = 1.0 + self.num.iter().chain(&self.den).map(|a| a.norm()).fold(0.0, f64::max);
        let drift: C64 = self.num.iter().sum::<C64>() - self.den.iter().sum::<C64>();
        if drift.norm() > 1e-12 * scale {
            return Err(Error::Divergent(format!(
                "argument sums differ by {drift}; factors grow like k^(Σnum−Σden)"
            )));
        }
        let c1 = self.asymptotic_coeff(1);
        if c1.norm() > 1e-10 * scale * scale {
            return Err(Error::Divergent(format!("log factors decay like {c1}/k")));
        }
        Ok(())
    }
}

/// Hurwitz zeta `Σ_{k≥a} k^{-s}` for integers `s ≥ 2`, `a ≥ 1`.
pub fn hurwitz_zeta(s: usize, a: usize) -> f64 {
    assert!(s >= 2 && a >= 1);
    let s_f = s as f64;
    // Euler–Maclaurin from a shifted start so the correction series is tiny
    let start = a.max(16);
    let direct: f64 = (a..start).map(|k| (k as f64).powf(-s_f)).sum();
    let b = start as f64;
    let mut acc = b.powf(1.0 - s_f) / (s_f - 1.0) + 0.5 * b.powf(-s_f);
    let mut rising = s_f; // s (s+1) .. (s+2j−2)
    let mut fact = 2.0; // (2j)!
    for j in 1..=8 {
        acc += bernoulli_number(2 * j) / fact * rising * b.powf(-s_f - 2.0 * j as f64 + 1.0);
        rising *= (s_f + 2.0 * j as f64 - 1.0) * (s_f + 2.0 * j as f64);
        fact *= (2 * j + 1) as f64 * (2 * j + 2) as f64;
    }
    direct + acc
}

/// Evaluates `∏_{k≥0} factor_k` for a product whose log-factors decay like
/// `1/k²`.
///
/// Factors `k < K` are summed directly in log space; the remainder is the
/// Stirling expansion of each factor summed in closed form through Hurwitz
/// zeta values. `K` is chosen so that `step·K ≥ 20(max|arg| + 1)`. The
/// returned `error` estimates the first omitted order of that expansion.
pub fn infinite_gamma_product(term: &GammaProductTerm, trunc: &ProductTruncation) -> Result<Truncated> {
    trunc.validate()?;
    if term.num.is_empty() && term.den.is_empty() {
        return Ok(Truncated {
            value: C64::new(1.0, 0.0),
            error: 0.0,
            terms: 0,
        });
    }
    term.check_convergent()?;

    let max_arg = term.num.iter().chain(&term.den).map(|a| a.norm()).fold(0.0, f64::max);
    let k_split = ((20.0 * (max_arg + 1.0) / term.step).ceil() as usize).max(16);
    if k_split > trunc.max_terms {
        return Err(Error::NotConverged {
            tol: trunc.tail_tol,
            max_terms: trunc.max_terms,
            tail: f64::NAN,
        });
    }

    let mut ln = C64::new(0.0, 0.0);
    for k in 0..k_split {
        ln += term.ln_factor(k)?;
    }

    let mut tail = C64::new(0.0, 0.0);
    for n in 2..=TAIL_ORDER {
        tail += term.asymptotic_coeff(n) * term.step.powi(-(n as i32)) * hurwitz_zeta(n, k_split);
    }
    let next = TAIL_ORDER + 1;
    let omitted = (term.asymptotic_coeff(next) * term.step.powi(-(next as i32))).norm() * hurwitz_zeta(next, k_split);
    if omitted > trunc.tail_tol {
        return Err(Error::NotConverged {
            tol: trunc.tail_tol,
            max_terms: trunc.max_terms,
            tail: omitted,
        });
    }
    let error = omitted + f64::EPSILON * k_split as f64;
    ln += tail;
    Ok(Truncated {
        value: ln.exp(),
        error,
        terms: k_split,
    })
}
