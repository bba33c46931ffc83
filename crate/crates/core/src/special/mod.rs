//! Special functions and the integration / summation engine used by the
//! transmission amplitudes.

mod fourier;
mod gamma;
mod product;
mod qgamma;
mod quadrature;

pub use fourier::{
    amplitude_integral, amplitude_integral_anchored, amplitude_sum, default_k_max, invert_continuous,
    invert_discrete, DiscreteKernel, Kernel, Singularity,
};
pub use gamma::{bernoulli_number, bernoulli_poly, gamma, gamma_ratio, ln_gamma_ratio, log_gamma};
pub use product::{infinite_gamma_product, hurwitz_zeta, GammaProductTerm, ProductTruncation};
pub use qgamma::{ln_q_gamma, q_gamma};
pub use quadrature::{gauss_legendre, integrate_half_line, QuadratureSpec, Scheme};

use crate::C64;

/// A value obtained by truncating an infinite process, with a bound or
/// estimate of what the truncation left out.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Truncated {
    pub value: C64,
    pub error: f64,
    pub terms: usize,
}
