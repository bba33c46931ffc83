//! Operator identities and transmission amplitudes for type-I integrable
//! defects in the XXX and XXZ Heisenberg chains.
//!
//! The crate is organised bottom-up:
//!
//! - [`tensor`]: dense complex operators on explicit tensor-product spaces.
//! - [`special`]: complex log-gamma, q-gamma, convergent Gamma products and
//!   the quadrature / lattice-sum engine behind every amplitude.
//! - [`oscillator`]: truncated harmonic and q-oscillator representations,
//!   plus finite-dimensional `U_q(sl_2)` spin representations.
//! - [`lax`]: bulk R-matrices, defect Lax operators `L` and `L̂`, the
//!   crossing transform and the bulk S-matrices.
//! - [`monodromy`]: defect-bearing monodromy and transfer matrices for small
//!   chains, charge sectors and Bethe equation residuals.
//! - [`amplitudes`]: Fourier kernels, state densities, soliton, breather and
//!   type-II transmission amplitudes.
//! - [`tmatrix`]: operator-valued transmission matrices and their quadratic
//!   algebra, unitarity and crossing residuals.
//!
//! Basis convention: row-major, leftmost tensor factor slowest. For spin
//! factors index 0 is `σᶻ = +1` and index 1 is `σᶻ = −1`; oscillator index
//! `n` is the occupation number.

pub mod amplitudes;
pub mod error;
pub mod lax;
pub mod monodromy;
pub mod oscillator;
pub mod report;
pub mod special;
pub mod tensor;
pub mod tmatrix;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use report::ResidualReport;

/// Shorthand used throughout the crate.
pub type C64 = Complex64;

/// Imaginary unit.
pub const I: C64 = C64::new(0.0, 1.0);

/// Real number as a complex scalar.
#[inline]
pub fn c(re: f64) -> C64 {
    C64::new(re, 0.0)
}
