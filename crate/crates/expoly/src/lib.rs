//! Exact symbolic algebra for exponential polynomials on ℝ^d, the linear
//! operators acting on them (translation, difference powers, dilation), and
//! checkers for the functional equations whose solution sets they form —
//! plus float-grid and Monte Carlo harnesses for the probabilistic side.
//!
//! Layering, bottom up:
//! - [`scalar`]: rationals, Gaussian rationals, and the exponent group
//!   algebra that keeps translated exponentials exact.
//! - [`exppoly`]: canonical multivariate (exponential) polynomials.
//! - [`linalg`]: exact elimination over an abstract field.
//! - [`operators`]: `τ_y`, `Δ_y^m`, dilation, `q(τ_y)`, translate spans.
//! - [`bivar`]: two-block objects `F(x,y)`, separable rank, separated forms,
//!   and the reduction cascade.
//! - [`theorems`]: hypothesis checks and equation/conclusion verdicts.
//! - [`geometry`], [`numeric`], [`probability`]: the floating-point side.

pub mod bivar;
pub mod error;
pub mod exppoly;
pub mod geometry;
pub mod linalg;
pub mod numeric;
pub mod operators;
pub mod probability;
pub mod scalar;
pub mod theorems;

pub use error::{Error, Result};
pub use exppoly::{Classification, ExpPolynomial, Frequency, Monomial, Polynomial};
pub use operators::{RationalMatrix, UnivariatePoly};
pub use scalar::{ExpCoeff, ExpFrac, GaussianRational, Rat};
