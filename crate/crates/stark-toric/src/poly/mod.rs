//! Exact polynomial algebra over arbitrary-precision rationals.
//!
//! Everything in this module is exact: no floating point enters any
//! arithmetic path. [`BivariatePoly`] is a sparse polynomial in two
//! variables (the configuration coordinates `q1, q2` or the regularized
//! coordinates `z1, z2`, depending on context); [`UnivariatePoly`] is a
//! dense polynomial in one variable. The two operations that carry the
//! mathematical weight are [`lc_pullback`], which expands
//! `(z1^2 + z2^2) * G(z1^2 - z2^2, 2 z1 z2)`, and [`split_separable`],
//! which decides whether such an expansion splits as `G1(z1) + G2(z2)`.

mod bivariate;
mod univariate;

pub use bivariate::{lc_pullback, split_separable, BivariatePoly, NotSeparable};
pub use univariate::{SignClass, UnivariatePoly};
