//! Quadratic character sums with completely multiplicative coefficients.
//!
//! The crate evaluates `D_N(f, d) = sum_{n <= N} f(n) chi_d(n)` over families
//! of fundamental discriminants, builds resonator weights supported on
//! squarefree products of primes in a window, and assembles the
//! weighted-mean certificate
//!
//! ```text
//! max_d |D_N(f, d)| >= sqrt(S2 / S1),
//! S1 = sum_d |R_d|^2,   S2 = sum_d |D_N(f, d)|^2 |R_d|^2.
//! ```
//!
//! Modules, bottom up: [`arith`] (sieves, Kronecker symbol, discriminants),
//! [`coefficients`] (unimodular `f` and the square-product positivity class),
//! [`resonator`] (weights `r` and the `an = bm` correlation sum) and
//! [`engine`] (family sums, main terms, certificates).

pub mod arith;
pub mod coefficients;
pub mod engine;
mod error;
pub mod resonator;
pub mod sum;

pub use error::{Error, Result};
