//! Exact auxiliary linear forms for values of the q-hypergeometric series
//! `f(z) = sum_n z^n / prod_{k<=n} P(q^k)` and certified lower bounds for
//! integer linear combinations of those values.
//!
//! Layout:
//! - [`arith`]: GMP rationals, rigorous enclosures, `ln`/`sqrt`.
//! - [`spec`], [`params`]: validated input and the scalar constants.
//! - [`forms`]: the linear forms `u_n`, `v_n`, `v_{l,n}`, `w_{l,n}`.
//! - [`series`]: enclosures of `f^(sigma)(alpha_j q^k)` and of combinations.
//! - [`session`]: a spec with its engine and value tables cached by precision.
//! - [`verify`]: identity suite, growth/smallness reports, non-vanishing scan.
//! - [`probe`]: lower-bound certificates and exponent scans.

pub mod arith;
pub mod error;
pub mod forms;
pub mod params;
pub mod probe;
pub mod series;
pub mod session;
pub mod spec;
pub mod verify;

pub use error::{Error, Result};
