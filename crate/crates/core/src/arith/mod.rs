//! Exact rationals, rigorous enclosures and the elementary functions built
//! on them.

pub mod elementary;
pub mod enclosure;
pub mod poly;
pub mod rational;

pub use enclosure::Enclosure;
pub use poly::PolynomialQ;
pub use rational::{format_rational, parse_integer, parse_rational, rat};
pub use rug::{Integer, Rational};
