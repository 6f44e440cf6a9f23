use std::cmp::Ordering;
use std::fmt;

use rug::Rational;

use super::rational::format_rational;
use crate::error::{Error, Result};

/// A polynomial over ℚ of degree at least 1, coefficients in ascending order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialQ {
    coeffs: Vec<Rational>,
}

impl PolynomialQ {
    /// Trailing zero coefficients are dropped before the degree check.
    pub fn new(mut coeffs: Vec<Rational>) -> Result<Self> {
        while coeffs.last().is_some_and(|c| c.cmp0() == Ordering::Equal) {
            coeffs.pop();
        }
        if coeffs.len() < 2 {
            return Err(Error::MalformedSpec(
                "polynomial P must have degree at least 1".into(),
            ));
        }
        Ok(PolynomialQ { coeffs })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    /// Coefficient of `z^nu` (zero past the degree).
    pub fn coeff(&self, nu: usize) -> Rational {
        self.coeffs.get(nu).cloned().unwrap_or_default()
    }

    pub fn leading(&self) -> &Rational {
        self.coeffs.last().expect("degree >= 1")
    }

    pub fn constant_term(&self) -> &Rational {
        &self.coeffs[0]
    }

    /// True when `P(z) = p_d z^d`.
    pub fn is_monomial(&self) -> bool {
        self.coeffs[..self.degree()]
            .iter()
            .all(|c| c.cmp0() == Ordering::Equal)
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &Rational) -> Rational {
        let mut acc = Rational::new();
        for c in self.coeffs.iter().rev() {
            acc *= z;
            acc += c;
        }
        acc
    }
}

impl fmt::Display for PolynomialQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}
