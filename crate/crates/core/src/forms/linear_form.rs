use std::fmt;
use std::ops::{Add, Sub};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::rational::{format_rational, is_zero, parse_rational};
use crate::error::{Error, Result};
use crate::spec::{ProblemSpec, Slot};

/// Index of a variable of a linear form: `x_0` or `x_{j,k,sigma}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarIndex {
    X0,
    Value(Slot),
}

/// All variable indices of a spec in dense order.
pub fn var_indices(spec: &ProblemSpec) -> Vec<VarIndex> {
    std::iter::once(VarIndex::X0)
        .chain(spec.slots().iter().copied().map(VarIndex::Value))
        .collect()
}

/// A linear form with exact rational coefficients, dense over `1 + dS`
/// positions (position 0 is `x_0`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    coeffs: Vec<Rational>,
}

impl LinearForm {
    pub fn zero(dim: usize) -> Self {
        LinearForm {
            coeffs: vec![Rational::new(); dim],
        }
    }

    /// The form `x_pos`.
    pub fn unit(dim: usize, pos: usize) -> Self {
        let mut f = Self::zero(dim);
        f.coeffs[pos] = Rational::from(1);
        f
    }

    pub fn from_coeffs(coeffs: Vec<Rational>) -> Self {
        LinearForm { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, pos: usize) -> &Rational {
        &self.coeffs[pos]
    }

    pub fn x0(&self) -> &Rational {
        &self.coeffs[0]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(is_zero)
    }

    /// `self += k * other`.
    pub fn add_scaled(&mut self, other: &LinearForm, k: &Rational) {
        debug_assert_eq!(self.dim(), other.dim());
        for (a, b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += Rational::from(b * k);
        }
    }

    pub fn scaled(&self, k: &Rational) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| Rational::from(c * k)).collect(),
        }
    }

    /// Maximum absolute value of the coefficients.
    pub fn height(&self) -> Rational {
        crate::arith::rational::max_abs(&self.coeffs)
    }

    pub fn evaluate_exact(&self, point: &[Rational]) -> Rational {
        debug_assert_eq!(self.dim(), point.len());
        let mut acc = Rational::new();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += Rational::from(c * x);
        }
        acc
    }

    /// Multiplies by `scale`; `None` unless every coefficient becomes integral.
    pub fn integerize(&self, scale: &Integer) -> Option<IntegerLinearForm> {
        let mut out = Vec::with_capacity(self.dim());
        for c in &self.coeffs {
            let v = Rational::from(c * scale);
            if *v.denom() != 1 {
                return None;
            }
            out.push(v.into_numer_denom().0);
        }
        Some(IntegerLinearForm { coeffs: out })
    }

    pub fn to_json(&self, spec: &ProblemSpec) -> FormJson {
        FormJson::build(spec, self.coeffs.iter().map(format_rational))
    }

    pub fn from_json(spec: &ProblemSpec, json: &FormJson) -> Result<LinearForm> {
        let mut coeffs = vec![Rational::new(); spec.dim()];
        coeffs[0] = parse_rational(&json.x0)?;
        for t in &json.terms {
            let slot = Slot {
                j: t.j,
                k: t.k,
                sigma: t.sigma,
            };
            let pos = spec.position(slot).ok_or_else(|| {
                Error::Parse(format!("no variable x_{{{},{},{}}}", t.j, t.k, t.sigma))
            })?;
            coeffs[pos] = parse_rational(&t.c)?;
        }
        Ok(LinearForm { coeffs })
    }
}

/// `[c_0, c_1, ...]` in dense order.
impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coeffs.iter().map(format_rational).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

impl<'a> Add<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn add(self, rhs: &'a LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from(1));
        out
    }
}

impl<'a> Sub<&'a LinearForm> for &'a LinearForm {
    type Output = LinearForm;
    fn sub(self, rhs: &'a LinearForm) -> LinearForm {
        let mut out = self.clone();
        out.add_scaled(rhs, &Rational::from(-1));
        out
    }
}

/// A linear form with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntegerLinearForm {
    coeffs: Vec<Integer>,
}

impl IntegerLinearForm {
    pub fn coeffs(&self) -> &[Integer] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn x0(&self) -> &Integer {
        &self.coeffs[0]
    }

    pub fn height(&self) -> Integer {
        self.coeffs
            .iter()
            .max_by(|a, b| a.cmp_abs(b))
            .map(|c| c.clone().abs())
            .unwrap_or_default()
    }

    pub fn evaluate_integer(&self, point: &[Integer]) -> Integer {
        debug_assert_eq!(self.dim(), point.len());
        let mut acc = Integer::new();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += Integer::from(c * x);
        }
        acc
    }

    pub fn evaluate_exact(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::new();
        for (c, x) in self.coeffs.iter().zip(point) {
            acc += Rational::from(x * c);
        }
        acc
    }

    pub fn to_rational(&self) -> LinearForm {
        LinearForm::from_coeffs(self.coeffs.iter().cloned().map(Rational::from).collect())
    }

    pub fn to_json(&self, spec: &ProblemSpec) -> FormJson {
        FormJson::build(spec, self.coeffs.iter().map(|c| c.to_string()))
    }
}

/// Wire format of a linear form: `{"x0": "rat", "terms": [{"j", "k", "sigma", "c"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub x0: String,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub j: usize,
    pub k: u32,
    pub sigma: u32,
    pub c: String,
}

impl FormJson {
    fn build(spec: &ProblemSpec, mut coeffs: impl Iterator<Item = String>) -> FormJson {
        let x0 = coeffs.next().expect("x0 coefficient");
        let terms = spec
            .slots()
            .iter()
            .zip(coeffs)
            .map(|(s, c)| TermJson {
                j: s.j,
                k: s.k,
                sigma: s.sigma,
                c,
            })
            .collect();
        FormJson { x0, terms }
    }
}
