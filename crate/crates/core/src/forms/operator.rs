//! Products of difference operators `D_a = I - a B` expanded as
//! polynomials in the backward shift `B`.

use rug::Rational;

use super::linear_form::LinearForm;

/// `c_0 + c_1 B + ... + c_r B^r`, acting by `(Op ξ)(n) = Σ c_t ξ(n - t)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OperatorPoly {
    coeffs: Vec<Rational>,
}

impl OperatorPoly {
    pub fn identity() -> Self {
        OperatorPoly {
            coeffs: vec![Rational::from(1)],
        }
    }

    /// `∏ (1 - a B)^mult` over the given factors.
    pub fn from_factors<'a>(factors: impl IntoIterator<Item = (&'a Rational, u32)>) -> Self {
        let mut op = Self::identity();
        for (a, mult) in factors {
            for _ in 0..mult {
                op.mul_difference(a);
            }
        }
        op
    }

    /// Multiplies in place by `(1 - a B)`.
    pub fn mul_difference(&mut self, a: &Rational) {
        self.coeffs.push(Rational::new());
        for t in (1..self.coeffs.len()).rev() {
            let prev = Rational::from(&self.coeffs[t - 1] * a);
            self.coeffs[t] -= prev;
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn leading(&self) -> &Rational {
        self.coeffs.last().expect("nonempty")
    }

    /// Applies the operator to a scalar sequence at index `n`.
    pub fn apply_scalar(&self, n: i64, seq: impl Fn(i64) -> Rational) -> Rational {
        let mut acc = Rational::new();
        for (t, c) in self.coeffs.iter().enumerate() {
            acc += c * seq(n - t as i64);
        }
        acc
    }

    /// Applies the operator to a window of forms, `window[t] = ξ(n - t)`.
    pub fn apply_forms<F: AsRef<LinearForm>>(&self, window: &[F]) -> LinearForm {
        assert_eq!(
            window.len(),
            self.coeffs.len(),
            "window must cover the degree"
        );
        let mut acc = LinearForm::zero(window[0].as_ref().dim());
        for (c, f) in self.coeffs.iter().zip(window) {
            acc.add_scaled(f.as_ref(), c);
        }
        acc
    }
}

impl AsRef<LinearForm> for LinearForm {
    fn as_ref(&self) -> &LinearForm {
        self
    }
}

/// Applies `D_{a_1} D_{a_2} ...` one factor at a time to a window in
/// chronological order (`window[i] = ξ(n - r + i)`), shrinking it by one
/// per factor. Independent of the expanded-polynomial path.
pub fn apply_nested<F: AsRef<LinearForm>>(factors: &[Rational], window: &[F]) -> LinearForm {
    assert_eq!(window.len(), factors.len() + 1);
    let mut cur: Vec<LinearForm> = window.iter().map(|f| f.as_ref().clone()).collect();
    for a in factors {
        let neg = Rational::from(-a);
        cur = cur
            .windows(2)
            .map(|pair| {
                let mut next = pair[1].clone();
                next.add_scaled(&pair[0], &neg);
                next
            })
            .collect();
    }
    cur.pop().expect("one form remains")
}
