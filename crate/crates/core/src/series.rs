//! Enclosures of `f^(sigma)(alpha_j q^k)`, of integer combinations of these
//! values, and of linear forms at points whose `x_0` entry is irrational.
//! Also the coefficients of the functional equation satisfied by
//! `F(z) = sum_n v_n(omega) z^n`.

use std::cmp::Ordering;

use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::rational::{falling_factorial, pow_i64};
use crate::arith::{Enclosure, PolynomialQ};
use crate::forms::{FormsEngine, IntegerLinearForm, LinearForm};
use crate::spec::{ProblemSpec, Slot};

/// Least `N >= 0` such that `|P(q^k)| >= |p_d| |q|^{dk} / 2` for every `k > N`.
pub fn half_dominance_index(poly: &PolynomialQ, q_abs: &Rational) -> u32 {
    let d = poly.degree();
    let half_lead = Rational::from(poly.leading().abs_ref()) / 2u32;
    let q_inv = Rational::from(q_abs.recip_ref());
    let mut k = 1u32;
    let mut q_inv_k = q_inv.clone();
    loop {
        // sum_{nu<d} |p_nu| |q|^{(nu-d)k}, decreasing in k.
        let mut lower = Rational::new();
        let mut pow = q_inv_k.clone();
        for c in poly.coeffs()[..d].iter().rev() {
            lower += Rational::from(c.abs_ref()) * &pow;
            pow *= &q_inv_k;
        }
        if lower <= half_lead {
            return k - 1;
        }
        k += 1;
        q_inv_k *= &q_inv;
    }
}

/// Enclosure of `f^(sigma)(z)` with width at most `2^-bits`.
///
/// Terms are summed exactly; summation stops at the first `n >= max(N, sigma)`
/// where every later term ratio is certified `<= 1/2` and `|t_n| <= 2^-(bits+2)`,
/// so the tail is bounded by `|t_n|`.
pub fn f_derivative_at(spec: &ProblemSpec, z: &Rational, sigma: u32, bits: u32) -> Enclosure {
    let q_abs = Rational::from(spec.q().abs_ref());
    let n0 = half_dominance_index(spec.poly(), &q_abs);
    let d = spec.d() as u32;
    let lead = Rational::from(spec.poly().leading().abs_ref());
    // Ratio majorant after index n is <= 1/2 iff 4 (sigma+1) |z| <= |p_d| |q|^{d(n+1)}.
    let ratio_lhs = Rational::from(z.abs_ref()) * (4 * (u64::from(sigma) + 1));
    let eps = Rational::from((1, Integer::from(1) << (bits + 2)));

    let mut sum = Rational::new();
    let mut inv_prod = Rational::from(1);
    let mut qd_n1 = pow_i64(&q_abs, i64::from(d)) * &lead;
    let q_d = pow_i64(&q_abs, i64::from(d));
    let mut n: u32 = 0;
    loop {
        if n > 0 {
            inv_prod /= spec.p_at_q_power(i64::from(n));
            qd_n1 *= &q_d;
        }
        let term = if n < sigma {
            Rational::new()
        } else {
            let zp = if n == sigma {
                Rational::from(1)
            } else {
                pow_i64(z, i64::from(n - sigma))
            };
            zp * &inv_prod * falling_factorial(i64::from(n), sigma)
        };
        sum += &term;
        if n >= n0.max(sigma) && ratio_lhs <= qd_n1 {
            let t_abs = Rational::from(term.abs_ref());
            if t_abs <= eps {
                let lo = Rational::from(&sum - &t_abs);
                let hi = Rational::from(&sum + &t_abs);
                return Enclosure::new(lo, hi).round_outward(bits + 2);
            }
        }
        n += 1;
    }
}

/// Enclosures of every `f^(sigma)(alpha_j q^k)`, in slot order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueTable {
    pub precision_bits: u32,
    pub entries: Vec<ValueEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValueEntry {
    pub j: usize,
    pub k: u32,
    pub sigma: u32,
    pub value: Enclosure,
}

impl ValueTable {
    pub fn compute(spec: &ProblemSpec, bits: u32) -> ValueTable {
        let entries = spec
            .slots()
            .par_iter()
            .map(|slot| ValueEntry {
                j: slot.j,
                k: slot.k,
                sigma: slot.sigma,
                value: f_derivative_at(spec, &spec.point_value(*slot), slot.sigma, bits),
            })
            .collect();
        ValueTable {
            precision_bits: bits,
            entries,
        }
    }

    pub fn value(&self, slot: Slot) -> Option<&Enclosure> {
        self.entries
            .iter()
            .find(|e| e.j == slot.j && e.k == slot.k && e.sigma == slot.sigma)
            .map(|e| &e.value)
    }

    pub fn values(&self) -> impl Iterator<Item = &Enclosure> {
        self.entries.iter().map(|e| &e.value)
    }

    /// Enclosure of `sum_i c_i f_i` for rational weights over the value slots.
    pub fn combine(&self, weights: &[Rational]) -> Enclosure {
        assert_eq!(weights.len(), self.entries.len());
        let mut lo = Rational::new();
        let mut hi = Rational::new();
        for (w, e) in weights.iter().zip(&self.entries) {
            match w.cmp0() {
                Ordering::Equal => {}
                Ordering::Greater => {
                    lo += Rational::from(w * e.value.lo());
                    hi += Rational::from(w * e.value.hi());
                }
                Ordering::Less => {
                    lo += Rational::from(w * e.value.hi());
                    hi += Rational::from(w * e.value.lo());
                }
            }
        }
        Enclosure::new(lo, hi)
    }

    /// Enclosure of `A_0 + sum A_{j,k,sigma} f^(sigma)(alpha_j q^k)`.
    pub fn lambda(&self, a: &[Integer]) -> Enclosure {
        assert_eq!(a.len(), self.entries.len() + 1);
        let weights: Vec<Rational> = a[1..].iter().map(Rational::from).collect();
        self.combine(&weights).shift(&Rational::from(&a[0]))
    }
}

/// A point `(omega_0, omega_{j,k,sigma})` with exact value coordinates and
/// `omega_0` known as an enclosure.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaVector {
    pub omega0: Enclosure,
    #[serde(with = "crate::arith::rational::serde_str::vec")]
    pub rest: Vec<Rational>,
}

impl OmegaVector {
    /// `omega_0 = -sum omega_{j,k,sigma} f^(sigma)(alpha_j q^k)`.
    pub fn from_values(rest: Vec<Rational>, table: &ValueTable) -> OmegaVector {
        let omega0 = -table.combine(&rest);
        OmegaVector { omega0, rest }
    }

    pub fn exact(omega0: Rational, rest: Vec<Rational>) -> OmegaVector {
        OmegaVector {
            omega0: Enclosure::point(omega0),
            rest,
        }
    }

    pub fn is_zero(&self) -> bool {
        self.omega0.is_point()
            && self.omega0.lo().cmp0() == Ordering::Equal
            && self.rest.iter().all(|r| r.cmp0() == Ordering::Equal)
    }

    /// The exact coordinates when `omega_0` is a point.
    pub fn exact_point(&self) -> Option<Vec<Rational>> {
        self.omega0.is_point().then(|| {
            std::iter::once(self.omega0.lo().clone())
                .chain(self.rest.iter().cloned())
                .collect()
        })
    }
}

/// Enclosure of `form(omega)`; a point when the `x_0` coefficient is 0 or
/// `omega_0` is exact.
pub fn evaluate_form(form: &LinearForm, omega: &OmegaVector) -> Enclosure {
    assert_eq!(form.dim(), omega.rest.len() + 1);
    let mut exact = Rational::new();
    for (c, x) in form.coeffs()[1..].iter().zip(&omega.rest) {
        exact += Rational::from(c * x);
    }
    omega.omega0.scale(form.x0()).shift(&exact)
}

pub fn evaluate_integer_form(form: &IntegerLinearForm, omega: &OmegaVector) -> Enclosure {
    assert_eq!(form.dim(), omega.rest.len() + 1);
    let mut exact = Rational::new();
    for (c, x) in form.coeffs()[1..].iter().zip(&omega.rest) {
        exact += Rational::from(x * c);
    }
    omega.omega0.scale_int(form.x0()).shift(&exact)
}

/// Coefficients of `z^0..z^N` in
/// `(1 - p_0 z) F(z) - sum_{nu=1}^{d} p_nu q^nu z F(q^nu z) - R(z)` where
/// `F(z) = sum v_n(omega) z^n` and `R(z) = omega_0 + sum u_n(omega) z^n`.
pub fn functional_equation_residual(
    engine: &FormsEngine,
    omega0: &Rational,
    omega_rest: &[Rational],
    n_max: u32,
) -> Vec<Rational> {
    let spec = engine.spec();
    let point: Vec<Rational> = std::iter::once(omega0.clone())
        .chain(omega_rest.iter().cloned())
        .collect();
    let big_f: Vec<Rational> = (0..=n_max)
        .map(|n| engine.v_form(n).evaluate_exact(&point))
        .collect();
    let p = spec.poly().coeffs();
    let q = spec.q();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max as usize {
        let mut c = big_f[n].clone();
        if n >= 1 {
            c -= Rational::from(&p[0] * &big_f[n - 1]);
            for (nu, p_nu) in p.iter().enumerate().skip(1) {
                // z F(q^nu z) contributes q^{nu(n-1)} F_{n-1} at z^n.
                let scale = pow_i64(q, (nu * n) as i64);
                c -= Rational::from(p_nu * &scale) * &big_f[n - 1];
            }
        } else {
            c -= omega0;
        }
        c -= engine.u_form(n as i64).evaluate_exact(&point);
        out.push(c);
    }
    out
}
