//! Problem specification: `q = q1/q2`, the polynomial `P`, and the points
//! `alpha_j` with multiplicities `s_j`, validated exactly.

use std::cmp::Ordering;
use std::fmt;

use rug::{Integer, Rational};

use crate::arith::rational::{format_rational, is_zero, pow_i64};
use crate::arith::PolynomialQ;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Point {
    pub alpha: Rational,
    pub s: u32,
}

impl Point {
    pub fn new(alpha: Rational, s: u32) -> Self {
        Point { alpha, s }
    }
}

/// Unvalidated input. Fields must be syntactically well formed; everything
/// else is checked by [`validate_spec`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RawSpec {
    pub q_num: Integer,
    pub q_den: Integer,
    /// `p_0, ..., p_d`.
    pub poly: Vec<Rational>,
    pub points: Vec<Point>,
}

/// Position of a value variable `x_{j,k,sigma}`; `j` is 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Slot {
    pub j: usize,
    pub k: u32,
    pub sigma: u32,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemSpec {
    q1: Integer,
    q2: Integer,
    q: Rational,
    poly: PolynomialQ,
    points: Vec<Point>,
    s_total: u32,
    slots: Vec<Slot>,
}

impl ProblemSpec {
    /// Numerator of `q`; carries the sign of `q`.
    pub fn q1(&self) -> &Integer {
        &self.q1
    }

    /// Denominator of `q`, always positive.
    pub fn q2(&self) -> &Integer {
        &self.q2
    }

    pub fn q(&self) -> &Rational {
        &self.q
    }

    pub fn poly(&self) -> &PolynomialQ {
        &self.poly
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn m(&self) -> usize {
        self.points.len()
    }

    pub fn d(&self) -> usize {
        self.poly.degree()
    }

    /// `S = s_1 + ... + s_m`.
    pub fn s_total(&self) -> u32 {
        self.s_total
    }

    /// `dS`, the number of value variables.
    pub fn value_count(&self) -> usize {
        self.slots.len()
    }

    /// `1 + dS`, the length of every linear form.
    pub fn dim(&self) -> usize {
        1 + self.slots.len()
    }

    /// 1 when `P(z) = p_d z^d`, else 0.
    pub fn eps0(&self) -> u8 {
        u8::from(self.poly.is_monomial())
    }

    /// Value slots in form order: `j` outermost, then `k`, then `sigma`.
    pub fn slots(&self) -> &[Slot] {
        &self.slots
    }

    /// Dense position of a slot (position 0 is `x_0`).
    pub fn position(&self, slot: Slot) -> Option<usize> {
        self.slots.iter().position(|s| *s == slot).map(|i| i + 1)
    }

    /// `alpha_j q^k` for the slot.
    pub fn point_value(&self, slot: Slot) -> Rational {
        let alpha = &self.points[slot.j - 1].alpha;
        alpha.clone() * pow_i64(&self.q, i64::from(slot.k))
    }

    /// `P(q^n)` for any integer `n`.
    pub fn p_at_q_power(&self, n: i64) -> Rational {
        self.poly.eval(&pow_i64(&self.q, n))
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let pts: Vec<String> = self
            .points
            .iter()
            .map(|p| format!("({}, {})", format_rational(&p.alpha), p.s))
            .collect();
        write!(
            f,
            "q={}, P={}, points=[{}]",
            format_rational(&self.q),
            self.poly,
            pts.join(", ")
        )
    }
}

/// Checks every side condition exactly and returns the canonical spec.
///
/// Point conditions are checked before `P(q^n) != 0`. `q` is reduced to
/// lowest terms with a positive denominator. `P(q^n) != 0` is checked for
/// `n = 1..=N*` where `N*` is the first `n` at which the leading term
/// strictly dominates the others; past that point it cannot vanish.
pub fn validate_spec(raw: &RawSpec) -> Result<ProblemSpec> {
    if raw.q_den.cmp0() == Ordering::Equal {
        return Err(Error::MalformedSpec("q has zero denominator".into()));
    }
    if raw.q_num.cmp0() == Ordering::Equal {
        return Err(Error::QNotAdmissible("q = 0".into()));
    }
    let q = Rational::from((raw.q_num.clone(), raw.q_den.clone()));
    let (q1, q2) = (q.numer().clone(), q.denom().clone());
    if q1.cmp_abs(&q2) != Ordering::Greater {
        return Err(Error::QNotAdmissible(format!(
            "need |q1| > |q2|, got q = {}",
            format_rational(&q)
        )));
    }
    let poly = PolynomialQ::new(raw.poly.clone())?;
    if raw.points.is_empty() {
        return Err(Error::MalformedSpec(
            "at least one point is required".into(),
        ));
    }
    for (i, p) in raw.points.iter().enumerate() {
        if p.s == 0 {
            return Err(Error::MalformedSpec(format!("s_{} must be >= 1", i + 1)));
        }
        if is_zero(&p.alpha) {
            return Err(Error::MalformedSpec(format!(
                "alpha_{} must be nonzero",
                i + 1
            )));
        }
    }

    for j in 0..raw.points.len() {
        for k in (j + 1)..raw.points.len() {
            let ratio = Rational::from(&raw.points[j].alpha / &raw.points[k].alpha);
            if let Some(t) = q_exponent(&ratio, &q, false) {
                return Err(Error::Condition1Violated {
                    j: j + 1,
                    k: k + 1,
                    exponent: t,
                });
            }
        }
    }

    let p0 = poly.constant_term();
    if !is_zero(p0) {
        for (j, p) in raw.points.iter().enumerate() {
            let ratio = Rational::from(&p.alpha / p0);
            if let Some(t) = q_exponent(&ratio, &q, true) {
                return Err(Error::Condition2Violated {
                    j: j + 1,
                    n: u32::try_from(t).expect("positive exponent"),
                });
            }
        }
    }

    check_p_nonvanishing(&poly, &q)?;

    let d = poly.degree() as u32;
    let mut slots = Vec::new();
    for (j, p) in raw.points.iter().enumerate() {
        for k in 0..d {
            for sigma in 0..p.s {
                slots.push(Slot { j: j + 1, k, sigma });
            }
        }
    }
    let s_total = raw.points.iter().map(|p| p.s).sum();

    Ok(ProblemSpec {
        q1,
        q2,
        q,
        poly,
        points: raw.points.clone(),
        s_total,
        slots,
    })
}

/// Least `n >= 1` with `|p_d| |q|^{dn} > sum_{nu<d} |p_nu| |q|^{nu n}`.
pub(crate) fn dominance_index(poly: &PolynomialQ, q_abs: &Rational) -> u32 {
    let d = poly.degree();
    let lead = Rational::from(poly.leading().abs_ref());
    let mut qn = q_abs.clone();
    let mut n = 1u32;
    loop {
        // Evaluate both sides at |q|^n by Horner on absolute coefficients.
        let mut lower = Rational::new();
        for c in poly.coeffs()[..d].iter().rev() {
            lower *= &qn;
            lower += Rational::from(c.abs_ref());
        }
        let mut top = lead.clone();
        for _ in 0..d {
            top *= &qn;
        }
        if top > lower {
            return n;
        }
        n += 1;
        qn *= q_abs;
    }
}

fn check_p_nonvanishing(poly: &PolynomialQ, q: &Rational) -> Result<()> {
    let q_abs = Rational::from(q.abs_ref());
    let bound = dominance_index(poly, &q_abs);
    let mut qn = q.clone();
    for n in 1..=bound {
        if is_zero(&poly.eval(&qn)) {
            return Err(Error::PRootAtQPower { n });
        }
        qn *= q;
    }
    Ok(())
}

/// Finds `t` with `ratio = q^t`, searching `t ∈ ℤ` (or `t >= 1` when
/// `positive_only`). Since `|q| > 1`, `|t|` is bounded by the size of
/// `ratio`; the search compares exact powers, no logarithms.
pub(crate) fn q_exponent(ratio: &Rational, q: &Rational, positive_only: bool) -> Option<i64> {
    if !positive_only && *ratio == 1 {
        return Some(0);
    }
    let r_abs = Rational::from(ratio.abs_ref());
    let bound = if r_abs >= 1 { r_abs } else { r_abs.recip() };
    let mut qt = q.clone();
    let mut t = 1i64;
    loop {
        if Rational::from(qt.abs_ref()) > bound {
            return None;
        }
        if qt == *ratio {
            return Some(t);
        }
        if !positive_only && Rational::from(qt.recip_ref()) == *ratio {
            return Some(-t);
        }
        qt *= q;
        t += 1;
    }
}
