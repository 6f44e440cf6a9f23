use std::collections::HashMap;
use std::sync::{Arc, RwLock};

use rug::ops::Pow;
use rug::{Integer, Rational};

use super::linear_form::{IntegerLinearForm, LinearForm};
use super::operator::OperatorPoly;
use crate::arith::rational::{falling_factorial, pow_i64};
use crate::error::{Error, Result};
use crate::params::clearing_denominator;
use crate::spec::ProblemSpec;

/// Builds `u_n`, `v_n`, `v_{l,n}` and `w_{l,n}` for one spec.
///
/// `v_n` is produced by the recurrence `v_n = P(q^n) v_{n-1} + u_n` and
/// cached; the cache grows under a write lock and is read concurrently.
#[derive(Debug)]
pub struct FormsEngine {
    spec: Arc<ProblemSpec>,
    denominator: Integer,
    p_shift: i64,
    v_cache: RwLock<Vec<Arc<LinearForm>>>,
    op_cache: RwLock<HashMap<(u32, i64), Arc<OperatorPoly>>>,
    w_cache: RwLock<HashMap<(u32, u32), Arc<IntegerLinearForm>>>,
}

impl FormsEngine {
    pub fn new(spec: Arc<ProblemSpec>) -> Self {
        let denominator = clearing_denominator(&spec);
        FormsEngine {
            spec,
            denominator,
            p_shift: 0,
            v_cache: RwLock::new(Vec::new()),
            op_cache: RwLock::new(HashMap::new()),
            w_cache: RwLock::new(HashMap::new()),
        }
    }

    /// An engine whose recurrence multiplies by `P(q^{n + offset})`.
    /// Only meaningful as a negative control for the identity checks.
    #[doc(hidden)]
    pub fn with_recurrence_offset(spec: Arc<ProblemSpec>, offset: i64) -> Self {
        FormsEngine {
            p_shift: offset,
            ..Self::new(spec)
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn spec_arc(&self) -> &Arc<ProblemSpec> {
        &self.spec
    }

    /// The clearing denominator `D`.
    pub fn denominator(&self) -> &Integer {
        &self.denominator
    }

    /// `u_n` for any integer `n`.
    pub fn u_form(&self, n: i64) -> LinearForm {
        let spec = &*self.spec;
        let mut coeffs = vec![Rational::new(); spec.dim()];
        for (i, slot) in spec.slots().iter().enumerate() {
            let ff = falling_factorial(n, slot.sigma);
            if ff == 0 {
                continue;
            }
            let base = spec.point_value(*slot);
            coeffs[i + 1] = pow_i64(&base, n - i64::from(slot.sigma)) * ff;
        }
        LinearForm::from_coeffs(coeffs)
    }

    /// `v_n`, memoized.
    pub fn v_form(&self, n: u32) -> Arc<LinearForm> {
        let idx = n as usize;
        if let Some(v) = self.v_cache.read().expect("v cache poisoned").get(idx) {
            return Arc::clone(v);
        }
        let mut cache = self.v_cache.write().expect("v cache poisoned");
        while cache.len() <= idx {
            let m = cache.len() as i64;
            let next = match cache.last() {
                None => {
                    let mut v0 = self.u_form(0);
                    v0.add_scaled(&LinearForm::unit(self.spec.dim(), 0), &Rational::from(1));
                    v0
                }
                Some(prev) => {
                    let mut v = prev.scaled(&self.spec.p_at_q_power(m + self.p_shift));
                    v.add_scaled(&self.u_form(m), &Rational::from(1));
                    v
                }
            };
            cache.push(Arc::new(next));
        }
        Arc::clone(&cache[idx])
    }

    /// `v_{n-t}` for `t = 0..=width`, newest first.
    fn v_window(&self, n: u32, width: usize) -> Vec<Arc<LinearForm>> {
        self.v_form(n);
        let cache = self.v_cache.read().expect("v cache poisoned");
        (0..=width)
            .map(|t| Arc::clone(&cache[n as usize - t]))
            .collect()
    }

    /// Factors `(alpha_j q^{delta-k}, s_j)` for `k = 1..=l`, in the order
    /// they are multiplied.
    pub fn operator_factors(&self, l: u32, delta: i64) -> Vec<(Rational, u32)> {
        let spec = &*self.spec;
        let mut out = Vec::with_capacity(l as usize * spec.m());
        for k in 1..=i64::from(l) {
            let qk = pow_i64(spec.q(), delta - k);
            for p in spec.points() {
                out.push((Rational::from(&p.alpha * &qk), p.s));
            }
        }
        out
    }

    /// `prod_{k=1}^{l} prod_j (1 - alpha_j q^{delta-k} B)^{s_j}`, cached per `(l, delta)`.
    pub fn operator_poly(&self, l: u32, delta: i64) -> Arc<OperatorPoly> {
        if let Some(op) = self
            .op_cache
            .read()
            .expect("op cache poisoned")
            .get(&(l, delta))
        {
            return Arc::clone(op);
        }
        let factors = self.operator_factors(l, delta);
        let op = Arc::new(OperatorPoly::from_factors(
            factors.iter().map(|(a, s)| (a, *s)),
        ));
        let mut cache = self.op_cache.write().expect("op cache poisoned");
        Arc::clone(cache.entry((l, delta)).or_insert(op))
    }

    /// `Op(l, delta)` applied to the `v` sequence at index `n`.
    /// Requires `n >= S l`.
    pub fn apply_operator(&self, l: u32, delta: i64, n: u32) -> Result<LinearForm> {
        let min_n = self.spec.s_total() * l;
        if n < min_n {
            return Err(Error::DomainViolation { l, n, min_n });
        }
        let op = self.operator_poly(l, delta);
        Ok(op.apply_forms(&self.v_window(n, op.degree())))
    }

    /// `v_{l,n}`; requires `n >= S l`.
    pub fn vl_form(&self, l: u32, n: u32) -> Result<LinearForm> {
        self.apply_operator(l, 0, n)
    }

    /// `D^n q_1^{S l (l+1)/2} q_2^{d n (n+1)/2}`.
    pub fn w_scale(&self, l: u32, n: u32) -> Integer {
        let spec = &*self.spec;
        let s = spec.s_total();
        let d = spec.d() as u32;
        let e1 = s * l * (l + 1) / 2;
        let e2 = d * n * (n + 1) / 2;
        let q1 = Integer::from(spec.q1().abs_ref());
        self.denominator.clone().pow(n) * q1.pow(e1) * spec.q2().clone().pow(e2)
    }

    /// The integer form `w_{l,n}`, cached; requires `n >= S l`.
    ///
    /// Panics if a coefficient fails to be integral, which would be a bug.
    pub fn w_form(&self, l: u32, n: u32) -> Result<Arc<IntegerLinearForm>> {
        if let Some(w) = self.w_cache.read().expect("w cache poisoned").get(&(l, n)) {
            return Ok(Arc::clone(w));
        }
        let vl = self.vl_form(l, n)?;
        let scale = self.w_scale(l, n);
        let w = Arc::new(
            vl.integerize(&scale)
                .unwrap_or_else(|| panic!("w_{{{l},{n}}} is not integral")),
        );
        let mut cache = self.w_cache.write().expect("w cache poisoned");
        Ok(Arc::clone(cache.entry((l, n)).or_insert(w)))
    }

    /// `w_{l,n}` scaled back to rationals without the integrality assertion.
    pub fn w_form_unchecked(&self, l: u32, n: u32) -> Result<LinearForm> {
        let scale = Rational::from(self.w_scale(l, n));
        Ok(self.vl_form(l, n)?.scaled(&scale))
    }
}
