//! Per-spec shared state: the forms engine and value tables cached by
//! precision.

use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use crate::arith::Enclosure;
use crate::error::{Error, Result};
use crate::forms::FormsEngine;
use crate::series::{OmegaVector, ValueTable};
use crate::spec::ProblemSpec;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrecisionPolicy {
    pub initial_bits: u32,
    pub cap_bits: u32,
}

impl Default for PrecisionPolicy {
    fn default() -> Self {
        PrecisionPolicy {
            initial_bits: 256,
            cap_bits: 1 << 14,
        }
    }
}

impl PrecisionPolicy {
    /// Precisions tried by escalation: `start`, doubled each time, ending at the cap.
    pub fn ladder(&self, start: u32) -> Vec<u32> {
        let mut p = start.max(self.initial_bits).min(self.cap_bits);
        let mut out = vec![p];
        while p < self.cap_bits {
            p = p.saturating_mul(2).min(self.cap_bits);
            out.push(p);
        }
        out
    }
}

#[derive(Debug)]
pub struct Session {
    engine: FormsEngine,
    policy: PrecisionPolicy,
    tables: RwLock<BTreeMap<u32, Arc<ValueTable>>>,
}

impl Session {
    pub fn new(spec: ProblemSpec, policy: PrecisionPolicy) -> Self {
        Self::with_engine(FormsEngine::new(Arc::new(spec)), policy)
    }

    pub fn with_engine(engine: FormsEngine, policy: PrecisionPolicy) -> Self {
        Session {
            engine,
            policy,
            tables: RwLock::new(BTreeMap::new()),
        }
    }

    pub fn spec(&self) -> &ProblemSpec {
        self.engine.spec()
    }

    pub fn engine(&self) -> &FormsEngine {
        &self.engine
    }

    pub fn policy(&self) -> PrecisionPolicy {
        self.policy
    }

    /// Value table with width at most `2^-bits` per entry. Tables are
    /// computed at the next power of two (at least 64) and shared. A lookup
    /// only ever returns the table for its own key, so results do not depend
    /// on what other callers cached first.
    pub fn values(&self, bits: u32) -> Result<Arc<ValueTable>> {
        if bits > self.policy.cap_bits {
            return Err(Error::PrecisionCapExceeded {
                cap: self.policy.cap_bits,
                what: format!("value table at {bits} bits"),
            });
        }
        let key = bits
            .max(64)
            .next_power_of_two()
            .min(self.policy.cap_bits.max(bits));
        if let Some(t) = self.tables.read().expect("table cache poisoned").get(&key) {
            return Ok(Arc::clone(t));
        }
        let table = Arc::new(ValueTable::compute(self.spec(), key));
        let mut cache = self.tables.write().expect("table cache poisoned");
        Ok(Arc::clone(cache.entry(key).or_insert(table)))
    }

    /// Enclosure of `Lambda(A) = A_0 + sum A_{j,k,sigma} f^(sigma)(alpha_j q^k)`.
    pub fn lambda_enclosure(&self, a: &[Integer], bits: u32) -> Result<Enclosure> {
        self.check_len(a.len())?;
        Ok(self.values(bits)?.lambda(a))
    }

    /// `omega` with the given value coordinates and `omega_0` from the series.
    pub fn omega_from_values(&self, rest: Vec<Rational>, bits: u32) -> Result<OmegaVector> {
        self.check_len(rest.len() + 1)?;
        Ok(OmegaVector::from_values(rest, &*self.values(bits)?))
    }

    fn check_len(&self, len: usize) -> Result<()> {
        if len != self.spec().dim() {
            return Err(Error::InvalidArgument(format!(
                "vector has length {len}, expected 1 + dS = {}",
                self.spec().dim()
            )));
        }
        Ok(())
    }
}
