use std::cmp::Ordering;

use rug::{Integer, Rational};
use serde::Serialize;

use super::choose::{choose_parameters, n0_for};
use crate::arith::Enclosure;
use crate::error::{Error, FailedAttempt, Result};
use crate::params::MeasureParams;
use crate::series::{evaluate_integer_form, OmegaVector};
use crate::session::Session;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CertifyConfig {
    pub l_override: Option<u32>,
    /// Extra values of `l` tried after the first.
    pub retry_cap: u32,
    /// Precision of the independent `|Lambda(A)|` enclosure.
    pub cross_check_bits: u32,
}

impl Default for CertifyConfig {
    fn default() -> Self {
        CertifyConfig {
            l_override: None,
            retry_cap: 8,
            cross_check_bits: 256,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    #[serde(with = "crate::arith::rational::serde_str::integer_vec")]
    pub a: Vec<Integer>,
    pub l: u32,
    pub n: u32,
    /// `w_{l,n}(A)`, a nonzero integer.
    #[serde(with = "crate::arith::rational::serde_str::integer")]
    pub w_a: Integer,
    /// Enclosure of `w_{l,n}(omega)`.
    pub w_omega: Enclosure,
    #[serde(with = "crate::arith::rational::serde_str::integer")]
    pub x0_coeff: Integer,
    /// `(|w_a| - 1/2) / |x0_coeff|`, a rigorous lower bound on `|Lambda(A)|`.
    #[serde(with = "crate::arith::rational::serde_str")]
    pub bound: Rational,
    /// Independent enclosure of `|Lambda(A)|`.
    pub cross_check: Enclosure,
    pub precision_bits: u32,
    /// Number of values of `l` tried, including the successful one.
    pub attempts: u32,
}

impl Certificate {
    /// Recomputes `cross_check` at `bits`.
    pub fn refine_cross_check(&mut self, session: &Session, bits: u32) -> Result<()> {
        self.cross_check = session.lambda_enclosure(&self.a, bits)?.abs();
        Ok(())
    }

    /// `bound <= lo(cross_check)`.
    pub fn is_sound_against_cross_check(&self) -> bool {
        self.bound <= *self.cross_check.lo()
    }
}

/// Builds a certificate `|Lambda(A)| >= bound > 0` from an exact nonzero
/// `w_{l,n}(A)` and a certified `|w_{l,n}(omega)| <= 1/2`, where
/// `omega = (-sum A_{j,k,sigma} f^(sigma)(alpha_j q^k), A_{j,k,sigma})`.
pub fn certify_lower_bound(
    session: &Session,
    params: &MeasureParams,
    a: &[Integer],
    config: &CertifyConfig,
) -> Result<Certificate> {
    let spec = session.spec();
    if a.len() != spec.dim() {
        return Err(Error::InvalidArgument(format!(
            "A has length {}, expected 1 + dS = {}",
            a.len(),
            spec.dim()
        )));
    }
    if !params.applicable {
        return Err(Error::NotApplicable);
    }
    if a.iter().all(|x| x.cmp0() == Ordering::Equal) {
        return Err(Error::ZeroVector);
    }
    let h = a[1..]
        .iter()
        .map(|x| x.clone().abs())
        .max()
        .unwrap_or_default()
        .max(Integer::from(2));
    let l_start = match config.l_override {
        Some(l) => l,
        None => choose_parameters(spec, params, &h)?.l,
    };
    let rest: Vec<Rational> = a[1..].iter().map(Rational::from).collect();
    let weight_bits = a[1..]
        .iter()
        .fold(Integer::new(), |acc, x| acc + x.clone().abs())
        .significant_bits();
    let half = Rational::from((1, 2));
    let window = spec.value_count() as u32;

    let mut failed = Vec::new();
    for (attempt, l) in (l_start..=l_start + config.retry_cap).enumerate() {
        let n0 = n0_for(spec, params, l);
        let mut any_nonzero = false;
        for n in n0..=n0 + window {
            let w = session.engine().w_form(l, n)?;
            let w_a = w.evaluate_integer(a);
            if w_a == 0 {
                continue;
            }
            any_nonzero = true;
            let start = w.x0().significant_bits() + weight_bits + 32;
            let mut last: Option<Enclosure> = None;
            let mut reason = "enclosure of |w(omega)| straddles 1/2 at the precision cap";
            for bits in session.policy().ladder(start) {
                let omega = OmegaVector::from_values(rest.clone(), &*session.values(bits)?);
                let w_omega = evaluate_integer_form(&w, &omega);
                let abs = w_omega.abs();
                if *abs.hi() <= half {
                    let x0 = w.x0().clone();
                    let bound = (Rational::from(w_a.clone().abs()) - &half)
                        / Rational::from(x0.clone().abs());
                    let cross_check = session.lambda_enclosure(a, config.cross_check_bits)?.abs();
                    return Ok(Certificate {
                        a: a.to_vec(),
                        l,
                        n,
                        w_a,
                        w_omega,
                        x0_coeff: x0,
                        bound,
                        cross_check,
                        precision_bits: bits,
                        attempts: attempt as u32 + 1,
                    });
                }
                let above = *abs.lo() > half;
                last = Some(abs);
                if above {
                    reason = "|w(omega)| > 1/2";
                    break;
                }
            }
            failed.push(FailedAttempt {
                l,
                n: Some(n),
                w_omega_abs: last,
                reason: reason.to_string(),
            });
        }
        if !any_nonzero {
            failed.push(FailedAttempt {
                l,
                n: None,
                w_omega_abs: None,
                reason: format!("w_{{l,n}}(A) = 0 for all n in [{n0}, {}]", n0 + window),
            });
        }
    }
    Err(Error::RetryCapExceeded { attempts: failed })
}
