use rug::Rational;
use serde::Serialize;

use crate::arith::Enclosure;
use crate::error::{Error, Result};
use crate::forms::LinearForm;
use crate::series::{evaluate_form, OmegaVector};
use crate::session::Session;

/// The point at which `v_{l0,n}` is evaluated.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum NonvanishInput {
    /// All `1 + dS` coordinates, exact.
    Exact(Vec<Rational>),
    /// Value coordinates only; `omega_0 = -sum omega_{j,k,sigma} f^(sigma)(alpha_j q^k)`.
    FromValues(Vec<Rational>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NonvanishStatus {
    Found,
    Undecided,
    /// Every value in the window is exactly zero. Never expected; reported
    /// rather than hidden.
    AllZero,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonvanishingVerdict {
    pub l0: u32,
    pub window_start: u32,
    pub window_length: u32,
    pub found_index: Option<u32>,
    pub status: NonvanishStatus,
    /// `None` on the exact path.
    pub precision_used: Option<u32>,
    /// `v_{l0, found_index}(omega)`.
    pub value: Option<Enclosure>,
}

/// Least `n` in `[n0, n0 + dS]` with `v_{l0,n}(omega)` certifiably nonzero.
pub fn nonvanishing_scan(
    session: &Session,
    omega: &NonvanishInput,
    l0: u32,
    n0: u32,
) -> Result<NonvanishingVerdict> {
    let spec = session.spec();
    let dim = spec.dim();
    let (len, is_zero) = match omega {
        NonvanishInput::Exact(v) => (v.len(), v.iter().all(|r| *r == 0)),
        NonvanishInput::FromValues(v) => (v.len() + 1, v.iter().all(|r| *r == 0)),
    };
    if len != dim {
        return Err(Error::InvalidArgument(format!(
            "omega has length {len}, expected 1 + dS = {dim}"
        )));
    }
    if is_zero {
        return Err(Error::ZeroOmega);
    }
    let min_n = spec.s_total() * l0;
    if n0 < min_n {
        return Err(Error::DomainViolation {
            l: l0,
            n: n0,
            min_n,
        });
    }
    let window_length = spec.value_count() as u32 + 1;
    let forms: Vec<LinearForm> = (n0..n0 + window_length)
        .map(|n| session.engine().vl_form(l0, n))
        .collect::<Result<_>>()?;
    let verdict = |found: Option<(u32, Enclosure)>, status, precision_used| NonvanishingVerdict {
        l0,
        window_start: n0,
        window_length,
        found_index: found.as_ref().map(|f| f.0),
        status,
        precision_used,
        value: found.map(|f| f.1),
    };

    match omega {
        NonvanishInput::Exact(point) => {
            let hit = forms
                .iter()
                .zip(n0..)
                .map(|(f, n)| (n, f.evaluate_exact(point)))
                .find(|(_, v)| *v != 0);
            Ok(match hit {
                Some((n, v)) => {
                    verdict(Some((n, Enclosure::point(v))), NonvanishStatus::Found, None)
                }
                None => verdict(None, NonvanishStatus::AllZero, None),
            })
        }
        NonvanishInput::FromValues(rest) => {
            let x0_bits = forms
                .iter()
                .map(|f| {
                    f.x0()
                        .numer()
                        .significant_bits()
                        .saturating_sub(f.x0().denom().significant_bits())
                })
                .max()
                .unwrap_or(0);
            let mut used = 0;
            for bits in session.policy().ladder(x0_bits + 64) {
                used = bits;
                let om = OmegaVector::from_values(rest.clone(), &*session.values(bits)?);
                let hit = forms
                    .iter()
                    .zip(n0..)
                    .map(|(f, n)| (n, evaluate_form(f, &om)))
                    .find(|(_, v)| v.excludes_zero());
                if let Some(found) = hit {
                    return Ok(verdict(Some(found), NonvanishStatus::Found, Some(bits)));
                }
            }
            Ok(verdict(None, NonvanishStatus::Undecided, Some(used)))
        }
    }
}
