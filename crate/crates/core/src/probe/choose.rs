use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::elementary::log_base;
use crate::arith::rational::ceil;
use crate::arith::Enclosure;
use crate::error::{Error, Result};
use crate::params::{a_enclosure, MeasureParams};
use crate::spec::ProblemSpec;

const BITS: u32 = 64;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ChosenParameters {
    pub l: u32,
    pub n0: u32,
    /// `log H / log |q1|`.
    pub big_l: Enclosure,
    pub a: Enclosure,
}

/// `n0 = ceil((M - 1) l / d)` from the upper end of the `M` enclosure,
/// raised to `S l` if needed.
pub fn n0_for(spec: &ProblemSpec, params: &MeasureParams, l: u32) -> u32 {
    let x = params
        .m
        .shift(&Rational::from(-1))
        .scale(&Rational::from((l, spec.d() as u32)));
    let n0 = ceil(x.hi()).to_u32().expect("n0 fits in u32");
    n0.max(spec.s_total() * l)
}

/// `l = ceil(sqrt(L / a))` at the midpoints (at least 1) and the matching `n0`.
pub fn choose_parameters(
    spec: &ProblemSpec,
    params: &MeasureParams,
    h: &Integer,
) -> Result<ChosenParameters> {
    if !params.applicable {
        return Err(Error::NotApplicable);
    }
    if *h < 2 {
        return Err(Error::InvalidArgument(format!(
            "H must be at least 2, got {h}"
        )));
    }
    let q1_abs = Rational::from(spec.q1().abs_ref());
    let big_l = log_base(&Rational::from(h), &q1_abs, BITS);
    let a = a_enclosure(spec, params, BITS);
    let x = big_l.mid() / a.mid();
    // Least l >= 1 with l^2 >= x.
    let mut l = ceil(&x).sqrt().to_u32().expect("l fits in u32").max(1);
    while l * l < x {
        l += 1;
    }
    while l > 1 && (l - 1) * (l - 1) >= x {
        l -= 1;
    }
    Ok(ChosenParameters {
        l,
        n0: n0_for(spec, params, l),
        big_l,
        a,
    })
}
