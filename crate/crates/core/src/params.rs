//! Scalar quantities attached to a spec: `gamma`, `S`, `eps0`, `M`, `mu`
//! and the clearing denominator `D`.

use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::elementary::{log_base, sqrt};
use crate::arith::Enclosure;
use crate::error::{Error, Result};
use crate::spec::ProblemSpec;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MeasureParams {
    pub s_total: u32,
    pub eps0: u8,
    pub gamma: Enclosure,
    pub m: Enclosure,
    /// `None` when the spec is not applicable.
    pub mu: Option<Enclosure>,
    pub applicable: bool,
    /// Precision at which the applicability verdict was certified.
    pub precision_bits: u32,
}

/// `log|q2| / log|q1|`, width at most `2^-bits`; exactly `[0, 0]` when
/// `|q2| = 1`.
pub fn gamma_enclosure(spec: &ProblemSpec, bits: u32) -> Enclosure {
    if *spec.q2() == 1 {
        return Enclosure::zero();
    }
    let q1 = Rational::from(spec.q1().clone().abs());
    let q2 = Rational::from(spec.q2().clone());
    log_base(&q2, &q1, bits)
}

fn ds(spec: &ProblemSpec) -> Rational {
    Rational::from(spec.d() as u64 * u64::from(spec.s_total()))
}

/// `M`, enclosed with width at most `2^-bits`.
pub fn m_enclosure(spec: &ProblemSpec, bits: u32) -> Enclosure {
    let ds = ds(spec);
    if spec.eps0() == 1 {
        // dS + 1/2 + sqrt(d^2 S^2 + 1/4)
        let radicand = Rational::from(&ds * &ds) + Rational::from((1, 4));
        sqrt(&radicand, bits).shift(&(ds + Rational::from((1, 2))))
    } else {
        // dS + 1 + sqrt(dS (dS + 1))
        let radicand = &ds * Rational::from(&ds + 1u32);
        sqrt(&radicand, bits).shift(&(ds + 1u32))
    }
}

/// `a = (1 - M gamma)/d * sqrt((dS)^2 + (1 - eps0) dS + eps0^2/4)`.
pub fn a_enclosure(spec: &ProblemSpec, params: &MeasureParams, bits: u32) -> Enclosure {
    let ds = ds(spec);
    let eps0 = Rational::from(params.eps0);
    let radicand = Rational::from(&ds * &ds)
        + Rational::from(1u32 - params.eps0 as u32) * &ds
        + Rational::from(&eps0 * &eps0) / 4u32;
    let root = sqrt(&radicand, bits);
    let one_minus = Enclosure::point(Rational::from(1)) - &params.m * &params.gamma;
    (&one_minus * &root).scale(&Rational::from((1, spec.d() as u64)))
}

/// Computes `S`, `eps0`, `gamma`, `M`, and decides `gamma < 1/M`
/// rigorously, doubling precision up to `cap_bits`.
pub fn measure_params(spec: &ProblemSpec, bits: u32, cap_bits: u32) -> Result<MeasureParams> {
    let one = Enclosure::point(Rational::from(1));
    let mut p = bits.max(16);
    loop {
        let gamma = gamma_enclosure(spec, p);
        let m = m_enclosure(spec, p);
        let mg = &m * &gamma;
        let verdict = if *mg.hi() < 1 {
            Some(true)
        } else if *mg.lo() >= 1 {
            Some(false)
        } else {
            None
        };
        if let Some(applicable) = verdict {
            let mu = applicable.then(|| {
                let num = m.shift(&Rational::from(-1));
                let den = &one - &mg;
                num.checked_div(&den)
                    .expect("1 - M gamma is certified positive")
                    .round_outward(p + 8)
            });
            return Ok(MeasureParams {
                s_total: spec.s_total(),
                eps0: spec.eps0(),
                gamma,
                m,
                mu,
                applicable,
                precision_bits: p,
            });
        }
        if p >= cap_bits {
            return Err(Error::UndecidableAtCap { cap: cap_bits });
        }
        p = (p * 2).min(cap_bits);
    }
}

/// Least positive `D` with `D P(z) ∈ ℤ[z]` and `D alpha_j q^k ∈ ℤ` for all
/// `j` and `0 <= k < d`.
pub fn clearing_denominator(spec: &ProblemSpec) -> Integer {
    let mut acc = Integer::from(1);
    for c in spec.poly().coeffs() {
        acc.lcm_mut(c.denom());
    }
    for slot in spec.slots().iter().filter(|s| s.sigma == 0) {
        acc.lcm_mut(spec.point_value(*slot).denom());
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use crate::spec::{validate_spec, Point, RawSpec};

    fn spec(q: (i64, i64), poly: &[(i64, i64)], points: &[((i64, i64), u32)]) -> ProblemSpec {
        validate_spec(&RawSpec {
            q_num: Integer::from(q.0),
            q_den: Integer::from(q.1),
            poly: poly.iter().map(|&(n, d)| rat(n, d)).collect(),
            points: points
                .iter()
                .map(|&((n, d), s)| Point::new(rat(n, d), s))
                .collect(),
        })
        .unwrap()
    }

    fn close(e: &Enclosure, v: f64, tol: f64) -> bool {
        (e.lo().to_f64() - v).abs() <= tol && (e.hi().to_f64() - v).abs() <= tol
    }

    #[test]
    fn gamma_is_zero_for_integer_q() {
        let s = spec((2, 1), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        assert_eq!(gamma_enclosure(&s, 64), Enclosure::zero());
    }

    #[test]
    fn gamma_for_rational_q() {
        // Oracle values: log 2 / log 3 and log 2 / log 9 from f64 logs
        // (well within the asserted tolerance).
        let s = spec((3, 2), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        let g = gamma_enclosure(&s, 32);
        assert!(close(&g, 0.630_929_753_571_457_4, 1e-9));
        assert!(g.width() <= Rational::from((1, Integer::from(1) << 32)));
        let s = spec((9, 2), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        assert!(close(
            &gamma_enclosure(&s, 40),
            0.315_464_876_785_728_7,
            1e-10
        ));
    }

    #[test]
    fn gamma_width_halves_with_each_bit() {
        let s = spec((7, 5), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        for bits in [8u32, 20, 50, 120] {
            let w = gamma_enclosure(&s, bits).width();
            assert!(w <= Rational::from((1, Integer::from(1) << bits)));
            let w2 = gamma_enclosure(&s, bits + 1).width();
            assert!(w2 <= Rational::from((1, Integer::from(1) << (bits + 1))));
        }
    }

    #[test]
    fn monomial_fixture_params() {
        let s = spec((2, 1), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        let p = measure_params(&s, 64, 1 << 14).unwrap();
        assert_eq!((p.s_total, p.eps0, p.applicable), (1, 1, true));
        let golden = (1.0 + 5f64.sqrt()) / 2.0;
        assert!(close(&p.m, golden + 1.0, 1e-12));
        assert!(close(p.mu.as_ref().unwrap(), golden, 1e-12));
        // (M - dS - 1/2)^2 must enclose d^2 S^2 + 1/4.
        let t = p.m.shift(&rat(-3, 2));
        assert!((&t * &t).contains(&rat(5, 4)));
    }

    #[test]
    fn non_monomial_fixture_params() {
        let s = spec((2, 1), &[(1, 1), (1, 1)], &[((1, 1), 1)]);
        let p = measure_params(&s, 64, 1 << 14).unwrap();
        assert_eq!(p.eps0, 0);
        assert!(close(&p.m, 2.0 + 2f64.sqrt(), 1e-12));
        assert!(close(p.mu.as_ref().unwrap(), 1.0 + 2f64.sqrt(), 1e-12));
    }

    #[test]
    fn applicability_gate() {
        let s = spec((3, 2), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        let p = measure_params(&s, 32, 1 << 14).unwrap();
        assert!(!p.applicable);
        assert!(p.mu.is_none());
        let s = spec((9, 2), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        assert!(measure_params(&s, 32, 1 << 14).unwrap().applicable);
    }

    #[test]
    fn clearing_denominators() {
        let s = spec((2, 1), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        assert_eq!(clearing_denominator(&s), 1);
        let s = spec((2, 1), &[(0, 1), (1, 3)], &[((5, 7), 1)]);
        assert_eq!(clearing_denominator(&s), 21);
        let s = spec((3, 2), &[(0, 1), (1, 1)], &[((1, 1), 1)]);
        assert_eq!(clearing_denominator(&s), 1);
        // d = 2: alpha q = 15/14 brings in the factor 2.
        let s = spec((3, 2), &[(0, 1), (1, 3), (1, 1)], &[((5, 7), 2)]);
        assert_eq!(clearing_denominator(&s), 42);
    }

    #[test]
    fn clearing_denominator_is_minimal() {
        let s = spec(
            (5, 3),
            &[(1, 4), (0, 1), (2, 9)],
            &[((7, 6), 1), ((-2, 15), 2)],
        );
        let dd = clearing_denominator(&s);
        let works = |d: &Integer| {
            s.poly()
                .coeffs()
                .iter()
                .all(|c| (Rational::from(c * d)).denom() == &1)
                && s.slots()
                    .iter()
                    .all(|sl| (s.point_value(*sl) * d).denom() == &1)
        };
        assert!(works(&dd));
        let mut p = Integer::from(2);
        while p <= dd {
            if dd.is_divisible(&p) {
                assert!(!works(&Integer::from(&dd / &p)), "{dd}/{p} also clears");
            }
            p += 1;
        }
    }
}
