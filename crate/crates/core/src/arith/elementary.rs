//! Rigorous enclosures of `ln` and `sqrt` at rational arguments.
//!
//! Logarithms use the reduction `x = 2^k * y`, `y ∈ [1, 2)`, and
//! `ln y = 2 atanh((y-1)/(y+1))`, summed in fixed point with separate
//! floor/ceil tracks so the result brackets the true value.

use std::cmp::Ordering;

use rug::{Integer, Rational};

use super::enclosure::Enclosure;
use super::rational::{ceil, floor};

/// Enclosure of `ln x` with width at most `2^-bits`. Panics if `x <= 0`.
pub fn ln(x: &Rational, bits: u32) -> Enclosure {
    assert!(x.cmp0() == Ordering::Greater, "ln of non-positive {x}");
    if *x == 1 {
        return Enclosure::zero();
    }
    let (k, y) = reduce_pow2(x);
    let target = Rational::from((1, Integer::from(1) << (bits + 1)));
    let k_bits = k.unsigned_abs().max(1).ilog2() + 1;
    let mut guard = 16 + k_bits + 2 * (bits / 3 + 8).ilog2();
    loop {
        let w = bits + guard;
        let ln2 = atanh_fixed(&Rational::from((1, 3)), w);
        let mut acc = ln2.scale(&Rational::from(2 * k));
        if y != 1 {
            let t = Rational::from(&y - 1u32) / Rational::from(&y + 1u32);
            let lny = atanh_fixed(&t, w).scale(&Rational::from(2));
            acc = &acc + &lny;
        }
        if acc.width() <= target {
            return acc.round_outward(bits + 2);
        }
        guard += 32;
    }
}

/// `ln(x) / ln(base)` enclosed with width at most `2^-bits`. Both arguments
/// must be positive and `base != 1`.
pub fn log_base(x: &Rational, base: &Rational, bits: u32) -> Enclosure {
    assert!(*base != 1, "logarithm base 1");
    let target = Rational::from((1, Integer::from(1) << bits));
    let mut work = bits + 8;
    loop {
        let num = ln(x, work);
        let den = ln(base, work);
        let q = num
            .checked_div(&den)
            .expect("ln(base) enclosure straddles zero");
        let q = q.round_outward(work);
        if q.width() <= target {
            return q;
        }
        work += work / 2 + 16;
    }
}

/// Enclosure of `sqrt x` with width at most `2^-bits`. Panics if `x < 0`.
pub fn sqrt(x: &Rational, bits: u32) -> Enclosure {
    assert!(x.cmp0() != Ordering::Less, "sqrt of negative {x}");
    let w = bits + 2;
    let scaled = Rational::from(x * (Integer::from(1) << (2 * w)));
    let lo = floor(&scaled).sqrt();
    let c = ceil(&scaled);
    let mut hi = c.clone().sqrt();
    if Integer::from(&hi * &hi) < c {
        hi += 1;
    }
    let one = Integer::from(1) << w;
    Enclosure::new(Rational::from((lo, one.clone())), Rational::from((hi, one)))
}

/// Splits `x > 0` as `2^k * y` with `1 <= y < 2`.
fn reduce_pow2(x: &Rational) -> (i64, Rational) {
    let k = i64::from(x.numer().significant_bits()) - i64::from(x.denom().significant_bits());
    let mut y = shift(x, -k);
    let mut k = k;
    if y < 1 {
        y <<= 1u32;
        k -= 1;
    }
    debug_assert!((1..2).contains(&y));
    (k, y)
}

fn shift(x: &Rational, k: i64) -> Rational {
    let k32 = i32::try_from(k).expect("binary exponent out of range");
    Rational::from(x << k32)
}

/// Encloses `atanh t` for `0 <= t <= 1/3`, width a few units of `2^-w`.
fn atanh_fixed(t: &Rational, w: u32) -> Enclosure {
    assert!(t.cmp0() != Ordering::Less && Rational::from(t * 3u32) <= 1);
    let one = Integer::from(1) << w;
    if t.cmp0() == Ordering::Equal {
        return Enclosure::zero();
    }
    let tw = Rational::from(t * &one);
    let mut p_lo = floor(&tw);
    let mut p_hi = ceil(&tw);
    // Unit-numerator arguments (1/3 for ln 2, small y) divide exactly by m^2.
    let unit = (*t.numer() == 1).then(|| Integer::from(t.denom() * t.denom()));
    let t2 = Rational::from(t * t) * &one;
    let (t2_lo, t2_hi) = (floor(&t2), ceil(&t2));

    let mut sum_lo = Integer::new();
    let mut sum_hi = Integer::new();
    let mut i: u32 = 0;
    loop {
        let d = Integer::from(2 * i + 1);
        sum_lo += p_lo.clone().div_rem_floor(d.clone()).0;
        sum_hi += p_hi.clone().div_rem_ceil(d).0;
        match &unit {
            Some(m2) => {
                p_lo = p_lo.div_rem_floor(m2.clone()).0;
                p_hi = p_hi.div_rem_ceil(m2.clone()).0;
            }
            None => {
                p_lo = (p_lo * &t2_lo).div_rem_floor(one.clone()).0;
                p_hi = (p_hi * &t2_hi).div_rem_ceil(one.clone()).0;
            }
        }
        i += 1;
        if p_hi <= 1 {
            // Remaining terms sum to at most (9/8) * p_hi / (2i+1) <= 2 units.
            sum_hi += 2;
            break;
        }
    }
    Enclosure::new(
        Rational::from((sum_lo, one.clone())),
        Rational::from((sum_hi, one)),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rational::rat;
    use rug::ops::Pow;

    fn approx(e: &Enclosure, v: f64, tol: f64) -> bool {
        (e.lo().to_f64() - v).abs() < tol && (e.hi().to_f64() - v).abs() < tol
    }

    #[test]
    fn ln_of_small_values() {
        assert!(approx(&ln(&rat(2, 1), 60), std::f64::consts::LN_2, 1e-15));
        assert!(approx(&ln(&rat(3, 1), 60), 3f64.ln(), 1e-15));
        assert!(approx(&ln(&rat(1, 3), 60), -(3f64.ln()), 1e-15));
        assert!(approx(&ln(&rat(7, 5), 60), 1.4f64.ln(), 1e-15));
        assert_eq!(ln(&rat(1, 1), 60), Enclosure::zero());
    }

    #[test]
    fn ln_width_respects_bits() {
        for bits in [1u32, 10, 64, 200, 1000] {
            for x in [rat(2, 1), rat(9, 1), rat(1, 1000), rat(123457, 3)] {
                let e = ln(&x, bits);
                assert!(e.width() <= Rational::from((1, Integer::from(1) << bits)));
            }
        }
    }

    #[test]
    fn ln_of_huge_integer() {
        let x = Rational::from(Integer::from(3).pow(5000u32));
        let e = ln(&x, 40);
        let expect = 5000.0 * 3f64.ln();
        assert!(approx(&e, expect, 1e-9));
    }

    #[test]
    fn ln_additivity_is_consistent() {
        // ln 6 must lie in ln 2 + ln 3.
        let sum = &ln(&rat(2, 1), 100) + &ln(&rat(3, 1), 100);
        assert!(ln(&rat(6, 1), 100).intersect(&sum).is_some());
    }

    #[test]
    fn sqrt_brackets() {
        let e = sqrt(&rat(5, 1), 64);
        assert!(approx(&e, 5f64.sqrt(), 1e-15));
        let sq_lo = Rational::from(e.lo() * e.lo());
        let sq_hi = Rational::from(e.hi() * e.hi());
        assert!(sq_lo <= 5 && sq_hi >= 5);
        assert_eq!(sqrt(&rat(9, 4), 10).mid(), rat(3, 2));
    }

    #[test]
    fn log_base_three_of_two() {
        let e = log_base(&rat(2, 1), &rat(3, 1), 32);
        assert!(approx(&e, 2f64.ln() / 3f64.ln(), 1e-9));
        assert!(e.width() <= Rational::from((1, Integer::from(1) << 32)));
    }
}
