//! Closed intervals with exact rational endpoints.
//!
//! Arithmetic is exact on the endpoints, so every result contains the true
//! value. [`Enclosure::round_outward`] trades a little width for smaller
//! (dyadic) endpoints when numbers would otherwise grow without bound.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};

use super::rational::{ceil, floor, format_rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Enclosure {
    #[serde(with = "super::rational::serde_str")]
    lo: Rational,
    #[serde(with = "super::rational::serde_str")]
    hi: Rational,
}

impl Enclosure {
    /// Panics if `lo > hi`.
    pub fn new(lo: Rational, hi: Rational) -> Self {
        assert!(lo <= hi, "inverted enclosure [{lo}, {hi}]");
        Enclosure { lo, hi }
    }

    pub fn try_new(lo: Rational, hi: Rational) -> Option<Self> {
        (lo <= hi).then_some(Enclosure { lo, hi })
    }

    pub fn point(value: Rational) -> Self {
        Enclosure {
            lo: value.clone(),
            hi: value,
        }
    }

    pub fn zero() -> Self {
        Self::point(Rational::new())
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn into_bounds(self) -> (Rational, Rational) {
        (self.lo, self.hi)
    }

    pub fn width(&self) -> Rational {
        Rational::from(&self.hi - &self.lo)
    }

    pub fn mid(&self) -> Rational {
        Rational::from(&self.lo + &self.hi) / 2u32
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.lo <= *x && *x <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.lo.cmp0() != Ordering::Greater && self.hi.cmp0() != Ordering::Less
    }

    pub fn excludes_zero(&self) -> bool {
        !self.contains_zero()
    }

    /// `self ⊆ other`.
    pub fn is_subset_of(&self, other: &Enclosure) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn hull(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().min(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn intersect(&self, other: &Enclosure) -> Option<Enclosure> {
        Enclosure::try_new(
            self.lo.clone().max(other.lo.clone()),
            self.hi.clone().min(other.hi.clone()),
        )
    }

    /// Largest absolute value in the interval.
    pub fn mag(&self) -> Rational {
        Rational::from(self.lo.abs_ref()).max(Rational::from(self.hi.abs_ref()))
    }

    /// Smallest absolute value in the interval (0 if it straddles zero).
    pub fn mig(&self) -> Rational {
        if self.contains_zero() {
            Rational::new()
        } else {
            Rational::from(self.lo.abs_ref()).min(Rational::from(self.hi.abs_ref()))
        }
    }

    pub fn abs(&self) -> Enclosure {
        Enclosure {
            lo: self.mig(),
            hi: self.mag(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Enclosure {
        let a = Rational::from(&self.lo * k);
        let b = Rational::from(&self.hi * k);
        if k.cmp0() == Ordering::Less {
            Enclosure { lo: b, hi: a }
        } else {
            Enclosure { lo: a, hi: b }
        }
    }

    pub fn scale_int(&self, k: &Integer) -> Enclosure {
        self.scale(&Rational::from(k))
    }

    pub fn shift(&self, c: &Rational) -> Enclosure {
        Enclosure {
            lo: Rational::from(&self.lo + c),
            hi: Rational::from(&self.hi + c),
        }
    }

    /// Interval quotient; `None` when the divisor contains zero.
    pub fn checked_div(&self, rhs: &Enclosure) -> Option<Enclosure> {
        if rhs.contains_zero() {
            return None;
        }
        let inv = Enclosure {
            lo: Rational::from(rhs.hi.recip_ref()),
            hi: Rational::from(rhs.lo.recip_ref()),
        };
        Some(self * &inv)
    }

    pub fn recip(&self) -> Option<Enclosure> {
        Enclosure::point(Rational::from(1)).checked_div(self)
    }

    /// Rounds `lo` down and `hi` up to multiples of `2^-bits`.
    pub fn round_outward(&self, bits: u32) -> Enclosure {
        let scale = Integer::from(1) << bits;
        let lo = floor(&Rational::from(&self.lo * &scale));
        let hi = ceil(&Rational::from(&self.hi * &scale));
        Enclosure {
            lo: Rational::from((lo, scale.clone())),
            hi: Rational::from((hi, scale)),
        }
    }

    /// True when every point of `self` is strictly below every point of `other`.
    pub fn certainly_lt(&self, other: &Enclosure) -> bool {
        self.hi < other.lo
    }

    /// Enclosure of `max(a, b)` over both intervals.
    pub fn max(&self, other: &Enclosure) -> Enclosure {
        Enclosure {
            lo: self.lo.clone().max(other.lo.clone()),
            hi: self.hi.clone().max(other.hi.clone()),
        }
    }

    pub fn to_f64_mid(&self) -> f64 {
        self.mid().to_f64()
    }
}

impl fmt::Display for Enclosure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}]",
            format_rational(&self.lo),
            format_rational(&self.hi)
        )
    }
}

impl From<Rational> for Enclosure {
    fn from(r: Rational) -> Self {
        Enclosure::point(r)
    }
}

impl<'a> Add<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: &'a Enclosure) -> Enclosure {
        Enclosure {
            lo: Rational::from(&self.lo + &rhs.lo),
            hi: Rational::from(&self.hi + &rhs.hi),
        }
    }
}

impl<'a> Sub<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: &'a Enclosure) -> Enclosure {
        Enclosure {
            lo: Rational::from(&self.lo - &rhs.hi),
            hi: Rational::from(&self.hi - &rhs.lo),
        }
    }
}

impl<'a> Mul<&'a Enclosure> for &'a Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: &'a Enclosure) -> Enclosure {
        let products = [
            Rational::from(&self.lo * &rhs.lo),
            Rational::from(&self.lo * &rhs.hi),
            Rational::from(&self.hi * &rhs.lo),
            Rational::from(&self.hi * &rhs.hi),
        ];
        let mut lo = products[0].clone();
        let mut hi = products[0].clone();
        for p in &products[1..] {
            if *p < lo {
                lo = p.clone();
            }
            if *p > hi {
                hi = p.clone();
            }
        }
        Enclosure { lo, hi }
    }
}

impl Neg for &Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        Enclosure {
            lo: Rational::from(-&self.hi),
            hi: Rational::from(-&self.lo),
        }
    }
}

impl Add for Enclosure {
    type Output = Enclosure;
    fn add(self, rhs: Enclosure) -> Enclosure {
        &self + &rhs
    }
}

impl Sub for Enclosure {
    type Output = Enclosure;
    fn sub(self, rhs: Enclosure) -> Enclosure {
        &self - &rhs
    }
}

impl Mul for Enclosure {
    type Output = Enclosure;
    fn mul(self, rhs: Enclosure) -> Enclosure {
        &self * &rhs
    }
}

impl Neg for Enclosure {
    type Output = Enclosure;
    fn neg(self) -> Enclosure {
        -&self
    }
}
