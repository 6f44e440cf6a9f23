//! Helpers on top of GMP rationals.
//!
//! `rug::Rational` is always stored in lowest terms with a positive
//! denominator, so every value produced here is canonical.

use std::cmp::Ordering;

use rug::ops::Pow;
use rug::{Integer, Rational};

use crate::error::{Error, Result};

/// Builds `num/den` from machine integers. Panics on a zero denominator.
pub fn rat(num: i64, den: i64) -> Rational {
    assert!(den != 0, "zero denominator");
    Rational::from((num, den))
}

pub fn int(v: i64) -> Integer {
    Integer::from(v)
}

pub fn is_zero(r: &Rational) -> bool {
    r.cmp0() == Ordering::Equal
}

/// Parses `"num/den"` or `"num"` in base 10.
pub fn parse_rational(src: &str) -> Result<Rational> {
    let s = src.trim();
    if s.is_empty() {
        return Err(Error::Parse("empty rational literal".into()));
    }
    if let Some((n, d)) = s.split_once('/') {
        let n = parse_integer(n)?;
        let d = parse_integer(d)?;
        if d.cmp0() == Ordering::Equal {
            return Err(Error::Parse(format!("zero denominator in {src:?}")));
        }
        Ok(Rational::from((n, d)))
    } else {
        Ok(Rational::from(parse_integer(s)?))
    }
}

pub fn parse_integer(src: &str) -> Result<Integer> {
    let s = src.trim();
    let digits = s.strip_prefix(['-', '+']).unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::Parse(format!("not a base-10 integer: {src:?}")));
    }
    Integer::from_str_radix(s.trim_start_matches('+'), 10)
        .map_err(|e| Error::Parse(format!("{src:?}: {e}")))
}

/// Canonical string form: `"5/7"`, `"-13"` (denominator omitted when 1).
pub fn format_rational(r: &Rational) -> String {
    if *r.denom() == 1 {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `base^exp` for any integer exponent. Panics on `0^negative`.
pub fn pow_i64(base: &Rational, exp: i64) -> Rational {
    if exp >= 0 {
        let e = u32::try_from(exp).expect("exponent too large");
        Rational::from(base.pow(e))
    } else {
        assert!(!is_zero(base), "zero to a negative power");
        let e = u32::try_from(-exp).expect("exponent too large");
        let p = Rational::from(base.pow(e));
        p.recip()
    }
}

pub fn floor(r: &Rational) -> Integer {
    r.numer().clone().div_rem_floor(r.denom().clone()).0
}

pub fn ceil(r: &Rational) -> Integer {
    r.numer().clone().div_rem_ceil(r.denom().clone()).0
}

/// `n(n-1)...(n-k+1)`, i.e. `k! * binom(n, k)` for any integer `n`.
pub fn falling_factorial(n: i64, k: u32) -> Integer {
    let mut acc = Integer::from(1);
    for i in 0..i64::from(k) {
        acc *= n - i;
    }
    acc
}

pub fn max_abs<'a>(values: impl IntoIterator<Item = &'a Rational>) -> Rational {
    let mut best = Rational::new();
    for v in values {
        if v.cmp_abs(&best) == Ordering::Greater {
            best = Rational::from(v.abs_ref());
        }
    }
    best
}

/// Serde adapters writing rationals and integers as base-10 strings.
pub mod serde_str {
    use rug::{Integer, Rational};
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        super::parse_rational(&s).map_err(serde::de::Error::custom)
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for r in v {
                seq.serialize_element(&super::super::format_rational(r))?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| super::super::parse_rational(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }

    pub mod opt {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Option<Rational>, s: S) -> Result<S::Ok, S::Error> {
            match v {
                Some(r) => s.serialize_some(&super::super::format_rational(r)),
                None => s.serialize_none(),
            }
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<Rational>, D::Error> {
            Option::<String>::deserialize(d)?
                .map(|s| super::super::parse_rational(&s).map_err(serde::de::Error::custom))
                .transpose()
        }
    }

    pub mod integer {
        use super::*;

        pub fn serialize<S: Serializer>(v: &Integer, s: S) -> Result<S::Ok, S::Error> {
            s.serialize_str(&v.to_string())
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Integer, D::Error> {
            let s = String::deserialize(d)?;
            super::super::parse_integer(&s).map_err(serde::de::Error::custom)
        }
    }

    pub mod integer_vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(v: &[Integer], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(v.len()))?;
            for x in v {
                seq.serialize_element(&x.to_string())?;
            }
            seq.end()
        }

        pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Integer>, D::Error> {
            let v = Vec::<String>::deserialize(d)?;
            v.iter()
                .map(|s| super::super::parse_integer(s).map_err(serde::de::Error::custom))
                .collect()
        }
    }
}
