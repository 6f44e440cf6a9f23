use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use crate::arith::elementary::{ln, sqrt};
use crate::arith::rational::{ceil, floor};
use crate::arith::Enclosure;
use crate::error::{Error, Result};
use crate::params::MeasureParams;
use crate::session::Session;

const LOG_BITS: u32 = 48;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ScanStrategy {
    /// Every height class `2..=H_max`; only for `1 + dS <= 3`.
    Exhaustive,
    /// `samples` uniform draws from each shell of a geometric height schedule.
    Random { samples: u32, seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScanRow {
    pub h: u64,
    #[serde(with = "crate::arith::rational::serde_str::integer_vec")]
    pub best_a: Vec<Integer>,
    pub lambda_abs: Enclosure,
    /// `-log |Lambda| / log H`.
    pub empirical_exponent: Enclosure,
    /// Number of value vectors examined in this class.
    pub candidates: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExponentScanReport {
    pub strategy: ScanStrategy,
    pub h_max: u64,
    pub precision_bits: u32,
    pub rows: Vec<ScanRow>,
    pub mu: Enclosure,
    pub max_observed_exponent: Option<Enclosure>,
    /// Least `C` with `exponent <= mu + C / sqrt(ln H)` on every row
    /// (upper endpoint; may be negative).
    #[serde(with = "crate::arith::rational::serde_str::opt")]
    pub c_fit: Option<Rational>,
}

/// Minimal `|Lambda(A)|` per height class `H = max(max |A_{j,k,sigma}|, 2)`,
/// with `A_0` taken among the integers nearest to `-sum A f`.
pub fn exponent_scan(
    session: &Session,
    params: &MeasureParams,
    h_max: u64,
    strategy: ScanStrategy,
    precision_bits: u32,
) -> Result<ExponentScanReport> {
    let spec = session.spec();
    let mu = params.mu.clone().ok_or(Error::NotApplicable)?;
    if h_max < 2 {
        return Err(Error::InvalidArgument(format!(
            "H_max must be at least 2, got {h_max}"
        )));
    }
    let dim = spec.dim();
    let heights: Vec<u64> = match strategy {
        ScanStrategy::Exhaustive => {
            if dim > 3 {
                return Err(Error::DimensionTooLargeForExhaustive { dim });
            }
            (2..=h_max).collect()
        }
        ScanStrategy::Random { .. } => geometric_heights(h_max),
    };
    // Warm the shared table once so workers only read it.
    session.values(precision_bits)?;

    let rows = heights
        .par_iter()
        .map(|&h| {
            let vectors = match strategy {
                ScanStrategy::Exhaustive => shell(spec.value_count(), h),
                ScanStrategy::Random { samples, seed } => {
                    sample_shell(spec.value_count(), h, samples, seed)
                }
            };
            scan_class(session, h, &vectors, precision_bits)
        })
        .collect::<Result<Vec<_>>>()?;

    let max_observed_exponent = rows
        .iter()
        .map(|r| r.empirical_exponent.clone())
        .reduce(|a, b| a.max(&b));
    let c_fit = rows
        .iter()
        .map(|r| {
            let ln_h = ln(&Rational::from(r.h), LOG_BITS);
            let root = Enclosure::new(
                sqrt(ln_h.lo(), LOG_BITS).lo().clone(),
                sqrt(ln_h.hi(), LOG_BITS).hi().clone(),
            );
            (&r.empirical_exponent - &mu) * root
        })
        .map(|e| e.hi().clone())
        .max();
    Ok(ExponentScanReport {
        strategy,
        h_max,
        precision_bits,
        rows,
        mu,
        max_observed_exponent,
        c_fit,
    })
}

/// `2, 2^{5/4}, 2^{6/4}, ...` rounded and deduplicated, ending at `H_max`.
fn geometric_heights(h_max: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut k = 4u32;
    loop {
        let h = 2f64.powf(f64::from(k) / 4.0).round() as u64;
        if h >= h_max {
            break;
        }
        if out.last() != Some(&h) {
            out.push(h);
        }
        k += 1;
    }
    out.push(h_max);
    out
}

/// Nonzero integer vectors of length `len` with `max |a_i| = h`; for `h = 2`
/// all nonzero vectors with `max |a_i| <= 2`. Lexicographic order.
fn shell(len: usize, h: u64) -> Vec<Vec<i64>> {
    let h = h as i64;
    let mut out = Vec::new();
    let mut cur = vec![-h; len];
    loop {
        let m = cur.iter().map(|x| x.abs()).max().unwrap_or(0);
        if m == h || (h == 2 && m > 0) {
            out.push(cur.clone());
        }
        let mut i = len;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if cur[i] < h {
                cur[i] += 1;
                break;
            }
            cur[i] = -h;
        }
    }
}

/// Uniform samples from `{max |a_i| = h}`: pin a random coordinate to
/// `+-h`, draw the rest uniformly, and accept with probability
/// `1 / #{i : |a_i| = h}`.
fn sample_shell(len: usize, h: u64, samples: u32, seed: u64) -> Vec<Vec<i64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ h.wrapping_mul(0x9E37_79B9_7F4A_7C15));
    let h = h as i64;
    let mut out = Vec::with_capacity(samples as usize);
    while out.len() < samples as usize {
        let mut v: Vec<i64> = (0..len).map(|_| rng.gen_range(-h..=h)).collect();
        let i = rng.gen_range(0..len);
        v[i] = if rng.gen_bool(0.5) { h } else { -h };
        let count = v.iter().filter(|x| x.abs() == h).count() as u32;
        if count == 1 || rng.gen_range(0..count) == 0 {
            out.push(v);
        }
    }
    out
}

fn scan_class(session: &Session, h: u64, vectors: &[Vec<i64>], start_bits: u32) -> Result<ScanRow> {
    let mut best: Option<(Enclosure, Vec<Integer>)> = None;
    for v in vectors {
        let rest: Vec<Rational> = v.iter().map(|&x| Rational::from(x)).collect();
        let (lambda, a) = best_a0(session, &rest, start_bits)?;
        let better = match &best {
            None => true,
            Some((b, ba)) => match lambda.hi().cmp(b.hi()) {
                std::cmp::Ordering::Less => true,
                std::cmp::Ordering::Equal => a < *ba,
                std::cmp::Ordering::Greater => false,
            },
        };
        if better {
            best = Some((lambda, a));
        }
    }
    let (lambda_abs, best_a) = best.expect("every height class is nonempty");
    let ln_l = Enclosure::new(
        ln(&lambda_abs.mig(), LOG_BITS).lo().clone(),
        ln(&lambda_abs.mag(), LOG_BITS).hi().clone(),
    );
    let ln_h = ln(&Rational::from(h), LOG_BITS);
    let empirical_exponent = (-ln_l).checked_div(&ln_h).expect("ln H > 0 for H >= 2");
    Ok(ScanRow {
        h,
        best_a,
        lambda_abs,
        empirical_exponent,
        candidates: vectors.len() as u64,
    })
}

/// Best `A_0` for fixed value coordinates, escalating precision until every
/// candidate `|Lambda|` enclosure excludes zero.
fn best_a0(
    session: &Session,
    rest: &[Rational],
    start_bits: u32,
) -> Result<(Enclosure, Vec<Integer>)> {
    for bits in session.policy().ladder(start_bits) {
        let s = session.values(bits)?.combine(rest);
        let lo = floor(&Rational::from(-s.hi()));
        let hi = ceil(&Rational::from(-s.lo()));
        let mut best: Option<(Enclosure, Integer)> = None;
        let mut straddles = false;
        let mut a0 = lo;
        while a0 <= hi {
            let lambda = s.shift(&Rational::from(&a0)).abs();
            if lambda.mig() == 0 {
                straddles = true;
                break;
            }
            if best.as_ref().is_none_or(|(b, _)| lambda.hi() < b.hi()) {
                best = Some((lambda, a0.clone()));
            }
            a0 += 1;
        }
        if !straddles {
            let (lambda, a0) = best.expect("at least one candidate A_0");
            let a = std::iter::once(a0)
                .chain(rest.iter().map(|r| r.numer().clone()))
                .collect();
            return Ok((lambda, a));
        }
    }
    Err(Error::PrecisionCapExceeded {
        cap: session.policy().cap_bits,
        what: format!("|Lambda| straddles 0 for value coordinates {rest:?}"),
    })
}
