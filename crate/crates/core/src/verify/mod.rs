//! Batch checks of the exact identities, empirical growth and smallness
//! constants, and the non-vanishing window scan.

mod bounds;
mod identities;
mod nonvanish;

use rand::Rng;
use rug::Rational;

pub use bounds::{
    bounds_report, BoundsConfig, BoundsReport, HeightRow, SmallnessRow, SmallnessStatus,
};
pub use identities::{check_identities, IdentityCheck, IdentityConfig, IdentityReport, Witness};
pub use nonvanish::{nonvanishing_scan, NonvanishInput, NonvanishStatus, NonvanishingVerdict};

/// Random rational with numerator in `[-100, 100]` and denominator in `[1, 100]`.
pub fn random_rational<R: Rng>(rng: &mut R, nonzero: bool) -> Rational {
    loop {
        let num: i64 = rng.gen_range(-100..=100);
        if nonzero && num == 0 {
            continue;
        }
        let den: i64 = rng.gen_range(1..=100);
        return Rational::from((num, den));
    }
}

/// A random vector of length `len` that is not identically zero.
pub fn random_nonzero_vector<R: Rng>(rng: &mut R, len: usize) -> Vec<Rational> {
    loop {
        let v: Vec<Rational> = (0..len).map(|_| random_rational(rng, false)).collect();
        if v.iter().any(|r| r.cmp0() != std::cmp::Ordering::Equal) {
            return v;
        }
    }
}
