use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::{Integer, Rational};
use serde::Serialize;

use super::random_nonzero_vector;
use crate::arith::elementary::log_base;
use crate::arith::rational::{format_rational, max_abs};
use crate::arith::Enclosure;
use crate::error::Result;
use crate::series::{evaluate_form, OmegaVector};
use crate::session::Session;

/// Precision of the logarithms reported in rows.
const LOG_BITS: u32 = 48;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsConfig {
    pub l_list: Vec<u32>,
    pub n_list: Vec<u32>,
    /// Starting precision for series values in smallness rows.
    pub precision_bits: u32,
    pub seed: u64,
    pub heights: bool,
    pub smallness: bool,
}

impl BoundsConfig {
    pub fn new(l_list: Vec<u32>, n_list: Vec<u32>, precision_bits: u32, seed: u64) -> Self {
        BoundsConfig {
            l_list,
            n_list,
            precision_bits,
            seed,
            heights: true,
            smallness: true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HeightRow {
    pub l: u32,
    pub n: u32,
    /// Bit length of the exact height of `w_{l,n}`.
    pub height_bits: u32,
    /// `log_{|q1|} H(w_{l,n})`; `None` for the zero form.
    pub log_height_q1: Option<Enclosure>,
    /// `d n^2 / 2 + S l^2 / 2`.
    #[serde(with = "crate::arith::rational::serde_str")]
    pub main_term: Rational,
    /// `(log_height_q1 - main_term) / (n + 1)`.
    pub residual_per_n: Option<Enclosure>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum SmallnessStatus {
    Decided,
    Undecided,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SmallnessRow {
    pub omega: String,
    pub l: u32,
    pub n: u32,
    /// `log_{|q|} |v_{l,n}(omega)|`.
    pub log_v_omega_q: Option<Enclosure>,
    /// `-l n + (S - eps0/d) l^2 / 2`.
    #[serde(with = "crate::arith::rational::serde_str")]
    pub bound_exponent: Rational,
    /// `(log_v_omega_q - log_{|q|} max|omega| - bound_exponent) / (n + 1)`.
    pub c_row: Option<Enclosure>,
    pub status: SmallnessStatus,
    pub precision_bits: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub heights: Vec<HeightRow>,
    /// Max over rows of the upper endpoint of `|residual_per_n|`.
    #[serde(with = "crate::arith::rational::serde_str::opt")]
    pub fitted_kappa: Option<Rational>,
    pub smallness: Vec<SmallnessRow>,
    /// Max over decided rows of the upper endpoint of `c_row`.
    #[serde(with = "crate::arith::rational::serde_str::opt")]
    pub fitted_c: Option<Rational>,
    pub undecided_rows: usize,
}

fn log_abs(v: &Enclosure, base: &Rational) -> Enclosure {
    let lo = log_base(&v.mig(), base, LOG_BITS);
    let hi = log_base(&v.mag(), base, LOG_BITS);
    Enclosure::new(lo.lo().clone(), hi.hi().clone())
}

fn log_int(x: &Integer, base: &Rational) -> Enclosure {
    log_base(&Rational::from(x), base, LOG_BITS)
}

fn pairs(spec_s: u32, config: &BoundsConfig) -> Vec<(u32, u32)> {
    let mut out: Vec<(u32, u32)> = config
        .l_list
        .iter()
        .flat_map(|&l| config.n_list.iter().map(move |&n| (l, n)))
        .filter(|&(l, n)| n >= spec_s * l)
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Height and smallness rows over the `(l, n)` grid (pairs with `n < S l`
/// are skipped). Rows are computed in parallel and reported sorted.
pub fn bounds_report(session: &Session, config: &BoundsConfig) -> Result<BoundsReport> {
    let spec = session.spec();
    let engine = session.engine();
    let grid = pairs(spec.s_total(), config);
    if let Some(&(_, n)) = grid.iter().max_by_key(|p| p.1) {
        engine.v_form(n);
    }
    let d = Rational::from(spec.d() as u64);
    let s = Rational::from(spec.s_total());
    let q1_abs = Rational::from(spec.q1().abs_ref());
    let q_abs = Rational::from(spec.q().abs_ref());

    let heights: Vec<HeightRow> = if config.heights {
        grid.par_iter()
            .map(|&(l, n)| -> Result<HeightRow> {
                let w = engine.w_form(l, n)?;
                let h = w.height();
                let n2 = Rational::from(u64::from(n) * u64::from(n));
                let l2 = Rational::from(u64::from(l) * u64::from(l));
                let main_term = (Rational::from(&d * &n2) + Rational::from(&s * &l2)) / 2u32;
                let log = (h != 0).then(|| log_int(&h, &q1_abs));
                let residual = log.as_ref().map(|lg| {
                    lg.shift(&Rational::from(-&main_term))
                        .scale(&Rational::from((1, n + 1)))
                });
                Ok(HeightRow {
                    l,
                    n,
                    height_bits: h.significant_bits(),
                    log_height_q1: log,
                    main_term,
                    residual_per_n: residual,
                })
            })
            .collect::<Result<_>>()?
    } else {
        Vec::new()
    };
    let fitted_kappa = heights
        .iter()
        .filter_map(|r| r.residual_per_n.as_ref().map(Enclosure::mag))
        .max();

    let smallness = if config.smallness {
        let mut omegas: Vec<(String, Vec<Rational>)> = (0..spec.value_count())
            .map(|i| {
                let mut v = vec![Rational::new(); spec.value_count()];
                v[i] = Rational::from(1);
                let slot = spec.slots()[i];
                (
                    format!("unit x_{{{},{},{}}}", slot.j, slot.k, slot.sigma),
                    v,
                )
            })
            .collect();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let random = random_nonzero_vector(&mut rng, spec.value_count());
        let label: Vec<String> = random.iter().map(format_rational).collect();
        omegas.push((format!("random [{}]", label.join(", ")), random));

        let jobs: Vec<(usize, u32, u32)> = (0..omegas.len())
            .flat_map(|i| grid.iter().map(move |&(l, n)| (i, l, n)))
            .collect();
        jobs.par_iter()
            .map(|&(i, l, n)| {
                smallness_row(session, &omegas[i], l, n, config.precision_bits, &q_abs)
            })
            .collect::<Result<Vec<_>>>()?
    } else {
        Vec::new()
    };
    let fitted_c = smallness
        .iter()
        .filter_map(|r| r.c_row.as_ref().map(|c| c.hi().clone()))
        .max();
    let undecided_rows = smallness
        .iter()
        .filter(|r| r.status == SmallnessStatus::Undecided)
        .count();
    Ok(BoundsReport {
        heights,
        fitted_kappa,
        smallness,
        fitted_c,
        undecided_rows,
    })
}

fn smallness_row(
    session: &Session,
    (label, rest): &(String, Vec<Rational>),
    l: u32,
    n: u32,
    start_bits: u32,
    q_abs: &Rational,
) -> Result<SmallnessRow> {
    let spec = session.spec();
    let vl = session.engine().vl_form(l, n)?;
    let s = Rational::from(spec.s_total());
    let eps_over_d = Rational::from((u32::from(spec.eps0()), spec.d() as u32));
    let l2 = Rational::from(u64::from(l) * u64::from(l));
    let bound_exponent =
        Rational::from(-(i64::from(l) * i64::from(n))) + (s - eps_over_d) * l2 / 2u32;

    // Cancellation in v_{l,n}(omega) costs about as many bits as the x0
    // coefficient has, plus the size of the result.
    let x0_bits =
        vl.x0().numer().significant_bits() as i64 - vl.x0().denom().significant_bits() as i64;
    let q_bits =
        q_abs.numer().significant_bits() as i64 - q_abs.denom().significant_bits() as i64 + 1;
    let want = x0_bits.max(0) + (i64::from(l) * i64::from(n) * q_bits) + 64;
    let start = start_bits.max(u32::try_from(want).unwrap_or(u32::MAX));
    let tight = Rational::from((1, 1u32 << 20));

    let mut decided = None;
    let mut used = start;
    for bits in session.policy().ladder(start) {
        used = bits;
        let omega = OmegaVector::from_values(rest.clone(), &*session.values(bits)?);
        let v = evaluate_form(&vl, &omega);
        let mig = v.mig();
        if mig != 0 {
            let done = Rational::from(&v.mag() - &mig) <= Rational::from(&mig * &tight);
            decided = Some(v);
            if done {
                break;
            }
        }
    }
    let Some(v) = decided else {
        return Ok(SmallnessRow {
            omega: label.clone(),
            l,
            n,
            log_v_omega_q: None,
            bound_exponent,
            c_row: None,
            status: SmallnessStatus::Undecided,
            precision_bits: used,
        });
    };
    let log_v = log_abs(&v, q_abs);
    let log_max = log_base(&max_abs(rest), q_abs, LOG_BITS);
    let c_row = (&log_v - &log_max)
        .shift(&Rational::from(-&bound_exponent))
        .scale(&Rational::from((1, n + 1)));
    Ok(SmallnessRow {
        omega: label.clone(),
        l,
        n,
        log_v_omega_q: Some(log_v),
        bound_exponent,
        c_row: Some(c_row),
        status: SmallnessStatus::Decided,
        precision_bits: used,
    })
}
