use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::Serialize;

use super::{random_nonzero_vector, random_rational};
use crate::arith::rational::{format_rational, pow_i64};
use crate::forms::{apply_nested, FormsEngine, LinearForm, OperatorPoly};
use crate::series::functional_equation_residual;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityConfig {
    pub n_max: u32,
    pub l_max: u32,
    pub series_n: u32,
    pub seed: u64,
    /// Random instances for the shift and annihilation checks.
    pub random_trials: u32,
    /// Random points for the functional-equation check (unit vectors are
    /// always included).
    pub omega_samples: u32,
}

impl IdentityConfig {
    pub fn new(n_max: u32, l_max: u32, series_n: u32, seed: u64) -> Self {
        IdentityConfig {
            n_max,
            l_max,
            series_n,
            seed,
            random_trials: 50,
            omega_samples: 5,
        }
    }
}

/// First counterexample of a failed check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub spec: String,
    pub indices: String,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: String,
    pub domain: String,
    pub cases: u64,
    pub passed: bool,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityReport {
    pub config: IdentityConfig,
    pub checks: Vec<IdentityCheck>,
}

impl IdentityReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

struct Outcome {
    cases: u64,
    witness: Option<(String, String, String)>,
}

impl Outcome {
    fn from_results(results: Vec<Option<(String, String, String)>>) -> Outcome {
        Outcome {
            cases: results.len() as u64,
            witness: results.into_iter().flatten().next(),
        }
    }
}

fn forms_differ(
    idx: String,
    lhs: &LinearForm,
    rhs: &LinearForm,
) -> Option<(String, String, String)> {
    (lhs != rhs).then(|| (idx, lhs.to_string(), rhs.to_string()))
}

/// Runs every exact identity check. Failures are report entries, never errors.
pub fn check_identities(engine: &FormsEngine, config: IdentityConfig) -> IdentityReport {
    let spec_str = engine.spec().to_string();
    let d = engine.spec().d() as u32;
    let s = engine.spec().s_total();
    let l_lo = d.min(config.l_max);
    let mk = |name: &str, domain: String, o: Outcome| IdentityCheck {
        name: name.to_string(),
        domain,
        cases: o.cases,
        passed: o.witness.is_none(),
        witness: o.witness.map(|(indices, lhs, rhs)| Witness {
            spec: spec_str.clone(),
            indices,
            lhs,
            rhs,
        }),
    };

    let checks = vec![
        mk(
            "recurrence",
            format!("1 <= n <= {}; x0 coefficient for 0 <= n <= {}", config.n_max, config.n_max),
            recurrence(engine, config.n_max),
        ),
        mk(
            "operator_expansion",
            format!("0 <= l <= {}, Sl <= n <= Sl+10", config.l_max),
            operator_expansion(engine, config.l_max),
        ),
        mk(
            "shift",
            format!("{} seeded random instances, up to 4 factors", config.random_trials),
            shift(config.seed, config.random_trials),
        ),
        mk(
            "annihilation",
            format!(
                "{} seeded random (a, p), deg p <= 4, -10 <= n <= 10; Op(l, d) on u_n for {l_lo} <= l <= {}",
                config.random_trials, config.l_max
            ),
            annihilation(engine, config.seed, config.random_trials, config.l_max),
        ),
        mk(
            "main_relation",
            format!("{l_lo} <= l <= {}, Sl <= n <= Sl+10 (S = {s})", config.l_max),
            main_relation(engine, config.l_max),
        ),
        mk(
            "functional_equation",
            format!(
                "degree <= {}, unit vectors and {} seeded random omega",
                config.series_n, config.omega_samples
            ),
            functional_equation(engine, config.seed, config.omega_samples, config.series_n),
        ),
    ];
    IdentityReport { config, checks }
}

fn recurrence(engine: &FormsEngine, n_max: u32) -> Outcome {
    let spec = engine.spec();
    let dim = spec.dim();
    let mut prod = Rational::from(1);
    let mut cases = 0;
    for n in 0..=n_max {
        let v = engine.v_form(n);
        let mut rhs = engine.u_form(i64::from(n));
        if n == 0 {
            rhs.add_scaled(&LinearForm::unit(dim, 0), &Rational::from(1));
        } else {
            let p = spec.p_at_q_power(i64::from(n));
            rhs.add_scaled(&engine.v_form(n - 1), &p);
            prod *= p;
        }
        cases += 2;
        if let Some(w) = forms_differ(format!("n={n}"), &v, &rhs) {
            return Outcome {
                cases,
                witness: Some(w),
            };
        }
        if *v.x0() != prod {
            return Outcome {
                cases,
                witness: Some((
                    format!("n={n} (x0 coefficient)"),
                    format_rational(v.x0()),
                    format_rational(&prod),
                )),
            };
        }
    }
    Outcome {
        cases,
        witness: None,
    }
}

fn grid(engine: &FormsEngine, l_lo: u32, l_max: u32) -> Vec<(u32, u32)> {
    let s = engine.spec().s_total();
    (l_lo..=l_max)
        .flat_map(|l| (s * l..=s * l + 10).map(move |n| (l, n)))
        .collect()
}

fn operator_expansion(engine: &FormsEngine, l_max: u32) -> Outcome {
    let s = engine.spec().s_total();
    let results = grid(engine, 0, l_max)
        .into_par_iter()
        .map(|(l, n)| {
            let factors: Vec<Rational> = engine
                .operator_factors(l, 0)
                .into_iter()
                .flat_map(|(a, m)| std::iter::repeat_n(a, m as usize))
                .collect();
            let window: Vec<_> = (n - s * l..=n).map(|i| engine.v_form(i)).collect();
            let nested = apply_nested(&factors, &window);
            let expanded = engine.vl_form(l, n).expect("n >= Sl on the grid");
            forms_differ(format!("l={l},n={n}"), &expanded, &nested)
        })
        .collect();
    Outcome::from_results(results)
}

/// `D_{a_1} ... D_{a_r} (b^n xi(n)) = b^n D_{a_1/b} ... D_{a_r/b} (xi(n))`.
fn shift(seed: u64, trials: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0053_4849_4654);
    let mut results = Vec::new();
    for t in 0..trials {
        let r = rng.gen_range(1..=4usize);
        let a: Vec<Rational> = (0..r).map(|_| random_rational(&mut rng, true)).collect();
        let b = random_rational(&mut rng, true);
        let n: i64 = rng.gen_range(-5..=20);
        let xi: Vec<Rational> = (0..=r).map(|_| random_rational(&mut rng, false)).collect();
        let xi_at = |i: i64| xi[(i - (n - r as i64)) as usize].clone();

        let lhs_op = OperatorPoly::from_factors(a.iter().map(|x| (x, 1)));
        let lhs = lhs_op.apply_scalar(n, |i| pow_i64(&b, i) * xi_at(i));
        let a_over_b: Vec<Rational> = a.iter().map(|x| Rational::from(x / &b)).collect();
        let rhs_op = OperatorPoly::from_factors(a_over_b.iter().map(|x| (x, 1)));
        let rhs = pow_i64(&b, n) * rhs_op.apply_scalar(n, xi_at);
        results.push((lhs != rhs).then(|| {
            (
                format!("trial={t},n={n},b={}", format_rational(&b)),
                format_rational(&lhs),
                format_rational(&rhs),
            )
        }));
    }
    Outcome::from_results(results)
}

/// `(1 - aB)^{t+1}` kills `p(n) a^n` for `deg p <= t`, and `Op(l, d)` kills
/// `u_n` for `l >= d`.
fn annihilation(engine: &FormsEngine, seed: u64, trials: u32, l_max: u32) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x0041_4e4e_4948);
    let mut results = Vec::new();
    for trial in 0..trials {
        let a = random_rational(&mut rng, true);
        let t = rng.gen_range(0..=4u32);
        let deg = rng.gen_range(0..=t);
        let p: Vec<Rational> = (0..=deg)
            .map(|_| random_rational(&mut rng, false))
            .collect();
        let op = OperatorPoly::from_factors([(&a, t + 1)]);
        let seq = |n: i64| {
            let mut acc = Rational::new();
            for c in p.iter().rev() {
                acc *= n;
                acc += c;
            }
            acc * pow_i64(&a, n)
        };
        for n in -10..=10i64 {
            let v = op.apply_scalar(n, seq);
            results.push((v != 0).then(|| {
                (
                    format!("trial={trial},a={},t={t},n={n}", format_rational(&a)),
                    format_rational(&v),
                    "0".to_string(),
                )
            }));
        }
    }

    let spec = engine.spec();
    let d = spec.d() as u32;
    let zero = LinearForm::zero(spec.dim());
    for l in d..=l_max {
        let op = engine.operator_poly(l, i64::from(d));
        let top = i64::from(spec.s_total() * l) + 10;
        for n in -5..=top {
            let window: Vec<LinearForm> = (0..=op.degree() as i64)
                .map(|t| engine.u_form(n - t))
                .collect();
            let v = op.apply_forms(&window);
            results.push(forms_differ(format!("u_n, l={l},n={n}"), &v, &zero));
        }
    }
    Outcome::from_results(results)
}

fn main_relation(engine: &FormsEngine, l_max: u32) -> Outcome {
    let spec = engine.spec();
    let d = spec.d();
    let p = spec.poly().coeffs();
    let q = spec.q();
    let results = grid(engine, d as u32, l_max)
        .into_par_iter()
        .map(|(l, n)| {
            let lhs = engine.vl_form(l, n).expect("grid").scaled(&p[d]);
            let e = i64::from(n) + 1;
            let mut rhs = engine
                .apply_operator(l, d as i64, n + 1)
                .expect("grid")
                .scaled(&pow_i64(q, -(d as i64) * e));
            for nu in 1..=d {
                let k = Rational::from(-&p[d - nu]) * pow_i64(q, -(nu as i64) * e);
                rhs.add_scaled(&engine.apply_operator(l, nu as i64, n).expect("grid"), &k);
            }
            forms_differ(format!("l={l},n={n}"), &lhs, &rhs)
        })
        .collect();
    Outcome::from_results(results)
}

fn functional_equation(engine: &FormsEngine, seed: u64, samples: u32, series_n: u32) -> Outcome {
    let dim = engine.spec().dim();
    let mut points: Vec<Vec<Rational>> = (0..dim)
        .map(|i| LinearForm::unit(dim, i).coeffs().to_vec())
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x4655_4e43);
    for _ in 0..samples {
        points.push(random_nonzero_vector(&mut rng, dim));
    }
    // Residuals share the v cache; grow it once before fanning out.
    engine.v_form(series_n);
    let results = points
        .par_iter()
        .enumerate()
        .map(|(i, w)| {
            let res = functional_equation_residual(engine, &w[0], &w[1..], series_n);
            res.iter().position(|c| *c != 0).map(|deg| {
                let omega: Vec<String> = w.iter().map(format_rational).collect();
                (
                    format!("omega#{i}=[{}],degree={deg}", omega.join(", ")),
                    format_rational(&res[deg]),
                    "0".to_string(),
                )
            })
        })
        .collect();
    Outcome::from_results(results)
}
