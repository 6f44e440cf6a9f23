//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use clap::Parser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rug::{Integer, Rational};

use qforms_cli::specfile::SpecFile;
use qforms_cli::{execute, Cli, Verdict};
use qforms_core::forms::FormsEngine;
use qforms_core::params::{measure_params, MeasureParams};
use qforms_core::probe::{certify_lower_bound, exponent_scan, CertifyConfig, ScanStrategy};
use qforms_core::series::{evaluate_form, functional_equation_residual};
use qforms_core::session::{PrecisionPolicy, Session};
use qforms_core::spec::{validate_spec, ProblemSpec};
use qforms_core::verify::{
    bounds_report, check_identities, nonvanishing_scan, random_nonzero_vector, BoundsConfig,
    IdentityConfig, NonvanishInput, NonvanishStatus, SmallnessStatus,
};
use qforms_core::Error;

type Check = Result<String, String>;

fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
}

fn load(name: &str) -> ProblemSpec {
    let file = SpecFile::load(&fixture_path(name)).expect("fixture loads");
    validate_spec(&file.to_raw().expect("fixture parses")).expect("fixture is valid")
}

fn fixtures() -> Vec<(&'static str, ProblemSpec)> {
    vec![
        ("FIX-A", load("fix_a.json")),
        ("FIX-B", load("fix_b.json")),
        ("FIX-C", load("fix_c.json")),
        ("FIX-D", load("fix_d.json")),
    ]
}

fn session(spec: ProblemSpec) -> Session {
    Session::new(spec, PrecisionPolicy::default())
}

fn params(spec: &ProblemSpec) -> MeasureParams {
    measure_params(spec, 64, 1 << 14).expect("decidable")
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, start: Instant, what: &str) -> Result<(), String> {
    let t = start.elapsed();
    ensure(t <= limit, || {
        format!("{what} took {t:.1?}, target {limit:?}")
    })
}

fn c1_identities() -> Check {
    let start = Instant::now();
    let mut cases = 0u64;
    for (name, spec) in fixtures() {
        let l_max = spec.d() as u32 + 3;
        let engine = FormsEngine::new(Arc::new(spec));
        let report = check_identities(&engine, IdentityConfig::new(100, l_max, 100, 1));
        for c in &report.checks {
            ensure(c.passed, || {
                format!("{name}: {} failed at {:?}", c.name, c.witness)
            })?;
            cases += c.cases;
        }
    }
    within(Duration::from_secs(60), start, "identity suite")?;
    Ok(format!(
        "{cases} exact cases, 0 failures, {:.1?}",
        start.elapsed()
    ))
}

fn c2_integrality() -> Check {
    let mut forms = 0u64;
    for (name, spec) in fixtures() {
        let s = spec.s_total();
        let engine = FormsEngine::new(Arc::new(spec));
        for l in 0..=6u32 {
            for n in s * l..=60 {
                let w = engine.w_form_unchecked(l, n).map_err(|e| e.to_string())?;
                ensure(w.coeffs().iter().all(|c| *c.denom() == 1), || {
                    format!("{name}: w_{{{l},{n}}} has a non-integer coefficient")
                })?;
                forms += 1;
            }
        }
    }
    let a = FormsEngine::new(Arc::new(load("fix_a.json")));
    let w = a.w_form(1, 2).map_err(|e| e.to_string())?;
    ensure(w.coeffs() == [Integer::from(14), Integer::from(23)], || {
        format!("FIX-A w_{{1,2}} = {}", w.to_rational())
    })?;
    Ok(format!(
        "{forms} forms integral; FIX-A w_{{1,2}} = 14 x0 + 23 x1"
    ))
}

fn c3_heights() -> Check {
    let s = session(load("fix_a.json"));
    let cfg = BoundsConfig {
        smallness: false,
        ..BoundsConfig::new((0..=5).collect(), (0..=200).collect(), 128, 1)
    };
    let r = bounds_report(&s, &cfg).map_err(|e| e.to_string())?;
    let kappa = r.fitted_kappa.clone().ok_or("no rows")?;
    ensure(kappa <= 10, || format!("kappa = {}", kappa.to_f64()))?;
    let row = r
        .heights
        .iter()
        .find(|h| h.l == 5 && h.n == 200)
        .ok_or("row (5, 200) missing")?;
    let log_h = row.log_height_q1.clone().ok_or("zero form")?;
    let ratio = log_h.scale(&Rational::from(row.main_term.recip_ref()));
    ensure(
        Rational::from(ratio.lo() * 5u32) >= 4 && Rational::from(ratio.hi() * 5u32) <= 6,
        || format!("ratio at (5, 200) = {ratio}"),
    )?;
    Ok(format!(
        "kappa = {:.4} over {} rows; ratio at (l,n)=(5,200) = {:.5}",
        kappa.to_f64(),
        r.heights.len(),
        ratio.to_f64_mid()
    ))
}

fn c4_smallness() -> Check {
    let s = session(load("fix_a.json"));
    let cfg = BoundsConfig {
        heights: false,
        ..BoundsConfig::new((0..=5).collect(), (0..=60).collect(), 256, 1)
    };
    let r = bounds_report(&s, &cfg).map_err(|e| e.to_string())?;
    // omega = (-f(1), 1) is the unit row of this one-value fixture.
    let rows: Vec<_> = r
        .smallness
        .iter()
        .filter(|row| row.omega.starts_with("unit"))
        .collect();
    ensure(!rows.is_empty(), || "no rows for omega = (-f(1), 1)".into())?;
    ensure(
        rows.iter()
            .all(|row| row.status == SmallnessStatus::Decided),
        || "undecided smallness rows".into(),
    )?;
    let c = rows
        .iter()
        .filter_map(|row| row.c_row.as_ref().map(|c| c.hi().clone()))
        .max()
        .ok_or("no decided rows")?;
    ensure(c <= 10, || format!("c = {}", c.to_f64()))?;

    let omega = s
        .omega_from_values(vec![Rational::from(1)], 256)
        .map_err(|e| e.to_string())?;
    let v = evaluate_form(
        &s.engine().vl_form(1, 2).map_err(|e| e.to_string())?,
        &omega,
    )
    .abs();
    ensure((v.to_f64_mid() - 0.008_572).abs() < 5e-7, || {
        format!("|v_{{1,2}}(omega)| = {v}")
    })?;
    Ok(format!(
        "c = {:.4} over {} rows; |v_{{1,2}}(omega)| = {:.7}",
        c.to_f64(),
        rows.len(),
        v.to_f64_mid()
    ))
}

fn c5_nonvanishing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut windows = 0u64;
    let mut undecided_values = 0u64;
    for (name, spec) in fixtures() {
        let s = session(spec);
        let st = s.spec().s_total();
        let dim = s.spec().dim();
        let mut inputs: Vec<NonvanishInput> = (0..100)
            .map(|_| NonvanishInput::Exact(random_nonzero_vector(&mut rng, dim)))
            .collect();
        for i in 0..dim - 1 {
            let mut unit = vec![Rational::new(); dim - 1];
            unit[i] = Rational::from(1);
            inputs.push(NonvanishInput::FromValues(unit));
        }
        for _ in 0..10 {
            inputs.push(NonvanishInput::FromValues(random_nonzero_vector(
                &mut rng,
                dim - 1,
            )));
        }
        for input in &inputs {
            for l0 in 0..=4u32 {
                for n0 in [st * l0, st * l0 + 7, st * l0 + 23] {
                    let v =
                        nonvanishing_scan(&s, input, l0, n0).map_err(|e| format!("{name}: {e}"))?;
                    match (v.status, input) {
                        (NonvanishStatus::Found, _) => {}
                        (NonvanishStatus::Undecided, NonvanishInput::FromValues(_)) => {
                            undecided_values += 1
                        }
                        _ => {
                            return Err(format!(
                                "{name}: {input:?}, l0={l0}, n0={n0}: {:?}",
                                v.status
                            ))
                        }
                    }
                    windows += 1;
                }
            }
        }
    }
    ensure(undecided_values == 0, || {
        format!("{undecided_values} undecided windows for f-value omega")
    })?;
    Ok(format!("{windows} windows certified nonzero, 0 undecided"))
}

fn c6_functional_equation() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut coeffs = 0usize;
    for (name, spec) in fixtures() {
        let engine = FormsEngine::new(Arc::new(spec));
        for _ in 0..20 {
            let w = random_nonzero_vector(&mut rng, engine.spec().dim());
            let r = functional_equation_residual(&engine, &w[0], &w[1..], 200);
            ensure(r.iter().all(|c| *c == 0), || {
                format!("{name}: nonzero residual for {w:?}")
            })?;
            coeffs += r.len();
        }
    }
    Ok(format!("{coeffs} residual coefficients, all exactly 0"))
}

fn c7_certificates() -> Check {
    let start = Instant::now();
    let mut count = 0u64;
    let mut max_attempts = 0;
    for name in ["fix_a.json", "fix_b.json"] {
        let s = session(load(name));
        let p = params(s.spec());
        let cfg = CertifyConfig::default();
        for a0 in -50i64..=50 {
            for a1 in -50i64..=50 {
                if a0 == 0 && a1 == 0 {
                    continue;
                }
                let a = [Integer::from(a0), Integer::from(a1)];
                let mut c = certify_lower_bound(&s, &p, &a, &cfg)
                    .map_err(|e| format!("{name} {a:?}: {e}"))?;
                c.refine_cross_check(&s, 512).map_err(|e| e.to_string())?;
                ensure(c.bound > 0 && c.is_sound_against_cross_check(), || {
                    format!("{name} {a:?}: bound {} vs {}", c.bound, c.cross_check)
                })?;
                ensure(c.cross_check.excludes_zero(), || {
                    format!("{name} {a:?}: |Lambda| straddles 0")
                })?;
                max_attempts = max_attempts.max(c.attempts);
                count += 1;
            }
        }
    }
    within(Duration::from_secs(600), start, "certificate grid")?;
    Ok(format!(
        "{count} certificates sound, max {max_attempts} l-values tried, {:.1?}",
        start.elapsed()
    ))
}

fn c8_exponent_scan() -> Check {
    let mut out = Vec::new();
    for (name, file, mu_ref) in [
        ("FIX-A", "fix_a.json", 1.618_034),
        ("FIX-B", "fix_b.json", 2.414_214),
    ] {
        let s = session(load(file));
        let p = params(s.spec());
        let r = exponent_scan(&s, &p, 10_000, ScanStrategy::Exhaustive, 128)
            .map_err(|e| e.to_string())?;
        ensure((r.mu.to_f64_mid() - mu_ref).abs() < 1e-6, || {
            format!("{name}: mu = {}", r.mu)
        })?;
        let max = r.max_observed_exponent.clone().ok_or("no rows")?;
        let limit = Rational::from(r.mu.lo() + 1u32);
        ensure(*max.hi() <= limit, || {
            format!("{name}: max exponent {max} > mu + 1")
        })?;
        ensure(
            r.rows.iter().all(|row| row.lambda_abs.excludes_zero()),
            || format!("{name}: a |Lambda| enclosure contains 0"),
        )?;
        let c_fit = r.c_fit.clone().ok_or_else(|| format!("{name}: no C_fit"))?;
        out.push(format!(
            "{name} max {:.4} <= mu + 1 = {:.4}, C_fit = {:.4}",
            max.hi().to_f64(),
            limit.to_f64(),
            c_fit.to_f64()
        ));
    }
    Ok(out.join("; "))
}

fn c9_applicability() -> Check {
    let gate = |q: (u32, u32)| {
        let text = format!(
            r#"{{"q":{{"num":"{}","den":"{}"}},"P":["0","1"],"points":[{{"alpha":"1","s":1}}]}}"#,
            q.0, q.1
        );
        let file = SpecFile::parse(&text).expect("spec text");
        validate_spec(&file.to_raw().expect("raw")).expect("valid")
    };
    let low = gate((3, 2));
    let pl = params(&low);
    ensure(!pl.applicable, || "q = 3/2 reported applicable".into())?;
    let gamma_ref = 2f64.ln() / 3f64.ln();
    ensure((pl.gamma.to_f64_mid() - gamma_ref).abs() < 1e-9, || {
        format!("gamma = {}", pl.gamma)
    })?;
    let inv_m = 1.0 / pl.m.to_f64_mid();
    ensure((inv_m - 0.381_966).abs() < 1e-6, || {
        format!("1/M = {inv_m}")
    })?;

    let high = gate((9, 2));
    let ph = params(&high);
    ensure(ph.applicable, || "q = 9/2 reported not applicable".into())?;
    let gamma_hi = 2f64.ln() / 9f64.ln();
    ensure((ph.gamma.to_f64_mid() - gamma_hi).abs() < 1e-9, || {
        format!("gamma = {}", ph.gamma)
    })?;

    let s = session(low);
    let one = [Integer::new(), Integer::from(1)];
    ensure(
        certify_lower_bound(&s, &pl, &one, &CertifyConfig::default()) == Err(Error::NotApplicable),
        || "certify did not refuse".into(),
    )?;
    ensure(
        exponent_scan(&s, &pl, 10, ScanStrategy::Exhaustive, 128) == Err(Error::NotApplicable),
        || "scan did not refuse".into(),
    )?;
    Ok(format!(
        "q=3/2: gamma {:.4} >= 1/M {:.4}, refused; q=9/2: gamma {:.4} applicable",
        pl.gamma.to_f64_mid(),
        inv_m,
        ph.gamma.to_f64_mid()
    ))
}

fn c10_determinism() -> Check {
    let spec = |n: &str| fixture_path(n).to_string_lossy().into_owned();
    let commands: Vec<Vec<String>> = vec![
        vec!["verify".into(), spec("fix_d.json")],
        vec![
            "bounds".into(),
            "--l".into(),
            "0..5".into(),
            "--n".into(),
            "0..60".into(),
            spec("fix_a.json"),
        ],
        vec![
            "nonvanish".into(),
            "--l0".into(),
            "3".into(),
            "--n0".into(),
            "10".into(),
            "--values".into(),
            "1".into(),
            spec("fix_a.json"),
        ],
        vec!["certify".into(), "--A=-23,14".into(), spec("fix_a.json")],
        vec![
            "scan".into(),
            "--hmax".into(),
            "10000".into(),
            spec("fix_b.json"),
        ],
        vec![
            "scan".into(),
            "--hmax".into(),
            "500".into(),
            "--random".into(),
            "40".into(),
            "--seed".into(),
            "7".into(),
            spec("fix_c.json"),
        ],
    ];
    for args in &commands {
        let mut payloads = Vec::new();
        for threads in ["1", "4"] {
            let argv = std::iter::once("qforms".to_string())
                .chain(["--threads".to_string(), threads.to_string()])
                .chain(args.iter().cloned());
            let cli = Cli::try_parse_from(argv).map_err(|e| e.to_string())?;
            let out = execute(&cli);
            ensure(out.report.verdict != Verdict::Usage, || {
                format!("{args:?}: {:?}", out.report.errors)
            })?;
            payloads.push((out.report.verdict, out.report.payload_json()));
        }
        ensure(payloads[0] == payloads[1], || {
            format!("{args:?}: payloads differ")
        })?;
    }
    Ok(format!(
        "{} commands byte-identical for --threads 1 and 4",
        commands.len()
    ))
}

type Criterion = (&'static str, fn() -> Check);

fn main() {
    let criteria: [Criterion; 10] = [
        ("exact identity suite", c1_identities),
        ("integrality of w_{l,n}", c2_integrality),
        ("height growth", c3_heights),
        ("smallness", c4_smallness),
        ("non-vanishing windows", c5_nonvanishing),
        ("functional equation", c6_functional_equation),
        ("certificates", c7_certificates),
        ("exponent scan vs mu", c8_exponent_scan),
        ("applicability gate", c9_applicability),
        ("determinism and thread invariance", c10_determinism),
    ];
    // Keep panic output out of the PASS/FAIL listing.
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (title, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            Err(format!("panicked: {msg}"))
        });
        let t = start.elapsed();
        match result {
            Ok(detail) => println!("PASS criterion {:>2} ({title}): {detail} [{t:.1?}]", i + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL criterion {:>2} ({title}): {detail} [{t:.1?}]", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
