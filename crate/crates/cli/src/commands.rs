use std::fmt::Write as _;

use rug::{Integer, Rational};
use serde_json::{json, Value};

use qforms_core::arith::rational::{format_rational, parse_integer, parse_rational};
use qforms_core::arith::Enclosure;
use qforms_core::params::{a_enclosure, clearing_denominator, measure_params, MeasureParams};
use qforms_core::probe::{
    certify_lower_bound, exponent_scan, CertifyConfig, ExponentScanReport, ScanStrategy,
};
use qforms_core::session::Session;
use qforms_core::spec::{validate_spec, ProblemSpec};
use qforms_core::verify::{
    bounds_report, check_identities, nonvanishing_scan, BoundsConfig, BoundsReport, IdentityConfig,
    NonvanishInput, NonvanishStatus, SmallnessStatus,
};
use qforms_core::Error;

use crate::args::{parse_index_list, Command};
use crate::report::{error_verdict, ErrorEntry, Verdict};
use crate::specfile::SpecFile;

pub(crate) struct Output {
    pub verdict: Verdict,
    pub payload: Value,
    pub errors: Vec<ErrorEntry>,
    pub csv: Option<String>,
}

impl Output {
    fn ok(verdict: Verdict, payload: Value) -> Self {
        Output {
            verdict,
            payload,
            errors: Vec::new(),
            csv: None,
        }
    }

    fn error(e: &Error) -> Self {
        Output {
            verdict: error_verdict(e),
            payload: Value::Null,
            errors: vec![e.into()],
            csv: None,
        }
    }

    pub fn usage(msg: impl Into<String>) -> Self {
        Output {
            verdict: Verdict::Usage,
            payload: Value::Null,
            errors: vec![ErrorEntry::usage(msg)],
            csv: None,
        }
    }
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub(crate) fn dispatch(cmd: &Command, file: &SpecFile) -> Output {
    let spec = file.to_raw().and_then(|raw| validate_spec(&raw));
    if let Command::Validate(_) = cmd {
        return validate(spec);
    }
    let spec = match spec {
        Ok(s) => s,
        Err(e) => {
            let mut out = Output::error(&e);
            out.verdict = Verdict::Usage;
            return out;
        }
    };
    let policy = match file.policy() {
        Ok(p) => p,
        Err(msg) => return Output::usage(msg),
    };
    let session = Session::new(spec, policy);
    let result = match cmd {
        Command::Validate(_) => unreachable!("handled above"),
        Command::Params(_) => params(&session, file),
        Command::Forms { l, n, .. } => forms(&session, *l, *n),
        Command::Verify {
            n_max,
            l_max,
            series_n,
            seed,
            ..
        } => verify(&session, *n_max, *l_max, *series_n, *seed),
        Command::Bounds {
            l,
            n,
            seed,
            no_heights,
            no_smallness,
            kappa_max,
            c_max,
            ..
        } => (|| {
            let config = BoundsConfig {
                heights: !no_heights,
                smallness: !no_smallness,
                ..BoundsConfig::new(
                    parse_index_list(l).map_err(Usage)?,
                    parse_index_list(n).map_err(Usage)?,
                    file.precision_bits,
                    *seed,
                )
            };
            let limits = (parse_limit(kappa_max)?, parse_limit(c_max)?);
            bounds(&session, &config, limits)
        })(),
        Command::Nonvanish {
            l0,
            n0,
            omega,
            values,
            ..
        } => (|| {
            let input = match (omega, values) {
                (Some(o), None) => NonvanishInput::Exact(parse_rationals(o)?),
                (None, Some(v)) => NonvanishInput::FromValues(parse_rationals(v)?),
                _ => return Err(Usage("give exactly one of --omega and --values".into()).into()),
            };
            nonvanish(&session, &input, *l0, *n0)
        })(),
        Command::Certify { a, l, .. } => (|| {
            let a = parse_integers(a)?;
            certify(&session, file, &a, *l)
        })(),
        Command::Scan {
            hmax,
            random,
            seed,
            slack,
            ..
        } => (|| {
            let strategy = match random {
                Some(samples) => ScanStrategy::Random {
                    samples: *samples,
                    seed: *seed,
                },
                None => ScanStrategy::Exhaustive,
            };
            let slack = parse_limit(slack)?;
            scan(&session, file, *hmax, strategy, &slack)
        })(),
    };
    result.unwrap_or_else(|e| match e {
        Failure::Usage(Usage(msg)) => Output::usage(msg),
        Failure::Core(e) => Output::error(&e),
    })
}

struct Usage(String);

enum Failure {
    Usage(Usage),
    Core(Error),
}

impl From<Usage> for Failure {
    fn from(u: Usage) -> Self {
        Failure::Usage(u)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

type Res = std::result::Result<Output, Failure>;

fn parse_limit(s: &str) -> Result<Rational, Usage> {
    parse_rational(s).map_err(|e| Usage(e.to_string()))
}

fn parse_rationals(s: &str) -> Result<Vec<Rational>, Usage> {
    s.split(',')
        .map(|x| parse_rational(x).map_err(|e| Usage(e.to_string())))
        .collect()
}

fn parse_integers(s: &str) -> Result<Vec<Integer>, Usage> {
    s.split(',')
        .map(|x| parse_integer(x).map_err(|e| Usage(e.to_string())))
        .collect()
}

fn spec_summary(spec: &ProblemSpec) -> Value {
    json!({
        "display": spec.to_string(),
        "d": spec.d(),
        "m": spec.m(),
        "s_total": spec.s_total(),
        "dim": spec.dim(),
    })
}

fn validate(spec: qforms_core::Result<ProblemSpec>) -> Output {
    match spec {
        Ok(spec) => Output::ok(
            Verdict::Pass,
            json!({ "valid": true, "spec": spec_summary(&spec) }),
        ),
        Err(e) => Output {
            verdict: Verdict::Fail,
            payload: json!({ "valid": false }),
            errors: vec![(&e).into()],
            csv: None,
        },
    }
}

fn measure(session: &Session, file: &SpecFile) -> qforms_core::Result<MeasureParams> {
    measure_params(
        session.spec(),
        file.precision_bits,
        session.policy().cap_bits,
    )
}

fn params(session: &Session, file: &SpecFile) -> Res {
    let spec = session.spec();
    let p = measure(session, file)?;
    let a = p.applicable.then(|| a_enclosure(spec, &p, 64));
    let payload = json!({
        "spec": spec_summary(spec),
        "params": to_value(&p),
        "a": a,
        "clearing_denominator": clearing_denominator(spec).to_string(),
    });
    Ok(Output::ok(Verdict::Pass, payload))
}

fn forms(session: &Session, l: u32, n: u32) -> Res {
    let e = session.engine();
    let spec = session.spec();
    let vl = e.vl_form(l, n)?;
    let w = e.w_form(l, n)?;
    let u = e.u_form(i64::from(n));
    let v = e.v_form(n);
    let payload = json!({
        "l": l,
        "n": n,
        "u": to_value(&u.to_json(spec)),
        "v": to_value(&v.to_json(spec)),
        "v_l": to_value(&vl.to_json(spec)),
        "w": to_value(&w.to_json(spec)),
        "w_scale": e.w_scale(l, n).to_string(),
        "heights": {
            "u": format_rational(&u.height()),
            "v": format_rational(&v.height()),
            "v_l": format_rational(&vl.height()),
            "w": w.height().to_string(),
        },
    });
    Ok(Output::ok(Verdict::Pass, payload))
}

fn verify(session: &Session, n_max: u32, l_max: Option<u32>, series_n: u32, seed: u64) -> Res {
    let l_max = l_max.unwrap_or(session.spec().d() as u32 + 3);
    let report = check_identities(
        session.engine(),
        IdentityConfig::new(n_max, l_max, series_n, seed),
    );
    let verdict = if report.all_passed() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Output::ok(verdict, to_value(&report)))
}

fn bounds(
    session: &Session,
    config: &BoundsConfig,
    (kappa_max, c_max): (Rational, Rational),
) -> Res {
    let report = bounds_report(session, config)?;
    let over = |v: &Option<Rational>, max: &Rational| v.as_ref().is_some_and(|x| x > max);
    let mut errors = Vec::new();
    if over(&report.fitted_kappa, &kappa_max) {
        errors.push(ErrorEntry::check(format!(
            "fitted kappa exceeds {}",
            format_rational(&kappa_max)
        )));
    }
    if over(&report.fitted_c, &c_max) {
        errors.push(ErrorEntry::check(format!(
            "fitted c exceeds {}",
            format_rational(&c_max)
        )));
    }
    let verdict = if !errors.is_empty() {
        Verdict::Fail
    } else if report.undecided_rows > 0 {
        Verdict::Undecided
    } else {
        Verdict::Pass
    };
    Ok(Output {
        verdict,
        payload: to_value(&report),
        errors,
        csv: Some(bounds_csv(&report)),
    })
}

fn nonvanish(session: &Session, input: &NonvanishInput, l0: u32, n0: u32) -> Res {
    let v = nonvanishing_scan(session, input, l0, n0)?;
    let verdict = match v.status {
        NonvanishStatus::Found => Verdict::Pass,
        NonvanishStatus::Undecided => Verdict::Undecided,
        NonvanishStatus::AllZero => Verdict::Fail,
    };
    Ok(Output::ok(verdict, to_value(&v)))
}

fn certify(session: &Session, file: &SpecFile, a: &[Integer], l: Option<u32>) -> Res {
    let p = measure(session, file)?;
    let config = CertifyConfig {
        l_override: l,
        retry_cap: file.caps.retry_cap,
        cross_check_bits: file.precision_bits,
    };
    let mut cert = certify_lower_bound(session, &p, a, &config)?;
    if !cert.is_sound_against_cross_check() {
        let bits = file
            .precision_bits
            .saturating_mul(4)
            .min(session.policy().cap_bits);
        cert.refine_cross_check(session, bits)?;
    }
    let mut errors = Vec::new();
    if cert.bound <= 0 {
        errors.push(ErrorEntry::check("bound is not positive"));
    }
    if !cert.is_sound_against_cross_check() {
        errors.push(ErrorEntry::check(
            "bound exceeds the lower end of the cross-check enclosure",
        ));
    }
    let verdict = if errors.is_empty() {
        Verdict::Pass
    } else {
        Verdict::Fail
    };
    Ok(Output {
        verdict,
        payload: to_value(&cert),
        errors,
        csv: None,
    })
}

fn scan(
    session: &Session,
    file: &SpecFile,
    hmax: u64,
    strategy: ScanStrategy,
    slack: &Rational,
) -> Res {
    let p = measure(session, file)?;
    let report = exponent_scan(session, &p, hmax, strategy, file.precision_bits)?;
    let mut errors = Vec::new();
    if report.rows.iter().any(|r| !r.lambda_abs.excludes_zero()) {
        errors.push(ErrorEntry::check("a |Lambda| enclosure contains 0"));
    }
    let mut verdict = Verdict::Pass;
    if let Some(max) = &report.max_observed_exponent {
        let lo_limit = Rational::from(report.mu.lo() + slack);
        let hi_limit = Rational::from(report.mu.hi() + slack);
        if *max.lo() > hi_limit {
            errors.push(ErrorEntry::check(format!(
                "max observed exponent exceeds mu + {}",
                format_rational(slack)
            )));
        } else if *max.hi() > lo_limit {
            verdict = Verdict::Undecided;
        }
    }
    if !errors.is_empty() {
        verdict = Verdict::Fail;
    }
    Ok(Output {
        verdict,
        payload: to_value(&report),
        errors,
        csv: Some(scan_csv(&report)),
    })
}

fn f64_of(r: &Rational) -> String {
    format!("{:e}", r.to_f64())
}

fn enc_cols(e: Option<&Enclosure>) -> String {
    match e {
        Some(e) => format!("{},{}", f64_of(e.lo()), f64_of(e.hi())),
        None => ",".into(),
    }
}

fn bounds_csv(r: &BoundsReport) -> String {
    let mut out = String::from("kind,l,n,omega,log_lo,log_hi,reference,row_lo,row_hi,status\n");
    for h in &r.heights {
        let _ = writeln!(
            out,
            "height,{},{},,{},{},{},",
            h.l,
            h.n,
            enc_cols(h.log_height_q1.as_ref()),
            f64_of(&h.main_term),
            enc_cols(h.residual_per_n.as_ref()),
        );
    }
    for s in &r.smallness {
        let status = match s.status {
            SmallnessStatus::Decided => "decided",
            SmallnessStatus::Undecided => "undecided",
        };
        let _ = writeln!(
            out,
            "smallness,{},{},{},{},{},{},{}",
            s.l,
            s.n,
            s.omega,
            enc_cols(s.log_v_omega_q.as_ref()),
            f64_of(&s.bound_exponent),
            enc_cols(s.c_row.as_ref()),
            status,
        );
    }
    out
}

fn scan_csv(r: &ExponentScanReport) -> String {
    let dim = r.rows.first().map_or(0, |row| row.best_a.len());
    let mut out = String::from("H");
    for i in 0..dim {
        let _ = write!(out, ",A{i}");
    }
    out.push_str(",lambda_lo,lambda_hi,exp_lo,exp_hi\n");
    for row in &r.rows {
        let a: Vec<String> = row.best_a.iter().map(Integer::to_string).collect();
        let _ = writeln!(
            out,
            "{},{},{},{}",
            row.h,
            a.join(","),
            enc_cols(Some(&row.lambda_abs)),
            enc_cols(Some(&row.empirical_exponent)),
        );
    }
    out
}
