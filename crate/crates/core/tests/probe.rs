mod common;

use proptest::prelude::*;
use rug::{Integer, Rational};

use common::*;
use qforms_core::probe::*;
use qforms_core::Error;

fn fix_a_q(q: (i64, i64)) -> qforms_core::spec::ProblemSpec {
    spec(q, &[(0, 1), (1, 1)], &[((1, 1), 1)])
}

#[test]
fn parameter_choice_examples() {
    let a = fix_a();
    let pa = params(&a);
    let c = choose_parameters(&a, &pa, &Integer::from(1u32 << 20)).unwrap();
    assert_eq!((c.l, c.n0), (5, 9));
    assert!((c.a.to_f64_mid() - 1.118_034).abs() < 1e-6);
    assert!((c.big_l.to_f64_mid() - 20.0).abs() < 1e-12);
    assert_eq!(n0_for(&a, &pa, 1), 2);
    assert_eq!(choose_parameters(&a, &pa, &Integer::from(2)).unwrap().l, 1);
    assert!(matches!(
        choose_parameters(&a, &pa, &Integer::from(1)),
        Err(Error::InvalidArgument(_))
    ));

    let b = fix_a_q((9, 2));
    let pb = params(&b);
    assert!(pb.applicable);
    let c = choose_parameters(&b, &pb, &Integer::from(1024)).unwrap();
    assert!((c.big_l.to_f64_mid() - 3.154_648_767).abs() < 1e-8);
    assert!((c.a.to_f64_mid() - 0.1946).abs() < 1e-3);
    assert_eq!(c.l, 5);
}

#[test]
fn certificates_for_examples() {
    let s = session(fix_a());
    let p = params(s.spec());
    let cfg = CertifyConfig::default();

    let c = certify_lower_bound(&s, &p, &ints(&[0, 1]), &cfg).unwrap();
    assert!(c.bound > 0);
    assert!((c.cross_check.to_f64_mid() - 1.641_632_560_655_153_8).abs() < 1e-12);
    assert!(c.is_sound_against_cross_check());

    let c = certify_lower_bound(&s, &p, &ints(&[-23, 14]), &cfg).unwrap();
    assert!(c.bound > 0);
    assert!(c.bound <= (171_442, 10_000_000));
    assert!((c.cross_check.to_f64_mid() - 0.017_144_1).abs() < 1e-6);
    assert!(c.is_sound_against_cross_check());
    assert!(c.w_omega.abs().hi() <= &Rational::from((1, 2)));
    assert!(c.w_a != 0);

    assert_eq!(
        certify_lower_bound(&s, &p, &ints(&[0, 0]), &cfg),
        Err(Error::ZeroVector)
    );
    assert!(matches!(
        certify_lower_bound(&s, &p, &ints(&[1]), &cfg),
        Err(Error::InvalidArgument(_))
    ));
}

#[test]
fn certificates_on_multipoint_fixture() {
    let s = session(fix_c());
    let p = params(s.spec());
    for a in [[1, 0, 0], [0, 1, -1], [-7, 3, 2], [40, -11, 9]] {
        let mut c = certify_lower_bound(&s, &p, &ints(&a), &CertifyConfig::default()).unwrap();
        c.refine_cross_check(&s, 512).unwrap();
        assert!(c.bound > 0 && c.is_sound_against_cross_check(), "{a:?}");
    }
}

#[test]
fn inapplicable_spec_is_refused() {
    let s = session(fix_a_q((3, 2)));
    let p = params(s.spec());
    assert!(!p.applicable);
    assert_eq!(
        certify_lower_bound(&s, &p, &ints(&[0, 1]), &CertifyConfig::default()),
        Err(Error::NotApplicable)
    );
    assert_eq!(
        exponent_scan(&s, &p, 10, ScanStrategy::Exhaustive, 128),
        Err(Error::NotApplicable)
    );
    assert_eq!(
        choose_parameters(s.spec(), &p, &Integer::from(8)),
        Err(Error::NotApplicable)
    );
}

#[test]
fn smallest_scan_is_well_formed() {
    for (name, spec) in all_fixtures() {
        let s = session(spec);
        let p = params(s.spec());
        let strategy = if s.spec().dim() <= 3 {
            ScanStrategy::Exhaustive
        } else {
            ScanStrategy::Random {
                samples: 20,
                seed: 1,
            }
        };
        let Ok(r) = exponent_scan(&s, &p, 2, strategy, 128) else {
            assert!(!p.applicable, "fixture {name}");
            continue;
        };
        assert_eq!(r.rows.len(), 1);
        let row = &r.rows[0];
        assert_eq!(row.h, 2);
        assert!(row.lambda_abs.excludes_zero());
        assert!(row.best_a[1..].iter().all(|x| x.clone().abs() <= 2));
        assert!(r.c_fit.is_some());
        if strategy == ScanStrategy::Exhaustive {
            let len = s.spec().value_count() as u32;
            assert_eq!(row.candidates, 5u64.pow(len) - 1);
        }
    }
}

#[test]
fn exhaustive_scan_on_dimension_two() {
    let s = session(fix_a());
    let p = params(s.spec());
    let r = exponent_scan(&s, &p, 60, ScanStrategy::Exhaustive, 128).unwrap();
    assert_eq!(r.rows.len(), 59);
    let max = r.max_observed_exponent.clone().unwrap();
    assert!(max.hi() <= &(r.mu.lo().clone() + 1u32));
    for row in &r.rows {
        assert!(row.lambda_abs.excludes_zero());
        let h = Integer::from(row.h);
        assert_eq!(row.best_a[1].clone().abs(), h);
    }
}

#[test]
fn exhaustive_refused_above_dimension_three() {
    let s = session(spec(
        (2, 1),
        &[(0, 1), (1, 1)],
        &[((1, 1), 1), ((3, 1), 1), ((5, 1), 1)],
    ));
    let p = params(s.spec());
    assert!(p.applicable);
    assert_eq!(
        exponent_scan(&s, &p, 3, ScanStrategy::Exhaustive, 128),
        Err(Error::DimensionTooLargeForExhaustive { dim: 4 })
    );
    let r = exponent_scan(
        &s,
        &p,
        3,
        ScanStrategy::Random {
            samples: 5,
            seed: 0,
        },
        128,
    )
    .unwrap();
    assert_eq!(r.rows.len(), 2);
    let c = session(fix_c());
    let pc = params(c.spec());
    // Dimension 3 is still allowed.
    assert!(exponent_scan(&c, &pc, 3, ScanStrategy::Exhaustive, 128).is_ok());
}

#[test]
fn random_scan_is_reproducible() {
    let s = session(fix_c());
    let p = params(s.spec());
    let st = ScanStrategy::Random {
        samples: 30,
        seed: 42,
    };
    let a = exponent_scan(&s, &p, 200, st, 128).unwrap();
    let b = exponent_scan(&s, &p, 200, st, 128).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.rows.last().unwrap().h, 200);
    assert!(a.rows.iter().all(|r| r.candidates == 30));
    let other = exponent_scan(
        &s,
        &p,
        200,
        ScanStrategy::Random {
            samples: 30,
            seed: 43,
        },
        128,
    )
    .unwrap();
    assert_ne!(a.rows, other.rows);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn n0_respects_domain(l in 1u32..40, h_bits in 1u32..200, which in 0usize..4) {
        let (_, spec) = all_fixtures().swap_remove(which);
        let p = params(&spec);
        prop_assert!(n0_for(&spec, &p, l) >= spec.s_total() * l);
        if p.applicable {
            let c = choose_parameters(&spec, &p, &(Integer::from(1) << h_bits)).unwrap();
            prop_assert!(c.n0 >= spec.s_total() * c.l);
            prop_assert!(c.l >= 1);
        }
    }

    #[test]
    fn sign_flip_keeps_bound(a0 in -40i64..=40, a1 in -40i64..=40) {
        prop_assume!(a0 != 0 || a1 != 0);
        let s = session(fix_b());
        let p = params(s.spec());
        let cfg = CertifyConfig::default();
        let pos = certify_lower_bound(&s, &p, &ints(&[a0, a1]), &cfg).unwrap();
        let neg = certify_lower_bound(&s, &p, &ints(&[-a0, -a1]), &cfg).unwrap();
        prop_assert_eq!(&pos.bound, &neg.bound);
        prop_assert_eq!((pos.l, pos.n), (neg.l, neg.n));
        prop_assert!(pos.is_sound_against_cross_check());
    }
}
