#![allow(dead_code)]

use rug::{Integer, Rational};

use qforms_core::params::{measure_params, MeasureParams};
use qforms_core::session::{PrecisionPolicy, Session};
use qforms_core::spec::{validate_spec, Point, ProblemSpec, RawSpec};

pub fn spec(q: (i64, i64), poly: &[(i64, i64)], points: &[((i64, i64), u32)]) -> ProblemSpec {
    validate_spec(&RawSpec {
        q_num: Integer::from(q.0),
        q_den: Integer::from(q.1),
        poly: poly.iter().map(|&(n, d)| Rational::from((n, d))).collect(),
        points: points
            .iter()
            .map(|&((n, d), s)| Point::new(Rational::from((n, d)), s))
            .collect(),
    })
    .expect("fixture is valid")
}

/// q = 2, P = z, alpha = 1.
pub fn fix_a() -> ProblemSpec {
    spec((2, 1), &[(0, 1), (1, 1)], &[((1, 1), 1)])
}

/// q = 2, P = z + 1, alpha = 1.
pub fn fix_b() -> ProblemSpec {
    spec((2, 1), &[(1, 1), (1, 1)], &[((1, 1), 1)])
}

/// q = 2, P = z, alpha in {1, 3}.
pub fn fix_c() -> ProblemSpec {
    spec((2, 1), &[(0, 1), (1, 1)], &[((1, 1), 1), ((3, 1), 1)])
}

/// q = 3/2, P = z^2 + z/3, alpha = 5/7 with multiplicity 2.
pub fn fix_d() -> ProblemSpec {
    spec((3, 2), &[(0, 1), (1, 3), (1, 1)], &[((5, 7), 2)])
}

pub fn all_fixtures() -> Vec<(&'static str, ProblemSpec)> {
    vec![
        ("A", fix_a()),
        ("B", fix_b()),
        ("C", fix_c()),
        ("D", fix_d()),
    ]
}

pub fn session(spec: ProblemSpec) -> Session {
    Session::new(spec, PrecisionPolicy::default())
}

pub fn params(spec: &ProblemSpec) -> MeasureParams {
    measure_params(spec, 64, 1 << 14).expect("decidable")
}

pub fn ints(v: &[i64]) -> Vec<Integer> {
    v.iter().map(|&x| Integer::from(x)).collect()
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::from((n, d))
}
