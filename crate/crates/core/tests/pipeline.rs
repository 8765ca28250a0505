use std::sync::OnceLock;

use toricrep::arith::{parse_param_poly, rat, ratio, substitute_params, ParamPoly, TPoly};
use toricrep::complex::Field;
use toricrep::implicit::{interpolation_oracle, ImplicitResult};
use toricrep::pipeline::{Job, JobSpec, Model, DEFAULT_SEED};
use toricrep::polytope::LatticePolytope;

const EXAMPLE: [&str; 4] = ["s*t^6+2", "s*t^5-3*s*t^3", "s*t^4+5*s^2*t^6", "2+s^2*t^6"];

fn params(texts: [&str; 4]) -> [ParamPoly; 4] {
    texts.map(|s| parse_param_poly(s).unwrap())
}

fn job(fs: [ParamPoly; 4], q: Option<LatticePolytope>, d: Option<usize>, model: Model, seed: u64) -> Job {
    Job::new(fs, q, d, model, seed, Field::Rational, None).unwrap()
}

fn small_q() -> LatticePolytope {
    LatticePolytope::hull([(0, 0), (0, 3), (1, 3)]).unwrap()
}

fn newton_run() -> &'static ImplicitResult {
    static RUN: OnceLock<ImplicitResult> = OnceLock::new();
    RUN.get_or_init(|| job(params(EXAMPLE), None, None, Model::Toric, DEFAULT_SEED).implicit().unwrap().2)
}

#[test]
fn newton_polytope_equation_matches_oracle() {
    let res = newton_run();
    assert_eq!(res.degree(), 6);
    assert!(res.verified);
    assert!(!res.has_extraneous_factor());
    assert_eq!(interpolation_oracle(&params(EXAMPLE), 6, 42).as_ref(), Some(&res.f));
    assert!(interpolation_oracle(&params(EXAMPLE), 5, 42).is_none());
}

#[test]
fn minor_factors_through_equation() {
    let res = newton_run();
    assert_eq!(res.d.homogeneous_degree(), Some(17));
    assert!(res.delta >= 1);
    assert_eq!(res.degree() * res.delta + res.extraneous_degree(), 17);
    assert_eq!(&res.f.pow(res.delta) * &res.extraneous, res.d);
}

#[test]
fn smaller_polytope_gives_same_equation() {
    let j = job(params(EXAMPLE), Some(small_q()), Some(2), Model::Toric, DEFAULT_SEED);
    let (nu, rep, res) = j.implicit().unwrap();
    assert_eq!(nu.nu0, 2);
    assert_eq!(rep.shape(), (12, 19));
    assert_eq!(nu.expected_degree(), 6);
    assert!(res.degree() as i64 <= nu.expected_degree());
    assert_eq!(res.gcd, res.f);
    assert_eq!(&res.f, &newton_run().f);
    assert!(res.d.div_exact(&res.f).is_some());
}

#[test]
fn common_monomial_and_scalar_do_not_change_equation() {
    let shifted = params(EXAMPLE).map(|f| f.shift((-1, 2)).scale(&ratio(3, 7)));
    let (_, _, res) = job(shifted, None, None, Model::Toric, DEFAULT_SEED).implicit().unwrap();
    assert_eq!(&res.f, &newton_run().f);
}

#[test]
fn other_seed_gives_same_equation() {
    let (_, _, res) = job(params(EXAMPLE), None, None, Model::Toric, 7).implicit().unwrap();
    assert_eq!(&res.f, &newton_run().f);
}

#[test]
fn bihomogeneous_models_carry_extraneous_factor() {
    for d in [1, 2] {
        let j = job(params(EXAMPLE), None, Some(d), Model::Bihomogeneous { e1: 2, e2: 6 }, DEFAULT_SEED);
        let (nu, rep, res) = j.implicit().unwrap();
        assert_eq!(rep.shape(), (21, 34));
        assert_eq!(nu.expected_degree(), 9);
        assert_eq!(res.gcd_degree(), 9);
        assert!(res.has_extraneous_factor());
        assert_eq!(&res.f, &newton_run().f);
        let cofactor = res.gcd.div_exact(&res.f).unwrap();
        assert_eq!(cofactor.total_degree(), 3);
        assert!(!substitute_params(&cofactor, &j.fs).is_zero());
    }
}

#[test]
fn sphere_parametrization() {
    // inverse stereographic projection: a quadric with a base point
    let fs = params(["2*s", "2*t", "s^2+t^2-1", "s^2+t^2+1"]);
    let (_, _, res) = job(fs.clone(), None, None, Model::Toric, DEFAULT_SEED).implicit().unwrap();
    let sphere = TPoly::from_terms([
        ([2, 0, 0, 0], rat(1)),
        ([0, 2, 0, 0], rat(1)),
        ([0, 0, 2, 0], rat(1)),
        ([0, 0, 0, 2], rat(-1)),
    ]);
    assert_eq!(res.f, sphere);
    assert!(res.verified);
}

#[test]
fn job_spec_round_trip_is_deterministic() {
    let mut spec = JobSpec::new(EXAMPLE);
    spec.polytope = Some(vec![[0, 0], [0, 3], [1, 3]]);
    let a = serde_json::to_string(&Job::from_spec(&spec, Model::Toric).unwrap().implicit_report().unwrap()).unwrap();
    let text = serde_json::to_string(&spec).unwrap();
    let back: JobSpec = serde_json::from_str(&text).unwrap();
    let b = serde_json::to_string(&Job::from_spec(&back, Model::Toric).unwrap().implicit_report().unwrap()).unwrap();
    assert_eq!(a, b);
}
