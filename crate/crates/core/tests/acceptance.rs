//! Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on failure.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::sync::OnceLock;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use toricrep::arith::{parse_param_poly, random_rational, rat, substitute_params, ParamPoly, Rational, TPoly, SAMPLE_BOUND};
use toricrep::complex::{Field, NuReport};
use toricrep::ideal::{groebner_basis, is_in_ideal, toric_generators, DEFAULT_POINT_CAP};
use toricrep::implicit::{interpolation_oracle, ImplicitResult};
use toricrep::pipeline::{Job, Model, DEFAULT_SEED};
use toricrep::polytope::LatticePolytope;
use toricrep::repmat::{P3Point, RepMatrix};
use toricrep::toric::check_normality;

const EXAMPLE: [&str; 4] = ["s*t^6+2", "s*t^5-3*s*t^3", "s*t^4+5*s^2*t^6", "2+s^2*t^6"];

type Check = Result<(), String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn params(texts: [&str; 4]) -> [ParamPoly; 4] {
    texts.map(|s| parse_param_poly(s).expect("fixture parses"))
}

fn small_q() -> LatticePolytope {
    LatticePolytope::hull([(0, 0), (0, 3), (1, 3)]).expect("fixture polytope")
}

fn job(q: Option<LatticePolytope>, d: Option<usize>, model: Model) -> Job {
    Job::new(params(EXAMPLE), q, d, model, DEFAULT_SEED, Field::Rational, None).expect("fixture job")
}

type Run = (Job, NuReport, RepMatrix, ImplicitResult);

fn run(q: Option<LatticePolytope>, d: Option<usize>) -> Run {
    let j = job(q, d, Model::Toric);
    let (nu, rep, res) = j.implicit().expect("pipeline succeeds");
    (j, nu, rep, res)
}

fn newton_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run(None, None))
}

fn small_run() -> &'static Run {
    static RUN: OnceLock<Run> = OnceLock::new();
    RUN.get_or_init(|| run(Some(small_q()), Some(2)))
}

fn c1_newton_dimensions() -> Check {
    let (_, nu, rep, _) = newton_run();
    let row = nu.last();
    ensure!(nu.nu0 == 2, "nu0 = {}", nu.nu0);
    ensure!((row.dim_a, row.z1, row.z2, row.z3) == (17, 34, 23, 6), "row {row:?}");
    ensure!(rep.shape() == (17, 34), "shape {:?}", rep.shape());
    ensure!(nu.expected_degree() == 6, "expected degree {}", nu.expected_degree());
    Ok(())
}

fn c2_equation_coefficients() -> Check {
    let f = &newton_run().3.f;
    ensure!(f.homogeneous_degree() == Some(6), "degree {:?}", f.homogeneous_degree());
    let spots: [([u32; 4], i64); 4] = [([2, 4, 0, 0], 2809), ([0, 6, 0, 0], 124002), ([0, 0, 1, 5], -125), ([0, 0, 6, 0], 841)];
    let scale = f.coeff(spots[0].0) / rat(spots[0].1);
    ensure!(scale != rat(0), "T1^2*T2^4 coefficient is zero");
    for (e, c) in spots {
        ensure!(f.coeff(e) == &scale * rat(c), "coefficient of {e:?} is {} (scale {scale})", f.coeff(e));
    }
    Ok(())
}

fn c3_small_polytope() -> Check {
    let (_, nu, rep, res) = small_run();
    ensure!(nu.nu0 == 2, "nu0 = {}", nu.nu0);
    ensure!(rep.shape() == (12, 19), "shape {:?}", rep.shape());
    ensure!(res.f.is_scalar_multiple_of(&newton_run().3.f), "equations differ");
    Ok(())
}

fn c4_substitution() -> Check {
    for (name, run) in [("newton", newton_run()), ("small", small_run())] {
        ensure!(substitute_params(&run.3.f, &run.0.fs).is_zero(), "{name}: F(f) != 0");
        ensure!(run.3.verified, "{name}: not flagged verified");
    }
    Ok(())
}

fn c5_toric_ideal() -> Check {
    let j = toric_generators(&small_q(), DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    let listed = [
        j.binomial(&[(2, 2)], &[(1, 1), (3, 1)]),
        j.binomial(&[(1, 1), (2, 1)], &[(0, 1), (3, 1)]),
        j.binomial(&[(1, 2)], &[(0, 1), (2, 1)]),
    ]
    .map(|b| b.expect("proper binomial"));
    ensure!(listed.iter().all(|b| j.contains(b)), "a listed quadric is not in J");
    let listed_gb = groebner_basis(&listed, &j.order(), false);
    ensure!(j.basis.iter().all(|b| is_in_ideal(b, &listed_gb)), "J is larger than the listed ideal");

    let n = toric_generators(&newton_run().0.newton, DEFAULT_POINT_CAP).map_err(|e| e.to_string())?;
    let quadrics = [
        n.binomial(&[(3, 2)], &[(2, 1), (4, 1)]),
        n.binomial(&[(2, 1), (3, 1)], &[(1, 1), (4, 1)]),
        n.binomial(&[(2, 2)], &[(1, 1), (3, 1)]),
        n.binomial(&[(1, 2)], &[(0, 1), (5, 1)]),
    ]
    .map(|b| b.expect("proper binomial"));
    ensure!(quadrics.iter().all(|b| n.contains(b)), "a listed quadric does not reduce to zero");
    Ok(())
}

fn c6_drop_of_rank() -> Check {
    let (j, _, rep, res) = newton_run();
    let mut rng = ChaCha8Rng::seed_from_u64(DEFAULT_SEED);
    let mut on = 0;
    while on < 20 {
        let s = random_rational(&mut rng, SAMPLE_BOUND);
        let t = random_rational(&mut rng, SAMPLE_BOUND);
        let Some(p) = P3Point::image(&j.fs, &s, &t) else { continue };
        let r = rep.rank_at(&p);
        ensure!(r.rank < 17 && r.is_member, "image of ({s}, {t}) has rank {}", r.rank);
        on += 1;
    }
    let mut off = 0;
    while off < 5 {
        let p = P3Point::random(&mut rng);
        if res.f.eval(p.coords()) == Rational::from_integer(0.into()) {
            continue;
        }
        let r = rep.rank_at(&p);
        ensure!(r.rank == 17 && !r.is_member, "point {p} off the surface has rank {}", r.rank);
        off += 1;
    }
    Ok(())
}

fn c7_oracle() -> Check {
    let fs = params(EXAMPLE);
    let f = &newton_run().3.f;
    let oracle = interpolation_oracle(&fs, 6, DEFAULT_SEED).ok_or("no degree-6 form found")?;
    ensure!(oracle.is_scalar_multiple_of(f), "oracle disagrees with F");
    ensure!(interpolation_oracle(&fs, 5, DEFAULT_SEED).is_none(), "a degree-5 form vanishes");
    Ok(())
}

fn c8_structure() -> Check {
    for (name, run) in [("newton", newton_run()), ("small", small_run())] {
        let j = &run.0;
        let ctx = j.context().map_err(|e| e.to_string())?;
        let d = j.d as i64;
        let top = run.1.nu0 as i64 + 3 * d;
        for mu in 0..=top {
            for p in 2..=3 {
                let outer = ctx.koszul_matrix(p - 1, mu).map_err(|e| e.to_string())?;
                let inner = ctx.koszul_matrix(p, mu).map_err(|e| e.to_string())?;
                let product = outer.mul(&inner).map_err(|e| e.to_string())?;
                ensure!(product.is_zero(), "{name}: kappa_{} * kappa_{p} != 0 in degree {mu}", p - 1);
            }
        }
        ensure!(run.2.check_syzygies(ctx.algebra()), "{name}: a column is not a syzygy");
        ensure!(check_normality(&j.q, 4), "{name}: normality check failed");
    }
    Ok(())
}

fn c9_model_shapes() -> Check {
    let dense = job(None, None, Model::DenseHomogeneous { degree: None });
    let (nu, rep) = dense.rep_matrix().map_err(|e| e.to_string())?;
    ensure!(nu.nu0 == 6, "dense nu0 = {}", nu.nu0);
    ensure!(rep.shape() == (28, 35), "dense shape {:?}", rep.shape());
    println!("      dense model: expected degree {}, generic rank {} of 28", nu.expected_degree(), rep.generic_rank);
    for d in [1, 2] {
        let (_, rep) = job(None, Some(d), Model::Bihomogeneous { e1: 2, e2: 6 }).rep_matrix().map_err(|e| e.to_string())?;
        ensure!(rep.shape() == (21, 34), "rectangle d={d}: shape {:?}", rep.shape());
    }
    Ok(())
}

fn c10_plane() -> Check {
    let j = Job::new(params(["s", "t", "1", "s+t"]), None, None, Model::Toric, DEFAULT_SEED, Field::Rational, None)
        .map_err(|e| e.to_string())?;
    let (nu, rep, res) = j.implicit().map_err(|e| e.to_string())?;
    let plane = TPoly::linear(&[rat(1), rat(1), rat(0), rat(-1)]);
    ensure!(nu.nu0 == 0, "nu0 = {}", nu.nu0);
    ensure!(rep.shape() == (1, 1), "shape {:?}", rep.shape());
    let entries: Vec<Rational> = (0..4).map(|i| rep.pencil.coefficient(i).get(0, 0).clone()).collect();
    ensure!(entries == [rat(1), rat(1), rat(0), rat(-1)], "M = {entries:?}");
    ensure!(res.f == plane, "F = {}", res.f);
    Ok(())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("newton polytope: nu0, cycle dimensions, 17x34, expected degree", c1_newton_dimensions),
        ("degree-6 equation coefficients", c2_equation_coefficients),
        ("smaller polytope: nu0, 12x19, same equation", c3_small_polytope),
        ("substitution verification for both polytopes", c4_substitution),
        ("toric ideal parity", c5_toric_ideal),
        ("drop of rank on and off the surface", c6_drop_of_rank),
        ("interpolation oracle agreement", c7_oracle),
        ("complex, syzygy and normality invariants", c8_structure),
        ("dense and bihomogeneous model shapes", c9_model_shapes),
        ("plane fixture", c10_plane),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = t.elapsed().as_secs_f64();
        match outcome {
            Ok(()) => println!("PASS {:>2} {name} ({secs:.1}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.1}s): {why}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed in {:.1}s", criteria.len() - failed, criteria.len(), start.elapsed().as_secs_f64());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
