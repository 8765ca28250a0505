//! End-to-end jobs: input resolution, model polytopes and per-stage reports.

use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::arith::prime::random_prime;
use crate::arith::{parse_param_poly, rational_to_string, ParamPoly, Rational, TPoly};
use crate::complex::{default_nu_cap, ComplexContext, Field, NuReport, NuRow};
use crate::error::{Error, Result};
use crate::ideal::{toric_generators, DEFAULT_POINT_CAP};
use crate::implicit::{implicit_equation, verify_implicit, FormJson, ImplicitJson, ImplicitResult};
use crate::polytope::{contains_scaled, homothety_factor, newton_polytope, normalize_params, LatticePolytope, Point, PolytopeJson};
use crate::repmat::{build_rep_matrix, P3Point, RankReport, RepMatrix};
use crate::toric::{reparametrize, variable_dictionary, ToricAlgebra, VariableName};

pub const DEFAULT_SEED: u64 = 42;

/// Largest `d` tried when a polytope is given without a degree.
const MAX_AUTO_DEGREE: usize = 64;

fn default_seed() -> u64 {
    DEFAULT_SEED
}

fn default_field() -> Field {
    Field::Rational
}

/// Job file contents.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct JobSpec {
    pub f: [String; 4],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub polytope: Option<Vec<[i64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_field")]
    pub field: Field,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nu_cap: Option<usize>,
}

impl JobSpec {
    pub fn new(f: [&str; 4]) -> Self {
        JobSpec {
            f: f.map(str::to_string),
            polytope: None,
            d: None,
            seed: DEFAULT_SEED,
            field: Field::Rational,
            nu_cap: None,
        }
    }
}

/// Which polytope the parametrization is read over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Model {
    /// The Newton polytope, or the user polytope when one is given.
    #[default]
    Toric,
    /// The standard simplex of the given degree (default: the total degree of the input).
    DenseHomogeneous { degree: Option<usize> },
    /// The rectangle `[0,e1/d] x [0,e2/d]` in degree `d`.
    Bihomogeneous { e1: usize, e2: usize },
}

/// Pipeline stage, used to label failures.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Input,
    Polytope,
    Ideal,
    Complex,
    RepMatrix,
    Implicit,
    Member,
    Verify,
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stage::Input => "input (parsing the job)",
            Stage::Polytope => "polytope (Newton polytope and degree choice)",
            Stage::Ideal => "ideal (toric ideal by binomial elimination)",
            Stage::Complex => "complex (Koszul cycles and the Euler characteristic search)",
            Stage::RepMatrix => "repmat (matrix assembly from linear syzygies)",
            Stage::Implicit => "implicit (gcd of maximal minors)",
            Stage::Member => "member (rank at a point)",
            Stage::Verify => "verify (substitution into the parametrization)",
        };
        f.write_str(s)
    }
}

/// An error tagged with the stage that raised it.
#[derive(Debug)]
pub struct Failure {
    pub stage: Stage,
    pub error: Error,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage {}: {}", self.stage, self.error)?;
        if let Error::NuCapExceeded { table, .. } = &self.error {
            write!(f, "\n{table}")?;
        }
        Ok(())
    }
}

impl std::error::Error for Failure {}

pub type StageResult<T> = std::result::Result<T, Failure>;

trait At<T> {
    fn at(self, stage: Stage) -> StageResult<T>;
}

impl<T> At<T> for Result<T> {
    fn at(self, stage: Stage) -> StageResult<T> {
        self.map_err(|error| Failure { stage, error })
    }
}

/// A resolved job: normalized parametrization, polytope and degree.
#[derive(Clone, Debug)]
pub struct Job {
    pub fs: [ParamPoly; 4],
    pub shift: Point,
    pub newton: LatticePolytope,
    pub q: LatticePolytope,
    pub d: usize,
    pub seed: u64,
    pub field: Field,
    pub nu_cap: usize,
}

/// The prime used for a session with the given seed.
pub fn session_prime(seed: u64) -> u64 {
    random_prime(&mut ChaCha8Rng::seed_from_u64(seed))
}

fn smallest_degree(newton: &LatticePolytope, q: &LatticePolytope) -> Result<usize> {
    (1..=MAX_AUTO_DEGREE)
        .find(|&d| contains_scaled(newton, q, d))
        .ok_or_else(|| Error::Input(format!("Newton polytope is not contained in d*Q for any d <= {MAX_AUTO_DEGREE}")))
}

impl Job {
    pub fn from_spec(spec: &JobSpec, model: Model) -> StageResult<Job> {
        let fs = [0, 1, 2, 3]
            .map(|i| parse_param_poly(&spec.f[i]))
            .into_iter()
            .collect::<Result<Vec<_>>>()
            .at(Stage::Input)?;
        let fs: [ParamPoly; 4] = fs.try_into().expect("four polynomials");
        let user_q = spec
            .polytope
            .as_ref()
            .map(|v| LatticePolytope::try_from(PolytopeJson { vertices: v.clone() }))
            .transpose()
            .at(Stage::Input)?;
        Job::new(fs, user_q, spec.d, model, spec.seed, spec.field, spec.nu_cap).at(Stage::Polytope)
    }

    pub fn new(
        fs: [ParamPoly; 4],
        user_q: Option<LatticePolytope>,
        d: Option<usize>,
        model: Model,
        seed: u64,
        field: Field,
        nu_cap: Option<usize>,
    ) -> Result<Job> {
        if d == Some(0) {
            return Err(Error::Input("degree d must be positive".into()));
        }
        let (fs, shift) = normalize_params(&fs)?;
        let newton = newton_polytope(&fs)?;
        newton.require_full_dimensional()?;
        let (q, d) = match model {
            Model::Toric => match user_q {
                None => (newton.clone(), d.unwrap_or(1)),
                Some(q) => {
                    let d = match d {
                        Some(d) => d,
                        None => smallest_degree(&newton, &q)?,
                    };
                    (q, d)
                }
            },
            Model::DenseHomogeneous { degree } => {
                let total = fs.iter().flat_map(ParamPoly::support).map(|(a, b)| a + b).max().unwrap_or(0) as usize;
                (LatticePolytope::unit_simplex(), degree.unwrap_or(total))
            }
            Model::Bihomogeneous { e1, e2 } => {
                let k = d.unwrap_or(1);
                if e1 % k != 0 || e2 % k != 0 {
                    return Err(Error::Input(format!("d = {k} must divide both bidegrees ({e1}, {e2})")));
                }
                (LatticePolytope::rectangle((e1 / k) as i64, (e2 / k) as i64)?, k)
            }
        };
        q.require_full_dimensional()?;
        if d == 0 {
            return Err(Error::Input("degree d must be positive".into()));
        }
        if !contains_scaled(&newton, &q, d) {
            let dq = q.scaled(d as i64);
            let (a, b) = newton.vertices().iter().copied().find(|&p| !dq.contains(p)).expect("a vertex outside d*Q");
            return Err(Error::NotContained(a, b));
        }
        Ok(Job { fs, shift, newton, q, d, seed, field, nu_cap: nu_cap.unwrap_or_else(|| default_nu_cap(d)) })
    }

    fn rng(&self) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(self.seed)
    }

    pub fn context(&self) -> StageResult<ComplexContext> {
        let g = reparametrize(&self.fs, &self.q, self.d).at(Stage::Polytope)?;
        let alg = ToricAlgebra::new(self.q.clone()).at(Stage::Polytope)?;
        ComplexContext::with_field(alg, g, self.field).at(Stage::Complex)
    }

    pub fn polytope_report(&self) -> StageResult<PolytopeReport> {
        let h = homothety_factor(&self.newton).at(Stage::Polytope)?;
        let alg = ToricAlgebra::new(self.q.clone()).at(Stage::Polytope)?;
        Ok(PolytopeReport {
            newton: PolytopeJson::from(&self.newton),
            shift: [self.shift.0, self.shift.1],
            homothety: HomothetyJson { factor: h.factor, base: PolytopeJson::from(&h.base), offset: [h.offset.0, h.offset.1] },
            q: PolytopeJson::from(&self.q),
            d: self.d,
            graded_dims: (0..=3).map(|n| alg.dim(n)).collect(),
            variables: variable_dictionary(&self.q),
        })
    }

    pub fn ideal_report(&self) -> StageResult<IdealReport> {
        let ideal = toric_generators(&self.q, DEFAULT_POINT_CAP).at(Stage::Ideal)?;
        let names = ideal.names();
        Ok(IdealReport {
            variables: variable_dictionary(&self.q),
            generators: ideal.basis.iter().map(|b| b.display_with(&names).to_string()).collect(),
        })
    }

    pub fn complex_report(&self) -> StageResult<ComplexReport> {
        let ctx = self.context()?;
        let nu = ctx.find_nu0(self.nu_cap).at(Stage::Complex)?;
        Ok(ComplexReport::new(self.field, nu))
    }

    fn rep_matrix_with(&self, rng: &mut ChaCha8Rng) -> StageResult<(NuReport, RepMatrix)> {
        let ctx = self.context()?;
        let nu = ctx.find_nu0(self.nu_cap).at(Stage::Complex)?;
        let rep = build_rep_matrix(&ctx, nu.nu0, rng).at(Stage::RepMatrix)?;
        Ok((nu, rep))
    }

    pub fn rep_matrix(&self) -> StageResult<(NuReport, RepMatrix)> {
        self.rep_matrix_with(&mut self.rng())
    }

    pub fn implicit(&self) -> StageResult<(NuReport, RepMatrix, ImplicitResult)> {
        let mut rng = self.rng();
        let (nu, rep) = self.rep_matrix_with(&mut rng)?;
        let res = implicit_equation(&rep, &mut rng).at(Stage::Implicit)?;
        Ok((nu, rep, res))
    }

    pub fn implicit_report(&self) -> StageResult<ImplicitReport> {
        let (nu, rep, res) = self.implicit()?;
        Ok(ImplicitReport::new(&nu, &rep, &res))
    }

    pub fn member_report(&self, point: &P3Point) -> StageResult<MemberReport> {
        let (_, rep) = self.rep_matrix()?;
        rep.require_full_rank().at(Stage::Member)?;
        let RankReport { rank, rows, is_member } = rep.rank_at(point);
        Ok(MemberReport { point: point.coords().clone().map(|x| rational_to_string(&x)), rank, rows, is_member })
    }

    /// Substitutes `f` (or the computed equation when `None`) into the parametrization.
    pub fn verify_report(&self, f: Option<TPoly>) -> StageResult<VerifyReport> {
        let f = match f {
            Some(f) => f,
            None => self.implicit()?.2.f,
        };
        Ok(VerifyReport { degree: f.total_degree(), verified: verify_implicit(&f, &self.fs) })
    }
}

/// Parses the coordinates of a point of `P^3`.
pub fn parse_point(coords: &[String]) -> Result<P3Point> {
    if coords.len() != 4 {
        return Err(Error::Input(format!("expected 4 coordinates, got {}", coords.len())));
    }
    let parsed: Vec<Rational> = coords
        .iter()
        .map(|s| crate::arith::parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational {s:?}"))))
        .collect::<Result<_>>()?;
    P3Point::new(parsed.try_into().expect("four coordinates"))
}

/// Reads an equation from JSON: either a bare form or an object with key `"F"`.
pub fn parse_equation_json(text: &str) -> Result<TPoly> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Doc {
        Wrapped {
            #[serde(rename = "F")]
            f: FormJson,
        },
        Bare(FormJson),
    }
    let form = match serde_json::from_str::<Doc>(text)? {
        Doc::Wrapped { f } | Doc::Bare(f) => f,
    };
    form.to_tpoly()
}

#[derive(Clone, Debug, Serialize)]
pub struct HomothetyJson {
    pub factor: i64,
    pub base: PolytopeJson,
    pub offset: [i64; 2],
}

#[derive(Clone, Debug, Serialize)]
pub struct PolytopeReport {
    pub newton: PolytopeJson,
    pub shift: [i64; 2],
    pub homothety: HomothetyJson,
    pub q: PolytopeJson,
    pub d: usize,
    /// `dim A_n` for `n = 0..=3`.
    pub graded_dims: Vec<usize>,
    pub variables: Vec<VariableName>,
}

fn vertices_text(p: &PolytopeJson) -> String {
    p.vertices.iter().map(|[x, y]| format!("({x},{y})")).collect::<Vec<_>>().join(" ")
}

impl fmt::Display for PolytopeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Newton polytope: {}", vertices_text(&self.newton))?;
        writeln!(f, "normalization shift: ({}, {})", self.shift[0], self.shift[1])?;
        writeln!(
            f,
            "lattice homothety: factor {} of {} offset ({}, {})",
            self.homothety.factor,
            vertices_text(&self.homothety.base),
            self.homothety.offset[0],
            self.homothety.offset[1]
        )?;
        writeln!(f, "Q: {}, d = {}", vertices_text(&self.q), self.d)?;
        writeln!(f, "dim A_n (n = 0..3): {:?}", self.graded_dims)?;
        for v in &self.variables {
            writeln!(f, "{} = ({},{})", v.name, v.point[0], v.point[1])?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct IdealReport {
    pub variables: Vec<VariableName>,
    pub generators: Vec<String>,
}

impl fmt::Display for IdealReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.variables {
            writeln!(f, "{} = ({},{})", v.name, v.point[0], v.point[1])?;
        }
        writeln!(f, "{} generators", self.generators.len())?;
        for g in &self.generators {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexReport {
    pub field: Field,
    pub nu0: usize,
    pub d: usize,
    pub expected_degree: i64,
    pub matches_two_d: bool,
    pub table: Vec<NuRow>,
    #[serde(skip)]
    text: String,
}

impl ComplexReport {
    fn new(field: Field, nu: NuReport) -> Self {
        ComplexReport {
            field,
            nu0: nu.nu0,
            d: nu.d,
            expected_degree: nu.expected_degree(),
            matches_two_d: nu.matches_two_d(),
            text: nu.to_string(),
            table: nu.table,
        }
    }
}

impl fmt::Display for ComplexReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Field::Prime(p) = self.field {
            writeln!(f, "ranks modulo {p} (probabilistic)")?;
        }
        f.write_str(&self.text)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ImplicitReport {
    pub nu0: usize,
    pub shape: [usize; 2],
    pub expected_degree: i64,
    pub columns: Vec<usize>,
    pub minors_used: usize,
    pub d_degree: u32,
    #[serde(flatten)]
    pub result: ImplicitJson,
    #[serde(skip)]
    equation: String,
}

impl ImplicitReport {
    pub fn new(nu: &NuReport, rep: &RepMatrix, res: &ImplicitResult) -> Self {
        let (r, c) = rep.shape();
        ImplicitReport {
            nu0: nu.nu0,
            shape: [r, c],
            expected_degree: nu.expected_degree(),
            columns: res.columns.clone(),
            minors_used: res.minors_used,
            d_degree: res.d.total_degree(),
            result: res.to_json(),
            equation: res.f.to_string(),
        }
    }
}

impl fmt::Display for ImplicitReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nu0 = {}, matrix {} x {}, expected degree {}", self.nu0, self.shape[0], self.shape[1], self.expected_degree)?;
        writeln!(f, "F (degree {}) = {}", self.result.f.degree, self.equation)?;
        writeln!(
            f,
            "selected minor D: degree {} = {} * {} + {} (D = F^delta * G)",
            self.d_degree, self.result.delta, self.result.f.degree, self.result.g_degree
        )?;
        if self.result.gcd_degree > self.result.f.degree {
            writeln!(
                f,
                "gcd of maximal minors has degree {}: extraneous factor of degree {}",
                self.result.gcd_degree,
                self.result.gcd_degree - self.result.f.degree
            )?;
        } else {
            writeln!(f, "gcd of maximal minors equals F")?;
        }
        writeln!(f, "verified: {}", self.result.verified)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct MemberReport {
    pub point: [String; 4],
    pub rank: usize,
    pub rows: usize,
    pub is_member: bool,
}

impl fmt::Display for MemberReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "point ({})", self.point.join(" : "))?;
        writeln!(f, "rank {} of {}", self.rank, self.rows)?;
        if self.is_member {
            writeln!(f, "rank drops: the point is on the surface or on an extraneous locus")
        } else {
            writeln!(f, "full rank: the point is not on the surface")
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub degree: u32,
    pub verified: bool,
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "degree {} equation {}", self.degree, if self.verified { "vanishes on the parametrization" } else { "does NOT vanish" })
    }
}
