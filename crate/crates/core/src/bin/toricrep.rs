use std::fmt::Display;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use toricrep::complex::Field;
use toricrep::pipeline::{parse_equation_json, parse_point, session_prime, Failure, Job, JobSpec, Model, Stage};
use toricrep::polytope::PolytopeJson;
use toricrep::Error;

/// Matrix representations and implicit equations of toric surface parametrizations.
#[derive(Parser, Debug)]
#[command(name = "toricrep", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Opts,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Newton polytope, chosen polytope and lattice data.
    Polytope,
    /// Binomial generators of the toric ideal of the chosen polytope.
    Ideal,
    /// Cycle dimensions and the degree at which the matrix is built.
    Complex,
    /// The representation matrix as a pencil T1*M1 + ... + T4*M4.
    Repmat,
    /// Implicit equation from the gcd of maximal minors.
    Implicit,
    /// Rank of the matrix at a point of P^3 given by integer or fractional coordinates.
    Member {
        #[arg(allow_hyphen_values = true)]
        x1: String,
        #[arg(allow_hyphen_values = true)]
        x2: String,
        #[arg(allow_hyphen_values = true)]
        x3: String,
        #[arg(allow_hyphen_values = true)]
        x4: String,
    },
    /// Substitute an equation into the parametrization.
    Verify {
        /// JSON file holding a form, or an `implicit` report; computed when omitted.
        #[arg(long)]
        equation: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FieldArg {
    Rational,
    Prime,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModelArg {
    Toric,
    DenseHomogeneous,
    Bihomogeneous,
}

#[derive(Args, Debug)]
struct Opts {
    /// JSON job file.
    #[arg(long, global = true, conflicts_with_all = ["f1", "f2", "f3", "f4"])]
    input: Option<PathBuf>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    f1: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    f2: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    f3: Option<String>,
    #[arg(long, global = true, allow_hyphen_values = true)]
    f4: Option<String>,
    /// JSON file `{"vertices": [[x,y],...]}` with the polytope Q.
    #[arg(long, global = true)]
    polytope: Option<PathBuf>,
    /// Degree of the parametrization over Q (the simplex degree for the dense model).
    #[arg(long, global = true)]
    d: Option<usize>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum)]
    field: Option<FieldArg>,
    #[arg(long, global = true, value_enum, default_value = "toric")]
    model: ModelArg,
    /// First bidegree for the bihomogeneous model.
    #[arg(long, global = true)]
    e1: Option<usize>,
    /// Second bidegree for the bihomogeneous model.
    #[arg(long, global = true)]
    e2: Option<usize>,
    #[arg(long, global = true)]
    nu_cap: Option<usize>,
    #[arg(long, global = true, conflicts_with = "text")]
    json: bool,
    #[arg(long, global = true)]
    text: bool,
}

fn input_failure(error: Error) -> Failure {
    Failure { stage: Stage::Input, error }
}

fn read(path: &PathBuf) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| input_failure(Error::Input(format!("{}: {e}", path.display()))))
}

fn job_spec(opts: &Opts) -> Result<JobSpec, Failure> {
    let mut spec = match &opts.input {
        Some(path) => serde_json::from_str(&read(path)?).map_err(|e| input_failure(e.into()))?,
        None => {
            let fs = [&opts.f1, &opts.f2, &opts.f3, &opts.f4];
            if fs.iter().any(|f| f.is_none()) {
                return Err(input_failure(Error::Input("give --input FILE or all of --f1 --f2 --f3 --f4".into())));
            }
            JobSpec::new(fs.map(|f| f.as_deref().expect("checked")))
        }
    };
    if let Some(path) = &opts.polytope {
        let p: PolytopeJson = serde_json::from_str(&read(path)?).map_err(|e| input_failure(e.into()))?;
        spec.polytope = Some(p.vertices);
    }
    if opts.d.is_some() {
        spec.d = opts.d;
    }
    if let Some(seed) = opts.seed {
        spec.seed = seed;
    }
    match opts.field {
        Some(FieldArg::Rational) => spec.field = Field::Rational,
        Some(FieldArg::Prime) => spec.field = Field::Prime(session_prime(spec.seed)),
        None => {}
    }
    if opts.nu_cap.is_some() {
        spec.nu_cap = opts.nu_cap;
    }
    Ok(spec)
}

fn model(opts: &Opts, spec: &JobSpec) -> Result<Model, Failure> {
    Ok(match opts.model {
        ModelArg::Toric => Model::Toric,
        ModelArg::DenseHomogeneous => Model::DenseHomogeneous { degree: spec.d },
        ModelArg::Bihomogeneous => match (opts.e1, opts.e2) {
            (Some(e1), Some(e2)) => Model::Bihomogeneous { e1, e2 },
            _ => return Err(input_failure(Error::Input("the bihomogeneous model needs --e1 and --e2".into()))),
        },
    })
}

/// Writes to stdout, ignoring a closed pipe.
fn out(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn emit_json<T: Serialize>(value: &T) {
    out(&format!("{}\n", serde_json::to_string_pretty(value).expect("reports serialize")));
}

fn emit<T: Serialize + Display>(report: &T, json: bool) {
    if json {
        emit_json(report);
    } else {
        out(&report.to_string());
    }
}

fn run(cli: &Cli) -> Result<bool, Failure> {
    let spec = job_spec(&cli.opts)?;
    let job = Job::from_spec(&spec, model(&cli.opts, &spec)?)?;
    let json = cli.opts.json;
    match &cli.command {
        Command::Polytope => emit(&job.polytope_report()?, json),
        Command::Ideal => emit(&job.ideal_report()?, json),
        Command::Complex => emit(&job.complex_report()?, json),
        Command::Repmat => {
            let (nu, rep) = job.rep_matrix()?;
            if json {
                emit_json(&rep.to_json());
            } else {
                if !nu.matches_two_d() {
                    out(&format!("note: nu0 = {} differs from 2d = {}\n", nu.nu0, 2 * nu.d));
                }
                if !rep.is_generically_full_rank() {
                    out(&format!("warning: generic rank {} < {} rows; the matrix does not represent the surface\n", rep.generic_rank, rep.rows.len()));
                }
                out(&rep.to_string());
            }
        }
        Command::Implicit => emit(&job.implicit_report()?, json),
        Command::Member { x1, x2, x3, x4 } => {
            let coords = [x1, x2, x3, x4].map(String::clone);
            let point = parse_point(&coords).map_err(|error| Failure { stage: Stage::Member, error })?;
            emit(&job.member_report(&point)?, json);
        }
        Command::Verify { equation } => {
            let f = match equation {
                Some(path) => {
                    Some(parse_equation_json(&read(path)?).map_err(|error| Failure { stage: Stage::Verify, error })?)
                }
                None => None,
            };
            let report = job.verify_report(f)?;
            emit(&report, json);
            return Ok(report.verified);
        }
    }
    Ok(true)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(failure) => {
            eprintln!("error: {failure}");
            ExitCode::from(if failure.error.is_input_error() { 1 } else { 2 })
        }
    }
}
