//! Implicit equation from the representation matrix: gcd of maximal minors,
//! extraneous factor detection and verification by substitution.

mod gcd;
mod minors;
mod modular;
mod oracle;

pub use gcd::{gcd_degree, gcd_forms};
pub use minors::{minor_determinant, mixed_minor, select_columns_in_order, select_max_cols};
pub use oracle::{interpolation_oracle, minimal_vanishing_degree, monomials};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{substitute_params, ParamPoly, TPoly};
use crate::error::{Error, Result};
use crate::repmat::RepMatrix;

/// Bounded retry budget for degenerate random draws.
pub const RETRY_BUDGET: usize = 8;

/// Upper bound on the number of maximal minors folded into the gcd.
const MAX_MINORS: usize = 6;

/// Outcome of implicitization.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ImplicitResult {
    /// Primitive integer implicit equation with positive lex-leading coefficient.
    pub f: TPoly,
    /// Normalized gcd of the maximal minors; a multiple of `f`.
    pub gcd: TPoly,
    /// The first maximal minor determinant.
    pub d: TPoly,
    /// Columns of the first maximal minor.
    pub columns: Vec<usize>,
    /// Largest `δ` with `F^δ | D`.
    pub delta: u32,
    /// `D / F^δ`; a constant when there is no extraneous factor.
    pub extraneous: TPoly,
    pub minors_used: usize,
    pub verified: bool,
}

impl ImplicitResult {
    pub fn degree(&self) -> u32 {
        self.f.total_degree()
    }

    /// Degree of `D / F^δ`.
    pub fn extraneous_degree(&self) -> u32 {
        self.extraneous.total_degree()
    }

    pub fn gcd_degree(&self) -> u32 {
        self.gcd.total_degree()
    }

    /// Whether the gcd of the maximal minors is a proper multiple of `F`.
    pub fn has_extraneous_factor(&self) -> bool {
        self.gcd != self.f
    }

    pub fn to_json(&self) -> ImplicitJson {
        ImplicitJson {
            f: FormJson::from(&self.f),
            delta: self.delta,
            g_degree: self.extraneous_degree(),
            gcd_degree: self.gcd_degree(),
            verified: self.verified,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: [u32; 4],
    pub coeff: String,
}

/// `{"degree": n, "terms": [{"exp": [a,b,c,d], "coeff": "int"}, ...]}`, terms
/// in descending lexicographic order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FormJson {
    pub degree: u32,
    pub terms: Vec<TermJson>,
}

impl From<&TPoly> for FormJson {
    fn from(f: &TPoly) -> Self {
        let n = f.normalized();
        FormJson {
            degree: n.total_degree(),
            terms: n
                .terms()
                .rev()
                .map(|(e, c)| TermJson { exp: *e, coeff: c.to_integer().to_string() })
                .collect(),
        }
    }
}

impl FormJson {
    pub fn to_tpoly(&self) -> Result<TPoly> {
        let mut f = TPoly::zero();
        for t in &self.terms {
            let c = crate::arith::parse_rational(&t.coeff)
                .ok_or_else(|| Error::Input(format!("bad coefficient {:?}", t.coeff)))?;
            f.add_term(t.exp, c);
        }
        Ok(f)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImplicitJson {
    #[serde(rename = "F")]
    pub f: FormJson,
    pub delta: u32,
    #[serde(rename = "G_degree")]
    pub g_degree: u32,
    pub gcd_degree: u32,
    pub verified: bool,
}

/// True iff `F(f1, ..., f4)` vanishes identically.
pub fn verify_implicit(f: &TPoly, fs: &[ParamPoly; 4]) -> bool {
    substitute_params(f, fs).is_zero()
}

/// Gcd of maximal minors of the pencil.
///
/// `D` is the minor on greedily selected columns. Further minors are generic
/// combinations of all maximal minors ([`mixed_minor`]); they are folded into
/// the gcd until its degree is unchanged by one more of them. Plain column
/// subsets are not used for this because they can share factors that the
/// full set of minors does not.
pub fn implicit_equation<R: Rng + ?Sized>(rep: &RepMatrix, rng: &mut R) -> Result<ImplicitResult> {
    rep.require_full_rank()?;
    let columns = select_max_cols(&rep.pencil, rng)?;
    let d = minor_determinant(&rep.pencil, &columns)?;
    if d.is_zero() {
        return Err(Error::Interpolation("selected minor vanishes identically".into()));
    }
    let mut g = d.normalized();
    let mut minors_used = 1;
    if rep.pencil.cols() > rep.pencil.rows() {
        let mut previous: Option<u32> = None;
        while minors_used < MAX_MINORS {
            let next = mixed_minor(&rep.pencil, rng)?;
            minors_used += 1;
            if next.is_zero() {
                continue;
            }
            g = gcd_forms(&[g, next], rng)?;
            let deg = g.total_degree();
            if deg == 0 {
                return Err(Error::ConstantGcd);
            }
            if previous == Some(deg) {
                break;
            }
            previous = Some(deg);
        }
    }
    if g.total_degree() == 0 {
        return Err(Error::ConstantGcd);
    }
    let gcd = g.normalized();
    let params = rep.params();
    let verified_gcd = verify_implicit(&gcd, &params);
    let f = if verified_gcd { vanishing_factor(&gcd, &params, rng) } else { gcd.clone() };
    let mut delta = 0;
    let mut rest = d.clone();
    while let Some(q) = rest.div_exact(&f) {
        rest = q;
        delta += 1;
    }
    let verified = verified_gcd && (f == gcd || verify_implicit(&f, &params));
    Ok(ImplicitResult { f, gcd, d, columns, delta, extraneous: rest, minors_used, verified })
}

/// The factor of `gcd` defining the surface: the vanishing form of least
/// degree, recovered by interpolation when that degree is below `deg gcd` and
/// accepted only if it divides `gcd`.
fn vanishing_factor<R: Rng + ?Sized>(gcd: &TPoly, params: &[ParamPoly; 4], rng: &mut R) -> TPoly {
    let deg = gcd.total_degree();
    let e = minimal_vanishing_degree(params, deg, rng.gen());
    if e < deg {
        if let Some(f) = interpolation_oracle(params, e, rng.gen()) {
            if gcd.div_exact(&f).is_some() {
                return f;
            }
        }
    }
    gcd.clone()
}
