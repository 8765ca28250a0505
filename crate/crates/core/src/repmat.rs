//! The representation matrix `M(T) = T1 M1 + T2 M2 + T3 M3 + T4 M4` and the
//! drop-of-rank membership test.

use std::fmt;

use num_traits::{One, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::arith::{parse_rational, random_rational, rational_to_string, ParamPoly, Rational, SAMPLE_BOUND};
use crate::complex::ComplexContext;
use crate::error::{Error, Result};
use crate::linalg::{nullspace_basis, rank, QMatrix};
use crate::polytope::{LatticePolytope, Point};
use crate::toric::{mult_matrix, GVector, ToricAlgebra};

/// Random points tried before declaring the pencil rank deficient.
const FULL_RANK_TRIALS: usize = 3;

/// A point of P³, normalized so that its first nonzero coordinate is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P3Point([Rational; 4]);

impl P3Point {
    pub fn new(coords: [Rational; 4]) -> Result<Self> {
        let Some(lead) = coords.iter().find(|x| !x.is_zero()).cloned() else {
            return Err(Error::Input("the zero vector is not a point of P^3".into()));
        };
        Ok(P3Point(coords.map(|x| x / &lead)))
    }

    pub fn from_i64(coords: [i64; 4]) -> Result<Self> {
        Self::new(coords.map(crate::arith::rat))
    }

    /// Image of `(s,t)` under the parametrization, if defined and nonzero.
    pub fn image(fs: &[ParamPoly; 4], s: &Rational, t: &Rational) -> Option<Self> {
        if (s.is_zero() && fs.iter().any(|f| f.support().any(|(a, _)| a < 0)))
            || (t.is_zero() && fs.iter().any(|f| f.support().any(|(_, b)| b < 0)))
        {
            return None;
        }
        Self::new([0, 1, 2, 3].map(|i| fs[i].eval(s, t))).ok()
    }

    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        Self::new([(); 4].map(|_| random_rational(rng, SAMPLE_BOUND))).expect("nonzero coordinates")
    }

    pub fn coords(&self) -> &[Rational; 4] {
        &self.0
    }
}

impl fmt::Display for P3Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let c: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", c.join(" : "))
    }
}

/// Four coefficient matrices of one shape.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Pencil {
    mats: [QMatrix; 4],
}

impl Pencil {
    pub fn new(mats: [QMatrix; 4]) -> Result<Self> {
        let shape = (mats[0].rows(), mats[0].cols());
        if mats.iter().any(|m| (m.rows(), m.cols()) != shape) {
            return Err(Error::Dimension("pencil matrices differ in shape".into()));
        }
        Ok(Pencil { mats })
    }

    pub fn rows(&self) -> usize {
        self.mats[0].rows()
    }

    pub fn cols(&self) -> usize {
        self.mats[0].cols()
    }

    pub fn coefficient(&self, i: usize) -> &QMatrix {
        &self.mats[i]
    }

    pub fn coefficients(&self) -> &[QMatrix; 4] {
        &self.mats
    }

    /// `Σ c_i M_i` for arbitrary (not necessarily projective) coordinates.
    pub fn evaluate_coords(&self, c: &[Rational; 4]) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows(), self.cols());
        for i in 0..self.rows() {
            for j in 0..self.cols() {
                let mut acc = Rational::zero();
                for (k, m) in self.mats.iter().enumerate() {
                    let x = m.get(i, j);
                    if !x.is_zero() && !c[k].is_zero() {
                        acc += x * &c[k];
                    }
                }
                out.set(i, j, acc);
            }
        }
        out
    }

    pub fn evaluate(&self, p: &P3Point) -> QMatrix {
        self.evaluate_coords(p.coords())
    }

    pub fn rank_at(&self, p: &P3Point) -> RankReport {
        let r = rank(&self.evaluate(p));
        RankReport { rank: r, rows: self.rows(), is_member: r < self.rows() }
    }
}

/// Result of the drop-of-rank test.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RankReport {
    pub rank: usize,
    pub rows: usize,
    pub is_member: bool,
}

/// The representation matrix of the degree-`nu0` strand.
#[derive(Clone, Debug)]
pub struct RepMatrix {
    pub nu0: usize,
    pub d: usize,
    pub polytope: LatticePolytope,
    pub rows: Vec<Point>,
    pub g: [GVector; 4],
    pub pencil: Pencil,
    /// Largest rank seen at random points; equals the row count when the
    /// matrix is generically of full row rank.
    pub generic_rank: usize,
}

impl RepMatrix {
    pub fn is_generically_full_rank(&self) -> bool {
        self.generic_rank == self.pencil.rows()
    }

    /// `Ok` when generically of full row rank, [`Error::RankDeficient`] otherwise.
    pub fn require_full_rank(&self) -> Result<()> {
        if self.is_generically_full_rank() {
            Ok(())
        } else {
            Err(Error::RankDeficient { rank: self.generic_rank, rows: self.pencil.rows() })
        }
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.pencil.rows(), self.pencil.cols())
    }

    pub fn evaluate(&self, p: &P3Point) -> QMatrix {
        self.pencil.evaluate(p)
    }

    pub fn rank_at(&self, p: &P3Point) -> RankReport {
        self.pencil.rank_at(p)
    }

    pub fn params(&self) -> [ParamPoly; 4] {
        self.g.clone().map(|g| g.to_param_poly())
    }

    /// Column `j` split into its four blocks, one per coordinate.
    pub fn syzygy(&self, j: usize) -> [Vec<Rational>; 4] {
        [0, 1, 2, 3].map(|i| self.pencil.mats[i].column(j))
    }

    /// Exact check that every column is a syzygy of `g` in degree `nu0 + d`.
    pub fn check_syzygies(&self, alg: &ToricAlgebra) -> bool {
        let mults: Vec<QMatrix> = self.g.iter().map(|gi| mult_matrix(gi, self.nu0, alg)).collect();
        (0..self.pencil.cols()).all(|j| {
            let blocks = self.syzygy(j);
            let mut acc = vec![Rational::zero(); alg.dim((self.nu0 + self.d) as i64)];
            for (m, b) in mults.iter().zip(&blocks) {
                for (a, x) in acc.iter_mut().zip(m.mul_vec(b)) {
                    *a += x;
                }
            }
            acc.iter().all(Zero::is_zero)
        })
    }

    pub fn to_json(&self) -> RepMatrixJson {
        let mat = |m: &QMatrix| -> Vec<Vec<String>> {
            (0..m.rows()).map(|i| m.row(i).iter().map(rational_to_string).collect()).collect()
        };
        RepMatrixJson {
            nu0: self.nu0,
            d: self.d,
            rows: self.rows.iter().map(|&(x, y)| [x, y]).collect(),
            cols: self.pencil.cols(),
            m: PencilJson {
                t1: mat(&self.pencil.mats[0]),
                t2: mat(&self.pencil.mats[1]),
                t3: mat(&self.pencil.mats[2]),
                t4: mat(&self.pencil.mats[3]),
            },
        }
    }
}

impl fmt::Display for RepMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (r, c) = self.shape();
        writeln!(f, "nu0 = {}, d = {}, shape = {r} x {c}", self.nu0, self.d)?;
        let names = ["T1", "T2", "T3", "T4"];
        for i in 0..r {
            let cells: Vec<String> = (0..c)
                .map(|j| {
                    let terms: Vec<String> = (0..4)
                        .filter_map(|k| {
                            let x = self.pencil.mats[k].get(i, j);
                            if x.is_zero() {
                                None
                            } else if x.is_one() {
                                Some(names[k].to_string())
                            } else if (-x).is_one() {
                                Some(format!("-{}", names[k]))
                            } else {
                                Some(format!("{x}*{}", names[k]))
                            }
                        })
                        .collect();
                    if terms.is_empty() {
                        "0".into()
                    } else {
                        terms.join("+").replace("+-", "-")
                    }
                })
                .collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PencilJson {
    #[serde(rename = "T1")]
    pub t1: Vec<Vec<String>>,
    #[serde(rename = "T2")]
    pub t2: Vec<Vec<String>>,
    #[serde(rename = "T3")]
    pub t3: Vec<Vec<String>>,
    #[serde(rename = "T4")]
    pub t4: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepMatrixJson {
    pub nu0: usize,
    pub d: usize,
    pub rows: Vec<[i64; 2]>,
    pub cols: usize,
    #[serde(rename = "M")]
    pub m: PencilJson,
}

impl RepMatrixJson {
    /// Recovers the pencil; metadata other than the shape is not checked.
    pub fn pencil(&self) -> Result<Pencil> {
        let parse = |rows: &Vec<Vec<String>>| -> Result<QMatrix> {
            let data = rows
                .iter()
                .map(|r| {
                    r.iter()
                        .map(|s| parse_rational(s).ok_or_else(|| Error::Input(format!("bad rational {s:?}"))))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            if data.len() != self.rows.len() || data.iter().any(|r| r.len() != self.cols) {
                return Err(Error::Dimension("matrix does not match the declared shape".into()));
            }
            if data.is_empty() {
                return Ok(QMatrix::zeros(0, self.cols));
            }
            QMatrix::from_rows(data)
        };
        Pencil::new([parse(&self.m.t1)?, parse(&self.m.t2)?, parse(&self.m.t3)?, parse(&self.m.t4)?])
    }
}

/// Assembles the pencil from the canonical nullspace basis of `κ1` in degree
/// `nu0 + d` and records its rank at random points (see
/// [`RepMatrix::is_generically_full_rank`]).
pub fn build_rep_matrix<R: Rng + ?Sized>(ctx: &ComplexContext, nu0: usize, rng: &mut R) -> Result<RepMatrix> {
    let d = ctx.d();
    let k1 = ctx.koszul_matrix(1, (nu0 + d) as i64)?;
    let basis = ctx.algebra().basis(nu0);
    let n = basis.len();
    let syz = nullspace_basis(&k1);
    if syz.is_empty() {
        return Err(Error::NoColumns);
    }
    let mut mats = [(); 4].map(|_| QMatrix::zeros(n, syz.len()));
    for (j, v) in syz.iter().enumerate() {
        for (i, m) in mats.iter_mut().enumerate() {
            for r in 0..n {
                let x = &v[i * n + r];
                if !x.is_zero() {
                    m.set(r, j, x.clone());
                }
            }
        }
    }
    let pencil = Pencil::new(mats)?;
    let mut generic_rank = 0;
    for _ in 0..FULL_RANK_TRIALS {
        generic_rank = generic_rank.max(pencil.rank_at(&P3Point::random(rng)).rank);
        if generic_rank == n {
            break;
        }
    }
    Ok(RepMatrix {
        nu0,
        d,
        polytope: ctx.algebra().polytope().clone(),
        rows: basis.points().to_vec(),
        g: ctx.g().clone(),
        pencil,
        generic_rank,
    })
}
