//! The graded toric coordinate ring of a lattice polygon, realized
//! combinatorially.
//!
//! Lattice polygons are normal, so the degree-`n` piece of the semigroup ring
//! of `Q` has the lattice points of `n·Q` as a monomial basis and
//! multiplication of monomials is addition of points. No quotient-ring
//! arithmetic is needed.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::sync::{Arc, RwLock};

use num_traits::Zero;
use serde::Serialize;

use crate::arith::{ParamPoly, Rational};
use crate::error::{Error, Result};
use crate::linalg::QMatrix;
use crate::polytope::{lattice_points, LatticePolytope, Point};

/// Ordered monomial basis of the graded piece `A_degree`.
#[derive(Debug)]
pub struct GradedBasis {
    degree: usize,
    points: Vec<Point>,
    index: HashMap<Point, usize>,
}

impl GradedBasis {
    fn new(degree: usize, points: Vec<Point>) -> Self {
        let index = points.iter().enumerate().map(|(i, &p)| (p, i)).collect();
        GradedBasis { degree, points, index }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn index_of(&self, p: Point) -> Option<usize> {
        self.index.get(&p).copied()
    }
}

/// Toric coordinate ring `A` of a polygon `Q` with cached graded bases.
#[derive(Debug)]
pub struct ToricAlgebra {
    polytope: LatticePolytope,
    bases: RwLock<HashMap<usize, Arc<GradedBasis>>>,
}

impl ToricAlgebra {
    pub fn new(polytope: LatticePolytope) -> Result<Self> {
        polytope.require_full_dimensional()?;
        Ok(ToricAlgebra { polytope, bases: RwLock::new(HashMap::new()) })
    }

    pub fn polytope(&self) -> &LatticePolytope {
        &self.polytope
    }

    /// Basis of `A_n`; `A_0` is spanned by the single point `(0,0)`.
    pub fn basis(&self, n: usize) -> Arc<GradedBasis> {
        if let Some(b) = self.bases.read().expect("basis cache poisoned").get(&n) {
            return Arc::clone(b);
        }
        let fresh = Arc::new(GradedBasis::new(n, lattice_points(&self.polytope, n)));
        let mut cache = self.bases.write().expect("basis cache poisoned");
        Arc::clone(cache.entry(n).or_insert(fresh))
    }

    /// `dim A_n`, zero for negative degrees.
    pub fn dim(&self, n: i64) -> usize {
        if n < 0 {
            0
        } else {
            self.basis(n as usize).len()
        }
    }
}

/// A reparametrized coordinate `g_i ∈ A_d`, as coefficients on the lattice
/// points of `d·Q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GVector {
    degree: usize,
    coeffs: BTreeMap<Point, Rational>,
}

impl GVector {
    pub fn new(degree: usize, coeffs: BTreeMap<Point, Rational>) -> Self {
        let coeffs = coeffs.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        GVector { degree, coeffs }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn coeffs(&self) -> &BTreeMap<Point, Rational> {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Reads the lattice points back as exponents `s^a t^b`.
    pub fn to_param_poly(&self) -> ParamPoly {
        ParamPoly::from_terms(self.coeffs.iter().map(|(&p, c)| (p, c.clone())))
    }
}

/// Rewrites each `f_i` as an element of `A_d`: the term `c·s^a t^b` becomes
/// coefficient `c` at the point `(a,b)` of `d·Q`.
pub fn reparametrize(fs: &[ParamPoly; 4], q: &LatticePolytope, d: usize) -> Result<[GVector; 4]> {
    if d == 0 {
        return Err(Error::Input("degree d must be positive".into()));
    }
    let dq = q.scaled(d as i64);
    for f in fs {
        if let Some((a, b)) = f.support().find(|&p| !dq.contains(p)) {
            return Err(Error::NotContained(a, b));
        }
    }
    Ok(fs.clone().map(|f| GVector::new(d, f.terms().map(|(&p, c)| (p, c.clone())).collect())))
}

/// Matrix of multiplication by `g` from `A_ν` to `A_{ν+d}`.
pub fn mult_matrix(g: &GVector, nu: usize, alg: &ToricAlgebra) -> QMatrix {
    let source = alg.basis(nu);
    let target = alg.basis(nu + g.degree);
    let mut m = QMatrix::zeros(target.len(), source.len());
    for (j, &(x, y)) in source.points().iter().enumerate() {
        for (&(a, b), c) in &g.coeffs {
            let i = target
                .index_of((x + a, y + b))
                .expect("product of lattice points of nu*Q and d*Q lies in (nu+d)*Q");
            m.set(i, j, c.clone());
        }
    }
    m
}

/// Brute-force check that every lattice point of `n·Q` is a sum of `n`
/// lattice points of `Q`, for `n = 1..=max_n`.
pub fn check_normality(q: &LatticePolytope, max_n: usize) -> bool {
    let generators = lattice_points(q, 1);
    let mut sums: BTreeSet<Point> = std::iter::once((0, 0)).collect();
    for n in 1..=max_n {
        sums = sums
            .iter()
            .flat_map(|&(x, y)| generators.iter().map(move |&(a, b)| (x + a, y + b)))
            .collect();
        let expected: BTreeSet<Point> = lattice_points(q, n).into_iter().collect();
        if sums != expected {
            return false;
        }
    }
    true
}

/// One entry of the variable dictionary `X_i ↔ lattice point`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariableName {
    pub name: String,
    pub point: [i64; 2],
}

/// Names `X0, X1, …` for the lattice points of `Q` in basis order.
pub fn variable_dictionary(q: &LatticePolytope) -> Vec<VariableName> {
    lattice_points(q, 1)
        .into_iter()
        .enumerate()
        .map(|(i, (x, y))| VariableName { name: format!("X{i}"), point: [x, y] })
        .collect()
}
