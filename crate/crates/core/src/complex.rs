//! Graded strands of the approximation complex of cycles.
//!
//! Only the graded pieces that the stopping rule and the matrix assembly
//! touch are ever built: the Koszul differentials `κ_p` on `g = (g1..g4)` in
//! a fixed internal degree, and their nullities.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{rank, rank_mod_p, QMatrix};
use crate::toric::{mult_matrix, GVector, ToricAlgebra};

/// Field over which ranks are computed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    /// Exact rational arithmetic.
    Rational,
    /// Reduction modulo a prime; fast but only probabilistically correct.
    Prime(u64),
}

/// Subsets of `{0,1,2,3}` of size `p`, in lexicographic order.
fn exterior_basis(p: usize) -> Vec<Vec<usize>> {
    let mut sets: Vec<Vec<usize>> = (0u32..16)
        .filter(|m| m.count_ones() as usize == p)
        .map(|m| (0..4).filter(|i| m & (1 << i) != 0).collect())
        .collect();
    sets.sort();
    sets
}

/// The Koszul data on `g` over the toric ring, with per-degree caches.
pub struct ComplexContext {
    algebra: ToricAlgebra,
    g: [GVector; 4],
    d: usize,
    field: Field,
    matrices: Mutex<HashMap<(usize, i64), Arc<QMatrix>>>,
    dims: Mutex<HashMap<(usize, i64), usize>>,
}

impl fmt::Debug for ComplexContext {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexContext").field("d", &self.d).field("field", &self.field).finish()
    }
}

impl ComplexContext {
    pub fn new(algebra: ToricAlgebra, g: [GVector; 4]) -> Result<Self> {
        Self::with_field(algebra, g, Field::Rational)
    }

    pub fn with_field(algebra: ToricAlgebra, g: [GVector; 4], field: Field) -> Result<Self> {
        let d = g[0].degree();
        if g.iter().any(|gi| gi.degree() != d) {
            return Err(Error::Dimension("the four coordinates must share one degree".into()));
        }
        if g.iter().all(GVector::is_zero) {
            return Err(Error::AllZero);
        }
        Ok(ComplexContext {
            algebra,
            g,
            d,
            field,
            matrices: Mutex::new(HashMap::new()),
            dims: Mutex::new(HashMap::new()),
        })
    }

    pub fn algebra(&self) -> &ToricAlgebra {
        &self.algebra
    }

    pub fn g(&self) -> &[GVector; 4] {
        &self.g
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn field(&self) -> Field {
        self.field
    }

    /// Matrix of `κ_p` in internal degree `mu`, with source
    /// `(A_{mu-pd})^{C(4,p)}` and target `(A_{mu-(p-1)d})^{C(4,p-1)}`, blocks
    /// ordered lexicographically by index set.
    pub fn koszul_matrix(&self, p: usize, mu: i64) -> Result<Arc<QMatrix>> {
        if !(1..=3).contains(&p) {
            return Err(Error::KoszulIndex(p));
        }
        if let Some(m) = self.matrices.lock().expect("cache poisoned").get(&(p, mu)) {
            return Ok(Arc::clone(m));
        }
        let m = Arc::new(self.build_koszul(p, mu));
        let mut cache = self.matrices.lock().expect("cache poisoned");
        Ok(Arc::clone(cache.entry((p, mu)).or_insert(m)))
    }

    fn build_koszul(&self, p: usize, mu: i64) -> QMatrix {
        let d = self.d as i64;
        let src_deg = mu - p as i64 * d;
        let tgt_deg = mu - (p as i64 - 1) * d;
        let src_dim = self.algebra.dim(src_deg);
        let tgt_dim = self.algebra.dim(tgt_deg);
        let sources = exterior_basis(p);
        let targets = exterior_basis(p - 1);
        let mut m = QMatrix::zeros(targets.len() * tgt_dim, sources.len() * src_dim);
        if src_dim == 0 {
            return m;
        }
        let blocks: Vec<QMatrix> =
            self.g.iter().map(|gi| mult_matrix(gi, src_deg as usize, &self.algebra)).collect();
        for (si, set) in sources.iter().enumerate() {
            for (pos, &i) in set.iter().enumerate() {
                let rest: Vec<usize> = set.iter().copied().filter(|&k| k != i).collect();
                let ti = targets.iter().position(|t| *t == rest).expect("face of an exterior basis element");
                let block = &blocks[i];
                for r in 0..tgt_dim {
                    for c in 0..src_dim {
                        let x = block.get(r, c);
                        if x.is_zero() {
                            continue;
                        }
                        let value = if pos % 2 == 0 { x.clone() } else { -x.clone() };
                        m.set(ti * tgt_dim + r, si * src_dim + c, value);
                    }
                }
            }
        }
        m
    }

    /// `z_p(mu)`: `dim A_mu` for `p = 0`, else the nullity of `κ_p` in degree `mu`.
    pub fn cycle_dim(&self, p: usize, mu: i64) -> Result<usize> {
        if p == 0 {
            return Ok(self.algebra.dim(mu));
        }
        if let Some(&z) = self.dims.lock().expect("cache poisoned").get(&(p, mu)) {
            return Ok(z);
        }
        let m = self.koszul_matrix(p, mu)?;
        let r = match self.field {
            Field::Rational => rank(&m),
            Field::Prime(q) => rank_mod_p(&m, q),
        };
        let z = m.cols() - r;
        self.dims.lock().expect("cache poisoned").insert((p, mu), z);
        Ok(z)
    }

    /// One row of the stopping-rule table at `nu`; the three cycle
    /// dimensions are computed in parallel.
    pub fn nu_row(&self, nu: usize) -> Result<NuRow> {
        let d = self.d as i64;
        let nu_i = nu as i64;
        let (z1, (z2, z3)) = rayon::join(
            || self.cycle_dim(1, nu_i + d),
            || rayon::join(|| self.cycle_dim(2, nu_i + 2 * d), || self.cycle_dim(3, nu_i + 3 * d)),
        );
        let (z1, z2, z3) = (z1?, z2?, z3?);
        let dim_a = self.algebra.dim(nu_i);
        let chi = dim_a as i64 - z1 as i64 + z2 as i64 - z3 as i64;
        Ok(NuRow { nu, dim_a, z1, z2, z3, chi })
    }

    /// Smallest `nu <= cap` where the Euler characteristic of the strand vanishes.
    pub fn find_nu0(&self, cap: usize) -> Result<NuReport> {
        let mut table = Vec::new();
        for nu in 0..=cap {
            let row = self.nu_row(nu)?;
            let done = row.chi == 0;
            table.push(row);
            if done {
                let report = NuReport { nu0: nu, d: self.d, table };
                return Ok(report);
            }
        }
        let report = NuReport { nu0: cap, d: self.d, table };
        Err(Error::NuCapExceeded { cap, table: report.table_text() })
    }

    /// `z1(nu0+d) - 2 z2(nu0+2d) + 3 z3(nu0+3d)`.
    pub fn expected_degree(&self, nu0: usize) -> Result<i64> {
        let row = self.nu_row(nu0)?;
        Ok(row.expected_degree())
    }
}

/// Default search cap for the stopping rule.
pub fn default_nu_cap(d: usize) -> usize {
    4 * d + 8
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NuRow {
    pub nu: usize,
    pub dim_a: usize,
    pub z1: usize,
    pub z2: usize,
    pub z3: usize,
    pub chi: i64,
}

impl NuRow {
    pub fn expected_degree(&self) -> i64 {
        self.z1 as i64 - 2 * self.z2 as i64 + 3 * self.z3 as i64
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NuReport {
    pub nu0: usize,
    pub d: usize,
    pub table: Vec<NuRow>,
}

impl NuReport {
    pub fn last(&self) -> &NuRow {
        self.table.last().expect("table has at least one row")
    }

    pub fn expected_degree(&self) -> i64 {
        self.last().expected_degree()
    }

    /// Whether the loop result agrees with the closed-form guess `2d`.
    pub fn matches_two_d(&self) -> bool {
        self.nu0 == 2 * self.d
    }

    pub fn table_text(&self) -> String {
        let mut out = format!("{:>4} {:>8} {:>8} {:>8} {:>8} {:>6}\n", "nu", "dim A", "z1", "z2", "z3", "chi");
        for r in &self.table {
            out.push_str(&format!(
                "{:>4} {:>8} {:>8} {:>8} {:>8} {:>6}\n",
                r.nu, r.dim_a, r.z1, r.z2, r.z3, r.chi
            ));
        }
        out
    }
}

impl fmt::Display for NuReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.table_text())?;
        writeln!(f, "nu0 = {}", self.nu0)?;
        writeln!(f, "expected degree = {}", self.expected_degree())?;
        if !self.matches_two_d() {
            writeln!(f, "note: nu0 differs from 2d = {}", 2 * self.d)?;
        }
        Ok(())
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::arith::{parse_param_poly, prime::random_prime, ParamPoly};
    use crate::linalg::nullspace_basis;
    use crate::polytope::{newton_polytope, LatticePolytope};
    use crate::toric::reparametrize;
    use rand::SeedableRng;

    pub(crate) fn example_params() -> [ParamPoly; 4] {
        ["s*t^6+2", "s*t^5-3*s*t^3", "s*t^4+5*s^2*t^6", "2+s^2*t^6"].map(|s| parse_param_poly(s).unwrap())
    }

    pub(crate) fn context(fs: &[ParamPoly; 4], q: LatticePolytope, d: usize, field: Field) -> ComplexContext {
        let g = reparametrize(fs, &q, d).unwrap();
        ComplexContext::with_field(ToricAlgebra::new(q).unwrap(), g, field).unwrap()
    }

    pub(crate) fn example_ctx() -> ComplexContext {
        let fs = example_params();
        let q = newton_polytope(&fs).unwrap();
        context(&fs, q, 1, Field::Rational)
    }

    pub(crate) fn plane_ctx() -> ComplexContext {
        let fs = ["s", "t", "1", "s+t"].map(|s| parse_param_poly(s).unwrap());
        context(&fs, LatticePolytope::unit_simplex(), 1, Field::Rational)
    }

    fn small_q() -> LatticePolytope {
        LatticePolytope::hull([(0, 0), (0, 3), (1, 3)]).unwrap()
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(12))]
        #[test]
        fn koszul_differentials_compose_to_zero(coeffs in proptest::collection::vec(-4i64..=4, 24)) {
            let monomials = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
            let fs: [ParamPoly; 4] = [0, 1, 2, 3].map(|i| {
                ParamPoly::from_terms(monomials.iter().enumerate().map(|(j, &m)| (m, crate::arith::rat(coeffs[6 * i + j]))))
            });
            proptest::prop_assume!(fs.iter().all(|f| !f.is_zero()));
            let ctx = context(&fs, LatticePolytope::unit_simplex(), 2, Field::Rational);
            for mu in 0..=4 {
                for p in 2..=3 {
                    let product = ctx.koszul_matrix(p - 1, mu).unwrap().mul(&ctx.koszul_matrix(p, mu).unwrap()).unwrap();
                    proptest::prop_assert!(product.is_zero(), "p = {}, mu = {}", p, mu);
                }
            }
        }
    }

    #[test]
    fn exterior_basis_order() {
        assert_eq!(exterior_basis(0), vec![Vec::<usize>::new()]);
        assert_eq!(exterior_basis(2).len(), 6);
        assert_eq!(exterior_basis(2)[0], vec![0, 1]);
        assert_eq!(exterior_basis(3)[3], vec![1, 2, 3]);
    }

    #[test]
    fn plane_first_differential() {
        let ctx = plane_ctx();
        let k = ctx.koszul_matrix(1, 1).unwrap();
        assert_eq!((k.rows(), k.cols()), (3, 4));
        assert_eq!(nullspace_basis(&k).len(), 1);
        assert_eq!(ctx.cycle_dim(1, 0).unwrap(), 0);
        let report = ctx.find_nu0(default_nu_cap(1)).unwrap();
        assert_eq!(report.nu0, 0);
        assert_eq!(report.expected_degree(), 1);
    }

    #[test]
    fn example_strand_dimensions() {
        let ctx = example_ctx();
        assert_eq!(ctx.cycle_dim(0, 2).unwrap(), 17);
        let k1 = ctx.koszul_matrix(1, 3).unwrap();
        assert_eq!((k1.rows(), k1.cols()), (34, 68));
        assert_eq!(ctx.cycle_dim(1, 3).unwrap(), 34);
        assert_eq!(ctx.cycle_dim(2, 4).unwrap(), 23);
        assert_eq!(ctx.cycle_dim(3, 5).unwrap(), 6);
        let report = ctx.find_nu0(default_nu_cap(1)).unwrap();
        assert_eq!(report.nu0, 2);
        let row = *report.last();
        assert_eq!((row.dim_a, row.z1, row.z2, row.z3, row.chi), (17, 34, 23, 6, 0));
        assert_eq!(report.expected_degree(), 6);
        assert!(report.table[..2].iter().all(|r| r.chi != 0));
    }

    #[test]
    fn small_polytope_strand() {
        let ctx = context(&example_params(), small_q(), 2, Field::Rational);
        let report = ctx.find_nu0(default_nu_cap(2)).unwrap();
        assert_eq!(report.nu0, 2);
        assert_eq!(report.last().dim_a, 12);
        assert_eq!(report.last().z1, 19);
    }

    #[test]
    fn differentials_compose_to_zero() {
        for ctx in [example_ctx(), plane_ctx()] {
            let d = ctx.d() as i64;
            for mu in 0..=(2 + 3 * d) {
                for p in 2..=3 {
                    let outer = ctx.koszul_matrix(p - 1, mu).unwrap();
                    let inner = ctx.koszul_matrix(p, mu).unwrap();
                    assert!(outer.mul(&inner).unwrap().is_zero(), "p={p} mu={mu}");
                }
            }
        }
    }

    #[test]
    fn euler_characteristic_stays_zero() {
        let ctx = example_ctx();
        for nu in 2..=4 {
            assert_eq!(ctx.nu_row(nu).unwrap().chi, 0);
        }
    }

    #[test]
    fn prime_field_agrees() {
        let fs = example_params();
        let q = newton_polytope(&fs).unwrap();
        let p = random_prime(&mut rand_chacha::ChaCha8Rng::seed_from_u64(7));
        let exact = example_ctx();
        let modular = context(&fs, q, 1, Field::Prime(p));
        for mu in 0..6 {
            for k in 0..=3 {
                assert_eq!(exact.cycle_dim(k, mu).unwrap(), modular.cycle_dim(k, mu).unwrap());
            }
        }
    }

    #[test]
    fn index_out_of_range() {
        assert!(matches!(plane_ctx().koszul_matrix(4, 3), Err(Error::KoszulIndex(4))));
        assert!(matches!(plane_ctx().koszul_matrix(0, 3), Err(Error::KoszulIndex(0))));
    }

    #[test]
    fn cap_exceeded_reports_table() {
        // ν0 for the example is 2, so a cap of 1 must fail with the table attached
        match example_ctx().find_nu0(1) {
            Err(Error::NuCapExceeded { cap: 1, table }) => assert_eq!(table.lines().count(), 3),
            other => panic!("unexpected {other:?}"),
        }
    }
}
