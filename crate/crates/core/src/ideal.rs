//! Toric ideals of lattice point configurations via a binomial-only
//! Buchberger algorithm.
//!
//! The ideal is obtained by elimination: adjoin the parameters `s, t`, a
//! grading variable `z` and an inverse `w` of the product of all point
//! variables, then eliminate that block from
//!
//! ```text
//! ( x_p - z s^a t^b  for p = (a,b),   1 - w * prod_p x_p )
//! ```
//!
//! S-polynomials and reductions of binomials with unit coefficients are again
//! such binomials, so the engine never needs general polynomial arithmetic.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polytope::{lattice_points, LatticePolytope, Point};

/// Default bound on the number of lattice points of `Q`.
pub const DEFAULT_POINT_CAP: usize = 24;

pub type Exponent = Vec<u32>;

/// Block monomial order: blocks are compared in sequence, each by
/// graded reverse lexicographic order.
#[derive(Clone, Debug)]
pub struct BlockOrder {
    blocks: Vec<std::ops::Range<usize>>,
}

impl BlockOrder {
    pub fn grevlex(nvars: usize) -> Self {
        BlockOrder { blocks: vec![0..nvars] }
    }

    pub fn blocks(blocks: Vec<std::ops::Range<usize>>) -> Self {
        BlockOrder { blocks }
    }

    pub fn cmp(&self, a: &[u32], b: &[u32]) -> Ordering {
        for block in &self.blocks {
            let da: u32 = a[block.clone()].iter().sum();
            let db: u32 = b[block.clone()].iter().sum();
            match da.cmp(&db) {
                Ordering::Equal => {}
                other => return other,
            }
            for i in block.clone().rev() {
                match a[i].cmp(&b[i]) {
                    Ordering::Equal => {}
                    // smaller exponent in the last differing variable wins
                    other => return other.reverse(),
                }
            }
        }
        Ordering::Equal
    }
}

/// `x^lead - x^trail` with `lead > trail` in the active monomial order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Binomial {
    pub lead: Exponent,
    pub trail: Exponent,
}

impl Binomial {
    /// Orients `x^u - x^v` (up to sign); `None` if `u == v`.
    pub fn oriented(u: Exponent, v: Exponent, order: &BlockOrder) -> Option<Self> {
        match order.cmp(&u, &v) {
            Ordering::Greater => Some(Binomial { lead: u, trail: v }),
            Ordering::Less => Some(Binomial { lead: v, trail: u }),
            Ordering::Equal => None,
        }
    }

    pub fn degree(&self) -> u32 {
        self.lead.iter().sum::<u32>().max(self.trail.iter().sum())
    }

    fn cancel_common(&mut self) {
        for i in 0..self.lead.len() {
            let m = self.lead[i].min(self.trail[i]);
            self.lead[i] -= m;
            self.trail[i] -= m;
        }
    }

    /// Formats with the given variable names, e.g. `X2^2 - X1*X3`.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedBinomial { b: self, names }
    }
}

struct NamedBinomial<'a> {
    b: &'a Binomial,
    names: &'a [String],
}

fn write_monomial(f: &mut fmt::Formatter<'_>, e: &[u32], names: &[String]) -> fmt::Result {
    let factors: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| if k == 1 { names[i].clone() } else { format!("{}^{}", names[i], k) })
        .collect();
    if factors.is_empty() {
        write!(f, "1")
    } else {
        write!(f, "{}", factors.join("*"))
    }
}

impl fmt::Display for NamedBinomial<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_monomial(f, &self.b.lead, self.names)?;
        write!(f, " - ")?;
        write_monomial(f, &self.b.trail, self.names)
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Normal form of a monomial modulo a binomial set.
fn monomial_normal_form(mut m: Exponent, basis: &[Binomial]) -> Exponent {
    'outer: loop {
        for g in basis {
            if divides(&g.lead, &m) {
                for i in 0..m.len() {
                    m[i] = m[i] - g.lead[i] + g.trail[i];
                }
                continue 'outer;
            }
        }
        return m;
    }
}

fn reduce(b: &Binomial, basis: &[Binomial], order: &BlockOrder, cancel: bool) -> Option<Binomial> {
    let u = monomial_normal_form(b.lead.clone(), basis);
    let v = monomial_normal_form(b.trail.clone(), basis);
    let mut r = Binomial::oriented(u, v, order)?;
    if cancel {
        r.cancel_common();
        // cancelling may expose reducible terms again
        let u = monomial_normal_form(r.lead, basis);
        let v = monomial_normal_form(r.trail, basis);
        r = Binomial::oriented(u, v, order)?;
    }
    Some(r)
}

fn s_binomial(a: &Binomial, b: &Binomial, order: &BlockOrder) -> Option<Binomial> {
    let n = a.lead.len();
    let l: Exponent = (0..n).map(|i| a.lead[i].max(b.lead[i])).collect();
    let u = (0..n).map(|i| l[i] - a.lead[i] + a.trail[i]).collect();
    let v = (0..n).map(|i| l[i] - b.lead[i] + b.trail[i]).collect();
    Binomial::oriented(u, v, order)
}

/// Reduced Gröbner basis of the ideal generated by binomials with unit
/// coefficients.
///
/// With `saturated` the ideal is known to be saturated with respect to all
/// variables, and common monomial factors are cancelled along the way.
pub fn groebner_basis(gens: &[Binomial], order: &BlockOrder, saturated: bool) -> Vec<Binomial> {
    let mut basis: Vec<Binomial> = Vec::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    let push = |b: Binomial, basis: &mut Vec<Binomial>, pairs: &mut Vec<(usize, usize)>| {
        let k = basis.len();
        pairs.extend((0..k).map(|i| (i, k)));
        basis.push(b);
    };
    for g in gens {
        if let Some(r) = reduce(g, &basis, order, saturated) {
            push(r, &mut basis, &mut pairs);
        }
    }
    while let Some((i, j)) = pairs.pop() {
        let (a, b) = (&basis[i], &basis[j]);
        // coprime leading terms: the S-binomial reduces to zero
        if a.lead.iter().zip(&b.lead).all(|(x, y)| *x == 0 || *y == 0) {
            continue;
        }
        let Some(s) = s_binomial(a, b, order) else { continue };
        debug_assert!(s.lead.len() == a.lead.len());
        if let Some(r) = reduce(&s, &basis, order, saturated) {
            push(r, &mut basis, &mut pairs);
        }
    }
    interreduce(basis, order, saturated)
}

fn interreduce(mut basis: Vec<Binomial>, order: &BlockOrder, saturated: bool) -> Vec<Binomial> {
    basis.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    let mut minimal: Vec<Binomial> = Vec::new();
    for b in basis {
        if !minimal.iter().any(|m| divides(&m.lead, &b.lead)) {
            minimal.retain(|m| !divides(&b.lead, &m.lead));
            minimal.push(b);
        }
    }
    let mut reduced: Vec<Binomial> = (0..minimal.len())
        .map(|i| {
            let others: Vec<Binomial> =
                minimal.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, b)| b.clone()).collect();
            let trail = monomial_normal_form(minimal[i].trail.clone(), &others);
            let mut b = Binomial { lead: minimal[i].lead.clone(), trail };
            if saturated {
                b.cancel_common();
            }
            b
        })
        .collect();
    reduced.sort_by(|a, b| order.cmp(&a.lead, &b.lead));
    reduced
}

/// Ideal membership by normal forms; `gens` must be a Gröbner basis.
pub fn is_in_ideal(b: &Binomial, gens: &[Binomial]) -> bool {
    monomial_normal_form(b.lead.clone(), gens) == monomial_normal_form(b.trail.clone(), gens)
}

/// Generators of the toric ideal of `Q ∩ Z²`, with the point dictionary.
#[derive(Clone, Debug, Serialize)]
pub struct ToricIdeal {
    pub points: Vec<Point>,
    pub basis: Vec<Binomial>,
}

impl ToricIdeal {
    pub fn order(&self) -> BlockOrder {
        BlockOrder::grevlex(self.points.len())
    }

    pub fn names(&self) -> Vec<String> {
        (0..self.points.len()).map(|i| format!("X{i}")).collect()
    }

    pub fn contains(&self, b: &Binomial) -> bool {
        is_in_ideal(b, &self.basis)
    }

    /// Binomial `x^u - x^v` over the point variables given as `(index, power)` lists.
    pub fn binomial(&self, u: &[(usize, u32)], v: &[(usize, u32)]) -> Option<Binomial> {
        let n = self.points.len();
        let expand = |pairs: &[(usize, u32)]| {
            let mut e = vec![0u32; n];
            for &(i, k) in pairs {
                e[i] += k;
            }
            e
        };
        Binomial::oriented(expand(u), expand(v), &self.order())
    }

    /// Whether both sides map to the same point of the cone over `Q`.
    pub fn is_lattice_relation(&self, b: &Binomial) -> bool {
        let image = |e: &[u32]| {
            e.iter().zip(&self.points).fold((0i64, 0i64, 0i64), |acc, (&k, &(x, y))| {
                let k = k as i64;
                (acc.0 + k * x, acc.1 + k * y, acc.2 + k)
            })
        };
        image(&b.lead) == image(&b.trail)
    }
}

/// Gröbner basis (grevlex on the point variables) of the toric ideal of the
/// lattice points of `Q`, by elimination.
pub fn toric_generators(q: &LatticePolytope, cap: usize) -> Result<ToricIdeal> {
    q.require_full_dimensional()?;
    let points = lattice_points(q, 1);
    if points.len() > cap {
        return Err(Error::CapExceeded { points: points.len(), cap });
    }
    let n = points.len();
    // variables: s, t, z, w | x_0 .. x_{n-1}
    let (s, t, z, w) = (0, 1, 2, 3);
    let nvars = 4 + n;
    let order = BlockOrder::blocks(vec![0..4, 4..nvars]);
    let mut gens = Vec::with_capacity(n + 1);
    for (i, &(a, b)) in points.iter().enumerate() {
        let mut x = vec![0u32; nvars];
        x[4 + i] = 1;
        let mut m = vec![0u32; nvars];
        m[s] = a as u32;
        m[t] = b as u32;
        m[z] = 1;
        gens.extend(Binomial::oriented(x, m, &order));
    }
    let mut inverse = vec![1u32; nvars];
    inverse[s] = 0;
    inverse[t] = 0;
    inverse[z] = 0;
    inverse[w] = 1;
    gens.extend(Binomial::oriented(inverse, vec![0; nvars], &order));

    let full = groebner_basis(&gens, &order, true);
    let inner = BlockOrder::grevlex(n);
    let mut basis: Vec<Binomial> = full
        .into_iter()
        .filter(|b| b.lead[..4].iter().chain(&b.trail[..4]).all(|&e| e == 0))
        .filter_map(|b| Binomial::oriented(b.lead[4..].to_vec(), b.trail[4..].to_vec(), &inner))
        .collect();
    basis.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| inner.cmp(&a.lead, &b.lead)));
    Ok(ToricIdeal { points, basis })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_param_poly, ParamPoly};
    use crate::polytope::newton_polytope;

    fn small_q() -> LatticePolytope {
        LatticePolytope::hull([(0, 0), (0, 3), (1, 3)]).unwrap()
    }

    fn newton() -> LatticePolytope {
        let fs: Vec<ParamPoly> = ["s*t^6+2", "s*t^5-3*s*t^3", "s*t^4+5*s^2*t^6", "2+s^2*t^6"]
            .iter()
            .map(|s| parse_param_poly(s).unwrap())
            .collect();
        newton_polytope(&fs).unwrap()
    }

    #[test]
    fn grevlex_order() {
        let o = BlockOrder::grevlex(3);
        // x0*x2 < x1^2 in grevlex
        assert_eq!(o.cmp(&[1, 0, 1], &[0, 2, 0]), Ordering::Less);
        assert_eq!(o.cmp(&[2, 0, 0], &[0, 2, 0]), Ordering::Greater);
        assert_eq!(o.cmp(&[0, 0, 3], &[1, 0, 0]), Ordering::Greater);
        let e = BlockOrder::blocks(vec![0..1, 1..3]);
        assert_eq!(e.cmp(&[1, 0, 0], &[0, 5, 5]), Ordering::Greater);
    }

    #[test]
    fn simplex_has_no_relations() {
        let j = toric_generators(&LatticePolytope::unit_simplex(), DEFAULT_POINT_CAP).unwrap();
        assert!(j.basis.is_empty());
    }

    #[test]
    fn twisted_cubic_configuration() {
        let j = toric_generators(&small_q(), DEFAULT_POINT_CAP).unwrap();
        let listed = [
            j.binomial(&[(2, 2)], &[(1, 1), (3, 1)]).unwrap(),
            j.binomial(&[(1, 1), (2, 1)], &[(0, 1), (3, 1)]).unwrap(),
            j.binomial(&[(1, 2)], &[(0, 1), (2, 1)]).unwrap(),
        ];
        for b in &listed {
            assert!(j.contains(b), "{}", b.display_with(&j.names()));
        }
        let listed_gb = groebner_basis(&listed, &j.order(), false);
        for b in &j.basis {
            assert!(is_in_ideal(b, &listed_gb));
        }
    }

    #[test]
    fn newton_polytope_relations() {
        let j = toric_generators(&newton(), DEFAULT_POINT_CAP).unwrap();
        for b in &j.basis {
            assert!(j.is_lattice_relation(b));
            assert!(b.lead.iter().zip(&b.trail).all(|(x, y)| *x == 0 || *y == 0));
        }
        let quadrics = [
            j.binomial(&[(3, 2)], &[(2, 1), (4, 1)]).unwrap(),
            j.binomial(&[(2, 1), (3, 1)], &[(1, 1), (4, 1)]).unwrap(),
            j.binomial(&[(2, 2)], &[(1, 1), (3, 1)]).unwrap(),
            j.binomial(&[(1, 2)], &[(0, 1), (5, 1)]).unwrap(),
        ];
        for b in &quadrics {
            assert!(j.contains(b));
        }
        let quadric_gb = groebner_basis(&quadrics, &j.order(), false);
        for b in j.basis.iter().filter(|b| b.degree() <= 3) {
            assert!(is_in_ideal(b, &quadric_gb));
        }
        assert!(!j.contains(&j.binomial(&[(0, 1)], &[(4, 1)]).unwrap()));
    }

    #[test]
    fn cap_and_degeneracy() {
        let big = LatticePolytope::rectangle(4, 4).unwrap();
        assert!(matches!(toric_generators(&big, DEFAULT_POINT_CAP), Err(Error::CapExceeded { .. })));
        let seg = LatticePolytope::hull([(0, 0), (3, 0)]).unwrap();
        assert!(matches!(toric_generators(&seg, DEFAULT_POINT_CAP), Err(Error::DegeneratePolytope { .. })));
    }

    #[test]
    fn display_names() {
        let j = toric_generators(&small_q(), DEFAULT_POINT_CAP).unwrap();
        let text: Vec<String> = j.basis.iter().map(|b| b.display_with(&j.names()).to_string()).collect();
        assert!(text.iter().all(|s| s.contains(" - ")));
    }
}
