//! Two-dimensional lattice polytopes: Newton polytopes, dilates, lattice
//! points, homotheties and containment.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith::ParamPoly;
use crate::error::{Error, Result};

pub type Point = (i64, i64);

/// Convex lattice polygon given by its minimal vertex list, counterclockwise
/// and starting from the lexicographically smallest vertex.
///
/// Segments and single points are representable; [`LatticePolytope::dimension`]
/// reports them as degenerate.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LatticePolytope {
    vertices: Vec<Point>,
}

fn cross(o: Point, a: Point, b: Point) -> i128 {
    (a.0 - o.0) as i128 * (b.1 - o.1) as i128 - (a.1 - o.1) as i128 * (b.0 - o.0) as i128
}

/// Monotone chain; collinear boundary points are dropped.
fn convex_hull(mut pts: Vec<Point>) -> Vec<Point> {
    pts.sort_unstable();
    pts.dedup();
    if pts.len() <= 2 {
        return pts;
    }
    let mut hull: Vec<Point> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

impl LatticePolytope {
    /// Convex hull of a nonempty point set.
    pub fn hull<I: IntoIterator<Item = Point>>(points: I) -> Result<Self> {
        let pts: Vec<Point> = points.into_iter().collect();
        if pts.is_empty() {
            return Err(Error::Input("convex hull of an empty point set".into()));
        }
        Ok(LatticePolytope { vertices: convex_hull(pts) })
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// 0 for a point, 1 for a segment, 2 otherwise.
    pub fn dimension(&self) -> usize {
        self.vertices.len().min(3) - 1
    }

    pub fn is_degenerate(&self) -> bool {
        self.dimension() < 2
    }

    pub fn require_full_dimensional(&self) -> Result<()> {
        if self.is_degenerate() {
            return Err(Error::DegeneratePolytope { dim: self.dimension() });
        }
        Ok(())
    }

    pub fn scaled(&self, n: i64) -> LatticePolytope {
        if n == 0 {
            return LatticePolytope { vertices: vec![(0, 0)] };
        }
        LatticePolytope { vertices: self.vertices.iter().map(|&(x, y)| (n * x, n * y)).collect() }
    }

    pub fn translated(&self, (dx, dy): Point) -> LatticePolytope {
        LatticePolytope { vertices: self.vertices.iter().map(|&(x, y)| (x + dx, y + dy)).collect() }
    }

    /// Edge inequalities `a*x + b*y <= c` of a full-dimensional polygon.
    fn half_planes(&self) -> Vec<(i64, i64, i64)> {
        let n = self.vertices.len();
        (0..n)
            .map(|i| {
                let v = self.vertices[i];
                let w = self.vertices[(i + 1) % n];
                let (ex, ey) = (w.0 - v.0, w.1 - v.1);
                (ey, -ex, ey * v.0 - ex * v.1)
            })
            .collect()
    }

    pub fn contains(&self, p: Point) -> bool {
        match self.vertices.as_slice() {
            [v] => *v == p,
            [u, v] => {
                cross(*u, *v, p) == 0
                    && p.0 >= u.0.min(v.0)
                    && p.0 <= u.0.max(v.0)
                    && p.1 >= u.1.min(v.1)
                    && p.1 <= u.1.max(v.1)
            }
            _ => self.half_planes().iter().all(|&(a, b, c)| a * p.0 + b * p.1 <= c),
        }
    }

    /// Lattice points of this polytope, sorted lexicographically.
    pub fn points(&self) -> Vec<Point> {
        match self.vertices.as_slice() {
            [v] => vec![*v],
            [u, v] => {
                let (dx, dy) = (v.0 - u.0, v.1 - u.1);
                let g = dx.abs().gcd(&dy.abs());
                (0..=g).map(|k| (u.0 + k * dx / g, u.1 + k * dy / g)).collect()
            }
            _ => {
                let planes = self.half_planes();
                let xmin = self.vertices.iter().map(|v| v.0).min().expect("nonempty");
                let xmax = self.vertices.iter().map(|v| v.0).max().expect("nonempty");
                let mut out = Vec::new();
                for x in xmin..=xmax {
                    let (mut lo, mut hi) = (i64::MIN, i64::MAX);
                    for &(a, b, c) in &planes {
                        let rhs = c - a * x;
                        match b.signum() {
                            1 => hi = hi.min(Integer::div_floor(&rhs, &b)),
                            -1 => lo = lo.max(Integer::div_ceil(&rhs, &b)),
                            _ => {
                                if rhs < 0 {
                                    hi = i64::MIN;
                                }
                            }
                        }
                    }
                    if lo <= hi {
                        out.extend((lo..=hi).map(|y| (x, y)));
                    }
                }
                out
            }
        }
    }

    /// Twice the area (shoelace).
    pub fn twice_area(&self) -> i64 {
        let n = self.vertices.len();
        if n < 3 {
            return 0;
        }
        (0..n)
            .map(|i| {
                let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                a.0 * b.1 - a.1 * b.0
            })
            .sum::<i64>()
            .abs()
    }

    /// Number of lattice points on the boundary.
    pub fn boundary_points(&self) -> i64 {
        let n = self.vertices.len();
        match n {
            1 => 1,
            2 => {
                let (u, v) = (self.vertices[0], self.vertices[1]);
                (v.0 - u.0).abs().gcd(&(v.1 - u.1).abs()) + 1
            }
            _ => (0..n)
                .map(|i| {
                    let (a, b) = (self.vertices[i], self.vertices[(i + 1) % n]);
                    (b.0 - a.0).abs().gcd(&(b.1 - a.1).abs())
                })
                .sum(),
        }
    }

    /// Ehrhart count `Area·n² + (B/2)·n + 1` of lattice points in `n·P`, for
    /// a full-dimensional polygon.
    pub fn ehrhart(&self, n: i64) -> i64 {
        (self.twice_area() * n * n + self.boundary_points() * n) / 2 + 1
    }

    /// The standard simplex `conv{(0,0),(1,0),(0,1)}`.
    pub fn unit_simplex() -> Self {
        LatticePolytope { vertices: vec![(0, 0), (1, 0), (0, 1)] }
    }

    /// The rectangle `[0,a] x [0,b]`.
    pub fn rectangle(a: i64, b: i64) -> Result<Self> {
        Self::hull([(0, 0), (a, 0), (a, b), (0, b)])
    }
}

/// Lattice points of the dilate `n·P`, sorted lexicographically.
pub fn lattice_points(p: &LatticePolytope, n: usize) -> Vec<Point> {
    p.scaled(n as i64).points()
}

/// `true` iff every vertex of `p` lies in `d·q`.
pub fn contains_scaled(p: &LatticePolytope, q: &LatticePolytope, d: usize) -> bool {
    let dq = q.scaled(d as i64);
    p.vertices.iter().all(|&v| dq.contains(v))
}

/// Translation making every exponent nonnegative with minimum zero in each
/// coordinate.
pub fn normalization_shift(fs: &[ParamPoly]) -> Result<Point> {
    let mut support = fs.iter().flat_map(ParamPoly::support).peekable();
    if support.peek().is_none() {
        return Err(Error::AllZero);
    }
    let (mx, my) = support.fold((i64::MAX, i64::MAX), |(mx, my), (a, b)| (mx.min(a), my.min(b)));
    Ok((-mx, -my))
}

/// Applies [`normalization_shift`] to every polynomial.
pub fn normalize_params(fs: &[ParamPoly; 4]) -> Result<([ParamPoly; 4], Point)> {
    let shift = normalization_shift(fs)?;
    Ok((fs.clone().map(|f| f.shift(shift)), shift))
}

/// Convex hull of the union of the supports, after the normalization shift.
pub fn newton_polytope(fs: &[ParamPoly]) -> Result<LatticePolytope> {
    let shift = normalization_shift(fs)?;
    LatticePolytope::hull(fs.iter().flat_map(ParamPoly::support).map(|(a, b)| (a + shift.0, b + shift.1)))
}

/// `P = factor·base + offset` with the largest possible `factor`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homothety {
    pub factor: i64,
    pub base: LatticePolytope,
    pub offset: Point,
}

/// Largest `k` with `P = k·Q + offset` for a lattice polytope `Q`; the offset
/// is zero whenever `P` itself is a lattice dilate.
pub fn homothety_factor(p: &LatticePolytope) -> Result<Homothety> {
    p.require_full_dimensional()?;
    let v0 = p.vertices[0];
    let k = p.vertices.iter().fold(0i64, |g, v| g.gcd(&(v.0 - v0.0)).gcd(&(v.1 - v0.1)));
    let offset = (v0.0.rem_euclid(k), v0.1.rem_euclid(k));
    let base = LatticePolytope {
        vertices: p.vertices.iter().map(|v| ((v.0 - offset.0) / k, (v.1 - offset.1) / k)).collect(),
    };
    Ok(Homothety { factor: k, base, offset })
}

/// JSON form `{"vertices": [[x,y],...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub vertices: Vec<[i64; 2]>,
}

impl From<&LatticePolytope> for PolytopeJson {
    fn from(p: &LatticePolytope) -> Self {
        PolytopeJson { vertices: p.vertices.iter().map(|&(x, y)| [x, y]).collect() }
    }
}

impl TryFrom<PolytopeJson> for LatticePolytope {
    type Error = Error;
    fn try_from(j: PolytopeJson) -> Result<Self> {
        LatticePolytope::hull(j.vertices.into_iter().map(|[x, y]| (x, y)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::parse_param_poly;
    use proptest::prelude::*;

    fn example_params() -> Vec<ParamPoly> {
        ["s*t^6+2", "s*t^5-3*s*t^3", "s*t^4+5*s^2*t^6", "2+s^2*t^6"]
            .iter()
            .map(|s| parse_param_poly(s).unwrap())
            .collect()
    }

    fn hull(pts: &[Point]) -> LatticePolytope {
        LatticePolytope::hull(pts.iter().copied()).unwrap()
    }

    #[test]
    fn newton_polytope_of_example() {
        let p = newton_polytope(&example_params()).unwrap();
        assert_eq!(p.vertices(), &[(0, 0), (2, 6), (1, 6)]);
        assert_eq!(p.points(), vec![(0, 0), (1, 3), (1, 4), (1, 5), (1, 6), (2, 6)]);
    }

    #[test]
    fn newton_polytope_edge_cases() {
        let p = newton_polytope(&[parse_param_poly("s*t").unwrap()]).unwrap();
        assert_eq!(p.dimension(), 0);
        assert!(p.require_full_dimensional().is_err());
        let sq: Vec<ParamPoly> = ["1+s", "t", "s*t"].iter().map(|s| parse_param_poly(s).unwrap()).collect();
        assert_eq!(newton_polytope(&sq).unwrap().vertices(), &[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(matches!(newton_polytope(&[ParamPoly::zero()]), Err(Error::AllZero)));
        let seg = newton_polytope(&[parse_param_poly("1+s^2").unwrap()]).unwrap();
        assert_eq!(seg.dimension(), 1);
        assert_eq!(seg.points(), vec![(0, 0), (1, 0), (2, 0)]);
    }

    #[test]
    fn newton_polytope_is_translation_invariant() {
        let fs = example_params();
        let moved: Vec<ParamPoly> = fs.iter().map(|f| f.shift((-3, 5))).collect();
        assert_eq!(newton_polytope(&fs).unwrap(), newton_polytope(&moved).unwrap());
    }

    #[test]
    fn lattice_point_counts() {
        assert_eq!(lattice_points(&LatticePolytope::unit_simplex(), 3).len(), 10);
        let nf = newton_polytope(&example_params()).unwrap();
        assert_eq!(lattice_points(&nf, 2).len(), 17);
        assert_eq!(lattice_points(&nf, 3).len(), 34);
        let q = hull(&[(0, 0), (0, 3), (1, 3)]);
        assert_eq!(lattice_points(&q, 1), vec![(0, 0), (0, 1), (0, 2), (0, 3), (1, 3)]);
        assert_eq!(lattice_points(&q, 2).len(), 12);
    }

    #[test]
    fn homotheties() {
        let nf = newton_polytope(&example_params()).unwrap();
        let h = homothety_factor(&nf).unwrap();
        assert_eq!((h.factor, &h.base), (1, &nf));
        let sq = hull(&[(0, 0), (2, 0), (2, 2), (0, 2)]);
        let h = homothety_factor(&sq).unwrap();
        assert_eq!(h.factor, 2);
        assert_eq!(h.base, hull(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
        let tri = hull(&[(0, 0), (0, 6), (2, 6)]);
        let h = homothety_factor(&tri).unwrap();
        assert_eq!(h.factor, 2);
        assert_eq!(h.base, hull(&[(0, 0), (0, 3), (1, 3)]));
        assert_eq!(h.base.scaled(2), tri);
        let shifted = hull(&[(1, 1), (3, 1), (1, 3)]);
        let h = homothety_factor(&shifted).unwrap();
        assert_eq!(h.base.scaled(h.factor).translated(h.offset), shifted);
    }

    #[test]
    fn scaled_containment() {
        let nf = newton_polytope(&example_params()).unwrap();
        let q = hull(&[(0, 0), (0, 3), (1, 3)]);
        assert!(contains_scaled(&nf, &q, 2));
        assert!(!contains_scaled(&nf, &q, 1));
        assert!(contains_scaled(&q, &q, 1));
        let sq = hull(&[(0, 0), (1, 0), (1, 1), (0, 1)]);
        assert!(!contains_scaled(&sq, &LatticePolytope::unit_simplex(), 1));
    }

    #[test]
    fn json_roundtrip() {
        let q = hull(&[(0, 0), (0, 3), (1, 3)]);
        let text = serde_json::to_string(&PolytopeJson::from(&q)).unwrap();
        assert_eq!(text, r#"{"vertices":[[0,0],[1,3],[0,3]]}"#);
        let back: PolytopeJson = serde_json::from_str(&text).unwrap();
        assert_eq!(LatticePolytope::try_from(back).unwrap(), q);
    }

    fn arb_polygon() -> impl Strategy<Value = LatticePolytope> {
        prop::collection::vec((-4i64..5, -4i64..5), 3..8)
            .prop_map(|pts| LatticePolytope::hull(pts).unwrap())
            .prop_filter("full-dimensional", |p| !p.is_degenerate())
    }

    proptest! {
        #[test]
        fn lattice_count_matches_ehrhart(p in arb_polygon(), n in 1usize..=6) {
            prop_assert_eq!(lattice_points(&p, n).len() as i64, p.ehrhart(n as i64));
        }

        #[test]
        fn vertices_are_lattice_points(p in arb_polygon()) {
            let pts = lattice_points(&p, 1);
            prop_assert!(pts.windows(2).all(|w| w[0] < w[1]));
            for v in p.vertices() {
                prop_assert!(pts.contains(v));
            }
        }

        #[test]
        fn homothety_reconstructs(p in arb_polygon(), k in 1i64..4) {
            let big = p.scaled(k);
            let h = homothety_factor(&big).unwrap();
            prop_assert_eq!(h.factor % k, 0);
            prop_assert_eq!(h.base.scaled(h.factor).translated(h.offset), big);
        }

        #[test]
        fn containment_matches_point_sets(p in arb_polygon(), q in arb_polygon(), d in 1usize..3) {
            let inner = lattice_points(&p, 1);
            let outer = lattice_points(&q, d);
            let by_points = inner.iter().all(|x| outer.binary_search(x).is_ok());
            prop_assert_eq!(contains_scaled(&p, &q, d), by_points);
        }
    }
}
