use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{content, denominator_lcm, ParamPoly, Rational};

/// Exponent vector over `(T1, T2, T3, T4)`.
pub type TExp = [u32; 4];

/// Sparse polynomial in the target variables `T1..T4`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TPoly {
    terms: BTreeMap<TExp, Rational>,
}

fn exp_degree(e: &TExp) -> u32 {
    e.iter().sum()
}

impl TPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial([0; 4], c)
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    /// The variable `T{i+1}`.
    pub fn var(i: usize) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, Rational::one())
    }

    pub fn monomial(exp: TExp, coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = (TExp, Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    /// A linear form `Σ c_i T_i`.
    pub fn linear(coeffs: &[Rational; 4]) -> Self {
        Self::from_terms((0..4).map(|i| {
            let mut e = [0; 4];
            e[i] = 1;
            (e, coeffs[i].clone())
        }))
    }

    pub fn add_term(&mut self, exp: TExp, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let slot = self.terms.entry(exp).or_insert_with(Rational::zero);
        *slot += coeff;
        if slot.is_zero() {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&TExp, &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: TExp) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    /// Largest total degree of a term; 0 for the zero polynomial.
    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(exp_degree).max().unwrap_or(0)
    }

    /// `Some(e)` when every term has total degree `e`. The zero polynomial is
    /// reported as homogeneous of degree 0.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut it = self.terms.keys().map(exp_degree);
        match it.next() {
            None => Some(0),
            Some(e) => it.all(|x| x == e).then_some(e),
        }
    }

    /// Leading term in lexicographic order.
    pub fn leading(&self) -> Option<(&TExp, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        TPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    pub fn eval(&self, point: &[Rational; 4]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..4 {
                if e[i] > 0 {
                    term *= num_traits::pow(point[i].clone(), e[i] as usize);
                }
            }
            acc += term;
        }
        acc
    }

    /// Substitutes `T_i ↦ images[i]`.
    pub fn compose(&self, images: &[TPoly; 4]) -> TPoly {
        let mut powers: [Vec<TPoly>; 4] = Default::default();
        let max_exp = self.terms.keys().fold([0u32; 4], |mut m, e| {
            for i in 0..4 {
                m[i] = m[i].max(e[i]);
            }
            m
        });
        for i in 0..4 {
            powers[i].push(TPoly::one());
            for k in 1..=max_exp[i] as usize {
                let next = &powers[i][k - 1] * &images[i];
                powers[i].push(next);
            }
        }
        let mut out = TPoly::zero();
        for (e, c) in &self.terms {
            let mut term = TPoly::constant(c.clone());
            for i in 0..4 {
                if e[i] > 0 {
                    term = &term * &powers[i][e[i] as usize];
                }
            }
            out = &out + &term;
        }
        out
    }

    /// Exact quotient `self / divisor`, or `None` if the division leaves a remainder.
    pub fn div_exact(&self, divisor: &TPoly) -> Option<TPoly> {
        let (lead_exp, lead_coeff) = divisor.leading()?;
        let (lead_exp, lead_coeff) = (*lead_exp, lead_coeff.clone());
        let mut rem = self.clone();
        let mut quot = TPoly::zero();
        while let Some((e, c)) = rem.leading() {
            let mut q_exp = [0u32; 4];
            for i in 0..4 {
                if e[i] < lead_exp[i] {
                    return None;
                }
                q_exp[i] = e[i] - lead_exp[i];
            }
            let q_coeff = c / &lead_coeff;
            for (de, dc) in &divisor.terms {
                let mut x = *de;
                for i in 0..4 {
                    x[i] += q_exp[i];
                }
                rem.add_term(x, -(&q_coeff * dc));
            }
            quot.add_term(q_exp, q_coeff);
        }
        Some(quot)
    }

    /// Integer coefficients with content 1 and a positive coefficient on the
    /// lexicographically largest monomial. Zero stays zero.
    pub fn normalized(&self) -> TPoly {
        let Some((_, lead)) = self.leading() else {
            return TPoly::zero();
        };
        let l = denominator_lcm(self.terms.values());
        let ints: Vec<BigInt> = self.terms.values().map(|c| (c * &l).to_integer()).collect();
        let mut g = content(&ints);
        if lead.is_negative() {
            g = -g;
        }
        TPoly {
            terms: self
                .terms
                .keys()
                .zip(ints)
                .map(|(e, n)| (*e, Rational::from_integer(n / &g)))
                .collect(),
        }
    }

    /// Integer coefficients of the normalized form.
    pub fn integer_terms(&self) -> Vec<(TExp, BigInt)> {
        self.normalized().terms.into_iter().map(|(e, c)| (e, c.to_integer())).collect()
    }

    /// True if `self = λ·other` for some nonzero rational `λ`.
    pub fn is_scalar_multiple_of(&self, other: &TPoly) -> bool {
        if self.is_zero() || other.is_zero() {
            return self.is_zero() && other.is_zero();
        }
        self.normalized() == other.normalized()
    }
}

impl Add for &TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Mul for &TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        let mut out = TPoly::zero();
        for (a, c) in &self.terms {
            for (b, d) in &rhs.terms {
                out.add_term([a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]], c * d);
            }
        }
        out
    }
}

impl fmt::Display for TPoly {
    /// Terms in decreasing lexicographic order, e.g. `2809*T1^2*T2^4 - 125*T3*T4^5`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors = Vec::new();
            if !abs.is_one() || exp_degree(e) == 0 {
                factors.push(if abs.is_integer() {
                    abs.numer().to_string()
                } else {
                    format!("{}/{}", abs.numer(), abs.denom())
                });
            }
            for (k, &x) in e.iter().enumerate() {
                match x {
                    0 => {}
                    1 => factors.push(format!("T{}", k + 1)),
                    _ => factors.push(format!("T{}^{}", k + 1, x)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

/// Expands `F(f1(s,t), …, f4(s,t))` exactly.
pub fn substitute_params(poly: &TPoly, fs: &[ParamPoly; 4]) -> ParamPoly {
    let mut powers: [Vec<ParamPoly>; 4] = Default::default();
    for (i, f) in fs.iter().enumerate() {
        powers[i].push(ParamPoly::one());
        let max = poly.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        for k in 1..=max as usize {
            let next = &powers[i][k - 1] * f;
            powers[i].push(next);
        }
    }
    let mut out = ParamPoly::zero();
    for (e, c) in &poly.terms {
        let mut term = ParamPoly::monomial((0, 0), c.clone());
        for i in 0..4 {
            if e[i] > 0 {
                term = &term * &powers[i][e[i] as usize];
            }
        }
        out = &out + &term;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{parse_param_poly, rat, ratio};
    use proptest::prelude::*;

    fn t(i: usize) -> TPoly {
        TPoly::var(i)
    }

    #[test]
    fn substitution_examples() {
        let f1 = parse_param_poly("s").unwrap();
        let f2 = parse_param_poly("t").unwrap();
        let f3 = parse_param_poly("3*s^2+1").unwrap();
        let fs = [f1.clone(), f2, f3, f1];
        assert!(substitute_params(&(&t(0) - &t(3)), &fs).is_zero());
        let prod = &t(0) * &t(1);
        assert_eq!(substitute_params(&prod, &fs), ParamPoly::monomial((1, 1), rat(1)));
    }

    #[test]
    fn homogeneity_and_degree() {
        let p = &(&t(0) * &t(1)) + &t(2).pow(2);
        assert_eq!(p.homogeneous_degree(), Some(2));
        let q = &p + &t(3);
        assert_eq!(q.homogeneous_degree(), None);
        assert_eq!(q.total_degree(), 2);
    }

    #[test]
    fn normalization_sign_and_content() {
        let p = &t(0).scale(&ratio(-4, 3)) + &t(3).scale(&ratio(2, 3));
        let n = p.normalized();
        assert_eq!(n.coeff([1, 0, 0, 0]), rat(2));
        assert_eq!(n.coeff([0, 0, 0, 1]), rat(-1));
        assert!(p.is_scalar_multiple_of(&n));
        assert_eq!(n.to_string(), "2*T1 - T4");
    }

    #[test]
    fn exact_division() {
        let a = &(&t(0) + &t(1)) - &t(3);
        let b = &t(2).pow(3) + &(&t(0) * &t(1)).scale(&ratio(5, 2));
        let prod = &a * &b;
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(b.div_exact(&a).is_none());
    }

    fn arb_form() -> impl Strategy<Value = TPoly> {
        prop::collection::vec((0u32..3, 0u32..3, 0u32..3, -9i64..9), 1..5).prop_map(|ts| {
            TPoly::from_terms(ts.into_iter().map(|(a, b, c, k)| {
                let d = 6 - a - b - c;
                ([a, b, c, d], rat(k))
            }))
        })
    }

    proptest! {
        #[test]
        fn product_division_roundtrip(a in arb_form(), b in arb_form()) {
            prop_assume!(!a.is_zero());
            let p = &a * &b;
            prop_assert_eq!(p.div_exact(&a).unwrap(), b);
        }

        #[test]
        fn compose_with_identity(a in arb_form()) {
            prop_assert_eq!(a.compose(&[t(0), t(1), t(2), t(3)]), a);
        }
    }
}
