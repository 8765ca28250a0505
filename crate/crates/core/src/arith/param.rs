use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::Rational;
use crate::error::{Error, Result};

/// Sparse Laurent polynomial in the parameters `(s, t)`.
///
/// Terms are kept in lexicographic exponent order and zero coefficients are
/// never stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct ParamPoly {
    terms: BTreeMap<(i64, i64), Rational>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial((0, 0), Rational::one())
    }

    pub fn monomial(exp: (i64, i64), coeff: Rational) -> Self {
        let mut p = Self::zero();
        p.add_term(exp, coeff);
        p
    }

    pub fn from_terms<I: IntoIterator<Item = ((i64, i64), Rational)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, exp: (i64, i64), coeff: Rational) {
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

    pub fn terms(&self) -> impl Iterator<Item = (&(i64, i64), &Rational)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exp: (i64, i64)) -> Rational {
        self.terms.get(&exp).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn support(&self) -> impl Iterator<Item = (i64, i64)> + '_ {
        self.terms.keys().copied()
    }

    /// Multiplies by the monomial `s^dx t^dy`.
    pub fn shift(&self, (dx, dy): (i64, i64)) -> Self {
        ParamPoly {
            terms: self.terms.iter().map(|(&(a, b), c)| ((a + dx, b + dy), c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, c * k)).collect() }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value at `(s, t)`. Negative exponents require nonzero coordinates.
    pub fn eval(&self, s: &Rational, t: &Rational) -> Rational {
        self.terms
            .iter()
            .map(|(&(a, b), c)| c * rpow(s, a) * rpow(t, b))
            .fold(Rational::zero(), |acc, x| acc + x)
    }
}

fn rpow(x: &Rational, e: i64) -> Rational {
    if e >= 0 {
        num_traits::pow(x.clone(), e as usize)
    } else {
        num_traits::pow(x.recip(), (-e) as usize)
    }
}

/// Exact value of `f` at the point `(s, t)`.
pub fn eval_param_poly(f: &ParamPoly, point: (&Rational, &Rational)) -> Rational {
    f.eval(point.0, point.1)
}

impl Add for &ParamPoly {
    type Output = ParamPoly;
    fn add(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c.clone());
        }
        out
    }
}

impl Sub for &ParamPoly {
    type Output = ParamPoly;
    fn sub(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }
}

impl Neg for &ParamPoly {
    type Output = ParamPoly;
    fn neg(self) -> ParamPoly {
        ParamPoly { terms: self.terms.iter().map(|(e, c)| (*e, -c.clone())).collect() }
    }
}

impl Mul for &ParamPoly {
    type Output = ParamPoly;
    fn mul(self, rhs: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (&(a, b), c) in &self.terms {
            for (&(x, y), d) in &rhs.terms {
                out.add_term((a + x, b + y), c * d);
            }
        }
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&(a, b), c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let abs = c.abs();
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || (a == 0 && b == 0) {
                factors.push(if abs.is_integer() {
                    abs.numer().to_string()
                } else {
                    format!("{}/{}", abs.numer(), abs.denom())
                });
            }
            for (name, e) in [("s", a), ("t", b)] {
                match e {
                    0 => {}
                    1 => factors.push(name.to_string()),
                    _ => factors.push(format!("{name}^{e}")),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}

impl FromStr for ParamPoly {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        parse_param_poly(s)
    }
}

/// Parses a signed sum of terms `c*s^a*t^b`.
///
/// Coefficients are integers or `int/int`; whitespace is ignored and positions
/// in errors refer to the original string. Exponents may carry a sign.
pub fn parse_param_poly(text: &str) -> Result<ParamPoly> {
    let chars: Vec<(usize, char)> = text.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let mut parser = Parser { chars, pos: 0, end: text.len() };
    parser.poly()
}

struct Parser {
    chars: Vec<(usize, char)>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.chars.get(self.pos).map_or(self.end, |&(i, _)| i)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { pos: self.offset(), msg: msg.into() })
    }

    fn poly(&mut self) -> Result<ParamPoly> {
        let mut out = ParamPoly::zero();
        if self.peek().is_none() {
            return self.err("empty polynomial");
        }
        let mut first = true;
        while self.peek().is_some() {
            let sign = match self.peek() {
                Some('+') => {
                    self.pos += 1;
                    1
                }
                Some('-') => {
                    self.pos += 1;
                    -1
                }
                _ if first => 1,
                Some(c) => return self.err(format!("expected '+' or '-', found '{c}'")),
                None => unreachable!(),
            };
            first = false;
            let (exp, coeff) = self.term()?;
            out.add_term(exp, if sign < 0 { -coeff } else { coeff });
        }
        Ok(out)
    }

    fn term(&mut self) -> Result<((i64, i64), Rational)> {
        let mut coeff = Rational::one();
        let mut exp = (0i64, 0i64);
        loop {
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let n = self.integer()?;
                    let q = if self.peek() == Some('/') {
                        self.pos += 1;
                        let d = self.integer()?;
                        if d.is_zero() {
                            return self.err("zero denominator");
                        }
                        Rational::new(n, d)
                    } else {
                        Rational::from_integer(n)
                    };
                    if self.peek() == Some('.') {
                        return self.err("decimal coefficients are not supported");
                    }
                    coeff *= q;
                }
                Some(v @ ('s' | 't')) => {
                    self.pos += 1;
                    let e = if self.peek() == Some('^') {
                        self.pos += 1;
                        self.exponent()?
                    } else {
                        1
                    };
                    if v == 's' {
                        exp.0 += e;
                    } else {
                        exp.1 += e;
                    }
                }
                Some(c) => return self.err(format!("unexpected '{c}'")),
                None => return self.err("unexpected end of input"),
            }
            if self.peek() == Some('*') {
                self.pos += 1;
            } else {
                return Ok((exp, coeff));
            }
        }
    }

    fn integer(&mut self) -> Result<BigInt> {
        let start = self.pos;
        while matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected integer");
        }
        let digits: String = self.chars[start..self.pos].iter().map(|&(_, c)| c).collect();
        Ok(digits.parse().expect("ascii digits"))
    }

    fn exponent(&mut self) -> Result<i64> {
        let at = self.offset();
        let paren = self.peek() == Some('(');
        if paren {
            self.pos += 1;
        }
        let neg = self.peek() == Some('-');
        if neg {
            self.pos += 1;
        }
        if !matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            return Err(Error::NonIntegerExponent { pos: at });
        }
        let n = self.integer()?;
        if matches!(self.peek(), Some('.' | '/')) {
            return Err(Error::NonIntegerExponent { pos: at });
        }
        if paren {
            if self.peek() != Some(')') {
                return self.err("expected ')'");
            }
            self.pos += 1;
        }
        let n: i64 = i64::try_from(n).map_err(|_| Error::Syntax { pos: at, msg: "exponent too large".into() })?;
        Ok(if neg { -n } else { n })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{rat, ratio};
    use proptest::prelude::*;

    fn poly(terms: &[((i64, i64), i64)]) -> ParamPoly {
        ParamPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn parses_dehomogenized_inputs() {
        assert_eq!(parse_param_poly("s*t^6+2").unwrap(), poly(&[((1, 6), 1), ((0, 0), 2)]));
        assert_eq!(parse_param_poly("s*t^5-3*s*t^3").unwrap(), poly(&[((1, 5), 1), ((1, 3), -3)]));
        assert!(parse_param_poly("0").unwrap().is_zero());
        assert!(parse_param_poly("s - s").unwrap().is_zero());
    }

    #[test]
    fn parses_rationals_whitespace_and_combines() {
        let p = parse_param_poly(" 3/4 * s ^ 2 + s^2 - 1/2").unwrap();
        assert_eq!(p.coeff((2, 0)), ratio(7, 4));
        assert_eq!(p.coeff((0, 0)), ratio(-1, 2));
        assert_eq!(parse_param_poly("-t").unwrap(), poly(&[((0, 1), -1)]));
        assert_eq!(parse_param_poly("s^-1*t").unwrap(), poly(&[((-1, 1), 1)]));
    }

    #[test]
    fn reports_errors() {
        match parse_param_poly("s*t^1.5") {
            Err(Error::NonIntegerExponent { pos }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_param_poly("s^x"), Err(Error::NonIntegerExponent { .. })));
        match parse_param_poly("s + x") {
            Err(Error::Syntax { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_param_poly("").is_err());
        assert!(parse_param_poly("s+").is_err());
        assert!(parse_param_poly("1/0").is_err());
    }

    #[test]
    fn evaluates() {
        let f = poly(&[((1, 6), 1), ((0, 0), 2)]);
        assert_eq!(eval_param_poly(&f, (&rat(0), &rat(0))), rat(2));
        assert_eq!(eval_param_poly(&f, (&rat(1), &rat(1))), rat(3));
        let g = poly(&[((1, 3), -3), ((1, 5), 1)]);
        assert_eq!(eval_param_poly(&g, (&rat(2), &rat(1))), rat(-4));
        let laurent = poly(&[((-1, 0), 1)]);
        assert_eq!(laurent.eval(&rat(4), &rat(1)), ratio(1, 4));
    }

    #[test]
    fn display_format() {
        let p = poly(&[((1, 6), 1), ((0, 0), 2), ((1, 3), -3)]);
        assert_eq!(p.to_string(), "2 - 3*s*t^3 + s*t^6");
        assert_eq!(ParamPoly::zero().to_string(), "0");
        assert_eq!(ParamPoly::monomial((0, 0), ratio(-1, 3)).to_string(), "-1/3");
    }

    fn arb_poly() -> impl Strategy<Value = ParamPoly> {
        prop::collection::vec(((-2i64..5, -2i64..5), -20i64..20, 1i64..5), 0..6)
            .prop_map(|ts| ParamPoly::from_terms(ts.into_iter().map(|(e, n, d)| (e, ratio(n, d)))))
    }

    fn arb_point() -> impl Strategy<Value = (Rational, Rational)> {
        ((1i64..30, 1i64..7), (1i64..30, 1i64..7), any::<bool>())
            .prop_map(|((a, b), (c, d), neg)| (ratio(if neg { -a } else { a }, b), ratio(c, d)))
    }

    proptest! {
        #[test]
        fn ring_axioms(f in arb_poly(), g in arb_poly(), h in arb_poly()) {
            prop_assert_eq!(&(&f + &g) + &h, &f + &(&g + &h));
            prop_assert_eq!(&f * &g, &g * &f);
            prop_assert_eq!(&f * &(&g + &h), &(&f * &g) + &(&f * &h));
            prop_assert!((&f - &f).is_zero());
        }

        #[test]
        fn eval_is_homomorphism(f in arb_poly(), g in arb_poly(), (s, t) in arb_point()) {
            prop_assert_eq!((&f * &g).eval(&s, &t), f.eval(&s, &t) * g.eval(&s, &t));
            prop_assert_eq!((&f + &g).eval(&s, &t), f.eval(&s, &t) + g.eval(&s, &t));
        }

        #[test]
        fn parse_print_roundtrip(f in arb_poly()) {
            prop_assert_eq!(parse_param_poly(&f.to_string()).unwrap(), f);
        }
    }
}
