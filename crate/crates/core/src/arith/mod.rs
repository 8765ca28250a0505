//! Exact scalars and sparse polynomials.
//!
//! Rationals are `num_rational::BigRational`, which is always kept in lowest
//! terms with a positive denominator. Prime-field scalars live in [`prime`].

mod param;
pub mod prime;
mod tpoly;

pub use param::{eval_param_poly, parse_param_poly, ParamPoly};
pub use prime::PrimeScalar;
pub use tpoly::{substitute_params, TExp, TPoly};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use rand::Rng;

pub type Rational = num_rational::BigRational;

/// Sampling bound for random rational points: numerators and denominators are
/// drawn from `[1, SAMPLE_BOUND]`.
pub const SAMPLE_BOUND: i64 = 10_000;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Serializes a rational as `"num/den"`.
pub fn rational_to_string(q: &Rational) -> String {
    format!("{}/{}", q.numer(), q.denom())
}

/// Parses `"num/den"` or a bare integer.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                return None;
            }
            Some(Rational::new(n, d))
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

/// A random nonzero rational with numerator and denominator in `[1, bound]`
/// and a random sign.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, bound: i64) -> Rational {
    let n = rng.gen_range(1..=bound);
    let d = rng.gen_range(1..=bound);
    let q = ratio(n, d);
    if rng.gen_bool(0.5) {
        -q
    } else {
        q
    }
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a, I: IntoIterator<Item = &'a Rational>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

/// Gcd of the integers (zero for an empty or all-zero list).
pub fn content<'a, I: IntoIterator<Item = &'a BigInt>>(it: I) -> BigInt {
    it.into_iter().fold(BigInt::zero(), |acc, x| acc.gcd(x))
}

/// Scales a rational vector to a primitive integer vector (same projective
/// point). The zero vector maps to zeros.
pub fn primitive_integer_vector(v: &[Rational]) -> Vec<BigInt> {
    let l = denominator_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &l).to_integer()).collect();
    let c = content(&ints);
    if c.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &c).collect()
}
