//! Prime-field scalars for the modular fast path.
//!
//! Results obtained through this path are probabilistic: a rank over
//! `F_p` is a lower bound for the rank over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::Rng;

use super::Rational;

/// Lower end of the range random session primes are drawn from.
pub const PRIME_LOW: u64 = 1 << 30;
/// Exclusive upper end of that range.
pub const PRIME_HIGH: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeScalar {
    residue: u64,
    modulus: u64,
}

impl PrimeScalar {
    pub fn new(value: i64, modulus: u64) -> Self {
        let m = modulus as i64;
        PrimeScalar {
            residue: value.rem_euclid(m) as u64,
            modulus,
        }
    }

    pub fn residue(self) -> u64 {
        self.residue
    }

    pub fn modulus(self) -> u64 {
        self.modulus
    }

    pub fn is_zero(self) -> bool {
        self.residue == 0
    }

    /// Reduces a rational modulo `p`; `None` when the denominator is not
    /// invertible.
    pub fn from_rational(q: &Rational, modulus: u64) -> Option<Self> {
        let num = reduce_bigint(q.numer(), modulus);
        let den = reduce_bigint(q.denom(), modulus);
        if den == 0 {
            return None;
        }
        Some(PrimeScalar { residue: mul_mod(num, inv_mod(den, modulus), modulus), modulus })
    }

    pub fn inv(self) -> Option<Self> {
        (self.residue != 0).then(|| PrimeScalar {
            residue: inv_mod(self.residue, self.modulus),
            modulus: self.modulus,
        })
    }
}

impl fmt::Display for PrimeScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.residue, self.modulus)
    }
}

impl Add for PrimeScalar {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        PrimeScalar { residue: add_mod(self.residue, rhs.residue, self.modulus), modulus: self.modulus }
    }
}

impl Sub for PrimeScalar {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        PrimeScalar { residue: sub_mod(self.residue, rhs.residue, self.modulus), modulus: self.modulus }
    }
}

impl Mul for PrimeScalar {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        debug_assert_eq!(self.modulus, rhs.modulus);
        PrimeScalar { residue: mul_mod(self.residue, rhs.residue, self.modulus), modulus: self.modulus }
    }
}

impl Neg for PrimeScalar {
    type Output = Self;
    fn neg(self) -> Self {
        PrimeScalar { residue: sub_mod(0, self.residue, self.modulus), modulus: self.modulus }
    }
}

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    base %= p;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, p);
        }
        base = mul_mod(base, base, p);
        exp >>= 1;
    }
    acc
}

/// Inverse by Fermat; `p` must be prime and `a` nonzero mod `p`.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

pub(crate) fn reduce_bigint(x: &BigInt, p: u64) -> u64 {
    let m = BigInt::from(p);
    x.mod_floor(&m).to_u64().expect("residue fits in u64")
}

/// Reduces a rational mod `p`, `None` if the denominator vanishes.
#[cfg(test)]
fn reduce_rational(q: &Rational, p: u64) -> Option<u64> {
    PrimeScalar::from_rational(q, p).map(PrimeScalar::residue)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

/// A uniformly chosen prime in `[2^30, 2^31)`.
pub fn random_prime<R: Rng + ?Sized>(rng: &mut R) -> u64 {
    loop {
        let candidate = rng.gen_range(PRIME_LOW..PRIME_HIGH) | 1;
        if is_prime(candidate) {
            return candidate;
        }
    }
}

/// Combines `x ≡ a (mod m)` with `x ≡ b (mod p)` into the residue modulo `m*p`.
pub(crate) fn crt_combine(a: &BigInt, m: &BigInt, b: u64, p: u64) -> BigInt {
    let a_mod_p = reduce_bigint(a, p);
    let m_mod_p = reduce_bigint(m, p);
    let t = mul_mod(sub_mod(b, a_mod_p, p), inv_mod(m_mod_p, p), p);
    a + m * BigInt::from(t)
}

/// Rational reconstruction of `a mod m` with numerator and denominator bounded
/// by `sqrt(m/2)`.
pub(crate) fn rational_reconstruct(a: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / BigInt::from(2)).sqrt();
    let (mut r0, mut r1) = (m.clone(), a.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || t1.abs() > bound {
        return None;
    }
    if !r1.gcd(&t1).is_one() {
        return None;
    }
    Some(Rational::new(r1, t1))
}
