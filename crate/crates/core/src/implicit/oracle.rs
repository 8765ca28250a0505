//! Brute-force implicitization by interpolation: find the forms of a given
//! degree vanishing on many image points.
//!
//! The kernel is computed modulo random primes, lifted by Chinese remaindering
//! and rational reconstruction, and certified by exact evaluation on every
//! sample row.

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::prime::{crt_combine, mul_mod, pow_mod, random_prime, rational_reconstruct, reduce_bigint};
use crate::arith::{denominator_lcm, primitive_integer_vector, random_rational, ParamPoly, Rational, TExp, TPoly, SAMPLE_BOUND};
use crate::linalg::eliminate_mod_p;
use crate::repmat::P3Point;

const MAX_PRIMES: usize = 24;
const WIDE_KERNEL_STRIKES: usize = 3;
const EXTRA_ROWS: usize = 8;

/// Exponents of all monomials of degree `e` in four variables.
pub fn monomials(e: u32) -> Vec<TExp> {
    let mut out = Vec::new();
    for a in 0..=e {
        for b in 0..=e - a {
            for c in 0..=e - a - b {
                out.push([a, b, c, e - a - b - c]);
            }
        }
    }
    out
}

/// Primitive integer coordinates of the image of a random parameter point.
fn sample_point(fs: &[ParamPoly; 4], rng: &mut ChaCha8Rng) -> Vec<BigInt> {
    loop {
        let s = random_rational(rng, SAMPLE_BOUND);
        let t = random_rational(rng, SAMPLE_BOUND);
        if let Some(p) = P3Point::image(fs, &s, &t) {
            return primitive_integer_vector(p.coords());
        }
    }
}

fn sample_rows(fs: &[ParamPoly; 4], e: u32, count: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<BigInt>> {
    let monos = monomials(e);
    let mut rows = Vec::with_capacity(count);
    while rows.len() < count {
        let coords = sample_point(fs, rng);
        let powers: Vec<Vec<BigInt>> = coords
            .iter()
            .map(|x| {
                let mut v = vec![BigInt::one()];
                for k in 1..=e as usize {
                    let next = &v[k - 1] * x;
                    v.push(next);
                }
                v
            })
            .collect();
        rows.push(
            monos
                .iter()
                .map(|m| (0..4).fold(BigInt::one(), |acc, i| acc * &powers[i][m[i] as usize]))
                .collect(),
        );
    }
    rows
}

/// Kernel vector modulo `p` when the kernel is one-dimensional: the free
/// column and the vector with a 1 there. `Err(nullity)` otherwise.
fn kernel_mod_p(rows: &[Vec<BigInt>], n: usize, p: u64) -> Result<(usize, Vec<u64>), usize> {
    let mut a: Vec<Vec<u64>> = rows.iter().map(|r| r.iter().map(|x| reduce_bigint(x, p)).collect()).collect();
    let pivots = eliminate_mod_p(&mut a, n, p);
    let nullity = n - pivots.len();
    if nullity != 1 {
        return Err(nullity);
    }
    let free = (0..n).find(|c| !pivots.contains(c)).expect("one free column");
    let mut v = vec![0u64; n];
    v[free] = 1;
    for (i, &c) in pivots.iter().enumerate() {
        v[c] = (p - a[i][free]) % p;
    }
    Ok((free, v))
}

fn vanishes_on_rows(rows: &[Vec<BigInt>], v: &[BigInt]) -> bool {
    rows.iter().all(|r| r.iter().zip(v).fold(BigInt::zero(), |acc, (x, c)| acc + x * c).is_zero())
}

/// Dimension, modulo a random prime, of the degree-`e` forms vanishing at
/// `C(e+3,3) + 8` random image points. It bounds the true dimension from above
/// and equals it unless the prime is unlucky.
fn vanishing_dim_mod_p(fs: &[ParamPoly; 4], e: u32, rng: &mut ChaCha8Rng) -> usize {
    let monos = monomials(e);
    let n = monos.len();
    let p = random_prime(rng);
    let mut rows = Vec::with_capacity(n + EXTRA_ROWS);
    while rows.len() < n + EXTRA_ROWS {
        let c: Vec<u64> = sample_point(fs, rng).iter().map(|x| reduce_bigint(x, p)).collect();
        let powers: Vec<Vec<u64>> = c.iter().map(|&x| (0..=e as u64).map(|k| pow_mod(x, k, p)).collect()).collect();
        rows.push(
            monos
                .iter()
                .map(|m| (0..4).fold(1, |acc, i| mul_mod(acc, powers[i][m[i] as usize], p)))
                .collect(),
        );
    }
    n - eliminate_mod_p(&mut rows, n, p).len()
}

/// Smallest `e <= known` admitting a nonzero degree-`e` form that vanishes on
/// the image, given that some form of degree `known` does. Bisection is valid
/// because multiples of a vanishing form vanish too.
pub fn minimal_vanishing_degree(fs: &[ParamPoly; 4], known: u32, seed: u64) -> u32 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (mut lo, mut hi) = (1, known.max(1));
    while lo < hi {
        let mid = (lo + hi) / 2;
        if vanishing_dim_mod_p(fs, mid, &mut rng) > 0 {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    lo
}

/// The unique (up to scale) form of degree `e` vanishing on `2·C(e+3,3)`
/// random image points, or `None` when no such form exists or it is not unique.
pub fn interpolation_oracle(fs: &[ParamPoly; 4], e: u32, seed: u64) -> Option<TPoly> {
    if e == 0 || fs.iter().all(ParamPoly::is_zero) {
        return None;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let monos = monomials(e);
    let n = monos.len();
    let rows = sample_rows(fs, e, 2 * n, &mut rng);

    let mut strikes = 0;
    let mut lifted: Option<(usize, Vec<BigInt>, BigInt)> = None;
    for _ in 0..MAX_PRIMES {
        let p = random_prime(&mut rng);
        let (free, v) = match kernel_mod_p(&rows, n, p) {
            Ok(k) => k,
            // rank over Q is at least the rank mod p, so the kernel is trivial
            Err(0) => return None,
            Err(_) => {
                strikes += 1;
                if strikes >= WIDE_KERNEL_STRIKES {
                    return None;
                }
                continue;
            }
        };
        let (residues, modulus): (Vec<BigInt>, BigInt) = match lifted.take() {
            Some((f, r, m)) if f == free => {
                let combined = r.iter().zip(&v).map(|(a, &b)| crt_combine(a, &m, b, p)).collect();
                (combined, m * BigInt::from(p))
            }
            _ => (v.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(p)),
        };
        let candidate: Option<Vec<Rational>> =
            residues.iter().map(|a| rational_reconstruct(a, &modulus)).collect();
        if let Some(q) = candidate {
            let l = denominator_lcm(&q);
            let ints: Vec<BigInt> = q.iter().map(|x| (x * &l).to_integer()).collect();
            if vanishes_on_rows(&rows, &ints) {
                let form = TPoly::from_terms(monos.iter().zip(ints).map(|(m, c)| (*m, Rational::from_integer(c))));
                return Some(form.normalized());
            }
        }
        lifted = Some((free, residues, modulus));
    }
    None
}
