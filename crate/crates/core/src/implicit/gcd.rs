//! Gcd of homogeneous forms in `T1..T4` by restriction and interpolation.
//!
//! The gcd degree is the minimum univariate gcd degree along a few random
//! lines. The gcd itself is recovered in coordinates
//! `T = x·v + y1·e2 + y2·e3 + y3·e4`, where it is monic in `x` up to the
//! constant `G(v)`. Monic univariate gcds at the points `(y1, y2, 1)` of a
//! random grid are therefore consistently scaled, so their coefficients can be
//! interpolated in `y1, y2` and rehomogenized with `y3`.
//!
//! All univariate work happens modulo word-size primes; the coefficients are
//! lifted by Chinese remaindering and rational reconstruction, and the
//! candidate is accepted only if it divides every input exactly.

use num_bigint::BigInt;
use rand::Rng;
use rayon::prelude::*;

use super::RETRY_BUDGET;
use super::modular::{gcd_mod, interpolate_mod, to_mod};
use crate::arith::prime::{add_mod, crt_combine, mul_mod, random_prime, rational_reconstruct, reduce_bigint};
use crate::arith::{rat, Rational, TExp, TPoly};
use crate::error::{Error, Result};

const LINE_TRIALS: usize = 3;
const NODE_RANGE: i64 = 1_000;
const MAX_PRIMES: usize = 64;
const BAD_PRIME_LIMIT: usize = 3;

/// A form with integer coefficients reduced modulo `p`.
struct ModForm {
    terms: Vec<(TExp, u64)>,
    degree: usize,
}

impl ModForm {
    fn new(f: &TPoly, p: u64) -> Self {
        let terms = f.integer_terms().into_iter().map(|(e, c)| (e, reduce_bigint(&c, p))).collect();
        ModForm { terms, degree: f.total_degree() as usize }
    }

    fn eval(&self, point: &[u64; 4], p: u64) -> u64 {
        let powers: Vec<Vec<u64>> = point
            .iter()
            .map(|&x| {
                let mut v = vec![1u64; self.degree + 1];
                for k in 1..=self.degree {
                    v[k] = mul_mod(v[k - 1], x, p);
                }
                v
            })
            .collect();
        self.terms.iter().fold(0, |acc, (e, c)| {
            let m = (0..4).fold(*c, |m, i| mul_mod(m, powers[i][e[i] as usize], p));
            add_mod(acc, m, p)
        })
    }
}

fn restrict_mod(f: &ModForm, v: &[i64; 4], w: &[i64; 4], p: u64) -> Vec<u64> {
    let nodes: Vec<u64> = (0..=f.degree as u64).collect();
    let values: Vec<u64> = nodes
        .iter()
        .map(|&x| {
            let point = [0, 1, 2, 3].map(|i| add_mod(mul_mod(x, to_mod(v[i], p), p), to_mod(w[i], p), p));
            f.eval(&point, p)
        })
        .collect();
    interpolate_mod(&nodes, &values, p)
}

fn restricted_gcd_mod(forms: &[ModForm], v: &[i64; 4], w: &[i64; 4], p: u64) -> Vec<u64> {
    forms.iter().fold(Vec::new(), |g, f| gcd_mod(g, restrict_mod(f, v, w, p), p))
}

fn random_vector<R: Rng + ?Sized>(rng: &mut R) -> [i64; 4] {
    [(); 4].map(|_| rng.gen_range(-NODE_RANGE..=NODE_RANGE))
}

/// Upper bound for the degree of the gcd; exact for generic lines and primes.
pub fn gcd_degree<R: Rng + ?Sized>(forms: &[TPoly], rng: &mut R) -> usize {
    (0..LINE_TRIALS)
        .map(|_| {
            let p = random_prime(rng);
            let reduced: Vec<ModForm> = forms.iter().map(|f| ModForm::new(f, p)).collect();
            let v = random_vector(rng);
            let w = random_vector(rng);
            restricted_gcd_mod(&reduced, &v, &w, p).len().saturating_sub(1)
        })
        .min()
        .unwrap_or(0)
}

fn distinct_nodes<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::with_capacity(n);
    while out.len() < n {
        let x = rng.gen_range(-NODE_RANGE..=NODE_RANGE);
        if !out.contains(&x) {
            out.push(x);
        }
    }
    out
}

/// Monomials `x^k y1^a y2^b y3^c` of the shifted gcd with `k < e`.
fn shifted_support(e: usize) -> Vec<TExp> {
    let mut out = Vec::new();
    for k in 0..e {
        for a in 0..=e - k {
            for b in 0..=e - k - a {
                out.push([k as u32, a as u32, b as u32, (e - k - a - b) as u32]);
            }
        }
    }
    out
}

/// Coefficients of the monic shifted gcd modulo `p` on [`shifted_support`],
/// or `None` if the prime or the grid is unlucky.
fn shifted_gcd_mod(forms: &[TPoly], e: usize, v: &[i64; 4], y1: &[i64], y2: &[i64], p: u64) -> Option<Vec<u64>> {
    let reduced: Vec<ModForm> = forms.iter().map(|f| ModForm::new(f, p)).collect();
    let points: Vec<(i64, i64)> = y1.iter().flat_map(|&a| y2.iter().map(move |&b| (a, b))).collect();
    let gcds: Vec<Vec<u64>> = points
        .par_iter()
        .map(|&(a, b)| restricted_gcd_mod(&reduced, v, &[0, a, b, 1], p))
        .collect();
    if gcds.iter().any(|h| h.len() != e + 1) {
        return None;
    }
    let n = e + 1;
    let n1: Vec<u64> = y1.iter().map(|&x| to_mod(x, p)).collect();
    let n2: Vec<u64> = y2.iter().map(|&x| to_mod(x, p)).collect();
    let mut table = vec![vec![0u64; n * n]; e];
    for k in 0..e {
        // interpolate along y2 for each y1 node, then along y1
        let mut grid: Vec<u64> = gcds.iter().map(|h| h[k]).collect();
        for i in 0..n {
            let c = interpolate_mod(&n2, &grid[i * n..(i + 1) * n], p);
            grid[i * n..(i + 1) * n].copy_from_slice(&c);
        }
        for j in 0..n {
            let column: Vec<u64> = (0..n).map(|i| grid[i * n + j]).collect();
            for (i, c) in interpolate_mod(&n1, &column, p).into_iter().enumerate() {
                grid[i * n + j] = c;
            }
        }
        for a in 0..n {
            for b in 0..n {
                if a + b > e - k && grid[a * n + b] != 0 {
                    return None;
                }
            }
        }
        table[k] = grid;
    }
    Some(
        shifted_support(e)
            .iter()
            .map(|m| table[m[0] as usize][m[1] as usize * n + m[2] as usize])
            .collect(),
    )
}

/// Rewrites the shifted gcd in the original coordinates.
fn unshift(e: usize, coeffs: &[Rational], v: &[i64; 4]) -> TPoly {
    let mut g_prime = TPoly::monomial([e as u32, 0, 0, 0], rat(1));
    for (m, c) in shifted_support(e).into_iter().zip(coeffs) {
        g_prime.add_term(m, c.clone());
    }
    let inv = rat(1) / rat(v[0]);
    let x = TPoly::linear(&[inv.clone(), rat(0), rat(0), rat(0)]);
    let shifted = |i: usize| {
        let mut c = [rat(0), rat(0), rat(0), rat(0)];
        c[0] = -(rat(v[i]) * &inv);
        c[i] = rat(1);
        TPoly::linear(&c)
    };
    g_prime.compose(&[x, shifted(1), shifted(2), shifted(3)]).normalized()
}

/// One recovery attempt for a gcd of known degree `e >= 1`.
fn recover<R: Rng + ?Sized>(forms: &[TPoly], e: usize, rng: &mut R) -> Option<TPoly> {
    let mut v = random_vector(rng);
    while v[0] == 0 {
        v[0] = rng.gen_range(1..=NODE_RANGE);
    }
    let y1 = distinct_nodes(e + 1, rng);
    let y2 = distinct_nodes(e + 1, rng);
    let mut lifted: Option<(Vec<BigInt>, BigInt)> = None;
    let mut bad = 0;
    for _ in 0..MAX_PRIMES {
        let p = random_prime(rng);
        let Some(residues) = shifted_gcd_mod(forms, e, &v, &y1, &y2, p) else {
            bad += 1;
            if bad >= BAD_PRIME_LIMIT {
                return None;
            }
            continue;
        };
        let (acc, modulus): (Vec<BigInt>, BigInt) = match lifted.take() {
            Some((acc, m)) => {
                let combined = acc.iter().zip(&residues).map(|(a, &b)| crt_combine(a, &m, b, p)).collect();
                (combined, m * BigInt::from(p))
            }
            None => (residues.iter().map(|&x| BigInt::from(x)).collect(), BigInt::from(p)),
        };
        let candidate: Option<Vec<Rational>> = acc.iter().map(|a| rational_reconstruct(a, &modulus)).collect();
        if let Some(coeffs) = candidate {
            let g = unshift(e, &coeffs, &v);
            if forms.iter().all(|f| f.div_exact(&g).is_some()) {
                return Some(g);
            }
        }
        lifted = Some((acc, modulus));
    }
    None
}

/// Gcd of nonzero homogeneous forms, normalized to a primitive integer form
/// with positive lex-leading coefficient. Returns the constant `1` when the
/// forms are coprime.
pub fn gcd_forms<R: Rng + ?Sized>(forms: &[TPoly], rng: &mut R) -> Result<TPoly> {
    if forms.iter().any(TPoly::is_zero) {
        return Err(Error::Input("gcd of a zero form".into()));
    }
    let forms: Vec<TPoly> = forms.iter().map(TPoly::normalized).collect();
    if forms.len() == 1 {
        return Ok(forms[0].clone());
    }
    let e = gcd_degree(&forms, rng);
    if e == 0 {
        return Ok(TPoly::one());
    }
    for _ in 0..RETRY_BUDGET {
        if let Some(g) = recover(&forms, e, rng) {
            return Ok(g);
        }
    }
    Err(Error::RetriesExhausted(format!("gcd of degree {e} not recovered")))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn form(terms: &[([u32; 4], i64)]) -> TPoly {
        TPoly::from_terms(terms.iter().map(|&(e, c)| (e, rat(c))))
    }

    #[test]
    fn common_quadric_factor() {
        let g = form(&[([2, 0, 0, 0], 3), ([0, 1, 1, 0], -1), ([0, 0, 0, 2], 5)]);
        let a = form(&[([1, 0, 0, 0], 1), ([0, 0, 0, 1], 2)]);
        let b = form(&[([0, 2, 0, 0], 1), ([0, 0, 1, 1], -7)]);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let got = gcd_forms(&[&g * &a, &g * &b], &mut rng).unwrap();
        assert_eq!(got, g.normalized());
    }

    #[test]
    fn coprime_forms() {
        let a = form(&[([1, 0, 0, 0], 1), ([0, 1, 0, 0], 1)]);
        let b = form(&[([0, 0, 1, 0], 1), ([0, 0, 0, 1], -1)]);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(gcd_forms(&[a, b], &mut rng).unwrap(), TPoly::one());
    }

    #[test]
    fn repeated_factor() {
        let l = form(&[([1, 0, 0, 0], 2), ([0, 1, 0, 0], -3), ([0, 0, 0, 1], 1)]);
        let m = form(&[([0, 0, 1, 0], 1), ([0, 0, 0, 1], 4)]);
        let a = &(&l * &l) * &m;
        let b = &(&l * &l) * &l;
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(gcd_forms(&[a, b], &mut rng).unwrap(), (&l * &l).normalized());
    }

    #[test]
    fn large_coefficients() {
        let g = form(&[([3, 0, 0, 0], 123_457), ([1, 1, 0, 1], -98_765), ([0, 0, 2, 1], 4_242_421)]);
        let a = form(&[([0, 0, 1, 0], 77_777), ([0, 0, 0, 1], 2)]);
        let b = form(&[([0, 1, 0, 0], 1), ([1, 0, 0, 0], -31_337)]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(gcd_forms(&[&g * &a, &g * &b], &mut rng).unwrap(), g.normalized());
    }
}
