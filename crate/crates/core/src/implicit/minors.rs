//! Maximal minors of the pencil: column selection and determinants as forms.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rayon::prelude::*;

use super::modular::{det_mod, simplex_interpolate_mod, simplex_points};
use super::RETRY_BUDGET;
use crate::arith::prime::{add_mod, crt_combine, is_prime, mul_mod, reduce_bigint};
use crate::arith::{denominator_lcm, rat, Rational, TPoly};
use crate::error::{Error, Result};
use crate::linalg::{fraction_free_eliminate, QMatrix};
use crate::repmat::{P3Point, Pencil};

/// Pivot columns of `m` when columns are visited in `order`: the greedy
/// left-to-right rank extension.
fn greedy_columns(m: &QMatrix, order: &[usize]) -> Vec<usize> {
    let permuted = m.select_columns(order);
    let (mut a, _) = permuted.integer_rows();
    let (pivots, _) = fraction_free_eliminate(&mut a, order.len(), false);
    let mut cols: Vec<usize> = pivots.into_iter().map(|k| order[k]).collect();
    cols.sort_unstable();
    cols
}

/// Row-count many columns whose square submatrix is nonsingular at a random
/// point, visiting columns in `order`.
pub fn select_columns_in_order<R: Rng + ?Sized>(pencil: &Pencil, order: &[usize], rng: &mut R) -> Result<Vec<usize>> {
    let r = pencil.rows();
    for _ in 0..RETRY_BUDGET {
        let p = P3Point::random(rng);
        let cols = greedy_columns(&pencil.evaluate(&p), order);
        if cols.len() == r {
            return Ok(cols);
        }
    }
    Err(Error::RetriesExhausted(format!("no nonsingular {r}x{r} submatrix found")))
}

/// Greedy maximal column selection in natural column order.
pub fn select_max_cols<R: Rng + ?Sized>(pencil: &Pencil, rng: &mut R) -> Result<Vec<usize>> {
    let order: Vec<usize> = (0..pencil.cols()).collect();
    select_columns_in_order(pencil, &order, rng)
}

/// Entries of the column-mixing matrices lie in `[-MIX_RANGE, MIX_RANGE]`.
const MIX_RANGE: i64 = 100;

/// Determinant of `M(T)·C` for a random integer `C`. By Cauchy–Binet this is
/// a random linear combination of all maximal minors, so the gcd of a few such
/// determinants is the gcd of all maximal minors with high probability.
pub fn mixed_minor<R: Rng + ?Sized>(pencil: &Pencil, rng: &mut R) -> Result<TPoly> {
    let (r, c) = (pencil.rows(), pencil.cols());
    let data = (0..c * r).map(|_| rat(rng.gen_range(-MIX_RANGE..=MIX_RANGE))).collect();
    let mix = QMatrix::new(c, r, data)?;
    let mats = pencil.coefficients().clone().map(|m| m.mul(&mix).expect("conforming shapes"));
    let mixed = Pencil::new(mats)?;
    let all: Vec<usize> = (0..r).collect();
    minor_determinant(&mixed, &all)
}

/// Primes below `2^31`, in decreasing order.
fn word_primes() -> impl Iterator<Item = u64> {
    (1u64 << 30..1u64 << 31).rev().filter(|&n| is_prime(n))
}

/// Determinant of the square subpencil on `cols`, as a form of degree equal to
/// the row count.
///
/// After clearing denominators column by column, the determinant at
/// `(a, b, c, 1)` is evaluated modulo word-size primes for all integer points
/// with `a + b + c <= r` and interpolated. The coefficients are recovered by
/// Chinese remaindering once the modulus exceeds twice the bound
/// `prod_i sum_{j,k} |N_k[i][j]|` on any coefficient, so the result is exact.
pub fn minor_determinant(pencil: &Pencil, cols: &[usize]) -> Result<TPoly> {
    let r = pencil.rows();
    if cols.len() != r {
        return Err(Error::Dimension(format!("{} columns selected for {r} rows", cols.len())));
    }
    let subs: Vec<QMatrix> = pencil.coefficients().iter().map(|m| m.select_columns(cols)).collect();
    let scales: Vec<BigInt> = (0..r)
        .map(|j| {
            let column: Vec<Rational> = subs.iter().flat_map(|m| m.column(j)).collect();
            denominator_lcm(&column)
        })
        .collect();
    let ints: Vec<Vec<Vec<BigInt>>> = subs
        .iter()
        .map(|m| (0..r).map(|i| (0..r).map(|j| (m.get(i, j) * &scales[j]).to_integer()).collect()).collect())
        .collect();
    let bound = (0..r).fold(BigInt::one(), |acc, i| {
        let row: BigInt = (0..r).flat_map(|j| ints.iter().map(move |m| m[i][j].abs())).sum();
        acc * row
    });
    if bound.is_zero() {
        return Ok(TPoly::zero());
    }
    let target = bound * 2u32;

    let n = r + 1;
    let points = simplex_points(r);
    let mut lifted: Vec<BigInt> = vec![BigInt::zero(); points.len()];
    let mut modulus = BigInt::one();
    let mut primes = word_primes();
    while modulus <= target {
        let p = primes.next().expect("enough word-size primes");
        let reduced: Vec<Vec<Vec<u64>>> = ints
            .iter()
            .map(|m| m.iter().map(|row| row.iter().map(|x| reduce_bigint(x, p)).collect()).collect())
            .collect();
        let dets: Vec<u64> = points
            .par_iter()
            .map(|&[a, b, c]| {
                let t = [a as u64, b as u64, c as u64, 1];
                let m: Vec<Vec<u64>> = (0..r)
                    .map(|i| {
                        (0..r)
                            .map(|j| (0..4).fold(0, |acc, k| add_mod(acc, mul_mod(reduced[k][i][j], t[k], p), p)))
                            .collect()
                    })
                    .collect();
                det_mod(m, p)
            })
            .collect();
        let mut values = vec![0u64; n * n * n];
        for (&[a, b, c], d) in points.iter().zip(dets) {
            values[(a * n + b) * n + c] = d;
        }
        let coeffs = simplex_interpolate_mod(r, values, p);
        for (acc, &[a, b, c]) in lifted.iter_mut().zip(&points) {
            *acc = crt_combine(acc, &modulus, coeffs[(a * n + b) * n + c], p);
        }
        modulus *= p;
    }

    let half = &modulus / 2u32;
    let scale = Rational::from_integer(scales.iter().fold(BigInt::one(), |acc, s| acc * s));
    let mut det = TPoly::zero();
    for (x, &[a, b, c]) in lifted.into_iter().zip(&points) {
        let x = if x > half { x - &modulus } else { x };
        if !x.is_zero() {
            det.add_term([a as u32, b as u32, c as u32, (r - a - b - c) as u32], Rational::from_integer(x) / &scale);
        }
    }
    Ok(det)
}
