//! Exact dense linear algebra over the rationals.
//!
//! Everything is computed on integer matrices obtained by clearing
//! denominators row by row, using fraction-free (Bareiss) elimination. The
//! Gauss–Jordan variant keeps every entry a minor of the input, so all the
//! divisions below are exact.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::prime::{inv_mod, mul_mod, reduce_bigint, sub_mod};
use crate::arith::{denominator_lcm, Rational};
use crate::error::{Error, Result};

/// Dense row-major rational matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Rational>,
}

impl QMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<Rational>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(QMatrix { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        QMatrix { rows, cols, data: vec![Rational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, Rational::one());
        }
        m
    }

    /// Builds a matrix from rows of equal length.
    pub fn from_rows(rows: Vec<Vec<Rational>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data = rows.iter().flat_map(|r| r.iter().map(|&x| Rational::from_integer(x.into()))).collect();
        let cols = rows.first().map_or(0, |r| r.len());
        Self::new(rows.len(), cols, data).expect("rectangular literal")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rational {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: Rational) {
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Rational] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<Rational> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> QMatrix {
        let mut t = QMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j).clone());
            }
        }
        t
    }

    pub fn mul(&self, other: &QMatrix) -> Result<QMatrix> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = QMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.data[i * other.cols + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Vec<Rational> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn select_columns(&self, cols: &[usize]) -> QMatrix {
        let mut out = QMatrix::zeros(self.rows, cols.len());
        for i in 0..self.rows {
            for (k, &j) in cols.iter().enumerate() {
                out.set(i, k, self.get(i, j).clone());
            }
        }
        out
    }

    /// Rows scaled by their denominator lcm, plus the scale factors.
    pub(crate) fn integer_rows(&self) -> (Vec<Vec<BigInt>>, Vec<BigInt>) {
        (0..self.rows)
            .map(|i| {
                let row = self.row(i);
                let l = denominator_lcm(row);
                let ints = row.iter().map(|q| (q * &l).to_integer()).collect();
                (ints, l)
            })
            .unzip()
    }
}

impl fmt::Display for QMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let cells: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "| {} |", cells.join(" "))?;
        }
        Ok(())
    }
}

/// Fraction-free elimination on an integer matrix.
///
/// Pivot rows end up first, in pivot order. With `reduce_above` the pivot
/// columns are cleared in every other row (Gauss–Jordan form). Returns the
/// pivot columns and the sign of the row permutation.
pub(crate) fn fraction_free_eliminate(
    a: &mut [Vec<BigInt>],
    ncols: usize,
    reduce_above: bool,
) -> (Vec<usize>, bool) {
    let m = a.len();
    let mut prev = BigInt::one();
    let mut pivots = Vec::new();
    let mut negated = false;
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(found) = (r..m).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        if found != r {
            a.swap(found, r);
            negated = !negated;
        }
        let (head, tail) = a.split_at_mut(r);
        let (pivot_row, below) = tail.split_first_mut().expect("row r exists");
        let piv = pivot_row[c].clone();
        let start = if reduce_above { 0 } else { c };
        let update = |row: &mut Vec<BigInt>| {
            let f = row[c].clone();
            for j in start..ncols {
                if row[j].is_zero() && (f.is_zero() || pivot_row[j].is_zero()) {
                    continue;
                }
                let mut x = &piv * &row[j];
                if !f.is_zero() && !pivot_row[j].is_zero() {
                    x -= &f * &pivot_row[j];
                }
                row[j] = if prev.is_one() { x } else { x / &prev };
            }
        };
        below.iter_mut().for_each(&update);
        if reduce_above {
            head.iter_mut().for_each(&update);
        }
        prev = piv;
        pivots.push(c);
        r += 1;
    }
    (pivots, negated)
}

/// Exact rank over the rationals.
pub fn rank(m: &QMatrix) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let (mut a, _) = m.integer_rows();
    fraction_free_eliminate(&mut a, m.cols, false).0.len()
}

/// Basis of `{v : M v = 0}` in canonical form.
///
/// One vector per free column (in increasing order), read off the reduced
/// echelon form with the free coordinate set to 1, then scaled so that its
/// first nonzero coordinate is 1.
pub fn nullspace_basis(m: &QMatrix) -> Vec<Vec<Rational>> {
    let n = m.cols;
    if m.rows == 0 {
        return (0..n).map(|j| unit_vector(n, j)).collect();
    }
    let (mut a, _) = m.integer_rows();
    let (pivots, _) = fraction_free_eliminate(&mut a, n, true);
    let mut is_pivot = vec![false; n];
    for &c in &pivots {
        is_pivot[c] = true;
    }
    (0..n)
        .filter(|&j| !is_pivot[j])
        .map(|free| {
            let mut v = vec![Rational::zero(); n];
            v[free] = Rational::one();
            for (i, &c) in pivots.iter().enumerate() {
                if !a[i][free].is_zero() {
                    v[c] = -Rational::new(a[i][free].clone(), a[i][c].clone());
                }
            }
            let lead = v.iter().find(|x| !x.is_zero()).cloned().expect("free coordinate is 1");
            if !lead.is_one() {
                for x in &mut v {
                    *x /= &lead;
                }
            }
            v
        })
        .collect()
}

fn unit_vector(n: usize, j: usize) -> Vec<Rational> {
    let mut v = vec![Rational::zero(); n];
    v[j] = Rational::one();
    v
}

/// Exact determinant by Bareiss elimination.
pub fn det(m: &QMatrix) -> Result<Rational> {
    if m.rows != m.cols {
        return Err(Error::Dimension(format!("determinant of a {}x{} matrix", m.rows, m.cols)));
    }
    if m.rows == 0 {
        return Ok(Rational::one());
    }
    let (a, scales) = m.integer_rows();
    let d = det_integer(a);
    let scale = scales.iter().fold(BigInt::one(), |acc, s| acc * s);
    Ok(Rational::new(d, scale))
}

/// Determinant of a square integer matrix (consumed).
pub fn det_integer(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let (pivots, negated) = fraction_free_eliminate(&mut a, n, false);
    if pivots.len() < n {
        return BigInt::zero();
    }
    let d = a[n - 1][n - 1].clone();
    if negated {
        -d
    } else {
        d
    }
}

/// Gauss–Jordan elimination over `F_p` in place; returns the pivot columns.
pub(crate) fn eliminate_mod_p(a: &mut [Vec<u64>], ncols: usize, p: u64) -> Vec<usize> {
    let m = a.len();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        if r == m {
            break;
        }
        let Some(found) = (r..m).find(|&i| a[i][c] != 0) else {
            continue;
        };
        a.swap(found, r);
        let inv = inv_mod(a[r][c], p);
        for x in a[r].iter_mut() {
            *x = mul_mod(*x, inv, p);
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i == r || row[c] == 0 {
                continue;
            }
            let f = row[c];
            for j in c..ncols {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(f, pivot_row[j], p), p);
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

/// Reduces the row-scaled integer form of `m` modulo `p`.
pub(crate) fn reduce_mod_p(m: &QMatrix, p: u64) -> Vec<Vec<u64>> {
    let (a, _) = m.integer_rows();
    a.iter().map(|row| row.iter().map(|x| reduce_bigint(x, p)).collect()).collect()
}

/// Rank over `F_p` of the matrix with each row scaled to integers.
///
/// Never exceeds the rational rank; equal for all but finitely many primes.
pub fn rank_mod_p(m: &QMatrix, p: u64) -> usize {
    if m.rows == 0 || m.cols == 0 {
        return 0;
    }
    let mut a = reduce_mod_p(m, p);
    eliminate_mod_p(&mut a, m.cols, p).len()
}

/// Largest absolute entry bit length, for diagnostics.
pub fn max_entry_bits(m: &QMatrix) -> u64 {
    m.data
        .iter()
        .map(|q| q.numer().abs().bits().max(q.denom().bits()))
        .max()
        .unwrap_or(0)
}
