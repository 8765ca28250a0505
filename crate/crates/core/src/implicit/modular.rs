//! Word-size modular helpers: univariate polynomials, determinants and
//! Newton interpolation on simplex grids.

use crate::arith::prime::{add_mod, inv_mod, mul_mod, sub_mod};

pub(crate) fn to_mod(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

pub(crate) fn trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

/// Newton interpolation modulo `p`; coefficients in increasing degree.
pub(crate) fn interpolate_mod(nodes: &[u64], values: &[u64], p: u64) -> Vec<u64> {
    let n = nodes.len();
    let mut dd = values.to_vec();
    for level in 1..n {
        for i in (level..n).rev() {
            let num = sub_mod(dd[i], dd[i - 1], p);
            dd[i] = mul_mod(num, inv_mod(sub_mod(nodes[i], nodes[i - level], p), p), p);
        }
    }
    newton_to_monomial(&dd, nodes, p)
}

fn newton_to_monomial(dd: &[u64], nodes: &[u64], p: u64) -> Vec<u64> {
    let n = dd.len();
    let mut coeffs = vec![0u64; n];
    for k in (0..n).rev() {
        // coeffs <- coeffs * (x - nodes[k]) + dd[k]
        let mut next = vec![0u64; n];
        for i in 0..n {
            if coeffs[i] == 0 {
                continue;
            }
            if i + 1 < n {
                next[i + 1] = add_mod(next[i + 1], coeffs[i], p);
            }
            next[i] = sub_mod(next[i], mul_mod(coeffs[i], nodes[k], p), p);
        }
        next[0] = add_mod(next[0], dd[k], p);
        coeffs = next;
    }
    coeffs
}

fn rem_mod(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let db = b.len() - 1;
    let inv = inv_mod(b[db], p);
    let mut r = a.to_vec();
    while r.len() > db {
        let top = r.len() - 1;
        let q = mul_mod(r[top], inv, p);
        if q != 0 {
            let shift = top - db;
            for (i, &c) in b.iter().enumerate() {
                r[shift + i] = sub_mod(r[shift + i], mul_mod(q, c, p), p);
            }
        }
        r.pop();
        r = trim(r);
    }
    r
}

/// Monic gcd modulo `p`; empty for two zero inputs.
pub(crate) fn gcd_mod(a: Vec<u64>, b: Vec<u64>, p: u64) -> Vec<u64> {
    let (mut a, mut b) = (trim(a), trim(b));
    while !b.is_empty() {
        let r = rem_mod(&a, &b, p);
        a = std::mem::replace(&mut b, r);
    }
    if let Some(&lead) = a.last() {
        let inv = inv_mod(lead, p);
        for c in &mut a {
            *c = mul_mod(*c, inv, p);
        }
    }
    a
}

/// Determinant modulo `p` by Gaussian elimination (input consumed).
pub(crate) fn det_mod(mut a: Vec<Vec<u64>>, p: u64) -> u64 {
    let n = a.len();
    let mut det = 1u64;
    for c in 0..n {
        let Some(r) = (c..n).find(|&i| a[i][c] != 0) else {
            return 0;
        };
        if r != c {
            a.swap(r, c);
            det = sub_mod(0, det, p);
        }
        let piv = a[c][c];
        det = mul_mod(det, piv, p);
        let inv = inv_mod(piv, p);
        let (head, tail) = a.split_at_mut(c + 1);
        let pivot_row = &head[c];
        for row in tail.iter_mut() {
            if row[c] == 0 {
                continue;
            }
            let f = mul_mod(row[c], inv, p);
            for j in c..n {
                if pivot_row[j] != 0 {
                    row[j] = sub_mod(row[j], mul_mod(f, pivot_row[j], p), p);
                }
            }
        }
    }
    det
}

/// Points `(a, b, c)` with `a + b + c <= r`, in lexicographic order.
pub(crate) fn simplex_points(r: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for a in 0..=r {
        for b in 0..=r - a {
            for c in 0..=r - a - b {
                out.push([a, b, c]);
            }
        }
    }
    out
}

/// Interpolation of a polynomial of total degree `<= r` in three variables
/// from its values at the integer points of the simplex (nodes `0..=r` on each
/// axis). `values` and the result are dense `(r+1)^3` arrays indexed by
/// `(a*(r+1) + b)*(r+1) + c`; entries outside the simplex are ignored.
///
/// Tensor divided differences only involve points below the target index, so
/// on this downward closed set they can be taken one axis at a time; the
/// Newton-to-monomial conversion likewise preserves the support.
pub(crate) fn simplex_interpolate_mod(r: usize, mut values: Vec<u64>, p: u64) -> Vec<u64> {
    let n = r + 1;
    let idx = |a: usize, b: usize, c: usize| (a * n + b) * n + c;
    let inverses: Vec<u64> = (0..=r as u64).map(|k| if k == 0 { 0 } else { inv_mod(k, p) }).collect();
    let nodes: Vec<u64> = (0..=r as u64).collect();
    let axis_index = |axis: usize, k: usize, u: usize, v: usize| match axis {
        0 => idx(k, u, v),
        1 => idx(u, k, v),
        _ => idx(u, v, k),
    };
    for axis in 0..3 {
        for u in 0..=r {
            for v in 0..=r - u {
                let len = r - u - v + 1;
                let mut f: Vec<u64> = (0..len).map(|k| values[axis_index(axis, k, u, v)]).collect();
                for level in 1..len {
                    for i in (level..len).rev() {
                        f[i] = mul_mod(sub_mod(f[i], f[i - 1], p), inverses[level], p);
                    }
                }
                for (k, x) in f.into_iter().enumerate() {
                    values[axis_index(axis, k, u, v)] = x;
                }
            }
        }
    }
    for axis in 0..3 {
        for u in 0..=r {
            for v in 0..=r - u {
                let len = r - u - v + 1;
                let dd: Vec<u64> = (0..len).map(|k| values[axis_index(axis, k, u, v)]).collect();
                for (k, x) in newton_to_monomial(&dd, &nodes[..len], p).into_iter().enumerate() {
                    values[axis_index(axis, k, u, v)] = x;
                }
            }
        }
    }
    values
}
