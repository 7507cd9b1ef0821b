//! Reference computations written against plain nested vectors, so they
//! share no code with the library's linear algebra.

#![allow(dead_code)]

use num_complex::Complex64;
use soc::linalg::ComplexMatrix;

pub type Dense = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn dense(m: &ComplexMatrix) -> Dense {
    (0..m.rows()).map(|i| m.row(i).to_vec()).collect()
}

pub fn mul(a: &Dense, b: &Dense) -> Dense {
    let (n, k, m) = (a.len(), b.len(), b.first().map_or(0, Vec::len));
    let mut out = vec![vec![c(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            for l in 0..k {
                out[i][j] += a[i][l] * b[l][j];
            }
        }
    }
    out
}

/// Rank by Gaussian elimination with partial pivoting and an absolute
/// cutoff.
pub fn rank(m: &Dense, cutoff: f64) -> usize {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..cols {
        if r == rows {
            break;
        }
        let (p, best) = (r..rows)
            .map(|i| (i, a[i][col].norm()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best <= cutoff {
            continue;
        }
        a.swap(r, p);
        let (top, below) = a.split_at_mut(r + 1);
        let pivot = &top[r];
        for row in below {
            let f = row[col] / pivot[col];
            for (x, &v) in row[col..].iter_mut().zip(&pivot[col..]) {
                *x -= f * v;
            }
        }
        r += 1;
    }
    r
}

/// Roots of `z² − t·z + d`.
pub fn quadratic_roots(t: Complex64, d: Complex64) -> [Complex64; 2] {
    let disc = (t * t - d * 4.0).sqrt();
    [(t + disc) / 2.0, (t - disc) / 2.0]
}

/// Eigenvalues of a 2×2 matrix from its trace and determinant.
pub fn eig2(m: &Dense) -> [Complex64; 2] {
    let t = m[0][0] + m[1][1];
    let d = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    quadratic_roots(t, d)
}

pub fn horner(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Whether two multisets agree up to `tol`, by trying every unused
/// partner in turn (fine for the small sizes used here).
pub fn same_multiset(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    fn go(a: &[Complex64], b: &[Complex64], used: &mut Vec<bool>, tol: f64) -> bool {
        let Some((&x, rest)) = a.split_first() else { return true };
        for j in 0..b.len() {
            if !used[j] && (x - b[j]).norm() <= tol {
                used[j] = true;
                if go(rest, b, used, tol) {
                    return true;
                }
                used[j] = false;
            }
        }
        false
    }
    a.len() == b.len() && go(a, b, &mut vec![false; b.len()], tol)
}

/// Distinct values of `a` up to `tol`.
pub fn distinct(a: &[Complex64], tol: f64) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = Vec::new();
    for &x in a {
        if out.iter().all(|y| (x - y).norm() > tol) {
            out.push(x);
        }
    }
    out
}

/// Same finite set up to `tol`, ignoring multiplicity.
pub fn same_set(a: &[Complex64], b: &[Complex64], tol: f64) -> bool {
    a.iter().all(|x| b.iter().any(|y| (x - y).norm() <= tol))
        && b.iter().all(|y| a.iter().any(|x| (x - y).norm() <= tol))
}

/// `{a, b, …}` with real values printed without an imaginary part.
pub fn show(values: &[Complex64]) -> String {
    let parts: Vec<String> = values
        .iter()
        .map(|z| if z.im.abs() < 1e-12 { format!("{}", z.re + 0.0) } else { format!("{z}") })
        .collect();
    format!("{{{}}}", parts.join(", "))
}
