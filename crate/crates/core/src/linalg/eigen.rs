use super::{c, ComplexMatrix, ComplexNumber, SpectrumSet};
use crate::error::{Error, Result};

const EPS: f64 = f64::EPSILON;
const STALL: usize = 30;

/// Complex Schur form of a balanced matrix.
///
/// With `D = diag(scaling)` the input satisfies `A = D·Q·T·Qᴴ·D⁻¹`, where
/// `Q` is unitary and `T` upper triangular.
#[derive(Clone, Debug)]
pub struct Schur {
    pub t: ComplexMatrix,
    pub q: ComplexMatrix,
    pub scaling: Vec<f64>,
}

impl Schur {
    pub fn eigenvalues(&self) -> Vec<ComplexNumber> {
        self.t.diagonal()
    }

    /// Reassembles `D·Q·X·Qᴴ·D⁻¹` for a matrix `X` in Schur coordinates.
    pub fn back_transform(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let mut out = self.q.mul(x).mul(&self.q.adjoint());
        let n = out.rows();
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] *= self.scaling[i] / self.scaling[j];
            }
        }
        out
    }

    /// Swaps the adjacent diagonal entries `k` and `k + 1` of `T` by a
    /// unitary rotation, keeping `A = D·Q·T·Qᴴ·D⁻¹`.
    pub(crate) fn swap_adjacent(&mut self, k: usize) {
        let n = self.t.rows();
        let t11 = self.t[(k, k)];
        let t22 = self.t[(k + 1, k + 1)];
        let (cs, sn) = givens(self.t[(k, k + 1)], t22 - t11);
        for j in k + 2..n {
            let (x, y) = (self.t[(k, j)], self.t[(k + 1, j)]);
            self.t[(k, j)] = x * cs + sn * y;
            self.t[(k + 1, j)] = y * cs - sn.conj() * x;
        }
        let snc = sn.conj();
        for i in 0..k {
            let (x, y) = (self.t[(i, k)], self.t[(i, k + 1)]);
            self.t[(i, k)] = x * cs + snc * y;
            self.t[(i, k + 1)] = y * cs - sn * x;
        }
        self.t[(k, k)] = t22;
        self.t[(k + 1, k + 1)] = t11;
        for i in 0..n {
            let (x, y) = (self.q[(i, k)], self.q[(i, k + 1)]);
            self.q[(i, k)] = x * cs + snc * y;
            self.q[(i, k + 1)] = y * cs - sn * x;
        }
    }
}

/// Rotation `(c, s)` with real `c` such that
/// `[[c, s], [−s̄, c]] · [a, b]ᵀ = [r, 0]ᵀ`.
fn givens(a: ComplexNumber, b: ComplexNumber) -> (f64, ComplexNumber) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == 0.0 {
        return (1.0, c(0.0, 0.0));
    }
    if na == 0.0 {
        return (0.0, b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn cabs1(z: ComplexNumber) -> f64 {
    z.re.abs() + z.im.abs()
}

/// Diagonal similarity by powers of two that roughly equalizes row and
/// column norms. Returns the scaled matrix and the scaling factors.
fn balance(m: &ComplexMatrix) -> (ComplexMatrix, Vec<f64>) {
    let n = m.rows();
    let mut a = m.clone();
    let mut d = vec![1.0; n];
    let mut converged = false;
    let mut sweeps = 0;
    while !converged && sweeps < 100 {
        converged = true;
        sweeps += 1;
        for i in 0..n {
            let mut col = 0.0;
            let mut row = 0.0;
            for j in 0..n {
                if j != i {
                    col += cabs1(a[(j, i)]);
                    row += cabs1(a[(i, j)]);
                }
            }
            if col == 0.0 || row == 0.0 {
                continue;
            }
            let total = col + row;
            let mut f = 1.0;
            while col < row / 2.0 {
                col *= 2.0;
                row /= 2.0;
                f *= 2.0;
            }
            while col >= row * 2.0 {
                col /= 2.0;
                row *= 2.0;
                f /= 2.0;
            }
            if (col + row) / f < 0.95 * total {
                converged = false;
                d[i] *= f;
                for j in 0..n {
                    a[(i, j)] /= f;
                    a[(j, i)] *= f;
                }
            }
        }
    }
    (a, d)
}

/// Householder reduction to upper Hessenberg form, accumulating the unitary
/// factor into `q`.
fn hessenberg(h: &mut ComplexMatrix, q: &mut ComplexMatrix) {
    let n = h.rows();
    for k in 0..n.saturating_sub(2) {
        let tail: f64 = (k + 2..n).map(|i| h[(i, k)].norm_sqr()).sum();
        if tail == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let norm = (tail + x0.norm_sqr()).sqrt();
        let phase = if x0.norm() == 0.0 { c(1.0, 0.0) } else { x0 / x0.norm() };
        let alpha = -phase * norm;
        let mut v: Vec<ComplexNumber> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vn = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut v {
            *z /= vn;
        }
        // H ← (I − 2vvᴴ)·H
        for j in 0..n {
            let s: ComplexNumber = v
                .iter()
                .enumerate()
                .map(|(i, vi)| vi.conj() * h[(k + 1 + i, j)])
                .sum();
            for (i, vi) in v.iter().enumerate() {
                h[(k + 1 + i, j)] -= vi * s * 2.0;
            }
        }
        // H ← H·(I − 2vvᴴ), Q ← Q·(I − 2vvᴴ)
        for target in [&mut *h, &mut *q] {
            for i in 0..n {
                let s: ComplexNumber = v
                    .iter()
                    .enumerate()
                    .map(|(j, vj)| target[(i, k + 1 + j)] * vj)
                    .sum();
                for (j, vj) in v.iter().enumerate() {
                    target[(i, k + 1 + j)] -= s * vj.conj() * 2.0;
                }
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = c(0.0, 0.0);
        }
    }
}

/// Whether the subdiagonal entry `h[k][k−1]` can be set to zero.
fn negligible(h: &ComplexMatrix, k: usize, lo: usize, hi: usize, smallnum: f64) -> bool {
    let sub = cabs1(h[(k, k - 1)]);
    if sub <= smallnum {
        return true;
    }
    let mut tst = cabs1(h[(k - 1, k - 1)]) + cabs1(h[(k, k)]);
    if tst == 0.0 {
        if k >= lo + 2 {
            tst += h[(k - 1, k - 2)].re.abs();
        }
        if k < hi {
            tst += h[(k + 1, k)].re.abs();
        }
    }
    if sub > EPS * tst {
        return false;
    }
    // Ahues-Tisseur refinement for graded matrices.
    let ab = sub.max(cabs1(h[(k - 1, k)]));
    let ba = sub.min(cabs1(h[(k - 1, k)]));
    let diff = h[(k - 1, k - 1)] - h[(k, k)];
    let aa = cabs1(h[(k, k)]).max(cabs1(diff));
    let bb = cabs1(h[(k, k)]).min(cabs1(diff));
    let s = aa + ab;
    s > 0.0 && ba * (ab / s) <= smallnum.max(EPS * (bb * (aa / s)))
}

fn wilkinson(h: &ComplexMatrix, hi: usize) -> ComplexNumber {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let cc = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let p = (a - d) * 0.5;
    let bc = b * cc;
    let disc = (p * p + bc).sqrt();
    let denom = if (p + disc).norm() >= (p - disc).norm() {
        p + disc
    } else {
        p - disc
    };
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// Complex Schur decomposition by balancing, Hessenberg reduction and
/// single-shift QR iteration with Wilkinson shifts.
pub fn schur(m: &ComplexMatrix) -> Result<Schur> {
    let n = m.require_square()?;
    let (mut h, scaling) = balance(m);
    let mut q = ComplexMatrix::identity(n);
    hessenberg(&mut h, &mut q);

    let cap = 100 * n;
    let smallnum = f64::MIN_POSITIVE * (n as f64 / EPS);
    let norm = h.frobenius_norm();
    let mut total = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    let mut rotations: Vec<(f64, ComplexNumber)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            // stalled blocks (e.g. nearly equal eigenvalues under graded noise)
            // fall back to a norm-wise test, which is still backward stable
            let stalled = since_deflation >= STALL && cabs1(h[(lo, lo - 1)]) <= EPS * norm;
            if stalled || negligible(&h, lo, 0, hi, smallnum) {
                h[(lo, lo - 1)] = c(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        total += 1;
        since_deflation += 1;
        if total > cap {
            return Err(Error::ConvergenceFailure { iterations: cap });
        }
        let mu = if since_deflation % 10 == 0 {
            h[(hi, hi)] + c(0.75 * cabs1(h[(hi, hi - 1)]), 0.0)
        } else {
            wilkinson(&h, hi)
        };

        for i in lo..=hi {
            h[(i, i)] -= mu;
        }
        rotations.clear();
        for k in lo..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            rotations.push((cs, sn));
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * cs + sn * y;
                h[(k + 1, j)] = y * cs - sn.conj() * x;
            }
            h[(k + 1, k)] = c(0.0, 0.0);
        }
        for (idx, &(cs, sn)) in rotations.iter().enumerate() {
            let k = lo + idx;
            let snc = sn.conj();
            for i in 0..=(k + 1).min(hi) {
                let (u, v) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = u * cs + v * snc;
                h[(i, k + 1)] = v * cs - u * sn;
            }
            for i in 0..n {
                let (u, v) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = u * cs + v * snc;
                q[(i, k + 1)] = v * cs - u * sn;
            }
        }
        for i in lo..=hi {
            h[(i, i)] += mu;
        }
    }
    for i in 1..n {
        for j in 0..i {
            h[(i, j)] = c(0.0, 0.0);
        }
    }
    Ok(Schur { t: h, q, scaling })
}

/// All eigenvalues with algebraic multiplicity.
pub fn eigenvalues(m: &ComplexMatrix, tol: f64) -> Result<SpectrumSet> {
    let s = schur(m)?;
    Ok(SpectrumSet::new(s.eigenvalues(), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::r;

    fn reconstruct(m: &ComplexMatrix) -> f64 {
        let s = schur(m).unwrap();
        assert!(s.t.is_upper_triangular());
        let qq = s.q.adjoint().mul(&s.q);
        assert!(qq.distance(&ComplexMatrix::identity(m.rows())) < 1e-12);
        s.back_transform(&s.t).distance(m) / m.frobenius_norm().max(1.0)
    }

    #[test]
    fn involution() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let e = eigenvalues(&m, 1e-10).unwrap();
        assert!(e.approx_eq(&SpectrumSet::new(vec![r(-1.0), r(1.0)], 1e-10)));
        assert!(reconstruct(&m) < 1e-14);
    }

    #[test]
    fn triangular_is_exact() {
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1.5, 0.25), r(7.0), r(-3.0)],
            vec![r(0.0), r(-2.0), c(0.0, 4.0)],
            vec![r(0.0), r(0.0), c(1.0 / 3.0, -1.0)],
        ])
        .unwrap();
        let s = schur(&m).unwrap();
        assert_eq!(s.eigenvalues(), m.diagonal());
    }

    #[test]
    fn rotation_matrix_has_imaginary_spectrum() {
        let m = ComplexMatrix::from_real(&[&[0.0, -1.0], &[1.0, 0.0]]);
        let e = eigenvalues(&m, 1e-12).unwrap();
        assert!(e.approx_eq(&SpectrumSet::new(vec![c(0.0, 1.0), c(0.0, -1.0)], 1e-12)));
    }

    #[test]
    fn nilpotent_and_companion() {
        let j = ComplexMatrix::from_real(&[&[0.0, 1.0, 0.0], &[0.0, 0.0, 1.0], &[0.0, 0.0, 0.0]]);
        assert!(eigenvalues(&j, 1e-8).unwrap().values().iter().all(|z| z.norm() < 1e-8));
        // companion matrix of (z−1)(z−2)(z−3)
        let comp = ComplexMatrix::from_real(&[&[6.0, -11.0, 6.0], &[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let e = eigenvalues(&comp, 1e-9).unwrap();
        assert!(e.approx_eq(&SpectrumSet::new(vec![r(1.0), r(2.0), r(3.0)], 1e-9)));
        assert!(reconstruct(&comp) < 1e-13);
    }

    #[test]
    fn repeated_eigenvalue_with_noise() {
        let z = c(-0.299, -0.242);
        let m = ComplexMatrix::from_rows(vec![vec![z, c(0.0, 3.3e-19)], vec![c(5.2e-18, 1.4e-17), z]]).unwrap();
        let e = eigenvalues(&m, 1e-12).unwrap();
        assert!(e.approx_eq(&SpectrumSet::new(vec![z, z], 1e-12)));
    }

    #[test]
    fn swap_preserves_similarity() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0, 0.5], &[0.0, 3.0, 1.0], &[0.0, 0.0, -2.0]]);
        let mut s = schur(&m).unwrap();
        s.swap_adjacent(0);
        s.swap_adjacent(1);
        assert!(s.t.is_upper_triangular() || s.t[(1, 0)].norm() < 1e-15);
        assert_eq!(s.t[(0, 0)], r(3.0));
        assert_eq!(s.t[(2, 2)], r(1.0));
        assert!(s.back_transform(&s.t).distance(&m) < 1e-13);
    }

    #[test]
    fn errors() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0]]);
        assert!(matches!(eigenvalues(&m, 1e-8), Err(Error::NonSquare { .. })));
    }
}
