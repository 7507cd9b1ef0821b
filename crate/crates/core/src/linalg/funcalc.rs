use serde::{Deserialize, Serialize};

use super::eigen::{schur, Schur};
use super::{c, ComplexMatrix, ComplexNumber, SpectrumSet};
use crate::error::{Error, Result};

/// Eigenvalues closer than this share a diagonal block in the Schur-Parlett
/// evaluation.
const CLUSTER_DELTA: f64 = 0.1;
const MAX_TAYLOR_TERMS: usize = 300;
/// Relative distance to the spectrum below which `z` counts as an
/// eigenvalue for [`resolvent`].
const SPECTRAL_POINT_TOL: f64 = 1e-10;

/// `p(z) = Σ coeffs[k]·zᵏ` by Horner's rule.
pub fn poly_eval(coeffs: &[ComplexNumber], z: ComplexNumber) -> ComplexNumber {
    coeffs.iter().rev().fold(c(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Coefficients of `outer(inner(z))`.
pub fn poly_compose(outer: &[ComplexNumber], inner: &[ComplexNumber]) -> Vec<ComplexNumber> {
    let mut acc: Vec<ComplexNumber> = Vec::new();
    for &a in outer.iter().rev() {
        let mut next = vec![c(0.0, 0.0); (acc.len() + inner.len()).saturating_sub(1).max(1)];
        for (i, x) in acc.iter().enumerate() {
            for (j, y) in inner.iter().enumerate() {
                next[i + j] += x * y;
            }
        }
        next[0] += a;
        acc = next;
    }
    acc
}

/// `Σ coeffs[k]·mᵏ` by Horner's rule. An empty coefficient list is the zero
/// polynomial.
pub fn poly_apply(m: &ComplexMatrix, coeffs: &[ComplexNumber]) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let mut acc = ComplexMatrix::zeros(n, n);
    for (k, &a) in coeffs.iter().rev().enumerate() {
        acc = if k == 0 {
            ComplexMatrix::scalar_identity(n, a)
        } else {
            acc.mul(m).shift(a)
        };
    }
    Ok(acc)
}

/// `(zI − m)⁻¹`.
pub fn resolvent(m: &ComplexMatrix, z: ComplexNumber) -> Result<ComplexMatrix> {
    let n = m.require_square()?;
    let eig = schur(m)?.eigenvalues();
    let distance = eig
        .iter()
        .map(|l| (l - z).norm())
        .fold(f64::INFINITY, f64::min);
    if distance <= SPECTRAL_POINT_TOL * m.frobenius_norm().max(1.0) {
        return Err(Error::SpectralPoint { z, distance });
    }
    let shifted = ComplexMatrix::scalar_identity(n, z).sub(m);
    shifted
        .inverse()
        .map_err(|_| Error::SpectralPoint { z, distance })
}

/// Frobenius norm of `R(z) − R(w) − (w − z)·R(z)·R(w)`.
pub fn resolvent_identity_residual(
    m: &ComplexMatrix,
    z: ComplexNumber,
    w: ComplexNumber,
) -> Result<f64> {
    let rz = resolvent(m, z)?;
    let rw = resolvent(m, w)?;
    let rhs = rz.mul(&rw).scale(w - z);
    Ok(rz.sub(&rw).sub(&rhs).frobenius_norm())
}

pub fn resolvent_identity_check(
    m: &ComplexMatrix,
    z: ComplexNumber,
    w: ComplexNumber,
    tol: f64,
) -> Result<bool> {
    Ok(resolvent_identity_residual(m, z, w)? < tol)
}

/// Open disk to which a function's domain may be further restricted.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct RestrictionDisk {
    pub center: ComplexNumber,
    pub radius: f64,
}

/// Supported holomorphic functions. `Log` and `Sqrt` are principal branches
/// cut along the closed negative real axis; `Resolvent` is `1/(pole − z)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum FunctionKind {
    Exp,
    Sin,
    Cos,
    Log,
    Sqrt,
    Polynomial { coeffs: Vec<ComplexNumber> },
    Resolvent { pole: ComplexNumber },
}

/// A holomorphic function together with its declared domain.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HolomorphicFn {
    #[serde(flatten)]
    pub kind: FunctionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub restriction: Option<RestrictionDisk>,
}

impl From<FunctionKind> for HolomorphicFn {
    fn from(kind: FunctionKind) -> Self {
        Self {
            kind,
            restriction: None,
        }
    }
}

impl HolomorphicFn {
    pub fn exp() -> Self {
        FunctionKind::Exp.into()
    }

    pub fn log() -> Self {
        FunctionKind::Log.into()
    }

    pub fn sqrt() -> Self {
        FunctionKind::Sqrt.into()
    }

    pub fn polynomial(coeffs: Vec<ComplexNumber>) -> Self {
        FunctionKind::Polynomial { coeffs }.into()
    }

    pub fn restricted_to(mut self, center: ComplexNumber, radius: f64) -> Self {
        self.restriction = Some(RestrictionDisk { center, radius });
        self
    }

    pub fn name(&self) -> String {
        match &self.kind {
            FunctionKind::Exp => "exp".into(),
            FunctionKind::Sin => "sin".into(),
            FunctionKind::Cos => "cos".into(),
            FunctionKind::Log => "log".into(),
            FunctionKind::Sqrt => "sqrt".into(),
            FunctionKind::Polynomial { coeffs } => format!("polynomial of degree {}", coeffs.len().saturating_sub(1)),
            FunctionKind::Resolvent { pole } => format!("1/({pole} - z)"),
        }
    }

    pub fn in_domain(&self, z: ComplexNumber) -> bool {
        if let Some(d) = self.restriction {
            if (z - d.center).norm() >= d.radius {
                return false;
            }
        }
        let on_cut = z.re <= 0.0 && z.im.abs() <= 1e-12 * z.norm().max(1.0);
        match &self.kind {
            FunctionKind::Log | FunctionKind::Sqrt => !on_cut,
            FunctionKind::Resolvent { pole } => z != *pole,
            _ => true,
        }
    }

    pub fn eval(&self, z: ComplexNumber) -> Result<ComplexNumber> {
        if !self.in_domain(z) {
            return Err(Error::DomainViolation {
                eigenvalue: z,
                function: self.name(),
            });
        }
        Ok(self.taylor_coeff(0, z))
    }

    /// `f⁽ᵏ⁾(σ)/k!`.
    fn taylor_coeff(&self, k: usize, s: ComplexNumber) -> ComplexNumber {
        let fact = |k: usize| (1..=k).fold(1.0, |acc, i| acc * i as f64);
        match &self.kind {
            FunctionKind::Exp => s.exp() / fact(k),
            FunctionKind::Sin => {
                let d = match k % 4 {
                    0 => s.sin(),
                    1 => s.cos(),
                    2 => -s.sin(),
                    _ => -s.cos(),
                };
                d / fact(k)
            }
            FunctionKind::Cos => {
                let d = match k % 4 {
                    0 => s.cos(),
                    1 => -s.sin(),
                    2 => -s.cos(),
                    _ => s.sin(),
                };
                d / fact(k)
            }
            FunctionKind::Log => {
                if k == 0 {
                    s.ln()
                } else {
                    let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
                    c(sign / k as f64, 0.0) / s.powu(k as u32)
                }
            }
            FunctionKind::Sqrt => {
                let mut b = 1.0;
                for i in 0..k {
                    b *= (0.5 - i as f64) / (i + 1) as f64;
                }
                s.sqrt() / s.powu(k as u32) * b
            }
            FunctionKind::Polynomial { coeffs } => {
                let mut acc = c(0.0, 0.0);
                for (j, &a) in coeffs.iter().enumerate().skip(k).rev() {
                    acc = acc * s + a * binomial(j, k);
                }
                acc
            }
            FunctionKind::Resolvent { pole } => (pole - s).powu(k as u32 + 1).inv(),
        }
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `f(m)` by Schur-Parlett: reorder the Schur form so that nearby
/// eigenvalues are contiguous, evaluate each diagonal block by a Taylor
/// series about its mean eigenvalue, and fill in the off-diagonal blocks
/// from the block Parlett recurrence.
pub fn holo_apply(m: &ComplexMatrix, f: &HolomorphicFn) -> Result<ComplexMatrix> {
    let mut s = schur(m)?;
    if let Some(&bad) = s.eigenvalues().iter().find(|z| !f.in_domain(**z)) {
        return Err(Error::DomainViolation {
            eigenvalue: bad,
            function: f.name(),
        });
    }
    let blocks = cluster_and_reorder(&mut s);
    let ft = parlett(&s.t, &blocks, f)?;
    Ok(s.back_transform(&ft))
}

/// Groups the diagonal of `T` into clusters, reorders `T` so each cluster is
/// contiguous and returns the block ranges.
fn cluster_and_reorder(s: &mut Schur) -> Vec<std::ops::Range<usize>> {
    let eig = s.eigenvalues();
    let n = eig.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], i: usize) -> usize {
        let mut r = i;
        while p[r] != r {
            r = p[r];
        }
        p[i] = r;
        r
    }
    for i in 0..n {
        for j in i + 1..n {
            if (eig[i] - eig[j]).norm() <= CLUSTER_DELTA {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut ids = vec![0; n];
    let mut seen: Vec<usize> = Vec::new();
    for (i, id) in ids.iter_mut().enumerate() {
        let root = find(&mut parent, i);
        *id = match seen.iter().position(|&r| r == root) {
            Some(p) => p,
            None => {
                seen.push(root);
                seen.len() - 1
            }
        };
    }
    // bubble sort by cluster id, mirroring each swap in the Schur form
    let mut swapped = true;
    while swapped {
        swapped = false;
        for k in 0..n.saturating_sub(1) {
            if ids[k] > ids[k + 1] {
                s.swap_adjacent(k);
                ids.swap(k, k + 1);
                swapped = true;
            }
        }
    }
    let mut blocks = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || ids[k] != ids[start] {
            blocks.push(start..k);
            start = k;
        }
    }
    blocks
}

fn parlett(
    t: &ComplexMatrix,
    blocks: &[std::ops::Range<usize>],
    f: &HolomorphicFn,
) -> Result<ComplexMatrix> {
    let n = t.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    let sub = |r: &std::ops::Range<usize>, q: &std::ops::Range<usize>| t.submatrix(r.clone(), q.clone());
    for b in blocks {
        let fb = taylor_block(&sub(b, b), f)?;
        out.set_block(b.start, b.start, &fb);
    }
    let get = |o: &ComplexMatrix, r: &std::ops::Range<usize>, q: &std::ops::Range<usize>| o.submatrix(r.clone(), q.clone());
    for j in 1..blocks.len() {
        for i in (0..j).rev() {
            let (bi, bj) = (&blocks[i], &blocks[j]);
            let tij = sub(bi, bj);
            let mut rhs = get(&out, bi, bi).mul(&tij).sub(&tij.mul(&get(&out, bj, bj)));
            for bk in &blocks[i + 1..j] {
                rhs = rhs
                    .add(&get(&out, bi, bk).mul(&sub(bk, bj)))
                    .sub(&sub(bi, bk).mul(&get(&out, bk, bj)));
            }
            let x = triangular_sylvester(&sub(bi, bi), &sub(bj, bj), &rhs);
            out.set_block(bi.start, bj.start, &x);
        }
    }
    Ok(out)
}

/// Solves `A·X − X·B = C` for upper-triangular `A`, `B` with disjoint
/// spectra, one column at a time.
fn triangular_sylvester(a: &ComplexMatrix, b: &ComplexMatrix, rhs: &ComplexMatrix) -> ComplexMatrix {
    let (m, n) = rhs.shape();
    let mut x = ComplexMatrix::zeros(m, n);
    for q in 0..n {
        let mut col: Vec<ComplexNumber> = (0..m).map(|i| rhs[(i, q)]).collect();
        for p in 0..q {
            let bpq = b[(p, q)];
            for (i, v) in col.iter_mut().enumerate() {
                *v += x[(i, p)] * bpq;
            }
        }
        let shift = b[(q, q)];
        for i in (0..m).rev() {
            let mut v = col[i];
            for k in i + 1..m {
                v -= a[(i, k)] * x[(k, q)];
            }
            x[(i, q)] = v / (a[(i, i)] - shift);
        }
    }
    x
}

/// Taylor series of `f` about the mean eigenvalue of a triangular block.
fn taylor_block(t: &ComplexMatrix, f: &HolomorphicFn) -> Result<ComplexMatrix> {
    let m = t.rows();
    let sigma = t.trace() / m as f64;
    let nmat = t.shift(-sigma);
    let mut power = ComplexMatrix::identity(m);
    let mut acc = ComplexMatrix::zeros(m, m);
    if let FunctionKind::Polynomial { coeffs } = &f.kind {
        for k in 0..coeffs.len() {
            acc = acc.add(&power.scale(f.taylor_coeff(k, sigma)));
            power = power.mul(&nmat);
        }
        return Ok(acc);
    }
    let mut prev_small = false;
    for k in 0..MAX_TAYLOR_TERMS {
        let term = power.scale(f.taylor_coeff(k, sigma));
        acc = acc.add(&term);
        let small = term.frobenius_norm() <= f64::EPSILON * acc.frobenius_norm();
        if k >= m && small && prev_small {
            return Ok(acc);
        }
        prev_small = small;
        power = power.mul(&nmat);
    }
    Err(Error::ConvergenceFailure {
        iterations: MAX_TAYLOR_TERMS,
    })
}

/// Whether `σ(f(m)) = f(σ(m))` as spectrum sets at tolerance `tol`.
pub fn classical_spectral_mapping_check(
    m: &ComplexMatrix,
    f: &HolomorphicFn,
    tol: f64,
) -> Result<bool> {
    let fm = holo_apply(m, f)?;
    let lhs = SpectrumSet::new(schur(&fm)?.eigenvalues(), tol);
    let rhs = SpectrumSet::new(
        schur(m)?
            .eigenvalues()
            .into_iter()
            .map(|z| f.eval(z))
            .collect::<Result<_>>()?,
        tol,
    );
    Ok(lhs.approx_eq(&rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::r;

    fn jordan() -> ComplexMatrix {
        ComplexMatrix::from_real(&[&[0.0, 1.0], &[0.0, 0.0]])
    }

    #[test]
    fn resolvent_matches_hand_inverse() {
        // (I − J)⁻¹ = I + J for the nilpotent J
        let got = resolvent(&jordan(), r(1.0)).unwrap();
        assert!(got.distance(&ComplexMatrix::from_real(&[&[1.0, 1.0], &[0.0, 1.0]])) < 1e-15);
        let got = resolvent(&ComplexMatrix::zeros(3, 3), r(1.0)).unwrap();
        assert_eq!(got, ComplexMatrix::identity(3));
        let got = resolvent(&ComplexMatrix::real_diag(&[2.0]), r(3.0)).unwrap();
        assert!((got[(0, 0)] - r(1.0)).norm() < 1e-15);
        assert!(matches!(
            resolvent(&ComplexMatrix::real_diag(&[2.0]), r(2.0)),
            Err(Error::SpectralPoint { .. })
        ));
    }

    #[test]
    fn resolvent_identity_examples() {
        assert!(resolvent_identity_check(&jordan(), r(1.0), r(2.0), 1e-12).unwrap());
        assert!(resolvent_identity_check(&ComplexMatrix::zeros(2, 2), r(1.0), r(1.0), 1e-12).unwrap());
        let d = ComplexMatrix::real_diag(&[1.0, 2.0]);
        assert!(resolvent_identity_check(&d, r(3.0), r(4.0), 1e-12).unwrap());
    }

    #[test]
    fn horner_examples() {
        let d = ComplexMatrix::real_diag(&[1.0, 2.0]);
        assert_eq!(poly_apply(&d, &[r(0.0), r(0.0), r(1.0)]).unwrap(), ComplexMatrix::real_diag(&[1.0, 4.0]));
        assert_eq!(poly_apply(&d, &[r(1.0)]).unwrap(), ComplexMatrix::identity(2));
        assert_eq!(poly_apply(&d, &[r(0.0), r(1.0)]).unwrap(), d);
        assert!(poly_apply(&jordan(), &[r(0.0), r(0.0), r(1.0)]).unwrap().is_zero());
        assert!(poly_apply(&ComplexMatrix::from_real(&[&[1.0, 2.0]]), &[r(1.0)]).is_err());
    }

    #[test]
    fn composition_of_polynomials() {
        // (z + 1)² ∘ (2z) = 4z² + 4z + 1
        let got = poly_compose(&[r(1.0), r(2.0), r(1.0)], &[r(0.0), r(2.0)]);
        assert_eq!(got, vec![r(1.0), r(4.0), r(4.0)]);
        assert_eq!(poly_compose(&[r(3.0)], &[r(0.0), r(1.0)]), vec![r(3.0)]);
    }

    #[test]
    fn exp_of_diagonal() {
        let got = holo_apply(&ComplexMatrix::real_diag(&[1.0, 4.0]), &HolomorphicFn::exp()).unwrap();
        let want = ComplexMatrix::real_diag(&[1f64.exp(), 4f64.exp()]);
        assert!(got.distance(&want) < 1e-12 * want.frobenius_norm());
    }

    #[test]
    fn exp_of_jordan_block() {
        // exp([[a, 1], [0, a]]) = eᵃ·[[1, 1], [0, 1]]
        let m = ComplexMatrix::from_real(&[&[0.5, 1.0], &[0.0, 0.5]]);
        let got = holo_apply(&m, &HolomorphicFn::exp()).unwrap();
        let e = 0.5f64.exp();
        assert!(got.distance(&ComplexMatrix::from_real(&[&[e, e], &[0.0, e]])) < 1e-14);
    }

    #[test]
    fn polynomial_agrees_with_horner() {
        let m = ComplexMatrix::from_real(&[&[1.0, 3.0, -1.0], &[0.0, 2.0, 0.5], &[0.2, 0.0, 1.05]]);
        let coeffs = vec![r(0.5), r(-1.0), r(0.0), r(2.0)];
        let a = holo_apply(&m, &HolomorphicFn::polynomial(coeffs.clone())).unwrap();
        let b = poly_apply(&m, &coeffs).unwrap();
        assert!(a.distance(&b) <= 1e-8 * b.frobenius_norm());
    }

    #[test]
    fn sqrt_squares_back() {
        let m = ComplexMatrix::from_real(&[&[4.0, 1.0], &[0.0, 9.0]]);
        let s = holo_apply(&m, &HolomorphicFn::sqrt()).unwrap();
        assert!(s.mul(&s).distance(&m) < 1e-12);
        let l = holo_apply(&m, &HolomorphicFn::log()).unwrap();
        assert!(holo_apply(&l, &HolomorphicFn::exp()).unwrap().distance(&m) < 1e-11);
    }

    #[test]
    fn domain_violation() {
        let m = ComplexMatrix::real_diag(&[1.0, -2.0]);
        assert!(matches!(holo_apply(&m, &HolomorphicFn::log()), Err(Error::DomainViolation { .. })));
        let f = HolomorphicFn::exp().restricted_to(r(0.0), 1.5);
        assert!(matches!(holo_apply(&m, &f), Err(Error::DomainViolation { .. })));
        let f = HolomorphicFn::from(FunctionKind::Resolvent { pole: r(1.0) });
        assert!(holo_apply(&m, &f).is_err());
    }

    #[test]
    fn resolvent_function_matches_resolvent() {
        let m = ComplexMatrix::from_real(&[&[0.0, 1.0], &[-2.0, 0.3]]);
        let f = HolomorphicFn::from(FunctionKind::Resolvent { pole: c(3.0, 1.0) });
        let a = holo_apply(&m, &f).unwrap();
        let b = resolvent(&m, c(3.0, 1.0)).unwrap();
        assert!(a.distance(&b) < 1e-12);
    }

    #[test]
    fn mapping_examples() {
        let sq = HolomorphicFn::polynomial(vec![r(0.0), r(0.0), r(1.0)]);
        assert!(classical_spectral_mapping_check(&ComplexMatrix::real_diag(&[1.0, 2.0]), &sq, 1e-10).unwrap());
        let shift = HolomorphicFn::polynomial(vec![r(1.0), r(1.0)]);
        let swap = ComplexMatrix::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        assert!(classical_spectral_mapping_check(&swap, &shift, 1e-10).unwrap());
    }

    #[test]
    fn descriptor_json() {
        let f: HolomorphicFn = serde_json::from_str(r#"{"kind":"polynomial","coeffs":[[0,0],[1,0]]}"#).unwrap();
        assert_eq!(f, HolomorphicFn::polynomial(vec![r(0.0), r(1.0)]));
        let g: HolomorphicFn =
            serde_json::from_str(r#"{"kind":"exp","restriction":{"center":[0,0],"radius":2}}"#).unwrap();
        assert!(g.restriction.is_some());
    }
}
