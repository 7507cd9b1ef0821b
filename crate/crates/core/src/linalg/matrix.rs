use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

use super::{c, ComplexNumber};

/// Dense complex matrix stored row-major.
///
/// Public constructors reject zero dimensions and non-finite entries.
/// [`ComplexMatrix::zeros`] is the one exception: it accepts a zero row or
/// column count so that quotient maps onto the zero space can be represented.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<ComplexNumber>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<ComplexNumber>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::EmptyMatrix { rows, cols });
        }
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if let Some(pos) = data.iter().position(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite {
                row: pos / cols,
                col: pos % cols,
            });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: Vec<Vec<ComplexNumber>>) -> Result<Self> {
        let r = rows.len();
        let cc = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != cc) {
            return Err(Error::DimensionMismatch("ragged rows".into()));
        }
        Self::new(r, cc, rows.into_iter().flatten().collect())
    }

    /// Builds a matrix from real rows. Panics on ragged or empty input; meant
    /// for literals in code and tests.
    pub fn from_real(rows: &[&[f64]]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| c(x, 0.0)).collect())
                .collect(),
        )
        .expect("well-formed real literal")
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = c(1.0, 0.0);
        }
        m
    }

    pub fn scalar_identity(n: usize, s: ComplexNumber) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = s;
        }
        m
    }

    pub fn diag(values: &[ComplexNumber]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = v;
        }
        m
    }

    pub fn real_diag(values: &[f64]) -> Self {
        Self::diag(&values.iter().map(|&x| c(x, 0.0)).collect::<Vec<_>>())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> ComplexNumber) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Column matrix from a vector.
    pub fn column_vector(v: &[ComplexNumber]) -> Self {
        Self {
            rows: v.len(),
            cols: 1,
            data: v.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> &[ComplexNumber] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[ComplexNumber] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<ComplexNumber> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Checks that the matrix is square with at least one row.
    pub fn require_square(&self) -> Result<usize> {
        if self.rows != self.cols {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        if self.rows == 0 {
            return Err(Error::EmptyMatrix { rows: 0, cols: 0 });
        }
        Ok(self.rows)
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(
            self.cols, rhs.rows,
            "matmul shape mismatch: {}x{} * {}x{}",
            self.rows, self.cols, rhs.rows, rhs.cols
        );
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == 0.0 && a.im == 0.0 {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        Ok(self.mul(rhs))
    }

    pub fn mul_vec(&self, v: &[ComplexNumber]) -> Vec<ComplexNumber> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "add shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "sub shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, s: ComplexNumber) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(ComplexNumber) -> ComplexNumber) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&a| f(a)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|a| a.conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Shifts the diagonal: `self + s·I`.
    pub fn shift(&self, s: ComplexNumber) -> Self {
        let mut out = self.clone();
        for i in 0..self.rows.min(self.cols) {
            out[(i, i)] += s;
        }
        out
    }

    /// Kronecker product; the row index of `self` is the slower one.
    pub fn kron(&self, rhs: &Self) -> Self {
        let (r2, c2) = rhs.shape();
        Self::from_fn(self.rows * r2, self.cols * c2, |i, j| {
            self[(i / r2, j / c2)] * rhs[(i % r2, j % c2)]
        })
    }

    /// Kronecker product of a sequence; the empty product is the 1x1 identity.
    pub fn kron_all<'a>(factors: impl IntoIterator<Item = &'a ComplexMatrix>) -> Self {
        factors
            .into_iter()
            .fold(Self::identity(1), |acc, f| acc.kron(f))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn trace(&self) -> ComplexNumber {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn diagonal(&self) -> Vec<ComplexNumber> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn is_upper_triangular(&self) -> bool {
        (0..self.rows).all(|i| (0..i.min(self.cols)).all(|j| self[(i, j)] == c(0.0, 0.0)))
    }

    /// True when every imaginary part is below `tol` in magnitude.
    pub fn is_real(&self, tol: f64) -> bool {
        self.data.iter().all(|z| z.im.abs() < tol)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Frobenius distance `‖self − rhs‖`.
    pub fn distance(&self, rhs: &Self) -> f64 {
        assert_eq!(self.shape(), rhs.shape(), "distance shape mismatch");
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `self · x` for a full square matrix whose columns are unknown: solves
    /// `self · X = rhs` by LU with partial pivoting.
    pub fn solve(&self, rhs: &Self) -> Result<Self> {
        let lu = Lu::factor(self)?;
        lu.solve(rhs)
    }

    pub fn inverse(&self) -> Result<Self> {
        let n = self.require_square()?;
        self.solve(&Self::identity(n))
    }

    pub fn determinant(&self) -> Result<ComplexNumber> {
        self.require_square()?;
        Ok(Lu::factor(self).map_or(c(0.0, 0.0), |lu| lu.determinant()))
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows.start + i, cols.start + j)])
    }

    pub fn set_block(&mut self, row: usize, col: usize, block: &Self) {
        for i in 0..block.rows {
            for j in 0..block.cols {
                self[(row + i, col + j)] = block[(i, j)];
            }
        }
    }

    /// Block-diagonal assembly.
    pub fn block_diag(blocks: &[&Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut r, mut cc) = (0, 0);
        for b in blocks {
            out.set_block(r, cc, b);
            r += b.rows;
            cc += b.cols;
        }
        out
    }

    /// Rank via Gaussian elimination at the module-wide threshold.
    pub fn rank(&self) -> usize {
        super::gauss::rank(self)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexNumber;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexNumber {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexNumber {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:>10.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// LU factorization with partial pivoting, `P·A = L·U`.
pub(crate) struct Lu {
    n: usize,
    lu: Vec<ComplexNumber>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub(crate) fn factor(a: &ComplexMatrix) -> Result<Self> {
        let n = a.require_square()?;
        let mut lu = a.data.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        let scale = a.max_abs().max(f64::MIN_POSITIVE);
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[i * n + k].norm()))
                .fold((k, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
            if pmax <= scale * f64::EPSILON * n as f64 {
                return Err(Error::SpectralPoint {
                    z: c(0.0, 0.0),
                    distance: pmax,
                });
            }
            if p != k {
                for j in 0..n {
                    lu.swap(k * n + j, p * n + j);
                }
                perm.swap(k, p);
                sign = -sign;
            }
            let pivot = lu[k * n + k];
            for i in k + 1..n {
                let factor = lu[i * n + k] / pivot;
                lu[i * n + k] = factor;
                if factor.re != 0.0 || factor.im != 0.0 {
                    for j in k + 1..n {
                        let u = lu[k * n + j];
                        lu[i * n + j] -= factor * u;
                    }
                }
            }
        }
        Ok(Self { n, lu, perm, sign })
    }

    pub(crate) fn solve(&self, rhs: &ComplexMatrix) -> Result<ComplexMatrix> {
        let n = self.n;
        if rhs.rows != n {
            return Err(Error::DimensionMismatch(format!(
                "right-hand side has {} rows, expected {n}",
                rhs.rows
            )));
        }
        let m = rhs.cols;
        let mut x = ComplexMatrix::from_fn(n, m, |i, j| rhs[(self.perm[i], j)]);
        for j in 0..m {
            for i in 0..n {
                let mut s = x[(i, j)];
                for k in 0..i {
                    s -= self.lu[i * n + k] * x[(k, j)];
                }
                x[(i, j)] = s;
            }
            for i in (0..n).rev() {
                let mut s = x[(i, j)];
                for k in i + 1..n {
                    s -= self.lu[i * n + k] * x[(k, j)];
                }
                x[(i, j)] = s / self.lu[i * n + i];
            }
        }
        Ok(x)
    }

    pub(crate) fn determinant(&self) -> ComplexNumber {
        (0..self.n).fold(c(self.sign, 0.0), |acc, i| acc * self.lu[i * self.n + i])
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    rows: usize,
    cols: usize,
    entries: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixRepr {
            rows: self.rows,
            cols: self.cols,
            entries: self.data.iter().map(|z| [z.re, z.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = MatrixRepr::deserialize(d)?;
        ComplexMatrix::new(
            repr.rows,
            repr.cols,
            repr.entries.into_iter().map(|[re, im]| c(re, im)).collect(),
        )
        .map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_shapes() {
        assert!(matches!(
            ComplexMatrix::new(0, 0, vec![]),
            Err(Error::EmptyMatrix { .. })
        ));
        assert!(ComplexMatrix::new(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(matches!(
            ComplexMatrix::new(1, 2, vec![c(1.0, 0.0), c(f64::NAN, 0.0)]),
            Err(Error::NonFinite { row: 0, col: 1 })
        ));
    }

    #[test]
    fn kron_is_slot_major() {
        let a = ComplexMatrix::from_real(&[&[1.0, 2.0]]);
        let b = ComplexMatrix::from_real(&[&[1.0], &[10.0]]);
        let k = a.kron(&b);
        assert_eq!(k.shape(), (2, 2));
        assert_eq!(k, ComplexMatrix::from_real(&[&[1.0, 2.0], &[10.0, 20.0]]));
    }

    #[test]
    fn inverse_and_determinant() {
        let m = ComplexMatrix::from_real(&[&[4.0, 7.0], &[2.0, 6.0]]);
        let inv = m.inverse().unwrap();
        assert!(m.mul(&inv).distance(&ComplexMatrix::identity(2)) < 1e-14);
        assert!((m.determinant().unwrap() - c(10.0, 0.0)).norm() < 1e-12);
        let singular = ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]]);
        assert!(singular.inverse().is_err());
        assert_eq!(singular.determinant().unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn json_shape() {
        let m = ComplexMatrix::from_rows(vec![vec![c(1.0, -2.0), c(0.5, 0.0)]]).unwrap();
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, r#"{"rows":1,"cols":2,"entries":[[1.0,-2.0],[0.5,0.0]]}"#);
        let back: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert!(serde_json::from_str::<ComplexMatrix>(r#"{"rows":0,"cols":0,"entries":[]}"#).is_err());
    }
}
