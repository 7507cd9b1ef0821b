use super::{c, ComplexMatrix, ComplexNumber};

/// Relative pivot threshold shared by every rank computation in the crate.
pub const RANK_THRESHOLD: f64 = 1e-10;

/// Zeroes the entries of `m` at or below `RANK_THRESHOLD · max(1, scale)`.
/// Meant for relations formed as differences of maps of size `scale`, so
/// that rounding in terms which should cancel is not counted as rank.
pub fn denoise(m: &ComplexMatrix, scale: f64) -> ComplexMatrix {
    let floor = RANK_THRESHOLD * scale.max(1.0);
    m.map(|z| if z.norm() <= floor { c(0.0, 0.0) } else { z })
}

/// Reduced row echelon form with the pivot columns it found.
#[derive(Clone, Debug)]
pub struct Rref {
    pub matrix: ComplexMatrix,
    pub pivots: Vec<usize>,
}

/// Gauss-Jordan elimination with partial pivoting. A candidate pivot is
/// treated as zero when it is at most `RANK_THRESHOLD` times the largest
/// entry of the input.
pub fn rref(m: &ComplexMatrix) -> Rref {
    let (rows, cols) = m.shape();
    let mut a = m.clone();
    let cutoff = RANK_THRESHOLD * m.max_abs();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        if row == rows {
            break;
        }
        let (p, pmax) = (row..rows)
            .map(|i| (i, a[(i, col)].norm()))
            .fold((row, -1.0), |best, cur| if cur.1 > best.1 { cur } else { best });
        if pmax <= cutoff || pmax == 0.0 {
            for i in row..rows {
                a[(i, col)] = c(0.0, 0.0);
            }
            continue;
        }
        if p != row {
            for j in 0..cols {
                let tmp = a[(row, j)];
                a[(row, j)] = a[(p, j)];
                a[(p, j)] = tmp;
            }
        }
        let inv = a[(row, col)].inv();
        for j in 0..cols {
            a[(row, j)] *= inv;
        }
        a[(row, col)] = c(1.0, 0.0);
        for i in 0..rows {
            if i == row {
                continue;
            }
            let f = a[(i, col)];
            if f.re == 0.0 && f.im == 0.0 {
                continue;
            }
            for j in 0..cols {
                let v = a[(row, j)];
                a[(i, j)] -= f * v;
            }
            a[(i, col)] = c(0.0, 0.0);
        }
        pivots.push(col);
        row += 1;
    }
    Rref { matrix: a, pivots }
}

pub fn rank(m: &ComplexMatrix) -> usize {
    if m.is_empty() {
        return 0;
    }
    rref(m).pivots.len()
}

/// Basis of the right nullspace, one column per free variable.
pub fn nullspace(m: &ComplexMatrix) -> ComplexMatrix {
    let cols = m.cols();
    if m.rows() == 0 {
        return ComplexMatrix::identity(cols);
    }
    let Rref { matrix, pivots } = rref(m);
    let free: Vec<usize> = (0..cols).filter(|j| !pivots.contains(j)).collect();
    let mut basis = ComplexMatrix::zeros(cols, free.len());
    for (k, &f) in free.iter().enumerate() {
        basis[(f, k)] = c(1.0, 0.0);
        for (i, &p) in pivots.iter().enumerate() {
            basis[(p, k)] = -matrix[(i, f)];
        }
    }
    basis
}

/// Quotient of an ambient space by the span of some generator vectors.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub ambient_dimension: usize,
    /// Rank of the generator span.
    pub relation_rank: usize,
    pub dimension: usize,
    /// `dimension x ambient`, full row rank, kills every generator.
    pub projection: ComplexMatrix,
    /// `ambient x dimension` right inverse of the projection.
    pub section: ComplexMatrix,
}

/// Builds the quotient `ambient / span(generators)`, where the generators are
/// the columns of `generators`.
///
/// The projection reads off the free coordinates of the generator row space:
/// writing the transposed generators in reduced echelon form, a vector `v` is
/// sent to `v_f − Σ_i rref[i][f]·v_{p_i}` for each free column `f`.
pub fn quotient(ambient: usize, generators: &ComplexMatrix) -> Quotient {
    assert!(
        generators.is_empty() || generators.rows() == ambient,
        "generator length {} does not match ambient dimension {ambient}",
        generators.rows()
    );
    if generators.cols() == 0 || ambient == 0 {
        return Quotient {
            ambient_dimension: ambient,
            relation_rank: 0,
            dimension: ambient,
            projection: ComplexMatrix::identity(ambient),
            section: ComplexMatrix::identity(ambient),
        };
    }
    let Rref { matrix, pivots } = rref(&generators.transpose());
    let free: Vec<usize> = (0..ambient).filter(|j| !pivots.contains(j)).collect();
    let mut projection = ComplexMatrix::zeros(free.len(), ambient);
    let mut section = ComplexMatrix::zeros(ambient, free.len());
    for (k, &f) in free.iter().enumerate() {
        projection[(k, f)] = c(1.0, 0.0);
        section[(f, k)] = c(1.0, 0.0);
        for (i, &p) in pivots.iter().enumerate() {
            projection[(k, p)] = -matrix[(i, f)];
        }
    }
    Quotient {
        ambient_dimension: ambient,
        relation_rank: pivots.len(),
        dimension: free.len(),
        projection,
        section,
    }
}

/// Largest column norm of `m · generators`; used to certify that a
/// projection kills its relations.
pub(crate) fn annihilation_residual(m: &ComplexMatrix, generators: &ComplexMatrix) -> f64 {
    if m.is_empty() || generators.is_empty() {
        return 0.0;
    }
    let prod = m.mul(generators);
    (0..prod.cols())
        .map(|j| {
            prod.column(j)
                .iter()
                .map(ComplexNumber::norm_sqr)
                .sum::<f64>()
                .sqrt()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_known_matrices() {
        assert_eq!(rank(&ComplexMatrix::identity(3)), 3);
        assert_eq!(rank(&ComplexMatrix::from_real(&[&[1.0, 2.0], &[2.0, 4.0]])), 1);
        assert_eq!(rank(&ComplexMatrix::zeros(2, 3)), 0);
        let pi = ComplexMatrix::from_real(&[&[1.0, 1.0, 0.0, 0.0], &[0.0, 0.0, 1.0, 1.0]]);
        assert_eq!(rank(&pi), 2);
    }

    #[test]
    fn nullspace_is_annihilated() {
        let m = ComplexMatrix::from_real(&[&[1.0, 2.0, 3.0], &[2.0, 4.0, 6.0]]);
        let n = nullspace(&m);
        assert_eq!(n.cols(), 2);
        assert!(m.mul(&n).max_abs() < 1e-14);
        assert_eq!(rank(&n), 2);
    }

    #[test]
    fn quotient_kills_generators() {
        let g = ComplexMatrix::from_real(&[&[1.0], &[-1.0], &[0.0]]);
        let q = quotient(3, &g);
        assert_eq!(q.dimension, 2);
        assert!(annihilation_residual(&q.projection, &g) < 1e-14);
        assert_eq!(rank(&q.projection), 2);
        let ps = q.projection.mul(&q.section);
        assert!(ps.distance(&ComplexMatrix::identity(2)) < 1e-14);
    }

    #[test]
    fn quotient_by_nothing() {
        let q = quotient(3, &ComplexMatrix::zeros(3, 0));
        assert_eq!(q.dimension, 3);
        let q = quotient(2, &ComplexMatrix::zeros(2, 2));
        assert_eq!(q.dimension, 2);
        assert_eq!(q.relation_rank, 0);
    }
}
