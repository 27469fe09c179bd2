use crate::error::{Error, Result};
use crate::linalg::vector::Vector;
use crate::linalg::SYMMETRY_REL_TOL;

/// Square matrix stored row-major.
///
/// Construction checks shape and finiteness only; symmetry is a measured
/// property queried through [`DenseMatrix::is_symmetric`] so that
/// deliberately asymmetric inputs remain representable for negative
/// controls.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    n: usize,
    entries: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(n: usize, entries: Vec<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if entries.len() != n * n {
            return Err(Error::Dimension {
                context: "dense matrix entries",
                expected: n * n,
                actual: entries.len(),
            });
        }
        if !entries.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("dense matrix entry"));
        }
        Ok(DenseMatrix { n, entries })
    }

    /// Builds from nested rows; rows must all have the outer length.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Dimension {
                    context: "dense matrix row",
                    expected: n,
                    actual: row.len(),
                });
            }
            entries.extend_from_slice(row);
        }
        Self::new(n, entries)
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut entries = vec![0.0; n * n];
        for i in 0..n {
            entries[i * n + i] = 1.0;
        }
        Self::new(n, entries)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.entries[i * self.n + j]
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.entries
    }

    /// Row-by-row product `A * v`, each row accumulated left to right.
    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                context: "dense matvec",
                expected: self.n,
                actual: v.len(),
            });
        }
        let x = v.as_slice();
        let out = (0..self.n)
            .map(|i| {
                let row = &self.entries[i * self.n..(i + 1) * self.n];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect();
        Vector::new(out)
    }

    /// Symmetry within measurement tolerance: for every off-diagonal pair,
    /// `|a_ij - a_ji| <= tol * max(1, min(|a_ij|, |a_ji|))`.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                let a = self.get(i, j);
                let b = self.get(j, i);
                let scale = f64::max(1.0, f64::min(a.abs(), b.abs()));
                if (a - b).abs() > SYMMETRY_REL_TOL * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.entries.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matvec_identity() {
        let a = DenseMatrix::identity(2).unwrap();
        let v = Vector::from_slice(&[3.0, -4.0]).unwrap();
        assert_eq!(a.matvec(&v).unwrap().as_slice(), &[3.0, -4.0]);
    }

    #[test]
    fn matvec_diagonal_scaling() {
        let a = DenseMatrix::from_rows(&[vec![2.0, 0.0], vec![0.0, 3.0]]).unwrap();
        let v = Vector::from_slice(&[1.0, 1.0]).unwrap();
        assert_eq!(a.matvec(&v).unwrap().as_slice(), &[2.0, 3.0]);
    }

    #[test]
    fn matvec_hand_checked() {
        // [[4,1],[1,3]] * (1,2) = (6,7)
        let a = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        let v = Vector::from_slice(&[1.0, 2.0]).unwrap();
        assert_eq!(a.matvec(&v).unwrap().as_slice(), &[6.0, 7.0]);
    }

    #[test]
    fn matvec_dimension_mismatch() {
        let a = DenseMatrix::identity(2).unwrap();
        let v = Vector::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        assert!(matches!(a.matvec(&v), Err(Error::Dimension { .. })));
    }

    #[test]
    fn symmetry_checks() {
        assert!(DenseMatrix::identity(3).unwrap().is_symmetric());
        let asym = DenseMatrix::from_rows(&[vec![1.0, 2.0], vec![3.0, 4.0]]).unwrap();
        assert!(!asym.is_symmetric());
        let sym = DenseMatrix::from_rows(&[vec![4.0, 1.0], vec![1.0, 3.0]]).unwrap();
        assert!(sym.is_symmetric());
    }

    #[test]
    fn symmetry_tolerance_edge() {
        // Perturbation below the relative tolerance still counts as symmetric.
        let near = DenseMatrix::from_rows(&[vec![1.0, 5.0], vec![5.0 + 4e-12, 1.0]]).unwrap();
        assert!(near.is_symmetric());
        let off = DenseMatrix::from_rows(&[vec![1.0, 5.0], vec![5.0 + 6e-12, 1.0]]).unwrap();
        assert!(!off.is_symmetric());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(DenseMatrix::new(2, vec![1.0, 2.0, 3.0]).is_err());
        assert!(DenseMatrix::new(0, vec![]).is_err());
        assert!(DenseMatrix::new(1, vec![f64::NAN]).is_err());
    }
}
