use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::vector::Vector;
use crate::linalg::SYMMETRY_REL_TOL;

/// Square sparse matrix in compressed sparse row form.
///
/// `row_offsets` has length `n + 1` with `row_offsets[i]..row_offsets[i+1]`
/// indexing the stored entries of row `i`; column indices strictly increase
/// within a row.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrixCsr {
    n: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<f64>,
}

impl SparseMatrixCsr {
    pub fn new(
        n: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<f64>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "matrix dimension must be at least 1".into(),
            ));
        }
        if row_offsets.len() != n + 1 {
            return Err(Error::Dimension {
                context: "csr row offsets",
                expected: n + 1,
                actual: row_offsets.len(),
            });
        }
        if row_offsets[0] != 0 || row_offsets[n] != values.len() {
            return Err(Error::InvalidArgument(
                "csr row offsets must start at 0 and end at the nonzero count".into(),
            ));
        }
        if col_indices.len() != values.len() {
            return Err(Error::Dimension {
                context: "csr column indices",
                expected: values.len(),
                actual: col_indices.len(),
            });
        }
        if (0..n).any(|i| row_offsets[i] > row_offsets[i + 1]) {
            return Err(Error::InvalidArgument(
                "csr row offsets must be non-decreasing".into(),
            ));
        }
        for i in 0..n {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            for k in lo..hi {
                if col_indices[k] >= n {
                    return Err(Error::InvalidArgument(format!(
                        "csr column index {} out of bounds for dimension {}",
                        col_indices[k], n
                    )));
                }
                if k > lo && col_indices[k] <= col_indices[k - 1] {
                    return Err(Error::InvalidArgument(
                        "csr column indices must strictly increase within a row".into(),
                    ));
                }
            }
        }
        if !values.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("csr value"));
        }
        Ok(SparseMatrixCsr {
            n,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Converts from dense storage, keeping exactly the nonzero entries.
    pub fn from_dense(a: &DenseMatrix) -> Self {
        let n = a.n();
        let mut row_offsets = Vec::with_capacity(n + 1);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        row_offsets.push(0);
        for i in 0..n {
            for j in 0..n {
                let v = a.get(i, j);
                if v != 0.0 {
                    col_indices.push(j);
                    values.push(v);
                }
            }
            row_offsets.push(values.len());
        }
        SparseMatrixCsr {
            n,
            row_offsets,
            col_indices,
            values,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Stored value at `(i, j)`, or 0 when the entry is not stored.
    pub fn get(&self, i: usize, j: usize) -> f64 {
        let row = &self.col_indices[self.row_offsets[i]..self.row_offsets[i + 1]];
        match row.binary_search(&j) {
            Ok(k) => self.values[self.row_offsets[i] + k],
            Err(_) => 0.0,
        }
    }

    /// Row-by-row product over stored entries in ascending column order.
    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        if v.len() != self.n {
            return Err(Error::Dimension {
                context: "csr matvec",
                expected: self.n,
                actual: v.len(),
            });
        }
        let x = v.as_slice();
        let out = (0..self.n)
            .map(|i| {
                let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
                (lo..hi)
                    .map(|k| self.values[k] * x[self.col_indices[k]])
                    .sum()
            })
            .collect();
        Vector::new(out)
    }

    /// Numerical symmetry against the mirrored entry (missing entries read
    /// as zero), with the same tolerance as the dense check.
    pub fn is_symmetric(&self) -> bool {
        for i in 0..self.n {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                let j = self.col_indices[k];
                if j == i {
                    continue;
                }
                let a = self.values[k];
                let b = self.get(j, i);
                let scale = f64::max(1.0, f64::min(a.abs(), b.abs()));
                if (a - b).abs() > SYMMETRY_REL_TOL * scale {
                    return false;
                }
            }
        }
        true
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut entries = vec![0.0; self.n * self.n];
        for i in 0..self.n {
            for k in self.row_offsets[i]..self.row_offsets[i + 1] {
                entries[i * self.n + self.col_indices[k]] = self.values[k];
            }
        }
        DenseMatrix::new(self.n, entries).expect("csr invariants imply a valid dense matrix")
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.values.iter().map(|x| x * x).sum::<f64>().sqrt()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tridiag() -> SparseMatrixCsr {
        // [[2,-1,0],[-1,2,-1],[0,-1,2]]
        SparseMatrixCsr::new(
            3,
            vec![0, 2, 5, 7],
            vec![0, 1, 0, 1, 2, 1, 2],
            vec![2.0, -1.0, -1.0, 2.0, -1.0, -1.0, 2.0],
        )
        .unwrap()
    }

    #[test]
    fn structural_validation() {
        // offsets wrong length, wrong terminal value, decreasing
        assert!(SparseMatrixCsr::new(2, vec![0, 1], vec![0], vec![1.0]).is_err());
        assert!(SparseMatrixCsr::new(2, vec![0, 1, 3], vec![0], vec![1.0]).is_err());
        assert!(
            SparseMatrixCsr::new(3, vec![0, 2, 1, 2], vec![0, 1], vec![1.0, 1.0]).is_err()
        );
        // column out of bounds
        assert!(SparseMatrixCsr::new(2, vec![0, 1, 2], vec![0, 2], vec![1.0, 1.0]).is_err());
        // duplicate / unsorted columns within a row
        assert!(SparseMatrixCsr::new(2, vec![0, 2, 2], vec![1, 0], vec![1.0, 1.0]).is_err());
        assert!(SparseMatrixCsr::new(2, vec![0, 2, 2], vec![0, 0], vec![1.0, 1.0]).is_err());
        // empty row in the middle is fine
        assert!(SparseMatrixCsr::new(2, vec![0, 1, 1], vec![0], vec![1.0]).is_ok());
    }

    #[test]
    fn matvec_matches_dense() {
        let a = tridiag();
        let v = Vector::from_slice(&[1.0, 2.0, 3.0]).unwrap();
        let got = a.matvec(&v).unwrap();
        let want = a.to_dense().matvec(&v).unwrap();
        assert_eq!(got.as_slice(), want.as_slice());
    }

    #[test]
    fn get_and_symmetry() {
        let a = tridiag();
        assert_eq!(a.get(0, 1), -1.0);
        assert_eq!(a.get(0, 2), 0.0);
        assert!(a.is_symmetric());

        // pattern-asymmetric: (0,1) stored, (1,0) missing
        let b = SparseMatrixCsr::new(2, vec![0, 2, 3], vec![0, 1, 1], vec![2.0, 1.0, 2.0]).unwrap();
        assert!(!b.is_symmetric());
    }
}
