use crate::error::{Error, Result};
use crate::linalg::dense::DenseMatrix;
use crate::linalg::sparse::SparseMatrixCsr;

/// 64-bit linear congruential generator with Knuth's MMIX constants:
///
/// ```text
/// state' = state * 6364136223846793005 + 1442695040888963407   (mod 2^64)
/// ```
///
/// Uniform doubles take the top 53 bits of the advanced state, so every
/// draw depends only on the seed and the draw order. This keeps generated
/// test problems bitwise reproducible across runs and easy to re-derive in
/// other languages.
#[derive(Debug, Clone)]
pub struct Lcg64 {
    state: u64,
}

impl Lcg64 {
    const MULTIPLIER: u64 = 6364136223846793005;
    const INCREMENT: u64 = 1442695040888963407;

    pub fn new(seed: u64) -> Self {
        Lcg64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self
            .state
            .wrapping_mul(Self::MULTIPLIER)
            .wrapping_add(Self::INCREMENT);
        self.state
    }

    /// Uniform in `[0, 1)`.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }

    /// Uniform in `[-1, 1)`.
    pub fn next_symmetric(&mut self) -> f64 {
        2.0 * self.next_f64() - 1.0
    }
}

/// Tridiagonal matrix with 2 on the diagonal and -1 on the off-diagonals;
/// symmetric positive-definite for every `n >= 2`.
pub fn generate_laplacian_1d(n: usize) -> Result<SparseMatrixCsr> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "1-d laplacian needs n >= 2, got {n}"
        )));
    }
    let mut row_offsets = Vec::with_capacity(n + 1);
    let mut col_indices = Vec::with_capacity(3 * n - 2);
    let mut values = Vec::with_capacity(3 * n - 2);
    row_offsets.push(0);
    for i in 0..n {
        if i > 0 {
            col_indices.push(i - 1);
            values.push(-1.0);
        }
        col_indices.push(i);
        values.push(2.0);
        if i + 1 < n {
            col_indices.push(i + 1);
            values.push(-1.0);
        }
        row_offsets.push(values.len());
    }
    SparseMatrixCsr::new(n, row_offsets, col_indices, values)
}

/// Random symmetric positive-definite matrix `Q diag(lambda) Q^T`.
///
/// Eigenvalues are log-uniformly spaced in `[1, cond_target]` and `Q` comes
/// from modified Gram-Schmidt on a seeded random matrix. Only the lower
/// triangle is computed and then mirrored, so the result is exactly
/// symmetric and identical inputs give bitwise-identical output.
pub fn generate_random_spd(n: usize, seed: u64, cond_target: f64) -> Result<DenseMatrix> {
    if n == 0 {
        return Err(Error::InvalidArgument(
            "matrix dimension must be at least 1".into(),
        ));
    }
    if !cond_target.is_finite() || cond_target < 1.0 {
        return Err(Error::InvalidArgument(format!(
            "condition target must be a finite number >= 1, got {cond_target}"
        )));
    }

    let eigenvalues: Vec<f64> = if n == 1 {
        vec![1.0]
    } else {
        (0..n)
            .map(|k| cond_target.powf(k as f64 / (n - 1) as f64))
            .collect()
    };

    let mut rng = Lcg64::new(seed);
    let q = orthonormal_columns(n, &mut rng);

    // a[i][j] = sum_k q[i][k] * lambda[k] * q[j][k], lower triangle mirrored
    let mut entries = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut acc = 0.0;
            for (k, lambda) in eigenvalues.iter().enumerate() {
                acc += q[i * n + k] * lambda * q[j * n + k];
            }
            entries[i * n + j] = acc;
            entries[j * n + i] = acc;
        }
    }
    DenseMatrix::new(n, entries)
}

/// Modified Gram-Schmidt over random columns; redraws a column when it is
/// numerically dependent on the ones already accepted.
fn orthonormal_columns(n: usize, rng: &mut Lcg64) -> Vec<f64> {
    let mut q = vec![0.0; n * n]; // row-major, columns are the basis
    let mut col = 0;
    while col < n {
        let mut v: Vec<f64> = (0..n).map(|_| rng.next_symmetric()).collect();
        for k in 0..col {
            let proj: f64 = (0..n).map(|i| q[i * n + k] * v[i]).sum();
            for i in 0..n {
                v[i] -= proj * q[i * n + k];
            }
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue; // dependent draw, try the next one
        }
        for i in 0..n {
            q[i * n + col] = v[i] / norm;
        }
        col += 1;
    }
    q
}
