use crate::error::{Error, Result};
use crate::linalg::vector::Vector;
use crate::linalg::LinearSystem;

/// Pivot rejection threshold relative to the row scale.
const PIVOT_REL_TOL: f64 = 1e-14;

/// Gaussian elimination with scaled partial pivoting.
///
/// This is the reference route for the exact solution: it shares no code
/// with the iterative solver and is used by tests and diagnostics only,
/// never inside the iteration loop. Sparse operators are densified first.
pub fn direct_solve(system: &LinearSystem) -> Result<Vector> {
    let dense = system.operator().to_dense();
    let n = dense.n();
    let mut a = dense.as_slice().to_vec();
    let mut x: Vec<f64> = system.rhs().as_slice().to_vec();

    // row scales from the original matrix drive the pivot choice
    let mut scale = vec![0.0_f64; n];
    for i in 0..n {
        let s = a[i * n..(i + 1) * n]
            .iter()
            .fold(0.0_f64, |m, v| m.max(v.abs()));
        if s == 0.0 {
            return Err(Error::SingularMatrix { column: i });
        }
        scale[i] = s;
    }

    for k in 0..n {
        let pivot_row = (k..n)
            .max_by(|&p, &q| {
                let rp = a[p * n + k].abs() / scale[p];
                let rq = a[q * n + k].abs() / scale[q];
                rp.total_cmp(&rq)
            })
            .expect("non-empty pivot candidates");
        if a[pivot_row * n + k].abs() < PIVOT_REL_TOL * scale[pivot_row] {
            return Err(Error::SingularMatrix { column: k });
        }
        if pivot_row != k {
            for j in 0..n {
                a.swap(k * n + j, pivot_row * n + j);
            }
            x.swap(k, pivot_row);
            scale.swap(k, pivot_row);
        }
        let pivot = a[k * n + k];
        for i in (k + 1)..n {
            let factor = a[i * n + k] / pivot;
            if factor == 0.0 {
                continue;
            }
            for j in k..n {
                a[i * n + j] -= factor * a[k * n + j];
            }
            x[i] -= factor * x[k];
        }
    }

    for k in (0..n).rev() {
        let mut acc = x[k];
        for j in (k + 1)..n {
            acc -= a[k * n + j] * x[j];
        }
        x[k] = acc / a[k * n + k];
    }

    Vector::new(x).map_err(|_| Error::NonFinite("direct solve solution"))
}
