//! Dense and sparse linear-algebra kernels used by the solver.
//!
//! All reductions run in a fixed sequential order so that repeated runs on
//! the same inputs produce identical floating-point results. Operations are
//! pure functions over immutable values; internal parallelism is
//! deliberately absent.

mod dense;
mod direct;
mod generate;
mod sparse;
mod vector;

pub use dense::DenseMatrix;
pub use direct::direct_solve;
pub use generate::{generate_laplacian_1d, generate_random_spd, Lcg64};
pub use sparse::SparseMatrixCsr;
pub use vector::{axpy, dot, Vector};

use crate::error::{Error, Result};

/// Relative tolerance for the symmetry measurement:
/// `|a_ij - a_ji| <= SYMMETRY_REL_TOL * max(1, min(|a_ij|, |a_ji|))`.
pub const SYMMETRY_REL_TOL: f64 = 1e-12;

/// A square operator in either dense or compressed sparse row storage.
#[derive(Debug, Clone, PartialEq)]
pub enum Operator {
    Dense(DenseMatrix),
    Sparse(SparseMatrixCsr),
}

impl Operator {
    pub fn n(&self) -> usize {
        match self {
            Operator::Dense(a) => a.n(),
            Operator::Sparse(a) => a.n(),
        }
    }

    pub fn matvec(&self, v: &Vector) -> Result<Vector> {
        match self {
            Operator::Dense(a) => a.matvec(v),
            Operator::Sparse(a) => a.matvec(v),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        match self {
            Operator::Dense(a) => a.is_symmetric(),
            Operator::Sparse(a) => a.is_symmetric(),
        }
    }

    pub fn to_dense(&self) -> DenseMatrix {
        match self {
            Operator::Dense(a) => a.clone(),
            Operator::Sparse(a) => a.to_dense(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        match self {
            Operator::Dense(a) => a.frobenius_norm(),
            Operator::Sparse(a) => a.frobenius_norm(),
        }
    }
}

impl From<DenseMatrix> for Operator {
    fn from(a: DenseMatrix) -> Self {
        Operator::Dense(a)
    }
}

impl From<SparseMatrixCsr> for Operator {
    fn from(a: SparseMatrixCsr) -> Self {
        Operator::Sparse(a)
    }
}

/// `A * v` for either storage backend.
pub fn matvec(a: &Operator, v: &Vector) -> Result<Vector> {
    a.matvec(v)
}

/// True iff the operator is symmetric within [`SYMMETRY_REL_TOL`].
pub fn check_symmetry(a: &Operator) -> bool {
    a.is_symmetric()
}

/// An operator paired with a dimensionally consistent right-hand side.
#[derive(Debug, Clone)]
pub struct LinearSystem {
    operator: Operator,
    rhs: Vector,
}

impl LinearSystem {
    pub fn new(operator: Operator, rhs: Vector) -> Result<Self> {
        if operator.n() != rhs.len() {
            return Err(Error::Dimension {
                context: "linear system",
                expected: operator.n(),
                actual: rhs.len(),
            });
        }
        Ok(LinearSystem { operator, rhs })
    }

    pub fn n(&self) -> usize {
        self.rhs.len()
    }

    pub fn operator(&self) -> &Operator {
        &self.operator
    }

    pub fn rhs(&self) -> &Vector {
        &self.rhs
    }
}
