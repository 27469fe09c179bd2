use crate::error::{Error, Result};

/// Column vector of finite double-precision scalars, length at least 1.
///
/// Immutable after construction; all arithmetic produces new vectors so
/// values can be shared freely across threads.
#[derive(Debug, Clone, PartialEq)]
pub struct Vector(Vec<f64>);

impl Vector {
    /// Validates that `entries` is non-empty and every entry is finite.
    pub fn new(entries: Vec<f64>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument(
                "vector must have at least one entry".into(),
            ));
        }
        if !entries.iter().all(|x| x.is_finite()) {
            return Err(Error::NonFinite("vector entry"));
        }
        Ok(Vector(entries))
    }

    pub fn from_slice(entries: &[f64]) -> Result<Self> {
        Self::new(entries.to_vec())
    }

    pub fn zeros(n: usize) -> Result<Self> {
        Self::new(vec![0.0; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false // length >= 1 by construction
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    /// Euclidean norm, accumulated in index order.
    pub fn norm(&self) -> f64 {
        self.norm_squared().sqrt()
    }

    pub fn norm_squared(&self) -> f64 {
        self.0.iter().map(|x| x * x).sum()
    }
}

impl std::ops::Index<usize> for Vector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl<'a> IntoIterator for &'a Vector {
    type Item = &'a f64;
    type IntoIter = std::slice::Iter<'a, f64>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter()
    }
}

/// Inner product accumulated left to right over the index.
///
/// Both arguments run through the same loop, so `dot(u, v)` and `dot(v, u)`
/// perform the same additions and agree bitwise.
pub fn dot(u: &Vector, v: &Vector) -> Result<f64> {
    if u.len() != v.len() {
        return Err(Error::Dimension {
            context: "dot",
            expected: u.len(),
            actual: v.len(),
        });
    }
    Ok(u.iter().zip(v.iter()).map(|(a, b)| a * b).sum())
}

/// Returns `a * x + y` as a new vector.
pub fn axpy(a: f64, x: &Vector, y: &Vector) -> Result<Vector> {
    if x.len() != y.len() {
        return Err(Error::Dimension {
            context: "axpy",
            expected: x.len(),
            actual: y.len(),
        });
    }
    Vector::new(
        x.iter()
            .zip(y.iter())
            .map(|(xi, yi)| a * xi + yi)
            .collect(),
    )
}
