use nalgebra::DMatrix;

use crate::error::{Error, Result};

/// Dense symmetric matrix. Storage is kept exactly symmetric.
#[derive(Debug, Clone, PartialEq)]
pub struct SymmetricDense {
    m: DMatrix<f64>,
}

impl SymmetricDense {
    /// Wraps a square matrix, replacing it by its symmetric part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::Dimension(format!(
                "matrix is {}x{}, expected square",
                m.nrows(),
                m.ncols()
            )));
        }
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("matrix has non-finite entries".into()));
        }
        let mut m = m;
        symmetrize(&mut m);
        Ok(SymmetricDense { m })
    }

    pub fn from_row_major(n: usize, data: &[f64]) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!(
                "{} entries for a {n}x{n} matrix",
                data.len()
            )));
        }
        Self::new(DMatrix::from_row_slice(n, n, data))
    }

    pub fn from_diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        Self::new(DMatrix::from_fn(
            n,
            n,
            |i, j| if i == j { d[i] } else { 0.0 },
        ))
    }

    pub fn zeros(n: usize) -> Self {
        SymmetricDense {
            m: DMatrix::zeros(n, n),
        }
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.m[(i, j)]
    }

    pub fn as_matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }
}

pub(crate) fn symmetrize(m: &mut DMatrix<f64>) {
    let n = m.nrows();
    for j in 0..n {
        for i in (j + 1)..n {
            let v = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_part_is_taken() {
        let a = SymmetricDense::from_row_major(2, &[1.0, 2.0, 4.0, 3.0]).unwrap();
        assert_eq!(a.get(0, 1), 3.0);
        assert_eq!(a.get(1, 0), 3.0);
        assert_eq!(a.get(1, 1), 3.0);
    }

    #[test]
    fn rejects_bad_shapes_and_values() {
        assert!(SymmetricDense::new(DMatrix::zeros(2, 3)).is_err());
        assert!(SymmetricDense::from_row_major(2, &[1.0; 3]).is_err());
        assert!(SymmetricDense::from_row_major(1, &[f64::NAN]).is_err());
    }
}
