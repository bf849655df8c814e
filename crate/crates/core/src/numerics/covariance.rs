use nalgebra::DMatrix;

use crate::{Error, Result, C64};

/// Square complex matrix kept exactly Hermitian.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    data: DMatrix<C64>,
}

impl HermitianMatrix {
    /// Replaces `a` by its Hermitian part `(a + a^H) / 2`.
    pub fn new(a: DMatrix<C64>) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::DimensionMismatch {
                expected: a.nrows(),
                found: a.ncols(),
            });
        }
        if a.nrows() == 0 {
            return Err(Error::EmptyInput("hermitian matrix"));
        }
        if a.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite("hermitian matrix"));
        }
        let data = (&a + a.adjoint()) * C64::new(0.5, 0.0);
        Ok(Self { data })
    }

    pub fn order(&self) -> usize {
        self.data.nrows()
    }

    pub fn as_matrix(&self) -> &DMatrix<C64> {
        &self.data
    }

    pub fn into_matrix(self) -> DMatrix<C64> {
        self.data
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn trace(&self) -> f64 {
        self.data.diagonal().iter().map(|z| z.re).sum()
    }
}

/// `(1/L) sum_l y(l) y(l)^H` over the columns of `rows`.
pub fn sample_covariance(rows: &DMatrix<C64>) -> Result<HermitianMatrix> {
    if rows.nrows() == 0 || rows.ncols() == 0 {
        return Err(Error::EmptyInput("snapshot matrix"));
    }
    let scale = C64::new(1.0 / rows.ncols() as f64, 0.0);
    HermitianMatrix::new(rows * rows.adjoint() * scale)
}
