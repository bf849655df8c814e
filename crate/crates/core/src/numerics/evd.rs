use nalgebra::{DMatrix, SymmetricEigen};

use super::HermitianMatrix;
use crate::{Error, Result, C64};

/// Eigenvalues sorted in descending order with matching orthonormal
/// eigenvector columns.
///
/// Eigenvector phases are arbitrary; consumers should rely on projectors.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenPair {
    pub values: Vec<f64>,
    pub vectors: DMatrix<C64>,
}

impl EigenPair {
    /// `U_N U_N^H` for the eigenvectors beyond the first `signal_dim`.
    pub fn noise_projector(&self, signal_dim: usize) -> DMatrix<C64> {
        let n = self.vectors.nrows();
        let noise = self.vectors.columns(signal_dim, n - signal_dim.min(n));
        noise * noise.adjoint()
    }

    pub fn reconstruct(&self) -> DMatrix<C64> {
        let n = self.values.len();
        let mut scaled = self.vectors.clone();
        for j in 0..n {
            scaled.column_mut(j).scale_mut(self.values[j]);
        }
        scaled * self.vectors.adjoint()
    }
}

/// Eigendecomposition of a Hermitian matrix.
pub fn hermitian_evd(a: &HermitianMatrix) -> Result<EigenPair> {
    let m = a.as_matrix();
    if m.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("hermitian eigendecomposition input"));
    }
    let eig = SymmetricEigen::try_new(m.clone(), f64::EPSILON, 10_000)
        .ok_or_else(|| Error::Numerical("hermitian eigensolver did not converge".into()))?;

    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let values: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("eigenvalues"));
    }
    let n = m.nrows();
    let vectors = DMatrix::from_fn(n, n, |r, c| eig.eigenvectors[(r, order[c])]);
    Ok(EigenPair { values, vectors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn herm(rows: usize, data: &[C64]) -> HermitianMatrix {
        HermitianMatrix::new(DMatrix::from_row_slice(rows, rows, data)).unwrap()
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let a = HermitianMatrix::new(DMatrix::identity(3, 3)).unwrap();
        let e = hermitian_evd(&a).unwrap();
        assert!(e.values.iter().all(|v| (v - 1.0).abs() < 1e-14));
    }

    #[test]
    fn diagonal_sorted_descending() {
        let z = C64::new(0.0, 0.0);
        let a = herm(2, &[C64::new(1.0, 0.0), z, z, C64::new(3.0, 0.0)]);
        let e = hermitian_evd(&a).unwrap();
        assert!((e.values[0] - 3.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        // leading vector spans e_2 up to phase
        assert!((e.vectors[(1, 0)].norm() - 1.0).abs() < 1e-14);
        assert!(e.vectors[(0, 0)].norm() < 1e-14);
    }

    #[test]
    fn rank_one_plus_identity_spectrum() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let q = 5;
        let a = nalgebra::DVector::from_fn(q, |_, _| {
            C64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5)
        });
        let a = &a / C64::new(a.norm(), 0.0) * C64::new(1.7, 0.0);
        let sigma2 = 0.1;
        let m = &a * a.adjoint() + DMatrix::<C64>::identity(q, q) * C64::new(sigma2, 0.0);
        let e = hermitian_evd(&HermitianMatrix::new(m).unwrap()).unwrap();
        assert!((e.values[0] - (1.7f64.powi(2) + sigma2)).abs() < 1e-8);
        for v in &e.values[1..] {
            assert!((v - sigma2).abs() < 1e-8);
        }
        // noise projector is I - a a^H / |a|^2, independent of eigenvector phases
        let p = e.noise_projector(1);
        let expect = DMatrix::<C64>::identity(q, q) - &a * a.adjoint() / C64::new(1.7f64.powi(2), 0.0);
        assert!((p - expect).norm() < 1e-10);
    }
}
