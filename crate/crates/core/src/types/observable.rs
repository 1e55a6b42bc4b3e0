use alloc::vec::Vec;

use super::{check_labels, Label};
use crate::matcore::{spectral_decomposition, ComplexMatrix, SpectralDecomposition};
use crate::{Error, Result};

/// Discrete observable `M = Σ_i m_i P_i` in spectral form.
///
/// Eigenvalues are pairwise distinct and the projectors are orthogonal and
/// resolve the identity. Order is the order of construction; outcome labels
/// are the signed decimal forms of the eigenvalues.
#[derive(Debug, Clone)]
pub struct Observable {
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    labels: Vec<Label>,
}

impl Observable {
    pub fn new(eigenvalues: Vec<f64>, projectors: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let labels = eigenvalues.iter().map(|&v| Label::from_value(v)).collect();
        Self::with_labels(eigenvalues, projectors, labels, tol)
    }

    pub fn with_labels(
        eigenvalues: Vec<f64>,
        projectors: Vec<ComplexMatrix>,
        labels: Vec<Label>,
        tol: f64,
    ) -> Result<Self> {
        if projectors.is_empty() {
            return Err(Error::NoOutcomes);
        }
        if eigenvalues.len() != projectors.len() {
            return Err(Error::DimensionMismatch {
                expected: projectors.len(),
                found: eigenvalues.len(),
            });
        }
        for (i, v) in eigenvalues.iter().enumerate() {
            if !v.is_finite() {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
            if eigenvalues[..i].contains(v) {
                return Err(Error::RepeatedEigenvalue { value: *v });
            }
        }
        check_labels(&labels, projectors.len())?;
        let d = projectors[0].dim()?;
        for p in &projectors {
            if p.dim()? != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: p.rows(),
                });
            }
            let residual = p.hermiticity_residual().max(p.idempotence_residual());
            if residual > tol {
                return Err(Error::NotProjector { residual });
            }
        }
        for i in 0..projectors.len() {
            for j in i + 1..projectors.len() {
                let residual = projectors[i].matmul(&projectors[j]).frobenius_norm();
                if residual > tol {
                    return Err(Error::NotOrthogonal { residual });
                }
            }
        }
        let residual = ComplexMatrix::sum(&projectors)
            .expect("nonempty")
            .distance(&ComplexMatrix::identity(d));
        if residual > tol {
            return Err(Error::IncompleteResolution { residual });
        }
        Ok(Self {
            eigenvalues,
            projectors,
            labels,
        })
    }

    /// Spectral form of a Hermitian matrix, eigenvalues ascending.
    pub fn from_matrix(m: &ComplexMatrix) -> Result<Self> {
        Ok(Self::from_spectral(spectral_decomposition(m)?))
    }

    pub fn from_spectral(sd: SpectralDecomposition) -> Self {
        let (eigenvalues, projectors) = sd.into_parts();
        let labels = eigenvalues.iter().map(|&v| Label::from_value(v)).collect();
        Self {
            eigenvalues,
            projectors,
            labels,
        }
    }

    pub(crate) fn from_parts_unchecked(
        eigenvalues: Vec<f64>,
        projectors: Vec<ComplexMatrix>,
    ) -> Self {
        let labels = eigenvalues.iter().map(|&v| Label::from_value(v)).collect();
        Self {
            eigenvalues,
            projectors,
            labels,
        }
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].rows()
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn rank(&self, i: usize) -> usize {
        (self.projectors[i].trace().re + 0.5) as usize
    }

    pub fn index_of(&self, label: &Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.as_str().into()))
    }

    /// `Σ_i m_i P_i`
    pub fn matrix(&self) -> ComplexMatrix {
        let d = self.dim();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(d, d), |acc, (&m, p)| {
                &acc + &p.scale_real(m)
            })
    }

    /// Observable with every projector rank one.
    pub fn is_nondegenerate(&self) -> bool {
        (0..self.len()).all(|i| self.rank(i) == 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn z() -> Observable {
        Observable::from_matrix(&ComplexMatrix::from_diag(&[1.0, -1.0])).unwrap()
    }

    #[test]
    fn from_matrix_is_ascending() {
        let o = z();
        assert_eq!(o.eigenvalues(), &[-1.0, 1.0]);
        assert_eq!(o.labels()[1].as_str(), "+1");
        assert!(o
            .matrix()
            .approx_eq(&ComplexMatrix::from_diag(&[1.0, -1.0]), 1e-15));
    }

    #[test]
    fn rejects_bad_families() {
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_diag(&[0.0, 1.0]);
        let tol = crate::DEFAULT_TOL;
        assert!(matches!(
            Observable::new(vec![1.0], vec![p0.clone()], tol),
            Err(Error::IncompleteResolution { .. })
        ));
        assert!(matches!(
            Observable::new(vec![1.0, 1.0], vec![p0.clone(), p1.clone()], tol),
            Err(Error::RepeatedEigenvalue { .. })
        ));
        assert!(matches!(
            Observable::new(vec![1.0, 2.0], vec![p0.clone(), p0.clone()], tol),
            Err(Error::NotOrthogonal { .. })
        ));
        assert!(matches!(
            Observable::new(vec![1.0, 2.0], vec![p0.scale_real(2.0), p1.clone()], tol),
            Err(Error::NotProjector { .. })
        ));
        assert!(Observable::new(vec![1.0, -1.0], vec![p0, p1], tol).is_ok());
    }
}
