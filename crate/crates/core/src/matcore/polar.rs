use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use super::eig::{eigh, group};
use super::isometry::extend_unchecked;
use super::matrix::{ComplexMatrix, C64};
use super::{default_group_tol, default_rank_tol};
use crate::{Error, Result};

/// Polar factors of a square matrix `A = UH = ŨH`.
#[derive(Debug, Clone)]
pub struct PolarFactors {
    /// Unitary factor `U`: `Ũ` completed on the null space of `H`.
    pub unitary: ComplexMatrix,
    /// Positive factor `H = (A†A)^{1/2}`.
    pub positive: ComplexMatrix,
    /// Partial isometry `Ũ`, zero on the null space of `A†A`.
    pub partial_isometry: ComplexMatrix,
    /// Range projector `Q` of `A†A`.
    pub range_projector: ComplexMatrix,
}

impl PolarFactors {
    /// True when `H` has a nontrivial null space.
    pub fn is_singular(&self) -> bool {
        let n = self.range_projector.rows();
        self.range_projector.trace().re < n as f64 - 0.5
    }

    pub fn rank(&self) -> usize {
        let r = self.range_projector.trace().re;
        if r <= 0.0 {
            0
        } else {
            (r + 0.5) as usize
        }
    }
}

fn checked_psd(m: &ComplexMatrix, tol: f64) -> Result<super::eig::Eigensystem> {
    let sys = eigh(m, tol)?;
    let floor = -tol * sys.spectral_norm().max(1.0);
    if let Some(&lowest) = sys.values.first() {
        if lowest < floor {
            return Err(Error::NotPositive { eigenvalue: lowest });
        }
    }
    Ok(sys)
}

/// Unique positive square root.
///
/// Eigenvalues in `[−tol, 0)` are clamped to zero, and so are those below the
/// rank threshold: the square root would otherwise turn roundoff of order
/// `1e-17` into entries of order `1e-9`.
pub fn positive_sqrt(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let sys = checked_psd(m, tol)?;
    let n = sys.values.len();
    let rank_tol = default_rank_tol(sys.spectral_norm());
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in sys.values.iter().enumerate() {
        if lambda <= rank_tol {
            continue;
        }
        let v = sys.vector(k);
        out = &out + &ComplexMatrix::outer(&v, &v).scale_real(lambda.sqrt());
    }
    Ok(out)
}

/// Projector onto the span of eigenvectors with eigenvalue above
/// `1e-10·max(1, ‖m‖₂)`.
pub fn range_projector(m: &ComplexMatrix, tol: f64) -> Result<ComplexMatrix> {
    let sys = checked_psd(m, tol)?;
    let n = sys.values.len();
    let rank_tol = default_rank_tol(sys.spectral_norm());
    let mut q = ComplexMatrix::zeros(n, n);
    for (k, &lambda) in sys.values.iter().enumerate() {
        if lambda > rank_tol {
            let v = sys.vector(k);
            q = &q + &ComplexMatrix::outer(&v, &v);
        }
    }
    Ok(q)
}

/// Polar factorization built from the spectral form of `A†A`.
///
/// With `A†A = Σ_i m_i Q_i`, the positive factor is `H = Σ_i m_i^{1/2} Q_i`
/// and the partial isometry is `Ũ = A Σ_i m_i^{-1/2} Q_i`, both summed over
/// clusters above the rank threshold. `Ũ` maps the
/// eigenbasis of the range of `A†A` onto an orthonormal set; `U` pairs the
/// remaining directions using [`super::complete_orthonormal`] on both sides.
pub fn polar_factorize(a: &ComplexMatrix) -> Result<PolarFactors> {
    let n = a.dim()?;
    let ata = a.adjoint().matmul(a).hermitian_part();
    let sys = eigh(&ata, f64::INFINITY)?;
    let norm = sys.spectral_norm();
    let spectral = group(&sys, default_group_tol(norm));
    let rank_tol = default_rank_tol(norm);

    let mut positive = ComplexMatrix::zeros(n, n);
    let mut range = ComplexMatrix::zeros(n, n);
    let mut inv_sqrt = ComplexMatrix::zeros(n, n);
    let mut columns: Vec<Vec<C64>> = Vec::new();
    for (i, (&m, q)) in spectral
        .eigenvalues()
        .iter()
        .zip(spectral.projectors())
        .enumerate()
    {
        // Sub-threshold clusters are numerical zeros for H as well as for Ũ.
        if m > rank_tol {
            positive = &positive + &q.scale_real(m.sqrt());
            range = &range + q;
            inv_sqrt = &inv_sqrt + &q.scale_real(1.0 / m.sqrt());
            columns.extend(spectral.basis(i).iter().cloned());
        }
    }

    let partial_isometry = a.matmul(&inv_sqrt);
    let images: Vec<Vec<C64>> = columns.iter().map(|c| partial_isometry.apply(c)).collect();
    let unitary = extend_unchecked(&columns, &images, n);

    Ok(PolarFactors {
        unitary,
        positive,
        partial_isometry,
        range_projector: range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Rng;

    fn real(n: usize, e: &[f64]) -> ComplexMatrix {
        ComplexMatrix::from_real(n, e)
    }

    #[test]
    fn sqrt_examples() {
        let r = positive_sqrt(&ComplexMatrix::from_diag(&[4.0, 9.0]), 1e-9).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_diag(&[2.0, 3.0]), 1e-14));
        let z = positive_sqrt(&ComplexMatrix::zeros(2, 2), 1e-9).unwrap();
        assert!(z.approx_eq(&ComplexMatrix::zeros(2, 2), 0.0));
        let p = real(2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(positive_sqrt(&p, 1e-9).unwrap().approx_eq(&p, 1e-14));
    }

    #[test]
    fn sqrt_rejects_negative_and_clamps_roundoff() {
        let m = ComplexMatrix::from_diag(&[1.0, -0.1]);
        assert!(matches!(
            positive_sqrt(&m, 1e-9),
            Err(Error::NotPositive { .. })
        ));
        let m = ComplexMatrix::from_diag(&[1.0, -1e-12]);
        let r = positive_sqrt(&m, 1e-9).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn range_projector_examples() {
        let q = range_projector(&ComplexMatrix::from_diag(&[5.0, 0.0]), 1e-9).unwrap();
        assert!(q.approx_eq(&ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-15));
        let q = range_projector(&ComplexMatrix::identity(3), 1e-9).unwrap();
        assert!(q.approx_eq(&ComplexMatrix::identity(3), 1e-15));
        let p = real(2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(range_projector(&p, 1e-9).unwrap().approx_eq(&p, 1e-14));
        assert!(matches!(
            range_projector(&ComplexMatrix::from_diag(&[1.0, -1.0]), 1e-9),
            Err(Error::NotPositive { .. })
        ));
    }

    #[test]
    fn nilpotent_by_hand() {
        // a†a = diag(0, 1); Ũ = a; completion sends e0 to e1.
        let a = real(2, &[0.0, 1.0, 0.0, 0.0]);
        let f = polar_factorize(&a).unwrap();
        assert!(f
            .positive
            .approx_eq(&ComplexMatrix::from_diag(&[0.0, 1.0]), 1e-15));
        assert!(f.unitary.approx_eq(&real(2, &[0.0, 1.0, 1.0, 0.0]), 1e-15));
        assert!(f.partial_isometry.approx_eq(&a, 1e-15));
        assert!(f
            .range_projector
            .approx_eq(&ComplexMatrix::from_diag(&[0.0, 1.0]), 1e-15));
        assert!(f.is_singular());
        assert_eq!(f.rank(), 1);
    }

    #[test]
    fn unitary_and_positive_inputs() {
        let mut rng = Rng::seed(5);
        let u = rng.unitary(3);
        let f = polar_factorize(&u).unwrap();
        assert!(f.positive.approx_eq(&ComplexMatrix::identity(3), 1e-12));
        assert!(f.unitary.approx_eq(&u, 1e-12));
        assert!(!f.is_singular());

        let d = ComplexMatrix::from_diag(&[2.0, 3.0]);
        let f = polar_factorize(&d).unwrap();
        assert!(f.positive.approx_eq(&d, 1e-14));
        assert!(f.unitary.approx_eq(&ComplexMatrix::identity(2), 1e-14));
    }

    #[test]
    fn zero_matrix_polar() {
        let f = polar_factorize(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert!(f.unitary.approx_eq(&ComplexMatrix::identity(2), 0.0));
        assert_eq!(f.rank(), 0);
    }

    #[test]
    fn non_square_rejected() {
        assert!(matches!(
            polar_factorize(&ComplexMatrix::zeros(2, 3)),
            Err(Error::NotSquare { .. })
        ));
    }
}
