use alloc::vec::Vec;

use super::matrix::{ComplexMatrix, C64};
use crate::{Error, Result};

/// Kronecker product; row `i·rb + k`, column `j·cb + l` holds `a_ij b_kl`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (rb, cb) = (b.rows(), b.cols());
    ComplexMatrix::from_fn(a.rows() * rb, a.cols() * cb, |r, c| {
        a[(r / rb, c / cb)] * b[(r % rb, c % cb)]
    })
}

pub fn tensor_vec(u: &[C64], v: &[C64]) -> Vec<C64> {
    u.iter()
        .flat_map(|&x| v.iter().map(move |&y| x * y))
        .collect()
}

fn check_composite(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<()> {
    let n = m.dim()?;
    if n != d1 * d2 {
        return Err(Error::DimensionMismatch {
            expected: d1 * d2,
            found: n,
        });
    }
    Ok(())
}

/// Trace over the second (fast-index) factor of a `d1·d2` operator.
pub fn partial_trace_2(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_composite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d1, d1, |i, k| {
        (0..d2).map(|j| m[(i * d2 + j, k * d2 + j)]).sum()
    }))
}

/// Trace over the first (slow-index) factor of a `d1·d2` operator.
pub fn partial_trace_1(m: &ComplexMatrix, d1: usize, d2: usize) -> Result<ComplexMatrix> {
    check_composite(m, d1, d2)?;
    Ok(ComplexMatrix::from_fn(d2, d2, |j, l| {
        (0..d1).map(|i| m[(i * d2 + j, i * d2 + l)]).sum()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Rng;
    use alloc::vec;

    #[test]
    fn identity_products() {
        let i4 = tensor(&ComplexMatrix::identity(2), &ComplexMatrix::identity(2));
        assert_eq!(i4, ComplexMatrix::identity(4));
        let z1 = tensor(
            &ComplexMatrix::from_diag(&[1.0, -1.0]),
            &ComplexMatrix::identity(2),
        );
        assert_eq!(z1, ComplexMatrix::from_diag(&[1.0, 1.0, -1.0, -1.0]));
    }

    #[test]
    fn kronecker_by_hand() {
        let x = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let p0 = ComplexMatrix::from_diag(&[1.0, 0.0]);
        let k = tensor(&x, &p0);
        let mut expected = ComplexMatrix::zeros(4, 4);
        expected[(0, 2)] = C64::new(1.0, 0.0);
        expected[(2, 0)] = C64::new(1.0, 0.0);
        assert_eq!(k, expected);
    }

    #[test]
    fn partial_trace_examples() {
        let t = partial_trace_2(&ComplexMatrix::identity(4), 2, 2).unwrap();
        assert_eq!(t, ComplexMatrix::from_diag(&[2.0, 2.0]));

        // |Φ+⟩⟨Φ+| has entries ½ at (0,0), (0,3), (3,0), (3,3).
        let s = 0.5f64.sqrt();
        let phi = vec![
            C64::new(s, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(s, 0.0),
        ];
        let bell = ComplexMatrix::outer(&phi, &phi);
        let reduced = partial_trace_2(&bell, 2, 2).unwrap();
        assert!(reduced.approx_eq(&ComplexMatrix::from_diag(&[0.5, 0.5]), 1e-15));

        let mut rng = Rng::seed(1);
        let r1 = rng.density(3).into_matrix();
        let r2 = rng.density(2).into_matrix();
        let prod = tensor(&r1, &r2);
        assert!(partial_trace_2(&prod, 3, 2).unwrap().approx_eq(&r1, 1e-14));
        assert!(partial_trace_1(&prod, 3, 2).unwrap().approx_eq(&r2, 1e-14));
    }

    #[test]
    fn partial_trace_dimension_checked() {
        assert!(matches!(
            partial_trace_2(&ComplexMatrix::identity(5), 2, 2),
            Err(Error::DimensionMismatch {
                expected: 4,
                found: 5
            })
        ));
    }

    #[test]
    fn adjointness_with_tensor() {
        // Tr((x ⊗ 1) m) = Tr(x · Tr₂ m)
        let mut rng = Rng::seed(2);
        for (d1, d2) in [(2, 2), (2, 3), (3, 2), (4, 3)] {
            let x = rng.ginibre(d1);
            let m = rng.ginibre(d1 * d2);
            let lhs = tensor(&x, &ComplexMatrix::identity(d2)).matmul(&m).trace();
            let rhs = x.matmul(&partial_trace_2(&m, d1, d2).unwrap()).trace();
            assert!((lhs - rhs).norm() < 1e-12);
            assert!((partial_trace_2(&m, d1, d2).unwrap().trace() - m.trace()).norm() < 1e-12);
        }
    }
}
