use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use super::default_group_tol;
use super::matrix::{ComplexMatrix, C64};
use crate::{Error, Result, DEFAULT_TOL};

const MAX_SWEEPS: usize = 64;

/// Raw eigenpairs of a Hermitian matrix, ascending, eigenvectors as columns.
///
/// Each eigenvector is phase-fixed so that its first entry of largest modulus
/// is real and positive.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl Eigensystem {
    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Spectral norm of the decomposed matrix.
    pub fn spectral_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |acc: f64, v| acc.max(v.abs()))
    }
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix.
///
/// The input is checked against `‖m† − m‖_F ≤ tol·max(1, ‖m‖_F)` and then
/// symmetrized before rotating.
pub fn eigh(m: &ComplexMatrix, tol: f64) -> Result<Eigensystem> {
    let n = m.dim()?;
    let residual = m.hermiticity_residual();
    if residual > tol * m.frobenius_norm().max(1.0) {
        return Err(Error::NotHermitian { residual });
    }

    let mut a = m.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = a.frobenius_norm();

    if scale > 0.0 {
        for _ in 0..MAX_SWEEPS {
            let off: f64 = (0..n)
                .flat_map(|p| (p + 1..n).map(move |q| (p, q)))
                .map(|(p, q)| a[(p, q)].norm_sqr())
                .sum();
            if off.sqrt() <= f64::EPSILON * scale * 0.5 {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q, scale);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = v.column(src);
        fix_phase(&mut col);
        for (i, z) in col.into_iter().enumerate() {
            vectors[(i, dst)] = z;
        }
    }
    Ok(Eigensystem { values, vectors })
}

/// Zeroes `a[p][q]` with the unitary `G = diag(1, e^{-iφ}) · R(θ)` acting on
/// rows/columns `p, q`, where `a[p][q] = r e^{iφ}`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, scale: f64) {
    let n = a.rows();
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    if r <= f64::EPSILON * 1e-3 * scale {
        a[(p, q)] = C64::new(0.0, 0.0);
        a[(q, p)] = C64::new(0.0, 0.0);
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta == 0.0 {
        1.0
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let back = phase.conj();
    let g_pp = C64::new(c, 0.0);
    let g_pq = C64::new(s, 0.0);
    let g_qp = back * (-s);
    let g_qq = back * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C64::new(0.0, 0.0);
    a[(q, p)] = C64::new(0.0, 0.0);
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

fn fix_phase(col: &mut [C64]) {
    let mut best = 0;
    let mut best_norm = -1.0;
    for (i, z) in col.iter().enumerate() {
        // Slack keeps near-ties resolved toward the lower index.
        if z.norm() > best_norm * (1.0 + 1e-12) {
            best = i;
            best_norm = z.norm();
        }
    }
    if best_norm > 0.0 {
        let phase = col[best].conj() / best_norm;
        for z in col.iter_mut() {
            *z *= phase;
        }
        col[best] = C64::new(col[best].re, 0.0);
    }
}

/// Orthonormal basis of the range of a projector: its eigenvectors with
/// eigenvalue above ½.
pub fn projector_basis(p: &ComplexMatrix) -> Vec<Vec<C64>> {
    let sys = eigh(p, f64::INFINITY).expect("projector must be square");
    sys.values
        .iter()
        .enumerate()
        .filter(|(_, &v)| v > 0.5)
        .map(|(k, _)| sys.vector(k))
        .collect()
}

/// Spectral form `m = Σ_i m_i P_i` with distinct eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    eigenvalues: Vec<f64>,
    projectors: Vec<ComplexMatrix>,
    bases: Vec<Vec<Vec<C64>>>,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[ComplexMatrix] {
        &self.projectors
    }

    /// Orthonormal eigenbasis of cluster `i`, as produced by the eigensolver.
    pub fn basis(&self, i: usize) -> &[Vec<C64>] {
        &self.bases[i]
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.bases[i].len()
    }

    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// `Σ_i f(m_i) P_i`
    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.projectors[0].rows();
        self.eigenvalues
            .iter()
            .zip(&self.projectors)
            .fold(ComplexMatrix::zeros(n, n), |acc, (&m, p)| {
                &acc + &p.scale_real(f(m))
            })
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.apply_fn(|m| m)
    }

    pub fn into_parts(self) -> (Vec<f64>, Vec<ComplexMatrix>) {
        (self.eigenvalues, self.projectors)
    }
}

/// Eigendecomposition with degeneracy grouping.
///
/// Sorted raw eigenvalues are chained into one cluster while consecutive gaps
/// stay within `group_tol`; each cluster's value is its mean and its
/// projector is the sum of the cluster's eigenvector outer products.
pub fn hermitian_eig(m: &ComplexMatrix, group_tol: f64) -> Result<SpectralDecomposition> {
    let sys = eigh(m, DEFAULT_TOL)?;
    Ok(group(&sys, group_tol.max(0.0)))
}

/// [`hermitian_eig`] with grouping tolerance `1e-8·max(1, ‖m‖₂)`.
pub fn spectral_decomposition(m: &ComplexMatrix) -> Result<SpectralDecomposition> {
    let sys = eigh(m, DEFAULT_TOL)?;
    let group_tol = default_group_tol(sys.spectral_norm());
    Ok(group(&sys, group_tol))
}

pub(crate) fn group(sys: &Eigensystem, group_tol: f64) -> SpectralDecomposition {
    let n = sys.values.len();
    let mut clusters: Vec<(usize, usize)> = Vec::new();
    let mut start = 0;
    for k in 1..=n {
        if k == n || sys.values[k] - sys.values[k - 1] > group_tol {
            clusters.push((start, k));
            start = k;
        }
    }

    let mut eigenvalues = Vec::with_capacity(clusters.len());
    let mut projectors = Vec::with_capacity(clusters.len());
    let mut bases = Vec::with_capacity(clusters.len());
    for (lo, hi) in clusters {
        let mean = sys.values[lo..hi].iter().sum::<f64>() / (hi - lo) as f64;
        let basis: Vec<Vec<C64>> = (lo..hi).map(|k| sys.vector(k)).collect();
        let projector = basis.iter().fold(ComplexMatrix::zeros(n, n), |acc, b| {
            &acc + &ComplexMatrix::outer(b, b)
        });
        eigenvalues.push(mean);
        projectors.push(projector);
        bases.push(basis);
    }
    SpectralDecomposition {
        eigenvalues,
        projectors,
        bases,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::Rng;
    use alloc::vec;

    #[test]
    fn diagonal_with_degeneracy() {
        let m = ComplexMatrix::from_diag(&[1.0, 1.0, -1.0]);
        let sd = hermitian_eig(&m, 1e-8).unwrap();
        assert_eq!(sd.eigenvalues(), &[-1.0, 1.0]);
        assert!(sd.projectors()[0].approx_eq(&ComplexMatrix::from_diag(&[0.0, 0.0, 1.0]), 1e-12));
        assert!(sd.projectors()[1].approx_eq(&ComplexMatrix::from_diag(&[1.0, 1.0, 0.0]), 1e-12));
        assert_eq!(sd.multiplicity(1), 2);
    }

    #[test]
    fn identity_is_one_cluster() {
        let sd = spectral_decomposition(&ComplexMatrix::identity(3)).unwrap();
        assert_eq!(sd.eigenvalues(), &[1.0]);
        assert!(sd.projectors()[0].approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }

    #[test]
    fn pauli_x_by_hand() {
        // σ_x = P₊ − P₋ with P± = ½[[1, ±1], [±1, 1]].
        let sx = ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0]);
        let sd = spectral_decomposition(&sx).unwrap();
        assert_eq!(sd.len(), 2);
        assert!((sd.eigenvalues()[0] + 1.0).abs() < 1e-14);
        assert!((sd.eigenvalues()[1] - 1.0).abs() < 1e-14);
        let minus = ComplexMatrix::from_real(2, &[0.5, -0.5, -0.5, 0.5]);
        let plus = ComplexMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]);
        assert!(sd.projectors()[0].approx_eq(&minus, 1e-14));
        assert!(sd.projectors()[1].approx_eq(&plus, 1e-14));
        for p in sd.projectors() {
            assert!(p.idempotence_residual() < 1e-14);
        }
        assert!((&plus - &minus).approx_eq(&sx, 1e-15));
    }

    #[test]
    fn pauli_y_complex_rotation() {
        let sy = ComplexMatrix::new(
            2,
            2,
            vec![
                C64::new(0.0, 0.0),
                C64::new(0.0, -1.0),
                C64::new(0.0, 1.0),
                C64::new(0.0, 0.0),
            ],
        )
        .unwrap();
        let sys = eigh(&sy, 1e-12).unwrap();
        assert!((sys.values[0] + 1.0).abs() < 1e-14 && (sys.values[1] - 1.0).abs() < 1e-14);
        let sd = spectral_decomposition(&sy).unwrap();
        assert!(sd.reconstruct().approx_eq(&sy, 1e-14));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_real(2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&m, 1e-9), Err(Error::NotHermitian { .. })));
        let rect = ComplexMatrix::zeros(2, 3);
        assert!(matches!(eigh(&rect, 1e-9), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn zero_matrix() {
        let sd = spectral_decomposition(&ComplexMatrix::zeros(3, 3)).unwrap();
        assert_eq!(sd.eigenvalues(), &[0.0]);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = Rng::seed(7);
        for d in 1..=12 {
            let m = rng.hermitian(d);
            let sys = eigh(&m, 1e-9).unwrap();
            assert!(sys.vectors.unitarity_residual() < 1e-12, "d={d}");
            let sd = spectral_decomposition(&m).unwrap();
            let scale = m.frobenius_norm().max(1.0);
            assert!(sd.reconstruct().distance(&m) <= 1e-8 * scale, "d={d}");
            let sum = ComplexMatrix::sum(sd.projectors()).unwrap();
            assert!(sum.approx_eq(&ComplexMatrix::identity(d), 1e-10));
            for w in sd.eigenvalues().windows(2) {
                assert!(w[1] > w[0]);
            }
        }
    }

    #[test]
    fn near_degenerate_values_merge() {
        let m = ComplexMatrix::from_diag(&[2.0, 2.0 + 1e-12, 5.0]);
        let sd = spectral_decomposition(&m).unwrap();
        assert_eq!(sd.len(), 2);
        assert!((sd.eigenvalues()[0] - (2.0 + 0.5e-12)).abs() < 1e-15);
        let sd = hermitian_eig(&m, 0.0).unwrap();
        assert_eq!(sd.len(), 3);
    }
}
