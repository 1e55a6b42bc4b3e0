use alloc::vec::Vec;

use crate::matcore::{default_rank_tol, eigh, tensor_vec, vec_norm, ComplexMatrix, C64};
use crate::{Error, Result, DEFAULT_TOL};

/// Unit vector `|ψ⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<C64>,
}

impl StateVector {
    pub fn new(amplitudes: Vec<C64>, tol: f64) -> Result<Self> {
        let norm = Self::finite_norm(&amplitudes)?;
        if (norm - 1.0).abs() > tol {
            return Err(Error::NotNormalized { norm });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales a nonzero vector to unit norm.
    pub fn normalized(mut amplitudes: Vec<C64>) -> Result<Self> {
        let norm = Self::finite_norm(&amplitudes)?;
        if norm == 0.0 {
            return Err(Error::NotNormalized { norm });
        }
        for a in amplitudes.iter_mut() {
            *a /= norm;
        }
        Ok(Self { amplitudes })
    }

    fn finite_norm(amplitudes: &[C64]) -> Result<f64> {
        if amplitudes.is_empty() {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if let Some(k) = amplitudes
            .iter()
            .position(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::NonFinite { row: k, col: 0 });
        }
        Ok(vec_norm(amplitudes))
    }

    /// Standard basis vector `|k⟩` of `C^dim`.
    pub fn basis(dim: usize, k: usize) -> Self {
        assert!(k < dim, "basis index {k} out of range for dimension {dim}");
        let mut amplitudes = alloc::vec![C64::new(0.0, 0.0); dim];
        amplitudes[k] = C64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<C64> {
        self.amplitudes
    }

    /// `|ψ⟩⟨ψ|`
    pub fn projector(&self) -> ComplexMatrix {
        ComplexMatrix::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator {
            matrix: self.projector(),
            tol: DEFAULT_TOL,
        }
    }

    /// `|ψ⟩ ⊗ |φ⟩`
    pub fn tensor(&self, other: &Self) -> Self {
        Self {
            amplitudes: tensor_vec(&self.amplitudes, &other.amplitudes),
        }
    }

    /// Largest entrywise distance to `other` after removing the global phase.
    pub fn distance_up_to_phase(&self, other: &Self) -> f64 {
        let overlap = crate::matcore::inner(&other.amplitudes, &self.amplitudes);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            C64::new(1.0, 0.0)
        };
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b * phase).norm())
            .fold(0.0, f64::max)
    }
}

/// Density operator `ρ`: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityOperator {
    matrix: ComplexMatrix,
    tol: f64,
}

impl DensityOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tol(matrix, DEFAULT_TOL)
    }

    pub fn with_tol(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let sys = eigh(&matrix, tol)?;
        let trace = matrix.trace().re;
        if (trace - 1.0).abs() > tol {
            return Err(Error::NotUnitTrace { trace });
        }
        if let Some(&lowest) = sys.values.first() {
            if lowest < -tol {
                return Err(Error::NotPositive { eigenvalue: lowest });
            }
        }
        Ok(Self {
            matrix: matrix.hermitian_part(),
            tol,
        })
    }

    /// Wraps a matrix known to be a state up to roundoff; only symmetrizes.
    pub(crate) fn from_matrix_unchecked(matrix: ComplexMatrix, tol: f64) -> Self {
        Self {
            matrix: matrix.hermitian_part(),
            tol,
        }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            matrix: ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64),
            tol: DEFAULT_TOL,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// `Tr ρ²`
    pub fn purity(&self) -> f64 {
        self.matrix.matmul(&self.matrix).trace().re
    }

    /// Spectral decomposition `ρ = Σ_k r_k |k⟩⟨k|` restricted to strictly
    /// positive weights.
    pub fn spectral_mixture(&self) -> (Vec<f64>, Vec<StateVector>) {
        let sys = eigh(&self.matrix, f64::INFINITY).expect("density operator is square");
        let floor = default_rank_tol(1.0);
        let mut weights = Vec::new();
        let mut states = Vec::new();
        for (k, &w) in sys.values.iter().enumerate() {
            if w > floor {
                weights.push(w);
                states.push(StateVector {
                    amplitudes: sys.vector(k),
                });
            }
        }
        (weights, states)
    }
}
