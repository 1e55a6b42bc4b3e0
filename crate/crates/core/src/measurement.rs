//! Outcome probabilities, state updates and sampling.
//!
//! For an instrument `{M_i}` and state `ρ`:
//!
//! - probability of outcome `i`: `p_i = Tr(ρ M_i†M_i)`
//! - selective update: `ρ ↦ M_i ρ M_i† / p_i` (only defined when `p_i > 0`)
//! - nonselective update: `ρ ↦ Σ_i M_i ρ M_i†`
//!
//! Sampling is inverse-CDF over the instrument's outcome order, driven by
//! [`Rng`] (ChaCha8 seeded with `seed_from_u64`, uniform
//! draws in `[0, 1)` with 53-bit resolution).

use alloc::vec;
use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matcore::{vec_norm, ComplexMatrix};
use crate::random::Rng;
use crate::types::{DensityOperator, Instrument, Label, Observable, StateVector};
use crate::{Error, Result};

/// Outcomes with probability at or below this are treated as impossible.
pub const P_FLOOR: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq)]
pub struct OutcomeDistribution {
    labels: Vec<Label>,
    probabilities: Vec<f64>,
}

impl OutcomeDistribution {
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    pub fn get(&self, label: &Label) -> Option<f64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.probabilities[i])
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `½ Σ_i |p_i − q_i|`
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        assert_eq!(other.len(), self.probabilities.len());
        0.5 * self
            .probabilities
            .iter()
            .zip(other)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
    }
}

/// Result of a selective measurement.
#[derive(Debug, Clone)]
pub struct SelectiveOutcome {
    pub index: usize,
    pub label: Label,
    pub probability: f64,
    pub post_state: DensityOperator,
}

fn check_dim(inst: &Instrument, d: usize) -> Result<()> {
    if inst.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: inst.dim(),
            found: d,
        });
    }
    Ok(())
}

/// `Re Tr(A B)` without forming the product.
fn trace_product(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for k in 0..n {
            acc += (a[(i, k)] * b[(k, i)]).re;
        }
    }
    acc
}

fn finalize(inst: &Instrument, raw: Vec<f64>, state_tol: f64) -> Result<OutcomeDistribution> {
    let mut probabilities: Vec<f64> = raw.into_iter().map(|p| p.max(0.0)).collect();
    let sum: f64 = probabilities.iter().sum();
    if (sum - 1.0).abs() > inst.tol() + state_tol + 1e-12 {
        return Err(Error::ProbabilityNormalization { sum });
    }
    for p in probabilities.iter_mut() {
        *p = (*p / sum).min(1.0);
    }
    Ok(OutcomeDistribution {
        labels: inst.labels().to_vec(),
        probabilities,
    })
}

/// Born probabilities `p_i = Tr(ρ M_i†M_i)`; roundoff negatives are clamped
/// and the vector renormalized.
pub fn probabilities(inst: &Instrument, rho: &DensityOperator) -> Result<OutcomeDistribution> {
    check_dim(inst, rho.dim())?;
    let raw = inst
        .transformers()
        .iter()
        .map(|m| trace_product(rho.matrix(), &m.adjoint().matmul(m)))
        .collect();
    finalize(inst, raw, rho.tol())
}

/// Pure-state probabilities `p_i = ‖M_i ψ‖²`.
pub fn pure_probabilities(inst: &Instrument, psi: &StateVector) -> Result<OutcomeDistribution> {
    check_dim(inst, psi.dim())?;
    let raw = inst
        .transformers()
        .iter()
        .map(|m| vec_norm(&m.apply(psi.amplitudes())).powi(2))
        .collect();
    finalize(inst, raw, crate::DEFAULT_TOL)
}

/// Selective update for the outcome named `label`.
pub fn apply_selective(
    inst: &Instrument,
    label: &Label,
    rho: &DensityOperator,
) -> Result<SelectiveOutcome> {
    let index = inst.index_of(label)?;
    apply_selective_index(inst, index, rho)
}

/// Selective update `ρ ↦ M_i ρ M_i† / p_i` for outcome `index`.
pub fn apply_selective_index(
    inst: &Instrument,
    index: usize,
    rho: &DensityOperator,
) -> Result<SelectiveOutcome> {
    check_dim(inst, rho.dim())?;
    if index >= inst.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: inst.len(),
        });
    }
    let unnormalized = inst.transformer(index).sandwich(rho.matrix());
    let probability = unnormalized.trace().re;
    let label = inst.labels()[index].clone();
    if probability <= P_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            label: label.as_str().into(),
            probability,
        });
    }
    Ok(SelectiveOutcome {
        index,
        label,
        probability: probability.min(1.0),
        post_state: DensityOperator::from_matrix_unchecked(
            unnormalized.scale_real(1.0 / probability),
            rho.tol(),
        ),
    })
}

/// Vector form of the selective update: `ψ ↦ M_i ψ / √p_i`.
pub fn apply_selective_vector(
    inst: &Instrument,
    index: usize,
    psi: &StateVector,
) -> Result<(f64, StateVector)> {
    check_dim(inst, psi.dim())?;
    if index >= inst.len() {
        return Err(Error::IndexOutOfRange {
            index,
            len: inst.len(),
        });
    }
    let image = inst.transformer(index).apply(psi.amplitudes());
    let probability = vec_norm(&image).powi(2);
    if probability <= P_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            label: inst.labels()[index].as_str().into(),
            probability,
        });
    }
    Ok((probability.min(1.0), StateVector::normalized(image)?))
}

/// Nonselective update `ρ ↦ Σ_i M_i ρ M_i†`.
pub fn apply_nonselective(inst: &Instrument, rho: &DensityOperator) -> Result<DensityOperator> {
    check_dim(inst, rho.dim())?;
    let d = rho.dim();
    let out = inst
        .transformers()
        .iter()
        .fold(ComplexMatrix::zeros(d, d), |acc, m| {
            &acc + &m.sandwich(rho.matrix())
        });
    Ok(DensityOperator::from_matrix_unchecked(out, rho.tol()))
}

/// Inverse-CDF pick: the first index whose cumulative probability exceeds
/// `u`. Falls back to the last outcome with nonzero probability when
/// roundoff leaves `u` above the final cumulative sum.
pub fn draw_index(probabilities: &[f64], u: f64) -> usize {
    let mut acc = 0.0;
    for (i, &p) in probabilities.iter().enumerate() {
        acc += p;
        if u < acc {
            return i;
        }
    }
    probabilities
        .iter()
        .rposition(|&p| p > 0.0)
        .unwrap_or(probabilities.len() - 1)
}

/// Draws one outcome with a fresh generator seeded by `seed` and returns its
/// selective update.
pub fn sample_outcome(
    inst: &Instrument,
    rho: &DensityOperator,
    seed: u64,
) -> Result<SelectiveOutcome> {
    let dist = probabilities(inst, rho)?;
    let u = Rng::seed(seed).uniform();
    apply_selective_index(inst, draw_index(dist.probabilities(), u), rho)
}

/// Outcome counts over `shots` draws from one seeded stream.
pub fn sample_counts(
    inst: &Instrument,
    rho: &DensityOperator,
    shots: u64,
    seed: u64,
) -> Result<Vec<u64>> {
    let dist = probabilities(inst, rho)?;
    let mut rng = Rng::seed(seed);
    let mut counts = vec![0u64; inst.len()];
    for _ in 0..shots {
        counts[draw_index(dist.probabilities(), rng.uniform())] += 1;
    }
    Ok(counts)
}

fn projector_at(obs: &Observable, index: usize, d: usize) -> Result<&ComplexMatrix> {
    if obs.dim() != d {
        return Err(Error::DimensionMismatch {
            expected: obs.dim(),
            found: d,
        });
    }
    obs.projectors().get(index).ok_or(Error::IndexOutOfRange {
        index,
        len: obs.len(),
    })
}

/// Whether `ρ` has the sharp value `m_index` of `obs`, i.e. `Tr(ρ P) ≥ 1 − tol`.
///
/// In finite dimensions this is the same as zero dispersion of `obs` at that
/// eigenvalue.
pub fn has_sharp_value(
    rho: &DensityOperator,
    obs: &Observable,
    index: usize,
    tol: f64,
) -> Result<bool> {
    let p = projector_at(obs, index, rho.dim())?;
    Ok(trace_product(rho.matrix(), p) >= 1.0 - tol)
}

/// Checks, on a given decomposition `ρ = Σ_k w_k |k⟩⟨k|`, that sharpness of
/// `ρ` at `m_index` carries over to every pure component.
///
/// Returns `true` when `ρ` is not sharp (the implication holds vacuously).
pub fn sharp_value_decomposition_check(
    rho: &DensityOperator,
    obs: &Observable,
    index: usize,
    weights: &[f64],
    pure_states: &[StateVector],
    tol: f64,
) -> Result<bool> {
    let p = projector_at(obs, index, rho.dim())?;
    if weights.is_empty() || weights.len() != pure_states.len() {
        return Err(Error::InvalidWeights("one weight per pure state required"));
    }
    if weights.iter().any(|&w| !(w > 0.0 && w <= 1.0 + tol)) {
        return Err(Error::InvalidWeights("weights must lie in (0, 1]"));
    }
    if (weights.iter().sum::<f64>() - 1.0).abs() > tol {
        return Err(Error::InvalidWeights("weights must sum to 1"));
    }
    let d = rho.dim();
    let mut mixture = ComplexMatrix::zeros(d, d);
    for (w, k) in weights.iter().zip(pure_states) {
        if k.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: k.dim(),
            });
        }
        mixture = &mixture + &k.projector().scale_real(*w);
    }
    let residual = mixture.distance(rho.matrix());
    if residual > tol {
        return Err(Error::InvalidDecomposition { residual });
    }
    if trace_product(rho.matrix(), p) < 1.0 - tol {
        return Ok(true);
    }
    Ok(pure_states
        .iter()
        .all(|k| crate::matcore::inner(k.amplitudes(), &p.apply(k.amplitudes())).re >= 1.0 - tol))
}
