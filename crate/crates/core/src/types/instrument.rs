use alloc::vec::Vec;

use super::{check_labels, Label};
use crate::matcore::{eigh, ComplexMatrix};
use crate::{Error, Result};

fn common_dim(ms: &[ComplexMatrix]) -> Result<usize> {
    let first = ms.first().ok_or(Error::NoOutcomes)?;
    let d = first.dim()?;
    for m in ms {
        if m.dim()? != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: m.rows(),
            });
        }
        if !m.is_finite() {
            return Err(Error::NonFinite { row: 0, col: 0 });
        }
    }
    Ok(d)
}

fn index_labels(n: usize) -> Vec<Label> {
    (0..n).map(Label::from_index).collect()
}

/// Positive-operator-valued measure `{Π_i}` with `Σ Π_i = 1`.
#[derive(Debug, Clone)]
pub struct Povm {
    effects: Vec<ComplexMatrix>,
    labels: Vec<Label>,
    tol: f64,
}

impl Povm {
    pub fn new(effects: Vec<ComplexMatrix>, labels: Vec<Label>, tol: f64) -> Result<Self> {
        let d = common_dim(&effects)?;
        check_labels(&labels, effects.len())?;
        for e in &effects {
            let sys = eigh(e, tol)?;
            if let Some(&lowest) = sys.values.first() {
                if lowest < -tol {
                    return Err(Error::NotPositive { eigenvalue: lowest });
                }
            }
        }
        let residual = completeness(&effects, d);
        if residual > tol {
            return Err(Error::EffectsNotComplete { residual });
        }
        Ok(Self {
            effects,
            labels,
            tol,
        })
    }

    /// Outcomes labelled `0, 1, …`.
    pub fn indexed(effects: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let labels = index_labels(effects.len());
        Self::new(effects, labels, tol)
    }

    pub(crate) fn from_parts_unchecked(
        effects: Vec<ComplexMatrix>,
        labels: Vec<Label>,
        tol: f64,
    ) -> Self {
        Self {
            effects,
            labels,
            tol,
        }
    }

    pub fn dim(&self) -> usize {
        self.effects[0].rows()
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[ComplexMatrix] {
        &self.effects
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Largest Frobenius distance between corresponding effects.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.effects
            .iter()
            .zip(&other.effects)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }
}

fn completeness(effects: &[ComplexMatrix], d: usize) -> f64 {
    ComplexMatrix::sum(effects)
        .expect("nonempty")
        .distance(&ComplexMatrix::identity(d))
}

/// Complete set of state transformers `{M_i}`, `Σ M_i†M_i = 1`.
///
/// Zero transformers are allowed; they describe outcomes that never occur.
#[derive(Debug, Clone)]
pub struct Instrument {
    transformers: Vec<ComplexMatrix>,
    labels: Vec<Label>,
    tol: f64,
}

impl Instrument {
    pub fn new(transformers: Vec<ComplexMatrix>, labels: Vec<Label>, tol: f64) -> Result<Self> {
        let d = common_dim(&transformers)?;
        check_labels(&labels, transformers.len())?;
        let residual = completeness_residual_of(&transformers, d);
        if residual > tol {
            return Err(Error::CompletenessViolation { residual });
        }
        Ok(Self {
            transformers,
            labels,
            tol,
        })
    }

    /// Outcomes labelled `0, 1, …`.
    pub fn indexed(transformers: Vec<ComplexMatrix>, tol: f64) -> Result<Self> {
        let labels = index_labels(transformers.len());
        Self::new(transformers, labels, tol)
    }

    pub(crate) fn from_parts_unchecked(
        transformers: Vec<ComplexMatrix>,
        labels: Vec<Label>,
        tol: f64,
    ) -> Self {
        Self {
            transformers,
            labels,
            tol,
        }
    }

    pub fn dim(&self) -> usize {
        self.transformers[0].rows()
    }

    pub fn len(&self) -> usize {
        self.transformers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.transformers.is_empty()
    }

    pub fn transformers(&self) -> &[ComplexMatrix] {
        &self.transformers
    }

    pub fn transformer(&self, i: usize) -> &ComplexMatrix {
        &self.transformers[i]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn index_of(&self, label: &Label) -> Result<usize> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownLabel(label.as_str().into()))
    }

    /// `‖Σ M_i†M_i − 1‖_F`
    pub fn completeness_residual(&self) -> f64 {
        completeness_residual_of(&self.transformers, self.dim())
    }

    /// Largest Frobenius distance between corresponding transformers.
    pub fn distance(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.transformers
            .iter()
            .zip(&other.transformers)
            .map(|(a, b)| a.distance(b))
            .fold(0.0, f64::max)
    }

    /// Largest entrywise difference between corresponding transformers.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.len(), other.len());
        self.transformers
            .iter()
            .zip(&other.transformers)
            .map(|(a, b)| a.max_abs_diff(b))
            .fold(0.0, f64::max)
    }
}

fn completeness_residual_of(transformers: &[ComplexMatrix], d: usize) -> f64 {
    let effects: Vec<ComplexMatrix> = transformers.iter().map(|m| m.adjoint().matmul(m)).collect();
    completeness(&effects, d)
}
