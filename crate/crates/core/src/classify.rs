//! Ordinary / repeatable / ideal classification of instrument outcomes.
//!
//! An outcome with transformer `M = UH` (polar form) is
//!
//! - *ordinary* when `M†M` is a projector `P`, equivalently `H = P`;
//! - *repeatable* (for ordinary outcomes) when `PM = M`, equivalently when
//!   `U` maps `range(P)` into itself, i.e. `P^⊥ U P = 0`;
//! - part of an *ideal* instrument when every `M_i = P_i`.
//!
//! Both repeatability criteria are evaluated and must agree. Ideality is
//! decided by `‖M_i − P_i‖` directly, because `U` is only determined on
//! `range(P_i)`.

use alloc::format;
use alloc::vec::Vec;
use core::fmt;

use crate::matcore::{
    complete_orthonormal, polar_factorize, projector_basis, ComplexMatrix, PolarFactors,
};
use crate::types::{Instrument, Label, Observable};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct OutcomeClassification {
    pub label: Label,
    pub is_ordinary: bool,
    /// `P_i = H_i` when the outcome is ordinary.
    pub projector: Option<ComplexMatrix>,
    /// Repeatability verdict; only defined for ordinary outcomes.
    pub is_repeatable: Option<bool>,
    pub polar: PolarFactors,
    /// `‖H² − H‖`
    pub projector_residual: f64,
    /// `‖M − MP‖`, which vanishes for every ordinary outcome.
    pub right_residual: Option<f64>,
    /// `‖PM − M‖`
    pub left_residual: Option<f64>,
    /// `‖P^⊥ U P‖`
    pub invariance_residual: Option<f64>,
    /// `‖UP − PU‖`
    pub commutator_residual: Option<f64>,
    /// `‖M − P‖`
    pub luders_distance: Option<f64>,
    /// A deciding residual lies within a factor of ten of the tolerance.
    pub borderline: bool,
}

impl OutcomeClassification {
    pub fn projector_rank(&self) -> Option<usize> {
        self.projector.as_ref().map(|p| {
            let t = p.trace().re;
            if t <= 0.0 {
                0
            } else {
                (t + 0.5) as usize
            }
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum InstrumentKind {
    IdealOrdinary,
    RepeatableOrdinary,
    NonrepeatableOrdinary,
    MixedRepeatability,
    Generalized,
}

impl InstrumentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::IdealOrdinary => "IdealOrdinary",
            Self::RepeatableOrdinary => "RepeatableOrdinary",
            Self::NonrepeatableOrdinary => "NonrepeatableOrdinary",
            Self::MixedRepeatability => "MixedRepeatability",
            Self::Generalized => "Generalized",
        }
    }
}

impl fmt::Display for InstrumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone)]
pub struct InstrumentClassification {
    pub outcomes: Vec<OutcomeClassification>,
    pub kind: InstrumentKind,
    /// Observable measured by an all-ordinary instrument. Eigenvalues are the
    /// numeric labels when every label parses as a distinct number, and the
    /// outcome indices otherwise.
    pub observable: Option<Observable>,
    /// `‖Σ P_i − 1‖` for all-ordinary instruments.
    pub resolution_residual: Option<f64>,
}

fn borderline(residual: f64, tol: f64) -> bool {
    residual > tol / 10.0 && residual <= tol * 10.0
}

/// Classifies a single state transformer.
pub fn classify_outcome(
    m: &ComplexMatrix,
    label: Label,
    tol: f64,
) -> Result<OutcomeClassification> {
    let polar = polar_factorize(m)?;
    let h = &polar.positive;
    let projector_residual = h.idempotence_residual();
    let is_ordinary = projector_residual <= tol;
    let mut flagged = borderline(projector_residual, tol);

    if !is_ordinary {
        return Ok(OutcomeClassification {
            label,
            is_ordinary,
            projector: None,
            is_repeatable: None,
            polar,
            projector_residual,
            right_residual: None,
            left_residual: None,
            invariance_residual: None,
            commutator_residual: None,
            luders_distance: None,
            borderline: flagged,
        });
    }

    let d = m.rows();
    let p = h.clone();
    let p_perp = &ComplexMatrix::identity(d) - &p;
    let u = &polar.unitary;

    let right_residual = m.distance(&m.matmul(&p));
    let left_residual = p.matmul(m).distance(m);
    let invariance_residual = p_perp.matmul(u).matmul(&p).frobenius_norm();
    let commutator_residual = u.matmul(&p).distance(&p.matmul(u));
    let luders_distance = m.distance(&p);

    let algebraic = left_residual <= tol;
    let geometric = invariance_residual <= tol;
    if algebraic != geometric {
        if (left_residual - invariance_residual).abs() > tol {
            return Err(Error::ConsistencyFailure {
                label: label.as_str().into(),
                detail: format!(
                    "||PM - M|| = {left_residual:e} but ||P'UP|| = {invariance_residual:e}"
                ),
            });
        }
        flagged = true;
    }
    flagged |= borderline(left_residual, tol) || borderline(luders_distance, tol);

    Ok(OutcomeClassification {
        label,
        is_ordinary,
        projector: Some(p),
        is_repeatable: Some(algebraic),
        polar,
        projector_residual,
        right_residual: Some(right_residual),
        left_residual: Some(left_residual),
        invariance_residual: Some(invariance_residual),
        commutator_residual: Some(commutator_residual),
        luders_distance: Some(luders_distance),
        borderline: flagged,
    })
}

pub fn classify_instrument(inst: &Instrument, tol: f64) -> Result<InstrumentClassification> {
    let outcomes = inst
        .transformers()
        .iter()
        .zip(inst.labels())
        .map(|(m, l)| classify_outcome(m, l.clone(), tol))
        .collect::<Result<Vec<_>>>()?;

    if outcomes.iter().any(|o| !o.is_ordinary) {
        return Ok(InstrumentClassification {
            outcomes,
            kind: InstrumentKind::Generalized,
            observable: None,
            resolution_residual: None,
        });
    }

    let ideal = outcomes
        .iter()
        .all(|o| o.luders_distance.unwrap_or(f64::INFINITY) <= tol);
    let repeatable = outcomes
        .iter()
        .filter(|o| o.is_repeatable == Some(true))
        .count();
    let kind = if ideal {
        InstrumentKind::IdealOrdinary
    } else if repeatable == outcomes.len() {
        InstrumentKind::RepeatableOrdinary
    } else if repeatable == 0 {
        InstrumentKind::NonrepeatableOrdinary
    } else {
        InstrumentKind::MixedRepeatability
    };

    let projectors: Vec<ComplexMatrix> = outcomes
        .iter()
        .map(|o| o.projector.clone().expect("ordinary outcome"))
        .collect();
    let d = inst.dim();
    let resolution_residual = ComplexMatrix::sum(&projectors)
        .expect("nonempty")
        .distance(&ComplexMatrix::identity(d));

    let numeric: Option<Vec<f64>> = inst.labels().iter().map(Label::as_value).collect();
    let eigenvalues = match numeric {
        Some(vs) if vs.iter().enumerate().all(|(i, v)| !vs[..i].contains(v)) => vs,
        _ => (0..projectors.len()).map(|i| i as f64).collect(),
    };
    let slack = tol * (projectors.len() + 1) as f64;
    let observable = if resolution_residual <= slack {
        Observable::with_labels(eigenvalues, projectors, inst.labels().to_vec(), slack).ok()
    } else {
        None
    };

    Ok(InstrumentClassification {
        outcomes,
        kind,
        observable,
        resolution_residual: Some(resolution_residual),
    })
}

/// For a transformer with singular `H`, returns its range projector `Q`
/// followed by a chain of strictly larger projectors `E ⊇ Q` ending at the
/// identity, after checking `ME = M` and `QE = Q` for each.
///
/// This exhibits that `M = MP` alone does not single out a projector.
pub fn check_remark2(m: &ComplexMatrix, tol: f64) -> Result<Vec<ComplexMatrix>> {
    let polar = polar_factorize(m)?;
    if !polar.is_singular() {
        return Err(Error::NotSingular);
    }
    let d = m.rows();
    let q = polar.range_projector.clone();
    let range = projector_basis(&q);
    let null = complete_orthonormal(&range, d);

    let mut chain = Vec::with_capacity(null.len() + 1);
    chain.push(q.clone());
    let mut e = q.clone();
    for v in &null {
        e = &e + &ComplexMatrix::outer(v, v);
        chain.push(e.clone());
    }

    let scale = m.frobenius_norm().max(1.0);
    for e in &chain {
        let me = m.matmul(e).distance(m);
        let qe = q.matmul(e).distance(&q);
        if me > tol * scale || qe > tol {
            return Err(Error::ConsistencyFailure {
                label: "right-support chain".into(),
                detail: format!("||ME - M|| = {me:e}, ||QE - Q|| = {qe:e}"),
            });
        }
    }
    Ok(chain)
}
