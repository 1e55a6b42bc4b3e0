use alloc::vec::Vec;

use super::{Instrument, Observable, Povm};
use crate::matcore::{positive_sqrt, projector_basis, ComplexMatrix};
use crate::{Error, Result};

/// Lüders instrument: the transformers are the eigenprojectors, labelled by
/// the observable's outcome labels.
pub fn luders_instrument(obs: &Observable) -> Instrument {
    Instrument::from_parts_unchecked(
        obs.projectors().to_vec(),
        obs.labels().to_vec(),
        crate::DEFAULT_TOL,
    )
}

/// Effects `Π_i = M_i†M_i` of an instrument.
pub fn povm_of(inst: &Instrument) -> Povm {
    let effects = inst
        .transformers()
        .iter()
        .map(|m| m.adjoint().matmul(m).hermitian_part())
        .collect();
    Povm::from_parts_unchecked(effects, inst.labels().to_vec(), inst.tol())
}

/// Transformers `M_i = U_i Π_i^{1/2}` realizing a POVM; `unitaries` defaults
/// to all identities.
pub fn instrument_from_povm(
    povm: &Povm,
    unitaries: Option<&[ComplexMatrix]>,
) -> Result<Instrument> {
    let tol = povm.tol();
    let d = povm.dim();
    if let Some(us) = unitaries {
        if us.len() != povm.len() {
            return Err(Error::DimensionMismatch {
                expected: povm.len(),
                found: us.len(),
            });
        }
        for u in us {
            if u.dim()? != d {
                return Err(Error::DimensionMismatch {
                    expected: d,
                    found: u.rows(),
                });
            }
            let residual = u.unitarity_residual();
            if residual > tol {
                return Err(Error::NotUnitary { residual });
            }
        }
    }
    let mut transformers = Vec::with_capacity(povm.len());
    for (i, effect) in povm.effects().iter().enumerate() {
        let root = positive_sqrt(effect, tol)?;
        transformers.push(match unitaries {
            Some(us) => us[i].matmul(&root),
            None => root,
        });
    }
    // Completeness is inherited from the POVM up to roundoff in the roots.
    Instrument::new(transformers, povm.labels().to_vec(), tol.max(1e-12) * 4.0)
}

/// A nondegenerate observable refining a coarser one.
#[derive(Debug, Clone)]
pub struct Refinement {
    pub observable: Observable,
    /// `parents[j]` is the index of the coarse eigenspace containing fine projector `j`.
    pub parents: Vec<usize>,
    coarse_values: Vec<f64>,
}

impl Refinement {
    /// The function `f` with `M = f(M')`, evaluated at fine outcome `j`.
    pub fn coarse_value(&self, j: usize) -> f64 {
        self.coarse_values[self.parents[j]]
    }

    /// Sum of the fine projectors lying in coarse eigenspace `i`.
    pub fn grouped_projector(&self, i: usize) -> ComplexMatrix {
        let d = self.observable.dim();
        self.parents
            .iter()
            .zip(self.observable.projectors())
            .filter(|(&p, _)| p == i)
            .fold(ComplexMatrix::zeros(d, d), |acc, (_, q)| &acc + q)
    }
}

/// Splits every degenerate eigenvalue `m_i` into distinct values
/// `m_i + j·δ`, one per vector of an orthonormal basis of the eigenspace.
///
/// `δ = min_gap / (2·max_multiplicity)`, or 1 for an observable with a single
/// eigenvalue, so refined values never cross into another cluster. The basis
/// of each eigenspace is the eigensolver's basis for its projector.
pub fn maximal_refinement(obs: &Observable) -> Refinement {
    let bases: Vec<_> = obs.projectors().iter().map(projector_basis).collect();

    let max_mult = bases.iter().map(Vec::len).max().unwrap_or(1).max(1);
    let values = obs.eigenvalues();
    let mut min_gap = f64::INFINITY;
    for (i, a) in values.iter().enumerate() {
        for b in &values[i + 1..] {
            min_gap = min_gap.min((a - b).abs());
        }
    }
    let delta = if min_gap.is_finite() {
        min_gap / (2.0 * max_mult as f64)
    } else {
        1.0
    };

    let mut eigenvalues = Vec::new();
    let mut projectors = Vec::new();
    let mut parents = Vec::new();
    for (i, basis) in bases.iter().enumerate() {
        for (j, v) in basis.iter().enumerate() {
            eigenvalues.push(values[i] + j as f64 * delta);
            projectors.push(ComplexMatrix::outer(v, v));
            parents.push(i);
        }
    }
    Refinement {
        observable: Observable::from_parts_unchecked(eigenvalues, projectors),
        parents,
        coarse_values: values.to_vec(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::DEFAULT_TOL;
    use alloc::vec;

    fn sigma_z() -> Observable {
        Observable::from_matrix(&gallery::pauli(gallery::Axis::Z)).unwrap()
    }

    #[test]
    fn luders_sigma_z() {
        let inst = luders_instrument(&sigma_z());
        assert_eq!(inst.labels()[0].as_str(), "-1");
        assert!(inst
            .transformer(0)
            .approx_eq(&ComplexMatrix::from_diag(&[0.0, 1.0]), 1e-15));
        assert!(inst
            .transformer(1)
            .approx_eq(&ComplexMatrix::from_diag(&[1.0, 0.0]), 1e-15));
    }

    #[test]
    fn luders_trivial_observable() {
        let obs = Observable::from_matrix(&ComplexMatrix::identity(3).scale_real(2.5)).unwrap();
        let inst = luders_instrument(&obs);
        assert_eq!(inst.len(), 1);
        assert!(inst
            .transformer(0)
            .approx_eq(&ComplexMatrix::identity(3), 1e-14));
    }

    #[test]
    fn luders_two_spin_example() {
        let inst = luders_instrument(&gallery::appendix_c_observable());
        let down = ComplexMatrix::from_diag(&[0.0, 0.0, 1.0, 1.0]);
        let up = ComplexMatrix::from_diag(&[1.0, 1.0, 0.0, 0.0]);
        assert!(inst.transformer(0).approx_eq(&down, 1e-15));
        assert!(inst.transformer(1).approx_eq(&up, 1e-15));
    }

    #[test]
    fn povm_of_examples() {
        let obs = sigma_z();
        let povm = povm_of(&luders_instrument(&obs));
        for (e, p) in povm.effects().iter().zip(obs.projectors()) {
            assert!(e.approx_eq(p, 1e-15));
        }
        let u = gallery::pauli(gallery::Axis::Y);
        let single = Instrument::indexed(vec![u], DEFAULT_TOL).unwrap();
        assert!(povm_of(&single).effects()[0].approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn projector_povm_gives_luders() {
        let obs = sigma_z();
        let povm = povm_of(&luders_instrument(&obs));
        let inst = instrument_from_povm(&povm, None).unwrap();
        for (m, p) in inst.transformers().iter().zip(obs.projectors()) {
            assert!(m.approx_eq(p, 1e-14));
        }
    }

    #[test]
    fn scalar_povm_by_hand() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let povm = Povm::indexed(vec![half.clone(), half], DEFAULT_TOL).unwrap();
        let s = 0.5f64.sqrt();
        let inst = instrument_from_povm(&povm, None).unwrap();
        for m in inst.transformers() {
            assert!(m.approx_eq(&ComplexMatrix::identity(2).scale_real(s), 1e-15));
        }
        // With unitaries {1, σ_x}: M = {s·1, s·σ_x}, and (s σ_x)†(s σ_x) = ½·1.
        let sx = gallery::pauli(gallery::Axis::X);
        let us = [ComplexMatrix::identity(2), sx.clone()];
        let inst = instrument_from_povm(&povm, Some(&us)).unwrap();
        assert!(inst.transformer(1).approx_eq(&sx.scale_real(s), 1e-15));
        assert!(povm_of(&inst).distance(&povm) < 1e-15);
    }

    #[test]
    fn non_unitary_rejected() {
        let half = ComplexMatrix::identity(2).scale_real(0.5);
        let povm = Povm::indexed(vec![half.clone(), half.clone()], DEFAULT_TOL).unwrap();
        let us = [ComplexMatrix::identity(2), half];
        assert!(matches!(
            instrument_from_povm(&povm, Some(&us)),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn refinement_of_nondegenerate_is_same_projectors() {
        let obs = sigma_z();
        let r = maximal_refinement(&obs);
        assert_eq!(r.observable.len(), 2);
        for (a, b) in r.observable.projectors().iter().zip(obs.projectors()) {
            assert!(a.approx_eq(b, 1e-15));
        }
        assert_eq!(r.observable.eigenvalues(), obs.eigenvalues());
    }

    #[test]
    fn refinement_of_scalar_observable() {
        let obs = Observable::from_matrix(&ComplexMatrix::identity(2).scale_real(3.0)).unwrap();
        let r = maximal_refinement(&obs);
        assert_eq!(r.observable.eigenvalues(), &[3.0, 4.0]);
        assert!(r.observable.is_nondegenerate());
        assert!(r
            .grouped_projector(0)
            .approx_eq(&ComplexMatrix::identity(2), 1e-14));
        assert_eq!(r.coarse_value(1), 3.0);
    }

    #[test]
    fn refinement_of_two_spin_observable() {
        let obs = gallery::appendix_c_observable();
        let r = maximal_refinement(&obs);
        assert_eq!(r.observable.len(), 4);
        assert!(r.observable.is_nondegenerate());
        // δ = 2 / (2·2) = 0.5
        assert_eq!(r.observable.eigenvalues(), &[-1.0, -0.5, 1.0, 1.5]);
        for i in 0..2 {
            assert!(r
                .grouped_projector(i)
                .approx_eq(&obs.projectors()[i], 1e-14));
        }
        // Revalidates as an observable.
        let o = &r.observable;
        assert!(Observable::new(
            o.eigenvalues().to_vec(),
            o.projectors().to_vec(),
            DEFAULT_TOL
        )
        .is_ok());
    }
}
