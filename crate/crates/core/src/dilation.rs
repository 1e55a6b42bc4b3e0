//! Unitary realization of an instrument.
//!
//! A [`DilationModel`] couples the system (`C^d1`) to an apparatus (`C^d2`)
//! prepared in a ready state `|r⟩`, evolves with a unitary `U₁₂`, and reads a
//! pointer basis `{|χ_i⟩}`. The transformers are the pointer-basis expansion
//! coefficients of the final state:
//!
//! `U₁₂ (|ψ⟩ ⊗ |r⟩) = Σ_i (M_i |ψ⟩) ⊗ |χ_i⟩`.
//!
//! [`dilate`] builds such a model from an instrument with `d2` equal to the
//! outcome count, ready state `|0⟩`, standard pointer basis and pointer
//! values `0, 1, …`. Only the columns `|e_j⟩ ⊗ |0⟩` of `U₁₂` are fixed by the
//! instrument; the rest come from the deterministic completion in
//! [`crate::matcore::extend_isometry`], so the round trip
//! through [`extract_instrument`] is the contract, not the unitary itself.

use alloc::vec::Vec;

// Float math for no_std builds; redundant once std is linked.
#[allow(unused_imports)]
use num_traits::Float;

use crate::matcore::{extend_isometry, inner, orthonormality_residual, ComplexMatrix, C64};
use crate::measurement::P_FLOOR;
use crate::types::{check_labels, Instrument, Label, StateVector};
use crate::{Error, Result};

#[derive(Debug, Clone)]
pub struct DilationModel {
    system_dim: usize,
    apparatus_dim: usize,
    ready_state: StateVector,
    pointer_basis: Vec<StateVector>,
    pointer_values: Vec<f64>,
    unitary: ComplexMatrix,
    labels: Vec<Label>,
    tol: f64,
}

impl DilationModel {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        system_dim: usize,
        apparatus_dim: usize,
        ready_state: StateVector,
        pointer_basis: Vec<StateVector>,
        pointer_values: Vec<f64>,
        unitary: ComplexMatrix,
        labels: Vec<Label>,
        tol: f64,
    ) -> Result<Self> {
        if system_dim == 0 || apparatus_dim == 0 {
            return Err(Error::InvalidModel("dimensions must be positive"));
        }
        if ready_state.dim() != apparatus_dim {
            return Err(Error::DimensionMismatch {
                expected: apparatus_dim,
                found: ready_state.dim(),
            });
        }
        if pointer_basis.len() != apparatus_dim {
            return Err(Error::InvalidModel(
                "pointer basis must span the apparatus space",
            ));
        }
        if let Some(v) = pointer_basis.iter().find(|v| v.dim() != apparatus_dim) {
            return Err(Error::DimensionMismatch {
                expected: apparatus_dim,
                found: v.dim(),
            });
        }
        let vs: Vec<Vec<C64>> = pointer_basis
            .iter()
            .map(|v| v.amplitudes().to_vec())
            .collect();
        let residual = orthonormality_residual(&vs);
        if residual > tol {
            return Err(Error::NotOrthonormal { residual });
        }
        if pointer_values.len() != apparatus_dim {
            return Err(Error::InvalidModel(
                "one pointer value per pointer state required",
            ));
        }
        for (i, v) in pointer_values.iter().enumerate() {
            if pointer_values[..i].contains(v) {
                return Err(Error::RepeatedEigenvalue { value: *v });
            }
        }
        check_labels(&labels, apparatus_dim)?;
        let n = unitary.dim()?;
        if n != system_dim * apparatus_dim {
            return Err(Error::DimensionMismatch {
                expected: system_dim * apparatus_dim,
                found: n,
            });
        }
        let residual = unitary.unitarity_residual();
        if residual > tol {
            return Err(Error::NotUnitary { residual });
        }
        Ok(Self {
            system_dim,
            apparatus_dim,
            ready_state,
            pointer_basis,
            pointer_values,
            unitary,
            labels,
            tol,
        })
    }

    /// Model with ready state `|0⟩`, standard pointer basis, pointer values
    /// `0..d2` and index labels.
    pub fn standard(
        system_dim: usize,
        apparatus_dim: usize,
        unitary: ComplexMatrix,
        tol: f64,
    ) -> Result<Self> {
        Self::new(
            system_dim,
            apparatus_dim,
            StateVector::basis(apparatus_dim, 0),
            (0..apparatus_dim)
                .map(|i| StateVector::basis(apparatus_dim, i))
                .collect(),
            (0..apparatus_dim).map(|i| i as f64).collect(),
            unitary,
            (0..apparatus_dim).map(Label::from_index).collect(),
            tol,
        )
    }

    pub fn system_dim(&self) -> usize {
        self.system_dim
    }

    pub fn apparatus_dim(&self) -> usize {
        self.apparatus_dim
    }

    pub fn ready_state(&self) -> &StateVector {
        &self.ready_state
    }

    pub fn pointer_basis(&self) -> &[StateVector] {
        &self.pointer_basis
    }

    pub fn pointer_values(&self) -> &[f64] {
        &self.pointer_values
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    /// Pointer observable `B₂ = Σ_i b_i |χ_i⟩⟨χ_i|`.
    pub fn pointer_observable(&self) -> ComplexMatrix {
        let d = self.apparatus_dim;
        self.pointer_basis
            .iter()
            .zip(&self.pointer_values)
            .fold(ComplexMatrix::zeros(d, d), |acc, (chi, &b)| {
                &acc + &chi.projector().scale_real(b)
            })
    }

    /// Expansion `Ψ = Σ_i s_i ⊗ |χ_i⟩`, returning the (unnormalized) `s_i`.
    pub fn pointer_components(&self, composite: &[C64]) -> Vec<Vec<C64>> {
        let (d1, d2) = (self.system_dim, self.apparatus_dim);
        self.pointer_basis
            .iter()
            .map(|chi| {
                (0..d1)
                    .map(|a| inner(chi.amplitudes(), &composite[a * d2..(a + 1) * d2]))
                    .collect()
            })
            .collect()
    }
}

/// Composite images `Σ_l (M_l |ψ⟩) ⊗ |l⟩` of system vectors.
pub fn isometry_images(inst: &Instrument, inputs: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let (d, k) = (inst.dim(), inst.len());
    inputs
        .iter()
        .map(|psi| {
            let parts: Vec<Vec<C64>> = inst.transformers().iter().map(|m| m.apply(psi)).collect();
            let mut out = alloc::vec![C64::new(0.0, 0.0); d * k];
            for (l, part) in parts.iter().enumerate() {
                for (a, &z) in part.iter().enumerate() {
                    out[a * k + l] = z;
                }
            }
            out
        })
        .collect()
}

/// Builds a composite unitary realizing `inst`.
///
/// Fails with [`Error::CompletenessViolation`] when the images of the system
/// basis are not orthonormal within `tol`, which happens exactly when
/// `Σ M_i†M_i ≠ 1`.
pub fn dilate(inst: &Instrument, tol: f64) -> Result<DilationModel> {
    let (d, k) = (inst.dim(), inst.len());
    let basis: Vec<Vec<C64>> = (0..d)
        .map(|j| StateVector::basis(d, j).into_amplitudes())
        .collect();
    let images = isometry_images(inst, &basis);
    let residual = orthonormality_residual(&images);
    if residual > tol {
        return Err(Error::CompletenessViolation { residual });
    }
    let columns: Vec<Vec<C64>> = (0..d)
        .map(|j| StateVector::basis(d * k, j * k).into_amplitudes())
        .collect();
    let unitary = extend_isometry(&columns, &images, d * k, tol.max(residual))?;
    DilationModel::new(
        d,
        k,
        StateVector::basis(k, 0),
        (0..k).map(|i| StateVector::basis(k, i)).collect(),
        (0..k).map(|i| i as f64).collect(),
        unitary,
        inst.labels().to_vec(),
        tol,
    )
}

/// Reads `(M_i)_{ab} = (⟨a| ⊗ ⟨χ_i|) U₁₂ (|b⟩ ⊗ |r⟩)` off the model.
pub fn extract_instrument(model: &DilationModel) -> Result<Instrument> {
    let d1 = model.system_dim;
    let k = model.apparatus_dim;
    let mut transformers = alloc::vec![ComplexMatrix::zeros(d1, d1); k];
    for b in 0..d1 {
        let input = StateVector::basis(d1, b).tensor(&model.ready_state);
        let out = model.unitary.apply(input.amplitudes());
        for (i, s) in model.pointer_components(&out).into_iter().enumerate() {
            for (a, z) in s.into_iter().enumerate() {
                transformers[i][(a, b)] = z;
            }
        }
    }
    Instrument::new(transformers, model.labels.clone(), model.tol)
}

/// `U₁₂ (|ψ⟩ ⊗ |r⟩)`
pub fn final_state(model: &DilationModel, psi: &StateVector) -> Result<StateVector> {
    if psi.dim() != model.system_dim {
        return Err(Error::DimensionMismatch {
            expected: model.system_dim,
            found: psi.dim(),
        });
    }
    let input = psi.tensor(&model.ready_state);
    StateVector::new(model.unitary.apply(input.amplitudes()), model.tol)
}

/// Projects the pointer onto `|χ_i⟩` and returns the probability and the
/// renormalized system factor.
pub fn read_pointer(
    model: &DilationModel,
    composite: &StateVector,
    outcome: usize,
) -> Result<(f64, StateVector)> {
    let n = model.system_dim * model.apparatus_dim;
    if composite.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: composite.dim(),
        });
    }
    if outcome >= model.apparatus_dim {
        return Err(Error::IndexOutOfRange {
            index: outcome,
            len: model.apparatus_dim,
        });
    }
    let chi = &model.pointer_basis[outcome];
    let system: Vec<C64> = (0..model.system_dim)
        .map(|a| {
            let d2 = model.apparatus_dim;
            inner(
                chi.amplitudes(),
                &composite.amplitudes()[a * d2..(a + 1) * d2],
            )
        })
        .collect();
    let probability: f64 = system.iter().map(|z| z.norm_sqr()).sum();
    if probability <= P_FLOOR {
        return Err(Error::ZeroProbabilityOutcome {
            label: model.labels[outcome].as_str().into(),
            probability,
        });
    }
    let post = StateVector::normalized(system)?;
    // (1 ⊗ |χ⟩⟨χ|) Ψ factorizes as s ⊗ χ.
    debug_assert!({
        let projected: Vec<C64> = {
            let proj = crate::matcore::tensor(
                &ComplexMatrix::identity(model.system_dim),
                &chi.projector(),
            );
            proj.apply(composite.amplitudes())
        };
        let rebuilt = post.tensor(chi);
        let s = probability.sqrt();
        projected
            .iter()
            .zip(rebuilt.amplitudes())
            .all(|(a, b)| (a - b * s).norm() < 1e-9)
    });
    Ok((probability.min(1.0), post))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery::{self, Axis};
    use crate::matcore::tensor;
    use crate::DEFAULT_TOL;
    use alloc::vec;

    fn plus() -> StateVector {
        StateVector::normalized(vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]).unwrap()
    }

    #[test]
    fn z_basis_dilation_is_cnot_on_prescribed_columns() {
        let model = dilate(&gallery::z_basis_instrument(), DEFAULT_TOL).unwrap();
        assert_eq!(model.apparatus_dim(), 2);
        for b in 0..2 {
            let input = StateVector::basis(2, b).tensor(&StateVector::basis(2, 0));
            let out = model.unitary().apply(input.amplitudes());
            let expected = StateVector::basis(2, b).tensor(&StateVector::basis(2, b));
            assert!(out
                .iter()
                .zip(expected.amplitudes())
                .all(|(x, y)| (x - y).norm() < 1e-15));
        }
        // The deterministic completion happens to reproduce CNOT exactly.
        assert!(model.unitary().approx_eq(&gallery::cnot(), 1e-15));
    }

    #[test]
    fn single_unitary_dilation() {
        let u = gallery::pauli(Axis::Y);
        let inst = Instrument::indexed(vec![u.clone()], DEFAULT_TOL).unwrap();
        let model = dilate(&inst, DEFAULT_TOL).unwrap();
        assert_eq!(model.apparatus_dim(), 1);
        assert!(model
            .unitary()
            .approx_eq(&tensor(&u, &ComplexMatrix::identity(1)), 1e-15));
        let psi = plus();
        let fin = final_state(&model, &psi).unwrap();
        let expected = u.apply(psi.amplitudes());
        assert!(fin
            .amplitudes()
            .iter()
            .zip(&expected)
            .all(|(a, b)| (a - b).norm() < 1e-15));
        let (p, post) = read_pointer(&model, &fin, 0).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert!(post.distance_up_to_phase(&StateVector::normalized(expected).unwrap()) < 1e-15);
    }

    #[test]
    fn corrupted_instrument_rejected() {
        let bad = Instrument::indexed(
            vec![
                ComplexMatrix::from_diag(&[1.0, 0.0]),
                ComplexMatrix::from_diag(&[0.0, 0.9]),
            ],
            0.5,
        )
        .unwrap();
        assert!(matches!(
            dilate(&bad, DEFAULT_TOL),
            Err(Error::CompletenessViolation { .. })
        ));
    }

    #[test]
    fn identity_coupling_never_moves_pointer() {
        let model = DilationModel::standard(2, 3, ComplexMatrix::identity(6), DEFAULT_TOL).unwrap();
        let inst = extract_instrument(&model).unwrap();
        assert!(inst
            .transformer(0)
            .approx_eq(&ComplexMatrix::identity(2), 0.0));
        assert!(inst
            .transformer(1)
            .approx_eq(&ComplexMatrix::zeros(2, 2), 0.0));
        assert!(inst
            .transformer(2)
            .approx_eq(&ComplexMatrix::zeros(2, 2), 0.0));
    }

    #[test]
    fn cnot_extracts_z_basis_projectors() {
        let model = DilationModel::standard(2, 2, gallery::cnot(), DEFAULT_TOL).unwrap();
        let inst = extract_instrument(&model).unwrap();
        assert!(inst
            .transformer(0)
            .approx_eq(&ComplexMatrix::from_diag(&[1.0, 0.0]), 0.0));
        assert!(inst
            .transformer(1)
            .approx_eq(&ComplexMatrix::from_diag(&[0.0, 1.0]), 0.0));
    }

    #[test]
    fn final_state_and_pointer_reading() {
        let model = dilate(&gallery::z_basis_instrument(), DEFAULT_TOL).unwrap();
        let fin = final_state(&model, &StateVector::basis(2, 0)).unwrap();
        assert_eq!(fin.amplitudes()[0], C64::new(1.0, 0.0));

        let fin = final_state(&model, &plus()).unwrap();
        let s = 0.5f64.sqrt();
        let bell = [s, 0.0, 0.0, s];
        assert!(fin
            .amplitudes()
            .iter()
            .zip(bell)
            .all(|(a, b)| (a - C64::new(b, 0.0)).norm() < 1e-15));
        let (p, post) = read_pointer(&model, &fin, 0).unwrap();
        assert!((p - 0.5).abs() < 1e-15);
        assert!(post.distance_up_to_phase(&StateVector::basis(2, 0)) < 1e-15);

        let fin0 = final_state(&model, &StateVector::basis(2, 0)).unwrap();
        assert!(matches!(
            read_pointer(&model, &fin0, 1),
            Err(Error::ZeroProbabilityOutcome { .. })
        ));
    }

    #[test]
    fn model_validation() {
        let tol = DEFAULT_TOL;
        assert!(matches!(
            DilationModel::standard(2, 2, ComplexMatrix::from_diag(&[1.0, 1.0, 1.0, 0.5]), tol),
            Err(Error::NotUnitary { .. })
        ));
        assert!(matches!(
            DilationModel::standard(2, 2, ComplexMatrix::identity(6), tol),
            Err(Error::DimensionMismatch { .. })
        ));
        let bad_basis = vec![StateVector::basis(2, 0), StateVector::basis(2, 0)];
        assert!(matches!(
            DilationModel::new(
                2,
                2,
                StateVector::basis(2, 0),
                bad_basis,
                vec![0.0, 1.0],
                ComplexMatrix::identity(4),
                vec!["0".into(), "1".into()],
                tol
            ),
            Err(Error::NotOrthonormal { .. })
        ));
    }
}
