//! Named operators and the two-spin example instruments.
//!
//! The two-spin examples live on `C² ⊗ C²` with the standard basis
//! `|↑↑⟩, |↑↓⟩, |↓↑⟩, |↓↓⟩` (first spin slow). The measured observable is
//! `σ_z ⊗ 1 = P_↑ − P_↓` with `P_n = |n⟩⟨n| ⊗ 1`, and the three instrument
//! families are
//!
//! - ideal: `M_n = P_n`
//! - repeatable: `M_n = (1 ⊗ U₂(n)) P_n`
//! - nonrepeatable: `M_n = U₁₂(n) P_n` with `U₁₂(n)` not of the form `1 ⊗ V`.

use alloc::string::String;
use alloc::vec;

use crate::matcore::{polar_factorize, tensor, ComplexMatrix, C64};
use crate::types::{instrument_from_povm, luders_instrument, Instrument, Label, Observable, Povm};
use crate::{Error, Result, DEFAULT_TOL};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

/// Pauli matrix in the standard representation.
pub fn pauli(axis: Axis) -> ComplexMatrix {
    let (o, l, i) = (C64::new(0.0, 0.0), C64::new(1.0, 0.0), C64::new(0.0, 1.0));
    let entries = match axis {
        Axis::X => vec![o, l, l, o],
        Axis::Y => vec![o, -i, i, o],
        Axis::Z => vec![l, o, o, -l],
    };
    ComplexMatrix::new(2, 2, entries).expect("2x2")
}

/// Two-qubit swap `|ab⟩ ↦ |ba⟩`.
pub fn swap() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (c / 2, c % 2);
        C64::new(if r == b * 2 + a { 1.0 } else { 0.0 }, 0.0)
    })
}

/// Controlled-NOT with the first qubit as control.
pub fn cnot() -> ComplexMatrix {
    ComplexMatrix::from_fn(4, 4, |r, c| {
        let (a, b) = (c / 2, c % 2);
        C64::new(if r == a * 2 + (a ^ b) { 1.0 } else { 0.0 }, 0.0)
    })
}

/// `(P_↑, P_↓)` on the two-spin space.
pub fn appendix_c_projectors() -> (ComplexMatrix, ComplexMatrix) {
    let id = ComplexMatrix::identity(2);
    (
        tensor(&ComplexMatrix::from_diag(&[1.0, 0.0]), &id),
        tensor(&ComplexMatrix::from_diag(&[0.0, 1.0]), &id),
    )
}

/// `σ_z ⊗ 1` with eigenvalues `[−1, +1]` and projectors `[P_↓, P_↑]`.
pub fn appendix_c_observable() -> Observable {
    let (up, down) = appendix_c_projectors();
    Observable::new(vec![-1.0, 1.0], vec![down, up], DEFAULT_TOL).expect("valid observable")
}

/// The three two-spin instrument families, outcomes ordered `(↑, ↓)`.
#[derive(Debug, Clone)]
pub enum AppendixC {
    Ideal,
    /// One unitary on the second spin per outcome.
    Repeatable {
        up: ComplexMatrix,
        down: ComplexMatrix,
    },
    /// One two-spin unitary per outcome.
    Nonrepeatable {
        up: ComplexMatrix,
        down: ComplexMatrix,
    },
}

impl AppendixC {
    /// `U₂(↑) = σ_x`, `U₂(↓) = 1`.
    pub fn repeatable_example() -> Self {
        Self::Repeatable {
            up: pauli(Axis::X),
            down: ComplexMatrix::identity(2),
        }
    }

    /// `U₁₂(↑) = U₁₂(↓) = swap`.
    pub fn nonrepeatable_example() -> Self {
        Self::Nonrepeatable {
            up: swap(),
            down: swap(),
        }
    }
}

fn check_unitary(u: &ComplexMatrix, dim: usize, tol: f64) -> Result<()> {
    if u.dim()? != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: u.rows(),
        });
    }
    let residual = u.unitarity_residual();
    if residual > tol {
        return Err(Error::NotUnitary { residual });
    }
    Ok(())
}

/// Whether a two-spin unitary is `1 ⊗ V` within `tol`, where `V` is the
/// unitary polar factor of the block `(⟨↑| ⊗ 1) U (|↑⟩ ⊗ 1)`.
///
/// Passing this test only rules out `1 ⊗ V`; unitaries such as `σ_z ⊗ 1` act
/// nontrivially on the first spin yet still commute with `P_n`.
pub fn is_identity_on_first(u: &ComplexMatrix, tol: f64) -> bool {
    let block = ComplexMatrix::from_fn(2, 2, |i, j| u[(i, j)]);
    let v = polar_factorize(&block).expect("square").unitary;
    u.distance(&tensor(&ComplexMatrix::identity(2), &v)) <= tol
}

pub fn appendix_c_instrument(variant: &AppendixC, tol: f64) -> Result<Instrument> {
    let (p_up, p_down) = appendix_c_projectors();
    let transformers = match variant {
        AppendixC::Ideal => vec![p_up, p_down],
        AppendixC::Repeatable { up, down } => {
            check_unitary(up, 2, tol)?;
            check_unitary(down, 2, tol)?;
            let id = ComplexMatrix::identity(2);
            vec![
                tensor(&id, up).matmul(&p_up),
                tensor(&id, down).matmul(&p_down),
            ]
        }
        AppendixC::Nonrepeatable { up, down } => {
            for u in [up, down] {
                check_unitary(u, 4, tol)?;
                if is_identity_on_first(u, tol) {
                    return Err(Error::NotLocallyNontrivial);
                }
            }
            vec![up.matmul(&p_up), down.matmul(&p_down)]
        }
    };
    Instrument::new(
        transformers,
        vec![Label::from("up"), Label::from("down")],
        tol,
    )
}

/// Measurement of `σ_z` in the computational-basis order: outcome `0` is
/// `|0⟩⟨0|`, outcome `1` is `|1⟩⟨1|`.
pub fn z_basis_instrument() -> Instrument {
    Instrument::indexed(
        vec![
            ComplexMatrix::from_diag(&[1.0, 0.0]),
            ComplexMatrix::from_diag(&[0.0, 1.0]),
        ],
        DEFAULT_TOL,
    )
    .expect("valid instrument")
}

/// Names accepted by [`preset`].
pub const PRESETS: &[&str] = &[
    "appendix-c-ideal",
    "appendix-c-repeatable",
    "appendix-c-nonrepeatable",
    "luders-x",
    "luders-z",
    "z-basis",
    "povm-half",
];

/// Instrument presets used by the command-line tool.
pub fn preset(name: &str) -> Option<Instrument> {
    let inst = match name {
        "appendix-c-ideal" => appendix_c_instrument(&AppendixC::Ideal, DEFAULT_TOL).ok()?,
        "appendix-c-repeatable" => {
            appendix_c_instrument(&AppendixC::repeatable_example(), DEFAULT_TOL).ok()?
        }
        "appendix-c-nonrepeatable" => {
            appendix_c_instrument(&AppendixC::nonrepeatable_example(), DEFAULT_TOL).ok()?
        }
        "luders-x" => luders_instrument(&Observable::from_matrix(&pauli(Axis::X)).ok()?),
        "luders-z" => luders_instrument(&Observable::from_matrix(&pauli(Axis::Z)).ok()?),
        "z-basis" => z_basis_instrument(),
        "povm-half" => {
            let half = ComplexMatrix::identity(2).scale_real(0.5);
            let povm = Povm::indexed(vec![half.clone(), half], DEFAULT_TOL).ok()?;
            instrument_from_povm(&povm, None).ok()?
        }
        _ => return None,
    };
    Some(inst)
}

/// Comma-separated preset names, for error messages.
pub fn preset_names() -> String {
    PRESETS.join(", ")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classify::{classify_instrument, InstrumentKind};

    #[test]
    fn pauli_matrices() {
        assert_eq!(pauli(Axis::Z), ComplexMatrix::from_diag(&[1.0, -1.0]));
        assert_eq!(
            pauli(Axis::X),
            ComplexMatrix::from_real(2, &[0.0, 1.0, 1.0, 0.0])
        );
        let y = pauli(Axis::Y);
        assert_eq!(y[(0, 1)], C64::new(0.0, -1.0));
        assert_eq!(y[(1, 0)], C64::new(0.0, 1.0));
        // σ_x σ_y = i σ_z
        let xy = pauli(Axis::X).matmul(&y);
        assert!(xy.approx_eq(&pauli(Axis::Z).scale(C64::new(0.0, 1.0)), 0.0));
    }

    #[test]
    fn swap_and_cnot() {
        assert!(swap()
            .matmul(&swap())
            .approx_eq(&ComplexMatrix::identity(4), 0.0));
        // swap |↑↓⟩ = |↓↑⟩: column 1 has its one in row 2.
        assert_eq!(swap()[(2, 1)], C64::new(1.0, 0.0));
        assert_eq!(cnot()[(3, 2)], C64::new(1.0, 0.0));
        assert_eq!(cnot()[(0, 0)], C64::new(1.0, 0.0));
    }

    #[test]
    fn observable_is_z_tensor_identity() {
        let obs = appendix_c_observable();
        assert_eq!(obs.eigenvalues(), &[-1.0, 1.0]);
        let sum = &obs.projectors()[0] + &obs.projectors()[1];
        assert!(sum.approx_eq(&ComplexMatrix::identity(4), 0.0));
        let diff = &obs.projectors()[1] - &obs.projectors()[0];
        assert!(diff.approx_eq(&tensor(&pauli(Axis::Z), &ComplexMatrix::identity(2)), 0.0));
        assert!(obs.matrix().approx_eq(&diff, 0.0));
    }

    #[test]
    fn families_classify_as_stated() {
        let kinds = [
            (AppendixC::Ideal, InstrumentKind::IdealOrdinary),
            (
                AppendixC::repeatable_example(),
                InstrumentKind::RepeatableOrdinary,
            ),
            (
                AppendixC::nonrepeatable_example(),
                InstrumentKind::NonrepeatableOrdinary,
            ),
        ];
        let (up, down) = appendix_c_projectors();
        for (variant, kind) in kinds {
            let inst = appendix_c_instrument(&variant, DEFAULT_TOL).unwrap();
            assert!(inst.completeness_residual() < 1e-14);
            let povm = crate::types::povm_of(&inst);
            assert!(povm.effects()[0].approx_eq(&up, 1e-14));
            assert!(povm.effects()[1].approx_eq(&down, 1e-14));
            assert_eq!(classify_instrument(&inst, DEFAULT_TOL).unwrap().kind, kind);
        }
    }

    #[test]
    fn local_unitaries_rejected_for_nonrepeatable() {
        let local = tensor(&ComplexMatrix::identity(2), &pauli(Axis::Y));
        let variant = AppendixC::Nonrepeatable {
            up: local,
            down: swap(),
        };
        assert_eq!(
            appendix_c_instrument(&variant, DEFAULT_TOL).unwrap_err(),
            Error::NotLocallyNontrivial
        );
        assert!(!is_identity_on_first(&swap(), DEFAULT_TOL));
        assert!(!is_identity_on_first(&cnot(), DEFAULT_TOL));
    }

    #[test]
    fn factorization_test_is_not_sufficient_for_nonrepeatability() {
        // σ_z ⊗ 1 is not 1 ⊗ V, but it commutes with P_n.
        let zi = tensor(&pauli(Axis::Z), &ComplexMatrix::identity(2));
        let variant = AppendixC::Nonrepeatable {
            up: zi.clone(),
            down: zi,
        };
        let inst = appendix_c_instrument(&variant, DEFAULT_TOL).unwrap();
        let kind = classify_instrument(&inst, DEFAULT_TOL).unwrap().kind;
        assert_eq!(kind, InstrumentKind::RepeatableOrdinary);
    }

    #[test]
    fn non_unitary_rejected() {
        let variant = AppendixC::Repeatable {
            up: ComplexMatrix::from_diag(&[1.0, 0.5]),
            down: ComplexMatrix::identity(2),
        };
        assert!(matches!(
            appendix_c_instrument(&variant, DEFAULT_TOL),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn presets_resolve() {
        for name in PRESETS {
            assert!(preset(name).is_some(), "{name}");
        }
        assert!(preset("nope").is_none());
    }
}
