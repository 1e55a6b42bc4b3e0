//! Discrete quantum measurements on finite-dimensional state spaces.
//!
//! The crate models a measurement by its *state transformers* (Kraus
//! operators) `M_i`, one per outcome, subject to the completeness relation
//! `Σ M_i†M_i = 1`. On top of that representation it provides:
//!
//! - [`matcore`]: dense complex matrices, a Hermitian eigensolver with
//!   degeneracy grouping, positive square roots, polar factorization and
//!   deterministic unitary completion of partial isometries.
//! - [`types`]: validated states, observables, POVMs and instruments, plus the
//!   canonical builders (Lüders instrument, POVM to instrument, maximal
//!   refinement of an observable).
//! - [`measurement`]: Born probabilities, selective and nonselective updates,
//!   seeded sampling and sharp-value checks.
//! - [`classify`]: decides whether each outcome is an ordinary measurement,
//!   whether it is repeatable, and whether the instrument is ideal, using
//!   both the algebraic criteria and the polar-factor criteria.
//! - [`dilation`]: the unitary (apparatus + pointer) realization of an
//!   instrument and the inverse extraction.
//! - [`gallery`]: Pauli matrices and the two-spin example instruments.
//! - [`random`]: seeded generators for random states, unitaries and
//!   instruments, used by property tests and the acceptance suite.
//!
//! The crate is `no_std` and only needs `alloc`.

#![no_std]

extern crate alloc;

pub mod classify;
pub mod dilation;
mod error;
pub mod gallery;
pub mod matcore;
pub mod measurement;
pub mod random;
pub mod types;

pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, PolarFactors, SpectralDecomposition, C64};
pub use types::{DensityOperator, Instrument, Label, Observable, Povm, StateVector};

/// Default comparison tolerance, applied to Frobenius norms of residuals.
pub const DEFAULT_TOL: f64 = 1e-9;
