//! Validated states, observables, POVMs and instruments.
//!
//! Constructors check their invariants against an explicit tolerance and the
//! value remembers it; downstream operations (normalization checks,
//! renormalization of probabilities) reuse the tolerance the object was
//! validated with.

mod builders;
mod instrument;
mod observable;
mod state;

use alloc::string::{String, ToString};
use core::fmt;

pub use builders::{
    instrument_from_povm, luders_instrument, maximal_refinement, povm_of, Refinement,
};
pub use instrument::{Instrument, Povm};
pub use observable::Observable;
pub use state::{DensityOperator, StateVector};

/// Opaque outcome identifier.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(String);

impl Label {
    pub fn new(s: impl Into<String>) -> Self {
        Self(s.into())
    }

    /// Signed decimal form of an eigenvalue, e.g. `+1`, `-1`, `+0.5`.
    pub fn from_value(v: f64) -> Self {
        Self(alloc::format!("{v:+}"))
    }

    pub fn from_index(i: usize) -> Self {
        Self(i.to_string())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The label read back as a real number, if it is one.
    pub fn as_value(&self) -> Option<f64> {
        self.0.parse().ok()
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Self(s.into())
    }
}

impl From<String> for Label {
    fn from(s: String) -> Self {
        Self(s)
    }
}

pub(crate) fn check_labels(labels: &[Label], expected: usize) -> crate::Result<()> {
    if labels.len() != expected {
        return Err(crate::Error::LabelCount {
            expected,
            found: labels.len(),
        });
    }
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(crate::Error::DuplicateLabel(l.0.clone()));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn value_labels() {
        assert_eq!(Label::from_value(1.0).as_str(), "+1");
        assert_eq!(Label::from_value(-1.0).as_str(), "-1");
        assert_eq!(Label::from_value(0.5).as_str(), "+0.5");
        assert_eq!(Label::from_value(-0.25).as_value(), Some(-0.25));
        assert_eq!(Label::from("up").as_value(), None);
    }

    #[test]
    fn duplicate_labels_rejected() {
        let ls = [Label::from("a"), Label::from("a")];
        assert!(matches!(
            check_labels(&ls, 2),
            Err(crate::Error::DuplicateLabel(_))
        ));
        assert!(matches!(
            check_labels(&ls, 3),
            Err(crate::Error::LabelCount { .. })
        ));
    }
}
