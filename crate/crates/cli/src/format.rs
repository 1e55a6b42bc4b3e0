//! JSON operator files.
//!
//! Every file is one object:
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "kind": "instrument",
//!   "dim": [2],
//!   "payload": [[[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [0.0, 0.0]]], ...],
//!   "labels": ["0", "1"],
//!   "metadata": {"source": "example"}
//! }
//! ```
//!
//! Complex numbers are `[re, im]` pairs and matrices are row-major arrays of
//! rows. The payload shape depends on `kind`:
//!
//! | kind        | dim        | payload                                           | values            |
//! |-------------|------------|---------------------------------------------------|-------------------|
//! | matrix      | `[r, c]`   | one matrix                                        |                   |
//! | state       | `[d]`      | one vector                                        |                   |
//! | density     | `[d]`      | one matrix                                        |                   |
//! | observable  | `[d]`      | list of eigenprojectors                           | eigenvalues       |
//! | povm        | `[d]`      | list of effects                                   |                   |
//! | instrument  | `[d]`      | list of transformers                              |                   |
//! | dilation    | `[d1, d2]` | `[U₁₂, pointer basis as columns, ready state as a column]` | pointer values |
//!
//! Floats are written in shortest round-trip form, so `load ∘ save` is
//! bit-exact.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use kraus::dilation::DilationModel;
use kraus::{
    ComplexMatrix, DensityOperator, Instrument, Label, Observable, Povm, StateVector, C64,
};
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: &str = "1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Kind {
    Matrix,
    State,
    Density,
    Observable,
    Povm,
    Instrument,
    Dilation,
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Kind::Matrix => "matrix",
            Kind::State => "state",
            Kind::Density => "density",
            Kind::Observable => "observable",
            Kind::Povm => "povm",
            Kind::Instrument => "instrument",
            Kind::Dilation => "dilation",
        };
        f.write_str(s)
    }
}

pub type Entry = [f64; 2];
pub type Rows = Vec<Vec<Entry>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Payload {
    Vector(Vec<Entry>),
    Matrix(Rows),
    Matrices(Vec<Rows>),
}

#[derive(Debug, thiserror::Error)]
pub enum FileError {
    #[error("cannot read or write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("malformed operator file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("unsupported schema version {0:?}")]
    Schema(String),
    #[error("expected kind {expected}, found {found}")]
    Kind { expected: String, found: Kind },
    #[error("payload inconsistent with dim: {0}")]
    Shape(String),
    #[error(transparent)]
    Invalid(#[from] kraus::Error),
}

type Result<T> = std::result::Result<T, FileError>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorFile {
    pub schema_version: String,
    pub kind: Kind,
    pub dim: Vec<usize>,
    pub payload: Payload,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub metadata: BTreeMap<String, String>,
}

fn encode_vec(v: &[C64]) -> Vec<Entry> {
    v.iter().map(|z| [z.re, z.im]).collect()
}

fn encode(m: &ComplexMatrix) -> Rows {
    (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| [m[(i, j)].re, m[(i, j)].im])
                .collect()
        })
        .collect()
}

fn decode_vec(v: &[Entry], dim: usize) -> Result<Vec<C64>> {
    if v.len() != dim {
        return Err(FileError::Shape(format!(
            "vector of length {} for dimension {dim}",
            v.len()
        )));
    }
    Ok(v.iter().map(|&[re, im]| C64::new(re, im)).collect())
}

fn decode(rows: &Rows, r: usize, c: usize) -> Result<ComplexMatrix> {
    if rows.len() != r || rows.iter().any(|row| row.len() != c) {
        return Err(FileError::Shape(format!("expected a {r}x{c} matrix")));
    }
    let data = rows
        .iter()
        .flatten()
        .map(|&[re, im]| C64::new(re, im))
        .collect();
    Ok(ComplexMatrix::new(r, c, data)?)
}

fn labels_of(labels: &[Label]) -> Option<Vec<String>> {
    Some(labels.iter().map(|l| l.as_str().to_owned()).collect())
}

impl OperatorFile {
    fn build(kind: Kind, dim: Vec<usize>, payload: Payload) -> Self {
        Self {
            schema_version: SCHEMA_VERSION.into(),
            kind,
            dim,
            payload,
            values: None,
            labels: None,
            metadata: BTreeMap::new(),
        }
    }

    pub fn with_metadata(mut self, key: &str, value: impl Into<String>) -> Self {
        self.metadata.insert(key.into(), value.into());
        self
    }

    pub fn from_matrix(m: &ComplexMatrix) -> Self {
        Self::build(
            Kind::Matrix,
            vec![m.rows(), m.cols()],
            Payload::Matrix(encode(m)),
        )
    }

    pub fn from_state(psi: &StateVector) -> Self {
        Self::build(
            Kind::State,
            vec![psi.dim()],
            Payload::Vector(encode_vec(psi.amplitudes())),
        )
    }

    pub fn from_density(rho: &DensityOperator) -> Self {
        Self::build(
            Kind::Density,
            vec![rho.dim()],
            Payload::Matrix(encode(rho.matrix())),
        )
    }

    pub fn from_observable(obs: &Observable) -> Self {
        let mut f = Self::build(
            Kind::Observable,
            vec![obs.dim()],
            Payload::Matrices(obs.projectors().iter().map(encode).collect()),
        );
        f.values = Some(obs.eigenvalues().to_vec());
        f.labels = labels_of(obs.labels());
        f
    }

    pub fn from_povm(povm: &Povm) -> Self {
        let mut f = Self::build(
            Kind::Povm,
            vec![povm.dim()],
            Payload::Matrices(povm.effects().iter().map(encode).collect()),
        );
        f.labels = labels_of(povm.labels());
        f
    }

    pub fn from_instrument(inst: &Instrument) -> Self {
        let mut f = Self::build(
            Kind::Instrument,
            vec![inst.dim()],
            Payload::Matrices(inst.transformers().iter().map(encode).collect()),
        );
        f.labels = labels_of(inst.labels());
        f
    }

    pub fn from_dilation(model: &DilationModel) -> Self {
        let d2 = model.apparatus_dim();
        let pointer =
            ComplexMatrix::from_fn(d2, d2, |a, i| model.pointer_basis()[i].amplitudes()[a]);
        let ready = ComplexMatrix::from_fn(d2, 1, |a, _| model.ready_state().amplitudes()[a]);
        let mut f = Self::build(
            Kind::Dilation,
            vec![model.system_dim(), d2],
            Payload::Matrices(vec![
                encode(model.unitary()),
                encode(&pointer),
                encode(&ready),
            ]),
        );
        f.values = Some(model.pointer_values().to_vec());
        f.labels = labels_of(model.labels());
        f
    }

    fn expect(&self, kinds: &[Kind]) -> Result<()> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(FileError::Schema(self.schema_version.clone()));
        }
        if !kinds.contains(&self.kind) {
            let expected = kinds
                .iter()
                .map(Kind::to_string)
                .collect::<Vec<_>>()
                .join(" or ");
            return Err(FileError::Kind {
                expected,
                found: self.kind,
            });
        }
        Ok(())
    }

    fn square_dim(&self) -> Result<usize> {
        match self.dim.as_slice() {
            [d] if *d > 0 => Ok(*d),
            other => Err(FileError::Shape(format!(
                "dim {other:?} should be a single positive integer"
            ))),
        }
    }

    fn single_matrix(&self, r: usize, c: usize) -> Result<ComplexMatrix> {
        match &self.payload {
            Payload::Matrix(rows) => decode(rows, r, c),
            _ => Err(FileError::Shape(format!(
                "{} payload must be one matrix",
                self.kind
            ))),
        }
    }

    fn matrices(&self, d: usize) -> Result<Vec<ComplexMatrix>> {
        match &self.payload {
            Payload::Matrices(ms) => ms.iter().map(|m| decode(m, d, d)).collect(),
            _ => Err(FileError::Shape(format!(
                "{} payload must be a list of matrices",
                self.kind
            ))),
        }
    }

    fn labels(&self) -> Option<Vec<Label>> {
        self.labels
            .as_ref()
            .map(|ls| ls.iter().map(|s| Label::new(s.as_str())).collect())
    }

    pub fn to_matrix(&self) -> Result<ComplexMatrix> {
        self.expect(&[Kind::Matrix])?;
        match self.dim.as_slice() {
            [r, c] => self.single_matrix(*r, *c),
            [d] => self.single_matrix(*d, *d),
            other => Err(FileError::Shape(format!(
                "dim {other:?} should be [rows, cols]"
            ))),
        }
    }

    pub fn to_state(&self, tol: f64) -> Result<StateVector> {
        self.expect(&[Kind::State])?;
        let d = self.square_dim()?;
        match &self.payload {
            Payload::Vector(v) => Ok(StateVector::new(decode_vec(v, d)?, tol)?),
            _ => Err(FileError::Shape("state payload must be one vector".into())),
        }
    }

    /// Reads a density file, or a state file as its projector.
    pub fn to_density(&self, tol: f64) -> Result<DensityOperator> {
        self.expect(&[Kind::Density, Kind::State])?;
        if self.kind == Kind::State {
            return Ok(self.to_state(tol)?.to_density());
        }
        let d = self.square_dim()?;
        Ok(DensityOperator::with_tol(self.single_matrix(d, d)?, tol)?)
    }

    pub fn to_observable(&self, tol: f64) -> Result<Observable> {
        self.expect(&[Kind::Observable])?;
        let d = self.square_dim()?;
        let projectors = self.matrices(d)?;
        let values = self
            .values
            .clone()
            .ok_or_else(|| FileError::Shape("observable needs eigenvalues in \"values\"".into()))?;
        Ok(match self.labels() {
            Some(labels) => Observable::with_labels(values, projectors, labels, tol)?,
            None => Observable::new(values, projectors, tol)?,
        })
    }

    pub fn to_povm(&self, tol: f64) -> Result<Povm> {
        self.expect(&[Kind::Povm])?;
        let d = self.square_dim()?;
        let effects = self.matrices(d)?;
        Ok(match self.labels() {
            Some(labels) => Povm::new(effects, labels, tol)?,
            None => Povm::indexed(effects, tol)?,
        })
    }

    pub fn to_instrument(&self, tol: f64) -> Result<Instrument> {
        self.expect(&[Kind::Instrument])?;
        let d = self.square_dim()?;
        let transformers = self.matrices(d)?;
        Ok(match self.labels() {
            Some(labels) => Instrument::new(transformers, labels, tol)?,
            None => Instrument::indexed(transformers, tol)?,
        })
    }

    pub fn to_dilation(&self, tol: f64) -> Result<DilationModel> {
        self.expect(&[Kind::Dilation])?;
        let (d1, d2) = match self.dim.as_slice() {
            [a, b] if *a > 0 && *b > 0 => (*a, *b),
            other => {
                return Err(FileError::Shape(format!(
                    "dim {other:?} should be [system, apparatus]"
                )))
            }
        };
        let Payload::Matrices(ms) = &self.payload else {
            return Err(FileError::Shape(
                "dilation payload must be [unitary, pointer basis, ready state]".into(),
            ));
        };
        let [u, pointer, ready] = ms.as_slice() else {
            return Err(FileError::Shape(
                "dilation payload must be [unitary, pointer basis, ready state]".into(),
            ));
        };
        let u = decode(u, d1 * d2, d1 * d2)?;
        let pointer = decode(pointer, d2, d2)?;
        let ready = decode(ready, d2, 1)?;
        let basis = (0..d2)
            .map(|i| StateVector::new(pointer.column(i), tol))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let values = self
            .values
            .clone()
            .unwrap_or_else(|| (0..d2).map(|i| i as f64).collect());
        let labels = self
            .labels()
            .unwrap_or_else(|| (0..d2).map(Label::from_index).collect());
        Ok(DilationModel::new(
            d1,
            d2,
            StateVector::new(ready.column(0), tol)?,
            basis,
            values,
            u,
            labels,
            tol,
        )?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("operator files always serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json() + "\n").map_err(|source| FileError::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use kraus::gallery;

    #[test]
    fn instrument_round_trip() {
        let inst = gallery::preset("appendix-c-repeatable").unwrap();
        let f = OperatorFile::from_instrument(&inst);
        let back = OperatorFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let inst2 = back.to_instrument(1e-9).unwrap();
        assert_eq!(inst2.max_abs_diff(&inst), 0.0);
        assert_eq!(inst2.labels(), inst.labels());
    }

    #[test]
    fn kind_mismatch_is_reported() {
        let f = OperatorFile::from_matrix(&ComplexMatrix::identity(2));
        let err = f.to_instrument(1e-9).unwrap_err();
        assert_eq!(err.to_string(), "expected kind instrument, found matrix");
    }

    #[test]
    fn shape_errors() {
        let mut f = OperatorFile::from_matrix(&ComplexMatrix::identity(2));
        f.dim = vec![3, 3];
        assert!(matches!(f.to_matrix(), Err(FileError::Shape(_))));
    }

    #[test]
    fn single_outcome_scalar_instrument() {
        let inst = Instrument::indexed(vec![ComplexMatrix::identity(1)], 1e-9).unwrap();
        let f = OperatorFile::from_json(&OperatorFile::from_instrument(&inst).to_json()).unwrap();
        assert_eq!(f.to_instrument(1e-9).unwrap().len(), 1);
    }
}
