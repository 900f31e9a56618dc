//! JSON formats for states and POVMs.
//!
//! Mixed states: `{"dims":[2,2],"matrix":[[[re,im],...],...]}` (row-major).
//! Pure states: `{"dims":[2,2],"vector":[[re,im],...]}`.
//! POVMs: `{"dim":2,"elements":[matrix,...]}`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::channels::Povm;
use crate::error::{Error, Invariant, Result};
use crate::hilbert::{hermitian_eigen, CMatrix, CVector, DensityMatrix, PureState, C64};

type JsonMatrix = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    matrix: Option<JsonMatrix>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vector: Option<Vec<[f64; 2]>>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmFile {
    dim: usize,
    elements: Vec<JsonMatrix>,
}

/// A parsed state file.
#[derive(Debug, Clone)]
pub enum StateInput {
    Mixed(DensityMatrix),
    Pure(PureState),
}

impl StateInput {
    pub fn density(&self) -> DensityMatrix {
        match self {
            StateInput::Mixed(rho) => rho.clone(),
            StateInput::Pure(psi) => psi.to_density(),
        }
    }

    /// The state as a vector; mixed inputs are accepted when their purity is 1
    /// within 1e-10.
    pub fn pure(&self) -> Result<PureState> {
        match self {
            StateInput::Pure(psi) => Ok(psi.clone()),
            StateInput::Mixed(rho) => {
                let defect = (1.0 - rho.purity()).abs();
                if defect > 1e-10 {
                    return Err(Error::Argument(format!(
                        "quantity needs a pure state; input purity deviates from 1 by {defect:.3e}"
                    )));
                }
                let (_, vecs) = hermitian_eigen(rho.matrix());
                PureState::normalized(rho.dims().to_vec(), vecs.column(0).into_owned())
            }
        }
    }

    pub fn dims(&self) -> &[usize] {
        match self {
            StateInput::Mixed(rho) => rho.dims(),
            StateInput::Pure(psi) => psi.dims(),
        }
    }
}

fn check_dims(dims: &[usize]) -> Result<usize> {
    if dims.is_empty() {
        return Err(Error::Parse("dims must list at least one subsystem".into()));
    }
    if let Some(d) = dims.iter().find(|&&d| d < 2) {
        return Err(Error::Parse(format!("subsystem dimension {d} is below 2")));
    }
    dims.iter().try_fold(1usize, |acc, &d| acc.checked_mul(d)).ok_or_else(|| Error::Parse("dimension overflow".into()))
}

fn shape_error(found: usize, expected: usize) -> Error {
    Error::InvalidState {
        invariant: Invariant::Shape,
        magnitude: (found as f64 - expected as f64).abs(),
    }
}

fn to_matrix(rows: &JsonMatrix, n: usize) -> Result<CMatrix> {
    if rows.len() != n {
        return Err(shape_error(rows.len(), n));
    }
    if let Some(r) = rows.iter().find(|r| r.len() != n) {
        return Err(shape_error(r.len(), n));
    }
    Ok(CMatrix::from_fn(n, n, |i, j| C64::new(rows[i][j][0], rows[i][j][1])))
}

fn from_matrix(m: &CMatrix) -> JsonMatrix {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| [m[(i, j)].re, m[(i, j)].im]).collect())
        .collect()
}

/// Parses a state from JSON text, validating every state invariant.
pub fn parse_state(text: &str) -> Result<StateInput> {
    let file: StateFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = check_dims(&file.dims)?;
    match (file.matrix, file.vector) {
        (Some(m), None) => Ok(StateInput::Mixed(DensityMatrix::new(file.dims, to_matrix(&m, n)?)?)),
        (None, Some(v)) => {
            if v.len() != n {
                return Err(shape_error(v.len(), n));
            }
            let amps = CVector::from_iterator(n, v.iter().map(|z| C64::new(z[0], z[1])));
            Ok(StateInput::Pure(PureState::new(file.dims, amps)?))
        }
        _ => Err(Error::Parse("state file needs exactly one of \"matrix\" or \"vector\"".into())),
    }
}

pub fn read_state(path: impl AsRef<Path>) -> Result<StateInput> {
    parse_state(&std::fs::read_to_string(path)?)
}

pub fn density_to_json(rho: &DensityMatrix) -> String {
    let file = StateFile {
        dims: rho.dims().to_vec(),
        matrix: Some(from_matrix(rho.matrix())),
        vector: None,
    };
    serde_json::to_string(&file).expect("state serializes")
}

pub fn pure_to_json(psi: &PureState) -> String {
    let file = StateFile {
        dims: psi.dims().to_vec(),
        matrix: None,
        vector: Some(psi.amps().iter().map(|z| [z.re, z.im]).collect()),
    };
    serde_json::to_string(&file).expect("state serializes")
}

pub fn parse_povm(text: &str) -> Result<Povm> {
    let file: PovmFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    if file.dim < 2 {
        return Err(Error::Parse(format!("POVM dimension {} is below 2", file.dim)));
    }
    let elements = file.elements.iter().map(|m| to_matrix(m, file.dim)).collect::<Result<Vec<_>>>()?;
    Povm::new(file.dim, elements)
}

pub fn read_povm(path: impl AsRef<Path>) -> Result<Povm> {
    parse_povm(&std::fs::read_to_string(path)?)
}

pub fn povm_to_json(povm: &Povm) -> String {
    let file = PovmFile {
        dim: povm.dim(),
        elements: povm.elements().iter().map(from_matrix).collect(),
    };
    serde_json::to_string(&file).expect("POVM serializes")
}
