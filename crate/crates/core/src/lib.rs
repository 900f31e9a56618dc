//! Entanglement and quantumness-of-correlations measures for finite-dimensional
//! quantum states, with numerical checks of the Koashi-Winter balance and of the
//! activation protocol.
//!
//! Entropies are in bits. Subsystems are ordered row-major: the leftmost factor is
//! the slowest-varying index.

pub mod activation;
pub mod channels;
pub mod entanglement;
pub mod entropy;
pub mod error;
pub mod hilbert;
pub mod io;
pub mod koashi_winter;
pub mod optimize;
pub mod param;
pub mod quantumness;
pub mod random;
pub mod registry;
pub mod report;
pub mod states;

pub use error::{Error, Invariant, Result};
pub use hilbert::{CMatrix, CVector, DensityMatrix, PureState, SchmidtDecomposition, Tensor, C64};
pub use optimize::{Diagnostics, OptimizerConfig};
pub use quantumness::{QuantumnessValue, Side};
pub use random::RandomSource;
pub use registry::{lookup, quantities, Inputs, Outcome};
pub use report::CorrelationReport;
pub use io::StateInput;
