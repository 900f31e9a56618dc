//! Angle parametrizations of unitaries, orthonormal bases and rank-1 POVMs.

use crate::channels::{Povm, ProjectiveBasis};
use crate::error::{Error, Result};
use crate::hilbert::{CMatrix, CVector, C64};

/// Number of angle/phase parameters of [`givens_unitary`] on `C^n`.
pub fn givens_param_count(n: usize) -> usize {
    n * n.saturating_sub(1)
}

/// Product of Givens rotations over the index pairs `(i, j)`, `i < j`, in
/// lexicographic order. Each pair consumes an angle and a phase. All-zero
/// parameters give the identity; the product covers every unitary up to a
/// diagonal phase matrix.
pub fn givens_unitary(n: usize, params: &[f64]) -> CMatrix {
    debug_assert_eq!(params.len(), givens_param_count(n));
    let mut u = CMatrix::identity(n, n);
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            let (theta, phi) = (params[k], params[k + 1]);
            k += 2;
            if theta == 0.0 {
                continue;
            }
            let (s, c) = theta.sin_cos();
            let e = C64::from_polar(1.0, phi);
            // columns i, j of U <- U * G with G = [[c, -e^* s], [e s, c]]
            for r in 0..n {
                let ui = u[(r, i)];
                let uj = u[(r, j)];
                u[(r, i)] = ui * c + uj * e * s;
                u[(r, j)] = -ui * e.conj() * s + uj * c;
            }
        }
    }
    u
}

/// Maps the angles of an `r`-dimensional Givens product into the parameter vector of
/// an `n`-dimensional one so that the first `r` columns agree (extra angles zero).
pub fn embed_givens_params(r: usize, n: usize, params: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; givens_param_count(n)];
    let mut k_small = 0;
    let mut k = 0;
    for i in 0..n {
        for j in i + 1..n {
            if j < r {
                out[k] = params[k_small];
                out[k + 1] = params[k_small + 1];
                k_small += 2;
            }
            k += 2;
        }
    }
    out
}

/// Rank-1 measurements with `outcomes` elements on `C^dim`, parametrized by the
/// first `dim` columns of an `outcomes x outcomes` Givens unitary `U`:
/// `|m_x>_k = conj(U[x, k])`. Every parameter vector yields a valid POVM; with
/// `outcomes == dim` it is an orthonormal basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MeasurementParametrization {
    pub dim: usize,
    pub outcomes: usize,
}

impl MeasurementParametrization {
    pub fn new(dim: usize, outcomes: usize) -> Result<Self> {
        if dim == 0 || outcomes < dim || outcomes > dim * dim {
            return Err(Error::Argument(format!(
                "outcome count {outcomes} outside {dim}..={} for dimension {dim}",
                dim * dim
            )));
        }
        Ok(Self { dim, outcomes })
    }

    pub fn projective(dim: usize) -> Self {
        Self { dim, outcomes: dim }
    }

    pub fn is_projective(&self) -> bool {
        self.outcomes == self.dim
    }

    pub fn num_params(&self) -> usize {
        givens_param_count(self.outcomes)
    }

    /// The POVM vectors `|m_x>`.
    pub fn vectors(&self, params: &[f64]) -> Vec<CVector> {
        let u = givens_unitary(self.outcomes, params);
        (0..self.outcomes)
            .map(|x| CVector::from_fn(self.dim, |k, _| u[(x, k)].conj()))
            .collect()
    }

    pub fn povm(&self, params: &[f64]) -> Povm {
        Povm::from_vectors(&self.vectors(params)).expect("parametrized POVM is complete")
    }

    pub fn basis(&self, params: &[f64]) -> Option<ProjectiveBasis> {
        self.is_projective()
            .then(|| ProjectiveBasis::from_orthonormal_unchecked(self.vectors(params)))
    }
}
