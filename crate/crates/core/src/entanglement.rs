//! Entanglement quantifiers: entanglement entropy, entanglement of formation,
//! negativity, and distillable entanglement of maximally correlated states.

use serde::{Deserialize, Serialize};

use crate::entropy::{binary_entropy, eta, matrix_entropy, shannon, von_neumann};
use crate::error::{Error, Result};
use crate::hilbert::{
    hermitian_eigen, hermitian_eigenvalues, kron, outer, CMatrix, CVector, DensityMatrix,
    PureState, C64, EIGEN_DROP, STATE_TOL,
};
use crate::optimize::{minimize, minimize_angles, random_angles, Diagnostics, OptimizerConfig};
use crate::param::{embed_givens_params, MeasurementParametrization};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntanglementMethod {
    Wootters,
    EnsembleOpt,
    Negativity,
    Hashing,
    PureExact,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EntanglementValue {
    pub bits: f64,
    pub method: EntanglementMethod,
}

impl EntanglementValue {
    fn new(bits: f64, method: EntanglementMethod) -> Self {
        Self {
            bits: bits.max(0.0),
            method,
        }
    }
}

/// Pure-state decomposition `rho = sum_i p_i |psi_i><psi_i|`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    pub weights: Vec<f64>,
    pub states: Vec<PureState>,
}

impl Ensemble {
    pub fn density(&self) -> CMatrix {
        let n = self.states.first().map_or(0, |s| s.dim());
        let mut m = CMatrix::zeros(n, n);
        for (p, s) in self.weights.iter().zip(&self.states) {
            m += outer(s.amps()) * C64::from(*p);
        }
        m
    }

    /// Average entanglement entropy across the first subsystem.
    pub fn average_entanglement(&self) -> Result<f64> {
        let mut total = 0.0;
        for (p, s) in self.weights.iter().zip(&self.states) {
            total += p * von_neumann(&s.reduced(&[0])?);
        }
        Ok(total)
    }
}

fn check_cut(dims: &[usize], cut: &[usize]) -> Result<()> {
    if cut.is_empty() || cut.len() >= dims.len() || cut.iter().any(|&i| i >= dims.len()) {
        return Err(Error::Argument(format!(
            "cut {cut:?} is not a proper bipartition of dims {dims:?}"
        )));
    }
    let mut seen = vec![false; dims.len()];
    for &i in cut {
        if std::mem::replace(&mut seen[i], true) {
            return Err(Error::Argument(format!("repeated subsystem {i} in cut")));
        }
    }
    Ok(())
}

/// `S(Tr_R |psi><psi|)` where `cut` lists the subsystems kept on the left.
pub fn entanglement_entropy(psi: &PureState, cut: &[usize]) -> Result<EntanglementValue> {
    check_cut(psi.dims(), cut)?;
    Ok(EntanglementValue::new(von_neumann(&psi.reduced(cut)?), EntanglementMethod::PureExact))
}

/// Relative entropy of entanglement of a pure state, `S(rho_A)`.
pub fn relative_entanglement_pure(psi: &PureState, cut: &[usize]) -> Result<EntanglementValue> {
    entanglement_entropy(psi, cut)
}

fn require_two_qubits(rho: &DensityMatrix) -> Result<()> {
    if rho.dims() != [2, 2] {
        return Err(Error::dims("[2, 2]", format!("{:?}", rho.dims())));
    }
    Ok(())
}

/// Wootters concurrence of a two-qubit state.
///
/// The `lambda_i` are the singular values of `tau = W^T (sy (x) sy) W`, where the
/// columns `sqrt(p_k) |v_k>` of `W` span the support. This avoids taking square
/// roots of round-off eigenvalues.
pub fn concurrence(rho: &DensityMatrix) -> Result<f64> {
    require_two_qubits(rho)?;
    let sy = CMatrix::from_row_slice(2, 2, &[C64::from(0.0), C64::new(0.0, -1.0), C64::new(0.0, 1.0), C64::from(0.0)]);
    let yy = kron(&sy, &sy);
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let support: Vec<CVector> = (0..vals.len())
        .filter(|&k| vals[k] > EIGEN_DROP)
        .map(|k| vecs.column(k) * C64::from(vals[k].sqrt()))
        .collect();
    let w = CMatrix::from_columns(&support);
    let tau = w.transpose() * yy * &w;
    let mut lam: Vec<f64> = tau.singular_values().iter().copied().collect();
    lam.sort_by(|a, b| b.total_cmp(a));
    let rest: f64 = lam.iter().skip(1).sum();
    Ok((lam[0] - rest).clamp(0.0, 1.0))
}

/// Entanglement of formation of a two-qubit state from its concurrence.
pub fn eof_two_qubits(rho: &DensityMatrix) -> Result<EntanglementValue> {
    let c = concurrence(rho)?.min(1.0);
    let x = (1.0 + (1.0 - c * c).sqrt()) / 2.0;
    Ok(EntanglementValue::new(binary_entropy(x), EntanglementMethod::Wootters))
}

/// Result of the ensemble search.
#[derive(Debug, Clone)]
pub struct EnsembleEof {
    pub value: EntanglementValue,
    pub ensemble: Ensemble,
    pub outcomes: usize,
    pub diagnostics: Diagnostics,
}

/// Largest total dimension accepted by [`eof_ensemble_opt`].
pub const ENSEMBLE_MAX_DIM: usize = 16;

/// Default ensemble size: `rank^2`, capped at 8 and at least `rank`.
pub fn default_ensemble_size(rank: usize) -> usize {
    (rank * rank).min(8).max(rank)
}

/// Spectral data of `rho` restricted to its support.
struct Support {
    weights: Vec<f64>,
    vectors: Vec<CVector>,
}

impl Support {
    fn of(rho: &DensityMatrix) -> Self {
        let (vals, vecs) = hermitian_eigen(rho.matrix());
        let keep: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > EIGEN_DROP).collect();
        Self {
            weights: keep.iter().map(|&k| vals[k].sqrt()).collect(),
            vectors: keep.iter().map(|&k| vecs.column(k).into_owned()).collect(),
        }
    }

    fn rank(&self) -> usize {
        self.weights.len()
    }

    /// Unnormalized `sum_k sqrt(lambda_k) conj(mu[k]) |v_k>`.
    fn member(&self, mu: &CVector) -> CVector {
        let mut out = CVector::zeros(self.vectors[0].len());
        for (k, v) in self.vectors.iter().enumerate() {
            out.axpy(mu[k].conj() * self.weights[k], v, C64::from(1.0));
        }
        out
    }
}

/// `p S(Tr_B |psi><psi| / p)` for an unnormalized vector on `C^da (x) C^db`.
fn weighted_entanglement(psi: &CVector, da: usize, db: usize) -> f64 {
    let m = CMatrix::from_fn(da, db, |a, b| psi[a * db + b]);
    let rho_a = &m * m.adjoint();
    let p = rho_a.trace().re;
    matrix_entropy(&rho_a) - eta(p)
}

/// Upper bound on the entanglement of formation across subsystem 0 | rest,
/// minimized over ensembles obtained by `n`-outcome rank-1 measurements on the
/// purifying environment.
pub fn eof_ensemble_opt(rho: &DensityMatrix, ensemble_size: Option<usize>, config: &OptimizerConfig) -> Result<EnsembleEof> {
    if rho.num_subsystems() < 2 {
        return Err(Error::Argument("entanglement of formation needs at least two subsystems".into()));
    }
    if rho.dim() > ENSEMBLE_MAX_DIM {
        return Err(Error::Argument(format!(
            "total dimension {} exceeds {ENSEMBLE_MAX_DIM}",
            rho.dim()
        )));
    }
    let da = rho.dims()[0];
    let db = rho.dim() / da;
    let support = Support::of(rho);
    let r = support.rank();
    let n = ensemble_size.unwrap_or_else(|| default_ensemble_size(r));
    if n < r {
        return Err(Error::Argument(format!("ensemble size {n} below rank {r}")));
    }
    if r == 1 {
        let psi = PureState::normalized(rho.dims().to_vec(), support.vectors[0].clone())?;
        let value = von_neumann(&psi.reduced(&[0])?);
        return Ok(EnsembleEof {
            value: EntanglementValue::new(value, EntanglementMethod::EnsembleOpt),
            ensemble: Ensemble {
                weights: vec![1.0],
                states: vec![psi],
            },
            outcomes: n,
            diagnostics: Diagnostics::default(),
        });
    }

    let final_param = MeasurementParametrization::new(r, n)?;
    let objective = |param: &MeasurementParametrization, x: &[f64]| -> f64 {
        param
            .vectors(x)
            .iter()
            .map(|mu| weighted_entanglement(&support.member(mu), da, db))
            .sum()
    };

    let first = MeasurementParametrization::projective(r);
    let f1 = |x: &[f64]| objective(&first, x);
    let mut best = minimize_angles(&f1, first.num_params(), config);
    let mut best_param = first;
    if n > r {
        let warm = vec![embed_givens_params(r, n, &best.x)];
        let k = final_param.num_params();
        let f2 = |x: &[f64]| objective(&final_param, x);
        let second = minimize(&f2, &warm, |rng| random_angles(k, rng), &config.derived(1));
        if second.value < best.value {
            best = second;
            best_param = final_param;
        }
    }

    let mut weights = Vec::new();
    let mut states = Vec::new();
    for mu in best_param.vectors(&best.x) {
        let v = support.member(&mu);
        let p = v.norm_squared();
        if p > 1e-14 {
            weights.push(p);
            states.push(PureState::normalized(rho.dims().to_vec(), v)?);
        }
    }
    Ok(EnsembleEof {
        value: EntanglementValue::new(best.value, EntanglementMethod::EnsembleOpt),
        ensemble: Ensemble { weights, states },
        outcomes: n,
        diagnostics: best.diagnostics,
    })
}

/// Transpose of the listed subsystems.
pub fn partial_transpose(rho: &DensityMatrix, subsystems: &[usize]) -> Result<CMatrix> {
    let dims = rho.dims();
    if subsystems.iter().any(|&i| i >= dims.len()) {
        return Err(Error::Argument(format!("subsystem out of range for dims {dims:?}")));
    }
    let mut sorted = subsystems.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != subsystems.len() {
        return Err(Error::Argument(format!("repeated subsystem in {subsystems:?}")));
    }
    let n = rho.dim();
    let strides = crate::hilbert::strides(dims);
    let swap = |row: usize, col: usize| -> (usize, usize) {
        let (mut r, mut c) = (row, col);
        for &s in subsystems {
            let dr = (row / strides[s]) % dims[s];
            let dc = (col / strides[s]) % dims[s];
            r = r - dr * strides[s] + dc * strides[s];
            c = c - dc * strides[s] + dr * strides[s];
        }
        (r, c)
    };
    let m = rho.matrix();
    Ok(CMatrix::from_fn(n, n, |i, j| {
        let (r, c) = swap(i, j);
        m[(r, c)]
    }))
}

fn complement(n: usize, cut: &[usize]) -> Vec<usize> {
    (0..n).filter(|i| !cut.contains(i)).collect()
}

/// `(||rho^{T_R}||_1 - 1)/2` across the bipartition `cut | rest`.
pub fn negativity(rho: &DensityMatrix, cut: &[usize]) -> Result<EntanglementValue> {
    check_cut(rho.dims(), cut)?;
    let pt = partial_transpose(rho, &complement(rho.num_subsystems(), cut))?;
    let neg: f64 = hermitian_eigenvalues(&pt).iter().filter(|&&v| v < 0.0).map(|v| -v).sum();
    Ok(EntanglementValue::new(neg, EntanglementMethod::Negativity))
}

pub fn is_ppt(rho: &DensityMatrix, cut: &[usize]) -> Result<bool> {
    check_cut(rho.dims(), cut)?;
    let pt = partial_transpose(rho, &complement(rho.num_subsystems(), cut))?;
    let min = hermitian_eigenvalues(&pt).last().copied().unwrap_or(0.0);
    Ok(min >= -STATE_TOL)
}

/// The `d x d` matrix `M_ij = <ii| rho |jj>` of a state on `C^d (x) C^d`, after
/// checking that every other entry vanishes.
pub fn maximally_correlated_core(rho: &DensityMatrix, cut: &[usize]) -> Result<CMatrix> {
    check_cut(rho.dims(), cut)?;
    let mut order = cut.to_vec();
    order.extend(complement(rho.num_subsystems(), cut));
    let grouped = rho.permute(&order)?.regroup(&(0..cut.len()).collect::<Vec<_>>())?;
    let (ds, dm) = (grouped.dims()[0], grouped.dims()[1]);
    if ds != dm {
        return Err(Error::Unsupported(format!(
            "maximally correlated state needs equal dimensions across the cut, got {ds} and {dm}"
        )));
    }
    let d = ds;
    let m = grouped.matrix();
    let mut worst: f64 = 0.0;
    for r in 0..d * d {
        for c in 0..d * d {
            let on_support = r % (d + 1) == 0 && c % (d + 1) == 0;
            if !on_support {
                worst = worst.max(m[(r, c)].norm());
            }
        }
    }
    if worst > STATE_TOL {
        return Err(Error::Unsupported(format!(
            "state is not maximally correlated across the cut: entry of magnitude {worst:.3e} outside |ii><jj|"
        )));
    }
    Ok(CMatrix::from_fn(d, d, |i, j| m[(i * (d + 1), j * (d + 1))]))
}

/// Distillable entanglement of a maximally correlated state, `S(rho_M) - S(rho_SM)`.
pub fn distillable_max_corr(rho: &DensityMatrix, cut: &[usize]) -> Result<EntanglementValue> {
    let core = maximally_correlated_core(rho, cut)?;
    Ok(EntanglementValue::new(hashing_of_core(&core), EntanglementMethod::Hashing))
}

/// `H(diag M) - S(M)` for the core matrix of a maximally correlated state.
pub(crate) fn hashing_of_core(core: &CMatrix) -> f64 {
    let diag: Vec<f64> = (0..core.nrows()).map(|i| core[(i, i)].re.max(0.0)).collect();
    shannon(&diag) - matrix_entropy(core)
}
