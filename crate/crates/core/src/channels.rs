//! Measurements, local dephasing and Naimark dilation of rank-1 POVMs.

use crate::error::{Error, Invariant, Result};
use crate::hilbert::{
    hermitian_eigen, hermitian_eigenvalues, hermitize, kron, outer, CMatrix, CVector,
    DensityMatrix, C64, STATE_TOL, ZERO,
};

/// Positive operator-valued measure on a space of dimension `dim`.
#[derive(Debug, Clone, PartialEq)]
pub struct Povm {
    dim: usize,
    elements: Vec<CMatrix>,
}

impl Povm {
    pub fn new(dim: usize, elements: Vec<CMatrix>) -> Result<Self> {
        if elements.is_empty() {
            return Err(Error::Argument("POVM needs at least one element".into()));
        }
        let mut sum = CMatrix::zeros(dim, dim);
        for m in &elements {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::dims(format!("{dim}x{dim}"), format!("{}x{}", m.nrows(), m.ncols())));
            }
            let herm = crate::hilbert::hermiticity_defect(m);
            if herm > STATE_TOL {
                return Err(Error::InvalidState {
                    invariant: Invariant::Hermitian,
                    magnitude: herm,
                });
            }
            let min = hermitian_eigenvalues(m).last().copied().unwrap_or(0.0);
            if min < -STATE_TOL {
                return Err(Error::InvalidState {
                    invariant: Invariant::PositiveSemidefinite,
                    magnitude: -min,
                });
            }
            sum += m;
        }
        let defect = crate::hilbert::identity_defect(&sum);
        if defect > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::Completeness,
                magnitude: defect,
            });
        }
        Ok(Self {
            dim,
            elements: elements.iter().map(hermitize).collect(),
        })
    }

    /// Rank-1 POVM `{|m_x><m_x|}` from unnormalized vectors.
    pub fn from_vectors(vectors: &[CVector]) -> Result<Self> {
        let dim = vectors
            .first()
            .ok_or_else(|| Error::Argument("POVM needs at least one element".into()))?
            .len();
        Self::new(dim, vectors.iter().map(outer).collect())
    }

    /// Computational-basis measurement.
    pub fn computational(dim: usize) -> Self {
        ProjectiveBasis::computational(dim).to_povm()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn outcomes(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[CMatrix] {
        &self.elements
    }

    /// Outcome probabilities `Tr(M_x rho)` for a state on the full space.
    pub fn probabilities(&self, rho: &DensityMatrix) -> Result<Vec<f64>> {
        if rho.dim() != self.dim {
            return Err(Error::dims(self.dim, rho.dim()));
        }
        Ok(self
            .elements
            .iter()
            .map(|m| (m * rho.matrix()).trace().re.max(0.0))
            .collect())
    }

    /// The vectors `|m_x>` with `M_x = |m_x><m_x|`, or `None` if some element has rank > 1.
    pub fn rank_one_vectors(&self) -> Option<Vec<CVector>> {
        self.elements
            .iter()
            .map(|m| {
                let (vals, vecs) = hermitian_eigen(m);
                if vals.iter().skip(1).any(|&v| v > STATE_TOL) {
                    return None;
                }
                Some(vecs.column(0).scale(vals[0].max(0.0).sqrt()))
            })
            .collect()
    }
}

/// Orthonormal basis `{|e_x>}` of a subsystem.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectiveBasis {
    vectors: Vec<CVector>,
}

impl ProjectiveBasis {
    pub fn new(vectors: Vec<CVector>) -> Result<Self> {
        let d = vectors.len();
        if d == 0 || vectors.iter().any(|v| v.len() != d) {
            return Err(Error::InvalidState {
                invariant: Invariant::Shape,
                magnitude: d as f64,
            });
        }
        let mut worst: f64 = 0.0;
        for i in 0..d {
            for j in 0..d {
                let g = vectors[i].dotc(&vectors[j]);
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((g - C64::new(target, 0.0)).norm());
            }
        }
        if worst > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::Orthonormal,
                magnitude: worst,
            });
        }
        Ok(Self { vectors })
    }

    pub fn computational(dim: usize) -> Self {
        Self {
            vectors: (0..dim)
                .map(|k| {
                    let mut v = CVector::zeros(dim);
                    v[k] = C64::new(1.0, 0.0);
                    v
                })
                .collect(),
        }
    }

    /// Basis formed by the columns of a unitary.
    pub fn from_unitary(u: &CMatrix) -> Result<Self> {
        Self::new(u.column_iter().map(|c| c.into_owned()).collect())
    }

    pub(crate) fn from_orthonormal_unchecked(vectors: Vec<CVector>) -> Self {
        Self { vectors }
    }

    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[CVector] {
        &self.vectors
    }

    pub fn projectors(&self) -> Vec<CMatrix> {
        self.vectors.iter().map(outer).collect()
    }

    /// Unitary whose columns are the basis vectors.
    pub fn to_unitary(&self) -> CMatrix {
        let d = self.dim();
        CMatrix::from_fn(d, d, |r, c| self.vectors[c][r])
    }

    pub fn to_povm(&self) -> Povm {
        Povm {
            dim: self.dim(),
            elements: self.projectors(),
        }
    }
}

/// Outcome statistics and conditional states of a measurement on the whole system.
#[derive(Debug, Clone)]
pub struct MeasurementOutcome {
    pub probabilities: Vec<f64>,
    pub post_states: Vec<DensityMatrix>,
}

fn psd_sqrt(m: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(m);
    let d = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&v| C64::new(v.max(0.0).sqrt(), 0.0)),
    ));
    &vecs * d * vecs.adjoint()
}

/// Probabilities `p_x = Tr(M_x rho)` and Lüders post-states `sqrt(M_x) rho sqrt(M_x) / p_x`.
/// Zero-probability outcomes carry the normalized element as a placeholder state.
pub fn measure(rho: &DensityMatrix, povm: &Povm) -> Result<MeasurementOutcome> {
    let probabilities = povm.probabilities(rho)?;
    let mut post_states = Vec::with_capacity(povm.outcomes());
    for (m, &p) in povm.elements().iter().zip(&probabilities) {
        let data = if p > 1e-14 {
            let s = psd_sqrt(m);
            (&s * rho.matrix() * &s).unscale(p)
        } else {
            m.unscale(m.trace().re)
        };
        post_states.push(DensityMatrix::from_parts(rho.dims().to_vec(), data));
    }
    Ok(MeasurementOutcome {
        probabilities,
        post_states,
    })
}

/// Measurement channel `rho -> sum_x Tr(M_x rho) |x><x|` onto a classical register.
pub fn measure_channel(rho: &DensityMatrix, povm: &Povm) -> Result<DensityMatrix> {
    let probs = povm.probabilities(rho)?;
    let total: f64 = probs.iter().sum();
    let probs: Vec<f64> = probs.iter().map(|p| p / total).collect();
    let diag = CVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
    Ok(DensityMatrix::from_parts(vec![probs.len()], CMatrix::from_diagonal(&diag)))
}

/// Operator acting as `op` on `subsystem` and identity elsewhere.
pub fn embed_local(dims: &[usize], subsystem: usize, op: &CMatrix) -> CMatrix {
    let before: usize = dims[..subsystem].iter().product();
    let after: usize = dims[subsystem + 1..].iter().product();
    kron(
        &kron(&CMatrix::identity(before, before), op),
        &CMatrix::identity(after, after),
    )
}

fn check_subsystem(rho: &DensityMatrix, subsystem: usize, dim: usize) -> Result<()> {
    if subsystem >= rho.num_subsystems() {
        return Err(Error::Argument(format!(
            "subsystem {subsystem} out of range for {} subsystems",
            rho.num_subsystems()
        )));
    }
    if rho.dims()[subsystem] != dim {
        return Err(Error::dims(rho.dims()[subsystem], dim));
    }
    Ok(())
}

/// Local dephasing `sum_k (Pi_k on subsystem) rho (Pi_k on subsystem)`.
pub fn dephase(rho: &DensityMatrix, basis: &ProjectiveBasis, subsystem: usize) -> Result<DensityMatrix> {
    check_subsystem(rho, subsystem, basis.dim())?;
    let mut out = CMatrix::zeros(rho.dim(), rho.dim());
    for p in basis.projectors() {
        let full = embed_local(rho.dims(), subsystem, &p);
        out += &full * rho.matrix() * &full;
    }
    Ok(DensityMatrix::from_parts(rho.dims().to_vec(), out))
}

/// Measures one subsystem with a POVM and replaces it by a classical register
/// of dimension equal to the outcome count.
pub fn measure_subsystem(rho: &DensityMatrix, subsystem: usize, povm: &Povm) -> Result<DensityMatrix> {
    check_subsystem(rho, subsystem, povm.dim())?;
    let dims = rho.dims();
    let d = dims[subsystem];
    let n = povm.outcomes();
    let before: usize = dims[..subsystem].iter().product();
    let after: usize = dims[subsystem + 1..].iter().product();
    let mut new_dims = dims.to_vec();
    new_dims[subsystem] = n;
    let out_dim = before * n * after;
    let mut out = CMatrix::zeros(out_dim, out_dim);
    let r = rho.matrix();
    for (x, m) in povm.elements().iter().enumerate() {
        for p in 0..before {
            for q in 0..after {
                for p2 in 0..before {
                    for q2 in 0..after {
                        let mut acc = ZERO;
                        for b in 0..d {
                            for b2 in 0..d {
                                let mv = m[(b, b2)];
                                if mv != ZERO {
                                    acc += mv * r[((p * d + b2) * after + q, (p2 * d + b) * after + q2)];
                                }
                            }
                        }
                        out[((p * n + x) * after + q, (p2 * n + x) * after + q2)] = acc;
                    }
                }
            }
        }
    }
    Ok(DensityMatrix::from_parts(new_dims, out))
}

/// Per-subsystem action of a local measurement map.
#[derive(Debug, Clone)]
pub enum LocalMap {
    Identity,
    Measure(Povm),
}

/// Product map `Phi_1 (x) ... (x) Phi_N`; measured subsystems become classical registers.
pub fn local_measure(rho: &DensityMatrix, maps: &[LocalMap]) -> Result<DensityMatrix> {
    if maps.len() != rho.num_subsystems() {
        return Err(Error::dims(rho.num_subsystems(), maps.len()));
    }
    let mut out = rho.clone();
    for (k, map) in maps.iter().enumerate() {
        if let LocalMap::Measure(povm) = map {
            out = measure_subsystem(&out, k, povm)?;
        }
    }
    Ok(out)
}

/// Extends orthonormal columns to a full unitary by Gram-Schmidt against the
/// computational basis.
pub fn complete_to_unitary(w: &CMatrix) -> CMatrix {
    let n = w.nrows();
    let mut cols: Vec<CVector> = w.column_iter().map(|c| c.into_owned()).collect();
    for k in 0..n {
        if cols.len() == n {
            break;
        }
        let mut v = CVector::zeros(n);
        v[k] = C64::new(1.0, 0.0);
        for c in &cols {
            let proj = c.dotc(&v);
            v -= c * proj;
        }
        let norm = v.norm();
        if norm > 1e-8 {
            cols.push(v.unscale(norm));
        }
    }
    CMatrix::from_columns(&cols)
}

/// Naimark dilation of a rank-1 POVM with `n` outcomes on `C^d`.
///
/// Returns the isometry `V: C^d -> C^n` embedding the input as the first `d`
/// coordinates, and a projective basis `{|f_x>}` of `C^n` such that
/// `M_x = V^dagger |f_x><f_x| V`.
pub fn naimark_embed(povm: &Povm) -> Result<(CMatrix, ProjectiveBasis)> {
    let vectors = povm.rank_one_vectors().ok_or_else(|| {
        Error::Unsupported("Naimark dilation is implemented for rank-1 POVMs only".into())
    })?;
    let d = povm.dim();
    let n = vectors.len();
    if n < d {
        return Err(Error::Argument(format!("{n} rank-1 elements cannot resolve identity on C^{d}")));
    }
    // W[x, :] = <m_x|, an isometry C^d -> C^n because sum_x |m_x><m_x| = I.
    let w = CMatrix::from_fn(n, d, |x, k| vectors[x][k].conj());
    let u = complete_to_unitary(&w);
    // |f_x> = U^dagger |x>, so V^dagger |f_x> = W^dagger |x> = |m_x>.
    let basis = (0..n)
        .map(|x| CVector::from_fn(n, |k, _| u[(x, k)].conj()))
        .collect();
    let v = CMatrix::from_fn(n, d, |r, c| if r == c { C64::new(1.0, 0.0) } else { ZERO });
    Ok((v, ProjectiveBasis::from_orthonormal_unchecked(basis)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::PureState;

    fn plus_minus() -> ProjectiveBasis {
        let s = 0.5f64.sqrt();
        ProjectiveBasis::new(vec![
            CVector::from_vec(vec![C64::new(s, 0.0), C64::new(s, 0.0)]),
            CVector::from_vec(vec![C64::new(s, 0.0), C64::new(-s, 0.0)]),
        ])
        .unwrap()
    }

    #[test]
    fn computational_measurement_of_mixed_qubit() {
        let out = measure_channel(&DensityMatrix::maximally_mixed(vec![2]), &Povm::computational(2)).unwrap();
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((out.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn hadamard_basis_on_zero() {
        let zero = PureState::basis(vec![2], 0).unwrap().to_density();
        let out = measure_channel(&zero, &plus_minus().to_povm()).unwrap();
        assert!((out.matrix()[(0, 0)].re - 0.5).abs() < 1e-15);
        assert!((out.matrix()[(1, 1)].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn povm_validation() {
        let half = CMatrix::identity(2, 2).scale(0.5);
        assert!(Povm::new(2, vec![half.clone()]).is_err());
        assert!(Povm::new(2, vec![half.clone(), half]).is_ok());
        assert!(matches!(
            Povm::new(2, vec![CMatrix::identity(3, 3)]),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn measure_reconstructs_dephased_state() {
        let rho = PureState::from_real(vec![2], &[0.6, 0.8]).unwrap().to_density();
        let out = measure(&rho, &plus_minus().to_povm()).unwrap();
        let mut sum = CMatrix::zeros(2, 2);
        for (p, s) in out.probabilities.iter().zip(&out.post_states) {
            sum += s.matrix().scale(*p);
        }
        let deph = dephase(&rho, &plus_minus(), 0).unwrap();
        assert!(crate::hilbert::max_abs_diff(&sum, deph.matrix()) < 1e-12);
    }

    #[test]
    fn dimension_mismatch_on_dephase() {
        let rho = DensityMatrix::maximally_mixed(vec![2, 3]);
        assert!(dephase(&rho, &ProjectiveBasis::computational(2), 1).is_err());
        assert!(dephase(&rho, &ProjectiveBasis::computational(2), 2).is_err());
    }

    #[test]
    fn naimark_rejects_higher_rank() {
        let half = CMatrix::identity(2, 2).scale(0.5);
        let povm = Povm::new(2, vec![half.clone(), half]).unwrap();
        assert!(matches!(naimark_embed(&povm), Err(Error::Unsupported(_))));
    }

    #[test]
    fn naimark_of_projective_basis_is_itself() {
        let (v, basis) = naimark_embed(&plus_minus().to_povm()).unwrap();
        assert_eq!(basis.dim(), 2);
        for (f, e) in basis.vectors().iter().zip(plus_minus().vectors()) {
            let back = v.adjoint() * f;
            assert!((outer(&back) - outer(e)).norm() < 1e-12);
        }
    }
}
