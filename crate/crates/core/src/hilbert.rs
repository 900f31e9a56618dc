//! Complex linear algebra over tensor-product Hilbert spaces.
//!
//! Subsystems are ordered row-major: the leftmost factor is the slowest
//! varying index of the composite basis. Every routine in the crate relies on
//! this convention.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Invariant, Result};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Tolerance for the Hermitian, trace and PSD invariants of density matrices.
pub const STATE_TOL: f64 = 1e-10;
/// Tolerance for the unit norm of pure states.
pub const NORM_TOL: f64 = 1e-12;
/// Eigenvalues at or below this are dropped when building purifications.
pub const EIGEN_DROP: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Strides of the row-major composite index for the given subsystem dimensions.
pub(crate) fn strides(dims: &[usize]) -> Vec<usize> {
    let mut s = vec![1; dims.len()];
    for k in (0..dims.len().saturating_sub(1)).rev() {
        s[k] = s[k + 1] * dims[k + 1];
    }
    s
}

pub(crate) fn total_dim(dims: &[usize]) -> usize {
    dims.iter().product()
}

fn digits(mut index: usize, dims: &[usize], out: &mut [usize]) {
    for k in (0..dims.len()).rev() {
        out[k] = index % dims[k];
        index /= dims[k];
    }
}

/// Maps every composite index to (index within `keep`, index within the rest).
fn split_indices(dims: &[usize], keep: &[usize]) -> (Vec<usize>, Vec<usize>, usize, usize) {
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let rest: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let rest_dims: Vec<usize> = rest.iter().map(|&k| dims[k]).collect();
    let ks = strides(&kept_dims);
    let rs = strides(&rest_dims);
    let n = total_dim(dims);
    let mut kept_of = vec![0; n];
    let mut rest_of = vec![0; n];
    let mut d = vec![0; dims.len()];
    for idx in 0..n {
        digits(idx, dims, &mut d);
        kept_of[idx] = keep.iter().zip(&ks).map(|(&k, &s)| d[k] * s).sum();
        rest_of[idx] = rest.iter().zip(&rs).map(|(&k, &s)| d[k] * s).sum();
    }
    (kept_of, rest_of, total_dim(&kept_dims), total_dim(&rest_dims))
}

fn check_subsystems(dims: &[usize], idx: &[usize]) -> Result<Vec<usize>> {
    if idx.is_empty() {
        return Err(Error::Argument("subsystem set must be nonempty".into()));
    }
    let mut sorted = idx.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != idx.len() {
        return Err(Error::Argument(format!("repeated subsystem index in {idx:?}")));
    }
    if let Some(&bad) = sorted.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::Argument(format!(
            "subsystem index {bad} out of range for {} subsystems",
            dims.len()
        )));
    }
    Ok(sorted)
}

fn check_permutation(n: usize, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; n];
    if order.len() != n {
        return Err(Error::Argument(format!("permutation {order:?} has wrong length")));
    }
    for &o in order {
        if o >= n || seen[o] {
            return Err(Error::Argument(format!("{order:?} is not a permutation")));
        }
        seen[o] = true;
    }
    Ok(())
}

/// Index map for reordering subsystems: `map[new_index] = old_index`.
fn permutation_map(dims: &[usize], order: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let new_dims: Vec<usize> = order.iter().map(|&o| dims[o]).collect();
    let old_strides = strides(dims);
    let n = total_dim(dims);
    let mut map = vec![0; n];
    let mut d = vec![0; dims.len()];
    for (new_idx, slot) in map.iter_mut().enumerate() {
        digits(new_idx, &new_dims, &mut d);
        *slot = order
            .iter()
            .zip(&d)
            .map(|(&o, &digit)| digit * old_strides[o])
            .sum();
    }
    (map, new_dims)
}

/// Kronecker product of two complex matrices.
pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Builds `|v><v|`.
pub fn outer(v: &CVector) -> CMatrix {
    v * v.adjoint()
}

/// Largest absolute deviation from Hermiticity.
pub fn hermiticity_defect(m: &CMatrix) -> f64 {
    let n = m.nrows();
    let mut worst: f64 = 0.0;
    for i in 0..n {
        for j in i..n {
            worst = worst.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    worst
}

pub(crate) fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// Eigenvalues of a Hermitian matrix, sorted nonincreasing.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean + r, mean - r]
        }
        _ => {
            let mut vals: Vec<f64> = hermitize(m).symmetric_eigenvalues().iter().copied().collect();
            vals.sort_by(|x, y| y.total_cmp(x));
            vals
        }
    }
}

/// Eigendecomposition of a Hermitian matrix; eigenvalues nonincreasing, eigenvectors
/// as the matching columns.
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let eig = hermitize(m).symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let vals = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let vecs = CMatrix::from_fn(m.nrows(), order.len(), |r, c| eig.eigenvectors[(r, order[c])]);
    (vals, vecs)
}

/// Clips eigenvalues in `[-STATE_TOL, 0)` to zero and rejects anything more negative.
pub fn clip_spectrum(vals: &[f64]) -> Result<Vec<f64>> {
    vals.iter()
        .map(|&v| {
            if v < -STATE_TOL {
                Err(Error::InvalidState {
                    invariant: Invariant::PositiveSemidefinite,
                    magnitude: -v,
                })
            } else {
                Ok(v.max(0.0))
            }
        })
        .collect()
}

/// Trace norm of a Hermitian matrix.
pub fn trace_norm(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).iter().map(|v| v.abs()).sum()
}

/// Maximum entrywise deviation of `U U^dagger` from the identity.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    identity_defect(&(u * u.adjoint()))
}

/// Maximum entrywise deviation of a square matrix from the identity.
pub fn identity_defect(p: &CMatrix) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..p.nrows() {
        for j in 0..p.ncols() {
            let target = if i == j { ONE } else { ZERO };
            worst = worst.max((p[(i, j)] - target).norm());
        }
    }
    worst
}

pub(crate) fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Shared tensor-product composition for states.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

/// A density matrix over a composite space with a subsystem-dimension signature.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    dims: Vec<usize>,
    data: CMatrix,
}

impl DensityMatrix {
    /// Validates and wraps a matrix. The stored data is hermitized exactly.
    pub fn new(dims: Vec<usize>, data: CMatrix) -> Result<Self> {
        let n = total_dim(&dims);
        if dims.is_empty() || dims.contains(&0) || data.nrows() != n || data.ncols() != n {
            return Err(Error::InvalidState {
                invariant: Invariant::Shape,
                magnitude: (data.nrows().abs_diff(n) + data.ncols().abs_diff(n)) as f64,
            });
        }
        let herm = hermiticity_defect(&data);
        if herm > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::Hermitian,
                magnitude: herm,
            });
        }
        let tr = data.trace();
        let tr_err = (tr - ONE).norm();
        if tr_err > STATE_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::UnitTrace,
                magnitude: tr_err,
            });
        }
        let data = hermitize(&data);
        let min = hermitian_eigenvalues(&data).last().copied().unwrap_or(0.0);
        if min < -STATE_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::PositiveSemidefinite,
                magnitude: -min,
            });
        }
        Ok(Self { dims, data })
    }

    /// Wraps data produced by a trace- and positivity-preserving map.
    pub(crate) fn from_parts(dims: Vec<usize>, data: CMatrix) -> Self {
        debug_assert_eq!(total_dim(&dims), data.nrows());
        Self {
            dims,
            data: hermitize(&data),
        }
    }

    pub fn maximally_mixed(dims: Vec<usize>) -> Self {
        let n = total_dim(&dims);
        Self::from_parts(dims, CMatrix::identity(n, n).scale(1.0 / n as f64))
    }

    /// Diagonal state with the given probabilities in the computational basis.
    pub fn from_diagonal(dims: Vec<usize>, probs: &[f64]) -> Result<Self> {
        let diag = CVector::from_iterator(probs.len(), probs.iter().map(|&p| C64::new(p, 0.0)));
        Self::new(dims, CMatrix::from_diagonal(&diag))
    }

    /// Convex combination `sum_i w_i rho_i` of states with equal dims.
    pub fn mixture(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let first = parts
            .first()
            .ok_or_else(|| Error::Argument("empty mixture".into()))?;
        let mut acc = CMatrix::zeros(first.1.dim(), first.1.dim());
        for (w, rho) in parts {
            if rho.dims != first.1.dims {
                return Err(Error::dims(format!("{:?}", first.1.dims), format!("{:?}", rho.dims)));
            }
            acc += rho.data.scale(*w);
        }
        Self::new(first.1.dims.clone(), acc)
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn num_subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.data
    }

    pub fn into_matrix(self) -> CMatrix {
        self.data
    }

    /// Eigenvalues, nonincreasing, with numerical negatives clipped to zero.
    pub fn eigenvalues(&self) -> Vec<f64> {
        hermitian_eigenvalues(&self.data)
            .into_iter()
            .map(|v| v.max(0.0))
            .collect()
    }

    pub fn purity(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Number of eigenvalues above [`EIGEN_DROP`].
    pub fn rank(&self) -> usize {
        self.eigenvalues().iter().filter(|&&v| v > EIGEN_DROP).count()
    }

    /// Reduced state on the subsystems in `keep` (returned in ascending index order).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let keep = check_subsystems(&self.dims, keep)?;
        if keep.len() == self.dims.len() {
            return Ok(self.clone());
        }
        let (kept_of, rest_of, kd, rd) = split_indices(&self.dims, &keep);
        let mut groups: Vec<Vec<usize>> = vec![Vec::with_capacity(kd); rd];
        for (idx, &r) in rest_of.iter().enumerate() {
            groups[r].push(idx);
        }
        let mut out = CMatrix::zeros(kd, kd);
        for group in &groups {
            for &r in group {
                for &c in group {
                    out[(kept_of[r], kept_of[c])] += self.data[(r, c)];
                }
            }
        }
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix::from_parts(dims, out))
    }

    /// Traces out the listed subsystems.
    pub fn trace_out(&self, remove: &[usize]) -> Result<DensityMatrix> {
        check_subsystems(&self.dims, remove)?;
        let keep: Vec<usize> = (0..self.dims.len()).filter(|k| !remove.contains(k)).collect();
        self.partial_trace(&keep)
    }

    /// Reorders subsystems: factor `k` of the result is factor `order[k]` of `self`.
    pub fn permute(&self, order: &[usize]) -> Result<DensityMatrix> {
        check_permutation(self.dims.len(), order)?;
        let (map, dims) = permutation_map(&self.dims, order);
        let n = self.dim();
        let data = CMatrix::from_fn(n, n, |r, c| self.data[(map[r], map[c])]);
        Ok(DensityMatrix { dims, data })
    }

    /// Groups the subsystems into a bipartition `left | rest`, returning a state with
    /// two factors of dimensions `[prod(left), prod(rest)]`.
    pub fn regroup(&self, left: &[usize]) -> Result<DensityMatrix> {
        let left = check_subsystems(&self.dims, left)?;
        if left.len() == self.dims.len() {
            return Err(Error::Argument("bipartition needs a nonempty right part".into()));
        }
        let right: Vec<usize> = (0..self.dims.len()).filter(|k| !left.contains(k)).collect();
        let order: Vec<usize> = left.iter().chain(&right).copied().collect();
        let mut p = self.permute(&order)?;
        let dl = left.iter().map(|&k| self.dims[k]).product();
        let dr = right.iter().map(|&k| self.dims[k]).product();
        p.dims = vec![dl, dr];
        Ok(p)
    }

    /// Replaces the dimension signature with another of the same total dimension.
    pub fn with_dims(&self, dims: Vec<usize>) -> Result<DensityMatrix> {
        if total_dim(&dims) != self.dim() {
            return Err(Error::dims(self.dim(), total_dim(&dims)));
        }
        Ok(DensityMatrix {
            dims,
            data: self.data.clone(),
        })
    }

    /// `U rho U^dagger` for a unitary on the full space.
    pub fn conjugate_by(&self, u: &CMatrix) -> Result<DensityMatrix> {
        if u.nrows() != self.dim() || u.ncols() != self.dim() {
            return Err(Error::dims(self.dim(), format!("{}x{}", u.nrows(), u.ncols())));
        }
        Ok(DensityMatrix::from_parts(
            self.dims.clone(),
            u * &self.data * u.adjoint(),
        ))
    }

    /// Entrywise max deviation from another matrix of the same size.
    pub fn max_entry_diff(&self, other: &DensityMatrix) -> f64 {
        max_abs_diff(&self.data, &other.data)
    }

    /// Trace distance `||rho - sigma||_1 / 2`.
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        0.5 * trace_norm(&(&self.data - &other.data))
    }
}

impl Tensor for DensityMatrix {
    fn tensor(&self, other: &Self) -> Self {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        DensityMatrix {
            dims,
            data: kron(&self.data, &other.data),
        }
    }
}

/// A unit vector over a composite space.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: CVector,
}

impl PureState {
    pub fn new(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) || total_dim(&dims) != amps.len() {
            return Err(Error::InvalidState {
                invariant: Invariant::Shape,
                magnitude: total_dim(&dims).abs_diff(amps.len()) as f64,
            });
        }
        let err = (amps.norm() - 1.0).abs();
        if err > NORM_TOL {
            return Err(Error::InvalidState {
                invariant: Invariant::UnitNorm,
                magnitude: err,
            });
        }
        Ok(Self { dims, amps })
    }

    /// Normalizes `amps` before wrapping; fails on the zero vector.
    pub fn normalized(dims: Vec<usize>, amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState {
                invariant: Invariant::UnitNorm,
                magnitude: 1.0,
            });
        }
        Self::new(dims, amps.unscale(norm))
    }

    /// Computational basis vector with composite index `index`.
    pub fn basis(dims: Vec<usize>, index: usize) -> Result<Self> {
        let n = total_dim(&dims);
        if index >= n {
            return Err(Error::Argument(format!("basis index {index} >= {n}")));
        }
        let mut amps = CVector::zeros(n);
        amps[index] = ONE;
        Self::new(dims, amps)
    }

    /// Real-amplitude convenience constructor; normalizes.
    pub fn from_real(dims: Vec<usize>, amps: &[f64]) -> Result<Self> {
        Self::normalized(
            dims,
            CVector::from_iterator(amps.len(), amps.iter().map(|&a| C64::new(a, 0.0))),
        )
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &CVector {
        &self.amps
    }

    pub fn to_density(&self) -> DensityMatrix {
        DensityMatrix::from_parts(self.dims.clone(), outer(&self.amps))
    }

    pub fn reduced(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.to_density().partial_trace(keep)
    }

    pub fn permute(&self, order: &[usize]) -> Result<PureState> {
        check_permutation(self.dims.len(), order)?;
        let (map, dims) = permutation_map(&self.dims, order);
        let amps = CVector::from_fn(self.dim(), |r, _| self.amps[map[r]]);
        Ok(PureState { dims, amps })
    }

    /// Schmidt decomposition across `left | rest`.
    pub fn schmidt(&self, left: &[usize]) -> Result<SchmidtDecomposition> {
        let left = check_subsystems(&self.dims, left)?;
        if left.len() == self.dims.len() {
            return Err(Error::Argument("Schmidt cut needs a nonempty right part".into()));
        }
        let right: Vec<usize> = (0..self.dims.len()).filter(|k| !left.contains(k)).collect();
        let order: Vec<usize> = left.iter().chain(&right).copied().collect();
        let p = self.permute(&order)?;
        let dl: usize = left.iter().map(|&k| self.dims[k]).product();
        let dr: usize = right.iter().map(|&k| self.dims[k]).product();
        let m = CMatrix::from_fn(dl, dr, |l, r| p.amps[l * dr + r]);
        let svd = m.svd(true, true);
        let u = svd.u.expect("requested U");
        let vt = svd.v_t.expect("requested V^T");
        let k = dl.min(dr);
        let mut order: Vec<usize> = (0..k).collect();
        order.sort_by(|&i, &j| svd.singular_values[j].total_cmp(&svd.singular_values[i]));
        Ok(SchmidtDecomposition {
            coefficients: order.iter().map(|&i| svd.singular_values[i]).collect(),
            left_vectors: order.iter().map(|&i| u.column(i).into_owned()).collect(),
            right_vectors: order
                .iter()
                .map(|&i| vt.row(i).transpose().into_owned())
                .collect(),
        })
    }
}

impl Tensor for PureState {
    fn tensor(&self, other: &Self) -> Self {
        let dims = self.dims.iter().chain(&other.dims).copied().collect();
        PureState {
            dims,
            amps: self.amps.kronecker(&other.amps),
        }
    }
}

/// `psi = sum_n c_n |l_n> (x) |r_n>` with `c_n` nonincreasing.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    pub coefficients: Vec<f64>,
    pub left_vectors: Vec<CVector>,
    pub right_vectors: Vec<CVector>,
}

impl SchmidtDecomposition {
    /// Reassembles the state vector in `left (x) right` ordering.
    pub fn reconstruct(&self) -> CVector {
        let dl = self.left_vectors.first().map_or(0, |v| v.len());
        let dr = self.right_vectors.first().map_or(0, |v| v.len());
        let mut out = CVector::zeros(dl * dr);
        for ((c, l), r) in self
            .coefficients
            .iter()
            .zip(&self.left_vectors)
            .zip(&self.right_vectors)
        {
            out += l.kronecker(r).scale(*c);
        }
        out
    }

    pub fn rank(&self) -> usize {
        self.coefficients.iter().filter(|&&c| c > 1e-12).count()
    }
}

/// Purification `sum_k sqrt(lambda_k) |k> (x) |k_E>` from the eigendecomposition.
///
/// The environment is appended as a final subsystem of dimension equal to the
/// number of eigenvalues above [`EIGEN_DROP`].
pub fn purify(rho: &DensityMatrix) -> PureState {
    let (vals, vecs) = hermitian_eigen(rho.matrix());
    let kept: Vec<usize> = (0..vals.len()).filter(|&k| vals[k] > EIGEN_DROP).collect();
    let r = kept.len();
    let n = rho.dim();
    let mut amps = CVector::zeros(n * r);
    for (e, &k) in kept.iter().enumerate() {
        let w = vals[k].sqrt();
        for i in 0..n {
            amps[i * r + e] += vecs[(i, k)] * w;
        }
    }
    let mut dims = rho.dims().to_vec();
    dims.push(r);
    // renormalize away the weight of dropped eigenvalues
    let norm = amps.norm();
    PureState {
        dims,
        amps: amps.unscale(norm),
    }
}
