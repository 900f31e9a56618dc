//! Entropic functionals. Every value is in bits (base-2 logarithms).

use crate::error::{Error, Result};
use crate::hilbert::{hermitian_eigen, hermitian_eigenvalues, CMatrix, DensityMatrix, PureState, EIGEN_DROP};

/// Weight of `rho` outside the support of `sigma` beyond which the relative entropy
/// is reported as `+inf`.
pub const SUPPORT_TOL: f64 = 1e-9;

/// `-p log2 p` with `0 log 0 = 0`.
#[inline]
pub fn eta(p: f64) -> f64 {
    if p > 0.0 {
        -p * p.log2()
    } else {
        0.0
    }
}

/// Shannon entropy of a (possibly unnormalized) weight vector; weights are used as given.
pub fn shannon(probs: &[f64]) -> f64 {
    probs.iter().map(|&p| eta(p)).sum()
}

/// Binary entropy `h(x)`.
pub fn binary_entropy(x: f64) -> f64 {
    eta(x) + eta(1.0 - x)
}

/// `-sum lambda log2 lambda` over the eigenvalues of a PSD Hermitian matrix, with
/// numerical negatives clipped. The matrix need not have unit trace.
pub fn matrix_entropy(m: &CMatrix) -> f64 {
    hermitian_eigenvalues(m).into_iter().map(|v| eta(v.max(0.0))).sum()
}

/// Von Neumann entropy `S(rho) = -Tr rho log2 rho`.
pub fn von_neumann(rho: &DensityMatrix) -> f64 {
    matrix_entropy(rho.matrix())
}

/// Quantum relative entropy `S(rho || sigma)`; `+inf` when `rho` leaks out of the
/// support of `sigma`.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dims() != sigma.dims() {
        return Err(Error::dims(format!("{:?}", rho.dims()), format!("{:?}", sigma.dims())));
    }
    let (mu, v) = hermitian_eigen(sigma.matrix());
    let r = rho.matrix();
    let mut cross = 0.0;
    let mut leaked = 0.0;
    for (k, &m) in mu.iter().enumerate() {
        let col = v.column(k);
        let w = (col.adjoint() * r * col)[(0, 0)].re;
        if m > EIGEN_DROP {
            cross += w * m.log2();
        } else {
            leaked += w;
        }
    }
    if leaked > SUPPORT_TOL {
        return Ok(f64::INFINITY);
    }
    Ok((-von_neumann(rho) - cross).max(0.0))
}

fn split_cut(rho: &DensityMatrix, cut: &[usize]) -> Result<(Vec<usize>, Vec<usize>)> {
    let n = rho.num_subsystems();
    if cut.is_empty() || cut.len() >= n || cut.iter().any(|&k| k >= n) {
        return Err(Error::Argument(format!(
            "cut {cut:?} is not a proper bipartition of {n} subsystems"
        )));
    }
    let rest = (0..n).filter(|k| !cut.contains(k)).collect();
    Ok((cut.to_vec(), rest))
}

/// `I(L:R) = S(L) + S(R) - S(LR)` where `L` are the subsystems listed in `cut`.
pub fn mutual_information(rho: &DensityMatrix, cut: &[usize]) -> Result<f64> {
    let (l, r) = split_cut(rho, cut)?;
    let sl = von_neumann(&rho.partial_trace(&l)?);
    let sr = von_neumann(&rho.partial_trace(&r)?);
    Ok(sl + sr - von_neumann(rho))
}

/// `S(L|R) = S(LR) - S(R)` where `L` are the subsystems listed in `cut`.
pub fn conditional_entropy(rho: &DensityMatrix, cut: &[usize]) -> Result<f64> {
    let (_, r) = split_cut(rho, cut)?;
    Ok(von_neumann(rho) - von_neumann(&rho.partial_trace(&r)?))
}

/// Coherent information `I(L>R) = -S(L|R)`.
pub fn coherent_information(rho: &DensityMatrix, cut: &[usize]) -> Result<f64> {
    conditional_entropy(rho, cut).map(|s| -s)
}

/// Quantum Jensen-Shannon divergence of two pure states, `S(mu) - (S(psi)+S(phi))/2`
/// with `mu` the equal mixture. For pure inputs this is `S(mu)`.
pub fn jensen_shannon(psi: &PureState, phi: &PureState) -> Result<f64> {
    if psi.dims() != phi.dims() {
        return Err(Error::dims(format!("{:?}", psi.dims()), format!("{:?}", phi.dims())));
    }
    let a = psi.to_density();
    let b = phi.to_density();
    let mu = DensityMatrix::mixture(&[(0.5, &a), (0.5, &b)])?;
    Ok((von_neumann(&mu) - 0.5 * (von_neumann(&a) + von_neumann(&b))).max(0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::Tensor;

    fn bell() -> DensityMatrix {
        PureState::from_real(vec![2, 2], &[1.0, 0.0, 0.0, 1.0]).unwrap().to_density()
    }

    #[test]
    fn maximally_mixed_entropy() {
        for n in 2..=8 {
            let rho = DensityMatrix::maximally_mixed(vec![n]);
            assert!((von_neumann(&rho) - (n as f64).log2()).abs() < 1e-12);
        }
    }

    #[test]
    fn three_quarter_diagonal() {
        let rho = DensityMatrix::from_diagonal(vec![2], &[0.75, 0.25]).unwrap();
        let oracle = -0.75 * 0.75f64.log2() - 0.25 * 0.25f64.log2();
        assert!((von_neumann(&rho) - oracle).abs() < 1e-12);
        assert!((von_neumann(&rho) - 0.811278).abs() < 1e-6);
    }

    #[test]
    fn relative_entropy_edge_cases() {
        let zero = DensityMatrix::from_diagonal(vec![2], &[1.0, 0.0]).unwrap();
        let one = DensityMatrix::from_diagonal(vec![2], &[0.0, 1.0]).unwrap();
        assert_eq!(relative_entropy(&zero, &one).unwrap(), f64::INFINITY);
        assert!(relative_entropy(&bell(), &bell()).unwrap().abs() < 1e-10);
        let mixed = DensityMatrix::maximally_mixed(vec![2]);
        // S(|0><0| || I/2) = log2 2
        assert!((relative_entropy(&zero, &mixed).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn bell_correlations() {
        assert!((mutual_information(&bell(), &[0]).unwrap() - 2.0).abs() < 1e-10);
        assert!((conditional_entropy(&bell(), &[0]).unwrap() + 1.0).abs() < 1e-10);
        assert!((coherent_information(&bell(), &[0]).unwrap() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn product_of_mixed_qubits() {
        let m = DensityMatrix::maximally_mixed(vec![2]);
        let rho = m.tensor(&m);
        assert!(mutual_information(&rho, &[0]).unwrap().abs() < 1e-12);
        assert!((conditional_entropy(&rho, &[0]).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jensen_shannon_values() {
        let zero = PureState::basis(vec![2], 0).unwrap();
        let one = PureState::basis(vec![2], 1).unwrap();
        let plus = PureState::from_real(vec![2], &[1.0, 1.0]).unwrap();
        assert!((jensen_shannon(&zero, &one).unwrap() - 1.0).abs() < 1e-12);
        assert!(jensen_shannon(&plus, &plus).unwrap().abs() < 1e-12);
        let oracle = binary_entropy((1.0 + 0.5f64.sqrt()) / 2.0);
        assert!((jensen_shannon(&plus, &one).unwrap() - oracle).abs() < 1e-12);
        assert!((oracle - 0.600876).abs() < 1e-6);
    }

    #[test]
    fn bad_cut() {
        assert!(mutual_information(&bell(), &[0, 1]).is_err());
        assert!(conditional_entropy(&bell(), &[]).is_err());
    }
}
