//! Seeded sampling of Haar-random states and unitaries.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::hilbert::{total_dim, CMatrix, CVector, DensityMatrix, PureState, C64};

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Deterministic random stream. Identical seeds give bit-identical samples.
#[derive(Debug, Clone)]
pub struct RandomSource {
    seed: u64,
    counter: u64,
    rng: ChaCha8Rng,
}

impl RandomSource {
    pub fn new(seed: u64) -> Self {
        Self {
            seed,
            counter: 0,
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Independent child stream `index`; a pure function of `(seed, index)`.
    pub fn child(&self, index: u64) -> RandomSource {
        RandomSource::new(Self::child_seed(self.seed, index))
    }

    /// Seed of child stream `index` for a given master seed.
    pub fn child_seed(seed: u64, index: u64) -> u64 {
        splitmix64(seed ^ splitmix64(index.wrapping_add(1)))
    }

    /// Next child stream; successive calls walk the child indices 0, 1, 2, ...
    pub fn split(&mut self) -> RandomSource {
        let c = self.child(self.counter);
        self.counter += 1;
        c
    }

    pub fn uniform(&mut self) -> f64 {
        self.rng.random::<f64>()
    }

    pub fn uniform_in(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }

    pub fn normal(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    pub fn complex_normal(&mut self) -> C64 {
        C64::new(self.normal(), self.normal())
    }

    /// Point on the probability simplex, uniform (flat Dirichlet).
    pub fn simplex(&mut self, n: usize) -> Vec<f64> {
        let raw: Vec<f64> = (0..n).map(|_| -self.uniform().max(1e-300).ln()).collect();
        let s: f64 = raw.iter().sum();
        raw.into_iter().map(|x| x / s).collect()
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }
}

/// Haar-random pure state: a normalized standard complex Gaussian vector.
pub fn random_pure(dims: &[usize], rng: &mut RandomSource) -> PureState {
    let n = total_dim(dims);
    let amps = CVector::from_fn(n, |_, _| rng.complex_normal());
    PureState::normalized(dims.to_vec(), amps).expect("Gaussian vector is nonzero")
}

/// Random density matrix from the induced measure: the marginal of a Haar pure
/// state on `dims (x) C^rank`.
pub fn random_density(dims: &[usize], rank: usize, rng: &mut RandomSource) -> Result<DensityMatrix> {
    let n = total_dim(dims);
    if rank == 0 || rank > n {
        return Err(Error::Argument(format!("rank {rank} outside 1..={n}")));
    }
    let mut full = dims.to_vec();
    full.push(rank);
    let psi = random_pure(&full, rng);
    let keep: Vec<usize> = (0..dims.len()).collect();
    psi.reduced(&keep)
}

/// Haar-random unitary: QR of a complex Ginibre matrix with the phases of R's
/// diagonal absorbed into Q.
pub fn random_unitary(dim: usize, rng: &mut RandomSource) -> CMatrix {
    let g = CMatrix::from_fn(dim, dim, |_, _| rng.complex_normal());
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        for i in 0..dim {
            q[(i, j)] *= phase;
        }
    }
    q
}
