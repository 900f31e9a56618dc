//! Brute-force oracles shared by the integration tests. They use plain arrays and
//! closed-form 2x2 algebra so they share no code paths with the library optimizers.

#![allow(dead_code, clippy::needless_range_loop)]

use qcorr::C64 as C;
use qcorr::DensityMatrix;

pub type M4 = [[C; 4]; 4];
pub type M2 = [[C; 2]; 2];

pub fn to_array(rho: &DensityMatrix) -> M4 {
    let m = rho.matrix();
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, z) in row.iter_mut().enumerate() {
            *z = m[(i, j)];
        }
    }
    out
}

/// Swaps the two qubits.
pub fn swap(m: &M4) -> M4 {
    let s = |i: usize| (i % 2) * 2 + i / 2;
    let mut out = *m;
    for i in 0..4 {
        for j in 0..4 {
            out[s(i)][s(j)] = m[i][j];
        }
    }
    out
}

pub fn h(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -x * x.log2()
    }
}

/// Eigenvalues of a 2x2 Hermitian matrix.
pub fn eig2(m: &M2) -> (f64, f64) {
    let a = m[0][0].re;
    let d = m[1][1].re;
    let mean = 0.5 * (a + d);
    let r = (0.25 * (a - d) * (a - d) + m[0][1].norm_sqr()).sqrt();
    (mean + r, mean - r)
}

/// `-sum l log l` over the eigenvalues of an unnormalized 2x2 PSD matrix.
pub fn entropy2(m: &M2) -> f64 {
    let (a, b) = eig2(m);
    h(a) + h(b)
}

pub fn marginal_a(m: &M4) -> M2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for a2 in 0..2 {
            out[a][a2] = m[2 * a][2 * a2] + m[2 * a + 1][2 * a2 + 1];
        }
    }
    out
}

pub fn marginal_b(m: &M4) -> M2 {
    marginal_a(&swap(m))
}

/// Entropy of a 4x4 Hermitian matrix by Jacobi rotations (independent of nalgebra).
pub fn entropy4(m: &M4) -> f64 {
    let mut a = *m;
    for _ in 0..100 {
        let mut off = 0.0;
        for i in 0..4 {
            for j in 0..4 {
                if i != j {
                    off += a[i][j].norm_sqr();
                }
            }
        }
        if off < 1e-30 {
            break;
        }
        for p in 0..4 {
            for q in p + 1..4 {
                let apq = a[p][q];
                if apq.norm() < 1e-300 {
                    continue;
                }
                let app = a[p][p].re;
                let aqq = a[q][q].re;
                // complex Jacobi rotation zeroing a[p][q]
                let phase = apq / apq.norm();
                let theta = 0.5 * (2.0 * apq.norm()).atan2(aqq - app);
                let (s, c) = theta.sin_cos();
                let mut g = [[C::new(0.0, 0.0); 4]; 4];
                for (k, row) in g.iter_mut().enumerate() {
                    row[k] = C::new(1.0, 0.0);
                }
                g[p][p] = C::new(c, 0.0);
                g[q][q] = C::new(c, 0.0);
                g[p][q] = phase * s;
                g[q][p] = -phase.conj() * s;
                a = mul(&mul(&adj(&g), &a), &g);
            }
        }
    }
    (0..4).map(|i| h(a[i][i].re.max(0.0))).sum()
}

pub fn mul(x: &M4, y: &M4) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            for k in 0..4 {
                out[i][j] += x[i][k] * y[k][j];
            }
        }
    }
    out
}

pub fn adj(x: &M4) -> M4 {
    let mut out = [[C::new(0.0, 0.0); 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] = x[j][i].conj();
        }
    }
    out
}

/// Qubit basis vector `(cos t/2, e^{i f} sin t/2)` and its orthogonal partner.
pub fn qubit_basis(theta: f64, phi: f64) -> [[C; 2]; 2] {
    let (s, c) = (theta / 2.0).sin_cos();
    let e = C::from_polar(1.0, phi);
    [[C::new(c, 0.0), e * s], [-e.conj() * s, C::new(c, 0.0)]]
}

/// `(I (x) <v|) m (I (x) |v>)`.
pub fn condition_b(m: &M4, v: &[C; 2]) -> M2 {
    let mut out = [[C::new(0.0, 0.0); 2]; 2];
    for a in 0..2 {
        for a2 in 0..2 {
            let mut acc = C::new(0.0, 0.0);
            for b in 0..2 {
                for b2 in 0..2 {
                    acc += v[b].conj() * m[2 * a + b][2 * a2 + b2] * v[b2];
                }
            }
            out[a][a2] = acc;
        }
    }
    out
}

pub struct GridResult {
    pub j: f64,
    pub discord: f64,
    pub mutual_information: f64,
}

/// Classical correlations and discord of a two-qubit state, measuring B, by
/// brute force over an `n x n` grid of projective bases.
pub fn grid_discord_b(m: &M4, n: usize) -> GridResult {
    let sa = entropy2(&marginal_a(m));
    let sb = entropy2(&marginal_b(m));
    let mi = sa + sb - entropy4(m);
    let mut best = f64::INFINITY;
    for i in 0..n {
        let theta = std::f64::consts::PI * i as f64 / (n - 1) as f64;
        for k in 0..n {
            let phi = std::f64::consts::TAU * k as f64 / n as f64;
            let basis = qubit_basis(theta, phi);
            let cond: f64 = basis
                .iter()
                .map(|v| {
                    let blk = condition_b(m, v);
                    entropy2(&blk) - h(blk[0][0].re + blk[1][1].re)
                })
                .sum();
            best = best.min(cond);
        }
    }
    let j = sa - best;
    GridResult {
        j,
        discord: mi - j,
        mutual_information: mi,
    }
}

pub fn grid_discord(rho: &DensityMatrix, measure_a: bool, n: usize) -> GridResult {
    let m = to_array(rho);
    grid_discord_b(&if measure_a { swap(&m) } else { m }, n)
}
