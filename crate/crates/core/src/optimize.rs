//! Multi-start Nelder-Mead minimization over small unconstrained parameter spaces.
//!
//! Restarts run in parallel; restart `i` draws its initial point from the child
//! stream `i` of the master seed, so a run with `k` restarts evaluates exactly the
//! first `k` restarts of any longer run. The reduction is a minimum with ties broken
//! by the lowest restart index, independent of scheduling.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::random::RandomSource;

/// Parameters of the multi-start search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub max_iterations: usize,
    /// Stop when the spread of objective values across the simplex drops below this.
    pub f_tol: f64,
    /// Edge length of the initial simplex, in radians.
    pub simplex_scale: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 2000,
            f_tol: 1e-9,
            simplex_scale: 0.3,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn with_restarts(mut self, restarts: usize) -> Self {
        self.restarts = restarts;
        self
    }

    /// Same settings on an independent seed stream; used to decorrelate nested searches.
    pub fn derived(&self, index: u64) -> Self {
        Self {
            seed: RandomSource::child_seed(self.seed, index),
            ..self.clone()
        }
    }
}

/// Outcome of a single local Nelder-Mead run.
#[derive(Debug, Clone)]
pub struct LocalMinimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub iterations: usize,
    /// Spread of objective values over the final simplex.
    pub achieved_tol: f64,
}

/// Convergence diagnostics of a multi-start search.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub best_restart: usize,
    pub iterations: usize,
    pub achieved_tol: f64,
    pub restarts: usize,
    /// Gap between the best and second-best restart values.
    pub top_two_gap: f64,
}

/// Best point found by a multi-start search plus the per-restart values.
#[derive(Debug, Clone)]
pub struct SearchResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub restart_values: Vec<f64>,
    pub diagnostics: Diagnostics,
}

/// Nelder-Mead from `x0` with an axis-aligned initial simplex of edge `scale`.
///
/// After the simplex collapses the search is restarted once from the best vertex
/// with a smaller simplex; this recovers from premature collapse on flat valleys.
pub fn nelder_mead<F>(f: &F, x0: &[f64], scale: f64, max_iterations: usize, f_tol: f64) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut best = nelder_mead_once(f, x0, scale, max_iterations, f_tol);
    let mut used = best.iterations;
    let mut rescale = scale * 0.1;
    while used < max_iterations {
        let again = nelder_mead_once(f, &best.x, rescale, max_iterations - used, f_tol);
        used += again.iterations;
        let improved = best.value - again.value;
        if again.value <= best.value {
            best = LocalMinimum { iterations: used, ..again };
        }
        if improved <= f_tol {
            break;
        }
        rescale *= 0.5;
    }
    best.iterations = used;
    best
}

fn nelder_mead_once<F>(f: &F, x0: &[f64], scale: f64, max_iterations: usize, f_tol: f64) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let n = x0.len();
    if n == 0 {
        return LocalMinimum {
            x: Vec::new(),
            value: f(x0),
            iterations: 0,
            achieved_tol: 0.0,
        };
    }
    let mut pts: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    pts.push(x0.to_vec());
    for i in 0..n {
        let mut p = x0.to_vec();
        p[i] += scale;
        pts.push(p);
    }
    let mut vals: Vec<f64> = pts.iter().map(|p| f(p)).collect();
    let mut iterations = 0;
    let mut order: Vec<usize> = (0..=n).collect();
    let mut centroid = vec![0.0; n];
    let mut trial = vec![0.0; n];
    let mut trial2 = vec![0.0; n];
    loop {
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        let (ib, iw, isw) = (order[0], order[n], order[n - 1]);
        let spread = vals[iw] - vals[ib];
        if spread <= f_tol || iterations >= max_iterations {
            let x = pts[ib].clone();
            return LocalMinimum {
                x,
                value: vals[ib],
                iterations,
                achieved_tol: spread,
            };
        }
        iterations += 1;
        centroid.iter_mut().for_each(|c| *c = 0.0);
        for &k in &order[..n] {
            for (c, v) in centroid.iter_mut().zip(&pts[k]) {
                *c += v / n as f64;
            }
        }
        let along = |t: f64, out: &mut Vec<f64>, pw: &[f64]| {
            for ((o, c), w) in out.iter_mut().zip(&centroid).zip(pw) {
                *o = c + t * (c - w);
            }
        };
        along(1.0, &mut trial, &pts[iw]);
        let fr = f(&trial);
        if fr < vals[ib] {
            along(2.0, &mut trial2, &pts[iw]);
            let fe = f(&trial2);
            if fe < fr {
                pts[iw].copy_from_slice(&trial2);
                vals[iw] = fe;
            } else {
                pts[iw].copy_from_slice(&trial);
                vals[iw] = fr;
            }
            continue;
        }
        if fr < vals[isw] {
            pts[iw].copy_from_slice(&trial);
            vals[iw] = fr;
            continue;
        }
        // contraction, outside or inside
        let (t, reference) = if fr < vals[iw] { (0.5, fr) } else { (-0.5, vals[iw]) };
        along(t, &mut trial2, &pts[iw]);
        let fc = f(&trial2);
        if fc < reference {
            pts[iw].copy_from_slice(&trial2);
            vals[iw] = fc;
            continue;
        }
        let best = pts[ib].clone();
        for &k in &order[1..] {
            for (p, b) in pts[k].iter_mut().zip(&best) {
                *p = b + 0.5 * (*p - b);
            }
            vals[k] = f(&pts[k]);
        }
    }
}

/// Uniform random angles in `[0, 2pi)`.
pub fn random_angles(n: usize, rng: &mut RandomSource) -> Vec<f64> {
    (0..n).map(|_| rng.uniform_in(0.0, TAU)).collect()
}

/// Multi-start minimization from `warm_starts` followed by `config.restarts`
/// random starting points drawn by `init`.
pub fn minimize<F, I>(f: &F, warm_starts: &[Vec<f64>], init: I, config: &OptimizerConfig) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
    I: Fn(&mut RandomSource) -> Vec<f64> + Sync,
{
    let master = RandomSource::new(config.seed);
    let total = warm_starts.len() + config.restarts;
    let runs: Vec<LocalMinimum> = (0..total)
        .into_par_iter()
        .map(|i| {
            let x0 = if i < warm_starts.len() {
                warm_starts[i].clone()
            } else {
                init(&mut master.child((i - warm_starts.len()) as u64))
            };
            nelder_mead(f, &x0, config.simplex_scale, config.max_iterations, config.f_tol)
        })
        .collect();
    reduce(runs)
}

/// Restarts Nelder-Mead from its own optimum with a halving simplex. On non-smooth
/// objectives a collapsed simplex can stall away from the minimum; a fresh simplex
/// usually moves on.
pub fn polish<F>(f: &F, x0: &[f64], config: &OptimizerConfig) -> LocalMinimum
where
    F: Fn(&[f64]) -> f64 + ?Sized,
{
    let mut best = LocalMinimum {
        x: x0.to_vec(),
        value: f(x0),
        iterations: 0,
        achieved_tol: 0.0,
    };
    let mut scale = config.simplex_scale;
    for _ in 0..POLISH_ROUNDS {
        let r = nelder_mead(f, &best.x, scale, config.max_iterations, config.f_tol * 1e-3);
        let iterations = best.iterations + r.iterations;
        if r.value < best.value {
            best = r;
        }
        best.iterations = iterations;
        scale *= 0.5;
    }
    best
}

const POLISH_ROUNDS: usize = 6;

/// Multi-start minimization over angle parameters with uniform random starts.
pub fn minimize_angles<F>(f: &F, n_params: usize, config: &OptimizerConfig) -> SearchResult
where
    F: Fn(&[f64]) -> f64 + Sync + ?Sized,
{
    minimize(f, &[], |rng| random_angles(n_params, rng), config)
}

fn reduce(runs: Vec<LocalMinimum>) -> SearchResult {
    let mut best = 0;
    for (i, r) in runs.iter().enumerate() {
        // strict comparison keeps the lowest index on ties
        if r.value < runs[best].value || runs[best].value.is_nan() {
            best = i;
        }
    }
    let restart_values: Vec<f64> = runs.iter().map(|r| r.value).collect();
    let second = restart_values
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != best)
        .map(|(_, &v)| v)
        .fold(f64::INFINITY, f64::min);
    let b = &runs[best];
    SearchResult {
        x: b.x.clone(),
        value: b.value,
        diagnostics: Diagnostics {
            best_restart: best,
            iterations: b.iterations,
            achieved_tol: b.achieved_tol,
            restarts: runs.len(),
            top_two_gap: if second.is_finite() { second - b.value } else { 0.0 },
        },
        restart_values,
    }
}
