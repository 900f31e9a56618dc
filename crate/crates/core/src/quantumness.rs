//! Classical correlations, quantum discord, work deficits and classicality tests.
//!
//! All quantities are optimized over angle-parametrized local measurements with the
//! multi-start simplex search. Reported values are one-sided bounds: lower bounds for
//! the classical correlations `J`, upper bounds for discord and the deficits.

use serde::{Deserialize, Serialize};

use crate::channels::{dephase, ProjectiveBasis};
use crate::entropy::{eta, matrix_entropy, shannon, von_neumann};
use crate::error::{Error, Result};
use crate::hilbert::{trace_norm, CMatrix, CVector, DensityMatrix, PureState, ZERO};
use crate::optimize::{minimize, minimize_angles, polish, Diagnostics, OptimizerConfig};
use crate::param::MeasurementParametrization;

/// One of the two parties of a bipartite state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn index(self) -> usize {
        match self {
            Side::A => 0,
            Side::B => 1,
        }
    }

    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

impl std::str::FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(Side::A),
            "B" | "b" => Ok(Side::B),
            other => Err(Error::Argument(format!("unknown side {other:?}, expected A or B"))),
        }
    }
}

/// An optimized quantumness or classical-correlation value with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuantumnessValue {
    pub bits: f64,
    pub diagnostics: Diagnostics,
    /// Measurement angles at the optimum (both sides concatenated for product measurements).
    pub parameters: Vec<f64>,
    /// Outcome count of the measurement class searched.
    pub outcomes: usize,
}

impl QuantumnessValue {
    fn new(bits: f64, diagnostics: Diagnostics, parameters: Vec<f64>, outcomes: usize) -> Self {
        Self {
            bits: if bits < 0.0 { 0.0 } else { bits },
            diagnostics,
            parameters,
            outcomes,
        }
    }
}

/// Checks for two subsystems and returns the state reordered so that `measured`
/// is the second factor.
fn oriented(rho: &DensityMatrix, measured: Side) -> Result<DensityMatrix> {
    if rho.num_subsystems() != 2 {
        return Err(Error::Argument(format!(
            "expected a bipartite state, got dims {:?}",
            rho.dims()
        )));
    }
    match measured {
        Side::B => Ok(rho.clone()),
        Side::A => rho.permute(&[1, 0]),
    }
}

/// `(I (x) <m|) rho (I (x) |m>)` for a state on `C^da (x) C^db`.
pub(crate) fn conditional_block(rho: &CMatrix, da: usize, db: usize, m: &CVector) -> CMatrix {
    let mut out = CMatrix::zeros(da, da);
    for a in 0..da {
        for a2 in 0..da {
            let mut acc = ZERO;
            for b in 0..db {
                let left = m[b].conj();
                for b2 in 0..db {
                    acc += left * rho[(a * db + b, a2 * db + b2)] * m[b2];
                }
            }
            out[(a, a2)] = acc;
        }
    }
    out
}

/// `sum_x p_x S(rho_x^A)` for the rank-1 measurement `{|m_x><m_x|}` on the second factor.
fn average_conditional_entropy(rho: &CMatrix, da: usize, db: usize, vectors: &[CVector]) -> f64 {
    vectors
        .iter()
        .map(|m| {
            let block = conditional_block(rho, da, db, m);
            let p = block.trace().re;
            matrix_entropy(&block) - eta(p)
        })
        .sum()
}

/// Probabilities of the product measurement `{|a_x> (x) |b_y>}`, row-major in `(x, y)`.
fn product_probabilities(rho: &CMatrix, va: &[CVector], vb: &[CVector]) -> Vec<f64> {
    let mut out = Vec::with_capacity(va.len() * vb.len());
    for a in va {
        for b in vb {
            let w = a.kronecker(b);
            out.push((w.adjoint() * rho * &w)[(0, 0)].re.max(0.0));
        }
    }
    out
}

fn marginals(p: &[f64], na: usize, nb: usize) -> (Vec<f64>, Vec<f64>) {
    let mut pa = vec![0.0; na];
    let mut pb = vec![0.0; nb];
    for x in 0..na {
        for y in 0..nb {
            pa[x] += p[x * nb + y];
            pb[y] += p[x * nb + y];
        }
    }
    (pa, pb)
}

/// Classical correlations `J` with projective measurements on `measured`.
pub fn classical_correlations(rho: &DensityMatrix, measured: Side, config: &OptimizerConfig) -> Result<QuantumnessValue> {
    classical_correlations_with(rho, measured, None, config)
}

/// Classical correlations `J = max S(rho_A) - sum_x p_x S(rho_x^A)` over rank-1
/// measurements with `outcomes` elements (default: projective) on `measured`.
pub fn classical_correlations_with(
    rho: &DensityMatrix,
    measured: Side,
    outcomes: Option<usize>,
    config: &OptimizerConfig,
) -> Result<QuantumnessValue> {
    let o = oriented(rho, measured)?;
    let (da, db) = (o.dims()[0], o.dims()[1]);
    let param = MeasurementParametrization::new(db, outcomes.unwrap_or(db))?;
    let s_a = von_neumann(&o.partial_trace(&[0])?);
    let m = o.matrix();
    let f = |x: &[f64]| average_conditional_entropy(m, da, db, &param.vectors(x));
    let r = minimize_angles(&f, param.num_params(), config);
    Ok(QuantumnessValue::new(s_a - r.value, r.diagnostics, r.x, param.outcomes))
}

/// One-sided discord `D = I(A:B) - J` with the measurement on `measured`.
pub fn discord(rho: &DensityMatrix, measured: Side, config: &OptimizerConfig) -> Result<QuantumnessValue> {
    discord_with(rho, measured, None, config)
}

pub fn discord_with(
    rho: &DensityMatrix,
    measured: Side,
    outcomes: Option<usize>,
    config: &OptimizerConfig,
) -> Result<QuantumnessValue> {
    let j = classical_correlations_with(rho, measured, outcomes, config)?;
    let i = crate::entropy::mutual_information(rho, &[0])?;
    Ok(QuantumnessValue::new(i - j.bits, j.diagnostics, j.parameters, j.outcomes))
}

fn product_search<F>(rho: &DensityMatrix, config: &OptimizerConfig, objective: F) -> Result<(crate::optimize::SearchResult, MeasurementParametrization, MeasurementParametrization)>
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    let pa = MeasurementParametrization::projective(rho.dims()[0]);
    let pb = MeasurementParametrization::projective(rho.dims()[1]);
    let r = minimize_angles(&objective, pa.num_params() + pb.num_params(), config);
    Ok((r, pa, pb))
}

fn split_product(x: &[f64], pa: &MeasurementParametrization) -> (Vec<f64>, Vec<f64>) {
    let k = pa.num_params();
    (x[..k].to_vec(), x[k..].to_vec())
}

/// Two-sided discord: `min I(A:B) - I(A:B)` of the product-measured state, over
/// projective measurements on both parties.
pub fn discord_two_sided(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<QuantumnessValue> {
    let o = oriented(rho, Side::B)?;
    let i_ab = crate::entropy::mutual_information(&o, &[0])?;
    let pa = MeasurementParametrization::projective(o.dims()[0]);
    let pb = MeasurementParametrization::projective(o.dims()[1]);
    let m = o.matrix();
    let f = |x: &[f64]| {
        let (xa, xb) = split_product(x, &pa);
        let p = product_probabilities(m, &pa.vectors(&xa), &pb.vectors(&xb));
        let (ma, mb) = marginals(&p, pa.outcomes, pb.outcomes);
        // minimize I(A:B) - I(X:Y) == maximize I(X:Y)
        -(shannon(&ma) + shannon(&mb) - shannon(&p))
    };
    let (r, pa, _) = product_search(&o, config, f)?;
    Ok(QuantumnessValue::new(i_ab + r.value, r.diagnostics, r.x, pa.outcomes))
}

/// One-way work deficit: `min S(dephase_measured(rho)) - S(rho)` over projective
/// dephasings of `measured`.
pub fn one_way_deficit(rho: &DensityMatrix, measured: Side, config: &OptimizerConfig) -> Result<QuantumnessValue> {
    let o = oriented(rho, measured)?;
    let (da, db) = (o.dims()[0], o.dims()[1]);
    let param = MeasurementParametrization::projective(db);
    let m = o.matrix();
    let f = |x: &[f64]| {
        param
            .vectors(x)
            .iter()
            .map(|v| matrix_entropy(&conditional_block(m, da, db, v)))
            .sum::<f64>()
    };
    let r = minimize_angles(&f, param.num_params(), config);
    Ok(QuantumnessValue::new(r.value - von_neumann(&o), r.diagnostics, r.x, db))
}

/// Zero-way work deficit: `min S(Pi_A (x) Pi_B [rho]) - S(rho)` over product
/// projective dephasings.
pub fn zero_way_deficit(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<QuantumnessValue> {
    let o = oriented(rho, Side::B)?;
    let pa = MeasurementParametrization::projective(o.dims()[0]);
    let pb = MeasurementParametrization::projective(o.dims()[1]);
    let m = o.matrix();
    let f = |x: &[f64]| {
        let (xa, xb) = split_product(x, &pa);
        shannon(&product_probabilities(m, &pa.vectors(&xa), &pb.vectors(&xb)))
    };
    let (r, pa, _) = product_search(&o, config, f)?;
    Ok(QuantumnessValue::new(r.value - von_neumann(&o), r.diagnostics, r.x, pa.outcomes))
}

/// Bases on A and B encoded by the parameters of a product search.
pub fn product_bases(rho: &DensityMatrix, parameters: &[f64]) -> Result<(ProjectiveBasis, ProjectiveBasis)> {
    let o = oriented(rho, Side::B)?;
    let pa = MeasurementParametrization::projective(o.dims()[0]);
    let pb = MeasurementParametrization::projective(o.dims()[1]);
    let (xa, xb) = split_product(parameters, &pa);
    Ok((pa.basis(&xa).expect("projective"), pb.basis(&xb).expect("projective")))
}

/// Set of classical states a relative entropy of quantumness is measured against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ClassicalSet {
    /// Classical on B (quantum-classical states).
    QuantumClassical,
    ClassicalClassical,
}

/// Relative entropy of quantumness, evaluated through its equality with the
/// one-way (QC) or zero-way (CC) work deficit.
pub fn relative_entropy_of_quantumness(
    rho: &DensityMatrix,
    set: ClassicalSet,
    config: &OptimizerConfig,
) -> Result<QuantumnessValue> {
    match set {
        ClassicalSet::QuantumClassical => one_way_deficit(rho, Side::B, config),
        ClassicalSet::ClassicalClassical => zero_way_deficit(rho, config),
    }
}

/// Total extractable work `log2 N - S(rho)`.
pub fn total_work(rho: &DensityMatrix) -> f64 {
    (rho.dim() as f64).log2() - von_neumann(rho)
}

/// Result of comparing the zero-way deficit with an entanglement lower bound.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeficitBound {
    pub deficit: f64,
    /// Exact `E_r = S(rho_A)` for pure inputs; the hashing bound `max(0, I(A>B))`
    /// (a lower bound on `E_r`) otherwise.
    pub entanglement: f64,
    pub exact: bool,
    pub holds: bool,
}

/// Checks `Delta(rho) >= E_r(rho)` up to 1e-6.
pub fn work_deficit_bound_check(rho: &DensityMatrix, config: &OptimizerConfig) -> Result<DeficitBound> {
    let deficit = zero_way_deficit(rho, config)?.bits;
    let exact = (rho.purity() - 1.0).abs() < 1e-10;
    let entanglement = if exact {
        von_neumann(&rho.partial_trace(&[0])?)
    } else {
        crate::entropy::coherent_information(rho, &[0])?.max(0.0)
    };
    Ok(DeficitBound {
        deficit,
        entanglement,
        exact,
        holds: deficit >= entanglement - 1e-6,
    })
}

/// Which classicality notion to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Classicality {
    /// Invariant under a projective dephasing of the given (classical) side.
    ClassicalQuantum(Side),
    /// Invariant under a product projective dephasing of both sides.
    ClassicalClassical,
}

/// Outcome of a classicality test.
#[derive(Debug, Clone)]
pub struct ClassicalityVerdict {
    pub classical: bool,
    /// `min || dephase(rho) - rho ||_1` found.
    pub distance: f64,
    /// Optimal bases: one for CQ (of the classical side), `[A, B]` for CC.
    pub bases: Vec<ProjectiveBasis>,
    pub diagnostics: Diagnostics,
}

pub const DEFAULT_CLASSICALITY_TOL: f64 = 1e-6;

/// Decides whether `rho` is classical-quantum or classical-classical up to `tol`
/// in trace norm.
pub fn is_classical(
    rho: &DensityMatrix,
    kind: Classicality,
    tol: f64,
    config: &OptimizerConfig,
) -> Result<ClassicalityVerdict> {
    let side = match kind {
        Classicality::ClassicalQuantum(s) => s,
        Classicality::ClassicalClassical => Side::B,
    };
    let o = oriented(rho, side)?;
    let (da, db) = (o.dims()[0], o.dims()[1]);
    let purity = o.purity();
    let m = o.matrix();
    let pa = MeasurementParametrization::projective(da);
    let pb = MeasurementParametrization::projective(db);
    let both = kind == Classicality::ClassicalClassical;

    let bases_of = |x: &[f64]| -> Vec<ProjectiveBasis> {
        if both {
            let (xa, xb) = split_product(x, &pa);
            vec![pa.basis(&xa).expect("projective"), pb.basis(&xb).expect("projective")]
        } else {
            vec![pb.basis(x).expect("projective")]
        }
    };
    // squared Hilbert-Schmidt distance to the dephased state; smooth, zero iff classical
    let surrogate = |x: &[f64]| -> f64 {
        if both {
            let (xa, xb) = split_product(x, &pa);
            let p = product_probabilities(m, &pa.vectors(&xa), &pb.vectors(&xb));
            purity - p.iter().map(|q| q * q).sum::<f64>()
        } else {
            let kept: f64 = pb
                .vectors(x)
                .iter()
                .map(|v| conditional_block(m, da, db, v).iter().map(|z| z.norm_sqr()).sum::<f64>())
                .sum();
            purity - kept
        }
    };
    let exact = |x: &[f64]| -> f64 {
        let bases = bases_of(x);
        let deph = if both {
            dephase(&dephase(&o, &bases[0], 0).expect("dims"), &bases[1], 1).expect("dims")
        } else {
            dephase(&o, &bases[0], 1).expect("dims")
        };
        trace_norm(&(deph.matrix() - m))
    };
    let n_params = if both { pa.num_params() + pb.num_params() } else { pb.num_params() };
    let coarse = minimize_angles(&surrogate, n_params, &squared_tolerance(config));
    let polished = polish(&exact, &coarse.x, config);
    let (x, distance) = (polished.x, polished.value);
    let mut bases = bases_of(&x);
    if side == Side::A && both {
        bases.reverse();
    }
    Ok(ClassicalityVerdict {
        classical: distance <= tol,
        distance,
        bases,
        diagnostics: coarse.diagnostics,
    })
}

/// Settings for minimizing a squared distance whose root is the quantity of interest.
pub(crate) fn squared_tolerance(config: &OptimizerConfig) -> OptimizerConfig {
    OptimizerConfig {
        f_tol: config.f_tol * config.f_tol,
        ..config.clone()
    }
}

/// Zero-way deficit of a pure state equals its entanglement entropy; exposed for
/// consistency checks of the deficit optimizer.
pub fn pure_state_deficit(psi: &PureState) -> Result<f64> {
    Ok(von_neumann(&psi.reduced(&[0])?))
}

/// Re-runs a zero-way deficit search seeded from given starting angles.
pub fn zero_way_deficit_from(rho: &DensityMatrix, starts: &[Vec<f64>], config: &OptimizerConfig) -> Result<QuantumnessValue> {
    let o = oriented(rho, Side::B)?;
    let pa = MeasurementParametrization::projective(o.dims()[0]);
    let pb = MeasurementParametrization::projective(o.dims()[1]);
    let m = o.matrix();
    let n = pa.num_params() + pb.num_params();
    let f = |x: &[f64]| {
        let (xa, xb) = split_product(x, &pa);
        shannon(&product_probabilities(m, &pa.vectors(&xa), &pb.vectors(&xb)))
    };
    let r = minimize(&f, starts, |rng| crate::optimize::random_angles(n, rng), config);
    Ok(QuantumnessValue::new(r.value - von_neumann(&o), r.diagnostics, r.x, pa.outcomes))
}
