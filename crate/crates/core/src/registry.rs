//! Name-to-function table of every scalar quantity the library computes.

use serde_json::json;

use crate::activation::{
    classicality_separability_test, min_activated_entanglement, zero_way_equivalence, ActivationMeasure,
};
use crate::entanglement::{
    concurrence, distillable_max_corr, entanglement_entropy, eof_ensemble_opt, eof_two_qubits, is_ppt, negativity,
    relative_entanglement_pure,
};
use crate::entropy::{
    coherent_information, conditional_entropy, jensen_shannon, mutual_information, relative_entropy, von_neumann,
};
use crate::error::{Error, Result};
use crate::io::StateInput;
use crate::koashi_winter::{conservation_law, discord_eof_relation, kw_balance, monogamy_check, single_copy_surrogate};
use crate::optimize::{Diagnostics, OptimizerConfig};
use crate::quantumness::{
    classical_correlations_with, discord_two_sided, discord_with, is_classical, one_way_deficit,
    relative_entropy_of_quantumness, total_work, work_deficit_bound_check, zero_way_deficit, ClassicalSet,
    Classicality, QuantumnessValue, Side, DEFAULT_CLASSICALITY_TOL,
};

/// Arguments shared by all quantities.
#[derive(Debug, Clone)]
pub struct Inputs {
    pub state: StateInput,
    pub reference: Option<StateInput>,
    pub side: Side,
    /// Left side of the bipartition; defaults to `[0]`.
    pub cut: Option<Vec<usize>>,
    pub povm_outcomes: Option<usize>,
    pub config: OptimizerConfig,
}

impl Inputs {
    pub fn new(state: StateInput) -> Self {
        Self {
            state,
            reference: None,
            side: Side::B,
            cut: None,
            povm_outcomes: None,
            config: OptimizerConfig::default(),
        }
    }

    fn cut(&self) -> Vec<usize> {
        self.cut.clone().unwrap_or_else(|| vec![0])
    }

    fn reference(&self) -> Result<&StateInput> {
        self.reference
            .as_ref()
            .ok_or_else(|| Error::Argument("quantity needs a reference state".into()))
    }
}

/// Value of a quantity plus whatever else its computation reports.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub value: f64,
    pub flag: Option<bool>,
    pub details: serde_json::Value,
    pub diagnostics: Option<Diagnostics>,
    /// Optimal angles, when the quantity is optimized.
    pub parameters: Vec<f64>,
}

impl Outcome {
    fn exact(value: f64) -> Self {
        Self {
            value,
            flag: None,
            details: serde_json::Value::Null,
            diagnostics: None,
            parameters: Vec::new(),
        }
    }

    fn optimized(q: QuantumnessValue) -> Self {
        Self {
            value: q.bits,
            flag: None,
            details: json!({ "outcomes": q.outcomes }),
            diagnostics: Some(q.diagnostics),
            parameters: q.parameters,
        }
    }

    fn with_details(mut self, details: serde_json::Value) -> Self {
        self.details = details;
        self
    }

    fn with_flag(mut self, flag: bool) -> Self {
        self.flag = Some(flag);
        self
    }
}

pub struct Quantity {
    pub name: &'static str,
    pub summary: &'static str,
    pub needs_reference: bool,
    run: fn(&Inputs) -> Result<Outcome>,
}

impl Quantity {
    pub fn run(&self, inputs: &Inputs) -> Result<Outcome> {
        (self.run)(inputs)
    }
}

impl std::fmt::Debug for Quantity {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Quantity").field("name", &self.name).finish()
    }
}

fn to_json<T: serde::Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("report types serialize")
}

const fn q(name: &'static str, summary: &'static str, run: fn(&Inputs) -> Result<Outcome>) -> Quantity {
    Quantity {
        name,
        summary,
        needs_reference: false,
        run,
    }
}

const fn q2(name: &'static str, summary: &'static str, run: fn(&Inputs) -> Result<Outcome>) -> Quantity {
    Quantity {
        name,
        summary,
        needs_reference: true,
        run,
    }
}

static QUANTITIES: &[Quantity] = &[
    q("von_neumann", "von Neumann entropy S(rho)", |i| Ok(Outcome::exact(von_neumann(&i.state.density())))),
    q("purity", "Tr(rho^2)", |i| Ok(Outcome::exact(i.state.density().purity()))),
    q("mutual_information", "I(L:R) across --cut", |i| {
        Ok(Outcome::exact(mutual_information(&i.state.density(), &i.cut())?))
    }),
    q("conditional_entropy", "S(L|R) = S(LR) - S(R) across --cut", |i| {
        Ok(Outcome::exact(conditional_entropy(&i.state.density(), &i.cut())?))
    }),
    q("coherent_information", "I(L>R) = -S(L|R) across --cut", |i| {
        Ok(Outcome::exact(coherent_information(&i.state.density(), &i.cut())?))
    }),
    q2("relative_entropy", "S(rho || reference); inf outside the support", |i| {
        Ok(Outcome::exact(relative_entropy(&i.state.density(), &i.reference()?.density())?))
    }),
    q2("jensen_shannon", "Jensen-Shannon divergence of two pure states", |i| {
        Ok(Outcome::exact(jensen_shannon(&i.state.pure()?, &i.reference()?.pure()?)?))
    }),
    q("schmidt", "Schmidt rank of a pure state across --cut; coefficients in details", |i| {
        let s = i.state.pure()?.schmidt(&i.cut())?;
        Ok(Outcome::exact(s.rank() as f64).with_details(json!({ "coefficients": s.coefficients })))
    }),
    q("entanglement_entropy", "entanglement entropy of a pure state across --cut", |i| {
        Ok(Outcome::exact(entanglement_entropy(&i.state.pure()?, &i.cut())?.bits))
    }),
    q("relative_entanglement_pure", "relative entropy of entanglement of a pure state", |i| {
        Ok(Outcome::exact(relative_entanglement_pure(&i.state.pure()?, &i.cut())?.bits))
    }),
    q("concurrence", "two-qubit concurrence", |i| Ok(Outcome::exact(concurrence(&i.state.density())?))),
    q("eof_two_qubits", "two-qubit entanglement of formation (concurrence formula)", |i| {
        Ok(Outcome::exact(eof_two_qubits(&i.state.density())?.bits))
    }),
    q("eof_ensemble_opt", "entanglement of formation by ensemble search; --povm-outcomes sets the ensemble size", |i| {
        let r = eof_ensemble_opt(&i.state.density(), i.povm_outcomes, &i.config)?;
        Ok(Outcome {
            value: r.value.bits,
            flag: None,
            details: json!({ "outcomes": r.outcomes, "weights": r.ensemble.weights }),
            diagnostics: Some(r.diagnostics),
            parameters: Vec::new(),
        })
    }),
    q("negativity", "negativity across --cut", |i| Ok(Outcome::exact(negativity(&i.state.density(), &i.cut())?.bits))),
    q("is_ppt", "positive partial transpose across --cut (value 1 if PPT)", |i| {
        let ppt = is_ppt(&i.state.density(), &i.cut())?;
        Ok(Outcome::exact(if ppt { 1.0 } else { 0.0 }).with_flag(ppt))
    }),
    q("distillable_max_corr", "distillable entanglement of a maximally correlated state across --cut", |i| {
        Ok(Outcome::exact(distillable_max_corr(&i.state.density(), &i.cut())?.bits))
    }),
    q("classical_correlations", "classical correlations J, measuring --side", |i| {
        Ok(Outcome::optimized(classical_correlations_with(&i.state.density(), i.side, i.povm_outcomes, &i.config)?))
    }),
    q("discord", "quantum discord, measuring --side", |i| {
        Ok(Outcome::optimized(discord_with(&i.state.density(), i.side, i.povm_outcomes, &i.config)?))
    }),
    q("discord_two_sided", "two-sided quantum discord", |i| {
        Ok(Outcome::optimized(discord_two_sided(&i.state.density(), &i.config)?))
    }),
    q("one_way_deficit", "one-way work deficit, dephasing --side", |i| {
        Ok(Outcome::optimized(one_way_deficit(&i.state.density(), i.side, &i.config)?))
    }),
    q("zero_way_deficit", "zero-way work deficit", |i| Ok(Outcome::optimized(zero_way_deficit(&i.state.density(), &i.config)?))),
    q("relative_entropy_of_quantumness_qc", "relative entropy of quantumness to quantum-classical states", |i| {
        Ok(Outcome::optimized(relative_entropy_of_quantumness(
            &i.state.density(),
            ClassicalSet::QuantumClassical,
            &i.config,
        )?))
    }),
    q("relative_entropy_of_quantumness_cc", "relative entropy of quantumness to classical-classical states", |i| {
        Ok(Outcome::optimized(relative_entropy_of_quantumness(
            &i.state.density(),
            ClassicalSet::ClassicalClassical,
            &i.config,
        )?))
    }),
    q("total_work", "extractable work log2 N - S(rho)", |i| Ok(Outcome::exact(total_work(&i.state.density())))),
    q("work_deficit_bound_check", "zero-way deficit against the relative entropy of entanglement bound", |i| {
        let b = work_deficit_bound_check(&i.state.density(), &i.config)?;
        Ok(Outcome::exact(b.deficit - b.entanglement).with_flag(b.holds).with_details(to_json(&b)))
    }),
    q("is_classical_cq", "classical on --side: minimal trace distance to its dephasing", |i| {
        let v = is_classical(&i.state.density(), Classicality::ClassicalQuantum(i.side), DEFAULT_CLASSICALITY_TOL, &i.config)?;
        Ok(Outcome {
            value: v.distance,
            flag: Some(v.classical),
            details: serde_json::Value::Null,
            diagnostics: Some(v.diagnostics),
            parameters: Vec::new(),
        })
    }),
    q("is_classical_cc", "classical on both sides: minimal trace distance to a product dephasing", |i| {
        let v = is_classical(&i.state.density(), Classicality::ClassicalClassical, DEFAULT_CLASSICALITY_TOL, &i.config)?;
        Ok(Outcome {
            value: v.distance,
            flag: Some(v.classical),
            details: serde_json::Value::Null,
            diagnostics: Some(v.diagnostics),
            parameters: Vec::new(),
        })
    }),
    q("kw_balance", "Koashi-Winter residual for a three-qubit pure state [A, B, E]", |i| {
        let r = kw_balance(&i.state.pure()?, &i.config)?;
        Ok(Outcome::exact(r.residual_kw).with_details(to_json(&r)))
    }),
    q("discord_eof_relation", "residual of D(A:E) = E_f(AB) - S(A|E)", |i| {
        let r = discord_eof_relation(&i.state.pure()?, &i.config)?;
        Ok(Outcome::exact(r.residual_e4).with_details(to_json(&r)))
    }),
    q("conservation_law", "residual of D(A:E) + D(A:B) = E_f(AE) + E_f(AB)", |i| {
        let r = conservation_law(&i.state.pure()?, &i.config)?;
        Ok(Outcome::exact(r.residual_conservation.unwrap_or(f64::NAN)).with_details(to_json(&r)))
    }),
    q("monogamy_check", "slack S(A) - E_f(AB) - J(A:C) for a state on [A, B, C]", |i| {
        let m = monogamy_check(&i.state.density(), &i.config)?;
        Ok(Outcome::exact(m.slack).with_flag(m.slack >= -1e-3).with_details(to_json(&m)))
    }),
    q("single_copy_surrogate", "single-copy surrogate of the regularized discord relation", |i| {
        let s = single_copy_surrogate(&i.state.pure()?, &i.config)?;
        Ok(Outcome::exact(s.gap).with_details(to_json(&s)))
    }),
    q("min_activated_negativity", "minimal S:M negativity created by the activation interaction", |i| {
        Ok(Outcome::optimized(min_activated_entanglement(&i.state.density(), ActivationMeasure::Negativity, &i.config)?))
    }),
    q("min_activated_distillable", "minimal S:M distillable entanglement created by the activation interaction", |i| {
        Ok(Outcome::optimized(min_activated_entanglement(&i.state.density(), ActivationMeasure::HashingEd, &i.config)?))
    }),
    q("zero_way_equivalence", "residual between the zero-way deficit and the minimal activated distillable entanglement", |i| {
        let e = zero_way_equivalence(&i.state.density(), &i.config)?;
        Ok(Outcome::exact(e.residual).with_details(to_json(&e)))
    }),
    q("classicality_separability_test", "activation verdict: CLASSICAL, NON_CLASSICAL or INCONCLUSIVE", |i| {
        let t = classicality_separability_test(&i.state.density(), &i.config)?;
        Ok(Outcome::exact(t.min_negativity).with_flag(t.consistent).with_details(to_json(&t)))
    }),
];

/// Every registered quantity, in a fixed order.
pub fn quantities() -> &'static [Quantity] {
    QUANTITIES
}

pub fn lookup(name: &str) -> Option<&'static Quantity> {
    QUANTITIES.iter().find(|q| q.name == name)
}

pub fn names() -> Vec<&'static str> {
    QUANTITIES.iter().map(|q| q.name).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    #[test]
    fn names_are_unique() {
        let mut n = names();
        n.sort_unstable();
        let len = n.len();
        n.dedup();
        assert_eq!(n.len(), len);
    }

    #[test]
    fn bell_entries() {
        let mut inputs = Inputs::new(StateInput::Mixed(states::phi_plus()));
        inputs.config = OptimizerConfig::with_seed(1).with_restarts(4);
        let mi = lookup("mutual_information").unwrap().run(&inputs).unwrap();
        assert!((mi.value - 2.0).abs() < 1e-10);
        let d = lookup("discord").unwrap().run(&inputs).unwrap();
        assert!((d.value - 1.0).abs() < 1e-6);
        assert!(d.diagnostics.is_some());
        assert!(lookup("relative_entropy").unwrap().run(&inputs).is_err());
        assert!(lookup("nope").is_none());
    }
}
