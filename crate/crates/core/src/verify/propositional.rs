//! Syntax-circuit reductions against weighted satisfiability, and circuit
//! proof trees against circuit evaluation.

use std::collections::BTreeSet;

use super::gen::{case_rng, circuit as random_circuit, gamma_formula};
use super::{run_cases, CaseReport, Outcome, VerifyOptions};
use crate::formula::{Polarity, PropFormula};
use crate::model::Elem;
use crate::reductions::{
    build_syntax_circuit, circuit_eval, phi_t_inclusion, proof_tree_exists, theta_formula, theta_formula_typed,
    wsat_brute, SyntaxCircuit,
};
use crate::wt::{wd_solve, wt_solve, WdFormula, WtInstance};

pub(crate) const FORMULAS: usize = 200;
pub(crate) const CIRCUITS: usize = 600;
const MAX_VARS: u32 = 6;

/// Distinct stream ranges per suite, so corpora do not overlap.
const LEMMA_STREAM: u64 = 1 << 32;
const THETA_STREAM: u64 = 2 << 32;
const CIRCUIT_STREAM: u64 = 3 << 32;

/// Weighted satisfiability of positive `Γ_{2,1}` formulas against the
/// inclusion-logic team problem on their syntax circuits.
pub(crate) fn lemma(opts: &VerifyOptions) -> Vec<CaseReport> {
    let n = opts.cases.unwrap_or(FORMULAS);
    run_cases(opts, n, |i| {
        let mut rng = case_rng(opts.seed, LEMMA_STREAM + i as u64);
        let psi = gamma_formula(&mut rng, 2, true, MAX_VARS, 3);
        let id = format!("psi={psi}");
        let (circuit, phi) = match (build_syntax_circuit(&psi, 2), phi_t_inclusion(2)) {
            (Ok(c), Ok(f)) => (c, f),
            (Err(e), _) | (_, Err(e)) => return CaseReport::new(i, id, Outcome::Fail, e.to_string()),
        };
        let mut report = CaseReport::new(i, id.clone(), Outcome::Pass, "");
        let mut wrong = Vec::new();
        for k in 1..=circuit.input_count() {
            let instance = WtInstance {
                structure: circuit.structure().clone(),
                formula: phi.clone(),
                k,
            };
            let team = match wt_solve(&instance) {
                Ok(t) => t.is_some(),
                Err(e) => return CaseReport::new(i, id, Outcome::Fail, format!("k={k}: {e}")),
            };
            let wsat = wsat_brute(&psi, k);
            if team != wsat {
                wrong.push(format!("k={k}: wsat {wsat}, team {team}"));
            }
            report = report.tag("pairs");
        }
        if !wrong.is_empty() {
            report.outcome = Outcome::Fail;
            report.detail = wrong.join("; ");
        }
        report
    })
}

/// `(label, depth, polarity)` groups of the theta suite.
pub(crate) const THETA_GROUPS: [(&str, usize, Polarity); 3] = [
    ("neg t=1", 1, Polarity::Negative),
    ("neg t=3", 3, Polarity::Negative),
    ("pos t=2", 2, Polarity::Positive),
];

fn non_variables(circuit: &SyntaxCircuit, s: &BTreeSet<Vec<Elem>>) -> Vec<String> {
    let a = circuit.structure();
    let inputs = a.relation("I").expect("syntax circuits have I");
    s.iter().filter(|t| !inputs.contains(t)).map(|t| a.label(t[0])).collect()
}

fn interpretation(circuit: &SyntaxCircuit, s: &BTreeSet<Vec<Elem>>) -> String {
    let labels: Vec<String> = s.iter().map(|t| circuit.structure().label(t[0])).collect();
    format!("{{{}}}", labels.join(","))
}

/// Weighted satisfiability against weighted Fagin definability by the
/// sentence θ over the syntax circuit.
///
/// The negative groups also run the variant of θ that restricts S to the
/// variables. Its agreement is tagged separately and never decides a case.
pub(crate) fn theta(opts: &VerifyOptions) -> Vec<CaseReport> {
    let per = opts.cases.unwrap_or(FORMULAS / 2);
    run_cases(opts, per * THETA_GROUPS.len(), |i| {
        let (label, t, polarity) = THETA_GROUPS[i / per];
        let mut rng = case_rng(opts.seed, THETA_STREAM + i as u64);
        let positive = polarity == Polarity::Positive;
        let fan = if t == 1 { 4 } else { 2 };
        let psi = gamma_formula(&mut rng, t, positive, MAX_VARS, fan);
        theta_case(i, label, t, polarity, &psi)
    })
}

fn theta_case(i: usize, label: &str, t: usize, polarity: Polarity, psi: &PropFormula) -> CaseReport {
    let id = format!("{label} psi={psi}");
    let fail = |e: String| CaseReport::new(i, id.clone(), Outcome::Fail, e);
    let circuit = match build_syntax_circuit(psi, t) {
        Ok(c) => c,
        Err(e) => return fail(e.to_string()),
    };
    let theta = match theta_formula(t, polarity) {
        Ok(f) => f,
        Err(e) => return fail(e.to_string()),
    };
    let typed: Option<WdFormula> = match polarity {
        Polarity::Negative => match theta_formula_typed(t) {
            Ok(f) => Some(f),
            Err(e) => return fail(e.to_string()),
        },
        _ => None,
    };
    let mut report = CaseReport::new(i, id.clone(), Outcome::Pass, "");
    let mut wrong = Vec::new();
    for k in 1..=circuit.input_count() {
        let wsat = wsat_brute(psi, k);
        let found = match wd_solve(circuit.structure(), &theta, k) {
            Ok(s) => s,
            Err(e) => return fail(format!("k={k}: {e}")),
        };
        report = report.tag("pairs");
        if found.is_some() != wsat {
            report = report.tag("disagreements");
            let mut line = format!("k={k}: wsat {wsat}, wd {}", found.is_some());
            if let Some(s) = &found {
                let junk = non_variables(&circuit, s);
                line.push_str(&format!(" with S={}", interpretation(&circuit, s)));
                if !wsat && !junk.is_empty() {
                    report = report.tag("disagreements_outside_i");
                }
            }
            wrong.push(line);
        }
        if let Some(typed) = &typed {
            match wd_solve(circuit.structure(), typed, k) {
                Ok(s) if s.is_some() == wsat => report = report.tag("typed_agreements"),
                Ok(_) => report = report.tag("typed_disagreements"),
                Err(e) => return fail(format!("k={k} (typed): {e}")),
            }
        }
    }
    if !wrong.is_empty() {
        report.outcome = Outcome::Fail;
        report.detail = wrong.join("; ");
    }
    report
}

/// Circuit evaluation against proof-tree search on every input set.
pub(crate) fn circuit(opts: &VerifyOptions) -> Vec<CaseReport> {
    let n = opts.cases.unwrap_or(CIRCUITS);
    run_cases(opts, n, |i| {
        let mut rng = case_rng(opts.seed, CIRCUIT_STREAM + i as u64);
        let c = random_circuit(&mut rng, 6);
        let inputs: Vec<u32> = c.inputs().into_iter().collect();
        let id = format!("{} gates", c.gate_count());
        let mut report = CaseReport::new(i, id.clone(), Outcome::Pass, "");
        for mask in 0u32..1 << inputs.len() {
            let s: BTreeSet<u32> = inputs
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &g)| g)
                .collect();
            match (circuit_eval(&c, &s), proof_tree_exists(&c, &s)) {
                (Ok(v), Ok(p)) if v == p => report = report.tag("input_sets"),
                (Ok(v), Ok(p)) => {
                    let shown = c.to_string().replace('\n', "; ");
                    return CaseReport::new(i, id, Outcome::Fail, format!("{shown} S={s:?}: eval {v}, proof tree {p}"));
                }
                (Err(e), _) | (_, Err(e)) => return CaseReport::new(i, id, Outcome::Fail, e.to_string()),
            }
        }
        report
    })
}
