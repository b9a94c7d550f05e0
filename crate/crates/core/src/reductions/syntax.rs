//! Syntax circuits of propositional formulas and the first-order sentences
//! that read a weighted assignment off them.

use std::collections::{BTreeMap, BTreeSet};

use super::graph::combinations;
use super::ReductionError;
use crate::formula::{Formula, Polarity, Prop, PropFormula, Term};
use crate::model::{Elem, Structure};
use crate::wt::WdFormula;

/// Relational encoding of a formula in `Γ_{t,1}`: one element per
/// connective of an explicitly layered tree and one per variable.
///
/// `E(a, b)` holds when `b` is an immediate subformula of `a`, `I` holds of
/// the variables, and the constant `o` is the root conjunction. Every path
/// from the root has exactly `t` edges; layers that the formula skips are
/// filled with unary connectives.
#[derive(Debug, Clone)]
pub struct SyntaxCircuit {
    structure: Structure,
    depth: usize,
    variables: BTreeMap<u32, Elem>,
}

impl SyntaxCircuit {
    pub fn structure(&self) -> &Structure {
        &self.structure
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    /// Element standing for propositional variable `v`.
    pub fn variable_element(&self, v: u32) -> Option<Elem> {
        self.variables.get(&v).copied()
    }

    pub fn input_count(&self) -> usize {
        self.variables.len()
    }

    /// The variables whose elements lie in `set`.
    pub fn true_variables(&self, set: impl IntoIterator<Item = Elem>) -> BTreeSet<u32> {
        let set: BTreeSet<Elem> = set.into_iter().collect();
        self.variables
            .iter()
            .filter(|(_, e)| set.contains(e))
            .map(|(&v, _)| v)
            .collect()
    }
}

struct Builder {
    depth: usize,
    nodes: usize,
    edges: Vec<(usize, Node)>,
}

enum Node {
    Gate(usize),
    Var(u32),
}

impl Builder {
    /// Node for `p` at `level`, whose connective is `∧` when `conj`.
    fn build(&mut self, p: &Prop, level: usize, conj: bool) -> Node {
        if level == self.depth {
            match p {
                Prop::Lit { var, .. } => return Node::Var(*var),
                _ => unreachable!("membership was checked"),
            }
        }
        let id = self.nodes;
        self.nodes += 1;
        let own_kind = matches!((p, conj), (Prop::And(_), true) | (Prop::Or(_), false));
        if own_kind {
            for c in p.children() {
                let child = self.build(c, level + 1, !conj);
                self.edges.push((id, child));
            }
        } else {
            let child = self.build(p, level + 1, !conj);
            self.edges.push((id, child));
        }
        Node::Gate(id)
    }
}

/// Syntax circuit of `p` laid out with `t` layers.
pub fn build_syntax_circuit(p: &PropFormula, t: usize) -> Result<SyntaxCircuit, ReductionError> {
    if t == 0 {
        return Err(ReductionError::ZeroDepth);
    }
    if p.polarity() == Polarity::Mixed {
        return Err(ReductionError::MixedPolarity);
    }
    if !p.in_gamma(t, 1) {
        return Err(ReductionError::NotGammaOne { t });
    }
    let mut b = Builder {
        depth: t,
        nodes: 0,
        edges: Vec::new(),
    };
    b.build(p.root(), 0, true);
    let gates = b.nodes;
    let variables: BTreeMap<u32, Elem> = p
        .variables()
        .into_iter()
        .enumerate()
        .map(|(i, v)| (v, (gates + i) as Elem))
        .collect();
    let elem = |n: &Node| match n {
        Node::Gate(g) => *g as Elem,
        Node::Var(v) => variables[v],
    };
    let edges: Vec<Vec<Elem>> = b.edges.iter().map(|(a, c)| vec![*a as Elem, elem(c)]).collect();
    let mut labels = vec!["root".to_string()];
    labels.extend((1..gates).map(|g| format!("n{g}")));
    labels.extend(variables.keys().map(|v| format!("x{v}")));
    let structure = Structure::new(gates + variables.len())?
        .with_relation("E", 2, edges)?
        .with_relation("I", 1, variables.values().map(|&e| vec![e]))?
        .with_constant("o", 0)?
        .with_labels(labels)?;
    Ok(SyntaxCircuit {
        structure,
        depth: t,
        variables,
    })
}

fn x(i: usize) -> String {
    format!("x{i}")
}

fn edge(i: usize) -> Formula {
    let pred = if i == 1 { Term::constant("o") } else { Term::var(x(i - 1)) };
    Formula::Rel("E".into(), vec![pred, Term::var(x(i))])
}

/// `∀x₁(¬E(o,x₁) ∨ ∃x₂(E(x₁,x₂) ∧ ⋯ Qx_t(E(x_{t−1},x_t) ∧ I(x_t) ∧ ±S(x_t))⋯))`.
pub fn theta_formula(t: usize, polarity: Polarity) -> Result<WdFormula, ReductionError> {
    if t == 0 {
        return Err(ReductionError::ZeroDepth);
    }
    let s = match polarity {
        Polarity::Positive => Formula::Rel("S".into(), vec![Term::var(x(t))]),
        Polarity::Negative => Formula::NegRel("S".into(), vec![Term::var(x(t))]),
        Polarity::Mixed => return Err(ReductionError::MixedPolarity),
    };
    let typed = Formula::Rel("I".into(), vec![Term::var(x(t))]);
    let mut body: Option<Formula> = None;
    for i in (1..=t).rev() {
        let f = if i % 2 == 1 {
            let guard = match edge(i) {
                Formula::Rel(n, a) => Formula::NegRel(n, a),
                _ => unreachable!("edge builds a relation atom"),
            };
            let rest = body.take().unwrap_or_else(|| Formula::and(typed.clone(), s.clone()));
            Formula::forall(x(i), Formula::or(guard, rest))
        } else {
            let rest = match body.take() {
                Some(inner) => Formula::and(edge(i), inner),
                None => Formula::conj([edge(i), typed.clone(), s.clone()]),
            };
            Formula::exists(x(i), rest)
        };
        body = Some(f);
    }
    Ok(WdFormula::new(body.expect("t ≥ 1"), "S", 1))
}

/// Negative θ with `∀w(¬S(w) ∨ I(w))` conjoined, so `S` can only hold of
/// variables.
pub fn theta_formula_typed(t: usize) -> Result<WdFormula, ReductionError> {
    let theta = theta_formula(t, Polarity::Negative)?;
    let typing = Formula::forall(
        "w",
        Formula::or(Formula::neg_rel("S", &["w"]), Formula::rel("I", &["w"])),
    );
    Ok(WdFormula::new(Formula::and(typing, theta.formula), "S", 1))
}

/// Positive θ for even `t` with `S(x_t)` replaced by `inc(x_t; z)`.
pub fn phi_t_inclusion(t: usize) -> Result<Formula, ReductionError> {
    if t % 2 == 1 {
        return Err(ReductionError::OddDepth(t));
    }
    let theta = theta_formula(t, Polarity::Positive)?;
    Ok(theta
        .formula
        .replace_positive("S", &|args| Formula::Inc(args.to_vec(), vec![Term::var("z")])))
}

/// Whether some assignment setting exactly `k` of the formula's variables to
/// true satisfies it.
pub fn wsat_brute(p: &PropFormula, k: usize) -> bool {
    let vars: Vec<u32> = p.variables().into_iter().collect();
    combinations(vars.len(), k).any(|set| {
        let on: BTreeSet<u32> = set.into_iter().map(|i| vars[i]).collect();
        p.eval(&on)
    })
}
