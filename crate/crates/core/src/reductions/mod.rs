//! Encoders from the hardness proofs, their source problems, and
//! brute-force oracles for both sides.

mod circuit;
mod graph;
mod syntax;

use std::fmt;

use thiserror::Error;

use crate::formula::{parse, Formula, Polarity, PropFormula};
use crate::model::{Elem, ModelError, Structure};
use crate::wt::WtInstance;

pub use circuit::{circuit_eval, proof_tree_exists, BooleanCircuit, GateKind, MAX_PROOF_TREE_GATES};
pub use graph::{graph_brute, Graph, GraphProblem};
pub use syntax::{
    build_syntax_circuit, phi_t_inclusion, theta_formula, theta_formula_typed, wsat_brute, SyntaxCircuit,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ReductionError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("self-loop at vertex {0}")]
    Loop(Elem),
    #[error("vertex {vertex} out of range for {n} vertices")]
    VertexOutOfRange { vertex: Elem, n: usize },
    #[error("circuit: {0}")]
    Circuit(String),
    #[error("formula is not in Gamma_{{{t},1}}")]
    NotGammaOne { t: usize },
    #[error("formula mixes positive and negative literals")]
    MixedPolarity,
    #[error("depth must be at least 1")]
    ZeroDepth,
    #[error("the inclusion construction needs an even depth, got {0}")]
    OddDepth(usize),
    #[error("weighted satisfiability reduction needs a positive formula")]
    NotPositive,
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Why an encoder answered directly instead of running its construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Guard {
    Yes(String),
    No(String),
}

impl fmt::Display for Guard {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Guard::Yes(why) => write!(f, "trivial yes-instance: {why}"),
            Guard::No(why) => write!(f, "trivial no-instance: {why}"),
        }
    }
}

/// An encoded instance, possibly replaced by a canonical one.
#[derive(Debug, Clone)]
pub struct Reduced {
    pub instance: WtInstance,
    pub guard: Option<Guard>,
}

fn one_point() -> Structure {
    Structure::new(1).expect("one element")
}

/// `x = x` on one element with k′ = 1: satisfiable.
pub fn canonical_yes() -> WtInstance {
    WtInstance {
        structure: one_point(),
        formula: Formula::eq("x", "x"),
        k: 1,
    }
}

/// `x ≠ x` on one element with k′ = 1: unsatisfiable.
pub fn canonical_no() -> WtInstance {
    WtInstance {
        structure: one_point(),
        formula: Formula::neq("x", "x"),
        k: 1,
    }
}

fn guarded(answer: bool, why: String) -> Reduced {
    if answer {
        Reduced {
            instance: canonical_yes(),
            guard: Some(Guard::Yes(why)),
        }
    } else {
        Reduced {
            instance: canonical_no(),
            guard: Some(Guard::No(why)),
        }
    }
}

fn plain(instance: WtInstance) -> Reduced {
    Reduced { instance, guard: None }
}

/// `E(x,y) & x != y & inc(y;x) & inc(x;y)` with k′ = k² − k.
pub fn encode_clique(g: &Graph, k: usize) -> Result<WtInstance, ReductionError> {
    Ok(WtInstance {
        structure: g.to_structure()?,
        formula: parse("E(x,y) & x != y & inc(y;x) & inc(x;y)").expect("fixed formula parses"),
        k: k * k - k,
    })
}

/// `forall x exists y (inc(y;z) & (E(x,y) | x=y))` with k unchanged.
pub fn encode_domset(g: &Graph, k: usize) -> Result<WtInstance, ReductionError> {
    Ok(WtInstance {
        structure: g.to_structure()?,
        formula: parse("forall x exists y (inc(y;z) & (E(x,y) | x=y))").expect("fixed formula parses"),
        k,
    })
}

/// Structure over vertices then edges, with `N` the vertices, `P` the edges
/// and `I` the incidences; formula `forall y (N(x) & (!P(y) | !I(x,y) | dep(y;x)))`.
pub fn encode_indset(g: &Graph, k: usize) -> Result<WtInstance, ReductionError> {
    let n = g.vertex_count();
    let edges: Vec<(Elem, Elem)> = g.edges().iter().copied().collect();
    let edge_elem = |i: usize| (n + i) as Elem;
    let mut labels: Vec<String> = (0..n).map(|v| v.to_string()).collect();
    labels.extend(edges.iter().map(|(u, v)| format!("{u}-{v}")));
    let structure = Structure::new(n + edges.len())?
        .with_relation("N", 1, (0..n as Elem).map(|v| vec![v]))?
        .with_relation("P", 1, (0..edges.len()).map(|i| vec![edge_elem(i)]))?
        .with_relation(
            "I",
            2,
            edges
                .iter()
                .enumerate()
                .flat_map(|(i, &(u, v))| [vec![u, edge_elem(i)], vec![v, edge_elem(i)]]),
        )?
        .with_labels(labels)?;
    Ok(WtInstance {
        structure,
        formula: parse("forall y (N(x) & (!P(y) | !I(x,y) | dep(y;x)))").expect("fixed formula parses"),
        k,
    })
}

/// Clique reduction, answering `k ≤ 1`, `k > |V|` and the empty graph directly.
pub fn reduce_clique(g: &Graph, k: usize) -> Result<Reduced, ReductionError> {
    let n = g.vertex_count();
    if k > n {
        return Ok(guarded(false, format!("k = {k} exceeds the {n} vertices")));
    }
    if k <= 1 {
        return Ok(guarded(true, format!("every set of {k} vertices is a clique")));
    }
    Ok(plain(encode_clique(g, k)?))
}

/// Dominating set reduction, answering `k = 0`, `k > |V|` and the empty graph directly.
pub fn reduce_domset(g: &Graph, k: usize) -> Result<Reduced, ReductionError> {
    let n = g.vertex_count();
    if k > n {
        return Ok(guarded(false, format!("k = {k} exceeds the {n} vertices")));
    }
    if k == 0 || n == 0 {
        return Ok(guarded(n == 0, "only the empty graph has a dominating set of size 0".into()));
    }
    Ok(plain(encode_domset(g, k)?))
}

/// Independent set reduction, answering `k = 0`, `k > |V|` and the empty graph directly.
pub fn reduce_indset(g: &Graph, k: usize) -> Result<Reduced, ReductionError> {
    let n = g.vertex_count();
    if k > n {
        return Ok(guarded(false, format!("k = {k} exceeds the {n} vertices")));
    }
    if k == 0 || n == 0 {
        return Ok(guarded(true, "the empty set is independent".into()));
    }
    Ok(plain(encode_indset(g, k)?))
}

/// Least even `t` with `p ∈ Γ_{t,1}`.
pub fn even_depth(p: &PropFormula) -> Result<usize, ReductionError> {
    let t = p.depth_at_fan_in_one().ok_or(ReductionError::NotGammaOne { t: 0 })?;
    Ok(t + t % 2)
}

/// Weighted satisfiability of a positive formula as an inclusion-logic
/// team problem over its syntax circuit, answering `k = 0` and
/// `k > |vars|` directly.
pub fn reduce_wsat(p: &PropFormula, k: usize) -> Result<(Reduced, usize), ReductionError> {
    if p.polarity() != Polarity::Positive {
        return Err(ReductionError::NotPositive);
    }
    let t = even_depth(p)?;
    let vars = p.var_count();
    if k > vars {
        return Ok((guarded(false, format!("k = {k} exceeds the {vars} variables")), t));
    }
    if k == 0 {
        return Ok((guarded(wsat_brute(p, 0), "weight 0 decided directly".into()), t));
    }
    let circuit = build_syntax_circuit(p, t)?;
    let instance = WtInstance {
        structure: circuit.structure().clone(),
        formula: phi_t_inclusion(t)?,
        k,
    };
    Ok((plain(instance), t))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eval::eval;
    use crate::formula::parse_prop;
    use crate::model::Team;
    use crate::wt::wt_solve;

    fn solve(r: &Reduced) -> bool {
        wt_solve(&r.instance).unwrap().is_some()
    }

    #[test]
    fn clique_parameter() {
        let i = encode_clique(&Graph::complete(3), 3).unwrap();
        assert_eq!(i.k, 6);
        let i = encode_clique(&Graph::complete(2), 2).unwrap();
        assert_eq!(i.k, 2);
        let t = Team::from_rows(["x", "y"], [vec![0, 1], vec![1, 0]]).unwrap();
        assert!(eval(&i.structure, &t, &i.formula).unwrap());
    }

    #[test]
    fn cycle_of_five_satisfies_the_clique_formula() {
        // both orientations of the path 0-1-2-3
        let i = encode_clique(&Graph::cycle(5), 3).unwrap();
        let t = Team::from_rows(
            ["x", "y"],
            [[0, 1], [1, 0], [1, 2], [2, 1], [2, 3], [3, 2]].map(|r| r.to_vec()),
        )
        .unwrap();
        assert!(eval(&i.structure, &t, &i.formula).unwrap());
        assert!(!graph_brute(GraphProblem::Clique, &Graph::cycle(5), 3));
    }

    #[test]
    fn domset_examples() {
        assert!(solve(&reduce_domset(&Graph::star(4), 1).unwrap()));
        let edgeless = Graph::new(3, []).unwrap();
        assert!(!solve(&reduce_domset(&edgeless, 2).unwrap()));
        assert!(solve(&reduce_domset(&edgeless, 3).unwrap()));
        let r = reduce_domset(&edgeless, 0).unwrap();
        assert!(matches!(r.guard, Some(Guard::No(_))));
        assert!(!solve(&r));
    }

    #[test]
    fn indset_examples() {
        let path = Graph::path(3);
        let i = encode_indset(&path, 2).unwrap();
        let label = |s: &str| i.structure.element(s).unwrap();
        let ends = Team::from_rows(["x"], [vec![label("0")], vec![label("2")]]).unwrap();
        let adjacent = Team::from_rows(["x"], [vec![label("0")], vec![label("1")]]).unwrap();
        assert!(eval(&i.structure, &ends, &i.formula).unwrap());
        assert!(!eval(&i.structure, &adjacent, &i.formula).unwrap());
        assert_eq!(i.structure.label(4), "1-2");
        assert!(solve(&reduce_indset(&path, 2).unwrap()));
        assert!(!solve(&reduce_indset(&Graph::complete(3), 2).unwrap()));
        assert!(solve(&reduce_indset(&Graph::complete(3), 1).unwrap()));
        assert!(!solve(&reduce_indset(&Graph::complete(3), 4).unwrap()));
    }

    #[test]
    fn clique_guards() {
        assert!(solve(&reduce_clique(&Graph::new(2, []).unwrap(), 1).unwrap()));
        assert!(!solve(&reduce_clique(&Graph::complete(2), 3).unwrap()));
        assert!(solve(&reduce_clique(&Graph::complete(3), 3).unwrap()));
    }

    #[test]
    fn wsat_reduction_on_a_conjunction() {
        let p = parse_prop("x1 & x2").unwrap();
        let (r, t) = reduce_wsat(&p, 2).unwrap();
        assert_eq!(t, 2);
        assert!(solve(&r));
        let (r, _) = reduce_wsat(&p, 1).unwrap();
        assert!(r.guard.is_none());
        assert!(!solve(&r));
        assert_eq!(reduce_wsat(&parse_prop("!x1").unwrap(), 1).unwrap_err(), ReductionError::NotPositive);
    }
}
