//! Weighted team definability and weighted Fagin definability.
//!
//! Candidate teams are k-subsets of the assignments over `Fr(φ)` (in the
//! order of [`all_assignments`]), enumerated in colex order, so the witness
//! returned is the same whichever fast path is taken.

use std::collections::BTreeSet;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::eval::{check_sentence, eval_fo_tarski, eval_inclusion, max_subteam, EvalConfig, EvalError, Evaluator};
use crate::formula::{classify, Formula, Fragment};
use crate::model::{all_assignments, Elem, ModelError, Row, Rows, Structure, Team};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WtError {
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("formula is not first-order")]
    NotFirstOrder,
    #[error("formula has free variables {0:?}")]
    NotSentence(Vec<String>),
    #[error("relation `{0}` already belongs to the structure")]
    RelationClash(String),
    #[error("interpretation tuple {tuple:?} does not have arity {arity}")]
    TupleArity { tuple: Vec<Elem>, arity: usize },
}

/// One instance of the weighted team definability problem.
#[derive(Debug, Clone)]
pub struct WtInstance {
    pub structure: Structure,
    pub formula: Formula,
    pub k: usize,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FastPath {
    /// Dispatch on the fragment: counting for FO, the single team `{∅}`
    /// for sentences, maximal subteams for inclusion logic.
    #[default]
    Auto,
    /// Generic evaluation of candidate teams, pruned only by downward
    /// closure.
    Off,
}

/// First k-subset of `0..n` in colex order passing `accept`.
///
/// Subsets are built from their largest element down; `viable` sees each
/// partial subset and may prune it. Branches on the largest element run in
/// parallel, and the first accepted subset in colex order wins.
fn first_subset<V, A>(n: usize, k: usize, viable: V, accept: A) -> Result<Option<Vec<usize>>, WtError>
where
    V: Fn(&[usize]) -> Result<bool, WtError> + Sync,
    A: Fn(&[usize]) -> Result<bool, WtError> + Sync,
{
    fn rec<V, A>(limit: usize, need: usize, chosen: &mut Vec<usize>, viable: &V, accept: &A) -> Result<bool, WtError>
    where
        V: Fn(&[usize]) -> Result<bool, WtError>,
        A: Fn(&[usize]) -> Result<bool, WtError>,
    {
        if need == 0 {
            return accept(chosen);
        }
        for m in need - 1..limit {
            chosen.push(m);
            if (need == 1 || viable(chosen)?) && rec(m, need - 1, chosen, viable, accept)? {
                return Ok(true);
            }
            chosen.pop();
        }
        Ok(false)
    }
    if k == 0 {
        return Ok(accept(&[])?.then(Vec::new));
    }
    if k > n {
        return Ok(None);
    }
    (k - 1..n)
        .into_par_iter()
        .map(|top| {
            let mut chosen = vec![top];
            let found = (k == 1 || viable(&chosen)?) && rec(top, k - 1, &mut chosen, &viable, &accept)?;
            Ok(found.then(|| {
                chosen.sort_unstable();
                chosen
            }))
        })
        .find_map_first(|r: Result<Option<Vec<usize>>, WtError>| r.transpose())
        .transpose()
}

fn team_of(vars: &[String], rows: &[Row], picked: &[usize]) -> Team {
    Team::from_rows(vars.iter().cloned(), picked.iter().map(|&i| rows[i].clone()))
        .expect("assignment rows match the free variables")
}

fn free_rows(structure: &Structure, formula: &Formula) -> (Vec<String>, Vec<Row>) {
    let vars: Vec<String> = formula.free_vars().into_iter().collect();
    let rows = Rows::new(structure.domain_size(), vars.len()).collect();
    (vars, rows)
}

pub fn wt_solve(instance: &WtInstance) -> Result<Option<Team>, WtError> {
    wt_solve_with(instance, FastPath::Auto, &EvalConfig::default())
}

pub fn wt_solve_with(instance: &WtInstance, fast: FastPath, config: &EvalConfig) -> Result<Option<Team>, WtError> {
    let WtInstance { structure, formula, k } = instance;
    let k = *k;
    let (vars, rows) = free_rows(structure, formula);
    let fragment = classify(formula).fragment;
    let evaluator = Evaluator::new(structure, &vars, formula, config.clone())?;
    let check = |team: &Team| -> Result<bool, WtError> { Ok(evaluator.eval(team)?) };

    if fast == FastPath::Auto {
        if vars.is_empty() {
            return Ok(wt_solve_sentence(structure, formula, k)?.then(|| team_of(&vars, &rows, &(0..k).collect::<Vec<_>>())));
        }
        if fragment == Fragment::FirstOrder {
            let mut picked = Vec::with_capacity(k);
            for (i, s) in all_assignments(structure, vars.iter().cloned()).enumerate() {
                if picked.len() == k {
                    break;
                }
                if eval_fo_tarski(structure, &s, formula)? {
                    picked.push(i);
                }
            }
            return Ok((picked.len() == k).then(|| team_of(&vars, &rows, &picked)));
        }
        if fragment == Fragment::Inclusion {
            // every satisfying team lies inside the maximal one
            let full = team_of(&vars, &rows, &(0..rows.len()).collect::<Vec<_>>());
            let top = max_subteam(structure, &full, formula)?;
            let cand: Vec<usize> = (0..rows.len()).filter(|&i| top.rows().contains(&rows[i])).collect();
            let found = first_subset(
                cand.len(),
                k,
                |_| Ok(true),
                |picked| {
                    let team = team_of(&vars, &rows, &picked.iter().map(|&j| cand[j]).collect::<Vec<_>>());
                    Ok(eval_inclusion(structure, &team, formula)?)
                },
            )?;
            return Ok(found.map(|p| team_of(&vars, &rows, &p.iter().map(|&j| cand[j]).collect::<Vec<_>>())));
        }
    }
    if formula.is_downward_closed() {
        // every row of a satisfying team satisfies the formula alone, and
        // every subset of a satisfying team satisfies it
        let mut cand = Vec::new();
        for i in 0..rows.len() {
            if check(&team_of(&vars, &rows, &[i]))? {
                cand.push(i);
            }
        }
        let pick = |p: &[usize]| team_of(&vars, &rows, &p.iter().map(|&j| cand[j]).collect::<Vec<_>>());
        let found = first_subset(cand.len(), k, |p| check(&pick(p)), |p| check(&pick(p)))?;
        return Ok(found.map(|p| pick(&p)));
    }
    let pick = |p: &[usize]| team_of(&vars, &rows, p);
    let found = first_subset(rows.len(), k, |_| Ok(true), |p| check(&pick(p)))?;
    Ok(found.map(|p| pick(&p)))
}

/// Whether at least `k` assignments over `Fr(φ)` satisfy a first-order `φ`.
pub fn wt_solve_fo(structure: &Structure, formula: &Formula, k: usize) -> Result<bool, WtError> {
    if !formula.is_first_order() {
        return Err(WtError::NotFirstOrder);
    }
    let mut count = 0;
    for s in all_assignments(structure, formula.free_vars()) {
        if eval_fo_tarski(structure, &s, formula)? {
            count += 1;
        }
    }
    Ok(count >= k)
}

/// Over the empty domain the only teams are `∅` and `{∅}`.
pub fn wt_solve_sentence(structure: &Structure, formula: &Formula, k: usize) -> Result<bool, WtError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(WtError::NotSentence(free.into_iter().collect()));
    }
    match k {
        0 => Ok(true),
        1 => Ok(check_sentence(structure, formula)?),
        _ => Ok(false),
    }
}

/// A first-order formula over the structure's vocabulary plus one free
/// relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WdFormula {
    pub formula: Formula,
    pub relation: String,
    pub arity: usize,
}

impl WdFormula {
    pub fn new(formula: Formula, relation: impl Into<String>, arity: usize) -> Self {
        WdFormula {
            formula,
            relation: relation.into(),
            arity,
        }
    }

    /// `∀x∀y(¬X(x) ∨ ¬X(y) ∨ x=y ∨ E(x,y))`: X is a clique.
    pub fn clique() -> Self {
        let body = Formula::disj([
            Formula::neg_rel("X", &["x"]),
            Formula::neg_rel("X", &["y"]),
            Formula::eq("x", "y"),
            Formula::rel("E", &["x", "y"]),
        ]);
        WdFormula::new(Formula::forall("x", Formula::forall("y", body)), "X", 1)
    }

    /// `∀x∃y(X(y) ∧ (E(x,y) ∨ x=y))`: X is a dominating set.
    pub fn domset() -> Self {
        let body = Formula::and(
            Formula::rel("X", &["y"]),
            Formula::or(Formula::rel("E", &["x", "y"]), Formula::eq("x", "y")),
        );
        WdFormula::new(Formula::forall("x", Formula::exists("y", body)), "X", 1)
    }

    /// Positive and negative occurrences of the free relation.
    pub fn occurrences(&self) -> (usize, usize) {
        self.formula.occurrences(&self.relation)
    }

    fn interpret(&self, structure: &Structure, interp: &BTreeSet<Vec<Elem>>) -> Result<Structure, WtError> {
        if structure.relation(&self.relation).is_some() {
            return Err(WtError::RelationClash(self.relation.clone()));
        }
        if let Some(t) = interp.iter().find(|t| t.len() != self.arity) {
            return Err(WtError::TupleArity {
                tuple: t.clone(),
                arity: self.arity,
            });
        }
        Ok(structure.clone().with_relation(&self.relation, self.arity, interp.iter().cloned())?)
    }
}

/// `A ⊨ φ(S)` with `S` interpreted by `interp`.
pub fn wd_check(structure: &Structure, wd: &WdFormula, interp: &BTreeSet<Vec<Elem>>) -> Result<bool, WtError> {
    if !wd.formula.is_first_order() {
        return Err(WtError::NotFirstOrder);
    }
    let extended = wd.interpret(structure, interp)?;
    Ok(eval_fo_tarski(&extended, &crate::model::Assignment::empty(), &wd.formula)?)
}

/// First interpretation of cardinality `k`, in colex order over the tuples
/// of `domain^s`, that makes the formula true.
pub fn wd_solve(structure: &Structure, wd: &WdFormula, k: usize) -> Result<Option<BTreeSet<Vec<Elem>>>, WtError> {
    if !wd.formula.is_first_order() {
        return Err(WtError::NotFirstOrder);
    }
    let free = wd.formula.free_vars();
    if !free.is_empty() {
        return Err(WtError::NotSentence(free.into_iter().collect()));
    }
    // resolve errors once, up front
    wd.interpret(structure, &BTreeSet::new())?;
    let tuples: Vec<Row> = Rows::new(structure.domain_size(), wd.arity).collect();
    let interp = |p: &[usize]| -> BTreeSet<Vec<Elem>> { p.iter().map(|&i| tuples[i].clone()).collect() };
    let accept = |p: &[usize]| -> Result<bool, WtError> {
        let extended = wd.interpret(structure, &interp(p))?;
        Ok(check_sentence(&extended, &wd.formula)?)
    };
    Ok(first_subset(tuples.len(), k, |_| Ok(true), accept)?.map(|p| interp(&p)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::parse;

    fn graph(n: usize, edges: &[(Elem, Elem)]) -> Structure {
        let sym = edges.iter().flat_map(|&(a, b)| [vec![a, b], vec![b, a]]);
        Structure::new(n).unwrap().with_relation("E", 2, sym).unwrap()
    }

    fn both(structure: &Structure, f: &str, k: usize) -> Option<Team> {
        let inst = WtInstance {
            structure: structure.clone(),
            formula: parse(f).unwrap(),
            k,
        };
        let auto = wt_solve(&inst).unwrap();
        let off = wt_solve_with(&inst, FastPath::Off, &EvalConfig::default()).unwrap();
        assert_eq!(auto, off, "fast paths disagree on {f} with k={k}");
        if let Some(t) = &auto {
            assert_eq!(t.len(), k);
            assert_eq!(t.vars(), inst.formula.free_vars().into_iter().collect::<Vec<_>>().as_slice());
            assert!(crate::eval::eval(structure, t, &inst.formula).unwrap());
        }
        auto
    }

    #[test]
    fn colex_order() {
        let seen = std::sync::Mutex::new(BTreeSet::new());
        let r = first_subset(
            5,
            3,
            |_| Ok(true),
            |p| {
                seen.lock().unwrap().insert(p.to_vec());
                Ok(false)
            },
        );
        assert_eq!(r, Ok(None));
        assert_eq!(seen.into_inner().unwrap().len(), 10);
        let found = first_subset(5, 2, |_| Ok(true), |p| Ok(p.contains(&3))).unwrap();
        assert_eq!(found, Some(vec![0, 3]));
        assert_eq!(first_subset(3, 0, |_| Ok(true), |_| Ok(true)).unwrap(), Some(vec![]));
        assert_eq!(first_subset(3, 4, |_| Ok(true), |_| Ok(true)).unwrap(), None);
    }

    #[test]
    fn domset_star_witness_is_center() {
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let t = both(&star, "forall x exists y (inc(y;z) & (E(x,y) | x=y))", 1).unwrap();
        assert_eq!(t, Team::from_rows(["z"], [vec![0]]).unwrap());
    }

    #[test]
    fn k_zero_gives_empty_team() {
        let a = graph(3, &[(0, 1)]);
        for f in ["x != x", "inc(x;y) & E(x,y)", "dep(;x)"] {
            assert!(both(&a, f, 0).unwrap().is_empty());
        }
    }

    #[test]
    fn clique_on_triangle() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let t = both(&k3, "E(x,y) & x != y & inc(y;x) & inc(x;y)", 6).unwrap();
        assert!(t.rows().iter().all(|r| r[0] != r[1]));
        assert!(both(&k3, "E(x,y) & x != y & inc(y;x) & inc(x;y)", 7).is_none());
    }

    #[test]
    fn fo_counting() {
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let e = parse("E(x,y)").unwrap();
        assert!(wt_solve_fo(&path, &e, 6).unwrap());
        assert!(!wt_solve_fo(&path, &e, 7).unwrap());
        assert!(wt_solve_fo(&path, &parse("x != x").unwrap(), 0).unwrap());
        assert!(!wt_solve_fo(&path, &parse("x != x").unwrap(), 1).unwrap());
        assert_eq!(wt_solve_fo(&path, &parse("dep(x;y)").unwrap(), 1), Err(WtError::NotFirstOrder));
        assert_eq!(both(&path, "E(x,y)", 6).map(|t| t.len()), Some(6));
        assert!(both(&path, "E(x,y)", 7).is_none());
    }

    #[test]
    fn sentences() {
        let a = graph(2, &[(0, 1)]);
        let f = parse("forall x exists y E(x,y)").unwrap();
        assert!(wt_solve_sentence(&a, &f, 0).unwrap());
        assert!(wt_solve_sentence(&a, &f, 1).unwrap());
        assert!(!wt_solve_sentence(&a, &f, 2).unwrap());
        assert_eq!(both(&a, "forall x exists y E(x,y)", 1), Some(Team::unit()));
        assert!(both(&a, "forall x exists y E(x,y)", 2).is_none());
        assert!(matches!(
            wt_solve_sentence(&a, &parse("E(x,x)").unwrap(), 1),
            Err(WtError::NotSentence(_))
        ));
    }

    #[test]
    fn exact_size_is_not_monotone() {
        // inc(x;y) & x != y needs the team to close up: size 2 works, 3 does not on 2 elements
        let a = Structure::new(2).unwrap();
        assert!(both(&a, "inc(x;y) & x != y", 2).is_some());
        assert!(both(&a, "inc(x;y) & x != y", 1).is_none());
        assert!(both(&a, "inc(x;y) & x != y", 3).is_none());
    }

    #[test]
    fn dependence_is_downward_monotone() {
        let path = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let f = "exists y (E(x,y) & dep(;y))";
        let max = (0..=4).rev().find(|&k| both(&path, f, k).is_some()).unwrap();
        assert_eq!(max, 2);
        for k in 0..=max {
            assert!(both(&path, f, k).is_some());
        }
    }

    #[test]
    fn independence_goes_through_generic_search() {
        let a = Structure::new(2).unwrap();
        assert!(both(&a, "indep(;x;y)", 4).is_some());
        assert!(both(&a, "indep(;x;y)", 3).is_none());
        assert!(both(&a, "indep(;x;y) & dep(x;y)", 2).is_some());
    }

    #[test]
    fn fagin_formulas() {
        let k3 = graph(3, &[(0, 1), (1, 2), (0, 2)]);
        let all: BTreeSet<Vec<Elem>> = (0..3).map(|v| vec![v]).collect();
        assert!(wd_check(&k3, &WdFormula::clique(), &all).unwrap());
        assert!(wd_check(&k3, &WdFormula::clique(), &BTreeSet::new()).unwrap());
        let star = graph(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        assert!(wd_check(&star, &WdFormula::domset(), &BTreeSet::from([vec![0]])).unwrap());
        assert!(!wd_check(&star, &WdFormula::domset(), &BTreeSet::from([vec![1]])).unwrap());
        assert_eq!(wd_solve(&k3, &WdFormula::clique(), 3).unwrap(), Some(all));
        let c5 = graph(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        assert_eq!(wd_solve(&c5, &WdFormula::clique(), 3).unwrap(), None);
        assert_eq!(wd_solve(&c5, &WdFormula::clique(), 0).unwrap(), Some(BTreeSet::new()));
        assert_eq!(WdFormula::clique().occurrences(), (0, 2));
        assert!(matches!(
            wd_check(&k3, &WdFormula::clique(), &BTreeSet::from([vec![0, 1]])),
            Err(WtError::TupleArity { .. })
        ));
    }
}
