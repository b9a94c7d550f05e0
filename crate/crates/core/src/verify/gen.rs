//! Seeded generators for random test corpora.
//!
//! Every case draws from its own ChaCha8 stream, keyed by the run seed and
//! the case index, so a case can be regenerated alone and results do not
//! depend on how cases are scheduled across threads.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::formula::{classify, Formula, Fragment, Prop, PropFormula, Term};
use crate::model::{Elem, Row, Structure, Team};
use crate::reductions::{BooleanCircuit, GateKind, Graph};

pub fn case_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Domain `1..=max_n` elements, unary `P`, binary `R` and a constant `c`.
pub fn structure(rng: &mut impl Rng, max_n: usize) -> Structure {
    let n = rng.gen_range(1..=max_n);
    let p: Vec<Vec<Elem>> = (0..n as Elem).filter(|_| rng.gen_bool(0.5)).map(|a| vec![a]).collect();
    let r: Vec<Vec<Elem>> = (0..n as Elem)
        .flat_map(|a| (0..n as Elem).map(move |b| vec![a, b]))
        .filter(|_| rng.gen_bool(0.4))
        .collect();
    let c = rng.gen_range(0..n as Elem);
    Structure::new(n)
        .and_then(|s| s.with_relation("P", 1, p))
        .and_then(|s| s.with_relation("R", 2, r))
        .and_then(|s| s.with_constant("c", c))
        .expect("generated structure is well formed")
}

/// Up to `max_rows` distinct rows over `vars`.
pub fn team(rng: &mut impl Rng, structure: &Structure, vars: &[&str], max_rows: usize) -> Team {
    let n = structure.domain_size() as Elem;
    let size = rng.gen_range(0..=max_rows);
    let rows: Vec<Row> = (0..size)
        .map(|_| vars.iter().map(|_| rng.gen_range(0..n)).collect())
        .collect();
    Team::from_rows(vars.iter().copied(), rows).expect("generated team is well formed")
}

/// Which dependency atoms a generated formula may contain.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Logic {
    FirstOrder,
    Dependence,
    Inclusion,
    Independence,
}

impl Logic {
    pub const ALL: [Logic; 4] = [Logic::FirstOrder, Logic::Dependence, Logic::Inclusion, Logic::Independence];

    pub fn fragment(self) -> Fragment {
        match self {
            Logic::FirstOrder => Fragment::FirstOrder,
            Logic::Dependence => Fragment::Dependence,
            Logic::Inclusion => Fragment::Inclusion,
            Logic::Independence => Fragment::Independence,
        }
    }
}

pub struct FormulaGen<'a> {
    pub logic: Logic,
    /// Variables that may occur free.
    pub free: &'a [&'a str],
    pub max_quantifier_depth: usize,
    /// Bound on connectives and quantifiers.
    pub max_size: usize,
}

const BOUND: [&str; 3] = ["u", "v", "w"];

impl FormulaGen<'_> {
    /// A formula of exactly the requested fragment.
    pub fn formula(&self, rng: &mut impl Rng) -> Formula {
        loop {
            let mut scope: Vec<String> = self.free.iter().map(|s| s.to_string()).collect();
            let f = self.node(rng, &mut scope, 0, self.max_size);
            if classify(&f).fragment == self.logic.fragment() {
                return f;
            }
        }
    }

    fn node(&self, rng: &mut impl Rng, scope: &mut Vec<String>, depth: usize, size: usize) -> Formula {
        let can_quantify = depth < self.max_quantifier_depth;
        let roll = rng.gen_range(0..10);
        if size == 0 || roll < 3 {
            return self.atom(rng, scope);
        }
        match roll {
            3..=4 => Formula::and(self.node(rng, scope, depth, size / 2), self.node(rng, scope, depth, size / 2)),
            5..=6 => Formula::or(self.node(rng, scope, depth, size / 2), self.node(rng, scope, depth, size / 2)),
            _ if can_quantify => {
                // occasionally rebind a variable that is already in scope
                let x = if !scope.is_empty() && rng.gen_bool(0.15) {
                    scope.choose(rng).expect("nonempty").clone()
                } else {
                    BOUND[depth].to_string()
                };
                scope.push(x.clone());
                let body = self.node(rng, scope, depth + 1, size - 1);
                scope.pop();
                if rng.gen_bool(0.5) {
                    Formula::exists(x, body)
                } else {
                    Formula::forall(x, body)
                }
            }
            _ => self.atom(rng, scope),
        }
    }

    fn term(&self, rng: &mut impl Rng, scope: &[String]) -> Term {
        if scope.is_empty() || rng.gen_bool(0.1) {
            Term::constant("c")
        } else {
            Term::var(scope.choose(rng).expect("nonempty").clone())
        }
    }

    fn terms(&self, rng: &mut impl Rng, scope: &[String], n: usize) -> Vec<Term> {
        (0..n).map(|_| self.term(rng, scope)).collect()
    }

    fn atom(&self, rng: &mut impl Rng, scope: &[String]) -> Formula {
        if self.logic != Logic::FirstOrder && rng.gen_bool(0.5) {
            return match self.logic {
                Logic::Dependence => {
                    let det = rng.gen_range(0..=2);
                    Formula::Dep(self.terms(rng, scope, det), self.terms(rng, scope, 1))
                }
                Logic::Inclusion => {
                    let len = rng.gen_range(1..=2);
                    Formula::Inc(self.terms(rng, scope, len), self.terms(rng, scope, len))
                }
                Logic::Independence => {
                    let cond = rng.gen_range(0..=1);
                    Formula::Indep {
                        cond: self.terms(rng, scope, cond),
                        left: self.terms(rng, scope, 1),
                        right: self.terms(rng, scope, 1),
                    }
                }
                Logic::FirstOrder => unreachable!(),
            };
        }
        match rng.gen_range(0..6) {
            0 => Formula::Rel("P".into(), self.terms(rng, scope, 1)),
            1 => Formula::NegRel("P".into(), self.terms(rng, scope, 1)),
            2 => Formula::Rel("R".into(), self.terms(rng, scope, 2)),
            3 => Formula::NegRel("R".into(), self.terms(rng, scope, 2)),
            4 => Formula::Eq(self.term(rng, scope), self.term(rng, scope)),
            _ => Formula::Neq(self.term(rng, scope), self.term(rng, scope)),
        }
    }
}

/// A formula in `Γ_{t,1}` with all literals of one sign over at most
/// `max_vars` variables: alternating layers below a root conjunction, with
/// literals on layer `t`.
pub fn gamma_formula(rng: &mut impl Rng, t: usize, positive: bool, max_vars: u32, max_fan_in: usize) -> PropFormula {
    fn layer(rng: &mut impl Rng, level: usize, t: usize, conj: bool, positive: bool, vars: u32, fan: usize) -> Prop {
        if level == t {
            return Prop::lit(rng.gen_range(1..=vars), positive);
        }
        let width = rng.gen_range(1..=fan);
        let children = (0..width)
            .map(|_| layer(rng, level + 1, t, !conj, positive, vars, fan))
            .collect();
        if conj {
            Prop::and(children)
        } else {
            Prop::or(children)
        }
    }
    let vars = rng.gen_range(1..=max_vars);
    PropFormula::new(layer(rng, 0, t, true, positive, vars, max_fan_in))
}

/// A monotone circuit on `2..=max_gates` gates in topological order: a
/// prefix of inputs, then AND/OR gates each fed by a nonempty set of earlier
/// gates, with the last gate as output.
pub fn circuit(rng: &mut impl Rng, max_gates: usize) -> BooleanCircuit {
    let m = rng.gen_range(2..=max_gates);
    let inputs = rng.gen_range(1..m);
    let mut kinds = vec![GateKind::Input; inputs];
    let mut edges = Vec::new();
    for g in inputs..m {
        kinds.push(if rng.gen_bool(0.5) { GateKind::And } else { GateKind::Or });
        let mut fed = false;
        for c in 0..g {
            if rng.gen_bool(0.5) {
                edges.push((c as u32, g as u32));
                fed = true;
            }
        }
        if !fed {
            edges.push((rng.gen_range(0..g) as u32, g as u32));
        }
    }
    BooleanCircuit::new(kinds, edges, (m - 1) as u32).expect("generated circuit is acyclic")
}

/// A graph on `n` vertices with each edge present with probability `density`.
pub fn graph(rng: &mut impl Rng, n: usize, density: f64) -> Graph {
    let edges: Vec<(Elem, Elem)> = (0..n as Elem)
        .flat_map(|u| (u + 1..n as Elem).map(move |v| (u, v)))
        .filter(|_| rng.gen_bool(density))
        .collect();
    Graph::new(n, edges).expect("generated graph is simple")
}
