//! Formulas compiled against a structure and a team domain.
//!
//! Every variable name gets one column of a fixed-width frame: the team's
//! variables first (in sorted order), then the quantified variables that are
//! not already team variables. Columns that are not bound at a node hold 0,
//! so rows stay canonical.

use std::collections::{HashMap, HashSet};

use super::EvalError;
use crate::formula::{Formula, Term};
use crate::model::{Elem, Relation, Row, Structure, Team};

/// Left values, right values and observed pairs of one conditioning group.
type Product = (HashSet<Vec<Elem>>, HashSet<Vec<Elem>>, HashSet<(Vec<Elem>, Vec<Elem>)>);

pub(crate) type NodeId = usize;

#[derive(Debug, Clone, Copy)]
pub(crate) enum Slot {
    Col(usize),
    Const(Elem),
}

impl Slot {
    #[inline]
    pub(crate) fn get(self, row: &[Elem]) -> Elem {
        match self {
            Slot::Col(c) => row[c],
            Slot::Const(e) => e,
        }
    }
}

#[derive(Debug)]
pub(crate) enum Op<'s> {
    Eq(Slot, Slot),
    Neq(Slot, Slot),
    Rel {
        rel: &'s Relation,
        args: Vec<Slot>,
        positive: bool,
    },
    Dep(Vec<Slot>, Vec<Slot>),
    Inc(Vec<Slot>, Vec<Slot>),
    Indep {
        cond: Vec<Slot>,
        left: Vec<Slot>,
        right: Vec<Slot>,
    },
    And(NodeId, NodeId),
    Or(NodeId, NodeId),
    Exists(usize, NodeId),
    Forall(usize, NodeId),
}

#[derive(Debug)]
pub(crate) struct Node<'s> {
    pub op: Op<'s>,
    /// No dependency atoms below: team satisfaction is pointwise.
    pub flat: bool,
    /// No inclusion or independence atoms below.
    pub downward: bool,
    /// Columns of the node's free variables, sorted.
    pub free_cols: Vec<usize>,
}

#[derive(Debug)]
pub(crate) struct Program<'s> {
    pub nodes: Vec<Node<'s>>,
    pub root: NodeId,
    pub width: usize,
    pub team_cols: usize,
    pub domain_size: usize,
}

struct Compiler<'s> {
    structure: &'s Structure,
    columns: HashMap<String, usize>,
    team_cols: usize,
    nodes: Vec<Node<'s>>,
    scope: Vec<String>,
}

impl<'s> Compiler<'s> {
    fn column(&mut self, name: &str) -> usize {
        let next = self.columns.len();
        *self.columns.entry(name.to_string()).or_insert(next)
    }

    fn slot(&mut self, t: &Term) -> Result<Slot, EvalError> {
        match t {
            Term::Const(c) => self
                .structure
                .constant(c)
                .map(Slot::Const)
                .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
            Term::Var(v) => {
                let in_team = self.columns.get(v).is_some_and(|&c| c < self.team_cols);
                if in_team || self.scope.iter().any(|s| s == v) {
                    Ok(Slot::Col(self.columns[v]))
                } else {
                    Err(EvalError::FreeVariable(v.clone()))
                }
            }
        }
    }

    fn slots(&mut self, ts: &[Term]) -> Result<Vec<Slot>, EvalError> {
        ts.iter().map(|t| self.slot(t)).collect()
    }

    fn push(&mut self, op: Op<'s>, flat: bool, downward: bool, free_cols: Vec<usize>) -> NodeId {
        self.nodes.push(Node {
            op,
            flat,
            downward,
            free_cols,
        });
        self.nodes.len() - 1
    }

    fn compile(&mut self, f: &Formula) -> Result<NodeId, EvalError> {
        let atom_cols = |slots: &[&Slot]| {
            let mut cols: Vec<usize> = slots
                .iter()
                .filter_map(|s| match s {
                    Slot::Col(c) => Some(*c),
                    Slot::Const(_) => None,
                })
                .collect();
            cols.sort_unstable();
            cols.dedup();
            cols
        };
        Ok(match f {
            Formula::Eq(a, b) | Formula::Neq(a, b) => {
                let (a, b) = (self.slot(a)?, self.slot(b)?);
                let cols = atom_cols(&[&a, &b]);
                let op = if matches!(f, Formula::Eq(..)) {
                    Op::Eq(a, b)
                } else {
                    Op::Neq(a, b)
                };
                self.push(op, true, true, cols)
            }
            Formula::Rel(name, ts) | Formula::NegRel(name, ts) => {
                let rel = self
                    .structure
                    .relation(name)
                    .ok_or_else(|| EvalError::UnknownRelation(name.clone()))?;
                if rel.arity() != ts.len() {
                    return Err(EvalError::Arity {
                        relation: name.clone(),
                        expected: rel.arity(),
                        found: ts.len(),
                    });
                }
                let args = self.slots(ts)?;
                let cols = atom_cols(&args.iter().collect::<Vec<_>>());
                let positive = matches!(f, Formula::Rel(..));
                self.push(Op::Rel { rel, args, positive }, true, true, cols)
            }
            Formula::Dep(a, b) => {
                let (a, b) = (self.slots(a)?, self.slots(b)?);
                let cols = atom_cols(&a.iter().chain(&b).collect::<Vec<_>>());
                self.push(Op::Dep(a, b), false, true, cols)
            }
            Formula::Inc(a, b) => {
                if a.len() != b.len() {
                    return Err(EvalError::InclusionArity(a.len(), b.len()));
                }
                let (a, b) = (self.slots(a)?, self.slots(b)?);
                let cols = atom_cols(&a.iter().chain(&b).collect::<Vec<_>>());
                self.push(Op::Inc(a, b), false, false, cols)
            }
            Formula::Indep { cond, left, right } => {
                let (cond, left, right) = (self.slots(cond)?, self.slots(left)?, self.slots(right)?);
                let cols = atom_cols(&cond.iter().chain(&left).chain(&right).collect::<Vec<_>>());
                self.push(Op::Indep { cond, left, right }, false, false, cols)
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let (l, r) = (self.compile(l)?, self.compile(r)?);
                let (nl, nr) = (&self.nodes[l], &self.nodes[r]);
                let flat = nl.flat && nr.flat;
                let downward = nl.downward && nr.downward;
                let mut cols = nl.free_cols.clone();
                cols.extend(&nr.free_cols);
                cols.sort_unstable();
                cols.dedup();
                let op = if matches!(f, Formula::And(..)) {
                    Op::And(l, r)
                } else {
                    Op::Or(l, r)
                };
                self.push(op, flat, downward, cols)
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                let col = self.column(x);
                self.scope.push(x.clone());
                let b = self.compile(body);
                self.scope.pop();
                let b = b?;
                let nb = &self.nodes[b];
                let (flat, downward) = (nb.flat, nb.downward);
                let cols = nb.free_cols.iter().copied().filter(|&c| c != col).collect();
                let op = if matches!(f, Formula::Exists(..)) {
                    Op::Exists(col, b)
                } else {
                    Op::Forall(col, b)
                };
                self.push(op, flat, downward, cols)
            }
        })
    }
}

impl<'s> Program<'s> {
    pub(crate) fn compile(
        structure: &'s Structure,
        team_vars: &[String],
        formula: &Formula,
    ) -> Result<Self, EvalError> {
        let mut c = Compiler {
            structure,
            columns: team_vars
                .iter()
                .enumerate()
                .map(|(i, v)| (v.clone(), i))
                .collect(),
            team_cols: team_vars.len(),
            nodes: Vec::new(),
            scope: Vec::new(),
        };
        let root = c.compile(formula)?;
        Ok(Program {
            width: c.columns.len(),
            team_cols: c.team_cols,
            nodes: c.nodes,
            root,
            domain_size: structure.domain_size(),
        })
    }

    pub(crate) fn node(&self, id: NodeId) -> &Node<'s> {
        &self.nodes[id]
    }

    /// Frame rows of a team, sorted and padded.
    pub(crate) fn load(&self, team: &Team) -> Vec<Row> {
        team.rows()
            .iter()
            .map(|r| {
                let mut row = r.clone();
                row.resize(self.width, 0);
                row
            })
            .collect()
    }

    /// Team-variable part of frame rows.
    pub(crate) fn unload(&self, team: &Team, rows: &[Row]) -> Team {
        let mut out = Team::new(team.vars().iter().cloned()).expect("team variables are distinct");
        for r in rows {
            out.insert_row(r[..self.team_cols].to_vec())
                .expect("frame rows are at least as wide as the team");
        }
        out
    }

    /// Tarski satisfaction of a flat node under one frame row.
    pub(crate) fn holds(&self, id: NodeId, row: &mut Row) -> bool {
        match &self.nodes[id].op {
            Op::Eq(a, b) => a.get(row) == b.get(row),
            Op::Neq(a, b) => a.get(row) != b.get(row),
            Op::Rel { rel, args, positive } => {
                let tuple: Vec<Elem> = args.iter().map(|s| s.get(row)).collect();
                rel.contains(&tuple) == *positive
            }
            Op::And(l, r) => self.holds(*l, row) && self.holds(*r, row),
            Op::Or(l, r) => self.holds(*l, row) || self.holds(*r, row),
            Op::Exists(col, b) | Op::Forall(col, b) => {
                let universal = matches!(self.nodes[id].op, Op::Forall(..));
                let saved = row[*col];
                let mut result = universal;
                for a in 0..self.domain_size as Elem {
                    row[*col] = a;
                    if self.holds(*b, row) != universal {
                        result = !universal;
                        break;
                    }
                }
                row[*col] = saved;
                result
            }
            Op::Dep(..) | Op::Inc(..) | Op::Indep { .. } => {
                unreachable!("dependency atoms are never flat")
            }
        }
    }

    /// Team satisfaction of an atom.
    pub(crate) fn atom(&self, id: NodeId, team: &[Row]) -> bool {
        let values = |slots: &[Slot], row: &[Elem]| -> Vec<Elem> { slots.iter().map(|s| s.get(row)).collect() };
        match &self.nodes[id].op {
            Op::Eq(..) | Op::Neq(..) | Op::Rel { .. } => {
                let mut scratch = Vec::new();
                team.iter().all(|r| {
                    scratch.clone_from(r);
                    self.holds(id, &mut scratch)
                })
            }
            Op::Dep(det, dep) => {
                let mut seen: HashMap<Vec<Elem>, Vec<Elem>> = HashMap::new();
                team.iter().all(|r| {
                    let v = values(dep, r);
                    match seen.entry(values(det, r)) {
                        std::collections::hash_map::Entry::Occupied(e) => *e.get() == v,
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(v);
                            true
                        }
                    }
                })
            }
            Op::Inc(sub, sup) => {
                let targets: HashSet<Vec<Elem>> = team.iter().map(|r| values(sup, r)).collect();
                team.iter().all(|r| targets.contains(&values(sub, r)))
            }
            Op::Indep { cond, left, right } => {
                // per value of `cond`, the (left, right) pairs must form a product
                let mut groups: HashMap<Vec<Elem>, Product> = HashMap::new();
                for r in team {
                    let g = groups.entry(values(cond, r)).or_default();
                    let (l, rt) = (values(left, r), values(right, r));
                    g.0.insert(l.clone());
                    g.1.insert(rt.clone());
                    g.2.insert((l, rt));
                }
                groups.values().all(|(ls, rs, pairs)| pairs.len() == ls.len() * rs.len())
            }
            _ => unreachable!("not an atom"),
        }
    }
}
