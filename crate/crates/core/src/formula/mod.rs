//! Formulas of first-order logic extended with dependence, inclusion and
//! independence atoms, kept in negation normal form.

mod classify;
mod parser;
pub mod prop;

use std::collections::BTreeSet;
use std::fmt;

pub use classify::{classify, AtomSet, Fragment, FragmentReport, Prefix};
pub use parser::{parse, parse_in, FormulaError};
pub use prop::{parse_prop, GammaClass, Polarity, Prop, PropFormula};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Const(String),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Self {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Self {
        Term::Const(name.into())
    }

    pub fn as_var(&self) -> Option<&str> {
        match self {
            Term::Var(v) => Some(v),
            Term::Const(_) => None,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
        }
    }
}

/// Formula AST. Negation only occurs in front of relation atoms and
/// equalities.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Formula {
    Eq(Term, Term),
    Neq(Term, Term),
    Rel(String, Vec<Term>),
    NegRel(String, Vec<Term>),
    /// `dep(t; u)`: the values of `t` functionally determine those of `u`.
    Dep(Vec<Term>, Vec<Term>),
    /// `inc(t; u)`: every value of `t` occurs as a value of `u`.
    Inc(Vec<Term>, Vec<Term>),
    /// `indep(cond; left; right)`: `left` is independent of `right` given `cond`.
    Indep {
        cond: Vec<Term>,
        left: Vec<Term>,
        right: Vec<Term>,
    },
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

pub(crate) fn vars(names: &[&str]) -> Vec<Term> {
    names.iter().map(|n| Term::var(*n)).collect()
}

impl Formula {
    pub fn and(l: Formula, r: Formula) -> Self {
        Formula::And(Box::new(l), Box::new(r))
    }

    pub fn or(l: Formula, r: Formula) -> Self {
        Formula::Or(Box::new(l), Box::new(r))
    }

    pub fn exists(x: impl Into<String>, body: Formula) -> Self {
        Formula::Exists(x.into(), Box::new(body))
    }

    pub fn forall(x: impl Into<String>, body: Formula) -> Self {
        Formula::Forall(x.into(), Box::new(body))
    }

    /// Left-nested conjunction of a non-empty list.
    pub fn conj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::and)
            .expect("conjunction of at least one formula")
    }

    /// Left-nested disjunction of a non-empty list.
    pub fn disj(parts: impl IntoIterator<Item = Formula>) -> Self {
        parts
            .into_iter()
            .reduce(Formula::or)
            .expect("disjunction of at least one formula")
    }

    /// Relation atom over variables.
    pub fn rel(name: impl Into<String>, args: &[&str]) -> Self {
        Formula::Rel(name.into(), vars(args))
    }

    pub fn neg_rel(name: impl Into<String>, args: &[&str]) -> Self {
        Formula::NegRel(name.into(), vars(args))
    }

    pub fn eq(a: &str, b: &str) -> Self {
        Formula::Eq(Term::var(a), Term::var(b))
    }

    pub fn neq(a: &str, b: &str) -> Self {
        Formula::Neq(Term::var(a), Term::var(b))
    }

    pub fn dep(det: &[&str], dependent: &[&str]) -> Self {
        Formula::Dep(vars(det), vars(dependent))
    }

    pub fn inc(sub: &[&str], sup: &[&str]) -> Self {
        Formula::Inc(vars(sub), vars(sup))
    }

    pub fn indep(cond: &[&str], left: &[&str], right: &[&str]) -> Self {
        Formula::Indep {
            cond: vars(cond),
            left: vars(left),
            right: vars(right),
        }
    }

    pub fn is_atom(&self) -> bool {
        !matches!(
            self,
            Formula::And(..) | Formula::Or(..) | Formula::Exists(..) | Formula::Forall(..)
        )
    }

    /// Terms occurring directly in an atom.
    pub fn atom_terms(&self) -> Vec<&Term> {
        match self {
            Formula::Eq(a, b) | Formula::Neq(a, b) => vec![a, b],
            Formula::Rel(_, ts) | Formula::NegRel(_, ts) => ts.iter().collect(),
            Formula::Dep(a, b) | Formula::Inc(a, b) => a.iter().chain(b).collect(),
            Formula::Indep { cond, left, right } => cond.iter().chain(left).chain(right).collect(),
            _ => Vec::new(),
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(&'a self, bound: &mut Vec<&'a str>, out: &mut BTreeSet<String>) {
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.collect_free(bound, out);
                r.collect_free(bound, out);
            }
            Formula::Exists(x, body) | Formula::Forall(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
            atom => {
                for t in atom.atom_terms() {
                    if let Term::Var(v) = t {
                        if !bound.contains(&v.as_str()) {
                            out.insert(v.clone());
                        }
                    }
                }
            }
        }
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Visits every subformula in pre-order.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a Formula)) {
        visit(self);
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => {
                l.walk(visit);
                r.walk(visit);
            }
            Formula::Exists(_, b) | Formula::Forall(_, b) => b.walk(visit),
            _ => {}
        }
    }

    pub fn atoms(&self) -> AtomSet {
        let mut set = AtomSet::default();
        self.walk(&mut |f| match f {
            Formula::Dep(..) => set.dep = true,
            Formula::Inc(..) => set.inc = true,
            Formula::Indep { .. } => set.indep = true,
            _ => {}
        });
        set
    }

    /// True when the formula contains no dependency atoms.
    pub fn is_first_order(&self) -> bool {
        self.atoms().is_empty()
    }

    /// True when the formula has no inclusion or independence atoms, so its
    /// satisfying teams are closed under subteams.
    pub fn is_downward_closed(&self) -> bool {
        let a = self.atoms();
        !a.inc && !a.indep
    }

    /// True when the formula has no dependence or independence atoms, so its
    /// satisfying teams are closed under unions.
    pub fn is_union_closed(&self) -> bool {
        let a = self.atoms();
        !a.dep && !a.indep
    }

    pub fn quantifier_depth(&self) -> usize {
        match self {
            Formula::And(l, r) | Formula::Or(l, r) => l.quantifier_depth().max(r.quantifier_depth()),
            Formula::Exists(_, b) | Formula::Forall(_, b) => 1 + b.quantifier_depth(),
            _ => 0,
        }
    }

    /// Number of positive and negative occurrences of a relation symbol.
    pub fn occurrences(&self, relation: &str) -> (usize, usize) {
        let (mut pos, mut neg) = (0, 0);
        self.walk(&mut |f| match f {
            Formula::Rel(r, _) if r == relation => pos += 1,
            Formula::NegRel(r, _) if r == relation => neg += 1,
            _ => {}
        });
        (pos, neg)
    }

    /// Replaces every positive occurrence of `relation` by `replace(args)`.
    pub fn replace_positive(&self, relation: &str, replace: &impl Fn(&[Term]) -> Formula) -> Formula {
        match self {
            Formula::Rel(r, args) if r == relation => replace(args),
            Formula::And(l, r) => Formula::and(
                l.replace_positive(relation, replace),
                r.replace_positive(relation, replace),
            ),
            Formula::Or(l, r) => Formula::or(
                l.replace_positive(relation, replace),
                r.replace_positive(relation, replace),
            ),
            Formula::Exists(x, b) => Formula::exists(x.clone(), b.replace_positive(relation, replace)),
            Formula::Forall(x, b) => Formula::forall(x.clone(), b.replace_positive(relation, replace)),
            atom => atom.clone(),
        }
    }

    fn binary_op(&self) -> Option<&'static str> {
        match self {
            Formula::And(..) => Some("&"),
            Formula::Or(..) => Some("|"),
            _ => None,
        }
    }
}

fn write_terms(f: &mut fmt::Formatter<'_>, ts: &[Term]) -> fmt::Result {
    for (i, t) in ts.iter().enumerate() {
        if i > 0 {
            f.write_str(",")?;
        }
        write!(f, "{t}")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Eq(a, b) => write!(f, "{a}={b}"),
            Formula::Neq(a, b) => write!(f, "{a}!={b}"),
            Formula::Rel(r, ts) => {
                write!(f, "{r}(")?;
                write_terms(f, ts)?;
                f.write_str(")")
            }
            Formula::NegRel(r, ts) => {
                write!(f, "!{r}(")?;
                write_terms(f, ts)?;
                f.write_str(")")
            }
            Formula::Dep(a, b) | Formula::Inc(a, b) => {
                f.write_str(if matches!(self, Formula::Dep(..)) { "dep(" } else { "inc(" })?;
                write_terms(f, a)?;
                f.write_str(";")?;
                write_terms(f, b)?;
                f.write_str(")")
            }
            Formula::Indep { cond, left, right } => {
                f.write_str("indep(")?;
                write_terms(f, cond)?;
                f.write_str(";")?;
                write_terms(f, left)?;
                f.write_str(";")?;
                write_terms(f, right)?;
                f.write_str(")")
            }
            Formula::And(l, r) | Formula::Or(l, r) => {
                let op = self.binary_op().unwrap();
                // chains of one connective nest to the left
                match l.binary_op() {
                    Some(o) if o != op => write!(f, "({l})")?,
                    _ => write!(f, "{l}")?,
                }
                write!(f, " {op} ")?;
                if r.binary_op().is_some() {
                    write!(f, "({r})")
                } else {
                    write!(f, "{r}")
                }
            }
            Formula::Exists(x, b) | Formula::Forall(x, b) => {
                let q = if matches!(self, Formula::Exists(..)) { "exists" } else { "forall" };
                if b.binary_op().is_some() {
                    write!(f, "{q} {x} ({b})")
                } else {
                    write!(f, "{q} {x} {b}")
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_of_paper_formulas() {
        let clique = parse("E(x,y) & x!=y & inc(y;x) & inc(x;y)").unwrap();
        assert_eq!(clique.free_vars(), BTreeSet::from(["x".into(), "y".into()]));
        let domset = parse("forall x exists y (inc(y;z) & (E(x,y) | x=y))").unwrap();
        assert_eq!(domset.free_vars(), BTreeSet::from(["z".into()]));
        let sentence = parse("forall x E(x,x)").unwrap();
        assert!(sentence.free_vars().is_empty());
    }

    #[test]
    fn quantifier_removes_only_its_variable() {
        let f = parse("exists x (E(x,y) & dep(x;z))").unwrap();
        assert_eq!(f.free_vars(), BTreeSet::from(["y".into(), "z".into()]));
    }

    #[test]
    fn render_nests_left() {
        let f = Formula::and(
            Formula::and(Formula::rel("P", &["x"]), Formula::rel("Q", &["x"])),
            Formula::or(Formula::eq("x", "y"), Formula::neq("x", "y")),
        );
        assert_eq!(f.to_string(), "P(x) & Q(x) & (x=y | x!=y)");
        assert_eq!(parse(&f.to_string()).unwrap(), f);
    }

    #[test]
    fn occurrences_count_polarity() {
        let f = parse("forall x (!S(x) | exists y (E(x,y) & S(y)))").unwrap();
        assert_eq!(f.occurrences("S"), (1, 1));
    }
}
