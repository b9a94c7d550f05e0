//! Classical satisfaction for first-order formulas.

use super::EvalError;
use crate::formula::{Formula, Term};
use crate::model::{Assignment, Elem, Structure};

fn value(structure: &Structure, s: &Assignment, t: &Term) -> Result<Elem, EvalError> {
    match t {
        Term::Var(v) => s.get(v).ok_or_else(|| EvalError::FreeVariable(v.clone())),
        Term::Const(c) => structure
            .constant(c)
            .ok_or_else(|| EvalError::UnknownConstant(c.clone())),
    }
}

/// `A ⊨_s φ` for a formula without dependency atoms.
pub fn eval_fo_tarski(structure: &Structure, s: &Assignment, formula: &Formula) -> Result<bool, EvalError> {
    Ok(match formula {
        Formula::Eq(a, b) => value(structure, s, a)? == value(structure, s, b)?,
        Formula::Neq(a, b) => value(structure, s, a)? != value(structure, s, b)?,
        Formula::Rel(name, ts) | Formula::NegRel(name, ts) => {
            let rel = structure
                .relation(name)
                .ok_or_else(|| EvalError::UnknownRelation(name.clone()))?;
            if rel.arity() != ts.len() {
                return Err(EvalError::Arity {
                    relation: name.clone(),
                    expected: rel.arity(),
                    found: ts.len(),
                });
            }
            let tuple = ts
                .iter()
                .map(|t| value(structure, s, t))
                .collect::<Result<Vec<_>, _>>()?;
            rel.contains(&tuple) == matches!(formula, Formula::Rel(..))
        }
        Formula::Dep(..) | Formula::Inc(..) | Formula::Indep { .. } => return Err(EvalError::NotFirstOrder),
        Formula::And(l, r) => {
            // evaluate both sides so errors surface regardless of the left value
            let (l, r) = (eval_fo_tarski(structure, s, l)?, eval_fo_tarski(structure, s, r)?);
            l && r
        }
        Formula::Or(l, r) => {
            let (l, r) = (eval_fo_tarski(structure, s, l)?, eval_fo_tarski(structure, s, r)?);
            l || r
        }
        Formula::Exists(x, body) => {
            let mut any = false;
            for a in structure.elements() {
                any |= eval_fo_tarski(structure, &s.bind(x, a), body)?;
            }
            any
        }
        Formula::Forall(x, body) => {
            let mut all = true;
            for a in structure.elements() {
                all &= eval_fo_tarski(structure, &s.bind(x, a), body)?;
            }
            all
        }
    })
}
