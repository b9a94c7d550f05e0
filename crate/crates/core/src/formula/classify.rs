use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::Formula;

/// Which dependency atoms occur in a formula.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct AtomSet {
    pub dep: bool,
    pub inc: bool,
    pub indep: bool,
}

impl AtomSet {
    pub fn is_empty(&self) -> bool {
        !(self.dep || self.inc || self.indep)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Fragment {
    FirstOrder,
    Dependence,
    Inclusion,
    Independence,
    Mixed,
}

impl fmt::Display for Fragment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Fragment::FirstOrder => "FO",
            Fragment::Dependence => "FO(dep)",
            Fragment::Inclusion => "FO(inc)",
            Fragment::Independence => "FO(indep)",
            Fragment::Mixed => "mixed",
        })
    }
}

/// Quantifier prefix class of a prenex formula.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Prefix {
    /// Quantifier-free: both Σ_0 and Π_0.
    QuantifierFree,
    /// Starts with `exists`, with this many quantifier blocks.
    Sigma(usize),
    /// Starts with `forall`, with this many quantifier blocks.
    Pi(usize),
}

impl fmt::Display for Prefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prefix::QuantifierFree => f.write_str("Sigma0/Pi0"),
            Prefix::Sigma(t) => write!(f, "Sigma{t}"),
            Prefix::Pi(t) => write!(f, "Pi{t}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FragmentReport {
    pub atoms: AtomSet,
    pub fragment: Fragment,
    /// `None` when the formula is not in prenex form.
    pub prefix: Option<Prefix>,
    pub free_vars: BTreeSet<String>,
}

impl fmt::Display for FragmentReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "fragment={}", self.fragment)?;
        match self.prefix {
            Some(p) => write!(f, " prefix={p}")?,
            None => write!(f, " prefix=none")?,
        }
        let vars: Vec<&str> = self.free_vars.iter().map(String::as_str).collect();
        write!(f, " free={{{}}}", vars.join(","))
    }
}

fn is_quantifier_free(f: &Formula) -> bool {
    match f {
        Formula::Exists(..) | Formula::Forall(..) => false,
        Formula::And(l, r) | Formula::Or(l, r) => is_quantifier_free(l) && is_quantifier_free(r),
        _ => true,
    }
}

fn prefix(f: &Formula) -> Option<Prefix> {
    let mut blocks = 0;
    let mut last: Option<bool> = None;
    let mut first = None;
    let mut cur = f;
    loop {
        let universal = match cur {
            Formula::Forall(_, b) => {
                cur = b;
                true
            }
            Formula::Exists(_, b) => {
                cur = b;
                false
            }
            matrix => {
                if !is_quantifier_free(matrix) {
                    return None;
                }
                break;
            }
        };
        first.get_or_insert(universal);
        if last != Some(universal) {
            blocks += 1;
            last = Some(universal);
        }
    }
    Some(match first {
        None => Prefix::QuantifierFree,
        Some(true) => Prefix::Pi(blocks),
        Some(false) => Prefix::Sigma(blocks),
    })
}

pub fn classify(f: &Formula) -> FragmentReport {
    let atoms = f.atoms();
    let fragment = match (atoms.dep, atoms.inc, atoms.indep) {
        (false, false, false) => Fragment::FirstOrder,
        (true, false, false) => Fragment::Dependence,
        (false, true, false) => Fragment::Inclusion,
        (false, false, true) => Fragment::Independence,
        _ => Fragment::Mixed,
    };
    FragmentReport {
        atoms,
        fragment,
        prefix: prefix(f),
        free_vars: f.free_vars(),
    }
}
