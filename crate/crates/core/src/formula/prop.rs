//! Propositional formulas in the alternating Γ/Δ shape used by weighted
//! satisfiability.
//!
//! `Γ_{0,d}` is a conjunction of at most `d` literals, `Δ_{0,d}` a
//! disjunction of at most `d` literals, `Γ_{t,d}` a conjunction of
//! `Δ_{t-1,d}` formulas and `Δ_{t,d}` a disjunction of `Γ_{t-1,d}` formulas.
//! Layers with a single child are collapsed, so `x1 & x2` is in `Γ_{1,1}`.

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;

use super::FormulaError;

/// Normalized propositional tree: connective nodes have at least two
/// children and never a child of their own kind.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Prop {
    Lit { var: u32, positive: bool },
    And(Vec<Prop>),
    Or(Vec<Prop>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Polarity {
    Positive,
    Negative,
    Mixed,
}

impl fmt::Display for Polarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Polarity::Positive => "positive",
            Polarity::Negative => "negative",
            Polarity::Mixed => "mixed",
        })
    }
}

/// Least `(t, d)` with `t ≥ 1` such that a formula lies in `Γ_{t,d}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct GammaClass {
    pub depth: usize,
    pub fan_in: usize,
    pub polarity: Polarity,
}

impl Prop {
    pub fn lit(var: u32, positive: bool) -> Self {
        Prop::Lit { var, positive }
    }

    /// Conjunction with flattening and single-child collapse.
    pub fn and(children: Vec<Prop>) -> Self {
        Self::join(children, true)
    }

    pub fn or(children: Vec<Prop>) -> Self {
        Self::join(children, false)
    }

    fn join(children: Vec<Prop>, conj: bool) -> Self {
        let mut flat = Vec::with_capacity(children.len());
        for c in children {
            match c {
                Prop::And(cs) if conj => flat.extend(cs),
                Prop::Or(cs) if !conj => flat.extend(cs),
                other => flat.push(other),
            }
        }
        assert!(!flat.is_empty(), "connective needs at least one child");
        if flat.len() == 1 {
            return flat.pop().unwrap();
        }
        if conj {
            Prop::And(flat)
        } else {
            Prop::Or(flat)
        }
    }

    pub fn children(&self) -> &[Prop] {
        match self {
            Prop::And(cs) | Prop::Or(cs) => cs,
            Prop::Lit { .. } => &[],
        }
    }

    pub fn eval(&self, true_vars: &BTreeSet<u32>) -> bool {
        match self {
            Prop::Lit { var, positive } => true_vars.contains(var) == *positive,
            Prop::And(cs) => cs.iter().all(|c| c.eval(true_vars)),
            Prop::Or(cs) => cs.iter().any(|c| c.eval(true_vars)),
        }
    }

    fn height(&self) -> usize {
        self.children().iter().map(|c| c.height() + 1).max().unwrap_or(0)
    }

    fn max_fan_in(&self) -> usize {
        self.children()
            .iter()
            .map(Prop::max_fan_in)
            .chain([self.children().len()])
            .max()
            .unwrap_or(0)
            .max(1)
    }

    fn collect(&self, vars: &mut BTreeSet<u32>, signs: &mut (bool, bool)) {
        match self {
            Prop::Lit { var, positive } => {
                vars.insert(*var);
                if *positive {
                    signs.0 = true;
                } else {
                    signs.1 = true;
                }
            }
            _ => self.children().iter().for_each(|c| c.collect(vars, signs)),
        }
    }
}

/// Membership in `Γ_{t,d}` (`conj = true`) or `Δ_{t,d}`.
fn member(p: &Prop, t: usize, d: usize, conj: bool) -> bool {
    let own_kind = match p {
        Prop::And(_) => conj,
        Prop::Or(_) => !conj,
        Prop::Lit { .. } => false,
    };
    if t == 0 {
        return match p {
            Prop::Lit { .. } => true,
            _ => own_kind && p.children().len() <= d && p.children().iter().all(|c| matches!(c, Prop::Lit { .. })),
        };
    }
    if own_kind {
        p.children().iter().all(|c| member(c, t - 1, d, !conj))
    } else {
        // a collapsed single-child layer
        member(p, t - 1, d, !conj)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PropFormula {
    root: Prop,
}

impl PropFormula {
    pub fn new(root: Prop) -> Self {
        PropFormula { root }
    }

    pub fn root(&self) -> &Prop {
        &self.root
    }

    pub fn variables(&self) -> BTreeSet<u32> {
        let mut vars = BTreeSet::new();
        self.root.collect(&mut vars, &mut (false, false));
        vars
    }

    pub fn var_count(&self) -> usize {
        self.variables().len()
    }

    pub fn polarity(&self) -> Polarity {
        let mut signs = (false, false);
        self.root.collect(&mut BTreeSet::new(), &mut signs);
        match signs {
            (true, false) => Polarity::Positive,
            (false, true) => Polarity::Negative,
            _ => Polarity::Mixed,
        }
    }

    pub fn eval(&self, true_vars: &BTreeSet<u32>) -> bool {
        self.root.eval(true_vars)
    }

    pub fn in_gamma(&self, t: usize, d: usize) -> bool {
        member(&self.root, t, d, true)
    }

    /// Least depth `t ≥ 1` and, for it, least fan-in `d`. Returns `None`
    /// when no alternating shape fits.
    pub fn gamma_class(&self) -> Option<GammaClass> {
        let max_d = self.root.max_fan_in();
        for t in 1..=self.root.height() + 1 {
            if let Some(d) = (1..=max_d).find(|&d| self.in_gamma(t, d)) {
                return Some(GammaClass {
                    depth: t,
                    fan_in: d,
                    polarity: self.polarity(),
                });
            }
        }
        None
    }

    /// Least `t ≥ 1` with the formula in `Γ_{t,1}`.
    pub fn depth_at_fan_in_one(&self) -> Option<usize> {
        (1..=self.root.height() + 1).find(|&t| self.in_gamma(t, 1))
    }
}

impl fmt::Display for Prop {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Prop::Lit { var, positive } => {
                if !positive {
                    f.write_str("!")?;
                }
                write!(f, "x{var}")
            }
            Prop::And(cs) | Prop::Or(cs) => {
                let op = if matches!(self, Prop::And(_)) { " & " } else { " | " };
                for (i, c) in cs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(op)?;
                    }
                    if matches!(c, Prop::Lit { .. }) {
                        write!(f, "{c}")?;
                    } else {
                        write!(f, "({c})")?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for PropFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.root.fmt(f)
    }
}

struct PropParser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl PropParser<'_> {
    fn skip_ws(&mut self) {
        while self.src.get(self.pos).is_some_and(u8::is_ascii_whitespace) {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let col = before.iter().rev().take_while(|&&b| b != b'\n').count() + 1;
        Err(FormulaError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn formula(&mut self) -> Result<Prop, FormulaError> {
        let first = self.unary()?;
        let op = match self.peek() {
            Some(c @ (b'&' | b'|')) => c,
            _ => return Ok(first),
        };
        let mut parts = vec![first];
        while self.peek() == Some(op) {
            self.pos += 1;
            parts.push(self.unary()?);
        }
        if matches!(self.peek(), Some(b'&' | b'|')) {
            return self.error("mixing `&` and `|` requires parentheses");
        }
        Ok(if op == b'&' { Prop::and(parts) } else { Prop::or(parts) })
    }

    fn unary(&mut self) -> Result<Prop, FormulaError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let p = self.formula()?;
                if self.peek() != Some(b')') {
                    return self.error("expected `)`");
                }
                self.pos += 1;
                Ok(p)
            }
            Some(b'!') => {
                self.pos += 1;
                let var = self.variable()?;
                Ok(Prop::lit(var, false))
            }
            _ => Ok(Prop::lit(self.variable()?, true)),
        }
    }

    fn variable(&mut self) -> Result<u32, FormulaError> {
        if self.peek() != Some(b'x') {
            return self.error("expected a variable `x<id>`");
        }
        self.pos += 1;
        let start = self.pos;
        while self.src.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .map_or_else(|| self.error("expected digits after `x`"), Ok)
    }
}

/// Parses `&`, `|`, `!` over variables `x<id>`; negation applies to
/// variables only.
pub fn parse_prop(text: &str) -> Result<PropFormula, FormulaError> {
    let mut p = PropParser {
        src: text.as_bytes(),
        pos: 0,
    };
    let root = p.formula()?;
    if p.peek().is_some() {
        return p.error("unexpected trailing input");
    }
    Ok(PropFormula::new(root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn class(s: &str) -> (usize, usize, Polarity) {
        let g = parse_prop(s).unwrap().gamma_class().unwrap();
        (g.depth, g.fan_in, g.polarity)
    }

    #[test]
    fn cnf_with_binary_clauses() {
        assert_eq!(class("(x1 | x2) & (x3 | x1)"), (1, 2, Polarity::Positive));
    }

    #[test]
    fn conjunction_of_literals() {
        assert_eq!(class("x1 & x2"), (1, 1, Polarity::Positive));
        assert_eq!(class("x1"), (1, 1, Polarity::Positive));
    }

    #[test]
    fn negative_clauses() {
        assert_eq!(class("(!x1 | !x2) & (!x3 | !x1)"), (1, 2, Polarity::Negative));
        assert_eq!(class("x1 & !x2"), (1, 1, Polarity::Mixed));
    }

    #[test]
    fn deeper_shapes() {
        // a single clause is a conjunction of one disjunction
        assert_eq!(class("x1 | x2"), (1, 2, Polarity::Positive));
        assert_eq!(class("(x1 & x2) | x3"), (2, 2, Polarity::Positive));
        let p = parse_prop("x1 & (x2 | x3)").unwrap();
        assert!(p.in_gamma(2, 1));
        assert_eq!(p.depth_at_fan_in_one(), Some(2));
    }

    #[test]
    fn membership_is_monotone_in_depth() {
        let p = parse_prop("(x1 | (x2 & x3)) & x4").unwrap();
        let first = (1..6).find(|&t| p.in_gamma(t, 1)).unwrap();
        assert!((first..8).all(|t| p.in_gamma(t, 1)));
    }

    #[test]
    fn parsing_flattens_and_renders() {
        let p = parse_prop("((x1 & x2) & x3) | (x4)").unwrap();
        assert_eq!(p.to_string(), "(x1 & x2 & x3) | x4");
        assert_eq!(parse_prop(&p.to_string()).unwrap(), p);
        assert!(parse_prop("x1 & x2 | x3").is_err());
        assert!(parse_prop("!(x1 & x2)").is_err());
        assert!(parse_prop("y1").is_err());
    }

    #[test]
    fn evaluation() {
        let p = parse_prop("(x1 | x2) & !x3").unwrap();
        assert!(p.eval(&BTreeSet::from([2])));
        assert!(!p.eval(&BTreeSet::from([2, 3])));
        assert_eq!(p.var_count(), 3);
    }
}
