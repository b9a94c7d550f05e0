//! Recursive-descent parser for the ASCII formula syntax.
//!
//! ```text
//! formula := unary ('&' unary)* | unary ('|' unary)*
//! unary   := '(' formula ')' | ('exists' | 'forall') IDENT unary | atom
//! atom    := '!'? IDENT '(' terms ')'
//!          | 'dep' '(' terms ';' terms ')'
//!          | 'inc' '(' terms ';' terms ')'
//!          | 'indep' '(' terms ';' terms ';' terms ')'
//!          | term ('=' | '!=') term
//! ```
//!
//! Mixing `&` and `|` at one level requires parentheses.

use thiserror::Error;

use super::{Formula, Term};
use crate::model::Vocabulary;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormulaError {
    #[error("{line}:{col}: {message}")]
    Syntax {
        line: usize,
        col: usize,
        message: String,
    },
    #[error("relation `{relation}` used with {found} arguments, declared arity {expected}")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("inclusion atom needs tuples of equal length ({0} vs {1})")]
    InclusionArity(usize, usize),
}

const KEYWORDS: [&str; 5] = ["exists", "forall", "dep", "inc", "indep"];

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    LParen,
    RParen,
    Comma,
    Semi,
    And,
    Or,
    Not,
    Eq,
    Neq,
    End,
}

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl Lexer<'_> {
    fn location(&self, pos: usize) -> (usize, usize) {
        let before = &self.src[..pos];
        let line = before.matches('\n').count() + 1;
        let col = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
        (line, col)
    }

    fn next_token(&mut self) -> Result<(Tok, usize), FormulaError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = bytes.get(self.pos) else {
            return Ok((Tok::End, start));
        };
        self.pos += 1;
        let tok = match c {
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b',' => Tok::Comma,
            b';' => Tok::Semi,
            b'&' => Tok::And,
            b'|' => Tok::Or,
            b'=' => Tok::Eq,
            b'!' if bytes.get(self.pos) == Some(&b'=') => {
                self.pos += 1;
                Tok::Neq
            }
            b'!' => Tok::Not,
            c if c.is_ascii_alphanumeric() || c == b'_' => {
                while bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                Tok::Ident(self.src[start..self.pos].to_string())
            }
            _ => {
                let (line, col) = self.location(start);
                let ch = self.src[start..].chars().next().unwrap_or('?');
                return Err(FormulaError::Syntax {
                    line,
                    col,
                    message: format!("unexpected character `{ch}`"),
                });
            }
        };
        Ok((tok, start))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    at: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self, FormulaError> {
        let mut lexer = Lexer { src, pos: 0 };
        let (tok, at) = lexer.next_token()?;
        Ok(Parser { lexer, tok, at })
    }

    fn advance(&mut self) -> Result<Tok, FormulaError> {
        let (next, at) = self.lexer.next_token()?;
        self.at = at;
        Ok(std::mem::replace(&mut self.tok, next))
    }

    fn error<T>(&self, message: impl Into<String>) -> Result<T, FormulaError> {
        let (line, col) = self.lexer.location(self.at);
        Err(FormulaError::Syntax {
            line,
            col,
            message: message.into(),
        })
    }

    fn expect(&mut self, tok: Tok, what: &str) -> Result<(), FormulaError> {
        if self.tok == tok {
            self.advance()?;
            Ok(())
        } else {
            self.error(format!("expected {what}, found {}", describe(&self.tok)))
        }
    }

    fn ident(&mut self) -> Result<String, FormulaError> {
        match &self.tok {
            Tok::Ident(name) if !KEYWORDS.contains(&name.as_str()) => {
                let name = name.clone();
                self.advance()?;
                Ok(name)
            }
            other => self.error(format!("expected identifier, found {}", describe(other))),
        }
    }

    fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        let op = match self.tok {
            Tok::And | Tok::Or => self.tok.clone(),
            _ => return Ok(acc),
        };
        while self.tok == op {
            self.advance()?;
            let rhs = self.unary()?;
            acc = if op == Tok::And {
                Formula::and(acc, rhs)
            } else {
                Formula::or(acc, rhs)
            };
        }
        if matches!(self.tok, Tok::And | Tok::Or) {
            return self.error("mixing `&` and `|` requires parentheses");
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        match &self.tok {
            Tok::LParen => {
                self.advance()?;
                let f = self.formula()?;
                self.expect(Tok::RParen, "`)`")?;
                Ok(f)
            }
            Tok::Ident(kw) if kw == "exists" || kw == "forall" => {
                let universal = kw == "forall";
                self.advance()?;
                let x = self.ident()?;
                let body = self.unary()?;
                Ok(if universal {
                    Formula::forall(x, body)
                } else {
                    Formula::exists(x, body)
                })
            }
            Tok::Not => {
                self.advance()?;
                if matches!(self.tok, Tok::LParen) {
                    return self.error("negation is only allowed in front of relation atoms");
                }
                let name = self.ident()?;
                if self.tok != Tok::LParen {
                    return self.error("negation is only allowed in front of relation atoms");
                }
                let args = self.args()?;
                Ok(Formula::NegRel(name, args))
            }
            Tok::Ident(kw) if kw == "dep" || kw == "inc" || kw == "indep" => {
                let kw = kw.clone();
                self.advance()?;
                let groups = self.groups()?;
                match (kw.as_str(), groups.len()) {
                    ("dep", 2) => {
                        let mut g = groups.into_iter();
                        Ok(Formula::Dep(g.next().unwrap(), g.next().unwrap()))
                    }
                    ("inc", 2) => {
                        let mut g = groups.into_iter();
                        let (a, b) = (g.next().unwrap(), g.next().unwrap());
                        if a.len() != b.len() {
                            return Err(FormulaError::InclusionArity(a.len(), b.len()));
                        }
                        Ok(Formula::Inc(a, b))
                    }
                    ("indep", 3) => {
                        let mut g = groups.into_iter();
                        Ok(Formula::Indep {
                            cond: g.next().unwrap(),
                            left: g.next().unwrap(),
                            right: g.next().unwrap(),
                        })
                    }
                    (kw, n) => self.error(format!("`{kw}` takes {} `;`-separated tuples, found {n}", if kw == "indep" { 3 } else { 2 })),
                }
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                match self.tok {
                    Tok::LParen => {
                        let args = self.args()?;
                        Ok(Formula::Rel(name, args))
                    }
                    Tok::Eq | Tok::Neq => {
                        let negated = self.advance()? == Tok::Neq;
                        let rhs = Term::Var(self.ident()?);
                        let lhs = Term::Var(name);
                        Ok(if negated {
                            Formula::Neq(lhs, rhs)
                        } else {
                            Formula::Eq(lhs, rhs)
                        })
                    }
                    _ => self.error(format!("expected `(`, `=` or `!=` after `{name}`")),
                }
            }
            other => self.error(format!("expected a formula, found {}", describe(other))),
        }
    }

    fn args(&mut self) -> Result<Vec<Term>, FormulaError> {
        self.expect(Tok::LParen, "`(`")?;
        let terms = self.terms()?;
        self.expect(Tok::RParen, "`)`")?;
        Ok(terms)
    }

    fn groups(&mut self) -> Result<Vec<Vec<Term>>, FormulaError> {
        self.expect(Tok::LParen, "`(`")?;
        let mut groups = vec![self.terms()?];
        while self.tok == Tok::Semi {
            self.advance()?;
            groups.push(self.terms()?);
        }
        self.expect(Tok::RParen, "`)`")?;
        Ok(groups)
    }

    fn terms(&mut self) -> Result<Vec<Term>, FormulaError> {
        let mut out = Vec::new();
        if !matches!(self.tok, Tok::Ident(_)) {
            return Ok(out);
        }
        out.push(Term::Var(self.ident()?));
        while self.tok == Tok::Comma {
            self.advance()?;
            out.push(Term::Var(self.ident()?));
        }
        Ok(out)
    }
}

fn describe(tok: &Tok) -> String {
    match tok {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::LParen => "`(`".into(),
        Tok::RParen => "`)`".into(),
        Tok::Comma => "`,`".into(),
        Tok::Semi => "`;`".into(),
        Tok::And => "`&`".into(),
        Tok::Or => "`|`".into(),
        Tok::Not => "`!`".into(),
        Tok::Eq => "`=`".into(),
        Tok::Neq => "`!=`".into(),
        Tok::End => "end of input".into(),
    }
}

/// Parses a formula. Every identifier in term position becomes a variable;
/// use [`parse_in`] to resolve constants of a vocabulary.
pub fn parse(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(text)?;
    let f = p.formula()?;
    if p.tok != Tok::End {
        return p.error(format!("unexpected {}", describe(&p.tok)));
    }
    Ok(f)
}

/// Parses a formula against a vocabulary: unbound identifiers naming a
/// constant become constants, and relation arities are checked.
pub fn parse_in(text: &str, vocabulary: &Vocabulary) -> Result<Formula, FormulaError> {
    let f = parse(text)?;
    resolve(&f, vocabulary, &mut Vec::new())
}

fn resolve_terms(ts: &[Term], vocab: &Vocabulary, bound: &[String]) -> Vec<Term> {
    ts.iter()
        .map(|t| match t {
            Term::Var(v) if !bound.contains(v) && vocab.has_constant(v) => Term::Const(v.clone()),
            other => other.clone(),
        })
        .collect()
}

fn resolve(f: &Formula, vocab: &Vocabulary, bound: &mut Vec<String>) -> Result<Formula, FormulaError> {
    let terms = |ts: &[Term], bound: &[String]| resolve_terms(ts, vocab, bound);
    Ok(match f {
        Formula::Eq(a, b) | Formula::Neq(a, b) => {
            let r = terms(&[a.clone(), b.clone()], bound);
            if matches!(f, Formula::Eq(..)) {
                Formula::Eq(r[0].clone(), r[1].clone())
            } else {
                Formula::Neq(r[0].clone(), r[1].clone())
            }
        }
        Formula::Rel(name, ts) | Formula::NegRel(name, ts) => {
            let expected = vocab
                .arity(name)
                .ok_or_else(|| FormulaError::UnknownRelation(name.clone()))?;
            if expected != ts.len() {
                return Err(FormulaError::Arity {
                    relation: name.clone(),
                    expected,
                    found: ts.len(),
                });
            }
            if matches!(f, Formula::Rel(..)) {
                Formula::Rel(name.clone(), terms(ts, bound))
            } else {
                Formula::NegRel(name.clone(), terms(ts, bound))
            }
        }
        Formula::Dep(a, b) => Formula::Dep(terms(a, bound), terms(b, bound)),
        Formula::Inc(a, b) => Formula::Inc(terms(a, bound), terms(b, bound)),
        Formula::Indep { cond, left, right } => Formula::Indep {
            cond: terms(cond, bound),
            left: terms(left, bound),
            right: terms(right, bound),
        },
        Formula::And(l, r) => Formula::and(resolve(l, vocab, bound)?, resolve(r, vocab, bound)?),
        Formula::Or(l, r) => Formula::or(resolve(l, vocab, bound)?, resolve(r, vocab, bound)?),
        Formula::Exists(x, b) | Formula::Forall(x, b) => {
            bound.push(x.clone());
            let body = resolve(b, vocab, bound);
            bound.pop();
            if matches!(f, Formula::Exists(..)) {
                Formula::exists(x.clone(), body?)
            } else {
                Formula::forall(x.clone(), body?)
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_clique_formula() {
        let f = parse("E(x,y) & x!=y & inc(y;x) & inc(x;y)").unwrap();
        let expected = Formula::conj([
            Formula::rel("E", &["x", "y"]),
            Formula::neq("x", "y"),
            Formula::inc(&["y"], &["x"]),
            Formula::inc(&["x"], &["y"]),
        ]);
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_domset_formula() {
        let f = parse("forall x exists y (inc(y;z) & (E(x,y) | x=y))").unwrap();
        let expected = Formula::forall(
            "x",
            Formula::exists(
                "y",
                Formula::and(
                    Formula::inc(&["y"], &["z"]),
                    Formula::or(Formula::rel("E", &["x", "y"]), Formula::eq("x", "y")),
                ),
            ),
        );
        assert_eq!(f, expected);
    }

    #[test]
    fn parses_trivial_equality() {
        assert_eq!(parse("x=x").unwrap(), Formula::eq("x", "x"));
    }

    #[test]
    fn dependence_shorthand_and_independence() {
        assert_eq!(parse("dep(;y)").unwrap(), Formula::dep(&[], &["y"]));
        assert_eq!(
            parse("indep(c;a,b;d)").unwrap(),
            Formula::indep(&["c"], &["a", "b"], &["d"])
        );
        assert_eq!(parse("indep(;a;b)").unwrap(), Formula::indep(&[], &["a"], &["b"]));
    }

    #[test]
    fn rejects_mixed_connectives() {
        let err = parse("P(x) & Q(x) | R(x)").unwrap_err();
        assert!(matches!(err, FormulaError::Syntax { line: 1, col: 13, .. }), "{err}");
    }

    #[test]
    fn rejects_negated_compound() {
        assert!(parse("!(P(x) & Q(x))").is_err());
        assert!(parse("!x=y").is_err());
    }

    #[test]
    fn reports_line_and_column() {
        let err = parse("P(x) &\n  Q(x,").unwrap_err();
        assert_eq!(
            err,
            FormulaError::Syntax {
                line: 2,
                col: 7,
                message: "expected identifier, found end of input".into()
            }
        );
    }

    #[test]
    fn inclusion_tuples_must_match() {
        assert_eq!(parse("inc(x,y;z)"), Err(FormulaError::InclusionArity(2, 1)));
    }

    #[test]
    fn keywords_are_reserved() {
        assert!(parse("exists dep P(dep)").is_err());
        assert!(parse("dep(x;y;z)").is_err());
    }

    #[test]
    fn resolves_constants_and_checks_arity() {
        let vocab = Vocabulary::new([("E".to_string(), 2)], ["o".to_string()]).unwrap();
        let f = parse_in("forall x (!E(o,x) | x=o)", &vocab).unwrap();
        assert_eq!(
            f,
            Formula::forall(
                "x",
                Formula::or(
                    Formula::NegRel("E".into(), vec![Term::constant("o"), Term::var("x")]),
                    Formula::Eq(Term::var("x"), Term::constant("o")),
                )
            )
        );
        assert!(f.free_vars().is_empty());
        // a bound variable shadows the constant
        let g = parse_in("exists o E(o,o)", &vocab).unwrap();
        assert_eq!(g, Formula::exists("o", Formula::rel("E", &["o", "o"])));
        assert_eq!(
            parse_in("E(x)", &vocab),
            Err(FormulaError::Arity {
                relation: "E".into(),
                expected: 2,
                found: 1
            })
        );
        assert_eq!(
            parse_in("F(x)", &vocab),
            Err(FormulaError::UnknownRelation("F".into()))
        );
    }
}
