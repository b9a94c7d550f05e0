//! Finite relational structures, assignments and teams.
//!
//! Elements of a structure are dense ids `0..n`. A [`Team`] stores its
//! variables in sorted order and its rows as value vectors aligned with that
//! order, so two teams over the same domain are equal exactly when their row
//! sets are equal.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

/// Element id of a structure's universe.
pub type Elem = u32;

/// One row of a team, aligned with [`Team::vars`].
pub type Row = Vec<Elem>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("symbol `{0}` is declared twice")]
    DuplicateSymbol(String),
    #[error("relation `{0}` must have positive arity")]
    ZeroArity(String),
    #[error("structures must have at least one element")]
    EmptyDomain,
    #[error("tuple for `{relation}` has {found} entries, expected {expected}")]
    TupleArity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("element {value} is outside the domain 0..{domain_size}")]
    ElementOutOfRange { value: Elem, domain_size: usize },
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("unknown element label `{0}`")]
    UnknownLabel(String),
    #[error("variable `{0}` appears twice")]
    DuplicateVariable(String),
    #[error("row has {found} values but the team has {expected} variables")]
    RowWidth { expected: usize, found: usize },
    #[error("assignment does not bind exactly the team variables")]
    DomainMismatch,
    #[error("variable `{0}` is not in the team domain")]
    NotInDomain(String),
    #[error("column order is not a permutation of the team domain")]
    NotPermutation,
    #[error("supplementing function has no value set for a row")]
    MissingRow,
    #[error("supplementing function maps a row to the empty set")]
    EmptyValueSet,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Relation and constant symbols of a structure. Function symbols are not
/// supported.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Vocabulary {
    relations: Vec<(String, usize)>,
    constants: Vec<String>,
}

impl Vocabulary {
    pub fn new(
        relations: impl IntoIterator<Item = (String, usize)>,
        constants: impl IntoIterator<Item = String>,
    ) -> Result<Self, ModelError> {
        let mut vocab = Vocabulary::default();
        for (name, arity) in relations {
            vocab.add_relation(name, arity)?;
        }
        for name in constants {
            vocab.add_constant(name)?;
        }
        Ok(vocab)
    }

    fn is_declared(&self, name: &str) -> bool {
        self.relations.iter().any(|(r, _)| r == name) || self.constants.iter().any(|c| c == name)
    }

    fn add_relation(&mut self, name: String, arity: usize) -> Result<(), ModelError> {
        if arity == 0 {
            return Err(ModelError::ZeroArity(name));
        }
        if self.is_declared(&name) {
            return Err(ModelError::DuplicateSymbol(name));
        }
        self.relations.push((name, arity));
        Ok(())
    }

    fn add_constant(&mut self, name: String) -> Result<(), ModelError> {
        if self.is_declared(&name) {
            return Err(ModelError::DuplicateSymbol(name));
        }
        self.constants.push(name);
        Ok(())
    }

    pub fn relations(&self) -> &[(String, usize)] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn arity(&self, relation: &str) -> Option<usize> {
        self.relations
            .iter()
            .find(|(name, _)| name == relation)
            .map(|&(_, arity)| arity)
    }

    pub fn has_constant(&self, name: &str) -> bool {
        self.constants.iter().any(|c| c == name)
    }
}

/// Interpretation of one relation symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relation {
    arity: usize,
    tuples: BTreeSet<Vec<Elem>>,
    // membership bitmap indexed by the tuple read as a base-n number
    dense: Option<Vec<bool>>,
    domain_size: usize,
}

const DENSE_LIMIT: usize = 1 << 20;

impl Relation {
    fn new(arity: usize, domain_size: usize, tuples: BTreeSet<Vec<Elem>>) -> Self {
        let cells = (0..arity).try_fold(1usize, |acc, _| acc.checked_mul(domain_size));
        let dense = cells.filter(|&c| c <= DENSE_LIMIT).map(|c| {
            let mut bits = vec![false; c];
            for t in &tuples {
                bits[dense_index(t, domain_size)] = true;
            }
            bits
        });
        Relation {
            arity,
            tuples,
            dense,
            domain_size,
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn tuples(&self) -> &BTreeSet<Vec<Elem>> {
        &self.tuples
    }

    pub fn len(&self) -> usize {
        self.tuples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tuples.is_empty()
    }

    #[inline]
    pub fn contains(&self, tuple: &[Elem]) -> bool {
        match &self.dense {
            Some(bits) => bits[dense_index(tuple, self.domain_size)],
            None => self.tuples.contains(tuple),
        }
    }
}

#[inline]
fn dense_index(tuple: &[Elem], n: usize) -> usize {
    tuple.iter().fold(0usize, |acc, &e| acc * n + e as usize)
}

/// A finite relational structure over the universe `0..domain_size`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Structure {
    vocabulary: Vocabulary,
    domain_size: usize,
    relations: BTreeMap<String, Relation>,
    constants: BTreeMap<String, Elem>,
    labels: Option<Vec<String>>,
}

impl Structure {
    /// A structure with an empty vocabulary.
    pub fn new(domain_size: usize) -> Result<Self, ModelError> {
        if domain_size == 0 {
            return Err(ModelError::EmptyDomain);
        }
        Ok(Structure {
            vocabulary: Vocabulary::default(),
            domain_size,
            relations: BTreeMap::new(),
            constants: BTreeMap::new(),
            labels: None,
        })
    }

    pub fn with_relation(
        mut self,
        name: impl Into<String>,
        arity: usize,
        tuples: impl IntoIterator<Item = Vec<Elem>>,
    ) -> Result<Self, ModelError> {
        let name = name.into();
        let mut set = BTreeSet::new();
        for t in tuples {
            if t.len() != arity {
                return Err(ModelError::TupleArity {
                    relation: name,
                    expected: arity,
                    found: t.len(),
                });
            }
            for &v in &t {
                self.check_elem(v)?;
            }
            set.insert(t);
        }
        self.vocabulary.add_relation(name.clone(), arity)?;
        self.relations
            .insert(name, Relation::new(arity, self.domain_size, set));
        Ok(self)
    }

    pub fn with_constant(mut self, name: impl Into<String>, value: Elem) -> Result<Self, ModelError> {
        let name = name.into();
        self.check_elem(value)?;
        self.vocabulary.add_constant(name.clone())?;
        self.constants.insert(name, value);
        Ok(self)
    }

    /// Attaches display labels, one per element. Labels must be distinct.
    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self, ModelError> {
        if labels.len() != self.domain_size {
            return Err(ModelError::Parse {
                line: 0,
                message: format!(
                    "{} labels given for a domain of size {}",
                    labels.len(),
                    self.domain_size
                ),
            });
        }
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l) {
                return Err(ModelError::DuplicateSymbol(l.clone()));
            }
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + Clone {
        0..self.domain_size as Elem
    }

    pub fn relation(&self, name: &str) -> Option<&Relation> {
        self.relations.get(name)
    }

    pub fn constant(&self, name: &str) -> Option<Elem> {
        self.constants.get(name).copied()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    /// Display label of an element (its id when unlabelled).
    pub fn label(&self, e: Elem) -> String {
        match &self.labels {
            Some(labels) => labels[e as usize].clone(),
            None => e.to_string(),
        }
    }

    /// Resolves a label, falling back to a numeric id.
    pub fn element(&self, token: &str) -> Result<Elem, ModelError> {
        if let Some(labels) = &self.labels {
            if let Some(i) = labels.iter().position(|l| l == token) {
                return Ok(i as Elem);
            }
        }
        match token.parse::<Elem>() {
            Ok(v) => {
                self.check_elem(v)?;
                Ok(v)
            }
            Err(_) => Err(ModelError::UnknownLabel(token.to_string())),
        }
    }

    pub fn check_elem(&self, v: Elem) -> Result<(), ModelError> {
        if (v as usize) < self.domain_size {
            Ok(())
        } else {
            Err(ModelError::ElementOutOfRange {
                value: v,
                domain_size: self.domain_size,
            })
        }
    }

    /// Checks that every value of the team lies in the universe.
    pub fn check_team(&self, team: &Team) -> Result<(), ModelError> {
        team.rows().iter().flatten().try_for_each(|&v| self.check_elem(v))
    }

    /// Parses the line-oriented structure format:
    ///
    /// ```text
    /// domain 3
    /// labels a b c          # optional
    /// rel E/2 : (0,1) (1,2)
    /// const o = 0
    /// ```
    pub fn parse(text: &str) -> Result<Self, ModelError> {
        let mut structure: Option<Structure> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let err = |message: String| ModelError::Parse {
                line: line_no,
                message,
            };
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (keyword, rest) = line
                .split_once(char::is_whitespace)
                .map(|(k, r)| (k, r.trim()))
                .unwrap_or((line, ""));
            match keyword {
                "domain" => {
                    if structure.is_some() {
                        return Err(err("duplicate `domain` line".into()));
                    }
                    let n: usize = rest
                        .parse()
                        .map_err(|_| err(format!("bad domain size `{rest}`")))?;
                    structure = Some(Structure::new(n).map_err(|e| err(e.to_string()))?);
                }
                "labels" => {
                    let s = structure
                        .take()
                        .ok_or_else(|| err("`labels` before `domain`".into()))?;
                    let labels = rest.split_whitespace().map(str::to_string).collect();
                    structure = Some(s.with_labels(labels).map_err(|e| err(e.to_string()))?);
                }
                "rel" => {
                    let s = structure
                        .take()
                        .ok_or_else(|| err("`rel` before `domain`".into()))?;
                    let (head, body) = rest.split_once(':').unwrap_or((rest, ""));
                    let (name, arity) = head
                        .trim()
                        .split_once('/')
                        .ok_or_else(|| err(format!("expected `<name>/<arity>`, got `{}`", head.trim())))?;
                    let arity: usize = arity
                        .trim()
                        .parse()
                        .map_err(|_| err(format!("bad arity `{arity}`")))?;
                    let tuples = parse_tuples(body)
                        .map_err(err)?
                        .into_iter()
                        .map(|t| {
                            t.iter()
                                .map(|tok| s.element(tok))
                                .collect::<Result<Vec<_>, _>>()
                        })
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(|e| err(e.to_string()))?;
                    structure = Some(
                        s.with_relation(name.trim(), arity, tuples)
                            .map_err(|e| err(e.to_string()))?,
                    );
                }
                "const" => {
                    let s = structure
                        .take()
                        .ok_or_else(|| err("`const` before `domain`".into()))?;
                    let (name, value) = rest
                        .split_once('=')
                        .ok_or_else(|| err("expected `const <name> = <id>`".into()))?;
                    let v = s.element(value.trim()).map_err(|e| err(e.to_string()))?;
                    structure = Some(s.with_constant(name.trim(), v).map_err(|e| err(e.to_string()))?);
                }
                other => return Err(err(format!("unknown keyword `{other}`"))),
            }
        }
        structure.ok_or(ModelError::Parse {
            line: 0,
            message: "missing `domain` line".into(),
        })
    }
}

fn parse_tuples(body: &str) -> Result<Vec<Vec<String>>, String> {
    let mut tuples = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let inner = rest
            .strip_prefix('(')
            .ok_or_else(|| format!("expected `(` at `{rest}`"))?;
        let close = inner
            .find(')')
            .ok_or_else(|| "unterminated tuple".to_string())?;
        let entries = inner[..close]
            .split(',')
            .map(|s| s.trim().to_string())
            .collect::<Vec<_>>();
        if entries.iter().any(String::is_empty) {
            return Err(format!("empty entry in tuple `({})`", &inner[..close]));
        }
        tuples.push(entries);
        rest = inner[close + 1..].trim_start();
    }
    Ok(tuples)
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "domain {}", self.domain_size)?;
        if let Some(labels) = &self.labels {
            writeln!(f, "labels {}", labels.join(" "))?;
        }
        for (name, arity) in self.vocabulary.relations() {
            write!(f, "rel {name}/{arity} :")?;
            for t in self.relations[name].tuples() {
                let parts: Vec<String> = t.iter().map(|&e| self.label(e)).collect();
                write!(f, " ({})", parts.join(","))?;
            }
            writeln!(f)?;
        }
        for name in self.vocabulary.constants() {
            writeln!(f, "const {name} = {}", self.label(self.constants[name]))?;
        }
        Ok(())
    }
}

/// A finite map from variables to elements.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Assignment(BTreeMap<String, Elem>);

impl Assignment {
    pub fn empty() -> Self {
        Assignment::default()
    }

    pub fn get(&self, var: &str) -> Option<Elem> {
        self.0.get(var).copied()
    }

    /// `s^x_a`: binds or overwrites `var`.
    pub fn bind(&self, var: &str, value: Elem) -> Self {
        let mut next = self.clone();
        next.0.insert(var.to_string(), value);
        next
    }

    pub fn vars(&self) -> impl Iterator<Item = &str> {
        self.0.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, Elem)> {
        self.0.iter().map(|(k, &v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl<S: Into<String>> FromIterator<(S, Elem)> for Assignment {
    fn from_iter<I: IntoIterator<Item = (S, Elem)>>(iter: I) -> Self {
        Assignment(iter.into_iter().map(|(k, v)| (k.into(), v)).collect())
    }
}

/// A set of assignments sharing one variable domain.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Team {
    vars: Vec<String>,
    rows: BTreeSet<Row>,
}

impl Team {
    /// The empty team over `vars`.
    pub fn new<S: Into<String>>(vars: impl IntoIterator<Item = S>) -> Result<Self, ModelError> {
        let mut vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        vars.sort();
        if let Some(w) = vars.windows(2).find(|w| w[0] == w[1]) {
            return Err(ModelError::DuplicateVariable(w[0].clone()));
        }
        Ok(Team {
            vars,
            rows: BTreeSet::new(),
        })
    }

    /// The team `{∅}`: one empty assignment over the empty domain.
    pub fn unit() -> Self {
        Team {
            vars: Vec::new(),
            rows: BTreeSet::from([Vec::new()]),
        }
    }

    /// Builds a team from rows given in the column order of `vars`.
    pub fn from_rows<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        rows: impl IntoIterator<Item = Row>,
    ) -> Result<Self, ModelError> {
        let given: Vec<String> = vars.into_iter().map(Into::into).collect();
        let mut team = Team::new(given.iter().cloned())?;
        let perm: Vec<usize> = team
            .vars
            .iter()
            .map(|v| given.iter().position(|g| g == v).expect("same variable set"))
            .collect();
        for row in rows {
            if row.len() != given.len() {
                return Err(ModelError::RowWidth {
                    expected: given.len(),
                    found: row.len(),
                });
            }
            team.rows.insert(perm.iter().map(|&i| row[i]).collect());
        }
        Ok(team)
    }

    pub fn from_assignments<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        assignments: impl IntoIterator<Item = Assignment>,
    ) -> Result<Self, ModelError> {
        let mut team = Team::new(vars)?;
        for s in assignments {
            team.insert(&s)?;
        }
        Ok(team)
    }

    pub(crate) fn from_sorted_parts(vars: Vec<String>, rows: BTreeSet<Row>) -> Self {
        debug_assert!(vars.windows(2).all(|w| w[0] < w[1]));
        Team { vars, rows }
    }

    pub fn insert(&mut self, s: &Assignment) -> Result<bool, ModelError> {
        if s.len() != self.vars.len() {
            return Err(ModelError::DomainMismatch);
        }
        let row = self
            .vars
            .iter()
            .map(|v| s.get(v).ok_or(ModelError::DomainMismatch))
            .collect::<Result<Row, _>>()?;
        Ok(self.rows.insert(row))
    }

    /// Inserts a row aligned with [`Team::vars`].
    pub fn insert_row(&mut self, row: Row) -> Result<bool, ModelError> {
        if row.len() != self.vars.len() {
            return Err(ModelError::RowWidth {
                expected: self.vars.len(),
                found: row.len(),
            });
        }
        Ok(self.rows.insert(row))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn rows(&self) -> &BTreeSet<Row> {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn column(&self, var: &str) -> Option<usize> {
        self.vars.binary_search_by(|v| v.as_str().cmp(var)).ok()
    }

    pub fn assignments(&self) -> impl Iterator<Item = Assignment> + '_ {
        self.rows
            .iter()
            .map(|row| self.vars.iter().cloned().zip(row.iter().copied()).collect())
    }

    pub fn contains(&self, s: &Assignment) -> bool {
        if s.len() != self.vars.len() {
            return false;
        }
        let row: Option<Row> = self.vars.iter().map(|v| s.get(v)).collect();
        row.is_some_and(|r| self.rows.contains(&r))
    }

    pub fn is_subteam_of(&self, other: &Team) -> bool {
        self.vars == other.vars && self.rows.is_subset(&other.rows)
    }

    /// Union of two teams over the same domain.
    pub fn union(&self, other: &Team) -> Result<Team, ModelError> {
        if self.vars != other.vars {
            return Err(ModelError::DomainMismatch);
        }
        Ok(Team {
            vars: self.vars.clone(),
            rows: self.rows.union(&other.rows).cloned().collect(),
        })
    }

    /// The subteam made of the rows whose index (in row order) is set in `mask`.
    pub fn subteam(&self, mask: u64) -> Team {
        Team {
            vars: self.vars.clone(),
            rows: self
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| *i < 64 && mask >> i & 1 == 1)
                .map(|(_, r)| r.clone())
                .collect(),
        }
    }

    /// All subteams, for teams of at most 20 rows.
    pub fn subteams(&self) -> impl Iterator<Item = Team> + '_ {
        assert!(self.len() <= 20, "subteam enumeration is limited to 20 rows");
        (0u64..1 << self.len()).map(move |m| self.subteam(m))
    }
}

impl fmt::Display for Team {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "(")?;
            for (j, (v, e)) in self.vars.iter().zip(row).enumerate() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{v}={e}")?;
            }
            write!(f, ")")?;
        }
        write!(f, "}}")
    }
}

fn sorted_insert(vars: &[String], x: &str) -> (Vec<String>, usize, bool) {
    match vars.binary_search_by(|v| v.as_str().cmp(x)) {
        Ok(i) => (vars.to_vec(), i, true),
        Err(i) => {
            let mut out = vars.to_vec();
            out.insert(i, x.to_string());
            (out, i, false)
        }
    }
}

fn extend_row(row: &[Elem], col: usize, present: bool, value: Elem) -> Row {
    let mut out = row.to_vec();
    if present {
        out[col] = value;
    } else {
        out.insert(col, value);
    }
    out
}

/// `T^x_A`: every row extended (or overwritten) with every element for `x`.
pub fn duplicate(structure: &Structure, team: &Team, x: &str) -> Team {
    let (vars, col, present) = sorted_insert(&team.vars, x);
    let rows = team
        .rows
        .iter()
        .flat_map(|row| structure.elements().map(move |a| extend_row(row, col, present, a)))
        .collect();
    Team::from_sorted_parts(vars, rows)
}

/// `T^x_f` for a supplementing function given row by row.
pub fn supplement(
    structure: &Structure,
    team: &Team,
    x: &str,
    f: &BTreeMap<Row, BTreeSet<Elem>>,
) -> Result<Team, ModelError> {
    let (vars, col, present) = sorted_insert(&team.vars, x);
    let mut rows = BTreeSet::new();
    for row in &team.rows {
        let values = f.get(row).ok_or(ModelError::MissingRow)?;
        if values.is_empty() {
            return Err(ModelError::EmptyValueSet);
        }
        for &a in values {
            structure.check_elem(a)?;
            rows.insert(extend_row(row, col, present, a));
        }
    }
    Ok(Team::from_sorted_parts(vars, rows))
}

/// `T↾Y`.
pub fn restrict<S: AsRef<str>>(
    team: &Team,
    vars: impl IntoIterator<Item = S>,
) -> Result<Team, ModelError> {
    let mut keep = Vec::new();
    for v in vars {
        let v = v.as_ref();
        let col = team
            .column(v)
            .ok_or_else(|| ModelError::NotInDomain(v.to_string()))?;
        keep.push(col);
    }
    keep.sort_unstable();
    keep.dedup();
    let new_vars = keep.iter().map(|&c| team.vars[c].clone()).collect();
    let rows = team
        .rows
        .iter()
        .map(|row| keep.iter().map(|&c| row[c]).collect())
        .collect();
    Ok(Team::from_sorted_parts(new_vars, rows))
}

/// `rel(T)` read in the given column order.
pub fn rel<S: AsRef<str>>(team: &Team, order: &[S]) -> Result<BTreeSet<Vec<Elem>>, ModelError> {
    if order.len() != team.vars.len() {
        return Err(ModelError::NotPermutation);
    }
    let mut cols = Vec::with_capacity(order.len());
    for v in order {
        let c = team.column(v.as_ref()).ok_or(ModelError::NotPermutation)?;
        if cols.contains(&c) {
            return Err(ModelError::NotPermutation);
        }
        cols.push(c);
    }
    Ok(team
        .rows
        .iter()
        .map(|row| cols.iter().map(|&c| row[c]).collect())
        .collect())
}

/// Lexicographic enumeration of `{0..n}^width`, first column most significant.
#[derive(Debug, Clone)]
pub struct Rows {
    n: Elem,
    next: Option<Row>,
}

impl Rows {
    pub fn new(n: usize, width: usize) -> Self {
        Rows {
            n: n as Elem,
            next: (n > 0 || width == 0).then(|| vec![0; width]),
        }
    }
}

impl Iterator for Rows {
    type Item = Row;

    fn next(&mut self) -> Option<Row> {
        let current = self.next.take()?;
        let mut succ = current.clone();
        for i in (0..succ.len()).rev() {
            succ[i] += 1;
            if succ[i] < self.n {
                self.next = Some(succ);
                return Some(current);
            }
            succ[i] = 0;
        }
        Some(current)
    }
}

/// Every assignment over `vars`, ordered lexicographically by sorted
/// variable name and then element id. Yields exactly one (empty) assignment
/// when `vars` is empty.
pub fn all_assignments<S: Into<String>>(
    structure: &Structure,
    vars: impl IntoIterator<Item = S>,
) -> impl Iterator<Item = Assignment> {
    let mut names: Vec<String> = vars.into_iter().map(Into::into).collect();
    names.sort();
    names.dedup();
    Rows::new(structure.domain_size(), names.len())
        .map(move |row| names.iter().cloned().zip(row).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(n: usize) -> Structure {
        Structure::new(n).unwrap()
    }

    fn team(vars: &[&str], rows: &[&[Elem]]) -> Team {
        Team::from_rows(vars.iter().copied(), rows.iter().map(|r| r.to_vec())).unwrap()
    }

    #[test]
    fn duplicate_unit_team() {
        let t = duplicate(&s(2), &Team::unit(), "x");
        assert_eq!(t, team(&["x"], &[&[0], &[1]]));
    }

    #[test]
    fn duplicate_empty_team_stays_empty() {
        let t = duplicate(&s(3), &Team::new(["x"]).unwrap(), "y");
        assert!(t.is_empty());
        assert_eq!(t.vars(), ["x", "y"]);
    }

    #[test]
    fn duplicate_adds_column() {
        let t = duplicate(&s(3), &team(&["x"], &[&[0]]), "y");
        assert_eq!(t, team(&["x", "y"], &[&[0, 0], &[0, 1], &[0, 2]]));
    }

    #[test]
    fn duplicate_overwrites_present_variable() {
        let t = duplicate(&s(2), &team(&["x", "y"], &[&[0, 1], &[1, 1]]), "x");
        assert_eq!(t, team(&["x", "y"], &[&[0, 1], &[1, 1]]));
        assert_eq!(duplicate(&s(2), &t, "x"), t);
    }

    #[test]
    fn supplement_full_domain_is_duplicate() {
        let st = s(3);
        let t = team(&["x"], &[&[0], &[2]]);
        let f = t
            .rows()
            .iter()
            .map(|r| (r.clone(), st.elements().collect()))
            .collect();
        assert_eq!(supplement(&st, &t, "y", &f).unwrap(), duplicate(&st, &t, "y"));
    }

    #[test]
    fn supplement_expands_rows() {
        let t = team(&["x"], &[&[0], &[1]]);
        let f = BTreeMap::from([
            (vec![0], BTreeSet::from([1])),
            (vec![1], BTreeSet::from([0, 1])),
        ]);
        let out = supplement(&s(2), &t, "y", &f).unwrap();
        assert_eq!(out, team(&["x", "y"], &[&[0, 1], &[1, 0], &[1, 1]]));
    }

    #[test]
    fn supplement_of_empty_team() {
        let t = Team::new(["x"]).unwrap();
        let out = supplement(&s(2), &t, "y", &BTreeMap::new()).unwrap();
        assert!(out.is_empty());
    }

    #[test]
    fn supplement_rejects_bad_functions() {
        let t = team(&["x"], &[&[0], &[1]]);
        let missing = BTreeMap::from([(vec![0], BTreeSet::from([1]))]);
        assert_eq!(
            supplement(&s(2), &t, "y", &missing),
            Err(ModelError::MissingRow)
        );
        let empty = BTreeMap::from([(vec![0], BTreeSet::from([1])), (vec![1], BTreeSet::new())]);
        assert_eq!(
            supplement(&s(2), &t, "y", &empty),
            Err(ModelError::EmptyValueSet)
        );
    }

    #[test]
    fn restrict_deduplicates() {
        let t = team(&["x", "y"], &[&[0, 1], &[0, 2]]);
        assert_eq!(restrict(&t, ["x"]).unwrap(), team(&["x"], &[&[0]]));
        assert_eq!(restrict(&t, ["x", "y"]).unwrap(), t);
        let t = team(&["x", "y"], &[&[0, 1], &[1, 1]]);
        assert_eq!(restrict(&t, ["y"]).unwrap(), team(&["y"], &[&[1]]));
        assert!(matches!(restrict(&t, ["z"]), Err(ModelError::NotInDomain(_))));
    }

    #[test]
    fn rel_reorders_columns() {
        let t = team(&["x", "y"], &[&[0, 1]]);
        assert_eq!(rel(&t, &["y", "x"]).unwrap(), BTreeSet::from([vec![1, 0]]));
        let t = team(&["x"], &[&[2], &[5]]);
        assert_eq!(rel(&t, &["x"]).unwrap(), BTreeSet::from([vec![2], vec![5]]));
        assert!(rel(&Team::new(["x"]).unwrap(), &["x"]).unwrap().is_empty());
        assert_eq!(rel(&t, &["y"]), Err(ModelError::NotPermutation));
        let t2 = team(&["x", "y"], &[&[0, 1]]);
        assert_eq!(rel(&t2, &["x", "x"]), Err(ModelError::NotPermutation));
    }

    #[test]
    fn all_assignments_order() {
        let empty: Vec<_> = all_assignments(&s(3), Vec::<String>::new()).collect();
        assert_eq!(empty, vec![Assignment::empty()]);
        let xs: Vec<_> = all_assignments(&s(2), ["x"]).collect();
        assert_eq!(xs, vec![[("x", 0)].into_iter().collect(), [("x", 1)].into_iter().collect()]);
        let xy: Vec<Vec<Elem>> = all_assignments(&s(3), ["y", "x"])
            .map(|a| vec![a.get("x").unwrap(), a.get("y").unwrap()])
            .collect();
        let expected: Vec<Vec<Elem>> = (0..3).flat_map(|a| (0..3).map(move |b| vec![a, b])).collect();
        assert_eq!(xy, expected);
    }

    #[test]
    fn structure_invariants() {
        assert_eq!(Structure::new(0), Err(ModelError::EmptyDomain));
        assert!(matches!(
            s(2).with_relation("E", 2, [vec![0, 2]]),
            Err(ModelError::ElementOutOfRange { .. })
        ));
        assert!(matches!(
            s(2).with_relation("E", 2, [vec![0]]),
            Err(ModelError::TupleArity { .. })
        ));
        assert!(matches!(
            s(2).with_relation("E", 0, []),
            Err(ModelError::ZeroArity(_))
        ));
        assert!(matches!(
            s(2).with_relation("E", 1, []).unwrap().with_constant("E", 0),
            Err(ModelError::DuplicateSymbol(_))
        ));
    }

    #[test]
    fn structure_text_round_trip() {
        let text = "# a triangle\ndomain 3\nrel E/2 : (0,1) (1,0) (1,2)\nrel P/1 :\nconst o = 2\n";
        let st = Structure::parse(text).unwrap();
        assert_eq!(st.domain_size(), 3);
        assert!(st.relation("E").unwrap().contains(&[1, 2]));
        assert!(!st.relation("E").unwrap().contains(&[2, 1]));
        assert!(st.relation("P").unwrap().is_empty());
        assert_eq!(st.constant("o"), Some(2));
        assert_eq!(Structure::parse(&st.to_string()).unwrap(), st);
    }

    #[test]
    fn structure_labels() {
        let text = "domain 3\nlabels center a b\nrel E/2 : (center, a) (center,b)\nconst c = center\n";
        let st = Structure::parse(text).unwrap();
        assert!(st.relation("E").unwrap().contains(&[0, 2]));
        assert_eq!(st.label(1), "a");
        assert_eq!(Structure::parse(&st.to_string()).unwrap(), st);
    }

    #[test]
    fn structure_parse_errors_carry_lines() {
        let err = Structure::parse("domain 2\nrel E/2 : (0,5)\n").unwrap_err();
        assert!(matches!(err, ModelError::Parse { line: 2, .. }));
        assert!(Structure::parse("rel E/2 :").is_err());
        assert!(Structure::parse("domain 0").is_err());
    }

    #[test]
    fn team_set_semantics() {
        let t = team(&["y", "x"], &[&[1, 0], &[1, 0], &[2, 0]]);
        assert_eq!(t.len(), 2);
        assert_eq!(t.vars(), ["x", "y"]);
        assert!(t.contains(&[("x", 0), ("y", 2)].into_iter().collect()));
        assert!(Team::new(["x", "x"]).is_err());
    }
}
