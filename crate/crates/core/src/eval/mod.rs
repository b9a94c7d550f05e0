//! Team-semantics model checking.
//!
//! [`eval`] decides `A, T ⊨ φ` under lax semantics for formulas with any mix
//! of dependence, inclusion and independence atoms. [`max_subteam`] and
//! [`eval_inclusion`] are the polynomial route for inclusion logic, and
//! [`eval_fo_tarski`] is classical satisfaction for first-order formulas.

mod inclusion;
mod program;
mod search;
mod tarski;

use thiserror::Error;

use crate::formula::{classify, Formula, Fragment};
use crate::model::{ModelError, Structure, Team};

pub use tarski::eval_fo_tarski;

use program::Program;

/// Largest team on which a split is enumerated by subset masks.
pub const MAX_MASK_ROWS: usize = 20;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EvalError {
    #[error("free variable `{0}` is not in the team domain")]
    FreeVariable(String),
    #[error("unknown relation `{0}`")]
    UnknownRelation(String),
    #[error("unknown constant `{0}`")]
    UnknownConstant(String),
    #[error("relation `{relation}` has arity {expected}, used with {found} arguments")]
    Arity {
        relation: String,
        expected: usize,
        found: usize,
    },
    #[error("inclusion atom sides have different lengths {0} and {1}")]
    InclusionArity(usize, usize),
    #[error("dependency atom in a first-order formula")]
    NotFirstOrder,
    #[error("dependence or independence atom in an inclusion-logic formula")]
    NotInclusion,
    #[error("strict semantics is only available without inclusion and independence atoms")]
    StrictUnsupported,
    #[error("formula has free variables {0:?}")]
    NotSentence(Vec<String>),
    #[error("team domain {found:?} differs from the evaluator's {expected:?}")]
    TeamDomain { expected: Vec<String>, found: Vec<String> },
    #[error("step budget exceeded")]
    BudgetExceeded,
    #[error("split of a {rows}-row team exceeds the {MAX_MASK_ROWS}-row enumeration limit")]
    TooLarge { rows: usize },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Search options for [`eval_with`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalConfig {
    /// Use flatness, locality and downward closure to prune the search.
    pub shortcuts: bool,
    /// Singleton supplements and disjoint splits. Only sound without
    /// inclusion and independence atoms.
    pub strict: bool,
    /// Memo entries kept per call; past this the search runs uncached.
    pub max_cache: usize,
    /// Bound on recursive satisfaction checks.
    pub max_steps: Option<u64>,
}

impl Default for EvalConfig {
    fn default() -> Self {
        EvalConfig {
            shortcuts: true,
            strict: false,
            max_cache: 1 << 20,
            max_steps: None,
        }
    }
}

impl EvalConfig {
    /// The semantic clauses taken literally: every cover, every supplement.
    pub fn exhaustive() -> Self {
        EvalConfig {
            shortcuts: false,
            ..Self::default()
        }
    }

    pub fn strict() -> Self {
        EvalConfig {
            strict: true,
            ..Self::default()
        }
    }

    pub fn with_max_steps(mut self, steps: u64) -> Self {
        self.max_steps = Some(steps);
        self
    }

    pub fn with_max_cache(mut self, entries: usize) -> Self {
        self.max_cache = entries;
        self
    }
}

/// A formula compiled for teams over a fixed domain, reusable across teams.
pub struct Evaluator<'s> {
    program: Program<'s>,
    vars: Vec<String>,
    config: EvalConfig,
    structure: &'s Structure,
}

impl<'s> Evaluator<'s> {
    pub fn new(
        structure: &'s Structure,
        vars: &[String],
        formula: &Formula,
        config: EvalConfig,
    ) -> Result<Self, EvalError> {
        if config.strict && !formula.is_downward_closed() {
            return Err(EvalError::StrictUnsupported);
        }
        let mut vars = vars.to_vec();
        vars.sort();
        vars.dedup();
        Ok(Evaluator {
            program: Program::compile(structure, &vars, formula)?,
            vars,
            config,
            structure,
        })
    }

    fn check(&self, team: &Team) -> Result<(), EvalError> {
        if team.vars() != self.vars.as_slice() {
            return Err(EvalError::TeamDomain {
                expected: self.vars.clone(),
                found: team.vars().to_vec(),
            });
        }
        self.structure.check_team(team)?;
        Ok(())
    }

    pub fn eval(&self, team: &Team) -> Result<bool, EvalError> {
        self.check(team)?;
        let rows = self.program.load(team);
        search::Search::new(&self.program, &self.config).sat(self.program.root, rows)
    }
}

pub fn eval(structure: &Structure, team: &Team, formula: &Formula) -> Result<bool, EvalError> {
    eval_with(structure, team, formula, &EvalConfig::default())
}

pub fn eval_with(
    structure: &Structure,
    team: &Team,
    formula: &Formula,
    config: &EvalConfig,
) -> Result<bool, EvalError> {
    Evaluator::new(structure, team.vars(), formula, config.clone())?.eval(team)
}

/// The largest subteam of `team` satisfying an inclusion-logic formula.
pub fn max_subteam(structure: &Structure, team: &Team, formula: &Formula) -> Result<Team, EvalError> {
    let atoms = formula.atoms();
    if atoms.dep || atoms.indep {
        return Err(EvalError::NotInclusion);
    }
    structure.check_team(team)?;
    let program = Program::compile(structure, team.vars(), formula)?;
    let rows = inclusion::max_subteam(&program, program.root, program.load(team));
    Ok(program.unload(team, &rows))
}

pub fn eval_inclusion(structure: &Structure, team: &Team, formula: &Formula) -> Result<bool, EvalError> {
    Ok(max_subteam(structure, team, formula)?.len() == team.len())
}

/// Truth of a sentence, evaluated on the team `{∅}`.
pub fn check_sentence(structure: &Structure, formula: &Formula) -> Result<bool, EvalError> {
    check_sentence_with(structure, formula, &EvalConfig::default())
}

pub fn check_sentence_with(
    structure: &Structure,
    formula: &Formula,
    config: &EvalConfig,
) -> Result<bool, EvalError> {
    let free = formula.free_vars();
    if !free.is_empty() {
        return Err(EvalError::NotSentence(free.into_iter().collect()));
    }
    let unit = Team::unit();
    if classify(formula).fragment == Fragment::Inclusion {
        eval_inclusion(structure, &unit, formula)
    } else {
        eval_with(structure, &unit, formula, config)
    }
}
