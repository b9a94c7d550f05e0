//! Seeded invariant suites that compare each algorithm against an
//! independent oracle.
//!
//! A suite is a list of cases. Each case derives its randomness from the run
//! seed and its own index, so reports are identical for any `jobs` setting
//! and are listed in case order.

mod closure;
pub mod gen;
mod inclusion;
mod propositional;
mod reductions;
mod solver;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

pub use inclusion::INCLUSION_TEMPLATES;

pub const DEFAULT_SEED: u64 = 0x5eed_7ea5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Closure,
    Inclusion,
    Reductions,
    CliqueExperiment,
    Lemma,
    Theta,
    Circuit,
    Sentences,
    FoFastPath,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Closure,
        Suite::Inclusion,
        Suite::Reductions,
        Suite::CliqueExperiment,
        Suite::Lemma,
        Suite::Theta,
        Suite::Circuit,
        Suite::Sentences,
        Suite::FoFastPath,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Closure => "closure",
            Suite::Inclusion => "inclusion",
            Suite::Reductions => "reductions",
            Suite::CliqueExperiment => "clique-experiment",
            Suite::Lemma => "lemma",
            Suite::Theta => "theta",
            Suite::Circuit => "circuit",
            Suite::Sentences => "sentences",
            Suite::FoFastPath => "fo-fast-path",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Debug, Clone)]
pub struct VerifyOptions {
    pub seed: u64,
    /// Worker threads; `None` uses the global pool.
    pub jobs: Option<usize>,
    /// Overrides the number of random draws per group.
    pub cases: Option<usize>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            seed: DEFAULT_SEED,
            jobs: None,
            cases: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    /// Outside the range the invariant covers, or beyond a search limit.
    Skip,
    /// A disagreement that is recorded rather than failed.
    Discrepancy,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Pass => "pass",
            Outcome::Fail => "fail",
            Outcome::Skip => "skip",
            Outcome::Discrepancy => "discrepancy",
        })
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CaseReport {
    pub index: usize,
    /// Short case label, e.g. the fragment or graph and parameter.
    pub id: String,
    pub outcome: Outcome,
    pub detail: String,
    /// Named counters summed into the suite metrics.
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub tags: BTreeMap<String, u64>,
}

impl CaseReport {
    pub fn new(index: usize, id: impl Into<String>, outcome: Outcome, detail: impl Into<String>) -> Self {
        CaseReport {
            index,
            id: id.into(),
            outcome,
            detail: detail.into(),
            tags: BTreeMap::new(),
        }
    }

    pub fn tag(mut self, name: &str) -> Self {
        *self.tags.entry(name.to_string()).or_default() += 1;
        self
    }
}

impl fmt::Display for CaseReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}\t{}\t{}", self.index, self.outcome, self.id)?;
        if !self.detail.is_empty() {
            write!(f, "\t{}", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub pass: usize,
    pub fail: usize,
    pub skip: usize,
    pub discrepancy: usize,
    pub metrics: BTreeMap<String, u64>,
    pub cases: Vec<CaseReport>,
}

impl SuiteReport {
    fn new(suite: Suite, seed: u64, cases: Vec<CaseReport>) -> Self {
        let count = |o| cases.iter().filter(|c| c.outcome == o).count();
        let mut metrics = BTreeMap::new();
        for c in &cases {
            for (k, v) in &c.tags {
                *metrics.entry(k.clone()).or_default() += v;
            }
        }
        SuiteReport {
            suite,
            seed,
            pass: count(Outcome::Pass),
            fail: count(Outcome::Fail),
            skip: count(Outcome::Skip),
            discrepancy: count(Outcome::Discrepancy),
            metrics,
            cases,
        }
    }

    /// No invariant failed.
    pub fn passed(&self) -> bool {
        self.fail == 0
    }

    pub fn metric(&self, name: &str) -> u64 {
        self.metrics.get(name).copied().unwrap_or(0)
    }

    pub fn cases_with(&self, outcome: Outcome) -> impl Iterator<Item = &CaseReport> {
        self.cases.iter().filter(move |c| c.outcome == outcome)
    }

    pub fn summary(&self) -> String {
        let mut s = format!(
            "{} seed={}: {} cases, {} pass, {} fail, {} skip, {} discrepancy",
            self.suite,
            self.seed,
            self.cases.len(),
            self.pass,
            self.fail,
            self.skip,
            self.discrepancy
        );
        for (k, v) in &self.metrics {
            s.push_str(&format!("\n  {k}: {v}"));
        }
        s
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.cases {
            writeln!(f, "{c}")?;
        }
        writeln!(f, "{}", self.summary())
    }
}

/// Runs `case` on `0..n` in parallel, keeping index order.
pub(crate) fn run_cases<F>(opts: &VerifyOptions, n: usize, case: F) -> Vec<CaseReport>
where
    F: Fn(usize) -> CaseReport + Sync + Send,
{
    let go = || (0..n).into_par_iter().map(&case).collect();
    match opts.jobs {
        Some(j) => rayon::ThreadPoolBuilder::new()
            .num_threads(j.max(1))
            .build()
            .expect("thread pool")
            .install(go),
        None => go(),
    }
}

pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> SuiteReport {
    let cases = match suite {
        Suite::Closure => closure::run(opts),
        Suite::Inclusion => inclusion::run(opts),
        Suite::Reductions => reductions::run(opts),
        Suite::CliqueExperiment => reductions::clique_experiment(opts),
        Suite::Lemma => propositional::lemma(opts),
        Suite::Theta => propositional::theta(opts),
        Suite::Circuit => propositional::circuit(opts),
        Suite::Sentences => solver::sentences(opts),
        Suite::FoFastPath => solver::fo_fast_path(opts),
    };
    SuiteReport::new(suite, opts.seed, cases)
}
