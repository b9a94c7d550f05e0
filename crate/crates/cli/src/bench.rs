//! Timing tables for the encoded problem families.

use std::time::Instant;

use serde::Serialize;
use teamcheck_core::eval::{EvalConfig, EvalError};
use teamcheck_core::reductions::{graph_brute, reduce_domset, reduce_wsat, wsat_brute, GraphProblem};
use teamcheck_core::verify::gen::{case_rng, gamma_formula, graph};
use teamcheck_core::wt::{wt_solve_with, FastPath, WtError, WtInstance};

/// Steps allowed to one generic-path solve before it is reported as `budget`.
pub const GENERIC_STEPS: u64 = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Family {
    Domset,
    Wsat,
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub n: usize,
    pub k: usize,
    pub path: &'static str,
    pub verdict: String,
    pub micros: u128,
}

pub const HEADER: &str = "n,k,path,verdict,micros";

impl Row {
    pub fn csv(&self) -> String {
        format!("{},{},{},{},{}", self.n, self.k, self.path, self.verdict, self.micros)
    }
}

fn timed(n: usize, k: usize, path: &'static str, run: impl FnOnce() -> String) -> Row {
    let start = Instant::now();
    let verdict = run();
    Row {
        n,
        k,
        path,
        verdict,
        micros: start.elapsed().as_micros(),
    }
}

fn verdict(b: bool) -> String {
    if b { "SAT" } else { "UNSAT" }.to_string()
}

fn solve(instance: &WtInstance, fast: FastPath) -> String {
    let config = match fast {
        FastPath::Auto => EvalConfig::default(),
        FastPath::Off => EvalConfig::default().with_max_steps(GENERIC_STEPS),
    };
    match wt_solve_with(instance, fast, &config) {
        Ok(t) => verdict(t.is_some()),
        Err(WtError::Eval(EvalError::BudgetExceeded | EvalError::TooLarge { .. })) => "budget".into(),
        Err(e) => format!("error: {e}"),
    }
}

/// One instance per `n`, drawn from the seed; every `k` is run on it.
pub fn run(family: Family, ns: impl Iterator<Item = usize>, ks: &[usize], seed: u64) -> Vec<Row> {
    let mut rows = Vec::new();
    for n in ns {
        let mut rng = case_rng(seed, n as u64);
        match family {
            Family::Domset => {
                let g = graph(&mut rng, n, 0.3);
                for &k in ks {
                    let reduced = match reduce_domset(&g, k) {
                        Ok(r) => r,
                        Err(e) => {
                            rows.push(timed(n, k, "fixpoint", || format!("error: {e}")));
                            continue;
                        }
                    };
                    rows.push(timed(n, k, "fixpoint", || solve(&reduced.instance, FastPath::Auto)));
                    rows.push(timed(n, k, "generic", || solve(&reduced.instance, FastPath::Off)));
                    rows.push(timed(n, k, "oracle", || verdict(graph_brute(GraphProblem::Domset, &g, k))));
                }
            }
            Family::Wsat => {
                // n variables, at most three clauses of at most three literals
                let psi = gamma_formula(&mut rng, 2, true, n.max(1) as u32, 3);
                for &k in ks {
                    let reduced = match reduce_wsat(&psi, k) {
                        Ok((r, _)) => r,
                        Err(e) => {
                            rows.push(timed(n, k, "fixpoint", || format!("error: {e}")));
                            continue;
                        }
                    };
                    rows.push(timed(n, k, "fixpoint", || solve(&reduced.instance, FastPath::Auto)));
                    rows.push(timed(n, k, "generic", || solve(&reduced.instance, FastPath::Off)));
                    rows.push(timed(n, k, "oracle", || verdict(wsat_brute(&psi, k))));
                }
            }
        }
    }
    rows
}
