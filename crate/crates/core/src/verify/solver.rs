//! The solver's fast paths against generic candidate-team search.

use super::gen::{case_rng, structure, FormulaGen, Logic};
use super::{run_cases, CaseReport, Outcome, VerifyOptions};
use crate::eval::{check_sentence, eval, eval_with, EvalConfig};
use crate::formula::Formula;
use crate::model::{Structure, Team};
use crate::wt::{wt_solve, wt_solve_fo, wt_solve_sentence, wt_solve_with, FastPath, WtInstance};

pub(crate) const SENTENCES: usize = 100;
pub(crate) const FO_FORMULAS: usize = 200;

const SENTENCE_STREAM: u64 = 4 << 32;
const FO_STREAM: u64 = 5 << 32;

fn generic(a: &Structure, phi: &Formula, k: usize) -> Result<Option<Team>, String> {
    let instance = WtInstance {
        structure: a.clone(),
        formula: phi.clone(),
        k,
    };
    wt_solve_with(&instance, FastPath::Off, &EvalConfig::default()).map_err(|e| e.to_string())
}

/// Sentences have only the teams `∅` and `{∅}`.
pub(crate) fn sentences(opts: &VerifyOptions) -> Vec<CaseReport> {
    let per = opts.cases.unwrap_or(SENTENCES);
    run_cases(opts, per * Logic::ALL.len(), |i| {
        let logic = Logic::ALL[i / per];
        let mut rng = case_rng(opts.seed, SENTENCE_STREAM + i as u64);
        let a = structure(&mut rng, 4);
        let phi = FormulaGen {
            logic,
            free: &[],
            max_quantifier_depth: 2,
            max_size: 6,
        }
        .formula(&mut rng);
        let id = format!("{} {phi}", logic.fragment());
        match sentence_case(&a, &phi) {
            Ok(None) => CaseReport::new(i, id, Outcome::Pass, ""),
            Ok(Some(what)) => CaseReport::new(i, id, Outcome::Fail, format!("{what} on {}", a.to_string().replace('\n', " "))),
            Err(e) => CaseReport::new(i, id, Outcome::Fail, e),
        }
    })
}

fn sentence_case(a: &Structure, phi: &Formula) -> Result<Option<String>, String> {
    let e = |e: &dyn std::fmt::Display| e.to_string();
    let truth = check_sentence(a, phi).map_err(|x| e(&x))?;
    if eval_with(a, &Team::unit(), phi, &EvalConfig::default()).map_err(|x| e(&x))? != truth {
        return Ok(Some("check_sentence disagrees with eval on {∅}".into()));
    }
    for k in 0..=3 {
        let fast = wt_solve_sentence(a, phi, k).map_err(|x| e(&x))?;
        let want = match k {
            0 => true,
            1 => truth,
            _ => false,
        };
        if fast != want {
            return Ok(Some(format!("k={k}: wt_solve_sentence {fast}, expected {want}")));
        }
        if generic(a, phi, k)?.is_some() != want {
            return Ok(Some(format!("k={k}: generic search disagrees")));
        }
    }
    Ok(None)
}

/// Counting satisfying assignments against generic search, for every k up
/// to `n²`.
pub(crate) fn fo_fast_path(opts: &VerifyOptions) -> Vec<CaseReport> {
    let n = opts.cases.unwrap_or(FO_FORMULAS);
    run_cases(opts, n, |i| {
        let mut rng = case_rng(opts.seed, FO_STREAM + i as u64);
        let a = structure(&mut rng, 5);
        let phi = FormulaGen {
            logic: Logic::FirstOrder,
            free: &["x", "y"],
            max_quantifier_depth: 2,
            max_size: 6,
        }
        .formula(&mut rng);
        let id = format!("n={} {phi}", a.domain_size());
        match fo_case(&a, &phi) {
            Ok((None, ks)) => {
                let mut r = CaseReport::new(i, id, Outcome::Pass, "");
                r.tags.insert("k_values".into(), ks);
                r
            }
            Ok((Some(what), _)) => {
                CaseReport::new(i, id, Outcome::Fail, format!("{what} on {}", a.to_string().replace('\n', " ")))
            }
            Err(e) => CaseReport::new(i, id, Outcome::Fail, e),
        }
    })
}

fn fo_case(a: &Structure, phi: &Formula) -> Result<(Option<String>, u64), String> {
    let n = a.domain_size();
    let vars: Vec<String> = phi.free_vars().into_iter().collect();
    let mut checked = 0;
    for k in 0..=n * n {
        let counted = wt_solve_fo(a, phi, k).map_err(|e| e.to_string())?;
        let searched = generic(a, phi, k)?;
        if counted != searched.is_some() {
            return Ok((Some(format!("k={k}: counting {counted}, search {}", searched.is_some())), checked));
        }
        let instance = WtInstance {
            structure: a.clone(),
            formula: phi.clone(),
            k,
        };
        let auto = wt_solve(&instance).map_err(|e| e.to_string())?;
        if auto.is_some() != counted {
            return Ok((Some(format!("k={k}: fast path disagrees with counting")), checked));
        }
        for t in auto.iter().chain(&searched) {
            if t.len() != k || t.vars() != vars.as_slice() || !eval(a, t, phi).map_err(|e| e.to_string())? {
                return Ok((Some(format!("k={k}: invalid witness {t}")), checked));
            }
        }
        checked += 1;
    }
    Ok((None, checked))
}
