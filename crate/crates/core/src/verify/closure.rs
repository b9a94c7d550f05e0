//! Empty team property, flatness, locality, downward closure and union
//! closure on random structures, formulas and teams.

use super::gen::{case_rng, structure, team, FormulaGen, Logic};
use super::{run_cases, CaseReport, Outcome, VerifyOptions};
use crate::eval::{eval_fo_tarski, eval_with, EvalConfig, EvalError};
use crate::formula::Formula;
use crate::model::{restrict, Structure, Team};

pub(crate) const PER_FRAGMENT: usize = 600;
/// Search budget per evaluation. Nested quantifiers over inclusion atoms
/// can need far more; such cases are skipped and counted.
const STEPS: u64 = 200_000;

fn logic_name(l: Logic) -> &'static str {
    match l {
        Logic::FirstOrder => "fo",
        Logic::Dependence => "dep",
        Logic::Inclusion => "inc",
        Logic::Independence => "indep",
    }
}

pub(crate) fn run(opts: &VerifyOptions) -> Vec<CaseReport> {
    let n = opts.cases.unwrap_or(PER_FRAGMENT) * Logic::ALL.len();
    run_cases(opts, n, |i| case(opts.seed, i))
}

fn limit_hit(e: &EvalError) -> bool {
    matches!(e, EvalError::TooLarge { .. } | EvalError::BudgetExceeded)
}

fn case(seed: u64, index: usize) -> CaseReport {
    let logic = Logic::ALL[index % Logic::ALL.len()];
    let name = logic_name(logic);
    let mut rng = case_rng(seed, index as u64);
    let a = structure(&mut rng, 4);
    let phi = FormulaGen {
        logic,
        free: &["x", "y"],
        max_quantifier_depth: 2,
        max_size: 6,
    }
    .formula(&mut rng);
    let wide = team(&mut rng, &a, &["e", "x", "y"], 4);
    let shown = format!("phi={phi} | team={} | A={}", wide.to_string().replace('\n', " "), a.to_string().replace('\n', " "));
    match check(&a, &phi, &wide, logic) {
        Ok(Checked { failure: None, exhaustive }) => {
            let r = CaseReport::new(index, name, Outcome::Pass, "").tag(&format!("completed_{name}"));
            if exhaustive {
                r.tag(&format!("exhaustive_{name}"))
            } else {
                r
            }
        }
        Ok(Checked { failure: Some(what), .. }) => CaseReport::new(index, name, Outcome::Fail, format!("{what}: {shown}")),
        Err(e) if limit_hit(&e) => CaseReport::new(index, name, Outcome::Skip, format!("{e}: {shown}")).tag("skipped"),
        Err(e) => CaseReport::new(index, name, Outcome::Fail, format!("error {e}: {shown}")),
    }
}

struct Checked {
    failure: Option<String>,
    /// The exhaustive evaluator also finished and agreed.
    exhaustive: bool,
}

fn check(a: &Structure, phi: &Formula, wide: &Team, logic: Logic) -> Result<Checked, EvalError> {
    let default = EvalConfig::default().with_max_steps(STEPS);
    let exhaustive = EvalConfig::exhaustive().with_max_steps(STEPS);
    let fail = |what: &str| {
        Ok(Checked {
            failure: Some(what.to_string()),
            exhaustive: false,
        })
    };

    let empty = Team::new(wide.vars().iter().cloned())?;
    if !eval_with(a, &empty, phi, &default)? || !eval_with(a, &empty, phi, &exhaustive)? {
        return fail("empty team property");
    }

    let result = eval_with(a, wide, phi, &default)?;
    let local = restrict(wide, phi.free_vars())?;
    if eval_with(a, &local, phi, &default)? != result {
        return fail("locality");
    }
    // the exhaustive search reads every column, so this is the
    // shortcut-free form of the same check
    let mut agreed = false;
    match (eval_with(a, wide, phi, &exhaustive), eval_with(a, &local, phi, &exhaustive)) {
        (Ok(w), Ok(l)) => {
            if w != result || l != result {
                return fail("locality (exhaustive)");
            }
            agreed = true;
        }
        (Err(e), _) | (_, Err(e)) if limit_hit(&e) => {}
        (Err(e), _) | (_, Err(e)) => return Err(e),
    }

    let base = restrict(wide, ["x", "y"])?;
    match logic {
        Logic::FirstOrder => {
            for t in [wide, &base] {
                let mut pointwise = true;
                for s in t.assignments() {
                    pointwise &= eval_fo_tarski(a, &s, phi)?;
                }
                if eval_with(a, t, phi, &default)? != pointwise {
                    return fail("flatness");
                }
            }
        }
        Logic::Dependence | Logic::Inclusion => {
            let masks = 1u64 << base.len();
            let mut sat = Vec::with_capacity(masks as usize);
            for m in 0..masks {
                sat.push(eval_with(a, &base.subteam(m), phi, &default)?);
            }
            for m in 0..masks {
                if !sat[m as usize] {
                    continue;
                }
                for m2 in 0..masks {
                    if logic == Logic::Dependence && m2 & !m == 0 && !sat[m2 as usize] {
                        return fail("downward closure");
                    }
                    if logic == Logic::Inclusion && sat[m2 as usize] && !sat[(m | m2) as usize] {
                        return fail("union closure");
                    }
                }
            }
        }
        Logic::Independence => {}
    }
    Ok(Checked {
        failure: None,
        exhaustive: agreed,
    })
}
