use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;
use teamcheck_core::eval::{eval_inclusion, eval_with, max_subteam, EvalConfig, EvalError};
use teamcheck_core::formula::{parse_in, Formula};
use teamcheck_core::model::{duplicate, rel, restrict, supplement, Elem, Row, Structure, Team};
use teamcheck_core::reductions::{encode_clique, encode_domset, encode_indset};
use teamcheck_core::verify::gen::{case_rng, graph, structure, team, FormulaGen, Logic};
use teamcheck_core::wt::{wt_solve_with, FastPath, WtError, WtInstance};

fn logic() -> impl Strategy<Value = Logic> {
    prop::sample::select(Logic::ALL.to_vec())
}

/// A structure and a team over `{x, y}`, drawn from one seed.
fn setting(seed: u64) -> (Structure, Team) {
    let mut rng = case_rng(seed, 0);
    let a = structure(&mut rng, 4);
    let t = team(&mut rng, &a, &["x", "y"], 4);
    (a, t)
}

fn formula(seed: u64, logic: Logic, free: &[&str]) -> Formula {
    FormulaGen {
        logic,
        free,
        max_quantifier_depth: 2,
        max_size: 5,
    }
    .formula(&mut case_rng(seed, 1))
}

/// Nested quantifiers over team atoms can make the generic search
/// exponential; cases past this budget are discarded.
fn bounded() -> EvalConfig {
    EvalConfig::default().with_max_steps(200_000)
}

fn within_budget<T>(r: Result<T, WtError>) -> Option<T> {
    match r {
        Err(WtError::Eval(EvalError::BudgetExceeded | EvalError::TooLarge { .. })) => None,
        r => Some(r.unwrap()),
    }
}

fn holds(a: &Structure, t: &Team, f: &Formula) -> Option<bool> {
    within_budget(eval_with(a, t, f, &bounded()).map_err(WtError::from))
}

fn solve(a: &Structure, f: &Formula, k: usize) -> Option<Option<Team>> {
    let inst = WtInstance { structure: a.clone(), formula: f.clone(), k };
    within_budget(wt_solve_with(&inst, FastPath::Auto, &bounded()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn duplicate_is_idempotent(seed in any::<u64>(), var in prop::sample::select(vec!["x", "z"])) {
        let (a, t) = setting(seed);
        let once = duplicate(&a, &t, var);
        prop_assert_eq!(duplicate(&a, &once, var), once);
    }

    #[test]
    fn supplements_lie_inside_the_duplicate(seed in any::<u64>(), picks in prop::collection::vec(any::<u8>(), 4)) {
        let (a, t) = setting(seed);
        let n = a.domain_size() as Elem;
        let f: BTreeMap<Row, BTreeSet<Elem>> = t
            .rows()
            .iter()
            .zip(picks.iter().cycle())
            .map(|(r, &p)| {
                let set: BTreeSet<Elem> = (0..n).filter(|a| p >> a & 1 == 1).collect();
                let set = if set.is_empty() { BTreeSet::from([0]) } else { set };
                (r.clone(), set)
            })
            .collect();
        let s = supplement(&a, &t, "z", &f).unwrap();
        prop_assert!(s.is_subteam_of(&duplicate(&a, &t, "z")));
    }

    #[test]
    fn restricting_a_duplicate_gives_the_team_back(seed in any::<u64>()) {
        let (a, t) = setting(seed);
        prop_assert_eq!(restrict(&duplicate(&a, &t, "z"), t.vars()).unwrap(), t);
    }

    #[test]
    fn rel_is_one_tuple_per_row(seed in any::<u64>()) {
        let (_, t) = setting(seed);
        prop_assert_eq!(rel(&t, &["y", "x"]).unwrap().len(), t.len());
    }

    #[test]
    fn render_then_parse_is_identity(seed in any::<u64>(), l in logic()) {
        let (a, _) = setting(seed);
        let f = formula(seed, l, &["x", "y"]);
        let text = f.to_string();
        prop_assert_eq!(parse_in(&text, a.vocabulary()).unwrap(), f, "{}", text);
    }

    #[test]
    fn quantifiers_bind_their_variable(seed in any::<u64>(), l in logic()) {
        let f = formula(seed, l, &["x", "y"]);
        let mut want = f.free_vars();
        want.remove("x");
        prop_assert_eq!(Formula::exists("x", f.clone()).free_vars(), want.clone());
        prop_assert_eq!(Formula::forall("x", f).free_vars(), want);
    }

    #[test]
    fn the_empty_team_satisfies_everything(seed in any::<u64>(), l in logic()) {
        let (a, _) = setting(seed);
        let f = formula(seed, l, &["x", "y"]);
        let verdict = holds(&a, &Team::new(["x", "y"]).unwrap(), &f);
        prop_assume!(verdict.is_some());
        prop_assert_eq!(verdict, Some(true));
    }

    #[test]
    fn maximal_subteams_satisfy_and_are_subteams(seed in any::<u64>()) {
        let (a, t) = setting(seed);
        let f = formula(seed, Logic::Inclusion, &["x", "y"]);
        let m = max_subteam(&a, &t, &f).unwrap();
        prop_assert!(m.is_subteam_of(&t));
        prop_assert!(eval_inclusion(&a, &m, &f).unwrap());
        let generic = holds(&a, &m, &f);
        prop_assert!(generic != Some(false), "{} on {}", f, m);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn witnesses_have_k_rows_and_satisfy(seed in any::<u64>(), l in logic(), k in 0usize..4) {
        let mut rng = case_rng(seed, 2);
        let a = structure(&mut rng, 3);
        let f = formula(seed, l, &["x"]);
        let found = solve(&a, &f, k);
        prop_assume!(found.is_some());
        if let Some(Some(t)) = found {
            let vars: Vec<String> = f.free_vars().into_iter().collect();
            prop_assert_eq!(t.len(), k);
            prop_assert_eq!(t.vars(), vars.as_slice());
            prop_assert!(holds(&a, &t, &f) != Some(false), "{} on {}", f, t);
        }
    }

    #[test]
    fn dependence_teams_shrink(seed in any::<u64>()) {
        let mut rng = case_rng(seed, 2);
        let a = structure(&mut rng, 3);
        let f = formula(seed, Logic::Dependence, &["x", "y"]);
        let sizes = a.domain_size().pow(f.free_vars().len() as u32);
        let verdicts: Option<Vec<bool>> = (0..=sizes.min(5)).map(|k| solve(&a, &f, k).map(|t| t.is_some())).collect();
        prop_assume!(verdicts.is_some());
        let verdicts = verdicts.unwrap();
        if let Some(largest) = verdicts.iter().rposition(|&v| v) {
            prop_assert!(verdicts[..=largest].iter().all(|&v| v), "{}: {:?}", f, verdicts);
        }
    }

    #[test]
    fn encoded_parameters_depend_on_k_alone(seed in any::<u64>(), n in 1usize..7, k in 0usize..5) {
        let g = graph(&mut case_rng(seed, 3), n, 0.5);
        prop_assert_eq!(encode_clique(&g, k).unwrap().k, k * k - k);
        prop_assert_eq!(encode_domset(&g, k).unwrap().k, k);
        prop_assert_eq!(encode_indset(&g, k).unwrap().k, k);
    }
}
