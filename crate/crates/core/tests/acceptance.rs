//! Acceptance criteria 1 to 10, one PASS/FAIL line each.
//!
//! Runs without the libtest harness so the lines reach the terminal. The
//! process exits nonzero when a criterion fails, except criterion 7, whose
//! failure is expected and checked against its known cause instead.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use teamcheck_core::verify::{run_suite, CaseReport, Outcome, Suite, SuiteReport, VerifyOptions};

struct Criterion {
    number: usize,
    name: &'static str,
    pass: bool,
    detail: String,
    notes: Vec<String>,
}

fn line(c: &Criterion) {
    let verdict = if c.pass { "PASS" } else { "FAIL" };
    println!("criterion {} {}: {verdict} ({})", c.number, c.name, c.detail);
    for n in &c.notes {
        println!("  {n}");
    }
}

fn count<'a>(cases: impl Iterator<Item = &'a CaseReport>, outcome: Outcome) -> usize {
    cases.filter(|c| c.outcome == outcome).count()
}

fn tagged<'a>(cases: impl Iterator<Item = &'a CaseReport>, tag: &str) -> u64 {
    cases.map(|c| c.tags.get(tag).copied().unwrap_or(0)).sum()
}

fn first_failure(r: &SuiteReport) -> String {
    r.cases_with(Outcome::Fail)
        .next()
        .map(|c| format!("; first failure: {c}"))
        .unwrap_or_default()
}

fn closure(r: &SuiteReport) -> Criterion {
    let per: Vec<String> = ["fo", "dep", "inc", "indep"]
        .iter()
        .map(|f| format!("{f} {}", r.metric(&format!("completed_{f}"))))
        .collect();
    let enough = ["fo", "dep", "inc", "indep"]
        .iter()
        .all(|f| r.metric(&format!("completed_{f}")) >= 500);
    Criterion {
        number: 1,
        name: "closure",
        pass: r.fail == 0 && enough,
        detail: format!(
            "completed per fragment: {}; {} skipped at the step budget; {} violations{}",
            per.join(", "),
            r.skip,
            r.fail,
            first_failure(r)
        ),
        notes: Vec::new(),
    }
}

fn inclusion(r: &SuiteReport) -> Criterion {
    let teams = r.metric("teams");
    Criterion {
        number: 2,
        name: "inclusion fixed point",
        pass: r.fail == 0 && teams >= 2000,
        detail: format!(
            "{teams} template/team cases, {} maximal subteam checks, {} disagreements{}",
            r.metric("subteam_unions"),
            r.fail,
            first_failure(r)
        ),
        notes: Vec::new(),
    }
}

fn graph_problem(number: usize, name: &'static str, prefix: &str, r: &SuiteReport) -> Criterion {
    let cases: Vec<&CaseReport> = r.cases.iter().filter(|c| c.id.starts_with(prefix)).collect();
    let fail = count(cases.iter().copied(), Outcome::Fail);
    let yes = r.metric(&format!("{prefix}_yes"));
    let no = r.metric(&format!("{prefix}_no"));
    Criterion {
        number,
        name,
        pass: fail == 0 && cases.len() == 1024 * 3,
        detail: format!("{} cases ({yes} yes, {no} no), {fail} disagreements", cases.len()),
        notes: Vec::new(),
    }
}

fn clique(forward: &SuiteReport, experiment: &SuiteReport) -> Criterion {
    let cases: Vec<&CaseReport> = forward.cases.iter().filter(|c| c.id.starts_with("clique")).collect();
    let forward_fail = count(cases.iter().copied(), Outcome::Fail) + experiment.fail;
    let forward_checked = count(cases.iter().copied(), Outcome::Pass);
    let discrepancies: Vec<&CaseReport> = experiment.cases_with(Outcome::Discrepancy).collect();
    let confirmed = experiment.metric("c5_k3_confirmed") > 0;
    let report = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("clique_discrepancies.json");
    let written = serde_json::to_string_pretty(&discrepancies)
        .map_err(|e| e.to_string())
        .and_then(|body| fs::write(&report, body).map_err(|e| e.to_string()));
    let where_ = match written {
        Ok(()) => report.display().to_string(),
        Err(e) => format!("not written: {e}"),
    };
    Criterion {
        number: 5,
        name: "clique reduction",
        pass: forward_fail == 0,
        detail: format!(
            "forward direction {forward_checked} (graph, k) cases with a clique, {forward_fail} failures; \
             experiment {} discrepancies, C5 k=3 {}; report {where_}",
            discrepancies.len(),
            if confirmed { "confirmed" } else { "refuted" }
        ),
        notes: Vec::new(),
    }
}

fn agreement(number: usize, name: &'static str, r: &SuiteReport, unit: &str, at_least: usize) -> Criterion {
    Criterion {
        number,
        name,
        pass: r.fail == 0 && r.cases.len() >= at_least,
        detail: format!(
            "{} cases, {} {unit}, {} disagreements{}",
            r.cases.len(),
            r.metric(unit),
            r.fail,
            first_failure(r)
        ),
        notes: Vec::new(),
    }
}

/// The literal criterion and, separately, whether its failures are all of
/// the explained kind.
fn theta(r: &SuiteReport) -> (Criterion, bool) {
    let negative: Vec<&CaseReport> = r.cases.iter().filter(|c| c.id.starts_with("neg")).collect();
    let positive: Vec<&CaseReport> = r.cases.iter().filter(|c| c.id.starts_with("pos")).collect();
    let pairs = tagged(negative.iter().copied(), "pairs");
    let wrong = tagged(negative.iter().copied(), "disagreements");
    let outside = tagged(negative.iter().copied(), "disagreements_outside_i");
    let typed_ok = tagged(negative.iter().copied(), "typed_agreements");
    let typed_wrong = tagged(negative.iter().copied(), "typed_disagreements");
    let failed_cases = count(negative.iter().copied(), Outcome::Fail);
    let unexplained_cases = negative
        .iter()
        .chain(&positive)
        .filter(|c| c.outcome == Outcome::Fail && !c.tags.contains_key("disagreements"))
        .count();
    let positive_wrong = tagged(positive.iter().copied(), "disagreements");
    let explained = wrong == outside && typed_wrong == 0 && typed_ok == pairs && unexplained_cases == 0 && positive_wrong == 0;
    let c = Criterion {
        number: 7,
        name: "theta, negative",
        pass: wrong == 0 && !negative.is_empty(),
        detail: format!(
            "{} formulas, {pairs} (psi, k) pairs, {wrong} disagreements in {failed_cases} formulas",
            negative.len()
        ),
        notes: vec![
            format!(
                "analysis: {outside} of {wrong} disagreements pick S with an element outside I; \
                 with S restricted to I, {typed_ok} of {pairs} pairs agree"
            ),
            format!(
                "positive theta, t=2: {} formulas, {} pairs, {positive_wrong} disagreements",
                positive.len(),
                tagged(positive.iter().copied(), "pairs"),
            ),
        ],
    };
    (c, explained)
}

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let start = Instant::now();
    let run = |s: Suite| {
        let t = Instant::now();
        let r = run_suite(s, &opts);
        eprintln!("{s}: {:.1}s", t.elapsed().as_secs_f64());
        r
    };
    println!("acceptance seed={}", opts.seed);

    let reductions = run(Suite::Reductions);
    let experiment = run(Suite::CliqueExperiment);
    let sentences = run(Suite::Sentences);
    let mut criteria = vec![
        closure(&run(Suite::Closure)),
        inclusion(&run(Suite::Inclusion)),
        graph_problem(3, "dominating set reduction", "domset", &reductions),
        graph_problem(4, "independent set reduction", "indset", &reductions),
        clique(&reductions, &experiment),
        agreement(6, "lemma, t=2 d=1", &run(Suite::Lemma), "pairs", 200),
    ];
    let (theta_line, explained) = theta(&run(Suite::Theta));
    criteria.push(theta_line);
    criteria.push(agreement(8, "circuit proof trees", &run(Suite::Circuit), "input_sets", 500));
    criteria.push(Criterion {
        number: 9,
        name: "sentences",
        pass: sentences.fail == 0 && sentences.cases.len() >= 400,
        detail: format!(
            "{} sentences over 4 fragments, {} disagreements{}",
            sentences.cases.len(),
            sentences.fail,
            first_failure(&sentences)
        ),
        notes: Vec::new(),
    });
    criteria.push(agreement(10, "first-order fast path", &run(Suite::FoFastPath), "k_values", 200));
    criteria.sort_by_key(|c| c.number);

    for c in &criteria {
        line(c);
    }
    println!("total {:.1}s", start.elapsed().as_secs_f64());

    let unexpected: Vec<usize> = criteria.iter().filter(|c| !c.pass && c.number != 7).map(|c| c.number).collect();
    if !unexpected.is_empty() {
        println!("failed criteria: {unexpected:?}");
        return ExitCode::FAILURE;
    }
    if !explained {
        println!("criterion 7 fails for a reason other than S outside I");
        return ExitCode::FAILURE;
    }
    ExitCode::SUCCESS
}
