//! Maximal subteams against the generic evaluator, on every team of at
//! most four rows over `{x, y}`.

use std::collections::HashMap;

use super::{run_cases, CaseReport, Outcome, VerifyOptions};
use crate::eval::{eval, eval_inclusion, max_subteam};
use crate::formula::parse_in;
use crate::model::{Elem, Row, Rows, Structure, Team};

/// Inclusion-logic formulas over `P/1`, `R/2` and the constant `c`, with
/// free variables among `x, y` and quantifier depth at most two.
pub const INCLUSION_TEMPLATES: [&str; 12] = [
    "inc(x;y)",
    "inc(x,y;y,x)",
    "P(x) | inc(x;y)",
    "(inc(x;y) & P(y)) | (inc(y;x) & !P(x))",
    "(inc(x;y) | inc(y;x)) & x != c",
    "inc(x;c) | R(x,y)",
    "exists u (R(x,u) & inc(u;y))",
    "forall u (!R(x,u) | inc(u;x))",
    "forall u (inc(u;y) | u = x)",
    "forall u exists v (inc(v;x) & (R(u,v) | u = v))",
    "exists u forall v (!R(u,v) | inc(v;y))",
    "exists u forall v (inc(u,x;x,y) & (!R(v,u) | P(v)))",
];

const MAX_ROWS: usize = 4;

/// Two structures per domain size: a sparse one and a dense one.
fn structures() -> Vec<Structure> {
    let mut out = Vec::new();
    for n in 1..=3usize {
        let elems = 0..n as Elem;
        let succ: Vec<Vec<Elem>> = elems.clone().map(|a| vec![a, (a + 1) % n as Elem]).collect();
        let le: Vec<Vec<Elem>> = elems.clone().flat_map(|a| (a..n as Elem).map(move |b| vec![a, b])).collect();
        let sparse = Structure::new(n)
            .and_then(|s| s.with_relation("P", 1, vec![vec![0]]))
            .and_then(|s| s.with_relation("R", 2, succ))
            .and_then(|s| s.with_constant("c", 0));
        let dense = Structure::new(n)
            .and_then(|s| s.with_relation("P", 1, elems.clone().filter(|a| a % 2 == 1).map(|a| vec![a])))
            .and_then(|s| s.with_relation("R", 2, le))
            .and_then(|s| s.with_constant("c", n as Elem - 1));
        out.push(sparse.expect("fixed structure"));
        out.push(dense.expect("fixed structure"));
    }
    out
}

/// Row masks of size at most `MAX_ROWS` over `rows` assignments.
fn small_masks(rows: usize) -> Vec<u32> {
    (0u32..1 << rows).filter(|m| m.count_ones() as usize <= MAX_ROWS).collect()
}

pub(crate) fn run(opts: &VerifyOptions) -> Vec<CaseReport> {
    let structures = structures();
    let groups: Vec<(usize, usize)> = (0..INCLUSION_TEMPLATES.len())
        .flat_map(|t| (0..structures.len()).map(move |s| (t, s)))
        .collect();
    run_cases(opts, groups.len(), |g| {
        let (t, s) = groups[g];
        group(g, t, &structures[s])
    })
}

fn team_of(rows: &[Row], mask: u32) -> Team {
    Team::from_rows(
        ["x", "y"],
        rows.iter()
            .enumerate()
            .filter(|(i, _)| mask >> i & 1 == 1)
            .map(|(_, r)| r.clone()),
    )
    .expect("rows over x, y")
}

/// One template on one structure, over every team of at most four rows.
fn group(index: usize, template: usize, a: &Structure) -> CaseReport {
    let text = INCLUSION_TEMPLATES[template];
    let id = format!("t{template} n={}", a.domain_size());
    let phi = match parse_in(text, a.vocabulary()) {
        Ok(f) => f,
        Err(e) => return CaseReport::new(index, id, Outcome::Fail, format!("template `{text}`: {e}")),
    };
    let rows: Vec<Row> = Rows::new(a.domain_size(), 2).collect();
    let masks = small_masks(rows.len());
    let mut sat: HashMap<u32, bool> = HashMap::with_capacity(masks.len());
    let mut report = CaseReport::new(index, id.clone(), Outcome::Pass, "");
    for &m in &masks {
        let t = team_of(&rows, m);
        let (generic, fixpoint) = match (eval(a, &t, &phi), eval_inclusion(a, &t, &phi)) {
            (Ok(g), Ok(f)) => (g, f),
            (Err(e), _) | (_, Err(e)) => {
                return CaseReport::new(index, id, Outcome::Fail, format!("`{text}` on {t}: {e}"));
            }
        };
        if generic != fixpoint {
            return CaseReport::new(
                index,
                id,
                Outcome::Fail,
                format!("`{text}` on {t}: eval {generic}, eval_inclusion {fixpoint}"),
            );
        }
        sat.insert(m, generic);
        report = report.tag("teams");
    }
    // the union of satisfying subteams, read off the table above
    for &m in &masks {
        let mut union = 0u32;
        let mut sub = m;
        loop {
            if sat[&sub] {
                union |= sub;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & m;
        }
        let t = team_of(&rows, m);
        let top = match max_subteam(a, &t, &phi) {
            Ok(top) => top,
            Err(e) => return CaseReport::new(index, id, Outcome::Fail, format!("`{text}` on {t}: {e}")),
        };
        if top != team_of(&rows, union) {
            return CaseReport::new(
                index,
                id,
                Outcome::Fail,
                format!("`{text}` on {t}: max_subteam {top}, union {}", team_of(&rows, union)),
            );
        }
        report = report.tag("subteam_unions");
    }
    report.detail = format!("`{text}`: {} teams", masks.len());
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn templates_are_inclusion_formulas_of_depth_two() {
        let a = &structures()[0];
        for text in INCLUSION_TEMPLATES {
            let f = parse_in(text, a.vocabulary()).unwrap();
            let report = crate::formula::classify(&f);
            assert_eq!(report.fragment, crate::formula::Fragment::Inclusion, "{text}");
            assert!(f.quantifier_depth() <= 2, "{text}");
            assert!(f.free_vars().iter().all(|v| v == "x" || v == "y"), "{text}");
        }
    }

    #[test]
    fn grid_size() {
        let teams: usize = structures().iter().map(|a| small_masks(a.domain_size().pow(2)).len()).sum();
        // 2 + 16 + 256 teams per structure pair
        assert_eq!(teams, 2 * (2 + 16 + 256));
    }
}
