//! Maximal satisfying subteams for inclusion logic.
//!
//! Satisfying subteams of an inclusion-logic formula are closed under
//! union, so each team has a largest one. It is computed bottom-up, with a
//! fixpoint wherever a part of the team can lose rows because another part
//! did.

use std::collections::HashSet;

use super::program::{NodeId, Op, Program};
use crate::model::{Elem, Row};

fn extensions(team: &[Row], col: usize, n: Elem) -> Vec<Row> {
    let mut out: Vec<Row> = team
        .iter()
        .flat_map(|r| {
            (0..n).map(move |a| {
                let mut r = r.clone();
                r[col] = a;
                r
            })
        })
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// `team` sorted and deduplicated; the result is a sorted subset.
pub(crate) fn max_subteam(prog: &Program<'_>, id: NodeId, team: Vec<Row>) -> Vec<Row> {
    let n = prog.domain_size as Elem;
    match &prog.node(id).op {
        Op::Eq(..) | Op::Neq(..) | Op::Rel { .. } => {
            let mut scratch = Vec::new();
            team.into_iter()
                .filter(|r| {
                    scratch.clone_from(r);
                    prog.holds(id, &mut scratch)
                })
                .collect()
        }
        Op::Inc(sub, sup) => {
            let mut cur = team;
            loop {
                let targets: HashSet<Vec<Elem>> = cur
                    .iter()
                    .map(|r| sup.iter().map(|s| s.get(r)).collect())
                    .collect();
                let before = cur.len();
                cur.retain(|r| targets.contains(&sub.iter().map(|s| s.get(r)).collect::<Vec<_>>()));
                if cur.len() == before {
                    return cur;
                }
            }
        }
        Op::Or(l, r) => {
            let mut out = max_subteam(prog, *l, team.clone());
            out.extend(max_subteam(prog, *r, team));
            out.sort_unstable();
            out.dedup();
            out
        }
        Op::And(l, r) => {
            let mut cur = team;
            loop {
                let before = cur.len();
                cur = max_subteam(prog, *r, max_subteam(prog, *l, cur));
                if cur.len() == before {
                    return cur;
                }
            }
        }
        Op::Exists(col, body) => {
            let good: HashSet<Row> = max_subteam(prog, *body, extensions(&team, *col, n))
                .into_iter()
                .collect();
            let mut scratch = Vec::new();
            team.into_iter()
                .filter(|r| {
                    scratch.clone_from(r);
                    (0..n).any(|a| {
                        scratch[*col] = a;
                        good.contains(&scratch)
                    })
                })
                .collect()
        }
        Op::Forall(col, body) => {
            let mut cur = team;
            loop {
                let good: HashSet<Row> = max_subteam(prog, *body, extensions(&cur, *col, n))
                    .into_iter()
                    .collect();
                let before = cur.len();
                let mut scratch = Vec::new();
                cur.retain(|r| {
                    scratch.clone_from(r);
                    (0..n).all(|a| {
                        scratch[*col] = a;
                        good.contains(&scratch)
                    })
                });
                if cur.len() == before {
                    return cur;
                }
            }
        }
        Op::Dep(..) | Op::Indep { .. } => unreachable!("rejected before compilation"),
    }
}
