//! Exhaustive search over covers and supplementing functions.

use std::collections::HashMap;

use super::program::{NodeId, Op, Program};
use super::{EvalConfig, EvalError, MAX_MASK_ROWS};
use crate::model::{Elem, Row};

pub(crate) struct Search<'p, 's> {
    prog: &'p Program<'s>,
    cfg: &'p EvalConfig,
    memo: HashMap<(NodeId, Vec<Row>), bool>,
    steps: u64,
}

fn canonical(mut rows: Vec<Row>) -> Vec<Row> {
    rows.sort_unstable();
    rows.dedup();
    rows
}

fn select(team: &[Row], mask: u64) -> Vec<Row> {
    team.iter()
        .enumerate()
        .filter(|(i, _)| mask >> i & 1 == 1)
        .map(|(_, r)| r.clone())
        .collect()
}

/// Nonempty subsets of `0..n` as bitmasks, smallest first.
fn nonempty_masks(n: usize) -> Vec<u64> {
    let mut masks: Vec<u64> = (1..1u64 << n).collect();
    masks.sort_by_key(|m| (m.count_ones(), *m));
    masks
}

impl<'p, 's> Search<'p, 's> {
    pub(crate) fn new(prog: &'p Program<'s>, cfg: &'p EvalConfig) -> Self {
        Search {
            prog,
            cfg,
            memo: HashMap::new(),
            steps: 0,
        }
    }

    fn tick(&mut self) -> Result<(), EvalError> {
        self.steps += 1;
        match self.cfg.max_steps {
            Some(max) if self.steps > max => Err(EvalError::BudgetExceeded),
            _ => Ok(()),
        }
    }

    fn pointwise(&self, id: NodeId, team: &[Row]) -> bool {
        let mut scratch = Vec::new();
        team.iter().all(|r| {
            scratch.clone_from(r);
            self.prog.holds(id, &mut scratch)
        })
    }

    /// Zero the columns a node does not read.
    fn project(&self, id: NodeId, team: Vec<Row>) -> Vec<Row> {
        let free = &self.prog.node(id).free_cols;
        let mut keep = vec![false; self.prog.width];
        for &c in free {
            keep[c] = true;
        }
        if keep.iter().all(|&k| k) {
            return team;
        }
        canonical(
            team.into_iter()
                .map(|mut r| {
                    for (v, &k) in r.iter_mut().zip(&keep) {
                        if !k {
                            *v = 0;
                        }
                    }
                    r
                })
                .collect(),
        )
    }

    /// `team` must be sorted and free of duplicates.
    pub(crate) fn sat(&mut self, id: NodeId, team: Vec<Row>) -> Result<bool, EvalError> {
        self.tick()?;
        let node = self.prog.node(id);
        let team = if self.cfg.shortcuts {
            if team.is_empty() {
                return Ok(true);
            }
            if node.flat {
                return Ok(self.pointwise(id, &team));
            }
            self.project(id, team)
        } else {
            team
        };
        if matches!(
            node.op,
            Op::Eq(..) | Op::Neq(..) | Op::Rel { .. } | Op::Dep(..) | Op::Inc(..) | Op::Indep { .. }
        ) {
            return Ok(self.prog.atom(id, &team));
        }
        let key = (id, team);
        if let Some(&v) = self.memo.get(&key) {
            return Ok(v);
        }
        let team = key.1;
        let result = match node.op {
            Op::And(l, r) => {
                // flat conjuncts are cheap, so try them first
                let (a, b) = if self.cfg.shortcuts && self.prog.node(r).flat { (r, l) } else { (l, r) };
                self.sat(a, team.clone())? && self.sat(b, team.clone())?
            }
            Op::Or(l, r) => self.or(l, r, &team)?,
            Op::Exists(col, body) => self.exists(col, body, &team)?,
            Op::Forall(col, body) => {
                let n = self.prog.domain_size as Elem;
                let dup = team
                    .iter()
                    .flat_map(|r| {
                        (0..n).map(move |a| {
                            let mut r = r.clone();
                            r[col] = a;
                            r
                        })
                    })
                    .collect();
                self.sat(body, canonical(dup))?
            }
            _ => unreachable!("atoms are handled above"),
        };
        if self.memo.len() < self.cfg.max_cache {
            self.memo.insert((id, team), result);
        }
        Ok(result)
    }

    fn or(&mut self, l: NodeId, r: NodeId, team: &[Row]) -> Result<bool, EvalError> {
        let (nl, nr) = (self.prog.node(l), self.prog.node(r));
        if self.cfg.strict {
            return self.partition(l, r, team, 0, &mut Vec::new(), &mut Vec::new());
        }
        if !self.cfg.shortcuts {
            return self.cover(l, r, team);
        }
        if nl.flat || nr.flat {
            // rows failing the flat side must go to the other one
            let (flat, other) = if nl.flat { (l, r) } else { (r, l) };
            let mut scratch = Vec::new();
            let (mut fail, mut pass) = (Vec::new(), Vec::new());
            for row in team {
                scratch.clone_from(row);
                if self.prog.holds(flat, &mut scratch) {
                    pass.push(row.clone());
                } else {
                    fail.push(row.clone());
                }
            }
            if self.prog.node(other).downward {
                return self.sat(other, fail);
            }
            if pass.len() > MAX_MASK_ROWS {
                return Err(EvalError::TooLarge { rows: team.len() });
            }
            for sub in 0..1u64 << pass.len() {
                let mut part = fail.clone();
                part.extend(select(&pass, sub));
                if self.sat(other, canonical(part))? {
                    return Ok(true);
                }
            }
            return Ok(false);
        }
        if nl.downward && nr.downward {
            return self.partition(l, r, team, 0, &mut Vec::new(), &mut Vec::new());
        }
        self.cover(l, r, team)
    }

    /// Every cover `T0 ∪ T1 = T`: each mask for the left part, with the
    /// right part any superset of its complement.
    fn cover(&mut self, l: NodeId, r: NodeId, team: &[Row]) -> Result<bool, EvalError> {
        let n = team.len();
        if n > MAX_MASK_ROWS {
            return Err(EvalError::TooLarge { rows: n });
        }
        let full = (1u64 << n) - 1;
        let mut up = Vec::with_capacity(1 << n);
        for m in 0..=full {
            up.push(self.sat(r, select(team, m))?);
        }
        for i in 0..n {
            for m in 0..=full {
                if m >> i & 1 == 0 && up[(m | 1 << i) as usize] {
                    up[m as usize] = true;
                }
            }
        }
        for m0 in 0..=full {
            if up[(full & !m0) as usize] && self.sat(l, select(team, m0))? {
                return Ok(true);
            }
        }
        Ok(false)
    }

    /// Disjoint splits, pruned on failing prefixes. Sound only when both
    /// sides are downward closed.
    fn partition(
        &mut self,
        l: NodeId,
        r: NodeId,
        team: &[Row],
        i: usize,
        left: &mut Vec<Row>,
        right: &mut Vec<Row>,
    ) -> Result<bool, EvalError> {
        if i == team.len() {
            return Ok(true);
        }
        for (side, node) in [(0, l), (1, r)] {
            let part = if side == 0 { &mut *left } else { &mut *right };
            part.push(team[i].clone());
            let part = part.clone();
            if self.sat(node, part)? && self.partition(l, r, team, i + 1, left, right)? {
                return Ok(true);
            }
            if side == 0 {
                left.pop();
            } else {
                right.pop();
            }
        }
        Ok(false)
    }

    /// Conjuncts of `id` that are flat, following the `&` spine.
    fn flat_conjuncts(&self, id: NodeId, out: &mut Vec<NodeId>) {
        let node = self.prog.node(id);
        if node.flat {
            out.push(id);
        } else if let Op::And(l, r) = node.op {
            self.flat_conjuncts(l, out);
            self.flat_conjuncts(r, out);
        }
    }

    fn exists(&mut self, col: usize, body: NodeId, team: &[Row]) -> Result<bool, EvalError> {
        // rows differing only at `col` have the same extensions
        let bases = canonical(
            team.iter()
                .map(|r| {
                    let mut r = r.clone();
                    r[col] = 0;
                    r
                })
                .collect(),
        );
        let mut filters = Vec::new();
        if self.cfg.shortcuts {
            self.flat_conjuncts(body, &mut filters);
        }
        let n = self.prog.domain_size as Elem;
        let mut candidates = Vec::with_capacity(bases.len());
        let mut scratch = Vec::new();
        for b in &bases {
            let vals: Vec<Elem> = (0..n)
                .filter(|&a| {
                    scratch.clone_from(b);
                    scratch[col] = a;
                    filters.iter().all(|&f| self.prog.holds(f, &mut scratch))
                })
                .collect();
            if vals.is_empty() {
                return Ok(false);
            }
            candidates.push(vals);
        }
        let downward = self.prog.node(body).downward;
        let singleton = self.cfg.strict || (self.cfg.shortcuts && downward);
        let choices: Vec<Vec<u64>> = if singleton {
            candidates.iter().map(|c| (0..c.len()).map(|j| 1u64 << j).collect()).collect()
        } else {
            let mut by_len: HashMap<usize, Vec<u64>> = HashMap::new();
            let mut out = Vec::with_capacity(candidates.len());
            for c in &candidates {
                if c.len() > MAX_MASK_ROWS {
                    return Err(EvalError::TooLarge { rows: c.len() });
                }
                out.push(by_len.entry(c.len()).or_insert_with(|| nonempty_masks(c.len())).clone());
            }
            out
        };
        let prune = downward && (self.cfg.shortcuts || self.cfg.strict);
        self.supplement(col, body, &bases, &candidates, &choices, prune, &mut Vec::new())
    }

    #[allow(clippy::too_many_arguments)]
    fn supplement(
        &mut self,
        col: usize,
        body: NodeId,
        bases: &[Row],
        candidates: &[Vec<Elem>],
        choices: &[Vec<u64>],
        prune: bool,
        acc: &mut Vec<Row>,
    ) -> Result<bool, EvalError> {
        let i = bases.len() - choices.len();
        let Some((here, rest)) = choices.split_first() else {
            return self.sat(body, canonical(acc.clone()));
        };
        for &mask in here {
            let before = acc.len();
            for (j, &a) in candidates[i].iter().enumerate() {
                if mask >> j & 1 == 1 {
                    let mut r = bases[i].clone();
                    r[col] = a;
                    acc.push(r);
                }
            }
            let viable = !prune || rest.is_empty() || self.sat(body, canonical(acc.clone()))?;
            if viable && self.supplement(col, body, bases, candidates, rest, prune, acc)? {
                return Ok(true);
            }
            acc.truncate(before);
        }
        Ok(false)
    }
}
