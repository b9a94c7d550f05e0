use std::collections::BTreeSet;
use std::fmt;

use super::ReductionError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GateKind {
    Input,
    And,
    Or,
}

/// A monotone Boolean circuit. An edge `(c, p)` means gate `c` feeds gate `p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BooleanCircuit {
    kinds: Vec<GateKind>,
    edges: BTreeSet<(u32, u32)>,
    output: u32,
    /// Children of each gate.
    feeds: Vec<Vec<u32>>,
    /// Gates with every child before its parents.
    order: Vec<u32>,
}

/// Gates with more than this many members are too large for proof-tree search.
pub const MAX_PROOF_TREE_GATES: usize = 24;

impl BooleanCircuit {
    pub fn new(
        kinds: Vec<GateKind>,
        edges: impl IntoIterator<Item = (u32, u32)>,
        output: u32,
    ) -> Result<Self, ReductionError> {
        let m = kinds.len();
        let edges: BTreeSet<(u32, u32)> = edges.into_iter().collect();
        let bad = |g: u32| ReductionError::Circuit(format!("gate {g} does not exist"));
        if output as usize >= m {
            return Err(bad(output));
        }
        let mut feeds = vec![Vec::new(); m];
        for &(c, p) in &edges {
            if c as usize >= m {
                return Err(bad(c));
            }
            if p as usize >= m {
                return Err(bad(p));
            }
            if kinds[p as usize] == GateKind::Input {
                return Err(ReductionError::Circuit(format!("input gate {p} has an incoming edge")));
            }
            feeds[p as usize].push(c);
        }
        // Kahn's algorithm over child -> parent edges
        let mut pending: Vec<usize> = feeds.iter().map(Vec::len).collect();
        let mut ready: Vec<u32> = (0..m as u32).filter(|&g| pending[g as usize] == 0).collect();
        let mut order = Vec::with_capacity(m);
        while let Some(g) = ready.pop() {
            order.push(g);
            for &(c, p) in edges.range((g, 0)..=(g, u32::MAX)) {
                debug_assert_eq!(c, g);
                pending[p as usize] -= 1;
                if pending[p as usize] == 0 {
                    ready.push(p);
                }
            }
        }
        if order.len() != m {
            return Err(ReductionError::Circuit("edges contain a cycle".into()));
        }
        Ok(BooleanCircuit {
            kinds,
            edges,
            output,
            feeds,
            order,
        })
    }

    pub fn gate_count(&self) -> usize {
        self.kinds.len()
    }

    pub fn kind(&self, g: u32) -> GateKind {
        self.kinds[g as usize]
    }

    pub fn edges(&self) -> &BTreeSet<(u32, u32)> {
        &self.edges
    }

    pub fn output(&self) -> u32 {
        self.output
    }

    pub fn inputs(&self) -> BTreeSet<u32> {
        (0..self.kinds.len() as u32)
            .filter(|&g| self.kind(g) == GateKind::Input)
            .collect()
    }

    fn check_inputs(&self, s: &BTreeSet<u32>) -> Result<(), ReductionError> {
        match s.iter().find(|&&g| g as usize >= self.kinds.len() || self.kind(g) != GateKind::Input) {
            Some(&g) => Err(ReductionError::Circuit(format!("gate {g} is not an input"))),
            None => Ok(()),
        }
    }

    /// Lines `gate <id> and|or|input`, `edge <child> <parent>`, `output <id>`.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let err = |line: usize, message: String| ReductionError::Parse { line, message };
        let mut kinds: Vec<Option<GateKind>> = Vec::new();
        let mut edges = Vec::new();
        let mut output = None;
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let raw = raw.split('#').next().unwrap_or("");
            let words: Vec<&str> = raw.split_whitespace().collect();
            let num = |w: &str| w.parse::<u32>().map_err(|_| err(line, format!("`{w}` is not a gate id")));
            match words.as_slice() {
                [] => {}
                ["gate", id, kind] => {
                    let id = num(id)? as usize;
                    let kind = match *kind {
                        "and" => GateKind::And,
                        "or" => GateKind::Or,
                        "input" => GateKind::Input,
                        other => return Err(err(line, format!("unknown gate kind `{other}`"))),
                    };
                    if kinds.len() <= id {
                        kinds.resize(id + 1, None);
                    }
                    if kinds[id].replace(kind).is_some() {
                        return Err(err(line, format!("gate {id} declared twice")));
                    }
                }
                ["edge", c, p] => edges.push((num(c)?, num(p)?)),
                ["output", o] => {
                    if output.replace(num(o)?).is_some() {
                        return Err(err(line, "duplicate `output` line".into()));
                    }
                }
                _ => return Err(err(line, "expected `gate`, `edge` or `output`".into())),
            }
        }
        let kinds = kinds
            .into_iter()
            .enumerate()
            .map(|(g, k)| k.ok_or_else(|| ReductionError::Circuit(format!("gate {g} is not declared"))))
            .collect::<Result<Vec<_>, _>>()?;
        let output = output.ok_or_else(|| ReductionError::Circuit("missing `output` line".into()))?;
        BooleanCircuit::new(kinds, edges, output)
    }
}

impl fmt::Display for BooleanCircuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (g, k) in self.kinds.iter().enumerate() {
            let k = match k {
                GateKind::Input => "input",
                GateKind::And => "and",
                GateKind::Or => "or",
            };
            writeln!(f, "gate {g} {k}")?;
        }
        for (c, p) in &self.edges {
            writeln!(f, "edge {c} {p}")?;
        }
        writeln!(f, "output {}", self.output)
    }
}

/// Value of the output gate when exactly the inputs in `s` are true.
pub fn circuit_eval(c: &BooleanCircuit, s: &BTreeSet<u32>) -> Result<bool, ReductionError> {
    c.check_inputs(s)?;
    let mut value = vec![false; c.gate_count()];
    for &g in &c.order {
        let mut children = c.feeds[g as usize].iter().map(|&h| value[h as usize]);
        value[g as usize] = match c.kind(g) {
            GateKind::Input => s.contains(&g),
            GateKind::And => children.all(|v| v),
            GateKind::Or => children.any(|v| v),
        };
    }
    Ok(value[c.output as usize])
}

/// Whether some gate set `P` contains the output, meets the inputs exactly
/// in `s`, gives every OR-gate in `P` a child in `P`, and puts every child
/// of an AND-gate in `P` into `P`.
pub fn proof_tree_exists(c: &BooleanCircuit, s: &BTreeSet<u32>) -> Result<bool, ReductionError> {
    c.check_inputs(s)?;
    let m = c.gate_count();
    if m > MAX_PROOF_TREE_GATES {
        return Err(ReductionError::Circuit(format!(
            "{m} gates exceed the proof-tree search limit of {MAX_PROOF_TREE_GATES}"
        )));
    }
    let input_mask: u64 = c.inputs().iter().map(|&g| 1u64 << g).sum();
    let s_mask: u64 = s.iter().map(|&g| 1u64 << g).sum();
    let found = (0..1u64 << m).any(|p| {
        let has = |g: u32| p >> g & 1 == 1;
        has(c.output)
            && p & input_mask == s_mask
            && (0..m as u32).filter(|&g| has(g)).all(|g| match c.kind(g) {
                GateKind::Input => true,
                GateKind::Or => c.feeds[g as usize].iter().any(|&h| has(h)),
                GateKind::And => c.feeds[g as usize].iter().all(|&h| has(h)),
            })
    });
    Ok(found)
}
