use std::collections::BTreeSet;
use std::fmt;

use super::ReductionError;
use crate::model::{Elem, Structure};

/// A simple undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: BTreeSet<(Elem, Elem)>,
}

impl Graph {
    /// Edges may be given in either orientation; duplicates collapse.
    pub fn new(n: usize, edges: impl IntoIterator<Item = (Elem, Elem)>) -> Result<Self, ReductionError> {
        let mut set = BTreeSet::new();
        for (u, v) in edges {
            if u == v {
                return Err(ReductionError::Loop(u));
            }
            if u as usize >= n || v as usize >= n {
                return Err(ReductionError::VertexOutOfRange { vertex: u.max(v), n });
            }
            set.insert((u.min(v), u.max(v)));
        }
        Ok(Graph { n, edges: set })
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n as Elem).flat_map(|u| (u + 1..n as Elem).map(move |v| (u, v)));
        Graph::new(n, edges).expect("complete graph is simple")
    }

    pub fn cycle(n: usize) -> Self {
        Graph::new(n, (0..n as Elem).map(|u| (u, (u + 1) % n as Elem))).expect("cycle needs n ≥ 3")
    }

    pub fn path(n: usize) -> Self {
        Graph::new(n, (1..n as Elem).map(|u| (u - 1, u))).expect("path is simple")
    }

    /// Vertex 0 joined to `leaves` further vertices.
    pub fn star(leaves: usize) -> Self {
        Graph::new(leaves + 1, (1..=leaves as Elem).map(|v| (0, v))).expect("star is simple")
    }

    /// Every graph on `n` vertices, indexed by the bitmask over the
    /// lexicographically ordered vertex pairs.
    pub fn all(n: usize) -> impl Iterator<Item = Graph> {
        let pairs: Vec<(Elem, Elem)> = (0..n as Elem)
            .flat_map(|u| (u + 1..n as Elem).map(move |v| (u, v)))
            .collect();
        (0..1u64 << pairs.len()).map(move |mask| Graph {
            n,
            edges: pairs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, &e)| e)
                .collect(),
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    /// Edges as pairs `(u, v)` with `u < v`.
    pub fn edges(&self) -> &BTreeSet<(Elem, Elem)> {
        &self.edges
    }

    pub fn adjacent(&self, u: Elem, v: Elem) -> bool {
        self.edges.contains(&(u.min(v), u.max(v)))
    }

    /// Domain `V` with `E` the symmetric closure of the edges.
    pub fn to_structure(&self) -> Result<Structure, ReductionError> {
        let tuples = self.edges.iter().flat_map(|&(u, v)| [vec![u, v], vec![v, u]]);
        Ok(Structure::new(self.n)?.with_relation("E", 2, tuples)?)
    }

    /// `p <n> <m>` followed by `m` lines `e <u> <v>`; `c` lines are comments.
    pub fn parse(text: &str) -> Result<Self, ReductionError> {
        let err = |line: usize, message: &str| ReductionError::Parse {
            line,
            message: message.to_string(),
        };
        let mut header: Option<(usize, usize, usize)> = None;
        let mut edges = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let words: Vec<&str> = raw.split_whitespace().collect();
            match words.as_slice() {
                [] | ["c", ..] => {}
                ["p", n, m] => {
                    if header.is_some() {
                        return Err(err(line, "duplicate `p` line"));
                    }
                    let n = n.parse().map_err(|_| err(line, "vertex count is not a number"))?;
                    let m = m.parse().map_err(|_| err(line, "edge count is not a number"))?;
                    header = Some((n, m, line));
                }
                ["e", u, v] => {
                    if header.is_none() {
                        return Err(err(line, "edge before `p` line"));
                    }
                    let u = u.parse().map_err(|_| err(line, "vertex is not a number"))?;
                    let v = v.parse().map_err(|_| err(line, "vertex is not a number"))?;
                    edges.push((line, u, v));
                }
                _ => return Err(err(line, "expected `p <n> <m>` or `e <u> <v>`")),
            }
        }
        let (n, m, pline) = header.ok_or_else(|| err(1, "missing `p <n> <m>` line"))?;
        if edges.len() != m {
            return Err(err(pline, &format!("header announces {m} edges, found {}", edges.len())));
        }
        let mut set = Vec::new();
        for (line, u, v) in edges {
            Graph::new(n, [(u, v)]).map_err(|e| err(line, &e.to_string()))?;
            set.push((u, v));
        }
        Graph::new(n, set)
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "p {} {}", self.n, self.edges.len())?;
        for (u, v) in &self.edges {
            writeln!(f, "e {u} {v}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GraphProblem {
    Clique,
    Indset,
    Domset,
}

impl fmt::Display for GraphProblem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GraphProblem::Clique => "clique",
            GraphProblem::Indset => "indset",
            GraphProblem::Domset => "domset",
        })
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> impl Iterator<Item = Vec<usize>> {
    let mut next = (k <= n).then(|| (0..k).collect::<Vec<_>>());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut succ = cur.clone();
        let mut i = k;
        while i > 0 {
            i -= 1;
            if succ[i] < n - k + i {
                succ[i] += 1;
                for j in i + 1..k {
                    succ[j] = succ[j - 1] + 1;
                }
                next = Some(succ);
                break;
            }
        }
        Some(cur)
    })
}

/// Exhaustive search over vertex sets of size exactly `k`.
pub fn graph_brute(problem: GraphProblem, g: &Graph, k: usize) -> bool {
    let n = g.vertex_count();
    combinations(n, k).any(|set| {
        let set: Vec<Elem> = set.into_iter().map(|v| v as Elem).collect();
        match problem {
            GraphProblem::Clique => set
                .iter()
                .enumerate()
                .all(|(i, &u)| set[i + 1..].iter().all(|&v| g.adjacent(u, v))),
            GraphProblem::Indset => set
                .iter()
                .enumerate()
                .all(|(i, &u)| set[i + 1..].iter().all(|&v| !g.adjacent(u, v))),
            GraphProblem::Domset => {
                (0..n as Elem).all(|v| set.iter().any(|&s| s == v || g.adjacent(s, v)))
            }
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_round_trip() {
        let g = Graph::parse("c triangle\np 3 3\ne 0 1\ne 1 2\ne 2 0\n").unwrap();
        assert_eq!(g, Graph::complete(3));
        assert_eq!(Graph::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(Graph::parse("e 0 1"), Err(ReductionError::Parse { line: 1, .. })));
        assert!(matches!(Graph::parse("p 2 1\ne 0 0"), Err(ReductionError::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("p 2 1\ne 0 5"), Err(ReductionError::Parse { line: 2, .. })));
        assert!(matches!(Graph::parse("p 2 2\ne 0 1"), Err(ReductionError::Parse { line: 1, .. })));
    }

    #[test]
    fn enumerates_all_graphs() {
        assert_eq!(Graph::all(5).count(), 1024);
        assert_eq!(Graph::all(3).filter(|g| g.edges().len() == 3).count(), 1);
    }

    #[test]
    fn combinations_in_order() {
        let c: Vec<_> = combinations(4, 2).collect();
        assert_eq!(c, vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]);
        assert_eq!(combinations(3, 0).count(), 1);
        assert_eq!(combinations(2, 3).count(), 0);
    }

    #[test]
    fn brute_force_examples() {
        assert!(graph_brute(GraphProblem::Clique, &Graph::complete(3), 3));
        assert!(!graph_brute(GraphProblem::Indset, &Graph::complete(3), 2));
        assert!(graph_brute(GraphProblem::Domset, &Graph::path(5), 2));
        assert!(!graph_brute(GraphProblem::Domset, &Graph::path(5), 1));
        assert!(!graph_brute(GraphProblem::Clique, &Graph::cycle(5), 3));
        assert!(graph_brute(GraphProblem::Indset, &Graph::path(3), 2));
        assert!(!graph_brute(GraphProblem::Domset, &Graph::new(3, []).unwrap(), 2));
        assert!(graph_brute(GraphProblem::Domset, &Graph::star(4), 1));
    }
}
