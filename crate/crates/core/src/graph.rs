//! Simple connected undirected graphs, distances, bipartiteness and
//! shortest-path intervals.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bitset::VertexSet;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("graph has no vertices")]
    Empty,
    /// `at` is the 1-based input line for text input, or the 1-based edge
    /// position for programmatic input.
    #[error("vertex {vertex} out of range (n = {n}) at line {at}")]
    VertexOutOfRange { at: usize, vertex: usize, n: usize },
    #[error("self-loop at vertex {vertex} at line {at}")]
    SelfLoop { at: usize, vertex: usize },
    #[error("duplicate edge {{{u}, {v}}} at line {at}")]
    DuplicateEdge { at: usize, u: usize, v: usize },
    #[error("header announces {expected} edges but {found} were given")]
    EdgeCountMismatch { expected: usize, found: usize },
    #[error("{labels} labels given for {n} vertices")]
    LabelCount { labels: usize, n: usize },
    #[error("graph is disconnected: vertex {unreachable} is not reachable from vertex 0")]
    Disconnected { unreachable: usize },
}

/// A validated simple connected undirected graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    /// `adj[v]` holds `(neighbor, edge id)` sorted by neighbor.
    adj: Vec<Vec<(usize, usize)>>,
    labels: Option<Vec<String>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GraphJson {
    n: usize,
    edges: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<Vec<String>>,
}

impl Graph {
    /// Validates an edge list. Edges are stored as `(min, max)` in the given
    /// order, so edge ids are positions in `edges`.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
        Self::build(n, edges.iter().enumerate().map(|(i, &e)| (i + 1, e)))
    }

    fn build<I>(n: usize, edges: I) -> Result<Graph, GraphError>
    where
        I: IntoIterator<Item = (usize, (usize, usize))>,
    {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
        let mut list = Vec::new();
        for (at, (u, v)) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { at, vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::SelfLoop { at, vertex: u });
            }
            let (a, b) = (u.min(v), u.max(v));
            if adj[a].iter().any(|&(x, _)| x == b) {
                return Err(GraphError::DuplicateEdge { at, u: a, v: b });
            }
            let id = list.len();
            list.push((a, b));
            adj[a].push((b, id));
            adj[b].push((a, id));
        }
        for nb in &mut adj {
            nb.sort_unstable();
        }
        let g = Graph {
            n,
            edges: list,
            adj,
            labels: None,
        };
        if let Some(unreachable) = g.first_unreachable() {
            return Err(GraphError::Disconnected { unreachable });
        }
        Ok(g)
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Graph, GraphError> {
        if labels.len() != self.n {
            return Err(GraphError::LabelCount {
                labels: labels.len(),
                n: self.n,
            });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for &(w, _) in &self.adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
        seen.iter().position(|&s| !s)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn edge(&self, id: usize) -> (usize, usize) {
        self.edges[id]
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&(w, _)| w)
    }

    /// Neighbors of `v` paired with the id of the connecting edge.
    pub fn incident(&self, v: usize) -> &[(usize, usize)] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn edge_id(&self, u: usize, v: usize) -> Option<usize> {
        let nb = &self.adj[u];
        nb.binary_search_by_key(&v, |&(w, _)| w).ok().map(|i| nb[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_id(u, v).is_some()
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Serializes to the JSON graph format (`{n, edges, labels?}`).
    pub fn to_json(&self) -> serde_json::Value {
        let doc = GraphJson {
            n: self.n,
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
            labels: self.labels.clone(),
        };
        serde_json::to_value(doc).expect("graph serializes")
    }

    /// Serializes to the plain edge-list text format.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n, self.m());
        for &(u, v) in &self.edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }
}

/// Parses the edge-list text format: a header `n m`, then `m` lines `u v`.
/// Blank lines and lines starting with `#` are skipped.
pub fn load_graph(text: &str) -> Result<Graph, GraphError> {
    if text.trim_start().starts_with('{') {
        return load_graph_json(text);
    }
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(GraphError::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let head = parse_pair(hline, header)?;
    let (n, m) = head;
    let mut edges = Vec::with_capacity(m);
    for (line, l) in lines {
        edges.push((line, parse_pair(line, l)?));
    }
    if edges.len() != m {
        return Err(GraphError::EdgeCountMismatch {
            expected: m,
            found: edges.len(),
        });
    }
    Graph::build(n, edges)
}

/// Parses the JSON graph format `{"n": .., "edges": [[u, v], ..], "labels": [..]}`.
pub fn load_graph_json(text: &str) -> Result<Graph, GraphError> {
    let doc: GraphJson = serde_json::from_str(text).map_err(|e| GraphError::Parse {
        line: e.line(),
        message: e.to_string(),
    })?;
    let g = Graph::from_edges(doc.n, &doc.edges.iter().map(|&[u, v]| (u, v)).collect::<Vec<_>>())?;
    match doc.labels {
        Some(labels) => g.with_labels(labels),
        None => Ok(g),
    }
}

fn parse_pair(line: usize, text: &str) -> Result<(usize, usize), GraphError> {
    let mut it = text.split_whitespace();
    let mut next = || -> Result<usize, GraphError> {
        let tok = it.next().ok_or_else(|| GraphError::Parse {
            line,
            message: "expected two integers".into(),
        })?;
        tok.parse().map_err(|_| GraphError::Parse {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let a = next()?;
    let b = next()?;
    if let Some(extra) = it.next() {
        return Err(GraphError::Parse {
            line,
            message: format!("unexpected token {extra:?}"),
        });
    }
    Ok((a, b))
}

/// All-pairs hop distances, computed once by breadth-first search from every
/// vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    d: Vec<u32>,
}

impl DistanceMatrix {
    #[inline]
    pub fn get(&self, u: usize, v: usize) -> u32 {
        self.d[u * self.n + v]
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn row(&self, u: usize) -> &[u32] {
        &self.d[u * self.n..(u + 1) * self.n]
    }

    pub fn diameter(&self) -> u32 {
        self.d.iter().copied().max().unwrap_or(0)
    }

    /// The interval `I(u, w)`: vertices on some shortest `u`–`w` path.
    pub fn interval(&self, u: usize, w: usize) -> VertexSet {
        let duw = self.get(u, w);
        let (ru, rw) = (self.row(u), self.row(w));
        VertexSet::from_ids(self.n, (0..self.n).filter(|&z| ru[z] + rw[z] == duw))
    }
}

pub fn bfs_distances(g: &Graph, source: usize) -> Vec<u32> {
    let mut dist = vec![u32::MAX; g.n()];
    let mut queue = VecDeque::new();
    dist[source] = 0;
    queue.push_back(source);
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if dist[w] == u32::MAX {
                dist[w] = dist[v] + 1;
                queue.push_back(w);
            }
        }
    }
    dist
}

pub fn all_pairs_distances(g: &Graph) -> DistanceMatrix {
    let n = g.n();
    let mut d = Vec::with_capacity(n * n);
    for s in 0..n {
        d.extend(bfs_distances(g, s));
    }
    DistanceMatrix { n, d }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Bipartition {
    /// `side[v]` is the color class of `v`; vertex 0 is in class `false`.
    Bipartite { side: Vec<bool> },
    /// A closed walk of odd length, listed without repeating the start.
    OddCycle { cycle: Vec<usize> },
}

impl Bipartition {
    pub fn is_bipartite(&self) -> bool {
        matches!(self, Bipartition::Bipartite { .. })
    }
}

/// Two-colors `g` by breadth-first search, or returns an odd cycle through
/// the first monochromatic edge found.
pub fn is_bipartite(g: &Graph) -> Bipartition {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![u32::MAX; n];
    let mut queue = VecDeque::from([0]);
    depth[0] = 0;
    while let Some(v) = queue.pop_front() {
        for w in g.neighbors(v) {
            if depth[w] == u32::MAX {
                depth[w] = depth[v] + 1;
                parent[w] = v;
                queue.push_back(w);
            }
        }
    }
    for &(a, b) in g.edges() {
        if depth[a] % 2 == depth[b] % 2 {
            // Walk both endpoints up to their common ancestor.
            let (mut x, mut y) = (a, b);
            let mut left = vec![x];
            let mut right = vec![y];
            while x != y {
                if depth[x] >= depth[y] {
                    x = parent[x];
                    left.push(x);
                } else {
                    y = parent[y];
                    right.push(y);
                }
                if x == y {
                    break;
                }
            }
            // Both lists end at the ancestor; keep it once.
            right.pop();
            right.reverse();
            left.extend(right);
            return Bipartition::OddCycle { cycle: left };
        }
    }
    Bipartition::Bipartite {
        side: depth.iter().map(|d| d % 2 == 1).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn load_c4() {
        let g = load_graph("4 4\n0 1\n1 2\n2 3\n3 0").unwrap();
        assert_eq!((g.n(), g.m()), (4, 4));
        assert!(g.has_edge(0, 3));
        assert_eq!(g.edge_id(3, 0), Some(3));
    }

    #[test]
    fn load_errors() {
        assert_eq!(load_graph("2 1\n0 0"), Err(GraphError::SelfLoop { at: 2, vertex: 0 }));
        assert_eq!(
            load_graph("4 2\n0 1\n2 3"),
            Err(GraphError::Disconnected { unreachable: 2 })
        );
        assert_eq!(
            load_graph("3 3\n0 1\n# comment\n1 2\n2 1"),
            Err(GraphError::DuplicateEdge { at: 5, u: 1, v: 2 })
        );
        assert_eq!(
            load_graph("3 2\n0 1\n1 7"),
            Err(GraphError::VertexOutOfRange { at: 3, vertex: 7, n: 3 })
        );
        assert_eq!(
            load_graph("3 3\n0 1\n1 2"),
            Err(GraphError::EdgeCountMismatch { expected: 3, found: 2 })
        );
        assert!(matches!(load_graph("3 2\n0 x"), Err(GraphError::Parse { line: 2, .. })));
        assert_eq!(load_graph("0 0"), Err(GraphError::Empty));
    }

    #[test]
    fn json_roundtrip_with_labels() {
        let g = load_graph(r#"{"n": 3, "edges": [[0,1],[2,1]], "labels": ["a","b","c"]}"#).unwrap();
        assert_eq!(g.edges(), &[(0, 1), (1, 2)]);
        assert_eq!(g.labels().unwrap()[2], "c");
        let again = load_graph_json(&g.to_json().to_string()).unwrap();
        assert_eq!(again, g);
        assert!(matches!(
            load_graph(r#"{"n": 2, "edges": [[0,1]], "labels": ["a"]}"#),
            Err(GraphError::LabelCount { .. })
        ));
        assert_eq!(load_graph(&g.to_edge_list()).unwrap().edges(), g.edges());
    }

    #[test]
    fn distances() {
        let c4 = generators::cycle(4);
        assert_eq!(all_pairs_distances(&c4).get(0, 2), 2);
        let q3 = generators::hypercube(3);
        assert_eq!(all_pairs_distances(&q3).get(0b000, 0b111), 3);
        let star = generators::star(3);
        assert_eq!(all_pairs_distances(&star).get(1, 2), 2);
    }

    #[test]
    fn bipartiteness() {
        assert!(is_bipartite(&generators::cycle(4)).is_bipartite());
        assert!(is_bipartite(&generators::hypercube(3)).is_bipartite());
        match is_bipartite(&generators::cycle(5)) {
            Bipartition::OddCycle { cycle } => assert_eq!(cycle.len(), 5),
            other => panic!("expected odd cycle, got {other:?}"),
        }
    }

    #[test]
    fn intervals() {
        let d = all_pairs_distances(&generators::cycle(4));
        assert_eq!(d.interval(0, 2).to_vec(), vec![0, 1, 2, 3]);
        assert_eq!(d.interval(1, 1).to_vec(), vec![1]);
        let d = all_pairs_distances(&generators::star(3));
        assert_eq!(d.interval(1, 2).to_vec(), vec![0, 1, 2]);
    }
}
