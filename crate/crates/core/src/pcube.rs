//! Djoković–Winkler classes, cut-partitions and partial cube recognition.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::{all_pairs_distances, is_bipartite, Bipartition, DistanceMatrix, Graph};

#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Rejection {
    #[error("graph is not bipartite (odd cycle {odd_cycle:?})")]
    NotBipartite { odd_cycle: Vec<usize> },
    #[error("edge class {edges:?} leaves {components} components instead of 2")]
    BadCutClass {
        edges: Vec<(usize, usize)>,
        components: usize,
    },
    #[error("vertices {u} and {v} are at distance {distance} but their coordinates differ in {hamming} places")]
    IsometryViolation {
        u: usize,
        v: usize,
        distance: u32,
        hamming: u32,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CutPartitionError {
    #[error("edge {0} is not covered by any class")]
    Uncovered(usize),
    #[error("edge {0} appears in more than one class")]
    Overlap(usize),
    #[error("edge id {0} out of range")]
    BadEdge(usize),
    #[error("class {class} leaves {components} components instead of 2")]
    NotACut { class: usize, components: usize },
}

/// One minimal cut together with its two sides. `minus` is the side holding
/// vertex 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cut {
    pub edges: Vec<usize>,
    pub plus: VertexSet,
    pub minus: VertexSet,
}

impl Cut {
    pub fn side_of(&self, v: usize) -> &VertexSet {
        if self.plus.contains(v) {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// The side not containing `v`.
    pub fn far_side(&self, v: usize) -> &VertexSet {
        if self.plus.contains(v) {
            &self.minus
        } else {
            &self.plus
        }
    }

    pub fn separates(&self, s: &VertexSet) -> bool {
        s.intersects(&self.plus) && s.intersects(&self.minus)
    }

    /// `C(S)`: the side containing `s`, or every vertex when the cut
    /// separates `s`.
    pub fn restrict(&self, s: &VertexSet) -> VertexSet {
        if s.is_subset(&self.plus) {
            self.plus.clone()
        } else if s.is_subset(&self.minus) {
            self.minus.clone()
        } else {
            VertexSet::full(s.width())
        }
    }
}

/// A partition of the edge set into minimal cuts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CutPartition {
    class_of: Vec<usize>,
    cuts: Vec<Cut>,
}

impl CutPartition {
    /// Validates a proposed partition of edge ids into cuts and labels the
    /// sides. Classes keep their given order.
    pub fn from_classes(g: &Graph, classes: Vec<Vec<usize>>) -> Result<Self, CutPartitionError> {
        let mut class_of = vec![usize::MAX; g.m()];
        for (c, edges) in classes.iter().enumerate() {
            for &e in edges {
                if e >= g.m() {
                    return Err(CutPartitionError::BadEdge(e));
                }
                if class_of[e] != usize::MAX {
                    return Err(CutPartitionError::Overlap(e));
                }
                class_of[e] = c;
            }
        }
        if let Some(e) = class_of.iter().position(|&c| c == usize::MAX) {
            return Err(CutPartitionError::Uncovered(e));
        }
        let mut cuts = Vec::with_capacity(classes.len());
        for (c, mut edges) in classes.into_iter().enumerate() {
            edges.sort_unstable();
            match split_by_class(g, &class_of, c, &edges) {
                Ok((plus, minus)) => cuts.push(Cut { edges, plus, minus }),
                Err(components) => return Err(CutPartitionError::NotACut { class: c, components }),
            }
        }
        Ok(CutPartition { class_of, cuts })
    }

    pub fn len(&self) -> usize {
        self.cuts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cuts.is_empty()
    }

    pub fn cuts(&self) -> &[Cut] {
        &self.cuts
    }

    pub fn cut(&self, c: usize) -> &Cut {
        &self.cuts[c]
    }

    pub fn class_of(&self, edge: usize) -> usize {
        self.class_of[edge]
    }

    /// Number of cuts with `u` and `w` on different sides.
    pub fn separating_count(&self, u: usize, w: usize) -> usize {
        self.cuts
            .iter()
            .filter(|c| c.plus.contains(u) != c.plus.contains(w))
            .count()
    }

    pub fn embedding(&self, n: usize) -> HypercubeEmbedding {
        let dims = self.cuts.len();
        let words = dims.div_ceil(64);
        let mut coords = vec![vec![0u64; words]; n];
        for (i, cut) in self.cuts.iter().enumerate() {
            for v in cut.plus.iter() {
                coords[v][i / 64] |= 1 << (i % 64);
            }
        }
        HypercubeEmbedding { dims, coords }
    }
}

/// Removes the edges of class `c` and returns the two sides, or the number
/// of components when that is not exactly two or some class edge stays
/// inside one component.
fn split_by_class(g: &Graph, class_of: &[usize], c: usize, edges: &[usize]) -> Result<(VertexSet, VertexSet), usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut count = 0;
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        comp[s] = count;
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for &(w, e) in g.incident(v) {
                if class_of[e] != c && comp[w] == usize::MAX {
                    comp[w] = count;
                    stack.push(w);
                }
            }
        }
        count += 1;
    }
    if count != 2 {
        return Err(count);
    }
    for &e in edges {
        let (u, v) = g.edge(e);
        if comp[u] == comp[v] {
            // A class edge inside one side: not a minimal cut.
            return Err(count);
        }
    }
    let minus = VertexSet::from_ids(n, (0..n).filter(|&v| comp[v] == comp[0]));
    let plus = minus.complement();
    Ok((plus, minus))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so class order is independent of merge order.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Edges `xy` and `uv` are in relation when
/// `d(x,u) + d(y,v) != d(x,v) + d(y,u)`.
pub fn theta_related(d: &DistanceMatrix, e: (usize, usize), f: (usize, usize)) -> bool {
    let (x, y) = e;
    let (u, v) = f;
    d.get(x, u) + d.get(y, v) != d.get(x, v) + d.get(y, u)
}

/// Transitive closure of the Djoković–Winkler relation as a cut-partition.
/// Classes are numbered by their smallest edge id.
pub fn theta_classes(g: &Graph, d: &DistanceMatrix) -> Result<CutPartition, Rejection> {
    if let Bipartition::OddCycle { cycle } = is_bipartite(g) {
        return Err(Rejection::NotBipartite { odd_cycle: cycle });
    }
    let m = g.m();
    let edges = g.edges();
    let mut uf = UnionFind::new(m);
    for i in 0..m {
        for j in i + 1..m {
            if theta_related(d, edges[i], edges[j]) {
                uf.union(i, j);
            }
        }
    }
    let mut class_index = vec![usize::MAX; m];
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for e in 0..m {
        let r = uf.find(e);
        if class_index[r] == usize::MAX {
            class_index[r] = classes.len();
            classes.push(Vec::new());
        }
        classes[class_index[r]].push(e);
    }
    let snapshot = classes.clone();
    CutPartition::from_classes(g, classes).map_err(|err| match err {
        CutPartitionError::NotACut { class, components } => Rejection::BadCutClass {
            edges: snapshot[class].iter().map(|&e| g.edge(e)).collect(),
            components,
        },
        other => unreachable!("theta classes always partition the edges: {other}"),
    })
}

/// Vertex coordinates in `{0,1}^dims`; bit `i` is set iff the vertex lies on
/// the plus side of cut `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeEmbedding {
    dims: usize,
    coords: Vec<Vec<u64>>,
}

impl HypercubeEmbedding {
    pub fn dims(&self) -> usize {
        self.dims
    }

    pub fn bit(&self, v: usize, i: usize) -> bool {
        self.coords[v][i / 64] >> (i % 64) & 1 == 1
    }

    pub fn hamming(&self, u: usize, v: usize) -> u32 {
        self.coords[u]
            .iter()
            .zip(&self.coords[v])
            .map(|(a, b)| (a ^ b).count_ones())
            .sum()
    }

    pub fn bit_string(&self, v: usize) -> String {
        (0..self.dims).map(|i| if self.bit(v, i) { '1' } else { '0' }).collect()
    }

    /// First pair (in lexicographic order) whose Hamming distance differs
    /// from the graph distance.
    pub fn isometry_violation(&self, d: &DistanceMatrix) -> Option<(usize, usize, u32, u32)> {
        let n = self.coords.len();
        for u in 0..n {
            for v in u + 1..n {
                let h = self.hamming(u, v);
                if h != d.get(u, v) {
                    return Some((u, v, d.get(u, v), h));
                }
            }
        }
        None
    }
}

/// Everything recognition certifies about a partial cube.
#[derive(Debug, Clone)]
pub struct PartialCube {
    pub distances: DistanceMatrix,
    pub cuts: CutPartition,
    pub embedding: HypercubeEmbedding,
}

impl PartialCube {
    /// JSON export: vertex id -> coordinate bit string, plus cut metadata.
    pub fn to_json(&self, g: &Graph) -> Value {
        let mut coords = Map::new();
        for v in 0..g.n() {
            coords.insert(v.to_string(), Value::String(self.embedding.bit_string(v)));
        }
        let cuts: Vec<Value> = self
            .cuts
            .cuts()
            .iter()
            .enumerate()
            .map(|(i, c)| {
                json!({
                    "id": i,
                    "edges": c.edges.iter().map(|&e| { let (u, v) = g.edge(e); [u, v] }).collect::<Vec<_>>(),
                    "plus_size": c.plus.len(),
                    "minus_size": c.minus.len(),
                })
            })
            .collect();
        json!({
            "dimension": self.embedding.dims(),
            "coordinates": coords,
            "cuts": cuts,
        })
    }
}

/// Recognizes a partial cube. The embedding read off the Θ classes is
/// checked against all graph distances before it is returned.
pub fn recognize(g: &Graph) -> Result<PartialCube, Rejection> {
    let distances = all_pairs_distances(g);
    recognize_with(g, distances)
}

pub fn recognize_with(g: &Graph, distances: DistanceMatrix) -> Result<PartialCube, Rejection> {
    let cuts = theta_classes(g, &distances)?;
    let embedding = cuts.embedding(g.n());
    if let Some((u, v, distance, hamming)) = embedding.isometry_violation(&distances) {
        return Err(Rejection::IsometryViolation {
            u,
            v,
            distance,
            hamming,
        });
    }
    Ok(PartialCube {
        distances,
        cuts,
        embedding,
    })
}

pub fn is_partial_cube(g: &Graph) -> bool {
    recognize(g).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConditionOutcome {
    pub holds: bool,
    /// A vertex pair witnessing the failure.
    pub violation: Option<(usize, usize)>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutConditionReport {
    /// Every pair has a shortest path crossing no cut twice.
    pub some_path_crosses_once: ConditionOutcome,
    /// No shortest path crosses any cut twice.
    pub every_path_crosses_once: ConditionOutcome,
}

impl CutConditionReport {
    pub fn passed(&self) -> bool {
        self.some_path_crosses_once.holds && self.every_path_crosses_once.holds
    }
}

/// Checks both shortest-path conditions exhaustively over all vertex pairs.
///
/// The first condition holds for a pair exactly when its distance equals the
/// number of cuts separating it: a path crossing no cut twice uses only the
/// separating cuts, once each. The second is checked on the shortest-path
/// DAG of every source by propagating, per vertex, the set of cuts that can
/// open a shortest path to it; a DAG edge whose cut is already in that set
/// closes a shortest path that crosses one cut twice.
pub fn verify_cut_conditions(g: &Graph, d: &DistanceMatrix, cp: &CutPartition) -> CutConditionReport {
    let n = g.n();
    let mut first_violation = None;
    'pairs: for u in 0..n {
        for w in u + 1..n {
            if d.get(u, w) as usize != cp.separating_count(u, w) {
                first_violation = Some((u, w));
                break 'pairs;
            }
        }
    }

    let k = cp.len();
    let mut second_violation = None;
    let mut order: Vec<usize> = (0..n).collect();
    'sources: for a in 0..n {
        let row = d.row(a);
        order.sort_by_key(|&v| row[v]);
        let mut opening = vec![FixedBitSet::with_capacity(k); n];
        for &t in &order[1..] {
            let mut acc = FixedBitSet::with_capacity(k);
            for &(p, e) in g.incident(t) {
                if row[p] + 1 != row[t] {
                    continue;
                }
                let c = cp.class_of(e);
                if p == a {
                    acc.insert(c);
                } else {
                    if opening[p].contains(c) {
                        second_violation = Some((a.min(t), a.max(t)));
                        break 'sources;
                    }
                    acc.union_with(&opening[p]);
                }
            }
            opening[t] = acc;
        }
    }

    CutConditionReport {
        some_path_crosses_once: ConditionOutcome {
            holds: first_violation.is_none(),
            violation: first_violation,
        },
        every_path_crosses_once: ConditionOutcome {
            holds: second_violation.is_none(),
            violation: second_violation,
        },
    }
}
