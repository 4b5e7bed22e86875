//! Hull numbers of plane quadrangulations that are partial cubes.
//!
//! For a base vertex `v`, the far sides `V \ C(v)` of the cuts play the role
//! of curve interiors. Their intersection graph is chordal on the accepted
//! inputs, so a minimum clique cover (equal in size to a maximum independent
//! set) yields `h_v`, and a vertex common to all far sides of a clique hits
//! them at once. The hull number is `min_v h_v + 1`.
//!
//! Nothing here is taken on faith: chordality, witness existence and cover
//! optimality are all checked at runtime, and failures are reported with the
//! offending base vertex.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::convexity::hull_halfspace;
use crate::graph::Graph;
use crate::hullnum::{h_v, HullError};
use crate::pcube::{recognize, CutPartition, Rejection};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadError {
    #[error("not a partial cube: {0}")]
    NotPartialCube(Rejection),
    #[error("rotation system: {0}")]
    BadRotation(String),
    #[error("not a plane quadrangulation")]
    NotQuadrangulation(QuadReport),
    #[error("far-side intersection graph at base vertex {v} has the chordless cycle {cycle:?}")]
    NotChordal { v: usize, cycle: Vec<usize> },
    #[error("far sides of cuts {clique:?} at base vertex {v} share no vertex")]
    EmptyWitness { v: usize, clique: Vec<usize> },
    #[error("at base vertex {v}: clique cover gives {clique_cover}, exact hitting set gives {exact}")]
    CertificateMismatch {
        v: usize,
        clique_cover: usize,
        exact: usize,
    },
    #[error("witness {0:?} is not a hull set")]
    WitnessNotHull(VertexSet),
    #[error(transparent)]
    Hull(#[from] HullError),
}

/// Clockwise cyclic order of neighbors around every vertex.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RotationSystem {
    order: Vec<Vec<usize>>,
}

impl RotationSystem {
    pub fn new(g: &Graph, order: Vec<Vec<usize>>) -> Result<Self, QuadError> {
        if order.len() != g.n() {
            return Err(QuadError::BadRotation(format!(
                "{} rotations for {} vertices",
                order.len(),
                g.n()
            )));
        }
        for (v, rot) in order.iter().enumerate() {
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            if !sorted.iter().copied().eq(g.neighbors(v)) {
                return Err(QuadError::BadRotation(format!(
                    "rotation at vertex {v} is not a permutation of its neighbors"
                )));
            }
        }
        Ok(RotationSystem { order })
    }

    /// One line per vertex listing its neighbors in clockwise order; `#`
    /// starts a comment line.
    pub fn parse(g: &Graph, text: &str) -> Result<Self, QuadError> {
        let mut order = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let row: Result<Vec<usize>, _> = line.split_whitespace().map(str::parse).collect();
            order.push(row.map_err(|_| QuadError::BadRotation(format!("line {}: expected vertex ids", i + 1)))?);
        }
        Self::new(g, order)
    }

    pub fn order(&self) -> &[Vec<usize>] {
        &self.order
    }

    pub fn to_text(&self) -> String {
        self.order
            .iter()
            .map(|r| r.iter().map(usize::to_string).collect::<Vec<_>>().join(" ") + "\n")
            .collect()
    }

    /// Traces every face. The face after dart `u -> v` continues with
    /// `v -> w`, where `w` follows `u` in the rotation at `v`.
    pub fn faces(&self) -> Vec<Vec<usize>> {
        let mut seen: Vec<Vec<bool>> = self.order.iter().map(|r| vec![false; r.len()]).collect();
        let mut faces = Vec::new();
        for u in 0..self.order.len() {
            for i in 0..self.order[u].len() {
                if seen[u][i] {
                    continue;
                }
                let mut face = Vec::new();
                let (mut a, mut ai) = (u, i);
                while !seen[a][ai] {
                    seen[a][ai] = true;
                    face.push(a);
                    let b = self.order[a][ai];
                    let pos = self.order[b].iter().position(|&x| x == a).unwrap();
                    let bi = (pos + 1) % self.order[b].len();
                    a = b;
                    ai = bi;
                }
                faces.push(face);
            }
        }
        faces
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadReport {
    pub n: usize,
    pub m: usize,
    /// `m = 2n - 4`.
    pub euler_count: bool,
    /// Present when a rotation system was supplied.
    pub faces: Option<FaceCheck>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FaceCheck {
    pub count: usize,
    /// Face count matches a sphere embedding: `f = m - n + 2`.
    pub spherical: bool,
    pub all_quadrilaterals: bool,
}

impl QuadReport {
    pub fn passed(&self) -> bool {
        self.euler_count && self.faces.as_ref().is_none_or(|f| f.spherical && f.all_quadrilaterals)
    }
}

pub fn validate_quad(g: &Graph, rotation: Option<&RotationSystem>) -> QuadReport {
    let (n, m) = (g.n(), g.m());
    let faces = rotation.map(|rot| {
        let faces = rot.faces();
        FaceCheck {
            count: faces.len(),
            spherical: faces.len() + n == m + 2,
            all_quadrilaterals: faces.iter().all(|f| f.len() == 4),
        }
    });
    QuadReport {
        n,
        m,
        euler_count: m + 4 == 2 * n,
        faces,
    }
}

/// Cuts as nodes, adjacent when their far sides from `base` meet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionGraph {
    pub base: usize,
    pub far_side: Vec<VertexSet>,
    pub adj: Vec<Vec<usize>>,
}

impl IntersectionGraph {
    pub fn len(&self) -> usize {
        self.far_side.len()
    }

    pub fn is_empty(&self) -> bool {
        self.far_side.is_empty()
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.adj[a].binary_search(&b).is_ok()
    }
}

pub fn intersection_graph(cp: &CutPartition, base: usize) -> IntersectionGraph {
    let far_side: Vec<VertexSet> = cp.cuts().iter().map(|c| c.far_side(base).clone()).collect();
    let k = far_side.len();
    let mut adj = vec![Vec::new(); k];
    for a in 0..k {
        for b in a + 1..k {
            if far_side[a].intersects(&far_side[b]) {
                adj[a].push(b);
                adj[b].push(a);
            }
        }
    }
    IntersectionGraph { base, far_side, adj }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Chordality {
    /// A perfect elimination ordering.
    Peo(Vec<usize>),
    /// An induced cycle of length at least four.
    ChordlessCycle(Vec<usize>),
}

/// Maximum cardinality search; the reverse visit order is a perfect
/// elimination ordering exactly when the graph is chordal.
pub fn peo(ig: &IntersectionGraph) -> Chordality {
    let k = ig.len();
    let mut weight = vec![0usize; k];
    let mut visited = vec![false; k];
    let mut visit = Vec::with_capacity(k);
    for _ in 0..k {
        let x = (0..k)
            .filter(|&x| !visited[x])
            .max_by_key(|&x| (weight[x], std::cmp::Reverse(x)))
            .unwrap();
        visited[x] = true;
        visit.push(x);
        for &y in &ig.adj[x] {
            if !visited[y] {
                weight[y] += 1;
            }
        }
    }
    visit.reverse();
    if is_peo(ig, &visit) {
        Chordality::Peo(visit)
    } else {
        Chordality::ChordlessCycle(find_chordless_cycle(ig).expect("a graph without a PEO has a hole"))
    }
}

/// Every vertex's later neighbors must be adjacent to the earliest of them.
pub fn is_peo(ig: &IntersectionGraph, order: &[usize]) -> bool {
    let k = ig.len();
    let mut pos = vec![0; k];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    order.iter().all(|&x| {
        let later: Vec<usize> = ig.adj[x].iter().copied().filter(|&y| pos[y] > pos[x]).collect();
        match later.iter().min_by_key(|&&y| pos[y]) {
            None => true,
            Some(&p) => later.iter().all(|&y| y == p || ig.adjacent(p, y)),
        }
    })
}

/// For every node `x` and non-adjacent neighbors `y`, `z`, looks for a
/// shortest `y`-`z` path avoiding the rest of the closed neighborhood of
/// `x`; such a path closes an induced cycle through `x`.
fn find_chordless_cycle(ig: &IntersectionGraph) -> Option<Vec<usize>> {
    let k = ig.len();
    for x in 0..k {
        let nb = &ig.adj[x];
        for (i, &y) in nb.iter().enumerate() {
            for &z in &nb[i + 1..] {
                if ig.adjacent(y, z) {
                    continue;
                }
                let mut blocked = vec![false; k];
                blocked[x] = true;
                for &w in nb {
                    blocked[w] = w != y && w != z;
                }
                let mut parent = vec![usize::MAX; k];
                parent[y] = y;
                let mut queue = VecDeque::from([y]);
                while let Some(a) = queue.pop_front() {
                    if a == z {
                        break;
                    }
                    for &b in &ig.adj[a] {
                        if !blocked[b] && parent[b] == usize::MAX {
                            parent[b] = a;
                            queue.push_back(b);
                        }
                    }
                }
                if parent[z] != usize::MAX {
                    let mut path = vec![z];
                    while *path.last().unwrap() != y {
                        path.push(parent[*path.last().unwrap()]);
                    }
                    path.reverse();
                    let mut cycle = vec![x];
                    cycle.extend(path);
                    return Some(cycle);
                }
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CliqueCover {
    /// A partition of the nodes into cliques.
    pub cliques: Vec<Vec<usize>>,
    /// `witnesses[i]` lies in every far side of `cliques[i]`.
    pub witnesses: Vec<usize>,
    /// Pairwise non-adjacent nodes, one per clique.
    pub independent: Vec<usize>,
}

/// Greedy scan along a perfect elimination ordering: an unassigned node
/// joins the independent set and opens a clique with its unassigned later
/// neighbors. Both families end up the same size, which certifies the
/// cover as minimum.
pub fn min_clique_cover(ig: &IntersectionGraph, order: &[usize]) -> Result<CliqueCover, QuadError> {
    let k = ig.len();
    let mut pos = vec![0; k];
    for (i, &x) in order.iter().enumerate() {
        pos[x] = i;
    }
    let mut assigned = vec![false; k];
    let mut cliques = Vec::new();
    let mut independent = Vec::new();
    for &x in order {
        if assigned[x] {
            continue;
        }
        independent.push(x);
        let mut clique = vec![x];
        assigned[x] = true;
        for &y in &ig.adj[x] {
            if pos[y] > pos[x] && !assigned[y] {
                assigned[y] = true;
                clique.push(y);
            }
        }
        clique.sort_unstable();
        cliques.push(clique);
    }
    let mut witnesses = Vec::with_capacity(cliques.len());
    for clique in &cliques {
        let mut common = ig.far_side[clique[0]].clone();
        for &c in &clique[1..] {
            common.intersect_with(&ig.far_side[c]);
        }
        match common.first() {
            Some(w) => witnesses.push(w),
            None => {
                return Err(QuadError::EmptyWitness {
                    v: ig.base,
                    clique: clique.clone(),
                })
            }
        }
    }
    Ok(CliqueCover {
        cliques,
        witnesses,
        independent,
    })
}

#[derive(Debug, Clone)]
pub enum QuadMode {
    /// Faces traced from the rotation system must all be 4-cycles.
    Strict(RotationSystem),
    /// Topological checks are reported but not enforced; the runtime
    /// certificates decide, including agreement with the exact `h_v`.
    /// Vertices whose intersection graph is not chordal, or whose cliques
    /// lack a common far-side vertex, are set aside and listed.
    Trusted,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuadHullNumber {
    pub size: usize,
    pub best_v: usize,
    pub witness: VertexSet,
    /// `None` where the vertex was set aside in trusted mode.
    pub per_vertex: Vec<Option<usize>>,
    pub rejected: Vec<RejectedVertex>,
    pub report: QuadReport,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RejectedVertex {
    pub v: usize,
    pub reason: String,
}

/// `h_v` from the clique cover of the far-side intersection graph.
pub fn quad_h_v(cp: &CutPartition, v: usize) -> Result<(IntersectionGraph, CliqueCover), QuadError> {
    let ig = intersection_graph(cp, v);
    let order = match peo(&ig) {
        Chordality::Peo(order) => order,
        Chordality::ChordlessCycle(cycle) => return Err(QuadError::NotChordal { v, cycle }),
    };
    let cover = min_clique_cover(&ig, &order)?;
    Ok((ig, cover))
}

pub fn hull_number_quad(g: &Graph, mode: &QuadMode) -> Result<QuadHullNumber, QuadError> {
    let pc = recognize(g).map_err(QuadError::NotPartialCube)?;
    let rotation = match mode {
        QuadMode::Strict(rot) => Some(rot),
        QuadMode::Trusted => None,
    };
    let report = validate_quad(g, rotation);
    if matches!(mode, QuadMode::Strict(_)) && !report.passed() {
        return Err(QuadError::NotQuadrangulation(report));
    }
    let n = g.n();
    let mut per_vertex = Vec::with_capacity(n);
    let mut rejected = Vec::new();
    let mut first_rejection = None;
    let mut best: Option<(usize, CliqueCover)> = None;
    for v in 0..n {
        let cover = match (quad_h_v(&pc.cuts, v), mode) {
            (Ok((_, cover)), _) => cover,
            (Err(err @ (QuadError::NotChordal { .. } | QuadError::EmptyWitness { .. })), QuadMode::Trusted) => {
                rejected.push(RejectedVertex {
                    v,
                    reason: err.to_string(),
                });
                per_vertex.push(None);
                first_rejection.get_or_insert(err);
                continue;
            }
            (Err(err), _) => return Err(err),
        };
        let size = cover.cliques.len();
        if cover.independent.len() != size {
            return Err(QuadError::CertificateMismatch {
                v,
                clique_cover: size,
                exact: cover.independent.len(),
            });
        }
        if matches!(mode, QuadMode::Trusted) {
            let exact = h_v(n, &pc.cuts, v)?.size;
            if exact != size {
                return Err(QuadError::CertificateMismatch {
                    v,
                    clique_cover: size,
                    exact,
                });
            }
        }
        per_vertex.push(Some(size));
        if best.as_ref().is_none_or(|(_, b)| size < b.cliques.len()) {
            best = Some((v, cover));
        }
    }
    let Some((best_v, cover)) = best else {
        return Err(first_rejection.expect("every vertex was rejected"));
    };
    let mut witness = VertexSet::from_ids(n, cover.witnesses.iter().copied());
    witness.insert(best_v);
    if !hull_halfspace(&pc.cuts, &witness).map_err(HullError::from)?.is_full() {
        return Err(QuadError::WitnessNotHull(witness));
    }
    Ok(QuadHullNumber {
        size: cover.cliques.len() + 1,
        best_v,
        witness,
        per_vertex,
        rejected,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    fn ig_from_edges(k: usize, edges: &[(usize, usize)]) -> IntersectionGraph {
        let mut adj = vec![Vec::new(); k];
        for &(a, b) in edges {
            adj[a].push(b);
            adj[b].push(a);
        }
        for a in &mut adj {
            a.sort_unstable();
        }
        IntersectionGraph {
            base: 0,
            far_side: vec![VertexSet::full(1); k],
            adj,
        }
    }

    #[test]
    fn euler_counts() {
        assert!(validate_quad(&generators::cycle(4), None).euler_count);
        assert!(validate_quad(&generators::hypercube(3), None).euler_count);
        assert!(!validate_quad(&generators::star(3), None).passed());
    }

    #[test]
    fn c4_faces() {
        let g = generators::cycle(4);
        let rot = RotationSystem::new(&g, vec![vec![1, 3], vec![2, 0], vec![3, 1], vec![0, 2]]).unwrap();
        let report = validate_quad(&g, Some(&rot));
        assert_eq!(
            report.faces,
            Some(FaceCheck {
                count: 2,
                spherical: true,
                all_quadrilaterals: true
            })
        );
        assert!(RotationSystem::parse(&g, "1 3\n2 0\n3 1\n0 2\n").is_ok());
        assert!(RotationSystem::parse(&g, "1 2\n2 0\n3 1\n0 2\n").is_err());
    }

    #[test]
    fn intersection_graph_examples() {
        let c4 = recognize(&generators::cycle(4)).unwrap();
        let ig = intersection_graph(&c4.cuts, 0);
        assert_eq!(ig.adj, vec![vec![1], vec![0]]);
        let q3 = recognize(&generators::hypercube(3)).unwrap();
        for v in 0..8 {
            let ig = intersection_graph(&q3.cuts, v);
            assert!(ig.adj.iter().all(|a| a.len() == 2));
        }
        let star = recognize(&generators::star(3)).unwrap();
        let ig = intersection_graph(&star.cuts, 0);
        assert!(ig.adj.iter().all(Vec::is_empty));
    }

    #[test]
    fn peo_examples() {
        let k3 = ig_from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        assert!(matches!(peo(&k3), Chordality::Peo(_)));
        let c4 = ig_from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        match peo(&c4) {
            Chordality::ChordlessCycle(c) => assert_eq!(c.len(), 4),
            other => panic!("{other:?}"),
        }
        let c6_chord = ig_from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3)]);
        match peo(&c6_chord) {
            Chordality::ChordlessCycle(c) => assert_eq!(c.len(), 4),
            other => panic!("{other:?}"),
        }
        let empty = ig_from_edges(3, &[]);
        assert!(matches!(peo(&empty), Chordality::Peo(_)));
    }

    #[test]
    fn clique_covers() {
        let q3 = recognize(&generators::hypercube(3)).unwrap();
        let (_, cover) = quad_h_v(&q3.cuts, 0).unwrap();
        assert_eq!(cover.cliques.len(), 1);
        assert_eq!(cover.witnesses, vec![7]);
        assert_eq!(cover.independent.len(), 1);

        let star = recognize(&generators::star(3)).unwrap();
        let (_, cover) = quad_h_v(&star.cuts, 0).unwrap();
        assert_eq!(cover.cliques.len(), 3);
        let mut w = cover.witnesses.clone();
        w.sort();
        assert_eq!(w, vec![1, 2, 3]);

        let c4 = recognize(&generators::cycle(4)).unwrap();
        let (_, cover) = quad_h_v(&c4.cuts, 0).unwrap();
        assert_eq!((cover.cliques.len(), cover.witnesses.clone()), (1, vec![2]));
    }

    #[test]
    fn empty_witness_is_reported() {
        // Three pairwise-meeting sets with no common point.
        let mut ig = ig_from_edges(3, &[(0, 1), (1, 2), (0, 2)]);
        ig.far_side = vec![
            VertexSet::from_ids(3, [0, 1]),
            VertexSet::from_ids(3, [1, 2]),
            VertexSet::from_ids(3, [0, 2]),
        ];
        let Chordality::Peo(order) = peo(&ig) else { panic!() };
        assert!(matches!(
            min_clique_cover(&ig, &order),
            Err(QuadError::EmptyWitness { .. })
        ));
    }

    #[test]
    fn hull_numbers() {
        let c4 = generators::cycle(4);
        assert_eq!(hull_number_quad(&c4, &QuadMode::Trusted).unwrap().size, 2);
        let (q3, rot) = generators::zonohedron(3, 1);
        let r = hull_number_quad(&q3, &QuadMode::Strict(rot)).unwrap();
        assert_eq!(r.size, 2);
        let grid = generators::grid(2, 3);
        assert_eq!(hull_number_quad(&grid, &QuadMode::Trusted).unwrap().size, 2);
        let big = hull_number_quad(&generators::grid(3, 3), &QuadMode::Trusted).unwrap();
        assert_eq!(big.size, 2);
        assert_eq!(big.rejected.iter().map(|r| r.v).collect::<Vec<_>>(), vec![4]);
        assert_eq!(big.per_vertex[4], None);
        assert!(matches!(
            hull_number_quad(
                &generators::star(3),
                &QuadMode::Strict(
                    RotationSystem::new(&generators::star(3), vec![vec![1, 2, 3], vec![0], vec![0], vec![0]]).unwrap()
                )
            ),
            Err(QuadError::NotQuadrangulation(_))
        ));
    }
}
