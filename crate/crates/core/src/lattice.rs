//! Lattices of convex subgraphs.
//!
//! A lattice here is a family of vertex sets closed under intersection and
//! containing the full vertex set. Meet is intersection and the join of two
//! members is the smallest member containing their union. For the convex
//! sets of a graph this is `L_G`, whose atoms are the singletons; restricting
//! to the sets containing a base vertex `v` gives `L_G^v`.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::convexity::hull_closure;
use crate::graph::{all_pairs_distances, DistanceMatrix, Graph};
use crate::hullnum::next_combination;
use crate::pcube::recognize;
use crate::BoundExceeded;

/// General graphs above this size are not enumerated.
pub const GENERIC_VERTEX_LIMIT: usize = 20;

/// Enumeration stops once this many convex sets are found.
pub const MAX_ELEMENTS: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("the family is empty")]
    Empty,
    #[error("a member has width {found}, expected {expected}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("the family does not contain the full vertex set")]
    MissingTop,
    #[error("members {a:?} and {b:?} intersect outside the family")]
    NotIntersectionClosed { a: Vec<usize>, b: Vec<usize> },
    #[error("element {element} is not the join of the atoms below it")]
    NotAtomistic { element: usize },
    #[error("no atom set of size at most {bound} joins to the top")]
    LogBoundViolated { bound: usize },
    #[error("invalid lattice JSON: {0}")]
    Json(String),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexLattice {
    width: usize,
    /// Sorted by cardinality, then lexicographically.
    elements: Vec<VertexSet>,
    index: HashMap<VertexSet, usize>,
    upper: Vec<Vec<usize>>,
    lower: Vec<Vec<usize>>,
    atoms: Vec<usize>,
}

impl ConvexLattice {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn elements(&self) -> &[VertexSet] {
        &self.elements
    }

    pub fn element(&self, id: usize) -> &VertexSet {
        &self.elements[id]
    }

    pub fn id_of(&self, s: &VertexSet) -> Option<usize> {
        self.index.get(s).copied()
    }

    pub fn bottom(&self) -> usize {
        0
    }

    pub fn top(&self) -> usize {
        self.elements.len() - 1
    }

    pub fn atoms(&self) -> &[usize] {
        &self.atoms
    }

    pub fn upper_covers(&self, id: usize) -> &[usize] {
        &self.upper[id]
    }

    pub fn lower_covers(&self, id: usize) -> &[usize] {
        &self.lower[id]
    }

    /// Cover pairs `(lower, upper)` in ascending order.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        (0..self.len())
            .flat_map(|a| self.upper[a].iter().map(move |&b| (a, b)))
            .collect()
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.elements[a].is_subset(&self.elements[b])
    }

    pub fn meet(&self, a: usize, b: usize) -> usize {
        self.index[&self.elements[a].intersection(&self.elements[b])]
    }

    /// Smallest member containing `s`.
    pub fn closure_of(&self, s: &VertexSet) -> usize {
        let mut c = VertexSet::full(self.width);
        for e in &self.elements {
            if s.is_subset(e) {
                c.intersect_with(e);
            }
        }
        self.index[&c]
    }

    pub fn join(&self, a: usize, b: usize) -> usize {
        self.closure_of(&self.elements[a].union(&self.elements[b]))
    }

    /// Meet of a family; the top for the empty family.
    pub fn meet_all(&self, ids: &[usize]) -> usize {
        let mut s = VertexSet::full(self.width);
        for &i in ids {
            s.intersect_with(&self.elements[i]);
        }
        self.index[&s]
    }

    /// Join of a family; the bottom for the empty family.
    pub fn join_all(&self, ids: &[usize]) -> usize {
        let mut s = self.elements[self.bottom()].clone();
        for &i in ids {
            s.union_with(&self.elements[i]);
        }
        self.closure_of(&s)
    }

    /// The Hasse diagram as an undirected graph on element ids.
    pub fn hasse_graph(&self) -> Graph {
        Graph::from_edges(self.len(), &self.covers()).expect("a bounded lattice has a connected Hasse diagram")
    }

    pub fn to_json(&self) -> Value {
        json!({
            "width": self.width,
            "elements": self.elements,
            "covers": self.covers(),
            "atoms": self.atoms,
            "bottom": self.bottom(),
            "top": self.top(),
        })
    }

    /// Reads the `width` and `elements` of a lattice export; covers and
    /// atoms are recomputed.
    pub fn from_json(text: &str) -> Result<Self, LatticeError> {
        #[derive(Deserialize)]
        struct Export {
            width: usize,
            elements: Vec<Vec<usize>>,
        }
        let e: Export = serde_json::from_str(text).map_err(|err| LatticeError::Json(err.to_string()))?;
        let mut sets = Vec::with_capacity(e.elements.len());
        for ids in e.elements {
            if let Some(&bad) = ids.iter().find(|&&v| v >= e.width) {
                return Err(LatticeError::Json(format!("vertex {bad} outside width {}", e.width)));
            }
            sets.push(VertexSet::from_ids(e.width, ids));
        }
        build_lattice(e.width, sets)
    }
}

/// All convex vertex sets, the empty set included. Partial cubes use
/// intersections of cut sides; other graphs grow hulls one vertex at a time
/// and are limited to [`GENERIC_VERTEX_LIMIT`] vertices.
pub fn convex_subgraphs(g: &Graph) -> Result<Vec<VertexSet>, LatticeError> {
    let n = g.n();
    let mut found: HashSet<VertexSet> = HashSet::new();
    let mut queue = VecDeque::new();
    let push = |s: VertexSet, found: &mut HashSet<VertexSet>, queue: &mut VecDeque<VertexSet>| {
        if found.insert(s.clone()) {
            queue.push_back(s);
        }
        if found.len() > MAX_ELEMENTS {
            Err(BoundExceeded::new("convex sets", MAX_ELEMENTS, found.len()))
        } else {
            Ok(())
        }
    };
    match recognize(g) {
        Ok(pc) => {
            let sides: Vec<&VertexSet> = pc.cuts.cuts().iter().flat_map(|c| [&c.minus, &c.plus]).collect();
            push(VertexSet::full(n), &mut found, &mut queue)?;
            push(VertexSet::empty(n), &mut found, &mut queue)?;
            while let Some(s) = queue.pop_front() {
                for side in &sides {
                    push(s.intersection(side), &mut found, &mut queue)?;
                }
            }
        }
        Err(_) => {
            if n > GENERIC_VERTEX_LIMIT {
                return Err(
                    BoundExceeded::new("vertices for generic convex-set enumeration", GENERIC_VERTEX_LIMIT, n).into(),
                );
            }
            let d = all_pairs_distances(g);
            push(VertexSet::empty(n), &mut found, &mut queue)?;
            for v in 0..n {
                push(VertexSet::singleton(n, v), &mut found, &mut queue)?;
            }
            while let Some(s) = queue.pop_front() {
                if s.is_empty() {
                    continue;
                }
                for x in 0..n {
                    if !s.contains(x) {
                        let mut t = s.clone();
                        t.insert(x);
                        push(hull_closure(&d, &t).expect("non-empty"), &mut found, &mut queue)?;
                    }
                }
            }
        }
    }
    let mut sets: Vec<VertexSet> = found.into_iter().collect();
    sets.sort_by(|a, b| a.canonical_cmp(b));
    Ok(sets)
}

/// Orders the family canonically and computes the cover relation.
pub fn build_lattice(width: usize, sets: Vec<VertexSet>) -> Result<ConvexLattice, LatticeError> {
    if sets.is_empty() {
        return Err(LatticeError::Empty);
    }
    if let Some(s) = sets.iter().find(|s| s.width() != width) {
        return Err(LatticeError::WidthMismatch {
            expected: width,
            found: s.width(),
        });
    }
    let mut elements = sets;
    elements.sort_by(|a, b| a.canonical_cmp(b));
    elements.dedup();
    if !elements.last().unwrap().is_full() {
        return Err(LatticeError::MissingTop);
    }
    let index: HashMap<VertexSet, usize> = elements.iter().cloned().enumerate().map(|(i, s)| (s, i)).collect();
    for (i, a) in elements.iter().enumerate() {
        for b in &elements[i + 1..] {
            if !index.contains_key(&a.intersection(b)) {
                return Err(LatticeError::NotIntersectionClosed {
                    a: a.to_vec(),
                    b: b.to_vec(),
                });
            }
        }
    }
    // Strict supersets come later in canonical order; scanning them by size,
    // a superset is a cover unless it contains an already found cover.
    let k = elements.len();
    let mut upper = vec![Vec::new(); k];
    let mut lower = vec![Vec::new(); k];
    for a in 0..k {
        for b in a + 1..k {
            if elements[b].len() > elements[a].len()
                && elements[a].is_subset(&elements[b])
                && !upper[a].iter().any(|&c: &usize| elements[c].is_subset(&elements[b]))
            {
                upper[a].push(b);
                lower[b].push(a);
            }
        }
    }
    let atoms = upper[0].clone();
    Ok(ConvexLattice {
        width,
        elements,
        index,
        upper,
        lower,
        atoms,
    })
}

pub fn build_lattice_of(g: &Graph) -> Result<ConvexLattice, LatticeError> {
    build_lattice(g.n(), convex_subgraphs(g)?)
}

/// Convex sets containing `v`; the bottom is `{v}`.
pub fn build_lattice_above(g: &Graph, v: usize) -> Result<ConvexLattice, LatticeError> {
    let sets = convex_subgraphs(g)?.into_iter().filter(|s| s.contains(v)).collect();
    build_lattice(g.n(), sets)
}

/// Elements with exactly one upper cover.
pub fn meet_irreducibles(l: &ConvexLattice) -> Vec<usize> {
    (0..l.len()).filter(|&x| l.upper[x].len() == 1).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UldReport {
    pub uld: bool,
    /// First element without a unique minimal meet representation.
    pub witness: Option<usize>,
}

/// At every `x`, the meet-irreducibles above `x` that cannot be dropped
/// must already meet to `x`.
pub fn is_uld(l: &ConvexLattice) -> UldReport {
    let irreducible = meet_irreducibles(l);
    for x in 0..l.len() {
        let above: Vec<usize> = irreducible.iter().copied().filter(|&m| l.leq(x, m)).collect();
        debug_assert_eq!(l.meet_all(&above), x);
        let essential: Vec<usize> = (0..above.len())
            .filter(|&i| {
                let rest: Vec<usize> = above
                    .iter()
                    .enumerate()
                    .filter(|&(j, _)| j != i)
                    .map(|(_, &m)| m)
                    .collect();
                l.meet_all(&rest) != x
            })
            .map(|i| above[i])
            .collect();
        if l.meet_all(&essential) != x {
            return UldReport {
                uld: false,
                witness: Some(x),
            };
        }
    }
    UldReport {
        uld: true,
        witness: None,
    }
}

pub fn is_atomistic(l: &ConvexLattice) -> Result<(), LatticeError> {
    for e in 0..l.len() {
        let below: Vec<usize> = l.atoms.iter().copied().filter(|&a| l.leq(a, e)).collect();
        if l.join_all(&below) != e {
            return Err(LatticeError::NotAtomistic { element: e });
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeHullNumber {
    pub size: usize,
    /// Element ids of the atoms, lexicographically first among optima.
    pub atoms: Vec<usize>,
    /// Union of the atom sets; for `L_G` a minimum hull set of `G`.
    pub vertices: VertexSet,
}

/// Fewest atoms joining to the top, searched by increasing size up to
/// `floor(log2 |L|)`, the most a minimal such set can have.
pub fn hull_number_lattice(l: &ConvexLattice) -> Result<LatticeHullNumber, LatticeError> {
    is_atomistic(l)?;
    let bound = (usize::BITS - 1 - l.len().leading_zeros()) as usize;
    let found = |atoms: Vec<usize>| {
        let mut vertices = VertexSet::empty(l.width);
        for &a in &atoms {
            vertices.union_with(&l.elements[a]);
        }
        LatticeHullNumber {
            size: atoms.len(),
            atoms,
            vertices,
        }
    };
    if l.top() == l.bottom() {
        return Ok(found(Vec::new()));
    }
    let a = l.atoms.len();
    for k in 1..=bound.min(a) {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let ids: Vec<usize> = combo.iter().map(|&i| l.atoms[i]).collect();
            if l.join_all(&ids) == l.top() {
                return Ok(found(ids));
            }
            if !next_combination(&mut combo, a) {
                break;
            }
        }
    }
    Err(LatticeError::LogBoundViolated { bound })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckOutcome {
    pub holds: bool,
    /// A pair of vertices witnessing the failure.
    pub violation: Option<(usize, usize)>,
}

impl CheckOutcome {
    fn from_violation(violation: Option<(usize, usize)>) -> Self {
        CheckOutcome {
            holds: violation.is_none(),
            violation,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmbeddingReport {
    pub base: usize,
    pub injective: CheckOutcome,
    pub edges_to_covers: CheckOutcome,
    pub isometric: CheckOutcome,
}

impl EmbeddingReport {
    pub fn passed(&self) -> bool {
        self.injective.holds && self.edges_to_covers.holds && self.isometric.holds
    }
}

/// Checks `u -> conv{v, u}` against the Hasse diagram of `l`, which should
/// be `L_G^v`: injectivity, edges to covers, and distance preservation.
pub fn verify_embedding(g: &Graph, d: &DistanceMatrix, v: usize, l: &ConvexLattice) -> EmbeddingReport {
    let n = g.n();
    let phi: Vec<Option<usize>> = (0..n)
        .map(|u| {
            let hull = hull_closure(d, &VertexSet::from_ids(n, [v, u])).expect("non-empty");
            l.id_of(&hull)
        })
        .collect();
    let mut injective = None;
    let mut seen: HashMap<usize, usize> = HashMap::new();
    for u in 0..n {
        match phi[u] {
            None => {
                injective = Some((v, u));
                break;
            }
            Some(e) => {
                if let Some(&w) = seen.get(&e) {
                    injective = Some((w, u));
                    break;
                }
                seen.insert(e, u);
            }
        }
    }
    let is_cover = |a: usize, b: usize| l.upper[a].contains(&b) || l.upper[b].contains(&a);
    let edges_to_covers = g.edges().iter().copied().find(|&(a, b)| match (phi[a], phi[b]) {
        (Some(x), Some(y)) => !is_cover(x, y),
        _ => true,
    });
    let hasse = l.hasse_graph();
    let mut isometric = None;
    'outer: for a in 0..n {
        let Some(x) = phi[a] else {
            isometric = Some((a, a));
            break;
        };
        let dist = crate::graph::bfs_distances(&hasse, x);
        for b in 0..n {
            match phi[b] {
                Some(y) if dist[y] == d.get(a, b) => {}
                _ => {
                    isometric = Some((a, b));
                    break 'outer;
                }
            }
        }
    }
    EmbeddingReport {
        base: v,
        injective: CheckOutcome::from_violation(injective),
        edges_to_covers: CheckOutcome::from_violation(edges_to_covers),
        isometric: CheckOutcome::from_violation(isometric),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    /// Oracle: closure of every subset, deduplicated.
    fn brute_convex_sets(g: &Graph) -> Vec<Vec<usize>> {
        let n = g.n();
        let d = all_pairs_distances(g);
        let mut out = std::collections::BTreeSet::new();
        out.insert(Vec::new());
        for mask in 1u32..1 << n {
            let s = VertexSet::from_ids(n, (0..n).filter(|&v| mask >> v & 1 == 1));
            out.insert(hull_closure(&d, &s).unwrap().to_vec());
        }
        out.into_iter().collect()
    }

    fn ids(sets: &[VertexSet]) -> Vec<Vec<usize>> {
        let mut v: Vec<Vec<usize>> = sets.iter().map(VertexSet::to_vec).collect();
        v.sort();
        v
    }

    fn m3() -> ConvexLattice {
        let sets = [vec![], vec![0], vec![1], vec![2], vec![0, 1, 2]];
        build_lattice(
            3,
            sets.iter().map(|s| VertexSet::from_ids(3, s.iter().copied())).collect(),
        )
        .unwrap()
    }

    #[test]
    fn enumeration() {
        assert_eq!(convex_subgraphs(&generators::path(2)).unwrap().len(), 4);
        for g in [
            generators::cycle(4),
            generators::star(3),
            generators::complete_bipartite(2, 3),
            generators::cycle(5),
        ] {
            assert_eq!(ids(&convex_subgraphs(&g).unwrap()), brute_convex_sets(&g));
        }
        assert_eq!(convex_subgraphs(&generators::cycle(4)).unwrap().len(), 10);
        assert_eq!(convex_subgraphs(&generators::star(3)).unwrap().len(), 12);
    }

    #[test]
    fn lattice_structure() {
        let k2 = build_lattice_of(&generators::path(2)).unwrap();
        assert_eq!((k2.len(), k2.atoms().len(), k2.covers().len()), (4, 2, 4));
        let c4 = build_lattice_of(&generators::cycle(4)).unwrap();
        assert_eq!(c4.atoms().len(), 4);
        let atom = |v: usize| c4.id_of(&VertexSet::singleton(4, v)).unwrap();
        assert_eq!(c4.join(atom(0), atom(2)), c4.top());
        assert_eq!(c4.element(c4.join(atom(0), atom(1))).to_vec(), vec![0, 1]);
        assert_eq!(c4.meet(atom(0), atom(2)), c4.bottom());
        assert!(build_lattice(
            3,
            vec![
                VertexSet::from_ids(3, [0, 1]),
                VertexSet::from_ids(3, [1, 2]),
                VertexSet::full(3)
            ]
        )
        .is_err());
        assert_eq!(
            build_lattice(3, vec![VertexSet::empty(3)]),
            Err(LatticeError::MissingTop)
        );
    }

    #[test]
    fn lattices_above() {
        let k2 = build_lattice_above(&generators::path(2), 0).unwrap();
        assert_eq!(ids(k2.elements()), vec![vec![0], vec![0, 1]]);
        let c4 = build_lattice_above(&generators::cycle(4), 0).unwrap();
        assert_eq!(
            ids(c4.elements()),
            vec![vec![0], vec![0, 1], vec![0, 1, 2, 3], vec![0, 3]]
        );
        assert_eq!(build_lattice_above(&generators::star(3), 0).unwrap().len(), 8);
    }

    #[test]
    fn irreducibles() {
        let k2 = build_lattice_above(&generators::path(2), 0).unwrap();
        assert_eq!(meet_irreducibles(&k2), vec![k2.bottom()]);
        let c4 = build_lattice_above(&generators::cycle(4), 0).unwrap();
        let mi: Vec<Vec<usize>> = meet_irreducibles(&c4).iter().map(|&e| c4.element(e).to_vec()).collect();
        assert_eq!(mi, vec![vec![0, 1], vec![0, 3]]);
        let boolean = build_lattice_of(&generators::path(2)).unwrap();
        let mi: Vec<Vec<usize>> = meet_irreducibles(&boolean)
            .iter()
            .map(|&e| boolean.element(e).to_vec())
            .collect();
        assert_eq!(mi, vec![vec![0], vec![1]]);
    }

    #[test]
    fn uld() {
        let chain = build_lattice_above(&generators::path(4), 0).unwrap();
        assert!(is_uld(&chain).uld);
        assert!(is_uld(&build_lattice_above(&generators::cycle(4), 0).unwrap()).uld);
        let r = is_uld(&m3());
        assert_eq!((r.uld, r.witness), (false, Some(0)));
    }

    #[test]
    fn hull_numbers() {
        let h = |g: &Graph| hull_number_lattice(&build_lattice_of(g).unwrap()).unwrap();
        assert_eq!(h(&generators::path(2)).size, 2);
        let c4 = h(&generators::cycle(4));
        assert_eq!((c4.size, c4.vertices.to_vec()), (2, vec![0, 2]));
        assert_eq!(h(&generators::star(3)).size, 3);
        assert_eq!(h(&generators::path(1)).size, 1);
        assert!(matches!(
            hull_number_lattice(&m3()),
            Ok(LatticeHullNumber { size: 2, .. })
        ));
    }

    #[test]
    fn non_atomistic_is_rejected() {
        let chain3 = build_lattice(
            2,
            vec![VertexSet::empty(2), VertexSet::singleton(2, 0), VertexSet::full(2)],
        )
        .unwrap();
        assert_eq!(
            hull_number_lattice(&chain3),
            Err(LatticeError::NotAtomistic { element: 2 })
        );
    }

    #[test]
    fn embeddings() {
        for g in [generators::path(2), generators::cycle(4)] {
            let d = all_pairs_distances(&g);
            let l = build_lattice_above(&g, 0).unwrap();
            assert!(verify_embedding(&g, &d, 0, &l).passed());
        }
        let k23 = generators::complete_bipartite(2, 3);
        let d = all_pairs_distances(&k23);
        let failing = (0..5)
            .filter(|&v| !verify_embedding(&k23, &d, v, &build_lattice_above(&k23, v).unwrap()).passed())
            .count();
        assert!(failing > 0);
    }

    #[test]
    fn json_round_trip() {
        let l = build_lattice_of(&generators::cycle(4)).unwrap();
        let back = ConvexLattice::from_json(&l.to_json().to_string()).unwrap();
        assert_eq!(back, l);
        assert!(ConvexLattice::from_json("{\"width\": 1, \"elements\": [[3]]}").is_err());
    }
}
