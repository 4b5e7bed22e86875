//! Geodesic convex hulls.
//!
//! Two independent routes: intersecting cut sides (valid on partial cubes)
//! and closing under shortest-path intervals (valid on any connected graph).

use thiserror::Error;

use crate::bitset::VertexSet;
use crate::graph::DistanceMatrix;
use crate::pcube::CutPartition;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConvexityError {
    #[error("vertex set is empty")]
    EmptySet,
}

/// Intersection over all cuts of `C(s)`.
pub fn hull_halfspace(cp: &CutPartition, s: &VertexSet) -> Result<VertexSet, ConvexityError> {
    if s.is_empty() {
        return Err(ConvexityError::EmptySet);
    }
    let mut hull = VertexSet::full(s.width());
    for cut in cp.cuts() {
        if s.is_subset(&cut.plus) {
            hull.intersect_with(&cut.plus);
        } else if s.is_subset(&cut.minus) {
            hull.intersect_with(&cut.minus);
        }
    }
    Ok(hull)
}

/// Least superset of `s` containing `interval(u, w)` for all its members.
///
/// Pairs are processed semi-naively: a round only looks at pairs involving
/// a vertex added in the previous round.
pub fn hull_closure(d: &DistanceMatrix, s: &VertexSet) -> Result<VertexSet, ConvexityError> {
    if s.is_empty() {
        return Err(ConvexityError::EmptySet);
    }
    let mut hull = s.clone();
    let mut fresh: Vec<usize> = s.to_vec();
    while !fresh.is_empty() {
        let members: Vec<usize> = hull.to_vec();
        let mut grown = hull.clone();
        for &u in &fresh {
            for &w in &members {
                if u != w {
                    grown.union_with(&d.interval(u, w));
                }
            }
        }
        fresh = grown.difference(&hull).to_vec();
        hull = grown;
    }
    Ok(hull)
}

pub fn is_convex(d: &DistanceMatrix, s: &VertexSet) -> Result<bool, ConvexityError> {
    Ok(hull_closure(d, s)? == *s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::all_pairs_distances;
    use crate::pcube::recognize;
    use proptest::prelude::*;

    /// Brute-force oracle: repeatedly add every vertex lying on a shortest
    /// path between two members, found by enumerating all shortest paths.
    fn oracle_hull(g: &crate::graph::Graph, s: &[usize]) -> Vec<usize> {
        let d = all_pairs_distances(g);
        let mut set: std::collections::BTreeSet<usize> = s.iter().copied().collect();
        loop {
            let mut next = set.clone();
            for &u in &set {
                for &w in &set {
                    // DFS over all walks of length d(u,w) from u to w.
                    let target = d.get(u, w);
                    let mut stack = vec![(u, vec![u])];
                    while let Some((v, path)) = stack.pop() {
                        if path.len() as u32 - 1 == target {
                            if v == w {
                                next.extend(path.iter().copied());
                            }
                            continue;
                        }
                        for x in g.neighbors(v) {
                            let mut p = path.clone();
                            p.push(x);
                            stack.push((x, p));
                        }
                    }
                }
            }
            if next == set {
                return set.into_iter().collect();
            }
            set = next;
        }
    }

    #[test]
    fn halfspace_examples() {
        let q3 = generators::hypercube(3);
        let pc = recognize(&q3).unwrap();
        let s = VertexSet::from_ids(8, [0b000, 0b011]);
        let h = hull_halfspace(&pc.cuts, &s).unwrap();
        assert_eq!(h.to_vec(), oracle_hull(&q3, &[0, 3]));
        assert_eq!(h.to_vec(), vec![0b000, 0b001, 0b010, 0b011]);
        assert_eq!(
            hull_halfspace(&pc.cuts, &VertexSet::singleton(8, 5)).unwrap().to_vec(),
            vec![5]
        );
        let c4 = generators::cycle(4);
        let pc = recognize(&c4).unwrap();
        let h = hull_halfspace(&pc.cuts, &VertexSet::from_ids(4, [0, 2])).unwrap();
        assert_eq!(h.to_vec(), oracle_hull(&c4, &[0, 2]));
        assert!(h.is_full());
    }

    #[test]
    fn closure_examples() {
        let star = generators::star(3);
        let d = all_pairs_distances(&star);
        let h = hull_closure(&d, &VertexSet::from_ids(4, [1, 2])).unwrap();
        assert_eq!(h.to_vec(), oracle_hull(&star, &[1, 2]));
        assert_eq!(h.to_vec(), vec![0, 1, 2]);

        let p5 = generators::path(5);
        let d = all_pairs_distances(&p5);
        assert!(hull_closure(&d, &VertexSet::from_ids(5, [0, 4])).unwrap().is_full());

        let k23 = generators::complete_bipartite(2, 3);
        let d = all_pairs_distances(&k23);
        let h = hull_closure(&d, &VertexSet::from_ids(5, [0, 1])).unwrap();
        assert_eq!(h.to_vec(), oracle_hull(&k23, &[0, 1]));
        assert!(h.is_full());
    }

    #[test]
    fn convexity_tests() {
        let d = all_pairs_distances(&generators::hypercube(3));
        assert!(is_convex(&d, &VertexSet::from_ids(8, [0, 1, 2, 3])).unwrap());
        let d6 = all_pairs_distances(&generators::cycle(6));
        assert!(!is_convex(&d6, &VertexSet::from_ids(6, [0, 3])).unwrap());
        assert!(is_convex(&d6, &VertexSet::full(6)).unwrap());
        assert_eq!(is_convex(&d6, &VertexSet::empty(6)), Err(ConvexityError::EmptySet));
    }

    fn arb_set(n: usize) -> impl Strategy<Value = VertexSet> {
        proptest::collection::vec(0..n, 1..5).prop_map(move |ids| VertexSet::from_ids(n, ids))
    }

    proptest! {
        #[test]
        fn hull_axioms(s in arb_set(16), t in arb_set(16)) {
            let g = generators::grid(4, 4);
            let pc = recognize(&g).unwrap();
            let d = &pc.distances;
            let hs = hull_closure(d, &s).unwrap();
            prop_assert_eq!(&hs, &hull_halfspace(&pc.cuts, &s).unwrap());
            prop_assert!(s.is_subset(&hs));
            prop_assert_eq!(&hull_closure(d, &hs).unwrap(), &hs);
            let st = s.union(&t);
            prop_assert!(hs.is_subset(&hull_halfspace(&pc.cuts, &st).unwrap()));
            let ht = hull_closure(d, &t).unwrap();
            let meet = hs.intersection(&ht);
            if !meet.is_empty() {
                prop_assert!(is_convex(d, &meet).unwrap());
            }
        }
    }
}
