//! Hull numbers: the cut-side hitting-set formulation, the one-sided
//! `h_v` variant, and a definition-level brute-force search.

use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::convexity::{hull_closure, hull_halfspace, ConvexityError};
use crate::graph::{DistanceMatrix, Graph};
use crate::hitting::{min_hitting_set, HittingError, HittingInstance, HittingSolution, SetOrigin, Side};
use crate::pcube::{recognize, CutPartition, PartialCube, Rejection};
use crate::{BoundExceeded, BRUTE_FORCE_LIMIT, EXACT_VERTEX_LIMIT};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HullError {
    #[error("not a partial cube: {0}")]
    NotPartialCube(Rejection),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Hitting(#[from] HittingError),
    #[error(transparent)]
    Convexity(#[from] ConvexityError),
    #[error("witness {0:?} does not generate the whole graph")]
    WitnessNotHull(VertexSet),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HullNumber {
    pub size: usize,
    pub witness: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct OneSidedHullNumber {
    pub size: usize,
    pub best_v: usize,
    pub witness: VertexSet,
    /// `h_v` for every vertex.
    pub per_vertex: Vec<usize>,
}

/// Both sides of every cut, minus side first.
pub fn hitting_instance(n: usize, cp: &CutPartition) -> HittingInstance {
    let mut sets = Vec::with_capacity(2 * cp.len());
    let mut origin = Vec::with_capacity(2 * cp.len());
    for (i, cut) in cp.cuts().iter().enumerate() {
        sets.push(cut.minus.clone());
        origin.push(SetOrigin {
            cut: i,
            side: Side::Minus,
        });
        sets.push(cut.plus.clone());
        origin.push(SetOrigin {
            cut: i,
            side: Side::Plus,
        });
    }
    HittingInstance {
        universe: n,
        sets,
        origin,
    }
}

/// The sides of every cut that do not contain `v`.
pub fn far_side_instance(n: usize, cp: &CutPartition, v: usize) -> HittingInstance {
    let mut sets = Vec::with_capacity(cp.len());
    let mut origin = Vec::with_capacity(cp.len());
    for (i, cut) in cp.cuts().iter().enumerate() {
        let side = if cut.plus.contains(v) { Side::Minus } else { Side::Plus };
        sets.push(cut.far_side(v).clone());
        origin.push(SetOrigin { cut: i, side });
    }
    HittingInstance {
        universe: n,
        sets,
        origin,
    }
}

fn check_exact_bound(n: usize) -> Result<(), BoundExceeded> {
    if n > EXACT_VERTEX_LIMIT {
        return Err(BoundExceeded::new(
            "vertices for exact hull number",
            EXACT_VERTEX_LIMIT,
            n,
        ));
    }
    Ok(())
}

pub fn hull_number_exact(g: &Graph) -> Result<HullNumber, HullError> {
    check_exact_bound(g.n())?;
    let pc = recognize(g).map_err(HullError::NotPartialCube)?;
    hull_number_exact_with(g, &pc)
}

/// Hull number of an already recognized partial cube.
pub fn hull_number_exact_with(g: &Graph, pc: &PartialCube) -> Result<HullNumber, HullError> {
    check_exact_bound(g.n())?;
    let n = g.n();
    let sol = min_hitting_set(&hitting_instance(n, &pc.cuts))?;
    // A single vertex has no cuts; its hull set is itself.
    let witness = if sol.size == 0 {
        VertexSet::singleton(n, 0)
    } else {
        sol.witness
    };
    if !hull_halfspace(&pc.cuts, &witness)?.is_full() {
        return Err(HullError::WitnessNotHull(witness));
    }
    Ok(HullNumber {
        size: witness.len(),
        witness,
    })
}

/// Minimum hitting set of the far sides `V \ C(v)`.
pub fn h_v(n: usize, cp: &CutPartition, v: usize) -> Result<HittingSolution, HullError> {
    check_exact_bound(n)?;
    Ok(min_hitting_set(&far_side_instance(n, cp, v))?)
}

pub fn hull_number_onesided(g: &Graph) -> Result<OneSidedHullNumber, HullError> {
    check_exact_bound(g.n())?;
    let pc = recognize(g).map_err(HullError::NotPartialCube)?;
    hull_number_onesided_with(g, &pc)
}

/// `min_v h_v + 1`; the smallest `v` attaining the minimum is reported.
pub fn hull_number_onesided_with(g: &Graph, pc: &PartialCube) -> Result<OneSidedHullNumber, HullError> {
    let n = g.n();
    let mut per_vertex = Vec::with_capacity(n);
    let mut best: Option<(usize, HittingSolution)> = None;
    for v in 0..n {
        let sol = h_v(n, &pc.cuts, v)?;
        per_vertex.push(sol.size);
        if best.as_ref().is_none_or(|(_, b)| sol.size < b.size) {
            best = Some((v, sol));
        }
    }
    let (best_v, sol) = best.expect("graph has a vertex");
    let mut witness = sol.witness;
    witness.insert(best_v);
    if !hull_halfspace(&pc.cuts, &witness)?.is_full() {
        return Err(HullError::WitnessNotHull(witness));
    }
    Ok(OneSidedHullNumber {
        size: sol.size + 1,
        best_v,
        witness,
        per_vertex,
    })
}

pub fn is_hull_set(d: &DistanceMatrix, s: &VertexSet) -> Result<bool, ConvexityError> {
    Ok(hull_closure(d, s)?.is_full())
}

/// Smallest hull set by increasing-size subset search with interval
/// closure. Works on any connected graph; refuses more than
/// [`BRUTE_FORCE_LIMIT`] vertices.
pub fn hull_number_brute(d: &DistanceMatrix) -> Result<HullNumber, HullError> {
    let n = d.n();
    if n > BRUTE_FORCE_LIMIT {
        return Err(BoundExceeded::new("vertices for brute-force hull number", BRUTE_FORCE_LIMIT, n).into());
    }
    for k in 1..=n {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let s = VertexSet::from_ids(n, combo.iter().copied());
            if is_hull_set(d, &s)? {
                return Ok(HullNumber { size: k, witness: s });
            }
            if !next_combination(&mut combo, n) {
                break;
            }
        }
    }
    unreachable!("the full vertex set is a hull set")
}

/// Advances `combo` to the next `k`-subset of `0..n` in lexicographic
/// order; false when exhausted.
pub(crate) fn next_combination(combo: &mut [usize], n: usize) -> bool {
    let k = combo.len();
    let mut i = k;
    while i > 0 {
        i -= 1;
        if combo[i] < n - k + i {
            combo[i] += 1;
            for j in i + 1..k {
                combo[j] = combo[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::all_pairs_distances;

    #[test]
    fn instances() {
        let c4 = recognize(&generators::cycle(4)).unwrap();
        let h = hitting_instance(4, &c4.cuts);
        assert_eq!(h.sets.len(), 4);
        assert!(h.sets.iter().all(|s| s.len() == 2));
        let q3 = recognize(&generators::hypercube(3)).unwrap();
        let h = hitting_instance(8, &q3.cuts);
        assert_eq!(h.sets.len(), 6);
        assert!(h.sets.iter().all(|s| s.len() == 4));
        let star = recognize(&generators::star(3)).unwrap();
        let mut sizes: Vec<usize> = hitting_instance(4, &star.cuts)
            .sets
            .iter()
            .map(VertexSet::len)
            .collect();
        sizes.sort();
        assert_eq!(sizes, vec![1, 1, 1, 3, 3, 3]);
    }

    #[test]
    fn exact_examples() {
        let q3 = hull_number_exact(&generators::hypercube(3)).unwrap();
        assert_eq!(q3.size, 2);
        assert_eq!(q3.witness.to_vec(), vec![0, 7]);
        let star = hull_number_exact(&generators::star(3)).unwrap();
        assert_eq!((star.size, star.witness.to_vec()), (3, vec![1, 2, 3]));
        assert_eq!(hull_number_exact(&generators::cycle(6)).unwrap().size, 2);
        let c4 = hull_number_exact(&generators::cycle(4)).unwrap();
        assert_eq!(c4.witness.to_vec(), vec![0, 2]);
        assert_eq!(hull_number_exact(&generators::path(1)).unwrap().size, 1);
        assert!(matches!(
            hull_number_exact(&generators::complete_bipartite(2, 3)),
            Err(HullError::NotPartialCube(_))
        ));
    }

    #[test]
    fn h_v_examples() {
        let c4 = recognize(&generators::cycle(4)).unwrap();
        let sol = h_v(4, &c4.cuts, 0).unwrap();
        assert_eq!((sol.size, sol.witness.to_vec()), (1, vec![2]));
        let q3 = recognize(&generators::hypercube(3)).unwrap();
        for v in 0..8 {
            let sol = h_v(8, &q3.cuts, v).unwrap();
            assert_eq!((sol.size, sol.witness.to_vec()), (1, vec![7 - v]));
        }
        let star = recognize(&generators::star(3)).unwrap();
        assert_eq!(h_v(4, &star.cuts, 0).unwrap().size, 3);
        assert_eq!(h_v(4, &star.cuts, 1).unwrap().size, 2);
    }

    #[test]
    fn onesided_examples() {
        let c4 = hull_number_onesided(&generators::cycle(4)).unwrap();
        assert_eq!((c4.size, c4.best_v), (2, 0));
        let star = hull_number_onesided(&generators::star(3)).unwrap();
        assert_eq!((star.size, star.best_v), (3, 1));
        assert_eq!(star.per_vertex, vec![3, 2, 2, 2]);
        assert_eq!(star.witness.to_vec(), vec![1, 2, 3]);
        assert_eq!(hull_number_onesided(&generators::hypercube(3)).unwrap().size, 2);
    }

    #[test]
    fn hull_set_checks() {
        let d = all_pairs_distances(&generators::cycle(4));
        assert!(is_hull_set(&d, &VertexSet::from_ids(4, [0, 2])).unwrap());
        let d = all_pairs_distances(&generators::hypercube(3));
        assert!(is_hull_set(&d, &VertexSet::from_ids(8, [0, 7])).unwrap());
        let d = all_pairs_distances(&generators::star(3));
        assert!(!is_hull_set(&d, &VertexSet::from_ids(4, [1, 2])).unwrap());
    }

    #[test]
    fn brute_force() {
        let d = all_pairs_distances(&generators::star(3));
        assert_eq!(hull_number_brute(&d).unwrap().size, 3);
        let d = all_pairs_distances(&generators::cycle(6));
        assert_eq!(hull_number_brute(&d).unwrap().witness.to_vec(), vec![0, 3]);
        let d = all_pairs_distances(&generators::path(25));
        assert!(matches!(hull_number_brute(&d), Err(HullError::Bound(_))));
    }

    #[test]
    fn combinations_are_lexicographic() {
        let mut c = vec![0, 1];
        let mut all = vec![c.clone()];
        while next_combination(&mut c, 4) {
            all.push(c.clone());
        }
        assert_eq!(
            all,
            vec![vec![0, 1], vec![0, 2], vec![0, 3], vec![1, 2], vec![1, 3], vec![2, 3]]
        );
    }
}
