//! Exact minimum hitting set by depth-first branch and bound.
//!
//! Branching picks the unhit set with the fewest admissible vertices and
//! tries its vertices in ascending order. The lower bound is the size of a
//! greedily packed family of pairwise disjoint unhit sets; the first
//! incumbent comes from greedy max-coverage. Once the optimum size is known
//! a second pass fixes the witness to the lexicographically smallest optimal
//! set, so the answer does not depend on search order.

use fixedbitset::FixedBitSet;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::{BoundExceeded, EXACT_VERTEX_LIMIT};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Plus,
    Minus,
}

/// Where a set of a hitting instance came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SetOrigin {
    pub cut: usize,
    pub side: Side,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HittingInstance {
    pub universe: usize,
    pub sets: Vec<VertexSet>,
    pub origin: Vec<SetOrigin>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HittingSolution {
    pub size: usize,
    pub witness: VertexSet,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HittingError {
    #[error("set {0} of the instance is empty and cannot be hit")]
    EmptyMember(usize),
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
}

pub fn min_hitting_set(h: &HittingInstance) -> Result<HittingSolution, HittingError> {
    if h.universe > EXACT_VERTEX_LIMIT {
        return Err(BoundExceeded::new("vertices for exact hitting set", EXACT_VERTEX_LIMIT, h.universe).into());
    }
    if let Some(i) = h.sets.iter().position(VertexSet::is_empty) {
        return Err(HittingError::EmptyMember(i));
    }
    let solver = Solver::new(h.universe, &h.sets);
    let ids = solver.solve();
    Ok(HittingSolution {
        size: ids.len(),
        witness: VertexSet::from_ids(h.universe, ids),
    })
}

struct Solver {
    n: usize,
    /// Inclusion-minimal distinct sets, ascending by size.
    sets: Vec<VertexSet>,
    /// `containing[v]`: indices of sets that contain `v`.
    containing: Vec<FixedBitSet>,
}

impl Solver {
    fn new(n: usize, input: &[VertexSet]) -> Self {
        let mut sorted: Vec<VertexSet> = input.to_vec();
        sorted.sort_by(|a, b| a.canonical_cmp(b));
        sorted.dedup();
        // Hitting a subset hits every superset, so supersets are redundant.
        let mut sets: Vec<VertexSet> = Vec::new();
        for s in sorted {
            if !sets.iter().any(|t| t.is_subset(&s)) {
                sets.push(s);
            }
        }
        let mut containing = vec![FixedBitSet::with_capacity(sets.len()); n];
        for (i, s) in sets.iter().enumerate() {
            for v in s.iter() {
                containing[v].insert(i);
            }
        }
        Solver { n, sets, containing }
    }

    fn all_unhit(&self) -> FixedBitSet {
        let mut u = FixedBitSet::with_capacity(self.sets.len());
        u.insert_range(..);
        u
    }

    fn greedy(&self) -> Vec<usize> {
        let mut unhit = self.all_unhit();
        let mut chosen = Vec::new();
        while !unhit.is_clear() {
            let best = (0..self.n)
                .max_by_key(|&v| {
                    let gain = self.containing[v].intersection(&unhit).count();
                    // Prefer the smallest id among ties.
                    (gain, std::cmp::Reverse(v))
                })
                .expect("non-empty universe");
            unhit.difference_with(&self.containing[best]);
            chosen.push(best);
        }
        chosen.sort_unstable();
        chosen
    }

    fn admissible(&self, set: usize, min_vertex: usize) -> impl Iterator<Item = usize> + '_ {
        self.sets[set].iter().skip_while(move |&v| v < min_vertex)
    }

    fn packing_bound(&self, unhit: &FixedBitSet, min_vertex: usize) -> usize {
        let mut used = VertexSet::empty(self.n);
        let mut count = 0;
        for i in unhit.ones() {
            if self.admissible(i, min_vertex).all(|v| !used.contains(v)) {
                count += 1;
                for v in self.admissible(i, min_vertex) {
                    used.insert(v);
                }
            }
        }
        count
    }

    /// Searches for a hitting set of `unhit` using vertices `>= min_vertex`
    /// with fewer than `*limit` additional vertices. Every improvement is
    /// stored in `best` and tightens `limit`. Returns true when
    /// `stop_at_first` is set and a solution was found.
    fn dfs(
        &self,
        unhit: &FixedBitSet,
        min_vertex: usize,
        chosen: &mut Vec<usize>,
        limit: &mut usize,
        best: &mut Option<Vec<usize>>,
        stop_at_first: bool,
    ) -> bool {
        if unhit.is_clear() {
            *limit = chosen.len();
            *best = Some(chosen.clone());
            return stop_at_first;
        }
        if chosen.len() + self.packing_bound(unhit, min_vertex) >= *limit {
            return false;
        }
        let pivot = unhit
            .ones()
            .min_by_key(|&i| (self.admissible(i, min_vertex).count(), i))
            .unwrap();
        let candidates: Vec<usize> = self.admissible(pivot, min_vertex).collect();
        for v in candidates {
            let mut rest = unhit.clone();
            rest.difference_with(&self.containing[v]);
            chosen.push(v);
            let stop = self.dfs(&rest, min_vertex, chosen, limit, best, stop_at_first);
            chosen.pop();
            if stop {
                return true;
            }
        }
        false
    }

    fn solve(&self) -> Vec<usize> {
        if self.sets.is_empty() {
            return Vec::new();
        }
        let incumbent = self.greedy();
        let mut limit = incumbent.len();
        let mut best = None;
        self.dfs(&self.all_unhit(), 0, &mut Vec::new(), &mut limit, &mut best, false);
        let k = best.map_or(incumbent.len(), |b| b.len());
        self.lex_smallest(k)
    }

    /// Lexicographically smallest hitting set of the optimal size `k`, built
    /// one element at a time: the next element is the smallest vertex after
    /// which the remaining sets can still be hit within budget.
    fn lex_smallest(&self, k: usize) -> Vec<usize> {
        let mut prefix = Vec::with_capacity(k);
        let mut unhit = self.all_unhit();
        let mut from = 0;
        while prefix.len() < k {
            let remaining = k - prefix.len() - 1;
            let next = (from..self.n)
                .find(|&v| {
                    let mut rest = unhit.clone();
                    rest.difference_with(&self.containing[v]);
                    let mut limit = remaining + 1;
                    let mut found = None;
                    rest.is_clear() || self.dfs(&rest, v + 1, &mut Vec::new(), &mut limit, &mut found, true)
                })
                .expect("an optimal hitting set exists");
            unhit.difference_with(&self.containing[next]);
            prefix.push(next);
            from = next + 1;
            if unhit.is_clear() {
                break;
            }
        }
        debug_assert!(unhit.is_clear());
        prefix
    }
}
