//! Posets, their linear extension graphs, and dimension as a hull number.
//!
//! Linear extensions are the vertices of `G_L(P)`, adjacent when they differ
//! by swapping two neighboring elements. Every incomparable pair gives one
//! cut (the edges swapping that pair), realizers are exactly the hull sets,
//! and so `dim(P)` is the hull number of `G_L(P)`.

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::graph::Graph;
use crate::hullnum::{hull_number_exact_with, next_combination, HullError};
use crate::pcube::{recognize, PartialCube, Rejection};
use crate::satred::next_permutation;
use crate::BoundExceeded;

pub const MAX_EXTENSIONS: usize = 1_000_000;
pub const MAX_ELEMENTS: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("element {element} is outside 0..{n}")]
    ElementOutOfRange { element: usize, n: usize },
    #[error("relations force {a} < {b} and {b} < {a}")]
    Cycle { a: usize, b: usize },
    #[error("sequence {index} is not a linear extension")]
    NotExtension { index: usize },
    #[error("linear extension graph is not a partial cube: {0}")]
    NotPartialCube(Rejection),
    #[error("linear extension graph cuts do not match the incomparable pairs")]
    CutPairMismatch,
    #[error("extensions {a} and {b} are at distance {distance} but disagree on {discordant} pairs")]
    DistanceMismatch {
        a: usize,
        b: usize,
        distance: u32,
        discordant: usize,
    },
    #[error("dimension {dimension} exceeds the bound {bound} ({what})")]
    BoundViolated {
        what: &'static str,
        dimension: usize,
        bound: usize,
    },
    #[error("hull set does not decode to a realizer")]
    NotRealizer,
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Hull(#[from] HullError),
}

/// Elements `0..n` with a reflexive, antisymmetric, transitive order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Poset {
    n: usize,
    /// Row-major `n * n`; `leq[a * n + b]` iff `a <= b`.
    leq: Vec<bool>,
}

impl Poset {
    /// Transitive closure of the strict relations `u < v`.
    pub fn from_relations(n: usize, relations: &[(usize, usize)]) -> Result<Self, PosetError> {
        if n > MAX_ELEMENTS {
            return Err(BoundExceeded::new("poset elements", MAX_ELEMENTS, n).into());
        }
        let mut leq = vec![false; n * n];
        for a in 0..n {
            leq[a * n + a] = true;
        }
        for &(u, v) in relations {
            for element in [u, v] {
                if element >= n {
                    return Err(PosetError::ElementOutOfRange { element, n });
                }
            }
            leq[u * n + v] = true;
        }
        for k in 0..n {
            for a in 0..n {
                if leq[a * n + k] {
                    for b in 0..n {
                        if leq[k * n + b] {
                            leq[a * n + b] = true;
                        }
                    }
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a * n + b] && leq[b * n + a] {
                    return Err(PosetError::Cycle { a, b });
                }
            }
        }
        for a in 0..n {
            if relations.contains(&(a, a)) {
                return Err(PosetError::Cycle { a, b: a });
            }
        }
        Ok(Poset { n, leq })
    }

    pub fn chain(n: usize) -> Self {
        let rel: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_relations(n, &rel).expect("a chain is acyclic")
    }

    pub fn antichain(n: usize) -> Self {
        Self::from_relations(n, &[]).expect("no relations")
    }

    /// `a_i = i` and `b_i = k + i`, with `a_i < b_j` exactly when `i != j`.
    pub fn standard_example(k: usize) -> Self {
        let mut rel = Vec::new();
        for i in 0..k {
            for j in 0..k {
                if i != j {
                    rel.push((i, k + j));
                }
            }
        }
        Self::from_relations(2 * k, &rel).expect("bipartite orders are acyclic")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn leq(&self, a: usize, b: usize) -> bool {
        self.leq[a * self.n + b]
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        a != b && self.leq(a, b)
    }

    pub fn comparable(&self, a: usize, b: usize) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }

    /// Pairs `(a, b)` with `a < b` as integers and incomparable in the order.
    pub fn incomparable_pairs(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in a + 1..self.n {
                if !self.comparable(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Cover relations `a < b` with nothing strictly between.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            for b in 0..self.n {
                if self.less(a, b) && !(0..self.n).any(|c| self.less(a, c) && self.less(c, b)) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    pub fn is_linear_extension(&self, order: &[usize]) -> bool {
        if order.len() != self.n {
            return false;
        }
        let mut pos = vec![usize::MAX; self.n];
        for (i, &x) in order.iter().enumerate() {
            if x >= self.n || pos[x] != usize::MAX {
                return false;
            }
            pos[x] = i;
        }
        (0..self.n).all(|a| (0..self.n).all(|b| !self.less(a, b) || pos[a] < pos[b]))
    }

    fn relabel(&self, perm: &[usize]) -> Poset {
        let n = self.n;
        let mut leq = vec![false; n * n];
        for a in 0..n {
            for b in 0..n {
                leq[perm[a] * n + perm[b]] = self.leq(a, b);
            }
        }
        Poset { n, leq }
    }
}

/// First line `n`; every further non-comment line `u v` means `u < v`.
pub fn parse_poset(text: &str) -> Result<Poset, PosetError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (line, first) = lines.next().ok_or(PosetError::Parse {
        line: 1,
        message: "missing element count".into(),
    })?;
    let n: usize = first.parse().map_err(|_| PosetError::Parse {
        line,
        message: format!("`{first}` is not an element count"),
    })?;
    let mut relations = Vec::new();
    for (line, l) in lines {
        let parts: Vec<&str> = l.split_whitespace().collect();
        let pair = match parts.as_slice() {
            [u, v] => u.parse().ok().zip(v.parse().ok()),
            _ => None,
        };
        relations.push(pair.ok_or(PosetError::Parse {
            line,
            message: "expected `u v`".into(),
        })?);
    }
    Poset::from_relations(n, &relations)
}

/// All linear extensions in lexicographic order, built by repeatedly
/// placing the smallest available minimal element first.
pub fn linear_extensions(p: &Poset) -> Result<Vec<Vec<usize>>, PosetError> {
    let n = p.n();
    let mut preds = vec![0usize; n];
    for a in 0..n {
        for b in 0..n {
            if p.less(a, b) {
                preds[b] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let mut prefix = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    extend(p, &mut preds, &mut placed, &mut prefix, &mut out)?;
    Ok(out)
}

fn extend(
    p: &Poset,
    preds: &mut [usize],
    placed: &mut [bool],
    prefix: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) -> Result<(), PosetError> {
    let n = p.n();
    if prefix.len() == n {
        if out.len() == MAX_EXTENSIONS {
            return Err(BoundExceeded::new("linear extensions", MAX_EXTENSIONS, MAX_EXTENSIONS + 1).into());
        }
        out.push(prefix.clone());
        return Ok(());
    }
    for x in 0..n {
        if placed[x] || preds[x] > 0 {
            continue;
        }
        placed[x] = true;
        prefix.push(x);
        for y in 0..n {
            if p.less(x, y) {
                preds[y] -= 1;
            }
        }
        extend(p, preds, placed, prefix, out)?;
        for y in 0..n {
            if p.less(x, y) {
                preds[y] += 1;
            }
        }
        prefix.pop();
        placed[x] = false;
    }
    Ok(())
}

#[derive(Debug, Clone)]
pub struct LinearExtensionGraph {
    pub graph: Graph,
    /// Vertex `i` is the extension `extensions[i]`.
    pub extensions: Vec<Vec<usize>>,
    pub partial_cube: PartialCube,
    /// Incomparable pair reversed across each cut.
    pub pair_of_cut: Vec<(usize, usize)>,
}

/// Number of pairs ordered differently by two permutations of `0..n`.
pub fn discordant_pairs(a: &[usize], b: &[usize]) -> usize {
    let n = a.len();
    let mut pos_b = vec![0; n];
    for (i, &x) in b.iter().enumerate() {
        pos_b[x] = i;
    }
    let mut count = 0;
    for i in 0..n {
        for j in i + 1..n {
            if pos_b[a[i]] > pos_b[a[j]] {
                count += 1;
            }
        }
    }
    count
}

pub fn linext_graph(p: &Poset) -> Result<LinearExtensionGraph, PosetError> {
    let extensions = linear_extensions(p)?;
    let index: HashMap<&[usize], usize> = extensions.iter().enumerate().map(|(i, e)| (e.as_slice(), i)).collect();
    let mut edges = Vec::new();
    for (a, e) in extensions.iter().enumerate() {
        for i in 0..e.len().saturating_sub(1) {
            if p.comparable(e[i], e[i + 1]) {
                continue;
            }
            let mut swapped = e.clone();
            swapped.swap(i, i + 1);
            let b = index[swapped.as_slice()];
            if a < b {
                edges.push((a, b));
            }
        }
    }
    let graph = Graph::from_edges(extensions.len(), &edges).expect("linear extension graphs are connected");
    let partial_cube = recognize(&graph).map_err(PosetError::NotPartialCube)?;
    let mut pair_of_cut = Vec::with_capacity(partial_cube.cuts.len());
    for cut in partial_cube.cuts.cuts() {
        let (a, b) = graph.edge(cut.edges[0]);
        let i = (0..p.n())
            .find(|&i| extensions[a][i] != extensions[b][i])
            .expect("adjacent extensions differ");
        let (x, y) = (extensions[a][i], extensions[a][i + 1]);
        pair_of_cut.push((x.min(y), x.max(y)));
    }
    let mut sorted = pair_of_cut.clone();
    sorted.sort_unstable();
    if sorted != p.incomparable_pairs() {
        return Err(PosetError::CutPairMismatch);
    }
    check_distances(&extensions, &partial_cube)?;
    Ok(LinearExtensionGraph {
        graph,
        extensions,
        partial_cube,
        pair_of_cut,
    })
}

/// Graph distance equals the number of discordant pairs: exhaustively for
/// small graphs, otherwise on a fixed pseudo-random sample.
fn check_distances(extensions: &[Vec<usize>], pc: &PartialCube) -> Result<(), PosetError> {
    let n = extensions.len();
    let pairs: Vec<(usize, usize)> = if n <= 300 {
        (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        (0..20_000)
            .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
            .collect()
    };
    for (a, b) in pairs {
        let distance = pc.distances.get(a, b);
        let discordant = discordant_pairs(&extensions[a], &extensions[b]);
        if distance as usize != discordant {
            return Err(PosetError::DistanceMismatch {
                a,
                b,
                distance,
                discordant,
            });
        }
    }
    Ok(())
}

/// Every sequence must be a linear extension; the family realizes `p` when
/// each incomparable pair appears in both orders.
pub fn is_realizer(p: &Poset, exts: &[Vec<usize>]) -> Result<bool, PosetError> {
    if let Some(index) = exts.iter().position(|e| !p.is_linear_extension(e)) {
        return Err(PosetError::NotExtension { index });
    }
    if exts.is_empty() {
        return Ok(false);
    }
    let positions: Vec<Vec<usize>> = exts
        .iter()
        .map(|e| {
            let mut pos = vec![0; p.n()];
            for (i, &x) in e.iter().enumerate() {
                pos[x] = i;
            }
            pos
        })
        .collect();
    Ok(p.incomparable_pairs()
        .iter()
        .all(|&(a, b)| positions.iter().any(|pos| pos[a] < pos[b]) && positions.iter().any(|pos| pos[a] > pos[b])))
}

/// Smallest `k` such that some `k` extensions form a realizer.
pub fn dimension_bruteforce(p: &Poset) -> Result<usize, PosetError> {
    let exts = linear_extensions(p)?;
    for k in 1..=exts.len() {
        let mut combo: Vec<usize> = (0..k).collect();
        loop {
            let family: Vec<Vec<usize>> = combo.iter().map(|&i| exts[i].clone()).collect();
            if is_realizer(p, &family)? {
                return Ok(k);
            }
            if !next_combination(&mut combo, exts.len()) {
                break;
            }
        }
    }
    unreachable!("all extensions together realize the poset")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Dimension {
    pub dimension: usize,
    pub width: usize,
    pub num_extensions: usize,
    pub realizer: Vec<Vec<usize>>,
}

/// `floor(log2 n) + 1` for `n >= 1`.
pub fn log2_floor_plus_one(n: usize) -> usize {
    (usize::BITS - n.leading_zeros()) as usize
}

/// `ceil(log2 n)` for `n >= 1`.
pub fn log2_ceil(n: usize) -> usize {
    (usize::BITS - (n - 1).leading_zeros()) as usize
}

/// Hull number of `G_L(P)` with its witness decoded into a realizer.
///
/// Two bounds are asserted: `dim <= width` and, since every permutation of
/// a maximum antichain extends, `width! <= #extensions`, which gives
/// `dim <= floor(log2 #extensions) + 1`.
pub fn dimension_via_hull(p: &Poset) -> Result<Dimension, PosetError> {
    let lg = linext_graph(p)?;
    let hn = hull_number_exact_with(&lg.graph, &lg.partial_cube)?;
    let realizer: Vec<Vec<usize>> = hn.witness.iter().map(|v| lg.extensions[v].clone()).collect();
    if !is_realizer(p, &realizer)? {
        return Err(PosetError::NotRealizer);
    }
    let w = width(p);
    let num_extensions = lg.extensions.len();
    if hn.size > w {
        return Err(PosetError::BoundViolated {
            what: "width",
            dimension: hn.size,
            bound: w,
        });
    }
    let log_bound = log2_floor_plus_one(num_extensions);
    if hn.size > log_bound {
        return Err(PosetError::BoundViolated {
            what: "floor(log2 #extensions) + 1",
            dimension: hn.size,
            bound: log_bound,
        });
    }
    Ok(Dimension {
        dimension: hn.size,
        width: w,
        num_extensions,
        realizer,
    })
}

/// Largest antichain, as `n` minus a maximum matching between lower and
/// upper copies of the strict order (the size of a minimum chain cover).
pub fn width(p: &Poset) -> usize {
    let n = p.n();
    let mut match_of_upper = vec![usize::MAX; n];
    let mut matched = 0;
    for a in 0..n {
        let mut seen = vec![false; n];
        if augment(p, a, &mut seen, &mut match_of_upper) {
            matched += 1;
        }
    }
    n - matched
}

fn augment(p: &Poset, a: usize, seen: &mut [bool], match_of_upper: &mut [usize]) -> bool {
    for b in 0..p.n() {
        if p.less(a, b) && !seen[b] {
            seen[b] = true;
            if match_of_upper[b] == usize::MAX || augment(p, match_of_upper[b], seen, match_of_upper) {
                match_of_upper[b] = a;
                return true;
            }
        }
    }
    false
}

/// All posets on `n` elements up to isomorphism, each in the labeling that
/// minimizes its relation matrix.
pub fn all_posets(n: usize) -> Vec<Poset> {
    // Every poset has a labeling where a < b implies a < b as integers, so
    // strict relations can be drawn from the upper triangle.
    let slots: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let mut found = std::collections::BTreeSet::new();
    for mask in 0u64..1 << slots.len() {
        let rel: Vec<(usize, usize)> = (0..slots.len())
            .filter(|&i| mask >> i & 1 == 1)
            .map(|i| slots[i])
            .collect();
        let p = Poset::from_relations(n, &rel).expect("upper-triangular relations are acyclic");
        if p.leq.iter().filter(|&&x| x).count() != n + rel.len() {
            continue;
        }
        let mut perm: Vec<usize> = (0..n).collect();
        let mut best = p.clone();
        while next_permutation(&mut perm) {
            let q = p.relabel(&perm);
            if q < best {
                best = q;
            }
        }
        found.insert(best);
    }
    found.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Oracle: largest subset of pairwise incomparable elements.
    fn brute_width(p: &Poset) -> usize {
        (0u32..1 << p.n())
            .filter(|&mask| {
                let s: Vec<usize> = (0..p.n()).filter(|&i| mask >> i & 1 == 1).collect();
                s.iter().all(|&a| s.iter().all(|&b| a == b || !p.comparable(a, b)))
            })
            .map(|mask| mask.count_ones() as usize)
            .max()
            .unwrap()
    }

    #[test]
    fn parsing() {
        let c3 = parse_poset("3\n0 1\n1 2\n").unwrap();
        assert_eq!(c3, Poset::chain(3));
        assert!(c3.less(0, 2));
        assert_eq!(parse_poset("2").unwrap(), Poset::antichain(2));
        assert_eq!(parse_poset("2\n0 1\n1 0\n"), Err(PosetError::Cycle { a: 0, b: 1 }));
        assert!(matches!(
            parse_poset("2\n0 5\n"),
            Err(PosetError::ElementOutOfRange { .. })
        ));
        assert!(matches!(parse_poset("x"), Err(PosetError::Parse { line: 1, .. })));
    }

    #[test]
    fn extensions() {
        assert_eq!(linear_extensions(&Poset::chain(3)).unwrap(), vec![vec![0, 1, 2]]);
        assert_eq!(
            linear_extensions(&Poset::antichain(2)).unwrap(),
            vec![vec![0, 1], vec![1, 0]]
        );
        let s2 = linear_extensions(&Poset::standard_example(2)).unwrap();
        assert_eq!(s2.len(), 6);
        let mut sorted = s2.clone();
        sorted.sort();
        assert_eq!(sorted, s2);
    }

    #[test]
    fn graphs() {
        let a2 = linext_graph(&Poset::antichain(2)).unwrap();
        assert_eq!(
            (a2.graph.n(), a2.graph.m(), a2.pair_of_cut.clone()),
            (2, 1, vec![(0, 1)])
        );
        let c3 = linext_graph(&Poset::chain(3)).unwrap();
        assert_eq!((c3.graph.n(), c3.partial_cube.cuts.len()), (1, 0));
        let a3 = linext_graph(&Poset::antichain(3)).unwrap();
        assert_eq!((a3.graph.n(), a3.graph.m(), a3.partial_cube.cuts.len()), (6, 6, 3));
        assert!((0..6).all(|v| a3.graph.degree(v) == 2));
    }

    #[test]
    fn realizers() {
        let a2 = Poset::antichain(2);
        assert!(is_realizer(&a2, &[vec![0, 1], vec![1, 0]]).unwrap());
        assert!(!is_realizer(&a2, &[vec![0, 1]]).unwrap());
        let s2 = Poset::standard_example(2);
        // a0 b1 a1 b0 and a1 b0 a0 b1.
        assert!(is_realizer(&s2, &[vec![0, 3, 1, 2], vec![1, 2, 0, 3]]).unwrap());
        assert_eq!(
            is_realizer(&Poset::chain(2), &[vec![1, 0]]),
            Err(PosetError::NotExtension { index: 0 })
        );
    }

    #[test]
    fn dimensions() {
        assert_eq!(dimension_bruteforce(&Poset::chain(4)).unwrap(), 1);
        assert_eq!(dimension_bruteforce(&Poset::antichain(2)).unwrap(), 2);
        assert_eq!(dimension_bruteforce(&Poset::standard_example(3)).unwrap(), 3);
        let d = dimension_via_hull(&Poset::antichain(2)).unwrap();
        assert_eq!((d.dimension, d.realizer.clone()), (2, vec![vec![0, 1], vec![1, 0]]));
        assert_eq!(dimension_via_hull(&Poset::antichain(3)).unwrap().dimension, 2);
        assert_eq!(dimension_via_hull(&Poset::standard_example(3)).unwrap().dimension, 3);
        assert_eq!(dimension_via_hull(&Poset::chain(3)).unwrap().dimension, 1);
    }

    #[test]
    fn widths() {
        assert_eq!(width(&Poset::chain(3)), 1);
        assert_eq!(width(&Poset::antichain(3)), 3);
        assert_eq!(width(&Poset::standard_example(2)), 2);
        for p in all_posets(5) {
            assert_eq!(width(&p), brute_width(&p));
        }
    }

    #[test]
    fn poset_counts() {
        let counts: Vec<usize> = (0..=5).map(|n| all_posets(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
    }

    #[test]
    fn logarithms() {
        assert_eq!(
            (1..=9).map(log2_ceil).collect::<Vec<_>>(),
            vec![0, 1, 2, 2, 3, 3, 3, 3, 4]
        );
        assert_eq!(
            (1..=9).map(log2_floor_plus_one).collect::<Vec<_>>(),
            vec![1, 2, 2, 3, 3, 3, 3, 4, 4]
        );
    }

    #[test]
    fn discordance() {
        assert_eq!(discordant_pairs(&[0, 1, 2], &[2, 1, 0]), 3);
        assert_eq!(discordant_pairs(&[0, 1, 2], &[0, 2, 1]), 1);
    }
}
