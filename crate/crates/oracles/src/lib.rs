//! Brute-force reference implementations used to check `pcube-core`.
//!
//! Nothing here depends on the library under test: graphs are plain edge
//! lists, formulas are DIMACS-style literal lists and posets are given by
//! their order predicate. Everything is exponential and meant for inputs
//! with at most a few dozen elements.

use std::collections::VecDeque;

/// All-pairs BFS distances; `u32::MAX` marks unreachable pairs.
pub fn distances(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<u32>> {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    (0..n)
        .map(|s| {
            let mut d = vec![u32::MAX; n];
            d[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(u) = queue.pop_front() {
                for &w in &adj[u] {
                    if d[w] == u32::MAX {
                        d[w] = d[u] + 1;
                        queue.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

pub fn is_connected(n: usize, edges: &[(usize, usize)]) -> bool {
    n > 0 && distances(n, edges)[0].iter().all(|&x| x != u32::MAX)
}

fn theta(d: &[Vec<u32>], (a, b): (usize, usize), (x, y): (usize, usize)) -> bool {
    d[a][x] + d[b][y] != d[a][y] + d[b][x]
}

/// Winkler's characterization: a connected graph is a partial cube iff it
/// is bipartite and the Djoković relation Θ is transitive. Returns the
/// number of Θ classes, which is the isometric dimension.
pub fn partial_cube_dimension(n: usize, edges: &[(usize, usize)]) -> Option<usize> {
    let d = distances(n, edges);
    if d.iter().flatten().any(|&x| x == u32::MAX) {
        return None;
    }
    if edges.iter().any(|&(u, v)| (0..n).any(|w| d[u][w] == d[v][w])) {
        return None;
    }
    let mut class = vec![usize::MAX; edges.len()];
    let mut count = 0;
    for i in 0..edges.len() {
        if class[i] != usize::MAX {
            continue;
        }
        let members: Vec<usize> = (0..edges.len()).filter(|&j| theta(&d, edges[i], edges[j])).collect();
        for &j in &members {
            if class[j] != usize::MAX {
                return None;
            }
            class[j] = count;
        }
        for &a in &members {
            for &b in &members {
                if !theta(&d, edges[a], edges[b]) {
                    return None;
                }
            }
        }
        count += 1;
    }
    Some(count)
}

/// Geodesic closure by repeatedly adding every vertex on a shortest path
/// between two current members.
pub fn closure(d: &[Vec<u32>], seed: &[usize]) -> Vec<bool> {
    let n = d.len();
    let mut inside = vec![false; n];
    for &v in seed {
        inside[v] = true;
    }
    loop {
        let members: Vec<usize> = (0..n).filter(|&v| inside[v]).collect();
        let mut grew = false;
        for &u in &members {
            for &w in &members {
                for x in 0..n {
                    if !inside[x] && d[u][x] + d[x][w] == d[u][w] {
                        inside[x] = true;
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return inside;
        }
    }
}

pub fn is_convex(d: &[Vec<u32>], set: &[bool]) -> bool {
    let n = d.len();
    let members: Vec<usize> = (0..n).filter(|&v| set[v]).collect();
    members.iter().all(|&u| {
        members
            .iter()
            .all(|&w| (0..n).all(|x| set[x] || d[u][x] + d[x][w] != d[u][w]))
    })
}

/// Every convex vertex set, including the empty set, as sorted id lists.
pub fn convex_sets(d: &[Vec<u32>]) -> Vec<Vec<usize>> {
    let n = d.len();
    assert!(n < 32, "subset enumeration needs n < 32");
    (0u32..1 << n)
        .map(|mask| (0..n).map(|v| mask >> v & 1 == 1).collect::<Vec<bool>>())
        .filter(|bits| is_convex(d, bits))
        .map(|bits| (0..n).filter(|&v| bits[v]).collect())
        .collect()
}

/// Calls `visit` on every `k`-subset of `0..n` in lexicographic order until
/// it returns `true`; reports whether it did.
pub fn any_combination(n: usize, k: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if cur.len() == k {
            return visit(cur);
        }
        for v in start..n {
            cur.push(v);
            if go(v + 1, n, k, cur, visit) {
                return true;
            }
            cur.pop();
        }
        false
    }
    go(0, n, k, &mut Vec::new(), visit)
}

/// Smallest set whose geodesic closure is everything.
pub fn hull_number(d: &[Vec<u32>]) -> usize {
    let n = d.len();
    (1..=n)
        .find(|&k| any_combination(n, k, &mut |s| closure(d, s).iter().all(|&x| x)))
        .unwrap_or(n)
}

/// Size of a smallest set meeting every one of `sets`.
pub fn min_hitting_set(universe: usize, sets: &[Vec<usize>]) -> usize {
    assert!(universe < 32, "subset enumeration needs universe < 32");
    (0u32..1 << universe)
        .filter(|m| sets.iter().all(|s| s.iter().any(|&v| m >> v & 1 == 1)))
        .map(u32::count_ones)
        .min()
        .expect("the whole universe hits every non-empty set") as usize
}

/// Satisfiability by trying every assignment. Literals are DIMACS style:
/// `k` is variable `k` true, `-k` is variable `k` false.
pub fn satisfiable(num_vars: usize, clauses: &[Vec<i32>]) -> bool {
    (0u64..1 << num_vars).any(|mask| {
        clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&lit| (mask >> (lit.unsigned_abs() - 1) & 1 == 1) == (lit > 0))
        })
    })
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

/// Linear extensions of the order `leq` on `0..n`, by filtering all
/// permutations.
pub fn linear_extensions(n: usize, leq: &dyn Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    permutations(n)
        .into_iter()
        .filter(|order| (0..n).all(|i| (i + 1..n).all(|j| !leq(order[j], order[i]))))
        .collect()
}

/// Smallest number of linear extensions whose intersection is the order.
pub fn dimension(n: usize, leq: &dyn Fn(usize, usize) -> bool) -> usize {
    let exts = linear_extensions(n, leq);
    let positions: Vec<Vec<usize>> = exts
        .iter()
        .map(|e| {
            let mut pos = vec![0; n];
            for (i, &x) in e.iter().enumerate() {
                pos[x] = i;
            }
            pos
        })
        .collect();
    let incomparable: Vec<(usize, usize)> = (0..n)
        .flat_map(|a| (0..n).map(move |b| (a, b)))
        .filter(|&(a, b)| a != b && !leq(a, b) && !leq(b, a))
        .collect();
    if incomparable.is_empty() {
        return 1;
    }
    (2..=exts.len())
        .find(|&k| {
            any_combination(exts.len(), k, &mut |chosen| {
                incomparable
                    .iter()
                    .all(|&(a, b)| chosen.iter().any(|&e| positions[e][b] < positions[e][a]))
            })
        })
        .expect("all extensions together form a realizer")
}

/// Largest antichain, by subset enumeration.
pub fn width(n: usize, leq: &dyn Fn(usize, usize) -> bool) -> usize {
    (0u32..1 << n)
        .filter(|&mask| {
            (0..n).all(|a| (0..n).all(|b| a == b || mask >> a & 1 == 0 || mask >> b & 1 == 0 || !leq(a, b)))
        })
        .map(|mask| mask.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

pub fn ceil_log2(x: usize) -> usize {
    (0..).find(|&k| 1usize << k >= x).expect("finite")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Vec<(usize, usize)> {
        (0..n).map(|v| (v, (v + 1) % n)).collect()
    }

    #[test]
    fn winkler() {
        assert_eq!(partial_cube_dimension(6, &cycle(6)), Some(3));
        assert_eq!(partial_cube_dimension(5, &cycle(5)), None);
        let k23 = [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)];
        assert_eq!(partial_cube_dimension(5, &k23), None);
    }

    #[test]
    fn hulls_and_hull_numbers() {
        let d = distances(6, &cycle(6));
        assert_eq!(closure(&d, &[0, 2]), vec![true, true, true, false, false, false]);
        assert_eq!(hull_number(&d), 2);
        let star = distances(4, &[(0, 1), (0, 2), (0, 3)]);
        assert_eq!(hull_number(&star), 3);
        assert_eq!(convex_sets(&distances(2, &[(0, 1)])).len(), 4);
    }

    #[test]
    fn posets() {
        let antichain = |a: usize, b: usize| a == b;
        assert_eq!(linear_extensions(3, &antichain).len(), 6);
        assert_eq!(dimension(3, &antichain), 2);
        assert_eq!(width(3, &antichain), 3);
        let chain = |a: usize, b: usize| a <= b;
        assert_eq!(dimension(4, &chain), 1);
        // Standard example S_3: a_i < b_j for i != j.
        let s3 = |a: usize, b: usize| a == b || (a < 3 && b >= 3 && b - 3 != a);
        assert_eq!(dimension(6, &s3), 3);
    }

    #[test]
    fn sat_and_hitting() {
        assert!(satisfiable(2, &[vec![1, 2], vec![-1, -2]]));
        assert!(!satisfiable(1, &[vec![1], vec![-1]]));
        assert_eq!(min_hitting_set(4, &[vec![0, 1], vec![2], vec![1, 3]]), 2);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(5), 3);
    }
}
