//! Named graph families used by the instance corpus and the tests.
//!
//! Arrangement-based families (zonohedra and affine line arrangements) are
//! built from sign vectors: every region of a simple arrangement touches at
//! least one crossing point, and the four regions around the crossing of
//! elements `i` and `j` share the signs of all other elements at that point.

use std::collections::{BTreeSet, HashSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::graph::Graph;
use crate::planarquad::RotationSystem;

fn build(n: usize, edges: &[(usize, usize)]) -> Graph {
    Graph::from_edges(n, edges).expect("generator produced an invalid graph")
}

/// The `d`-dimensional hypercube; vertex ids are the coordinate bit masks.
pub fn hypercube(d: usize) -> Graph {
    let n = 1usize << d;
    let mut edges = Vec::new();
    for v in 0..n {
        for i in 0..d {
            let w = v ^ (1 << i);
            if v < w {
                edges.push((v, w));
            }
        }
    }
    build(n, &edges)
}

pub fn cycle(n: usize) -> Graph {
    assert!(n >= 3);
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, &edges)
}

pub fn path(n: usize) -> Graph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, &edges)
}

/// `K_{1,k}` with center 0 and leaves `1..=k`.
pub fn star(k: usize) -> Graph {
    let edges: Vec<_> = (1..=k).map(|i| (0, i)).collect();
    build(k + 1, &edges)
}

/// `rows x cols` grid; vertex `r * cols + c`.
pub fn grid(rows: usize, cols: usize) -> Graph {
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            let v = r * cols + c;
            if c + 1 < cols {
                edges.push((v, v + 1));
            }
            if r + 1 < rows {
                edges.push((v, v + cols));
            }
        }
    }
    build(rows * cols, &edges)
}

/// `K_{a,b}` with parts `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut edges = Vec::new();
    for i in 0..a {
        for j in 0..b {
            edges.push((i, a + j));
        }
    }
    build(a + b, &edges)
}

/// A path on `k` vertices plus an apex (vertex `k`) adjacent to all of them.
pub fn fan(k: usize) -> Graph {
    let mut edges: Vec<_> = (1..k).map(|i| (i - 1, i)).collect();
    edges.extend((0..k).map(|i| (i, k)));
    build(k + 1, &edges)
}

/// `C_n` plus the chord `{0, chord_to}`.
pub fn cycle_with_chord(n: usize, chord_to: usize) -> Graph {
    let mut edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    edges.push((0, chord_to));
    build(n, &edges)
}

/// All trees on exactly `n` vertices up to isomorphism, in a deterministic
/// order.
pub fn trees(n: usize) -> Vec<Graph> {
    assert!(n >= 1);
    let mut level: Vec<Vec<(usize, usize)>> = vec![vec![]];
    for size in 2..=n {
        let mut seen = HashSet::new();
        let mut next = Vec::new();
        for t in &level {
            for attach in 0..size - 1 {
                let mut e = t.clone();
                e.push((attach, size - 1));
                if seen.insert(tree_canonical(size, &e)) {
                    next.push(e);
                }
            }
        }
        level = next;
    }
    level.iter().map(|e| build(n, e)).collect()
}

fn tree_canonical(n: usize, edges: &[(usize, usize)]) -> String {
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u].push(v);
        adj[v].push(u);
    }
    // Centers by repeated leaf stripping.
    let mut deg: Vec<usize> = adj.iter().map(Vec::len).collect();
    let mut layer: Vec<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    let mut remaining = n;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &v in &layer {
            for &w in &adj[v] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    next.push(w);
                }
            }
        }
        layer = next;
    }
    fn encode(adj: &[Vec<usize>], v: usize, parent: usize) -> String {
        let mut kids: Vec<String> = adj[v]
            .iter()
            .filter(|&&w| w != parent)
            .map(|&w| encode(adj, w, v))
            .collect();
        kids.sort();
        format!("({})", kids.concat())
    }
    layer.iter().map(|&c| encode(&adj, c, usize::MAX)).min().unwrap()
}

/// Every tree with at most `max_n` vertices, up to isomorphism.
pub fn trees_up_to(max_n: usize) -> Vec<Graph> {
    (1..=max_n).flat_map(trees).collect()
}

fn tope_graph(k: usize, topes: BTreeSet<u64>) -> (Vec<u64>, Graph) {
    let topes: Vec<u64> = topes.into_iter().collect();
    let mut edges = Vec::new();
    for (a, &s) in topes.iter().enumerate() {
        for i in 0..k {
            let t = s ^ (1 << i);
            if t > s {
                if let Ok(b) = topes.binary_search(&t) {
                    edges.push((a, b));
                }
            }
        }
    }
    let g = build(topes.len(), &edges);
    (topes, g)
}

type Vec3 = [f64; 3];

fn dot(a: Vec3, b: Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

fn cross(a: Vec3, b: Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

fn scale(a: Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

fn add(a: Vec3, b: Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

fn normalize(a: Vec3) -> Vec3 {
    scale(a, 1.0 / dot(a, a).sqrt())
}

const GENERIC_EPS: f64 = 1e-3;

/// `k` random plane normals with every triple linearly independent.
fn generic_normals(k: usize, rng: &mut ChaCha8Rng) -> Vec<Vec3> {
    loop {
        let normals: Vec<Vec3> = (0..k)
            .map(|_| {
                normalize([
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                    rng.gen_range(-1.0..1.0),
                ])
            })
            .collect();
        let mut ok = true;
        'check: for i in 0..k {
            for j in i + 1..k {
                let c = cross(normals[i], normals[j]);
                if dot(c, c).sqrt() < 0.05 {
                    ok = false;
                    break 'check;
                }
                for l in j + 1..k {
                    if dot(c, normals[l]).abs() < 0.05 {
                        ok = false;
                        break 'check;
                    }
                }
            }
        }
        if ok {
            return normals;
        }
    }
}

/// The graph of the zonohedron generated by `k >= 2` random generic vectors,
/// i.e. the tope graph of a simple arrangement of `k` central planes in
/// three-space. It is a plane quadrangulation and an antipodal partial cube.
/// The rotation system lists neighbors clockwise as seen from outside.
pub fn zonohedron(k: usize, seed: u64) -> (Graph, RotationSystem) {
    assert!((2..=20).contains(&k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let normals = generic_normals(k, &mut rng);

    // Tope -> accumulated interior direction.
    let mut topes = BTreeSet::new();
    let mut interior: Vec<(u64, Vec3)> = Vec::new();
    for i in 0..k {
        for j in i + 1..k {
            let c = normalize(cross(normals[i], normals[j]));
            for r in [c, scale(c, -1.0)] {
                let mut base = 0u64;
                let mut margin = f64::INFINITY;
                for (l, &nl) in normals.iter().enumerate() {
                    if l == i || l == j {
                        continue;
                    }
                    let s = dot(nl, r);
                    assert!(s.abs() > GENERIC_EPS, "normals not generic");
                    if s > 0.0 {
                        base |= 1 << l;
                    }
                    margin = margin.min(s.abs());
                }
                // Offset direction d in span(n_i, n_j) with n_i.d = si, n_j.d = sj.
                let g = dot(normals[i], normals[j]);
                let det = 1.0 - g * g;
                for (si, sj) in [(1.0, 1.0), (1.0, -1.0), (-1.0, 1.0), (-1.0, -1.0)] {
                    let a = (si - g * sj) / det;
                    let b = (sj - g * si) / det;
                    let d = add(scale(normals[i], a), scale(normals[j], b));
                    let dn = dot(d, d).sqrt();
                    let eps = if margin.is_finite() {
                        0.5 * margin / dn
                    } else {
                        1.0 / dn
                    };
                    let p = add(r, scale(d, eps));
                    let mut mask = base;
                    if si > 0.0 {
                        mask |= 1 << i;
                    }
                    if sj > 0.0 {
                        mask |= 1 << j;
                    }
                    topes.insert(mask);
                    interior.push((mask, normalize(p)));
                }
            }
        }
    }
    let (topes, g) = tope_graph(k, topes);
    let position = |mask: u64| -> Vec3 {
        normals.iter().enumerate().fold([0.0; 3], |acc, (l, &nl)| {
            add(acc, scale(nl, if mask >> l & 1 == 1 { 1.0 } else { -1.0 }))
        })
    };
    let mut rotation = Vec::with_capacity(g.n());
    for (v, &mask) in topes.iter().enumerate() {
        let outward = normalize(
            interior
                .iter()
                .filter(|(m, _)| *m == mask)
                .fold([0.0; 3], |acc, &(_, p)| add(acc, p)),
        );
        // Orthonormal frame (e1, e2) of the tangent plane, e1 x e2 = outward.
        let helper = if outward[0].abs() < 0.9 {
            [1.0, 0.0, 0.0]
        } else {
            [0.0, 1.0, 0.0]
        };
        let e1 = normalize(cross(helper, outward));
        let e2 = cross(outward, e1);
        let here = position(mask);
        let mut around: Vec<(f64, usize)> = g
            .neighbors(v)
            .map(|w| {
                let delta = add(position(topes[w]), scale(here, -1.0));
                (dot(delta, e2).atan2(dot(delta, e1)), w)
            })
            .collect();
        // Decreasing angle = clockwise seen from outside.
        around.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
        rotation.push(around.into_iter().map(|(_, w)| w).collect());
    }
    let rot = RotationSystem::new(&g, rotation).expect("zonohedron rotation is valid");
    (g, rot)
}

/// Region graph of `k >= 2` random lines in general position in the plane.
/// Bounded faces of the drawn region graph are 4-cycles; the outer face has
/// length `2k`.
pub fn line_arrangement(k: usize, seed: u64) -> Graph {
    assert!((2..=20).contains(&k));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    'retry: loop {
        // Line l: a_l . p = c_l.
        let lines: Vec<([f64; 2], f64)> = (0..k)
            .map(|_| {
                let t: f64 = rng.gen_range(0.0..std::f64::consts::PI);
                ([t.cos(), t.sin()], rng.gen_range(-1.0..1.0))
            })
            .collect();
        let mut topes = BTreeSet::new();
        for i in 0..k {
            for j in i + 1..k {
                let (a, c) = lines[i];
                let (b, e) = lines[j];
                let det = a[0] * b[1] - a[1] * b[0];
                if det.abs() < 0.05 {
                    continue 'retry;
                }
                let p = [(c * b[1] - a[1] * e) / det, (a[0] * e - c * b[0]) / det];
                let mut base = 0u64;
                for (l, &(nl, cl)) in lines.iter().enumerate() {
                    if l == i || l == j {
                        continue;
                    }
                    let s = nl[0] * p[0] + nl[1] * p[1] - cl;
                    if s.abs() < GENERIC_EPS {
                        continue 'retry;
                    }
                    if s > 0.0 {
                        base |= 1 << l;
                    }
                }
                for bits in 0..4u64 {
                    topes.insert(base | (bits & 1) << i | (bits >> 1) << j);
                }
            }
        }
        return tope_graph(k, topes).1;
    }
}
