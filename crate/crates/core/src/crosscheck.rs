//! The built-in instance corpus and the cross-validation suite that runs
//! every fast algorithm against its independent oracle.
//!
//! Each check returns a [`Section`] listing what was examined and every
//! disagreement found. Reports contain no timings or addresses, so the same
//! seed always yields byte-identical JSON.

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::bitset::VertexSet;
use crate::convexity::{hull_closure, hull_halfspace, is_convex};
use crate::generators;
use crate::graph::{all_pairs_distances, Graph};
use crate::hullnum::{h_v, hull_number_brute, hull_number_exact_with, hull_number_onesided_with};
use crate::lattice::{build_lattice, convex_subgraphs, hull_number_lattice, is_uld, verify_embedding};
use crate::pcube::{recognize, theta_classes, verify_cut_conditions, PartialCube};
use crate::planarquad::{hull_number_quad, quad_h_v, QuadMode, RotationSystem};
use crate::poset::{all_posets, dimension_bruteforce, dimension_via_hull, linear_extensions, log2_ceil, Poset};
use crate::satred::{parse_dimacs, random_am3, reduced_am3_formulas, verify_reduction, CnfFormula};

pub const DEFAULT_SEED: u64 = 2024;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Hypercube,
    EvenCycle,
    Tree,
    Grid,
    Gadget,
    Zonohedron,
    LineArrangement,
    NonPartialCube,
}

#[derive(Debug, Clone)]
pub struct CorpusEntry {
    pub name: String,
    pub family: Family,
    pub graph: Graph,
    pub expect_partial_cube: bool,
    /// Present for sphere quadrangulations with a known embedding.
    pub rotation: Option<RotationSystem>,
}

impl CorpusEntry {
    fn new(name: impl Into<String>, family: Family, graph: Graph) -> Self {
        CorpusEntry {
            name: name.into(),
            family,
            graph,
            expect_partial_cube: family != Family::NonPartialCube,
            rotation: None,
        }
    }

    /// Inputs for the clique-cover algorithm: sphere quadrangulations plus
    /// small planar partial cubes run in trusted mode.
    pub fn is_quad_candidate(&self) -> bool {
        matches!(self.family, Family::Zonohedron | Family::Grid | Family::LineArrangement)
            || matches!(self.name.as_str(), "C4" | "Q3")
    }
}

/// Gadgets of a few fixed formulas that appear in the graph corpus.
pub fn corpus_formulas() -> Vec<(String, CnfFormula)> {
    let texts = [
        ("F1", "p cnf 2 2\n1 2 0\n-1 -2 0\n"),
        ("contradiction", "p cnf 1 2\n1 0\n-1 0\n"),
        ("shared", "p cnf 2 3\n1 2 0\n1 -2 0\n-1 0\n"),
        ("three-vars", "p cnf 3 4\n1 2 3 0\n-1 -2 0\n-3 1 0\n2 -3 0\n"),
    ];
    texts
        .iter()
        .map(|(name, text)| (name.to_string(), parse_dimacs(text).expect("corpus formula is valid")))
        .collect()
}

pub fn corpus(seed: u64) -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for d in 1..=6 {
        out.push(CorpusEntry::new(
            format!("Q{d}"),
            Family::Hypercube,
            generators::hypercube(d),
        ));
    }
    for n in (4..=12).step_by(2) {
        out.push(CorpusEntry::new(
            format!("C{n}"),
            Family::EvenCycle,
            generators::cycle(n),
        ));
    }
    for n in 1..=10 {
        for (i, t) in generators::trees(n).into_iter().enumerate() {
            out.push(CorpusEntry::new(format!("tree{n}_{i}"), Family::Tree, t));
        }
    }
    for rows in 2..=4 {
        for cols in rows..=4 {
            out.push(CorpusEntry::new(
                format!("grid{rows}x{cols}"),
                Family::Grid,
                generators::grid(rows, cols),
            ));
        }
    }
    for (name, f) in corpus_formulas() {
        let gg = crate::satred::build_gadget(&crate::satred::preprocess_pure_literals(&f).reduced)
            .expect("corpus gadgets build");
        out.push(CorpusEntry::new(format!("gadget-{name}"), Family::Gadget, gg.graph));
    }
    for k in 3..=6 {
        let (g, rot) = generators::zonohedron(k, seed.wrapping_add(k as u64));
        let mut e = CorpusEntry::new(format!("zonohedron{k}"), Family::Zonohedron, g);
        e.rotation = Some(rot);
        out.push(e);
    }
    for k in 3..=5 {
        let g = generators::line_arrangement(k, seed.wrapping_add(100 + k as u64));
        out.push(CorpusEntry::new(format!("lines{k}"), Family::LineArrangement, g));
    }
    out.push(CorpusEntry::new(
        "K2,3",
        Family::NonPartialCube,
        generators::complete_bipartite(2, 3),
    ));
    out.push(CorpusEntry::new("C5", Family::NonPartialCube, generators::cycle(5)));
    out.push(CorpusEntry::new(
        "C6+chord",
        Family::NonPartialCube,
        generators::cycle_with_chord(6, 2),
    ));
    out.push(CorpusEntry::new("fan3", Family::NonPartialCube, generators::fan(3)));
    out
}

/// Corpus entries that are partial cubes, already recognized.
pub fn recognized(corpus: &[CorpusEntry]) -> Vec<(&CorpusEntry, PartialCube)> {
    corpus
        .iter()
        .filter(|e| e.expect_partial_cube)
        .filter_map(|e| recognize(&e.graph).ok().map(|pc| (e, pc)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
    /// Per-instance values, for inspection and golden comparisons.
    pub results: Vec<Value>,
}

impl Section {
    fn new(name: &'static str) -> Self {
        Section {
            name,
            checked: 0,
            failures: Vec::new(),
            results: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    fn fail(&mut self, msg: String) {
        self.failures.push(msg);
    }
}

/// Acceptance and rejection as expected, agreement with the cut
/// conditions, one coordinate per class, and convex cut sides.
pub fn check_recognition(corpus: &[CorpusEntry]) -> Section {
    let mut s = Section::new("recognition");
    for e in corpus {
        s.checked += 1;
        let g = &e.graph;
        let d = all_pairs_distances(g);
        match recognize(g) {
            Ok(pc) => {
                if !e.expect_partial_cube {
                    s.fail(format!("{}: accepted but expected a rejection", e.name));
                }
                if !verify_cut_conditions(g, &d, &pc.cuts).passed() {
                    s.fail(format!("{}: cut conditions fail on an accepted graph", e.name));
                }
                if pc.embedding.dims() != pc.cuts.len() {
                    s.fail(format!("{}: coordinate count differs from class count", e.name));
                }
                for (i, cut) in pc.cuts.cuts().iter().enumerate() {
                    for side in [&cut.plus, &cut.minus] {
                        if !is_convex(&d, side).unwrap_or(false) {
                            s.fail(format!("{}: a side of cut {i} is not convex", e.name));
                        }
                    }
                }
                s.results
                    .push(json!({"graph": e.name, "accepted": true, "cuts": pc.cuts.len()}));
            }
            Err(rejection) => {
                if e.expect_partial_cube {
                    s.fail(format!("{}: rejected ({rejection})", e.name));
                }
                if let Ok(cp) = theta_classes(g, &d) {
                    if verify_cut_conditions(g, &d, &cp).passed() {
                        s.fail(format!("{}: rejected but cut conditions pass", e.name));
                    }
                }
                s.results
                    .push(json!({"graph": e.name, "accepted": false, "witness": rejection}));
            }
        }
    }
    s
}

/// Halfspace hulls against interval closures: every seed set of size at
/// most three plus 100 random larger sets per partial cube.
pub fn check_hulls(corpus: &[CorpusEntry], seed: u64, max_n: usize) -> Section {
    let mut s = Section::new("convex_hulls");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for (e, pc) in recognized(corpus) {
        let n = e.graph.n();
        if n > max_n {
            continue;
        }
        let mut seeds: Vec<Vec<usize>> = Vec::new();
        for a in 0..n {
            seeds.push(vec![a]);
            for b in a + 1..n {
                seeds.push(vec![a, b]);
                for c in b + 1..n {
                    seeds.push(vec![a, b, c]);
                }
            }
        }
        if n > 3 {
            for _ in 0..100 {
                let k = rng.gen_range(4..=n);
                seeds.push(sample(&mut rng, n, k).into_vec());
            }
        }
        let mut mismatches = 0;
        for ids in &seeds {
            let set = VertexSet::from_ids(n, ids.iter().copied());
            let a = hull_halfspace(&pc.cuts, &set).expect("non-empty");
            let b = hull_closure(&pc.distances, &set).expect("non-empty");
            if a != b {
                mismatches += 1;
                if mismatches == 1 {
                    s.fail(format!("{}: hulls of {ids:?} differ: {a:?} vs {b:?}", e.name));
                }
            }
        }
        s.checked += seeds.len();
        s.results
            .push(json!({"graph": e.name, "seed_sets": seeds.len(), "mismatches": mismatches}));
    }
    s
}

/// Exact, one-sided and brute-force hull numbers agree.
pub fn check_hull_numbers(corpus: &[CorpusEntry], max_n: usize) -> Section {
    let mut s = Section::new("hull_numbers");
    for (e, pc) in recognized(corpus) {
        let g = &e.graph;
        if g.n() > max_n {
            continue;
        }
        s.checked += 1;
        let exact = hull_number_exact_with(g, &pc);
        let onesided = hull_number_onesided_with(g, &pc);
        let brute = hull_number_brute(&pc.distances);
        match (exact, onesided, brute) {
            (Ok(x), Ok(o), Ok(b)) => {
                if x.size != o.size || x.size != b.size {
                    s.fail(format!(
                        "{}: exact {} onesided {} brute {}",
                        e.name, x.size, o.size, b.size
                    ));
                }
                if x.witness != b.witness {
                    s.fail(format!(
                        "{}: exact witness {:?} is not the first minimum {:?}",
                        e.name, x.witness, b.witness
                    ));
                }
                s.results
                    .push(json!({"graph": e.name, "hull_number": x.size, "witness": x.witness}));
            }
            (x, o, b) => s.fail(format!("{}: {:?} {:?} {:?}", e.name, x.err(), o.err(), b.err())),
        }
    }
    s
}

/// The reduction on every canonical reduced formula with `n <= 4`, `m <= 4`
/// and on `random` seeded random formulas with up to six variables.
pub fn check_sat_reduction(seed: u64, random: usize) -> Section {
    let mut s = Section::new("sat_reduction");
    let mut formulas: Vec<(String, CnfFormula)> = Vec::new();
    for n in 1..=4 {
        for (i, f) in reduced_am3_formulas(n, 4).into_iter().enumerate() {
            formulas.push((format!("exhaustive-n{n}-{i}"), f));
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut found = 0;
    while found < random {
        let vars = rng.gen_range(1..=6);
        let f = random_am3(&mut rng, vars);
        if crate::satred::preprocess_pure_literals(&f).reduced.num_clauses() > 0 {
            formulas.push((format!("random-{found}"), f));
            found += 1;
        }
    }
    let mut sat = 0;
    for (name, f) in &formulas {
        s.checked += 1;
        match verify_reduction(f) {
            Ok(r) => {
                let cuts_ok = r.cuts.as_ref().is_none_or(|c| c.total == c.expected);
                if !r.biconditional_holds || !cuts_ok || r.translations_ok == Some(false) {
                    s.fail(format!("{name} {f}: {r:?}"));
                }
                sat += usize::from(r.satisfiable);
                s.results.push(json!({
                    "formula": name,
                    "n": r.n,
                    "m": r.m,
                    "satisfiable": r.satisfiable,
                    "hull_number": r.hull_number,
                }));
            }
            Err(err) => s.fail(format!("{name} {f}: {err}")),
        }
    }
    s.results.push(json!({"formulas": formulas.len(), "satisfiable": sat}));
    s
}

/// All posets on at most five elements, plus the standard example `S_3`.
pub fn poset_corpus() -> Vec<(String, Poset)> {
    let mut out = Vec::new();
    for n in 1..=5 {
        for (i, p) in all_posets(n).into_iter().enumerate() {
            out.push((format!("poset{n}_{i}"), p));
        }
    }
    out.push(("S3".to_string(), Poset::standard_example(3)));
    out
}

/// Dimension from the hull number equals the brute-force dimension and
/// stays within the width; `S_3` has dimension 3.
pub fn check_poset_dimension() -> Section {
    let mut s = Section::new("poset_dimension");
    for (name, p) in poset_corpus() {
        s.checked += 1;
        match (dimension_via_hull(&p), dimension_bruteforce(&p)) {
            (Ok(d), Ok(b)) => {
                if d.dimension != b || d.dimension > d.width {
                    s.fail(format!("{name}: via hull {} brute {b} width {}", d.dimension, d.width));
                }
                if name == "S3" && d.dimension != 3 {
                    s.fail(format!("S3 has dimension {}", d.dimension));
                }
                s.results.push(json!({
                    "poset": name,
                    "dimension": d.dimension,
                    "width": d.width,
                    "num_extensions": d.num_extensions,
                }));
            }
            (d, b) => s.fail(format!("{name}: {:?} {:?}", d.err(), b.err())),
        }
    }
    s
}

/// `dim(P) <= ceil(log2 #extensions)` on the poset corpus.
pub fn check_poset_log_bound() -> Section {
    let mut s = Section::new("poset_log_bound");
    for (name, p) in poset_corpus() {
        s.checked += 1;
        let (Ok(exts), Ok(dim)) = (linear_extensions(&p), dimension_bruteforce(&p)) else {
            s.fail(format!("{name}: enumeration failed"));
            continue;
        };
        let bound = log2_ceil(exts.len());
        if dim > bound {
            s.fail(format!("{name}: dimension {dim} > ceil(log2 {}) = {bound}", exts.len()));
        }
    }
    s
}

/// Clique-cover hull numbers against exact ones, with per-vertex `h_v`
/// agreement and an independent recomputation of every adjacency.
pub fn check_quadrangulations(corpus: &[CorpusEntry]) -> Section {
    let mut s = Section::new("quadrangulations");
    for (e, pc) in recognized(corpus) {
        if !e.is_quad_candidate() {
            continue;
        }
        s.checked += 1;
        let g = &e.graph;
        let mode = match &e.rotation {
            Some(rot) => QuadMode::Strict(rot.clone()),
            None => QuadMode::Trusted,
        };
        let quad = match hull_number_quad(g, &mode) {
            Ok(q) => q,
            Err(err) => {
                s.fail(format!("{}: {err}", e.name));
                continue;
            }
        };
        let exact = hull_number_exact_with(g, &pc).map(|h| h.size);
        if exact.as_ref().ok() != Some(&quad.size) {
            s.fail(format!(
                "{}: clique cover gives {}, exact gives {exact:?}",
                e.name, quad.size
            ));
        }
        for v in 0..g.n() {
            if quad.per_vertex[v].is_none() {
                continue;
            }
            let (ig, cover) = match quad_h_v(&pc.cuts, v) {
                Ok(x) => x,
                Err(err) => {
                    s.fail(format!("{} at {v}: {err}", e.name));
                    continue;
                }
            };
            if cover.cliques.len() != cover.independent.len() {
                s.fail(format!("{} at {v}: cover and independent set differ in size", e.name));
            }
            let generic = h_v(g.n(), &pc.cuts, v).map(|h| h.size);
            if generic.as_ref().ok() != Some(&cover.cliques.len()) {
                s.fail(format!(
                    "{} at {v}: clique cover {} generic {generic:?}",
                    e.name,
                    cover.cliques.len()
                ));
            }
            for a in 0..ig.len() {
                for b in a + 1..ig.len() {
                    let meet = pc.cuts.cut(a).far_side(v).intersects(pc.cuts.cut(b).far_side(v));
                    if meet != ig.adjacent(a, b) {
                        s.fail(format!("{} at {v}: adjacency of cuts {a}, {b} is wrong", e.name));
                    }
                }
            }
        }
        s.results.push(json!({
            "graph": e.name,
            "mode": if e.rotation.is_some() { "strict" } else { "trusted" },
            "hull_number": quad.size,
            "best_v": quad.best_v,
            "set_aside": quad.rejected.iter().map(|r| r.v).collect::<Vec<_>>(),
        }));
    }
    s
}

/// ULD, embedding and Hasse-diagram recognition for every base vertex of
/// every partial cube with at most `max_n` vertices; lattice hull numbers;
/// and a failing base vertex for every non-partial cube.
pub fn check_lattices(corpus: &[CorpusEntry], max_n: usize, seed: u64) -> Section {
    let mut s = Section::new("lattices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for e in corpus {
        let g = &e.graph;
        if g.n() > max_n {
            continue;
        }
        if !e.expect_partial_cube && e.name != "K2,3" {
            continue;
        }
        s.checked += 1;
        let d = all_pairs_distances(g);
        let sets = match convex_subgraphs(g) {
            Ok(x) => x,
            Err(err) => {
                s.fail(format!("{}: {err}", e.name));
                continue;
            }
        };
        let mut failing_bases = Vec::new();
        for v in 0..g.n() {
            let above: Vec<VertexSet> = sets.iter().filter(|x| x.contains(v)).cloned().collect();
            let l = match build_lattice(g.n(), above) {
                Ok(l) => l,
                Err(err) => {
                    s.fail(format!("{} at {v}: {err}", e.name));
                    continue;
                }
            };
            let uld = is_uld(&l).uld;
            let embedding = verify_embedding(g, &d, v, &l).passed();
            let hasse = recognize(&l.hasse_graph()).is_ok();
            if !(uld && embedding && hasse) {
                failing_bases.push(v);
                if e.expect_partial_cube {
                    s.fail(format!(
                        "{} at {v}: uld {uld} embedding {embedding} hasse {hasse}",
                        e.name
                    ));
                }
            }
        }
        if !e.expect_partial_cube {
            if failing_bases.is_empty() {
                s.fail(format!("{}: every base vertex passes", e.name));
            }
            s.results.push(json!({"graph": e.name, "failing_bases": failing_bases}));
            continue;
        }
        let l = match build_lattice(g.n(), sets) {
            Ok(l) => l,
            Err(err) => {
                s.fail(format!("{}: {err}", e.name));
                continue;
            }
        };
        for _ in 0..20 {
            let (a, b) = (rng.gen_range(0..l.len()), rng.gen_range(0..l.len()));
            if l.element(l.meet(a, b)) != &l.element(a).intersection(l.element(b)) {
                s.fail(format!("{}: meet is not intersection", e.name));
            }
            let union = l.element(a).union(l.element(b));
            let hull = if union.is_empty() {
                union
            } else {
                hull_closure(&d, &union).expect("non-empty")
            };
            if l.element(l.join(a, b)) != &hull {
                s.fail(format!("{}: join is not the hull of the union", e.name));
            }
        }
        let pc = recognize(g).expect("checked above");
        match (hull_number_lattice(&l), hull_number_exact_with(g, &pc)) {
            (Ok(lh), Ok(x)) => {
                if lh.size != x.size || 1usize << lh.size > l.len() {
                    s.fail(format!(
                        "{}: lattice {} exact {} |L| {}",
                        e.name,
                        lh.size,
                        x.size,
                        l.len()
                    ));
                }
                s.results
                    .push(json!({"graph": e.name, "lattice_size": l.len(), "hull_number": lh.size}));
            }
            (a, b) => s.fail(format!("{}: {:?} {:?}", e.name, a.err(), b.err())),
        }
    }
    s
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub passed: bool,
    pub sections: Vec<Section>,
}

/// Every check on the full corpus.
pub fn run_suite(seed: u64) -> SuiteReport {
    let corpus = corpus(seed);
    let sections = vec![
        check_recognition(&corpus),
        check_hulls(&corpus, seed, 32),
        check_hull_numbers(&corpus, 16),
        check_sat_reduction(seed, 200),
        check_poset_dimension(),
        check_poset_log_bound(),
        check_quadrangulations(&corpus),
        check_lattices(&corpus, 16, seed),
    ];
    SuiteReport {
        seed,
        passed: sections.iter().all(Section::passed),
        sections,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn corpus_shape() {
        let c = corpus(DEFAULT_SEED);
        let trees = c.iter().filter(|e| e.family == Family::Tree).count();
        assert_eq!(trees, 201);
        assert_eq!(c.iter().filter(|e| !e.expect_partial_cube).count(), 4);
        assert!(c.iter().filter(|e| e.rotation.is_some()).count() >= 4);
    }

    #[test]
    fn small_sections_pass() {
        let c: Vec<CorpusEntry> = corpus(DEFAULT_SEED).into_iter().filter(|e| e.graph.n() <= 8).collect();
        assert!(check_recognition(&c).passed());
        assert!(check_hull_numbers(&c, 8).passed());
        assert!(check_quadrangulations(&c).passed());
    }

    #[test]
    fn three_by_three_grid_sets_its_center_aside() {
        let c: Vec<CorpusEntry> = corpus(DEFAULT_SEED)
            .into_iter()
            .filter(|e| e.name == "grid3x3")
            .collect();
        let s = check_quadrangulations(&c);
        assert!(s.passed(), "{:?}", s.failures);
        assert_eq!(s.results[0]["set_aside"], json!([4]));
    }
}
