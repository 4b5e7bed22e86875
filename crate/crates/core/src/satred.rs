//! The SAT-AM3 reduction: a formula `F` with `n` variables and `m` clauses,
//! each clause of at most three literals and each variable in at most three
//! clauses, becomes a partial cube `G_F` with `n + m + 1` cuts whose hull
//! number is at most `n + 1` exactly when `F` is satisfiable.
//!
//! Vertices of `G_F`: the edge `u u'`; a clause vertex `d_i` adjacent to `u`
//! per clause; a shared vertex `d_ij` adjacent to `d_i` and `d_j` whenever
//! the two clauses share a literal; and per variable `x` a copy `G_x` of the
//! subgraph induced by `u`, the clause vertices of clauses mentioning `x`,
//! and the shared vertices of clause pairs sharing a literal of `x`, joined
//! to the originals by the matching `M_x`.
//!
//! The literal anchor `v_l` is the copy in `G_x` of `d_i` when `l` occurs in
//! the single clause `D_i`, and of `d_ij` when it occurs in `D_i` and `D_j`.

use std::collections::BTreeMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::bitset::VertexSet;
use crate::convexity::hull_halfspace;
use crate::graph::Graph;
use crate::hullnum::{hull_number_exact_with, HullError};
use crate::pcube::{recognize, PartialCube, Rejection};
use crate::BoundExceeded;

/// Formulas with more variables than this are not brute-forced.
pub const SAT_VARIABLE_LIMIT: usize = 8;

/// A DIMACS literal: `v` or `-v` for the 1-based variable `v`.
pub type Literal = i32;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SatError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("clause {clause} is empty")]
    EmptyClause { clause: usize },
    #[error("clause {clause} has {len} literals; at most 3 are allowed")]
    ClauseTooLong { clause: usize, len: usize },
    #[error("clause {clause} repeats literal {literal}")]
    RepeatedLiteral { clause: usize, literal: Literal },
    #[error("clause {clause} mentions variable {literal} outside 1..={num_vars}")]
    VariableOutOfRange {
        clause: usize,
        literal: Literal,
        num_vars: usize,
    },
    #[error("variable {var} occurs in {count} clauses; at most 3 are allowed")]
    TooManyOccurrences { var: usize, count: usize },
    #[error("variable {var} does not occur in both polarities; preprocess the formula first")]
    NotReduced { var: usize },
    #[error("clause {clause} contains a variable in both polarities; preprocess the formula first")]
    Tautology { clause: usize },
    #[error("the formula has no clauses")]
    NoClauses,
    #[error("assignment covers {given} of {expected} variables")]
    IncompleteAssignment { given: usize, expected: usize },
    #[error("gadget is not a partial cube: {0}")]
    GadgetNotPartialCube(Rejection),
    #[error("gadget has {found} cuts, expected {expected}")]
    GadgetCutCount { expected: usize, found: usize },
    #[error("gadget cut {cut} does not match its role")]
    GadgetCutMismatch { cut: usize },
    #[error("vertex set is not a hull set of the gadget")]
    NotHullSet,
    #[error("vertex set has {size} vertices, more than n + 1 = {limit}")]
    HullSetTooLarge { size: usize, limit: usize },
    #[error("vertex set misses u'")]
    MissingUPrime,
    #[error("vertex set has no vertex in the copy of variable {var}")]
    MissingCopy { var: usize },
    #[error("decoded assignment does not satisfy the formula")]
    NotSatisfying,
    #[error(transparent)]
    Bound(#[from] BoundExceeded),
    #[error(transparent)]
    Hull(#[from] HullError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Literal>>,
}

fn var_of(l: Literal) -> usize {
    l.unsigned_abs() as usize
}

impl CnfFormula {
    /// Checks the AM3 shape: clauses of one to three distinct literals over
    /// `1..=num_vars`, every variable in at most three clauses.
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self, SatError> {
        let mut count = vec![0usize; num_vars + 1];
        for (i, clause) in clauses.iter().enumerate() {
            if clause.is_empty() {
                return Err(SatError::EmptyClause { clause: i + 1 });
            }
            if clause.len() > 3 {
                return Err(SatError::ClauseTooLong {
                    clause: i + 1,
                    len: clause.len(),
                });
            }
            for (k, &l) in clause.iter().enumerate() {
                if l == 0 || var_of(l) > num_vars {
                    return Err(SatError::VariableOutOfRange {
                        clause: i + 1,
                        literal: l,
                        num_vars,
                    });
                }
                if clause[..k].contains(&l) {
                    return Err(SatError::RepeatedLiteral {
                        clause: i + 1,
                        literal: l,
                    });
                }
            }
            let mut vars: Vec<usize> = clause.iter().map(|&l| var_of(l)).collect();
            vars.sort_unstable();
            vars.dedup();
            for v in vars {
                count[v] += 1;
                if count[v] > 3 {
                    return Err(SatError::TooManyOccurrences {
                        var: v,
                        count: count[v],
                    });
                }
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn num_clauses(&self) -> usize {
        self.clauses.len()
    }

    pub fn clauses(&self) -> &[Vec<Literal>] {
        &self.clauses
    }

    /// `assignment[v - 1]` is the value of variable `v`.
    pub fn evaluate(&self, assignment: &[bool]) -> bool {
        self.clauses
            .iter()
            .all(|c| c.iter().any(|&l| assignment[var_of(l) - 1] == (l > 0)))
    }

    /// First satisfying assignment in binary counting order (variable 1 is
    /// the least significant), or `None`.
    pub fn brute_force_sat(&self) -> Result<Option<Vec<bool>>, SatError> {
        if self.num_vars > SAT_VARIABLE_LIMIT {
            return Err(BoundExceeded::new("variables for exhaustive SAT", SAT_VARIABLE_LIMIT, self.num_vars).into());
        }
        for mask in 0u32..1 << self.num_vars {
            let a: Vec<bool> = (0..self.num_vars).map(|v| mask >> v & 1 == 1).collect();
            if self.evaluate(&a) {
                return Ok(Some(a));
            }
        }
        Ok(None)
    }

    /// Clause indices containing `literal`, ascending.
    pub fn clauses_with(&self, literal: Literal) -> Vec<usize> {
        (0..self.clauses.len())
            .filter(|&i| self.clauses[i].contains(&literal))
            .collect()
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }
}

impl fmt::Display for CnfFormula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .clauses
            .iter()
            .map(|c| {
                let lits: Vec<String> = c
                    .iter()
                    .map(|&l| if l > 0 { format!("x{l}") } else { format!("!x{}", -l) })
                    .collect();
                format!("({})", lits.join(" | "))
            })
            .collect();
        write!(f, "{}", parts.join(" & "))
    }
}

/// Reads DIMACS CNF: `c` comment lines, a `p cnf <vars> <clauses>` header,
/// then zero-terminated clauses that may span lines.
pub fn parse_dimacs(text: &str) -> Result<CnfFormula, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses = Vec::new();
    let mut current = Vec::new();
    let mut last_line = 0;
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
            continue;
        }
        last_line = line_no;
        if line.starts_with('p') {
            let parts: Vec<&str> = line.split_whitespace().collect();
            let parsed = match parts.as_slice() {
                ["p", "cnf", v, c] => v.parse().ok().zip(c.parse().ok()),
                _ => None,
            };
            if header.is_some() || parsed.is_none() {
                return Err(SatError::Parse {
                    line: line_no,
                    message: "expected a single header `p cnf <vars> <clauses>`".into(),
                });
            }
            header = parsed;
            continue;
        }
        if header.is_none() {
            return Err(SatError::Parse {
                line: line_no,
                message: "clause before the `p cnf` header".into(),
            });
        }
        for tok in line.split_whitespace() {
            let l: Literal = tok.parse().map_err(|_| SatError::Parse {
                line: line_no,
                message: format!("`{tok}` is not an integer literal"),
            })?;
            if l == 0 {
                if current.is_empty() {
                    return Err(SatError::EmptyClause {
                        clause: clauses.len() + 1,
                    });
                }
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    let (num_vars, num_clauses) = header.ok_or(SatError::Parse {
        line: last_line.max(1),
        message: "missing `p cnf` header".into(),
    })?;
    if !current.is_empty() {
        clauses.push(current);
    }
    if clauses.len() != num_clauses {
        return Err(SatError::Parse {
            line: last_line.max(1),
            message: format!("header announces {num_clauses} clauses, found {}", clauses.len()),
        });
    }
    CnfFormula::new(num_vars, clauses)
}

/// Outcome of tautology removal and pure-literal elimination.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Preprocessed {
    /// Variables renumbered to `1..=n` in order of their original ids.
    pub reduced: CnfFormula,
    /// `original_var[i]` is the original id of reduced variable `i + 1`.
    pub original_var: Vec<usize>,
    /// Variables fixed by the pure-literal rule, in elimination order.
    pub fixed: Vec<(usize, bool)>,
    pub tautologies_removed: usize,
    original_vars: usize,
}

impl Preprocessed {
    /// Extends an assignment of the reduced formula to the original one;
    /// variables that vanished without being fixed are set to false.
    pub fn lift(&self, reduced: &[bool]) -> Vec<bool> {
        let mut a = vec![false; self.original_vars];
        for (i, &v) in self.original_var.iter().enumerate() {
            a[v - 1] = reduced[i];
        }
        for &(v, value) in &self.fixed {
            a[v - 1] = value;
        }
        a
    }
}

pub fn preprocess_pure_literals(f: &CnfFormula) -> Preprocessed {
    let mut clauses: Vec<Vec<Literal>> = f
        .clauses
        .iter()
        .filter(|c| !c.iter().any(|&l| c.contains(&-l)))
        .cloned()
        .collect();
    let tautologies_removed = f.clauses.len() - clauses.len();
    let mut fixed = Vec::new();
    loop {
        let mut pos = vec![false; f.num_vars + 1];
        let mut neg = vec![false; f.num_vars + 1];
        for &l in clauses.iter().flatten() {
            if l > 0 {
                pos[var_of(l)] = true;
            } else {
                neg[var_of(l)] = true;
            }
        }
        let Some(v) = (1..=f.num_vars).find(|&v| pos[v] != neg[v]) else {
            break;
        };
        let literal = if pos[v] { v as Literal } else { -(v as Literal) };
        fixed.push((v, pos[v]));
        clauses.retain(|c| !c.contains(&literal));
    }
    let mut used: Vec<usize> = clauses.iter().flatten().map(|&l| var_of(l)).collect();
    used.sort_unstable();
    used.dedup();
    let mut renumber = vec![0; f.num_vars + 1];
    for (i, &v) in used.iter().enumerate() {
        renumber[v] = i + 1;
    }
    let reduced_clauses = clauses
        .into_iter()
        .map(|c| {
            c.into_iter()
                .map(|l| l.signum() * renumber[var_of(l)] as Literal)
                .collect()
        })
        .collect();
    Preprocessed {
        reduced: CnfFormula {
            num_vars: used.len(),
            clauses: reduced_clauses,
        },
        original_var: used,
        fixed,
        tautologies_removed,
        original_vars: f.num_vars,
    }
}

/// Clause indices and variable indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum Role {
    U,
    UPrime,
    Clause { clause: usize },
    Shared { first: usize, second: usize },
    CopyU { var: usize },
    CopyClause { clause: usize, var: usize },
    CopyShared { first: usize, second: usize, var: usize },
}

impl Role {
    /// Human-readable name with 1-based clause and variable numbers.
    pub fn label(&self) -> String {
        match *self {
            Role::U => "u".into(),
            Role::UPrime => "u'".into(),
            Role::Clause { clause } => format!("d{}", clause + 1),
            Role::Shared { first, second } => format!("d{},{}", first + 1, second + 1),
            Role::CopyU { var } => format!("u_x{}", var + 1),
            Role::CopyClause { clause, var } => format!("d{}_x{}", clause + 1, var + 1),
            Role::CopyShared { first, second, var } => {
                format!("d{},{}_x{}", first + 1, second + 1, var + 1)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "role", rename_all = "snake_case")]
pub enum CutRole {
    UUPrime,
    Clause { clause: usize },
    Var { var: usize },
}

#[derive(Debug, Clone)]
pub struct GadgetGraph {
    pub formula: CnfFormula,
    pub graph: Graph,
    pub partial_cube: PartialCube,
    pub roles: Vec<Role>,
    /// Role of every cut of `partial_cube.cuts`.
    pub cut_roles: Vec<CutRole>,
    pub u: usize,
    pub u_prime: usize,
    pub clause_vertex: Vec<usize>,
    pub shared_vertex: BTreeMap<(usize, usize), usize>,
    /// Per variable: original vertex to its copy in `G_x`.
    pub copies: Vec<BTreeMap<usize, usize>>,
    /// Per variable: `[v_x, v_not_x]`.
    pub anchors: Vec<[usize; 2]>,
}

impl GadgetGraph {
    pub fn n(&self) -> usize {
        self.formula.num_vars()
    }

    pub fn anchor(&self, literal: Literal) -> usize {
        self.anchors[var_of(literal) - 1][usize::from(literal < 0)]
    }

    pub fn in_copy(&self, var: usize, v: usize) -> bool {
        matches!(
            self.roles[v],
            Role::CopyU { var: x } | Role::CopyClause { var: x, .. } | Role::CopyShared { var: x, .. } if x == var
        )
    }
}

struct Builder {
    edges: Vec<(usize, usize)>,
    roles: Vec<Role>,
}

impl Builder {
    fn vertex(&mut self, role: Role) -> usize {
        self.roles.push(role);
        self.roles.len() - 1
    }
}

/// Builds `G_F` for a preprocessed formula and checks it: recognition as a
/// partial cube, `n + m + 1` cuts, and each cut equal to the edge set its
/// role predicts.
pub fn build_gadget(f: &CnfFormula) -> Result<GadgetGraph, SatError> {
    if f.clauses.is_empty() {
        return Err(SatError::NoClauses);
    }
    for (i, c) in f.clauses.iter().enumerate() {
        if c.iter().any(|&l| c.contains(&-l)) {
            return Err(SatError::Tautology { clause: i + 1 });
        }
    }
    for v in 1..=f.num_vars {
        let l = v as Literal;
        if f.clauses_with(l).is_empty() || f.clauses_with(-l).is_empty() {
            return Err(SatError::NotReduced { var: v });
        }
    }
    let m = f.clauses.len();
    let mut b = Builder {
        edges: Vec::new(),
        roles: Vec::new(),
    };
    let u = b.vertex(Role::U);
    let u_prime = b.vertex(Role::UPrime);
    b.edges.push((u, u_prime));
    let clause_vertex: Vec<usize> = (0..m).map(|clause| b.vertex(Role::Clause { clause })).collect();
    for &d in &clause_vertex {
        b.edges.push((u, d));
    }
    let mut shared_vertex = BTreeMap::new();
    for i in 0..m {
        for j in i + 1..m {
            if f.clauses[i].iter().any(|l| f.clauses[j].contains(l)) {
                let s = b.vertex(Role::Shared { first: i, second: j });
                b.edges.push((clause_vertex[i], s));
                b.edges.push((clause_vertex[j], s));
                shared_vertex.insert((i, j), s);
            }
        }
    }
    let base_edges = b.edges.clone();
    let mut copies = Vec::with_capacity(f.num_vars);
    let mut anchors = Vec::with_capacity(f.num_vars);
    for x in 0..f.num_vars {
        let pos = (x + 1) as Literal;
        let mentions = |c: &Vec<Literal>| c.contains(&pos) || c.contains(&-pos);
        let mut originals = vec![(u, Role::CopyU { var: x })];
        for (i, &d) in clause_vertex.iter().enumerate() {
            if mentions(&f.clauses[i]) {
                originals.push((d, Role::CopyClause { clause: i, var: x }));
            }
        }
        for (&(i, j), &s) in &shared_vertex {
            let same = [pos, -pos]
                .iter()
                .any(|l| f.clauses[i].contains(l) && f.clauses[j].contains(l));
            if same {
                originals.push((
                    s,
                    Role::CopyShared {
                        first: i,
                        second: j,
                        var: x,
                    },
                ));
            }
        }
        let mut copy = BTreeMap::new();
        for (orig, role) in originals {
            let c = b.vertex(role);
            copy.insert(orig, c);
            b.edges.push((orig, c));
        }
        for &(p, q) in &base_edges {
            if let (Some(&cp), Some(&cq)) = (copy.get(&p), copy.get(&q)) {
                b.edges.push((cp, cq));
            }
        }
        let anchor = |literal: Literal| -> usize {
            match f.clauses_with(literal).as_slice() {
                [i] => copy[&clause_vertex[*i]],
                [i, j] => copy[&shared_vertex[&(*i, *j)]],
                _ => unreachable!("a reduced AM3 literal occurs once or twice"),
            }
        };
        anchors.push([anchor(pos), anchor(-pos)]);
        copies.push(copy);
    }
    let graph = Graph::from_edges(b.roles.len(), &b.edges)
        .expect("gadget construction yields a simple connected graph")
        .with_labels(b.roles.iter().map(Role::label).collect())
        .expect("one label per vertex");
    let partial_cube = recognize(&graph).map_err(SatError::GadgetNotPartialCube)?;
    let expected = f.num_vars + m + 1;
    if partial_cube.cuts.len() != expected {
        return Err(SatError::GadgetCutCount {
            expected,
            found: partial_cube.cuts.len(),
        });
    }
    let gadget = GadgetGraph {
        formula: f.clone(),
        graph,
        partial_cube,
        roles: b.roles,
        cut_roles: Vec::new(),
        u,
        u_prime,
        clause_vertex,
        shared_vertex,
        copies,
        anchors,
    };
    assign_cut_roles(gadget)
}

/// Predicted edge set of every cut role; each recognized cut must equal one.
fn assign_cut_roles(mut gg: GadgetGraph) -> Result<GadgetGraph, SatError> {
    let g = &gg.graph;
    let id = |p: usize, q: usize| g.edge_id(p, q).expect("predicted edge exists");
    let mut predicted: Vec<(CutRole, Vec<usize>)> = vec![(CutRole::UUPrime, vec![id(gg.u, gg.u_prime)])];
    for (i, &d) in gg.clause_vertex.iter().enumerate() {
        let mut pairs = vec![(gg.u, d)];
        for (&(a, c), &s) in &gg.shared_vertex {
            if a == i {
                pairs.push((s, gg.clause_vertex[c]));
            } else if c == i {
                pairs.push((s, gg.clause_vertex[a]));
            }
        }
        let mut edges: Vec<usize> = pairs.iter().map(|&(p, q)| id(p, q)).collect();
        for copy in &gg.copies {
            for &(p, q) in &pairs {
                if let (Some(&cp), Some(&cq)) = (copy.get(&p), copy.get(&q)) {
                    edges.push(id(cp, cq));
                }
            }
        }
        predicted.push((CutRole::Clause { clause: i }, edges));
    }
    for (x, copy) in gg.copies.iter().enumerate() {
        let edges = copy.iter().map(|(&o, &c)| id(o, c)).collect();
        predicted.push((CutRole::Var { var: x }, edges));
    }
    let mut roles = vec![None; gg.partial_cube.cuts.len()];
    for (role, mut edges) in predicted {
        edges.sort_unstable();
        let cut = gg.partial_cube.cuts.class_of(edges[0]);
        if gg.partial_cube.cuts.cut(cut).edges != edges || roles[cut].is_some() {
            return Err(SatError::GadgetCutMismatch { cut });
        }
        roles[cut] = Some(role);
    }
    gg.cut_roles = roles.into_iter().map(|r| r.expect("every cut has a role")).collect();
    Ok(gg)
}

/// `{u'}` together with `v_x` or `v_not_x` per variable.
pub fn assignment_to_hull_set(gg: &GadgetGraph, a: &[bool]) -> Result<VertexSet, SatError> {
    if a.len() != gg.n() {
        return Err(SatError::IncompleteAssignment {
            given: a.len(),
            expected: gg.n(),
        });
    }
    let mut h = VertexSet::singleton(gg.graph.n(), gg.u_prime);
    for (x, &value) in a.iter().enumerate() {
        h.insert(gg.anchors[x][usize::from(!value)]);
    }
    Ok(h)
}

/// Decodes a hull set of size at most `n + 1`. The vertex chosen in `G_x`
/// means `x = true` when it lies on a shortest path from `u'` to `v_x`,
/// and `x = false` otherwise. The result is checked against the formula.
pub fn hull_set_to_assignment(gg: &GadgetGraph, h: &VertexSet) -> Result<Vec<bool>, SatError> {
    let limit = gg.n() + 1;
    if h.len() > limit {
        return Err(SatError::HullSetTooLarge { size: h.len(), limit });
    }
    if h.is_empty()
        || !hull_halfspace(&gg.partial_cube.cuts, h)
            .map_err(HullError::from)?
            .is_full()
    {
        return Err(SatError::NotHullSet);
    }
    if !h.contains(gg.u_prime) {
        return Err(SatError::MissingUPrime);
    }
    let d = &gg.partial_cube.distances;
    let mut a = Vec::with_capacity(gg.n());
    for x in 0..gg.n() {
        let hx = h
            .iter()
            .find(|&v| gg.in_copy(x, v))
            .ok_or(SatError::MissingCopy { var: x + 1 })?;
        let vx = gg.anchors[x][0];
        a.push(d.get(gg.u_prime, hx) + d.get(hx, vx) == d.get(gg.u_prime, vx));
    }
    if !gg.formula.evaluate(&a) {
        return Err(SatError::NotSatisfying);
    }
    Ok(a)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CutCensus {
    pub total: usize,
    pub expected: usize,
    pub clause_cuts: usize,
    pub variable_cuts: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReductionReport {
    pub satisfiable: bool,
    /// Absent when preprocessing leaves no clauses and no gadget is built.
    pub hull_number: Option<usize>,
    pub n_plus_1: usize,
    pub biconditional_holds: bool,
    pub cuts: Option<CutCensus>,
    pub n: usize,
    pub m: usize,
    pub vertices: Option<usize>,
    pub fixed_by_pure_literals: Vec<(usize, bool)>,
    pub tautologies_removed: usize,
    /// A satisfying assignment maps to a hull set of size `n + 1`, and the
    /// minimum hull set decodes to a satisfying assignment.
    pub translations_ok: Option<bool>,
    pub gadget_skipped: bool,
}

/// Preprocesses `f`, then compares exhaustive satisfiability with the exact
/// hull number of the gadget.
pub fn verify_reduction(f: &CnfFormula) -> Result<ReductionReport, SatError> {
    let pre = preprocess_pure_literals(f);
    let r = &pre.reduced;
    let n = r.num_vars();
    let m = r.num_clauses();
    if n > SAT_VARIABLE_LIMIT {
        return Err(BoundExceeded::new("variables for exhaustive SAT", SAT_VARIABLE_LIMIT, n).into());
    }
    let mut report = ReductionReport {
        satisfiable: true,
        hull_number: None,
        n_plus_1: n + 1,
        biconditional_holds: true,
        cuts: None,
        n,
        m,
        vertices: None,
        fixed_by_pure_literals: pre.fixed.clone(),
        tautologies_removed: pre.tautologies_removed,
        translations_ok: None,
        gadget_skipped: true,
    };
    if m == 0 {
        return Ok(report);
    }
    let sat = r.brute_force_sat()?;
    let gg = build_gadget(r)?;
    let hn = hull_number_exact_with(&gg.graph, &gg.partial_cube)?;
    let clause_cuts = gg
        .cut_roles
        .iter()
        .filter(|c| matches!(c, CutRole::Clause { .. }))
        .count();
    report.satisfiable = sat.is_some();
    report.hull_number = Some(hn.size);
    report.biconditional_holds = sat.is_some() == (hn.size <= n + 1);
    report.cuts = Some(CutCensus {
        total: gg.partial_cube.cuts.len(),
        expected: n + m + 1,
        clause_cuts,
        variable_cuts: gg.cut_roles.iter().filter(|c| matches!(c, CutRole::Var { .. })).count(),
    });
    report.vertices = Some(gg.graph.n());
    report.gadget_skipped = false;
    if let Some(a) = sat {
        let h = assignment_to_hull_set(&gg, &a)?;
        let forward = h.len() == n + 1
            && hull_halfspace(&gg.partial_cube.cuts, &h)
                .map_err(HullError::from)?
                .is_full();
        let backward = hn.size > n + 1 || hull_set_to_assignment(&gg, &hn.witness).is_ok();
        report.translations_ok = Some(forward && backward);
    }
    Ok(report)
}

/// Every preprocessed AM3 formula with exactly `n` variables and at most
/// `max_clauses` clauses, up to renaming variables, flipping polarities and
/// reordering clauses.
pub fn reduced_am3_formulas(n: usize, max_clauses: usize) -> Vec<CnfFormula> {
    let mut all_clauses: Vec<Vec<Literal>> = Vec::new();
    for mask in 1u32..1 << n {
        let vars: Vec<usize> = (0..n).filter(|&v| mask >> v & 1 == 1).collect();
        if vars.len() > 3 {
            continue;
        }
        for signs in 0u32..1 << vars.len() {
            all_clauses.push(
                vars.iter()
                    .enumerate()
                    .map(|(k, &v)| {
                        if signs >> k & 1 == 1 {
                            -((v + 1) as Literal)
                        } else {
                            (v + 1) as Literal
                        }
                    })
                    .collect(),
            );
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    extend_clause_multiset(n, max_clauses, &all_clauses, 0, &mut chosen, &mut |clauses| {
        let f = CnfFormula {
            num_vars: n,
            clauses: clauses.to_vec(),
        };
        let key = canonical_form(&f);
        if seen.insert(key.clone()) {
            out.push(CnfFormula {
                num_vars: n,
                clauses: key,
            });
        }
    });
    out
}

fn extend_clause_multiset(
    n: usize,
    max_clauses: usize,
    all: &[Vec<Literal>],
    from: usize,
    chosen: &mut Vec<Vec<Literal>>,
    emit: &mut dyn FnMut(&[Vec<Literal>]),
) {
    let mut pos = vec![0usize; n + 1];
    let mut neg = vec![0usize; n + 1];
    for &l in chosen.iter().flatten() {
        if l > 0 {
            pos[var_of(l)] += 1;
        } else {
            neg[var_of(l)] += 1;
        }
    }
    if (1..=n).any(|v| pos[v] + neg[v] > 3) {
        return;
    }
    if !chosen.is_empty() && (1..=n).all(|v| pos[v] > 0 && neg[v] > 0) {
        emit(chosen);
    }
    // Each variable still lacking a polarity needs one more clause.
    let missing = (1..=n).filter(|&v| pos[v] == 0 || neg[v] == 0).count();
    let remaining = max_clauses - chosen.len();
    if remaining == 0 || missing > 3 * remaining {
        return;
    }
    for k in from..all.len() {
        chosen.push(all[k].clone());
        extend_clause_multiset(n, max_clauses, all, k, chosen, emit);
        chosen.pop();
    }
}

/// Lexicographically least clause list over all variable permutations and
/// polarity flips, with literals and clauses sorted.
fn canonical_form(f: &CnfFormula) -> Vec<Vec<Literal>> {
    let n = f.num_vars;
    let mut perm: Vec<usize> = (0..n).collect();
    let mut best: Option<Vec<Vec<Literal>>> = None;
    loop {
        for flips in 0u32..1 << n {
            let mut clauses: Vec<Vec<Literal>> = f
                .clauses
                .iter()
                .map(|c| {
                    let mut c: Vec<Literal> = c
                        .iter()
                        .map(|&l| {
                            let v = var_of(l) - 1;
                            let flip = flips >> v & 1 == 1;
                            let nv = (perm[v] + 1) as Literal;
                            if (l > 0) != flip {
                                nv
                            } else {
                                -nv
                            }
                        })
                        .collect();
                    c.sort_by_key(|&l| (var_of(l), l < 0));
                    c
                })
                .collect();
            clauses.sort();
            if best.as_ref().is_none_or(|b| clauses < *b) {
                best = Some(clauses);
            }
        }
        if !next_permutation(&mut perm) {
            break;
        }
    }
    best.unwrap_or_default()
}

pub(crate) fn next_permutation(p: &mut [usize]) -> bool {
    let n = p.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && p[i - 1] >= p[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while p[j] <= p[i - 1] {
        j -= 1;
    }
    p.swap(i - 1, j);
    p[i..].reverse();
    true
}

/// A random AM3 formula over `1..=num_vars`: each variable gets one to three
/// occurrences of random polarity, dealt into clauses of up to three
/// literals without repeating a variable inside a clause. Clause lengths
/// lean towards three so that satisfiable instances are common.
pub fn random_am3<R: Rng>(rng: &mut R, num_vars: usize) -> CnfFormula {
    let mut occurrences: Vec<Literal> = Vec::new();
    for v in 1..=num_vars {
        for _ in 0..rng.gen_range(1..=3) {
            let l = v as Literal;
            occurrences.push(if rng.gen_bool(0.5) { l } else { -l });
        }
    }
    occurrences.shuffle(rng);
    let mut clauses: Vec<Vec<Literal>> = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let lengths = [2, 3, 3];
    let mut target = *lengths.choose(rng).expect("non-empty");
    for l in occurrences {
        if current.len() == target || current.iter().any(|&k| var_of(k) == var_of(l)) {
            clauses.push(std::mem::take(&mut current));
            target = *lengths.choose(rng).expect("non-empty");
        }
        current.push(l);
    }
    if !current.is_empty() {
        clauses.push(current);
    }
    CnfFormula::new(num_vars, clauses).expect("dealt occurrences respect the AM3 shape")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hullnum::is_hull_set;

    fn f1() -> CnfFormula {
        parse_dimacs("p cnf 2 2\n1 2 0\n-1 -2 0\n").unwrap()
    }

    #[test]
    fn parsing() {
        let f = f1();
        assert_eq!(f.clauses(), &[vec![1, 2], vec![-1, -2]]);
        assert!(matches!(
            parse_dimacs("p cnf 4 1\n1 2 3 4 0\n"),
            Err(SatError::ClauseTooLong { clause: 1, len: 4 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 2 4\n1 0\n1 2 0\n-1 0\n1 -2 0\n"),
            Err(SatError::TooManyOccurrences { var: 1, count: 4 })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n0\n"),
            Err(SatError::EmptyClause { .. })
        ));
        assert!(matches!(parse_dimacs("1 2 0\n"), Err(SatError::Parse { line: 1, .. })));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n1 1 0\n"),
            Err(SatError::RepeatedLiteral { .. })
        ));
        assert!(matches!(
            parse_dimacs("p cnf 1 1\n2 0\n"),
            Err(SatError::VariableOutOfRange { .. })
        ));
        let spread = parse_dimacs("c comment\np cnf 3 2\n1 -2\n 3 0 -1 0\n").unwrap();
        assert_eq!(spread.clauses(), &[vec![1, -2, 3], vec![-1]]);
    }

    #[test]
    fn pure_literals() {
        let f = parse_dimacs("p cnf 2 2\n1 2 0\n1 -2 0\n").unwrap();
        let p = preprocess_pure_literals(&f);
        assert_eq!(p.reduced.num_clauses(), 0);
        assert_eq!(p.fixed, vec![(1, true)]);
        let p = preprocess_pure_literals(&f1());
        assert_eq!(p.reduced, f1());
        assert!(p.fixed.is_empty());
        let contra = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        assert_eq!(preprocess_pure_literals(&contra).reduced, contra);
        let sparse = parse_dimacs("p cnf 3 2\n3 0\n-3 0\n").unwrap();
        let p = preprocess_pure_literals(&sparse);
        assert_eq!(p.reduced.clauses(), &[vec![1], vec![-1]]);
        assert_eq!(p.original_var, vec![3]);
        assert_eq!(p.lift(&[true]), vec![false, false, true]);
        let taut = parse_dimacs("p cnf 2 2\n1 -1 0\n2 0\n").unwrap();
        let p = preprocess_pure_literals(&taut);
        assert_eq!((p.tautologies_removed, p.reduced.num_clauses()), (1, 0));
    }

    #[test]
    fn f1_gadget() {
        let gg = build_gadget(&f1()).unwrap();
        assert_eq!(gg.graph.n(), 10);
        assert_eq!(gg.partial_cube.cuts.len(), 5);
        assert_eq!(gg.graph.labels().unwrap()[gg.anchor(1)], "d1_x1");
        assert_eq!(gg.graph.labels().unwrap()[gg.anchor(-2)], "d2_x2");
        let contra = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let gg = build_gadget(&contra).unwrap();
        assert_eq!((gg.graph.n(), gg.partial_cube.cuts.len()), (7, 4));
    }

    #[test]
    fn shared_literals_get_shared_vertices() {
        let f = parse_dimacs("p cnf 2 3\n1 2 0\n1 -2 0\n-1 0\n").unwrap();
        let gg = build_gadget(&f).unwrap();
        assert_eq!(gg.shared_vertex.keys().copied().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(gg.graph.labels().unwrap()[gg.anchor(1)], "d1,2_x1");
        assert_eq!(gg.partial_cube.cuts.len(), 2 + 3 + 1);
    }

    #[test]
    fn translations() {
        let gg = build_gadget(&f1()).unwrap();
        let d = &gg.partial_cube.distances;
        let h = assignment_to_hull_set(&gg, &[true, false]).unwrap();
        let want = VertexSet::from_ids(10, [gg.u_prime, gg.anchor(1), gg.anchor(-2)]);
        assert_eq!(h, want);
        assert!(is_hull_set(d, &h).unwrap());
        assert_eq!(hull_set_to_assignment(&gg, &h).unwrap(), vec![true, false]);
        let h = assignment_to_hull_set(&gg, &[true, true]).unwrap();
        assert_eq!(h.len(), 3);
        assert!(!is_hull_set(d, &h).unwrap());
        assert!(matches!(
            assignment_to_hull_set(&gg, &[true]),
            Err(SatError::IncompleteAssignment { .. })
        ));
        // u_x alone cannot reach the side of d2 opposite to u.
        let ux = gg.copies[0][&gg.u];
        let h = VertexSet::from_ids(10, [gg.u_prime, ux, gg.anchor(2)]);
        assert_eq!(hull_set_to_assignment(&gg, &h), Err(SatError::NotHullSet));
        let big = VertexSet::from_ids(10, [1, 2, 3, 4]);
        assert!(matches!(
            hull_set_to_assignment(&gg, &big),
            Err(SatError::HullSetTooLarge { .. })
        ));
    }

    #[test]
    fn reduction_reports() {
        let r = verify_reduction(&f1()).unwrap();
        assert!(r.satisfiable && r.biconditional_holds);
        assert_eq!((r.hull_number, r.n_plus_1), (Some(3), 3));
        assert_eq!(r.translations_ok, Some(true));
        let contra = parse_dimacs("p cnf 1 2\n1 0\n-1 0\n").unwrap();
        let r = verify_reduction(&contra).unwrap();
        assert!(!r.satisfiable && r.biconditional_holds);
        assert!(r.hull_number.unwrap() > 2);
        let pure = parse_dimacs("p cnf 2 2\n1 2 0\n1 -2 0\n").unwrap();
        let r = verify_reduction(&pure).unwrap();
        assert!(r.gadget_skipped && r.satisfiable && r.hull_number.is_none());
    }

    #[test]
    fn enumeration_is_reduced_and_canonical() {
        let one = reduced_am3_formulas(1, 3);
        // (x)(!x), (x)(!x)(x), (x)(!x)(!x) up to flipping.
        assert_eq!(one.len(), 2);
        for f in reduced_am3_formulas(2, 3) {
            assert_eq!(preprocess_pure_literals(&f).reduced, f);
            assert_eq!(canonical_form(&f), f.clauses);
        }
    }

    #[test]
    fn random_formulas_are_am3() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let f = random_am3(&mut rng, 6);
            assert!(CnfFormula::new(f.num_vars(), f.clauses().to_vec()).is_ok());
        }
    }
}
