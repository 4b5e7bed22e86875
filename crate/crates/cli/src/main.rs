//! `pcube`: command-line access to partial cube recognition, hulls, hull
//! numbers, the SAT gadget, poset dimension, quadrangulations and lattices.
//!
//! Results go to standard output as JSON (or a flat text rendering), and
//! diagnostics to standard error. Exit codes: 0 success, 1 unreadable or
//! malformed input, 2 a property does not hold (for example, the graph is
//! not a partial cube), 3 the input exceeds a size bound.

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pcube_core::convexity::{hull_closure, hull_halfspace, ConvexityError};
use pcube_core::crosscheck::{run_suite, DEFAULT_SEED};
use pcube_core::graph::{all_pairs_distances, load_graph, Graph, GraphError};
use pcube_core::hitting::HittingError;
use pcube_core::hullnum::{hull_number_brute, hull_number_exact_with, hull_number_onesided_with, HullError};
use pcube_core::lattice::{
    build_lattice_above, build_lattice_of, hull_number_lattice, is_uld, meet_irreducibles, verify_embedding,
    ConvexLattice, LatticeError,
};
use pcube_core::pcube::{recognize, verify_cut_conditions};
use pcube_core::planarquad::{hull_number_quad, QuadError, QuadMode, RotationSystem};
use pcube_core::poset::{dimension_bruteforce, dimension_via_hull, parse_poset, PosetError};
use pcube_core::satred::{build_gadget, parse_dimacs, preprocess_pure_literals, verify_reduction, SatError};
use pcube_core::VertexSet;

#[derive(Parser)]
#[command(
    name = "pcube",
    version,
    about = "Geodesic convexity and hull numbers on partial cubes"
)]
struct Cli {
    /// Write the result here instead of standard output.
    #[arg(short = 'o', long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Seed for randomized corpus generation.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Recognize a partial cube and print its hypercube embedding.
    Recognize {
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// Convex hull of a vertex set.
    Hull {
        #[arg(short = 'i', long)]
        input: PathBuf,
        /// Comma-separated vertex ids.
        #[arg(long, value_delimiter = ',', required = true)]
        set: Vec<usize>,
        #[arg(long, value_enum, default_value_t = HullMethod::Both)]
        method: HullMethod,
    },
    /// Hull number of a graph.
    Hullnum {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = HullnumMethod::Exact)]
        method: HullnumMethod,
    },
    /// Build the SAT-AM3 gadget graph of a DIMACS formula.
    SatGadget {
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// Check that the formula is satisfiable exactly when the gadget has
    /// hull number at most n + 1.
    SatVerify {
        #[arg(short = 'i', long)]
        input: PathBuf,
    },
    /// Poset dimension as the hull number of the linear extension graph.
    PosetDim {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = DimMethod::Hull)]
        method: DimMethod,
    },
    /// Hull number of a plane partial cube quadrangulation.
    QuadHullnum {
        #[arg(short = 'i', long)]
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = QuadModeArg::Trusted)]
        mode: QuadModeArg,
        /// Clockwise neighbor order, one line per vertex (strict mode).
        #[arg(long)]
        rotation: Option<PathBuf>,
    },
    /// Lattice of convex subgraphs containing a base vertex.
    Lattice {
        #[arg(short = 'i', long, required_unless_present = "lattice")]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        base: usize,
        #[arg(long)]
        check_uld: bool,
        #[arg(long)]
        verify_embedding: bool,
        /// Hull number from the lattice of all convex subgraphs.
        #[arg(long)]
        hullnum: bool,
        /// Use a lattice exported earlier instead of a graph.
        #[arg(long, conflicts_with = "input")]
        lattice: Option<PathBuf>,
    },
    /// Regenerate the instance corpus and run every cross-check.
    Corpus,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HullMethod {
    Halfspace,
    Closure,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum HullnumMethod {
    Exact,
    Onesided,
    Brute,
    All,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum DimMethod {
    Hull,
    Brute,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum QuadModeArg {
    Strict,
    Trusted,
}

/// A command that could not produce a successful result.
enum Failure {
    Input(String),
    Property(Value),
    Bound(String),
}

impl Failure {
    fn property(kind: &str, detail: impl ToString) -> Self {
        Failure::Property(json!({"error": kind, "message": detail.to_string()}))
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<HullError> for Failure {
    fn from(e: HullError) -> Self {
        match e {
            HullError::Bound(b) | HullError::Hitting(HittingError::Bound(b)) => Failure::Bound(b.to_string()),
            HullError::Convexity(c) => Failure::Input(c.to_string()),
            HullError::NotPartialCube(r) => Failure::Property(json!({"error": "not_a_partial_cube", "rejection": r})),
            other => Failure::property("hull_number", other),
        }
    }
}

impl From<ConvexityError> for Failure {
    fn from(e: ConvexityError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<SatError> for Failure {
    fn from(e: SatError) -> Self {
        match e {
            SatError::Parse { .. }
            | SatError::EmptyClause { .. }
            | SatError::ClauseTooLong { .. }
            | SatError::RepeatedLiteral { .. }
            | SatError::VariableOutOfRange { .. }
            | SatError::TooManyOccurrences { .. }
            | SatError::IncompleteAssignment { .. } => Failure::Input(e.to_string()),
            SatError::Bound(b) => Failure::Bound(b.to_string()),
            SatError::Hull(h) => h.into(),
            other => Failure::property("sat_reduction", other),
        }
    }
}

impl From<PosetError> for Failure {
    fn from(e: PosetError) -> Self {
        match e {
            PosetError::Parse { .. } | PosetError::ElementOutOfRange { .. } | PosetError::Cycle { .. } => {
                Failure::Input(e.to_string())
            }
            PosetError::Bound(b) => Failure::Bound(b.to_string()),
            PosetError::Hull(h) => h.into(),
            other => Failure::property("poset_dimension", other),
        }
    }
}

impl From<QuadError> for Failure {
    fn from(e: QuadError) -> Self {
        match e {
            QuadError::BadRotation(_) => Failure::Input(e.to_string()),
            QuadError::Hull(h) => h.into(),
            QuadError::NotQuadrangulation(report) => {
                Failure::Property(json!({"error": "not_a_quadrangulation", "report": report}))
            }
            other => Failure::property("quadrangulation", other),
        }
    }
}

impl From<LatticeError> for Failure {
    fn from(e: LatticeError) -> Self {
        match e {
            LatticeError::Json(_) => Failure::Input(e.to_string()),
            LatticeError::Bound(b) => Failure::Bound(b.to_string()),
            other => Failure::property("lattice", other),
        }
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<Graph, Failure> {
    Ok(load_graph(&read_input(path)?)?)
}

fn with_ref(paper_ref: &str, mut body: Value) -> Value {
    body["paper_ref"] = json!(paper_ref);
    body
}

const REF_RECOGNIZE: &str =
    "partial cubes are the graphs with a cut-partition crossed at most once by every shortest path";
const REF_HULL: &str = "the convex hull of a set is the intersection of the cut sides containing it";
const REF_HULLNUM: &str = "hull sets are the sets meeting both sides of every cut; one-sided variant min_v h_v + 1";
const REF_SAT: &str = "NP-completeness of the hull number of partial cubes via the SAT-AM3 gadget";
const REF_POSET: &str = "poset dimension equals the hull number of the linear extension graph";
const REF_QUAD: &str = "polynomial hull number of plane partial cube quadrangulations via chordal clique covers";
const REF_LATTICE: &str = "partial cubes embed isometrically in the Hasse diagram of their convex-subgraph lattice";
const REF_CORPUS: &str = "cross-validation of every equality against brute-force oracles";

fn recognize_cmd(input: &Path) -> Result<Value, Failure> {
    let g = read_graph(input)?;
    match recognize(&g) {
        Ok(pc) => {
            let conditions = verify_cut_conditions(&g, &pc.distances, &pc.cuts);
            let mut body = pc.to_json(&g);
            body["partial_cube"] = json!(true);
            body["cut_conditions"] = json!(conditions);
            Ok(with_ref(REF_RECOGNIZE, body))
        }
        Err(r) => Err(Failure::Property(with_ref(
            REF_RECOGNIZE,
            json!({"partial_cube": false, "rejection": r}),
        ))),
    }
}

fn hull_cmd(input: &Path, set: &[usize], method: HullMethod) -> Result<Value, Failure> {
    let g = read_graph(input)?;
    if let Some(&v) = set.iter().find(|&&v| v >= g.n()) {
        return Err(Failure::Input(format!("vertex {v} is not in the graph")));
    }
    let s = VertexSet::from_ids(g.n(), set.iter().copied());
    let d = all_pairs_distances(&g);
    let mut body = json!({"set": s});
    if method != HullMethod::Halfspace {
        let h = hull_closure(&d, &s)?;
        body["convex"] = json!(h == s);
        body["is_hull_set"] = json!(h.is_full());
        body["closure"] = json!(h);
    }
    if method != HullMethod::Closure {
        let pc =
            recognize(&g).map_err(|r| Failure::Property(json!({"error": "not_a_partial_cube", "rejection": r})))?;
        let h = hull_halfspace(&pc.cuts, &s)?;
        body["convex"] = json!(h == s);
        body["is_hull_set"] = json!(h.is_full());
        body["halfspace"] = json!(h);
    }
    if method == HullMethod::Both && body["closure"] != body["halfspace"] {
        return Err(Failure::Property(with_ref(
            REF_HULL,
            json!({"error": "hulls_disagree", "result": body}),
        )));
    }
    body["hull"] = body
        .get("closure")
        .or_else(|| body.get("halfspace"))
        .cloned()
        .unwrap_or(Value::Null);
    Ok(with_ref(REF_HULL, body))
}

fn hullnum_cmd(input: &Path, method: HullnumMethod) -> Result<Value, Failure> {
    let g = read_graph(input)?;
    let d = all_pairs_distances(&g);
    if method == HullnumMethod::Brute {
        let b = hull_number_brute(&d)?;
        return Ok(with_ref(
            REF_HULLNUM,
            json!({"hull_number": b.size, "witness": b.witness, "method": "brute"}),
        ));
    }
    let pc = recognize(&g).map_err(HullError::NotPartialCube)?;
    let mut methods = serde_json::Map::new();
    let mut sizes = Vec::new();
    if matches!(method, HullnumMethod::Exact | HullnumMethod::All) {
        let x = hull_number_exact_with(&g, &pc)?;
        sizes.push(x.size);
        methods.insert("exact".into(), json!(x));
    }
    if matches!(method, HullnumMethod::Onesided | HullnumMethod::All) {
        let o = hull_number_onesided_with(&g, &pc)?;
        sizes.push(o.size);
        methods.insert("onesided".into(), json!(o));
    }
    if method == HullnumMethod::All {
        match hull_number_brute(&d) {
            Ok(b) => {
                sizes.push(b.size);
                methods.insert("brute".into(), json!(b));
            }
            Err(HullError::Bound(b)) => {
                methods.insert("brute".into(), json!({"skipped": b.to_string()}));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let agree = sizes.windows(2).all(|w| w[0] == w[1]);
    let first = methods.values().next().cloned().unwrap_or(Value::Null);
    let body = json!({
        "hull_number": sizes[0],
        "witness": first["witness"],
        "methods": methods,
        "methods_agree": agree,
    });
    if agree {
        Ok(with_ref(REF_HULLNUM, body))
    } else {
        Err(Failure::Property(with_ref(REF_HULLNUM, body)))
    }
}

fn sat_gadget_cmd(input: &Path) -> Result<Value, Failure> {
    let f = parse_dimacs(&read_input(input)?)?;
    let pre = preprocess_pure_literals(&f);
    if pre.reduced.num_clauses() == 0 {
        return Ok(with_ref(
            REF_SAT,
            json!({"gadget": null, "reason": "preprocessing satisfied every clause", "preprocessing": pre}),
        ));
    }
    let gg = build_gadget(&pre.reduced)?;
    let labels = gg.graph.labels().expect("gadgets are labeled");
    let anchors: Vec<Value> = gg
        .anchors
        .iter()
        .enumerate()
        .map(|(x, [pos, neg])| json!({"var": x + 1, "positive": labels[*pos], "negative": labels[*neg]}))
        .collect();
    Ok(with_ref(
        REF_SAT,
        json!({
            "gadget": gg.graph.to_json(),
            "roles": gg.roles,
            "cut_roles": gg.cut_roles,
            "anchors": anchors,
            "n": gg.n(),
            "m": gg.formula.num_clauses(),
            "cuts": gg.partial_cube.cuts.len(),
            "preprocessing": pre,
        }),
    ))
}

fn sat_verify_cmd(input: &Path) -> Result<Value, Failure> {
    let f = parse_dimacs(&read_input(input)?)?;
    let r = verify_reduction(&f)?;
    let body = with_ref(REF_SAT, json!(r));
    if r.biconditional_holds && r.translations_ok != Some(false) {
        Ok(body)
    } else {
        Err(Failure::Property(body))
    }
}

fn poset_dim_cmd(input: &Path, method: DimMethod) -> Result<Value, Failure> {
    let p = parse_poset(&read_input(input)?)?;
    let mut body = json!({"elements": p.n()});
    if method != DimMethod::Brute {
        let d = dimension_via_hull(&p)?;
        body["dimension"] = json!(d.dimension);
        body["width"] = json!(d.width);
        body["num_extensions"] = json!(d.num_extensions);
        body["realizer"] = json!(d.realizer);
    }
    if method != DimMethod::Hull {
        let b = dimension_bruteforce(&p)?;
        body["brute_force_dimension"] = json!(b);
        if body.get("dimension").is_none() {
            body["dimension"] = json!(b);
        } else if body["dimension"] != json!(b) {
            return Err(Failure::Property(with_ref(REF_POSET, body)));
        }
    }
    Ok(with_ref(REF_POSET, body))
}

fn quad_cmd(input: &Path, mode: QuadModeArg, rotation: Option<&Path>) -> Result<Value, Failure> {
    let g = read_graph(input)?;
    let mode = match (mode, rotation) {
        (QuadModeArg::Strict, Some(path)) => QuadMode::Strict(RotationSystem::parse(&g, &read_input(path)?)?),
        (QuadModeArg::Strict, None) => return Err(Failure::Input("strict mode needs --rotation".into())),
        (QuadModeArg::Trusted, _) => QuadMode::Trusted,
    };
    let q = hull_number_quad(&g, &mode)?;
    Ok(with_ref(
        REF_QUAD,
        json!({
            "hull_number": q.size,
            "best_v": q.best_v,
            "witness": q.witness,
            "h_v": q.per_vertex,
        "rejected": q.rejected,
            "validation": q.report,
            "mode": if matches!(mode, QuadMode::Strict(_)) { "strict" } else { "trusted" },
        }),
    ))
}

fn lattice_cmd(
    input: Option<&Path>,
    base: usize,
    check_uld: bool,
    verify: bool,
    hullnum: bool,
    lattice: Option<&Path>,
) -> Result<Value, Failure> {
    let mut ok = true;
    let mut body;
    match (input, lattice) {
        (_, Some(path)) => {
            let l = ConvexLattice::from_json(&read_input(path)?)?;
            body = json!({"lattice": l.to_json()});
            if check_uld {
                let r = is_uld(&l);
                ok &= r.uld;
                body["uld"] = json!(r);
            }
            if hullnum {
                body["hull_number"] = json!(hull_number_lattice(&l)?);
            }
        }
        (Some(path), None) => {
            let g = read_graph(path)?;
            if base >= g.n() {
                return Err(Failure::Input(format!("base vertex {base} is not in the graph")));
            }
            let l = build_lattice_above(&g, base)?;
            body = json!({"base": base, "lattice": l.to_json(), "meet_irreducibles": meet_irreducibles(&l)});
            if check_uld {
                let r = is_uld(&l);
                ok &= r.uld;
                body["uld"] = json!(r);
            }
            if verify {
                let r = verify_embedding(&g, &all_pairs_distances(&g), base, &l);
                ok &= r.passed();
                body["embedding"] = json!(r);
            }
            if hullnum {
                let full = build_lattice_of(&g)?;
                body["hull_number"] = json!(hull_number_lattice(&full)?);
                body["lattice_size"] = json!(full.len());
            }
        }
        (None, None) => return Err(Failure::Input("give -i or --lattice".into())),
    }
    let body = with_ref(REF_LATTICE, body);
    if ok {
        Ok(body)
    } else {
        Err(Failure::Property(body))
    }
}

fn corpus_cmd(seed: u64) -> Result<Value, Failure> {
    let report = run_suite(seed);
    let body = with_ref(REF_CORPUS, json!(report));
    if report.passed {
        Ok(body)
    } else {
        for s in report.sections.iter().filter(|s| !s.passed()) {
            eprintln!("section {} has {} failure(s)", s.name, s.failures.len());
        }
        Err(Failure::Property(body))
    }
}

fn render_text(v: &Value) -> String {
    let mut out = String::new();
    match v.as_object() {
        Some(map) => {
            for (k, val) in map {
                let shown = match val {
                    Value::String(s) => s.clone(),
                    other => other.to_string(),
                };
                out.push_str(&format!("{k}: {shown}\n"));
            }
        }
        None => {
            out.push_str(&v.to_string());
            out.push('\n');
        }
    }
    out
}

fn emit(cli: &Cli, v: &Value) -> io::Result<()> {
    let text = match cli.format {
        Format::Json => serde_json::to_string_pretty(v).expect("values serialize") + "\n",
        Format::Text => render_text(v),
    };
    match &cli.output {
        Some(path) => fs::write(path, text),
        None => io::stdout().write_all(text.as_bytes()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Recognize { input } => recognize_cmd(input),
        Command::Hull { input, set, method } => hull_cmd(input, set, *method),
        Command::Hullnum { input, method } => hullnum_cmd(input, *method),
        Command::SatGadget { input } => sat_gadget_cmd(input),
        Command::SatVerify { input } => sat_verify_cmd(input),
        Command::PosetDim { input, method } => poset_dim_cmd(input, *method),
        Command::QuadHullnum { input, mode, rotation } => quad_cmd(input, *mode, rotation.as_deref()),
        Command::Lattice {
            input,
            base,
            check_uld,
            verify_embedding,
            hullnum,
            lattice,
        } => lattice_cmd(
            input.as_deref(),
            *base,
            *check_uld,
            *verify_embedding,
            *hullnum,
            lattice.as_deref(),
        ),
        Command::Corpus => corpus_cmd(cli.seed),
    };
    let (value, code) = match result {
        Ok(v) => (v, 0),
        Err(Failure::Property(v)) => (v, 2),
        Err(Failure::Input(msg)) => {
            eprintln!("pcube: {msg}");
            (json!({"error": "input", "message": msg}), 1)
        }
        Err(Failure::Bound(msg)) => {
            eprintln!("pcube: {msg}");
            (json!({"error": "bound_exceeded", "message": msg}), 3)
        }
    };
    if let Err(e) = emit(&cli, &value) {
        eprintln!("pcube: cannot write output: {e}");
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
