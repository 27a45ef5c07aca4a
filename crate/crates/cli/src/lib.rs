//! Command-line front end. `run` parses arguments, owns the thread pool and
//! maps outcomes to exit codes; results go to stdout or `--out`, diagnostics
//! to stderr.

pub mod family;

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use family::{Domain, FamilySpec, Object};
use toriclass::census::{census, CensusKind, CensusQuery, CensusRecord, GraphFilter, VerifyReport, VERIFY_IDS};
use toriclass::classgroup::{class_group, IdpPolicy};
use toriclass::equivalence::{equivalence_search, verify_witness, DEFAULT_BUDGET};
use toriclass::graph::{GraphDoc, SimpleGraph};
use toriclass::polytope::{IdpCertificate, LatticePolytope, PolytopeDoc};
use toriclass::poset::{Poset, PosetDoc};
use toriclass::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_COUNTEREXAMPLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INEQUIVALENT: i32 = 3;
pub const EXIT_BUDGET: i32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
    Dot,
}

#[derive(Debug, Parser)]
#[command(name = "toriclass", version, about = "Class groups and unimodular equivalence of toric rings of lattice polytopes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: Global,
}

#[derive(Debug, Args)]
pub struct Global {
    #[arg(long, global = true, value_enum, default_value = "json")]
    pub format: Format,
    /// Write results here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; 0 uses every core.
    #[arg(long, global = true, default_value_t = 0)]
    pub jobs: usize,
    /// Census cache directory [env TORICLASS_CACHE, default `cache`].
    #[arg(long, global = true)]
    pub cache: Option<PathBuf>,
    /// Node budget per equivalence search.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    pub budget: u64,
    /// Seed of the randomized suites.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Highest dilation examined by the IDP check [default: dimension].
    #[arg(long, global = true)]
    pub degree_bound: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Show a poset given by a family spec or a JSON document.
    Poset {
        input: String,
        /// Add bottom and top elements to the Hasse diagram.
        #[arg(long)]
        hat: bool,
    },
    /// Show a graph given by a family spec or a JSON document.
    Graph { input: String },
    /// Build a polytope; posets and graphs need `--kind`.
    Polytope {
        input: String,
        #[arg(long, value_enum)]
        kind: Option<PolyKind>,
    },
    /// Divisor class group of the toric ring.
    Classgroup {
        input: Option<String>,
        #[arg(long, conflicts_with_all = ["input", "poset_family"])]
        graph_family: Option<String>,
        #[arg(long, conflicts_with = "input")]
        poset_family: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<PolyKind>,
    },
    /// Search for a unimodular equivalence between two polytopes.
    Equiv {
        #[arg(long, conflicts_with = "a_pos")]
        a: Option<String>,
        #[arg(long, conflicts_with = "b_pos")]
        b: Option<String>,
        #[arg(value_name = "A")]
        a_pos: Option<String>,
        #[arg(value_name = "B")]
        b_pos: Option<String>,
        #[arg(long, value_enum)]
        kind: Option<PolyKind>,
    },
    /// Classify census polytopes by class group.
    Census {
        #[arg(long, value_enum)]
        kind: Option<PolyKind>,
        #[arg(long)]
        max_n: usize,
        /// Extra graph conditions, e.g. `two_connected,bipartite`.
        #[arg(long, default_value = "")]
        filter: String,
        #[arg(long)]
        rank: Option<usize>,
    },
    /// Run an exhaustive check; `all` runs every registered id.
    Verify {
        id: String,
        #[arg(long, default_value_t = 6)]
        max_elements: usize,
        #[arg(long, default_value_t = 7)]
        max_vertices: usize,
        #[arg(long, default_value_t = 8)]
        max_census_vertices: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PolyKind {
    Order,
    Chain,
    Stable,
    Edge,
}

impl PolyKind {
    fn census(self) -> Option<CensusKind> {
        match self {
            PolyKind::Order => Some(CensusKind::Order),
            PolyKind::Stable => Some(CensusKind::Stable),
            PolyKind::Edge => Some(CensusKind::Edge),
            PolyKind::Chain => None,
        }
    }

    fn of_domain(d: Domain) -> Option<PolyKind> {
        match d {
            Domain::Order => Some(PolyKind::Order),
            Domain::Chain => Some(PolyKind::Chain),
            Domain::Stable => Some(PolyKind::Stable),
            Domain::Edge => Some(PolyKind::Edge),
            Domain::Poset | Domain::Graph => None,
        }
    }
}

/// Failure carrying its exit code; printed to stderr by `main`.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn input(msg: impl Into<String>) -> Self {
        Failure { code: EXIT_INPUT, message: msg.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::SearchBudgetExceeded(_) => EXIT_BUDGET,
            _ => EXIT_INPUT,
        };
        Failure { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// What a subcommand produced: bytes for the output and an exit code.
pub struct Output {
    pub body: String,
    pub code: i32,
    /// Human-readable lines for stderr.
    pub diagnostics: String,
}

impl Output {
    fn ok(body: String) -> Self {
        Output { body, code: EXIT_OK, diagnostics: String::new() }
    }
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn no_dot(what: &str) -> Failure {
    Failure::input(format!("--format dot is not available for {what}"))
}

/// A resolved input: a combinatorial object or a polytope.
enum Input {
    Poset(Poset),
    Graph(SimpleGraph),
    /// A polytope together with the kind it came from, if known.
    Polytope(LatticePolytope, Option<(PolyKind, Object)>),
}

fn read_json(path: &str) -> CliResult<Value> {
    let text = std::fs::read_to_string(path).map_err(|e| Failure::input(format!("{path}: {e}")))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{path}: {e}")))
}

fn from_value<T: serde::de::DeserializeOwned>(path: &str, v: Value) -> CliResult<T> {
    serde_json::from_value(v).map_err(|e| Failure::input(format!("{path}: {e}")))
}

fn resolve(input: &str) -> CliResult<Input> {
    if family::is_family_spec(input) {
        let FamilySpec { domain, object } =
            family::parse_spec(input).map_err(|e| Failure::input(format!("family spec '{input}': {e}")))?;
        return match PolyKind::of_domain(domain) {
            Some(kind) => Ok(Input::Polytope(build(kind, &object)?, Some((kind, object)))),
            None => Ok(match object {
                Object::Poset(p) => Input::Poset(p),
                Object::Graph(g) => Input::Graph(g),
            }),
        };
    }
    let v = read_json(input)?;
    let has = |k: &str| v.get(k).is_some();
    if has("ambient_dim") {
        let doc: PolytopeDoc = from_value(input, v)?;
        Ok(Input::Polytope(LatticePolytope::from_doc(&doc)?, None))
    } else if has("size") && has("covers") {
        let doc: PosetDoc = from_value(input, v)?;
        Ok(Input::Poset(Poset::from_doc(&doc)?))
    } else if has("n") && has("edges") {
        let doc: GraphDoc = from_value(input, v)?;
        Ok(Input::Graph(SimpleGraph::from_doc(&doc)?))
    } else if has("kind") && has("source") {
        let rec: CensusRecord = from_value(input, v)?;
        let kind = match rec.kind {
            CensusKind::Order => PolyKind::Order,
            CensusKind::Stable => PolyKind::Stable,
            CensusKind::Edge => PolyKind::Edge,
        };
        let object = match &rec.source {
            toriclass::census::Source::Poset(d) => Object::Poset(Poset::from_doc(d)?),
            toriclass::census::Source::Graph(d) => Object::Graph(SimpleGraph::from_doc(d)?),
        };
        Ok(Input::Polytope(build(kind, &object)?, Some((kind, object))))
    } else {
        Err(Failure::input(format!("{input}: not a poset, graph, polytope or census record document")))
    }
}

fn build(kind: PolyKind, object: &Object) -> CliResult<LatticePolytope> {
    Ok(match (kind, object) {
        (PolyKind::Order, Object::Poset(p)) => p.order_polytope()?,
        (PolyKind::Chain, Object::Poset(p)) => p.chain_polytope()?,
        (PolyKind::Stable, Object::Graph(g)) => g.stable_set_polytope()?,
        (PolyKind::Edge, Object::Graph(g)) => g.edge_polytope()?,
        (k, Object::Poset(_)) => return Err(Failure::input(format!("kind {k:?} needs a graph, got a poset"))),
        (k, Object::Graph(_)) => return Err(Failure::input(format!("kind {k:?} needs a poset, got a graph"))),
    })
}

/// Turns any input into a polytope, using `kind` for posets and graphs.
fn polytope_of(input: Input, kind: Option<PolyKind>) -> CliResult<(LatticePolytope, Option<(PolyKind, Object)>)> {
    let object = match input {
        Input::Polytope(p, src) => {
            if let (Some(k), Some((sk, _))) = (kind, &src) {
                if k != *sk {
                    return Err(Failure::input(format!("--kind {k:?} contradicts the input's kind {sk:?}")));
                }
            }
            return Ok((p, src));
        }
        Input::Poset(p) => Object::Poset(p),
        Input::Graph(g) => Object::Graph(g),
    };
    let kind = kind.ok_or_else(|| Failure::input("posets and graphs need --kind to name a polytope"))?;
    Ok((build(kind, &object)?, Some((kind, object))))
}

/// Skips the IDP check for polytopes whose toric rings are known normal.
fn idp_policy(src: &Option<(PolyKind, Object)>, degree_bound: Option<usize>) -> CliResult<IdpPolicy> {
    let known = match src {
        Some((PolyKind::Order | PolyKind::Chain, _)) => true,
        Some((PolyKind::Stable, Object::Graph(g))) => g.is_perfect()?,
        Some((PolyKind::Edge, Object::Graph(g))) => g.odd_cycle_condition(),
        _ => false,
    };
    Ok(if known { IdpPolicy::Assume } else { IdpPolicy::Check(degree_bound) })
}

fn show_poset(p: &Poset, hat: bool, fmt: Format) -> CliResult<String> {
    Ok(match fmt {
        Format::Json => json(&p.to_doc()),
        Format::Dot => p.to_dot(hat),
        Format::Text => {
            let covers: Vec<String> = p.covers().iter().map(|(a, b)| format!("{}<{}", a + 1, b + 1)).collect();
            let mut s = format!("poset on {} elements\ncovers: {}\n", p.size(), covers.join(" "));
            writeln!(s, "ideals: {}", p.ideals()?.len()).unwrap();
            writeln!(s, "antichains: {}", p.antichains()?.len()).unwrap();
            writeln!(s, "hibi rank: {}", p.hibi_rank()).unwrap();
            writeln!(s, "contains X-shape: {}", p.contains_x_shape()).unwrap();
            s
        }
    })
}

fn show_graph(g: &SimpleGraph, fmt: Format) -> CliResult<String> {
    Ok(match fmt {
        Format::Json => json(&g.to_doc()),
        Format::Dot => g.to_dot(),
        Format::Text => {
            let edges: Vec<String> = g.edges().iter().map(|(a, b)| format!("{}-{}", a + 1, b + 1)).collect();
            let mut s = format!("graph on {} vertices, {} edges\nedges: {}\n", g.n(), g.edge_count(), edges.join(" "));
            writeln!(s, "connected: {}", g.is_connected()).unwrap();
            writeln!(s, "bipartite: {}", g.is_bipartite()).unwrap();
            writeln!(s, "perfect: {}", g.is_perfect()?).unwrap();
            writeln!(s, "odd cycle condition: {}", g.odd_cycle_condition()).unwrap();
            writeln!(s, "maximal cliques: {}", g.maximal_cliques().len()).unwrap();
            let b = g.blocks();
            writeln!(s, "blocks: {}", b.blocks.len()).unwrap();
            s
        }
    })
}

fn show_polytope(p: &LatticePolytope, g: &Global) -> CliResult<String> {
    Ok(match g.format {
        Format::Json => json(&p.to_full_doc()),
        Format::Dot => return Err(no_dot("polytopes")),
        Format::Text => {
            let mut s = format!("dimension {} in Z^{}\n", p.dim(), p.ambient_dim());
            writeln!(s, "vertices: {}", p.vertex_count()).unwrap();
            writeln!(s, "facets: {}", if p.dim() == 0 { 0 } else { p.facets()?.len() }).unwrap();
            writeln!(s, "lattice points: {}", p.lattice_points().ambient.len()).unwrap();
            writeln!(s, "normalized volume: {}", p.normalized_volume()?).unwrap();
            let idp = match p.is_idp(g.degree_bound) {
                IdpCertificate::Idp => "yes".to_string(),
                IdpCertificate::NotIdp { witness, degree } => format!("no ({witness:?} in degree {degree})"),
                IdpCertificate::Inconclusive { bound } => format!("undecided up to degree {bound}"),
            };
            writeln!(s, "IDP: {idp}").unwrap();
            writeln!(s, "pyramid apexes: {}", p.pyramid_reduce().1).unwrap();
            s
        }
    })
}

fn classgroup_cmd(
    input: Option<String>,
    graph_family: Option<String>,
    poset_family: Option<String>,
    kind: Option<PolyKind>,
    g: &Global,
) -> CliResult<Output> {
    let named = |r: Result<Object, family::SpecError>, s: &str| {
        r.map(|o| match o {
            Object::Poset(p) => Input::Poset(p),
            Object::Graph(g) => Input::Graph(g),
        })
        .map_err(|e| Failure::input(format!("family '{s}': {e}")))
    };
    let input = match (input, graph_family, poset_family) {
        (Some(i), None, None) => resolve(&i)?,
        (None, Some(f), None) => named(family::parse_graph_family(&f).map(Object::Graph), &f)?,
        (None, None, Some(f)) => named(family::parse_poset_family(&f).map(Object::Poset), &f)?,
        _ => return Err(Failure::input("give exactly one of an input, --graph-family or --poset-family")),
    };
    let (p, src) = polytope_of(input, kind)?;
    let cg = class_group(&p, idp_policy(&src, g.degree_bound)?)?;
    let body = match g.format {
        Format::Json => json(&cg.group()),
        Format::Text => format!(
            "Cl = {}\nfacets: {}\ndivisor matrix rank: {}\n",
            cg.group(),
            cg.psi_size,
            cg.matrix_rank
        ),
        Format::Dot => return Err(no_dot("class groups")),
    };
    Ok(Output::ok(body))
}

fn equiv_cmd(a: String, b: String, kind: Option<PolyKind>, g: &Global) -> CliResult<Output> {
    let (pa, _) = polytope_of(resolve(&a)?, kind)?;
    let (pb, _) = polytope_of(resolve(&b)?, kind)?;
    match equivalence_search(&pa, &pb, g.budget) {
        Ok((Some(w), stats)) => {
            if !verify_witness(&pa, &pb, &w) {
                return Err(Failure { code: EXIT_COUNTEREXAMPLE, message: "search returned an unsound witness".into() });
            }
            let body = match g.format {
                Format::Json => json(&w),
                Format::Text => {
                    let rows: Vec<String> = w.matrix.iter().map(|r| format!("{r:?}")).collect();
                    format!(
                        "equivalent ({} coordinates)\nmatrix: {}\ntranslation: {:?}\n",
                        if w.reduced { "reduced" } else { "ambient" },
                        rows.join(" "),
                        w.translation
                    )
                }
                Format::Dot => return Err(no_dot("witnesses")),
            };
            Ok(Output { body, code: EXIT_OK, diagnostics: format!("search nodes: {}\n", stats.nodes) })
        }
        Ok((None, stats)) => Ok(Output {
            body: String::new(),
            code: EXIT_INEQUIVALENT,
            diagnostics: format!("not unimodularly equivalent (search nodes: {})\n", stats.nodes),
        }),
        Err(e) => Err(e.into()),
    }
}

fn cache_dir(g: &Global) -> PathBuf {
    g.cache
        .clone()
        .or_else(|| std::env::var_os("TORICLASS_CACHE").map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("cache"))
}

fn census_cmd(kind: Option<PolyKind>, max_n: usize, filter: &str, rank: Option<usize>, g: &Global) -> CliResult<Output> {
    let kind = match kind {
        Some(k) => Some(k.census().ok_or_else(|| Failure::input("the census covers order, stable and edge polytopes"))?),
        None => None,
    };
    let filter: GraphFilter = filter.parse()?;
    let query = CensusQuery { kind, max_n, filter, rank };
    let dir = cache_dir(g);
    let records = census(&query, Some(Path::new(&dir)))?;
    let body = match g.format {
        Format::Json => json(&records),
        Format::Text => {
            let mut s = String::new();
            for r in &records {
                let t = if r.torsion.is_empty() { String::new() } else { format!(" torsion {:?}", r.torsion) };
                let core = if r.pyramid_apexes > 0 { format!(" ({} apexes)", r.pyramid_apexes) } else { String::new() };
                writeln!(s, "{} {} rank {}{t}{core}", r.kind, r.id, r.rank).unwrap();
            }
            s
        }
        Format::Dot => return Err(no_dot("census records")),
    };
    Ok(Output { body, code: EXIT_OK, diagnostics: format!("{} records\n", records.len()) })
}

fn verify_code(r: &VerifyReport) -> i32 {
    let undecided = r.counterexamples.iter().filter(|c| c.ends_with("undecided within budget")).count();
    if r.counterexamples.len() > undecided {
        EXIT_COUNTEREXAMPLE
    } else if !r.budget_exits.is_empty() || undecided > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    }
}

fn verify_cmd(id: &str, bounds: toriclass::census::Bounds, g: &Global) -> CliResult<Output> {
    let ids: Vec<&str> = if id == "all" { VERIFY_IDS.to_vec() } else { vec![id] };
    let mut reports = Vec::new();
    let mut diagnostics = String::new();
    for id in ids {
        let r = toriclass::census::verify(id, &bounds)?;
        diagnostics += &r.summary();
        reports.push(r);
    }
    // counterexamples outrank budget exits
    let code = reports.iter().map(verify_code).fold(EXIT_OK, |a, c| match (a, c) {
        (EXIT_COUNTEREXAMPLE, _) | (_, EXIT_COUNTEREXAMPLE) => EXIT_COUNTEREXAMPLE,
        (EXIT_BUDGET, _) | (_, EXIT_BUDGET) => EXIT_BUDGET,
        _ => EXIT_OK,
    });
    let body = match g.format {
        Format::Json if reports.len() == 1 => json(&reports[0]),
        Format::Json => json(&reports),
        Format::Text => diagnostics.clone(),
        Format::Dot => return Err(no_dot("verification reports")),
    };
    Ok(Output { body, code, diagnostics })
}

fn dispatch(cmd: Command, g: &Global) -> CliResult<Output> {
    match cmd {
        Command::Poset { input, hat } => match resolve(&input)? {
            Input::Poset(p) | Input::Polytope(_, Some((_, Object::Poset(p)))) => {
                Ok(Output::ok(show_poset(&p, hat, g.format)?))
            }
            _ => Err(Failure::input(format!("{input} does not describe a poset"))),
        },
        Command::Graph { input } => match resolve(&input)? {
            Input::Graph(x) | Input::Polytope(_, Some((_, Object::Graph(x)))) => Ok(Output::ok(show_graph(&x, g.format)?)),
            _ => Err(Failure::input(format!("{input} does not describe a graph"))),
        },
        Command::Polytope { input, kind } => {
            let (p, _) = polytope_of(resolve(&input)?, kind)?;
            Ok(Output::ok(show_polytope(&p, g)?))
        }
        Command::Classgroup { input, graph_family, poset_family, kind } => {
            classgroup_cmd(input, graph_family, poset_family, kind, g)
        }
        Command::Equiv { a, b, a_pos, b_pos, kind } => {
            let mut pos = [a_pos, b_pos].into_iter().flatten();
            let a = a.or_else(|| pos.next());
            let b = b.or_else(|| pos.next());
            match (a, b, pos.next()) {
                (Some(a), Some(b), None) => equiv_cmd(a, b, kind, g),
                _ => Err(Failure::input("equiv needs exactly two inputs (--a/--b or positional)")),
            }
        }
        Command::Census { kind, max_n, filter, rank } => census_cmd(kind, max_n, &filter, rank, g),
        Command::Verify { id, max_elements, max_vertices, max_census_vertices } => {
            let bounds = toriclass::census::Bounds {
                max_elements,
                max_vertices,
                max_census_vertices,
                budget: g.budget,
                seed: g.seed,
            };
            verify_cmd(&id, bounds, g)
        }
    }
}

/// Runs the command line `args` (including the program name), returning the
/// exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    if cli.global.jobs > 0 {
        // a second call in the same process keeps the first pool
        let _ = rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build_global();
    }
    let out = match dispatch(cli.command, &cli.global) {
        Ok(o) => o,
        Err(f) => {
            eprintln!("error: {}", f.message);
            return f.code;
        }
    };
    eprint!("{}", out.diagnostics);
    let written = match &cli.global.out {
        Some(path) => std::fs::write(path, &out.body).map_err(|e| format!("{}: {e}", path.display())),
        None => {
            use std::io::Write;
            let mut so = std::io::stdout().lock();
            so.write_all(out.body.as_bytes()).and_then(|_| so.flush()).map_err(|e| e.to_string())
        }
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INPUT;
    }
    out.code
}

#[cfg(test)]
mod tests {
    use super::*;
    use toriclass::census::Bounds;

    fn report(counterexamples: &[&str], budget_exits: usize) -> VerifyReport {
        VerifyReport {
            theorem_id: "x".into(),
            bounds: Bounds::default(),
            instance_count: 1,
            counterexamples: counterexamples.iter().map(|s| s.to_string()).collect(),
            budget_exits: vec!["b".into(); budget_exits],
            notes: Vec::new(),
            wall_time: Default::default(),
        }
    }

    #[test]
    fn counterexamples_outrank_budget_exits() {
        assert_eq!(verify_code(&report(&[], 0)), EXIT_OK);
        assert_eq!(verify_code(&report(&["p: undecided within budget"], 1)), EXIT_BUDGET);
        assert_eq!(verify_code(&report(&["p: undecided within budget", "q: rank 3"], 1)), EXIT_COUNTEREXAMPLE);
    }
}
