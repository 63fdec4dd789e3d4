//! Command-line front end.
//!
//! Exit codes: 0 when the command succeeds or the checked property holds,
//! 1 when a property is refuted (a witness is printed), 2 on usage or input
//! errors.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lzero_core::antibasis::{
    check_growth, check_star, distance_set_pullback, gen_star, verify_interval, verify_separation, AntibasisError,
    GenStrategy, IntervalMode, StarReport,
};
use lzero_core::coloring::{bounded_dilength_two_color, non_onto_two_color, parity_two_color, two_color, ColorError, Coloring};
use lzero_core::hom::{check_compatibility, check_hom, extend_hom, find_hom, pipeline_hom, HomError, HomViolation, PipelineError};
use lzero_core::metrics::{didist, didistance_set, dist, walk_dilength, MetricError, Walk};
use lzero_core::stage::{
    build_oriented_path, build_oriented_stage, build_path, build_stage, sibling_pairs, verify_stage, StageError, StageReport,
};
use lzero_core::{DirectionWord, FiniteGraph, OddPair, OddSequence, ParamError, Vertex};
use rand::Rng;
use serde_json::{json, Value};

use crate::corpus;
use crate::doc::{self, DocError};
use crate::dot::{export_dot, DotStyle};

pub const MAX_STAGE_VAR: &str = "LZERO_MAX_STAGE";
pub const DEFAULT_MAX_STAGE: usize = 6;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Doc { path: PathBuf, source: DocError },
    #[error(transparent)]
    Vertex(#[from] DocError),
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Stage(#[from] StageError),
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error(transparent)]
    Color(#[from] ColorError),
    #[error(transparent)]
    Hom(#[from] HomError),
    #[error(transparent)]
    Antibasis(#[from] AntibasisError),
}

#[derive(Debug, Parser)]
#[command(name = "lzero", version, about = "Stage graphs, homomorphism extension and didistance checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a stage graph, an oriented stage graph or a path.
    Build(BuildArgs),
    /// Run a verification suite.
    #[command(subcommand)]
    Verify(VerifyCmd),
    /// Undirected distance between two vertices.
    Dist(PairQuery),
    /// Directed distance between two vertices of an oriented forest.
    Didist(PairQuery),
    /// All didistances realized inside a vertex set.
    DidistSet(SetQuery),
    /// Two-colorings and their witnesses.
    #[command(subcommand)]
    Color(ColorCmd),
    /// Homomorphism checks, search, extension and the staged pipeline.
    #[command(subcommand)]
    Hom(HomCmd),
    /// Growth property checks and generation.
    #[command(subcommand)]
    Star(StarCmd),
    /// Didistance intervals, separation and pullbacks on truncations.
    #[command(subcommand)]
    Antibasis(AntibasisCmd),
    /// Render a graph document or a freshly built stage as DOT.
    ExportDot(ExportDotArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Dot,
}

#[derive(Debug, Args)]
struct StageSpec {
    /// Odd lengths `c(0),c(1),..`.
    #[arg(long, value_name = "LIST")]
    c: Option<OddSequence>,
    #[arg(long)]
    stage: Option<usize>,
    /// Direction words, one per stage, e.g. `+-+,+++`.
    #[arg(long, value_delimiter = ',', value_name = "WORDS")]
    d: Vec<DirectionWord>,
    /// Draw the direction words at random (see --seed).
    #[arg(long)]
    random_directions: bool,
    #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
    seed: u64,
}

#[derive(Debug, Args)]
struct BuildArgs {
    #[command(flatten)]
    spec: StageSpec,
    /// Build the path `0..=N` instead of a stage graph.
    #[arg(long, value_name = "N", conflicts_with = "c")]
    path: Option<u64>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Debug, Args)]
struct ExportDotArgs {
    #[arg(long, conflicts_with = "c")]
    graph: Option<PathBuf>,
    #[command(flatten)]
    spec: StageSpec,
    /// Plain node list without copy clusters.
    #[arg(long)]
    flat: bool,
    #[arg(long, default_value = "L")]
    name: String,
}

#[derive(Debug, Subcommand)]
enum VerifyCmd {
    /// Path, endpoint, vertex-set and projection invariants of every stage.
    Stage {
        #[arg(long)]
        c: OddSequence,
        #[arg(long)]
        max_stage: Option<usize>,
    },
    /// Walk dilength equals endpoint didist on random oriented forests.
    Dilength {
        #[arg(long, default_value_t = 100)]
        forests: usize,
        #[arg(long, default_value_t = 10)]
        walks: usize,
        #[arg(long, default_value_t = 40)]
        max_vertices: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
    },
    /// Symmetrizing an oriented stage gives the undirected stage.
    Symmetry {
        #[arg(long)]
        c: OddSequence,
        #[arg(long)]
        max_stage: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = corpus::DEFAULT_SEED)]
        seed: u64,
    },
    /// Sibling vertices are an odd distance apart.
    Siblings {
        #[arg(long)]
        c: OddSequence,
        #[arg(long)]
        max_stage: Option<usize>,
    },
}

#[derive(Debug, Args)]
struct PairQuery {
    #[arg(long)]
    graph: PathBuf,
    /// Vertex as `k,t0,t1,..`.
    #[arg(long)]
    from: String,
    #[arg(long)]
    to: String,
}

#[derive(Debug, Args)]
struct SetQuery {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    set: PathBuf,
}

#[derive(Debug, Subcommand)]
enum ColorCmd {
    /// Proper 2-coloring, or an odd cycle.
    Two {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Coloring of the components meeting A giving A one color.
    Parity(SetQuery),
    /// Coloring of the components meeting A on an oriented forest.
    Bounded(SetQuery),
    /// Coloring of the source components not mapped onto a target component.
    NonOnto(MapQuery),
}

#[derive(Debug, Args)]
struct MapQuery {
    #[arg(long)]
    source: PathBuf,
    #[arg(long)]
    target: PathBuf,
    #[arg(long)]
    phi: PathBuf,
}

#[derive(Debug, Subcommand)]
enum HomCmd {
    Check(MapQuery),
    /// Backtracking search for a homomorphism.
    Find {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        target: PathBuf,
        /// `{"constraints": [[src, [dst, ..]], ..]}`.
        #[arg(long)]
        constraints: Option<PathBuf>,
    },
    /// Extend a map into stage n to one into stage n+1.
    Extend {
        #[arg(long)]
        source: PathBuf,
        #[arg(long)]
        b: PathBuf,
        /// Defaults to every source vertex.
        #[arg(long)]
        bp: Option<PathBuf>,
        #[arg(long)]
        phi: PathBuf,
        #[arg(long)]
        c: OddSequence,
        #[arg(long)]
        n: usize,
    },
    /// Staged extension from a truncation into the stages of another sequence.
    Pipeline {
        #[arg(long)]
        c0: OddSequence,
        #[arg(long)]
        c: OddSequence,
        #[arg(long)]
        depth: usize,
        /// Include the final map in the report.
        #[arg(long)]
        emit_map: bool,
    },
}

#[derive(Debug, Args)]
struct PairSpec {
    #[arg(long, value_name = "LIST")]
    c: Option<OddSequence>,
    /// Direction words; all +1 when omitted.
    #[arg(long, value_delimiter = ',', value_name = "WORDS")]
    d: Vec<DirectionWord>,
    /// Use the minimal all-plus pair with this many stages.
    #[arg(long, value_name = "STAGES", conflicts_with = "c")]
    minimal: Option<usize>,
}

#[derive(Debug, Subcommand)]
enum StarCmd {
    /// Check the growth property, or the f-form condition with --f.
    Check {
        #[command(flatten)]
        pair: PairSpec,
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<u64>>,
    },
    /// Least all-plus pair satisfying the property (or the f-form with --f).
    Gen {
        #[arg(long)]
        stages: usize,
        #[arg(long, value_delimiter = ',')]
        f: Option<Vec<u64>>,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Mode {
    Raw,
    Tight,
}

#[derive(Debug, Subcommand)]
enum AntibasisCmd {
    /// Didistance intervals between points of a truncation.
    Interval {
        #[command(flatten)]
        pair: PairSpec,
        /// Index bits, e.g. `101`.
        #[arg(long, value_parser = parse_bits)]
        t: Bits,
        #[arg(long)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Mode::Tight)]
        mode: Mode,
    },
    /// Ratio separation between the large didistances of two truncations.
    Separation {
        #[command(flatten)]
        pair: PairSpec,
        #[arg(long, value_parser = parse_bits)]
        t: Bits,
        #[arg(long, value_parser = parse_bits)]
        t2: Bits,
        #[arg(long)]
        depth: usize,
    },
    /// Pull a target set back along a homomorphism and compare didistance sets.
    Pullback {
        #[command(flatten)]
        map: MapQuery,
        #[arg(long)]
        set: PathBuf,
    },
}

/// A bit string such as `101`.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Bits(Vec<u8>);

fn parse_bits(s: &str) -> Result<Bits, String> {
    s.chars()
        .map(|ch| match ch {
            '0' => Ok(0),
            '1' => Ok(1),
            other => Err(format!("`{other}` is not a bit")),
        })
        .collect::<Result<_, _>>()
        .map(Bits)
}

enum Outcome {
    Holds(Value),
    Refuted(Value),
    Text(String),
}

type CmdResult = Result<Outcome, CliError>;

/// Runs the command line and returns the exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let result = max_stage().and_then(|cap| dispatch(cli.command, cap));
    let (code, text) = match result {
        Ok(Outcome::Holds(v)) => (0, pretty(&v)),
        Ok(Outcome::Refuted(v)) => (1, pretty(&v)),
        Ok(Outcome::Text(s)) => (0, s),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    if out.write_all(text.as_bytes()).is_err() {
        return 2;
    }
    code
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values serialize");
    s.push('\n');
    s
}

fn max_stage() -> Result<usize, CliError> {
    match std::env::var(MAX_STAGE_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| CliError::Usage(format!("{MAX_STAGE_VAR} must be a natural number, got `{s}`"))),
        Err(_) => Ok(DEFAULT_MAX_STAGE),
    }
}

fn cap_stage(n: usize, cap: usize) -> Result<(), CliError> {
    if n > cap {
        return Err(CliError::Usage(format!("stage {n} exceeds the cap {cap} (set {MAX_STAGE_VAR} to raise it)")));
    }
    Ok(())
}

fn dispatch(cmd: Command, cap: usize) -> CmdResult {
    match cmd {
        Command::Build(a) => build(a, cap),
        Command::Verify(v) => verify(v, cap),
        Command::Dist(q) => pair_query(q, false),
        Command::Didist(q) => pair_query(q, true),
        Command::DidistSet(q) => {
            let (g, set) = load_graph_and_set(&q)?;
            let ks = didistance_set(&g, &set)?;
            Ok(Outcome::Holds(json!({ "didistances": ks })))
        }
        Command::Color(c) => color(c),
        Command::Hom(h) => hom(h, cap),
        Command::Star(s) => star(s),
        Command::Antibasis(a) => antibasis(a, cap),
        Command::ExportDot(a) => {
            let g = match &a.graph {
                Some(path) => load_graph(path)?,
                None => stage_from_spec(&a.spec, cap)?,
            };
            Ok(Outcome::Text(export_dot(&g, &DotStyle { name: a.name, layered: !a.flat })))
        }
    }
}

fn stage_from_spec(spec: &StageSpec, cap: usize) -> Result<FiniteGraph, CliError> {
    let c = spec.c.as_ref().ok_or_else(|| CliError::Usage("--c is required".into()))?;
    let n = spec.stage.unwrap_or(c.len().saturating_sub(1));
    cap_stage(n, cap)?;
    if spec.random_directions {
        let b = corpus::random_pair(&mut corpus::rng(spec.seed), c);
        Ok(build_oriented_stage(&b, n)?)
    } else if !spec.d.is_empty() {
        Ok(build_oriented_stage(&OddPair::new(c.clone(), spec.d.clone())?, n)?)
    } else {
        Ok(build_stage(c, n)?)
    }
}

fn build(a: BuildArgs, cap: usize) -> CmdResult {
    let g = match a.path {
        Some(n) => match a.spec.d.as_slice() {
            [] => build_path(n),
            [w] => build_oriented_path(n, w)?,
            _ => return Err(CliError::Usage("a path takes a single direction word".into())),
        },
        None => stage_from_spec(&a.spec, cap)?,
    };
    Ok(match a.format {
        Format::Json => Outcome::Text(doc::graph_to_json(&g) + "\n"),
        Format::Dot => Outcome::Text(export_dot(&g, &DotStyle::default())),
    })
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.to_path_buf(), source })
}

fn load_graph(path: &Path) -> Result<FiniteGraph, CliError> {
    doc::graph_from_json(&read(path)?).map_err(|source| CliError::Doc { path: path.to_path_buf(), source })
}

fn stage_of(g: &FiniteGraph) -> Option<usize> {
    g.meta().map(|m| m.stage)
}

fn load_set(path: &Path, stage: Option<usize>) -> Result<BTreeSet<Vertex>, CliError> {
    doc::set_from_json(&read(path)?, stage).map_err(|source| CliError::Doc { path: path.to_path_buf(), source })
}

fn load_graph_and_set(q: &SetQuery) -> Result<(FiniteGraph, BTreeSet<Vertex>), CliError> {
    let g = load_graph(&q.graph)?;
    let set = load_set(&q.set, stage_of(&g))?;
    Ok((g, set))
}

struct Loaded {
    source: FiniteGraph,
    target: FiniteGraph,
    phi: lzero_core::hom::PartialHom,
}

fn load_map(q: &MapQuery) -> Result<Loaded, CliError> {
    let source = load_graph(&q.source)?;
    let target = load_graph(&q.target)?;
    let phi = doc::hom_from_json(&read(&q.phi)?, stage_of(&source), stage_of(&target))
        .map_err(|source| CliError::Doc { path: q.phi.clone(), source })?;
    Ok(Loaded { source, target, phi })
}

fn vj(v: &Vertex, stage: Option<usize>) -> Value {
    doc::vertex_value(v, stage)
}

fn vlist<'a>(vs: impl IntoIterator<Item = &'a Vertex>, stage: Option<usize>) -> Value {
    Value::Array(vs.into_iter().map(|v| vj(v, stage)).collect())
}

fn coloring_json(c: &Coloring, stage: Option<usize>) -> Value {
    Value::Array(c.colors.iter().map(|(v, &k)| json!([vj(v, stage), k])).collect())
}

fn map_json(phi: &lzero_core::hom::PartialHom, s: Option<usize>, t: Option<usize>) -> Value {
    serde_json::to_value(doc::HomDocument::from_hom(phi, s, t)).expect("maps serialize")
}

fn violation_json(v: &HomViolation, s: Option<usize>, t: Option<usize>) -> Value {
    match v {
        HomViolation::UnknownSource(x) => json!({ "kind": "unknown-source", "vertex": vj(x, s) }),
        HomViolation::UnknownTarget(y) => json!({ "kind": "unknown-target", "vertex": vj(y, t) }),
        HomViolation::Unmapped(x) => json!({ "kind": "unmapped", "vertex": vj(x, s) }),
        HomViolation::EdgeNotPreserved { x, y } => json!({ "kind": "edge-not-preserved", "x": vj(x, s), "y": vj(y, s) }),
        HomViolation::OrientationReversed { x, y } => {
            json!({ "kind": "orientation-reversed", "x": vj(x, s), "y": vj(y, s) })
        }
    }
}

fn verdict(holds: bool, v: Value) -> Outcome {
    if holds {
        Outcome::Holds(v)
    } else {
        Outcome::Refuted(v)
    }
}

fn stage_report_json(r: &StageReport) -> Value {
    json!({
        "stage": r.stage,
        "vertices": r.vertex_count,
        "expected_vertices": r.expected_vertex_count,
        "connected": r.connected,
        "acyclic": r.acyclic,
        "max_degree": r.max_degree,
        "endpoints": vlist(&r.endpoints, Some(r.stage)),
        "special": r.special.map(|v| vj(&v, Some(r.stage))),
        "vertex_set_ok": r.vertex_set_ok,
        "projection_ok": r.projection_ok,
        "failures": r.failures,
        "passed": r.passed(),
    })
}

fn stages_to_check(c: &OddSequence, max_stage: Option<usize>, cap: usize) -> Result<usize, CliError> {
    if c.is_empty() {
        return Err(CliError::Usage("--c must be non-empty".into()));
    }
    let last = max_stage.unwrap_or(c.len() - 1);
    if last >= c.len() {
        return Err(StageError::StageOutOfRange { stage: last, len: c.len() }.into());
    }
    cap_stage(last, cap)?;
    Ok(last)
}

fn verify(cmd: VerifyCmd, cap: usize) -> CmdResult {
    match cmd {
        VerifyCmd::Stage { c, max_stage } => {
            let last = stages_to_check(&c, max_stage, cap)?;
            let mut reports = Vec::new();
            let mut holds = true;
            for n in 0..=last {
                let r = verify_stage(&build_stage(&c, n)?);
                holds &= r.passed();
                reports.push(stage_report_json(&r));
            }
            Ok(verdict(holds, json!({ "holds": holds, "stages": reports })))
        }
        VerifyCmd::Dilength { forests, walks, max_vertices, seed } => {
            if max_vertices == 0 {
                return Err(CliError::Usage("--max-vertices must be positive".into()));
            }
            let mut rng = corpus::rng(seed);
            let mut checked = 0usize;
            for f in 0..forests {
                let n = rng.gen_range(1..=max_vertices);
                let g = corpus::random_forest(&mut rng, n, 0.85, true);
                for _ in 0..walks {
                    let start = rng.gen_range(0..n);
                    let len = rng.gen_range(0..=2 * n);
                    let w = Walk::trace(&g, corpus::random_walk(&mut rng, &g, start, len))?;
                    let k = walk_dilength(&g, &w)?;
                    let d = didist(&g, &w.first(), &w.last())?;
                    checked += 1;
                    if d != Some(k) {
                        return Ok(Outcome::Refuted(json!({
                            "holds": false,
                            "witness": {
                                "forest": f,
                                "graph": serde_json::to_value(doc::GraphDocument::from_graph(&g)).expect("documents serialize"),
                                "walk": vlist(&w.vertices, None),
                                "dilength": k,
                                "didist": d,
                            }
                        })));
                    }
                }
            }
            Ok(Outcome::Holds(json!({ "holds": true, "forests": forests, "walks": checked, "seed": seed })))
        }
        VerifyCmd::Symmetry { c, max_stage, trials, seed } => {
            let last = stages_to_check(&c, max_stage, cap)?;
            let mut rng = corpus::rng(seed);
            for trial in 0..trials {
                let b = corpus::random_pair(&mut rng, &c);
                for n in 0..=last {
                    let o = build_oriented_stage(&b, n)?;
                    let u = build_stage(&c, n)?;
                    if o.symmetrized().edge_set() != u.edge_set() || o.edge_count() != u.edge_count() {
                        let words: Vec<String> = b.d().iter().map(|w| w.to_string()).collect();
                        return Ok(Outcome::Refuted(json!({
                            "holds": false,
                            "witness": { "trial": trial, "stage": n, "d": words }
                        })));
                    }
                }
            }
            Ok(Outcome::Holds(json!({ "holds": true, "trials": trials, "max_stage": last, "seed": seed })))
        }
        VerifyCmd::Siblings { c, max_stage } => {
            let last = stages_to_check(&c, max_stage, cap)?;
            let mut checked = 0usize;
            for n in 0..=last {
                let g = build_stage(&c, n)?;
                for (x, y) in sibling_pairs(&c, n)? {
                    let d = dist(&g, &x, &y)?;
                    checked += 1;
                    if d.is_none_or(|d| d % 2 == 0) {
                        return Ok(Outcome::Refuted(json!({
                            "holds": false,
                            "witness": { "stage": n, "x": vj(&x, Some(n)), "y": vj(&y, Some(n)), "dist": d }
                        })));
                    }
                }
            }
            Ok(Outcome::Holds(json!({ "holds": true, "pairs": checked, "max_stage": last })))
        }
    }
}

fn pair_query(q: PairQuery, directed: bool) -> CmdResult {
    let g = load_graph(&q.graph)?;
    let st = stage_of(&g);
    let x = doc::parse_vertex(&q.from, st)?;
    let y = doc::parse_vertex(&q.to, st)?;
    let value = if directed {
        json!({ "from": vj(&x, st), "to": vj(&y, st), "didist": didist(&g, &x, &y)? })
    } else {
        json!({ "from": vj(&x, st), "to": vj(&y, st), "dist": dist(&g, &x, &y)? })
    };
    Ok(Outcome::Holds(value))
}

fn color(cmd: ColorCmd) -> CmdResult {
    match cmd {
        ColorCmd::Two { graph } => {
            let g = load_graph(&graph)?;
            let st = stage_of(&g);
            Ok(match two_color(&g) {
                Ok(c) => Outcome::Holds(json!({ "holds": true, "coloring": coloring_json(&c, st) })),
                Err(cycle) => Outcome::Refuted(json!({ "holds": false, "witness": { "odd_cycle": vlist(&cycle.0, st) } })),
            })
        }
        ColorCmd::Parity(q) => {
            let (g, a) = load_graph_and_set(&q)?;
            let st = stage_of(&g);
            Ok(match parity_two_color(&g, &a)? {
                Ok(c) => Outcome::Holds(json!({ "holds": true, "coloring": coloring_json(&c, st) })),
                Err(w) => Outcome::Refuted(json!({
                    "holds": false,
                    "witness": { "from": vj(&w.from, st), "to": vj(&w.to, st), "walk": vlist(&w.walk, st) }
                })),
            })
        }
        ColorCmd::Bounded(q) => {
            let (g, a) = load_graph_and_set(&q)?;
            let st = stage_of(&g);
            let r = bounded_dilength_two_color(&g, &a)?;
            let steps: Vec<Value> = r
                .steps
                .iter()
                .map(|s| {
                    json!({
                        "bound": s.bound,
                        "epsilon": s.epsilon,
                        "peeled": vlist(&s.peeled, st),
                        "opposite": vlist(&s.opposite, st),
                        "remaining": vlist(&s.remaining, st),
                    })
                })
                .collect();
            let proper = r.coloring.is_proper(&g);
            Ok(verdict(
                proper,
                json!({ "holds": proper, "coloring": coloring_json(&r.coloring, st), "steps": steps, "base": vlist(&r.base, st) }),
            ))
        }
        ColorCmd::NonOnto(q) => {
            let m = load_map(&q)?;
            let (s, t) = (stage_of(&m.source), stage_of(&m.target));
            let r = non_onto_two_color(&m.source, &m.target, &m.phi)?;
            let anchors: Vec<Value> = r.anchors.iter().map(|(k, a)| json!([vj(k, s), vj(a, t)])).collect();
            Ok(Outcome::Holds(json!({ "m": vlist(&r.m, s), "anchors": anchors, "coloring": coloring_json(&r.coloring, s) })))
        }
    }
}

fn hom(cmd: HomCmd, cap: usize) -> CmdResult {
    match cmd {
        HomCmd::Check(q) => {
            let m = load_map(&q)?;
            let (s, t) = (stage_of(&m.source), stage_of(&m.target));
            Ok(match check_hom(&m.source, &m.target, &m.phi) {
                Ok(()) => Outcome::Holds(json!({ "holds": true })),
                Err(v) => Outcome::Refuted(json!({ "holds": false, "witness": violation_json(&v, s, t) })),
            })
        }
        HomCmd::Find { source, target, constraints } => {
            let src = load_graph(&source)?;
            let tgt = load_graph(&target)?;
            let (s, t) = (stage_of(&src), stage_of(&tgt));
            let cons = match constraints {
                Some(path) => parse_constraints(&read(&path)?, s, t).map_err(|source| CliError::Doc { path, source })?,
                None => BTreeMap::new(),
            };
            Ok(match find_hom(&src, &tgt, &cons) {
                Some(phi) => Outcome::Holds(json!({ "found": true, "map": map_json(&phi, s, t)["map"] })),
                None => Outcome::Refuted(json!({ "found": false })),
            })
        }
        HomCmd::Extend { source, b, bp, phi, c, n } => {
            let l = load_graph(&source)?;
            let s = stage_of(&l);
            let b = load_set(&b, s)?;
            let bp = match bp {
                Some(p) => load_set(&p, s)?,
                None => l.vertices().iter().copied().collect(),
            };
            let phi = doc::hom_from_json(&read(&phi)?, s, Some(n)).map_err(|source| CliError::Doc { path: phi, source })?;
            let ext = extend_hom(&l, &b, &bp, &phi, &c, n)?;
            Ok(Outcome::Holds(map_json(&ext, s, Some(n + 1))))
        }
        HomCmd::Pipeline { c0, c, depth, emit_map } => {
            cap_stage(depth, cap)?;
            match pipeline_hom(&c0, &c, depth) {
                Ok(p) => {
                    let compat = check_compatibility(&p);
                    let gaps: Vec<String> = p.gaps.iter().map(|g| g.to_string()).collect();
                    let mut v = json!({
                        "holds": compat.holds(),
                        "ks": p.ks,
                        "gaps": gaps,
                        "maps": p.maps.len(),
                        "compatibility": {
                            "increasing": compat.increasing,
                            "homs": compat.homs,
                            "projections": compat.projections,
                        },
                    });
                    if emit_map {
                        let last = p.maps.len() - 1;
                        v["map"] = map_json(p.assembled(), Some(depth), Some(last))["map"].clone();
                    }
                    Ok(verdict(compat.holds(), v))
                }
                Err(PipelineError::GrowthInsufficient { step, required, best }) => Ok(Outcome::Refuted(json!({
                    "holds": false,
                    "witness": { "kind": "growth-insufficient", "step": step, "required_mgs": required, "best_mgs": best.to_string() }
                }))),
                Err(PipelineError::Stage(e)) => Err(e.into()),
                Err(PipelineError::Extend { error, .. }) => Err(error.into()),
            }
        }
    }
}

fn parse_constraints(s: &str, src: Option<usize>, tgt: Option<usize>) -> Result<lzero_core::hom::Constraints, DocError> {
    #[derive(serde::Deserialize)]
    struct File {
        constraints: Vec<(doc::VertexForm, Vec<doc::VertexForm>)>,
    }
    let file: File = serde_json::from_str(s)?;
    let mut out = BTreeMap::new();
    for (x, ys) in file.constraints {
        let allowed = ys.iter().map(|y| y.to_vertex(tgt)).collect::<Result<BTreeSet<_>, _>>()?;
        out.insert(x.to_vertex(src)?, allowed);
    }
    Ok(out)
}

fn pair_from_spec(p: &PairSpec) -> Result<OddPair, CliError> {
    match (&p.c, p.minimal) {
        (_, Some(k)) => Ok(gen_star(k, &GenStrategy::MinimalAllPlus)?),
        (Some(c), None) if p.d.is_empty() => Ok(OddPair::all_plus(c.clone())),
        (Some(c), None) => Ok(OddPair::new(c.clone(), p.d.clone())?),
        (None, None) => Err(CliError::Usage("give --c or --minimal".into())),
    }
}

fn star_json(b: &OddPair, r: &StarReport) -> Value {
    json!({
        "holds": r.holds,
        "c": b.c().values(),
        "sigma": b.sigma_profile(),
        "first_violation": r.first_violation.as_ref().map(|v| json!({
            "index": v.index,
            "sigma": v.lhs.to_string(),
            "bound": v.rhs.to_string(),
        })),
    })
}

fn star(cmd: StarCmd) -> CmdResult {
    match cmd {
        StarCmd::Check { pair, f } => {
            let b = pair_from_spec(&pair)?;
            let r = match &f {
                Some(f) => check_growth(&b, f)?,
                None => check_star(&b),
            };
            Ok(verdict(r.holds, star_json(&b, &r)))
        }
        StarCmd::Gen { stages, f } => {
            let strategy = match f {
                Some(f) => GenStrategy::FForm(f),
                None => GenStrategy::MinimalAllPlus,
            };
            let b = gen_star(stages, &strategy)?;
            Ok(Outcome::Holds(json!({ "c": b.c().values(), "sigma": b.sigma_profile(), "d": "all-plus" })))
        }
    }
}

fn antibasis(cmd: AntibasisCmd, cap: usize) -> CmdResult {
    match cmd {
        AntibasisCmd::Interval { pair, t, depth, mode } => {
            cap_stage(depth, cap)?;
            let b = pair_from_spec(&pair)?;
            let mode = match mode {
                Mode::Raw => IntervalMode::Raw,
                Mode::Tight => IntervalMode::Tight,
            };
            let r = verify_interval(&b, &t.0, depth, mode)?;
            let st = Some(depth);
            let pairs: Vec<Value> = r
                .pairs
                .iter()
                .map(|p| {
                    json!({
                        "x": vj(&p.x, st),
                        "y": vj(&p.y, st),
                        "i_star": p.i_star,
                        "stage": p.stage,
                        "didist": p.didist,
                        "sigma": p.sigma,
                        "raw_bound": p.raw_bound.to_string(),
                        "raw_ok": p.raw_ok,
                        "tight_ok": p.tight_ok,
                        "index_ok": p.index_ok,
                    })
                })
                .collect();
            let holds = r.holds();
            Ok(verdict(
                holds,
                json!({ "holds": holds, "vacuous": r.vacuous(), "exceptions": r.exceptions(), "pairs": pairs }),
            ))
        }
        AntibasisCmd::Separation { pair, t, t2, depth } => {
            cap_stage(depth, cap)?;
            let b = pair_from_spec(&pair)?;
            let r = verify_separation(&b, &t.0, &t2.0, depth)?;
            Ok(verdict(
                r.holds(),
                json!({
                    "holds": r.holds(),
                    "vacuous": r.vacuous(),
                    "i_star_0": r.i_star_0,
                    "threshold_stage": r.threshold_stage,
                    "threshold_sigma": r.threshold_sigma,
                    "left": r.left,
                    "right": r.right,
                    "violations": r.violations,
                }),
            ))
        }
        AntibasisCmd::Pullback { map, set } => {
            let m = load_map(&map)?;
            let (s, t) = (stage_of(&m.source), stage_of(&m.target));
            let c = load_set(&set, t)?;
            let r = distance_set_pullback(&m.source, &m.target, &m.phi, &c)?;
            Ok(verdict(
                r.containment,
                json!({
                    "holds": r.containment,
                    "complete": r.complete,
                    "vacuous": r.vacuous(),
                    "containment": r.containment,
                    "preimage_containment": r.preimage_containment,
                    "b": vlist(&r.b, s),
                    "m": vlist(&r.m, s),
                    "source_set": r.source_set,
                    "target_set": r.target_set,
                }),
            ))
        }
    }
}
