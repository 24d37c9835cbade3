//! Command-line front end. JSON goes to stdout, a one-line summary to
//! stderr. Exit status: 0 decided, 1 error, 2 budget exhausted.

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;
use thiserror::Error;

use kordered::certificate::{verify_certificate, Certificate, Payload};
use kordered::connectivity::{block_decomposition, vertex_connectivity};
use kordered::generate::{generate, GeneratorConfig, Model};
use kordered::io::{emit_graph, emit_graph6, parse_graph, parse_graph6, Format};
use kordered::linkage::find_two_linkage;
use kordered::pipeline::{
    find_light_configuration, find_ordered_cycle_7connected, ordered_cycle_oracle, search_counterexample,
    WITNESS_BUDGET,
};
use kordered::planarity::{embed, trace_faces, Embedding};
use kordered::skeleton::{build_skeleton, refine_skeleton, SkeletonError, SkeletonOutcome, Trace};
use kordered::three_planar::{find_witness, WitnessSearch};
use kordered::{Graph, VertexId};

#[derive(Parser)]
#[command(name = "kordered", version, about = "Ordered cycles, linkages and 3-planar witnesses")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Vertex connectivity and blocks.
    Connectivity(GraphInput),
    /// Two disjoint paths s1-t1, s2-t2, or a 3-planar witness that none exist.
    Linkage {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, num_args = 4, value_names = ["S1", "T1", "S2", "T2"], required = true)]
        terminals: Vec<VertexId>,
        #[arg(long, default_value_t = WITNESS_BUDGET)]
        budget: usize,
    },
    /// Searches for a 3-planar witness with the given boundary order.
    ThreePlanar {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, num_args = 1.., required = true)]
        boundary: Vec<VertexId>,
        #[arg(long, default_value_t = WITNESS_BUDGET)]
        budget: usize,
    },
    /// Cycle through four anchors in the given cyclic order.
    OrderedCycle {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, num_args = 4, required = true)]
        anchors: Vec<VertexId>,
        #[arg(long, value_enum, default_value_t = Mode::Both)]
        mode: Mode,
    },
    /// Builds and refines a skeleton for a 7-connected host.
    Skeleton {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long, num_args = 4, required = true)]
        anchors: Vec<VertexId>,
    },
    /// Light vertex or outer edge in a 3-connected plane graph.
    Discharge {
        #[command(flatten)]
        input: GraphInput,
        #[arg(long)]
        x: VertexId,
        #[arg(long)]
        y: VertexId,
        /// Outer face as a boundary walk; defaults to the first face through x and y.
        #[arg(long, num_args = 3..)]
        outer: Option<Vec<VertexId>>,
    },
    /// Samples graphs and runs the oracle on every anchor class.
    SearchCounterexample {
        #[command(flatten)]
        model: ModelArgs,
        /// Number of sampled graphs.
        #[arg(long, default_value_t = 10)]
        budget: usize,
    },
    /// Emits one seeded random graph.
    Gen {
        #[command(flatten)]
        model: ModelArgs,
        /// Writes the graph in `--format` instead of JSON.
        #[arg(long)]
        raw: bool,
        #[arg(long, value_enum, default_value_t = FormatArg::Graph6)]
        format: FormatArg,
    },
    /// Checks a certificate file against the graph it embeds.
    Verify { certificate: PathBuf },
}

#[derive(Args)]
struct GraphInput {
    /// Graph file; stdin when omitted or `-`.
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = FormatArg::Graph6)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    Graph6,
    EdgeList,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Format {
        match f {
            FormatArg::Graph6 => Format::Graph6,
            FormatArg::EdgeList => Format::EdgeList,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Oracle,
    Constructive,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModelKind {
    Gnp,
    Circulant,
    CompleteBipartite,
    #[value(name = "planar-3conn")]
    Planar3Conn,
}

#[derive(Args)]
struct ModelArgs {
    #[arg(long, value_enum)]
    model: ModelKind,
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 0.5)]
    p: f64,
    #[arg(long, value_delimiter = ',', default_value = "1")]
    offsets: Vec<usize>,
    #[arg(long, default_value_t = 7)]
    a: usize,
    #[arg(long, default_value_t = 7)]
    b: usize,
    #[arg(long, default_value_t = 0)]
    deletions: usize,
    #[arg(long, default_value_t = 0)]
    floor: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    max_attempts: usize,
}

impl ModelArgs {
    fn config(&self) -> GeneratorConfig {
        let model = match self.model {
            ModelKind::Gnp => Model::Gnp { n: self.n, p: self.p },
            ModelKind::Circulant => Model::Circulant { n: self.n, offsets: self.offsets.clone() },
            ModelKind::CompleteBipartite => Model::CompleteBipartite { a: self.a, b: self.b },
            ModelKind::Planar3Conn => Model::Planar3Conn { n: self.n, deletions: self.deletions },
        };
        GeneratorConfig { model, floor: self.floor, seed: self.seed, max_attempts: self.max_attempts }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error(transparent)]
    Parse(#[from] kordered::io::ParseError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Generate(#[from] kordered::generate::GenerateError),
    #[error(transparent)]
    Skeleton(#[from] SkeletonError),
    #[error("{0}")]
    Input(String),
}

/// How a decided or undecided command ends.
enum Outcome {
    Decided(String),
    Inconclusive(String),
    Failed(String),
}

fn read_graph(input: &GraphInput) -> Result<Graph, CliError> {
    let mut bytes = Vec::new();
    match &input.graph {
        Some(p) if p.as_os_str() != "-" => bytes = fs::read(p)?,
        _ => {
            io::stdin().read_to_end(&mut bytes)?;
        }
    }
    let g = parse_graph(&bytes, input.format.into())?;
    Ok(g)
}

fn check_ids(g: &Graph, ids: &[VertexId]) -> Result<(), CliError> {
    for &v in ids {
        if !g.contains(v) {
            return Err(CliError::Input(format!("vertex {v} is not in the graph")));
        }
    }
    Ok(())
}

fn anchors_of(v: &[VertexId]) -> [VertexId; 4] {
    [v[0], v[1], v[2], v[3]]
}

fn emit(text: &str) -> Result<(), CliError> {
    match io::stdout().lock().write_all(text.as_bytes()) {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn print<T: Serialize>(value: &T) -> Result<(), CliError> {
    emit(&(serde_json::to_string_pretty(value)? + "\n"))
}

fn connectivity(input: &GraphInput) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    let kappa = vertex_connectivity(&g).map_err(|e| CliError::Input(e.to_string()))?;
    let blocks = block_decomposition(&g);
    print(&json!({ "order": g.order(), "size": g.size(), "connectivity": kappa, "blocks": blocks }))?;
    Ok(Outcome::Decided(format!("connectivity {kappa}, {} blocks", blocks.len())))
}

fn linkage(input: &GraphInput, t: &[VertexId], budget: usize) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    check_ids(&g, t)?;
    let (s1, t1, s2, t2) = (t[0], t[1], t[2], t[3]);
    if let Some(linkage) = find_two_linkage(&g, s1, t1, s2, t2) {
        print(&Certificate::new(&g, Payload::Linkage { terminals: anchors_of(t), linkage }))?;
        return Ok(Outcome::Decided("linkage found".into()));
    }
    match find_witness(&g, &[s1, s2, t1, t2], budget) {
        WitnessSearch::Found(w) => {
            print(&Certificate::new(&g, Payload::ThreePlanar { witness: *w }))?;
            Ok(Outcome::Decided("no linkage; 3-planar witness found".into()))
        }
        WitnessSearch::Absent => {
            print(&json!({ "status": "neither" }))?;
            Ok(Outcome::Failed("neither a linkage nor a 3-planar witness exists".into()))
        }
        WitnessSearch::BudgetExhausted => {
            print(&json!({ "status": "inconclusive", "budget": budget }))?;
            Ok(Outcome::Inconclusive("no linkage; witness search ran out of budget".into()))
        }
    }
}

fn three_planar(input: &GraphInput, boundary: &[VertexId], budget: usize) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    check_ids(&g, boundary)?;
    match find_witness(&g, boundary, budget) {
        WitnessSearch::Found(w) => {
            print(&Certificate::new(&g, Payload::ThreePlanar { witness: *w }))?;
            Ok(Outcome::Decided("3-planar".into()))
        }
        WitnessSearch::Absent => {
            print(&json!({ "status": "absent" }))?;
            Ok(Outcome::Decided("not 3-planar".into()))
        }
        WitnessSearch::BudgetExhausted => {
            print(&json!({ "status": "inconclusive", "budget": budget }))?;
            Ok(Outcome::Inconclusive("witness search ran out of budget".into()))
        }
    }
}

fn ordered_cycle(input: &GraphInput, anchors: &[VertexId], mode: Mode) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    check_ids(&g, anchors)?;
    let anchors = anchors_of(anchors);
    let mut out = serde_json::Map::new();
    let mut oracle_found = None;
    if mode != Mode::Constructive {
        let cert = ordered_cycle_oracle(&g, anchors);
        oracle_found = Some(cert.is_some());
        out.insert("oracle".into(), match cert {
            Some(c) => serde_json::to_value(Certificate::new(&g, Payload::OrderedCycle(c)))?,
            None => json!({ "status": "none" }),
        });
    }
    if mode != Mode::Oracle {
        match find_ordered_cycle_7connected(&g, anchors) {
            Ok(run) => {
                out.insert("constructive".into(), json!({
                    "certificate": Certificate::new(&g, Payload::OrderedCycle(run.certificate)),
                    "states": run.states,
                    "trace": run.trace,
                }));
            }
            Err(SkeletonError::Gap(bundle)) => {
                out.insert("gap".into(), serde_json::to_value(&*bundle)?);
                print(&out)?;
                return Ok(Outcome::Failed(format!("gap at {}: {}", bundle.stage, bundle.detail)));
            }
            Err(e) => return Err(e.into()),
        }
    }
    print(&out)?;
    let summary = match (mode, oracle_found) {
        (Mode::Constructive, _) => "constructive certificate verified".to_string(),
        (_, Some(true)) => "ordered cycle exists".to_string(),
        _ => "no ordered cycle".to_string(),
    };
    Ok(Outcome::Decided(summary))
}

fn skeleton(input: &GraphInput, anchors: &[VertexId]) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    check_ids(&g, anchors)?;
    let mut trace = Trace::default();
    let mut outcome = build_skeleton(&g, anchors_of(anchors), &mut trace)?;
    if let SkeletonOutcome::Skeleton { skeleton } = &outcome {
        outcome = refine_skeleton(&g, skeleton, &mut trace)?;
    }
    print(&json!({ "outcome": outcome, "trace": trace }))?;
    let summary = match outcome {
        SkeletonOutcome::OrderedCycle { .. } => "ordered cycle found while building".to_string(),
        SkeletonOutcome::Skeleton { .. } => format!("refined skeleton after {} rounds", trace.refine_iterations),
    };
    Ok(Outcome::Decided(summary))
}

fn discharge(input: &GraphInput, x: VertexId, y: VertexId, outer: Option<&[VertexId]>) -> Result<Outcome, CliError> {
    let g = read_graph(input)?;
    check_ids(&g, &[x, y])?;
    let rotation = embed(&g).ok_or_else(|| CliError::Input("graph is not planar".into()))?;
    let face = match outer {
        Some(f) => f.to_vec(),
        None => trace_faces(&rotation)
            .into_iter()
            .find(|f| f.contains(&x) && f.contains(&y))
            .ok_or_else(|| CliError::Input(format!("no face of the embedding contains {x} and {y}")))?,
    };
    let embedding = Embedding { rotation, hub: None, outer_face: face };
    let light = find_light_configuration(&g, &embedding, x, y).map_err(|e| CliError::Input(e.to_string()))?;
    print(&json!({ "outer_face": embedding.outer_face, "configuration": light }))?;
    Ok(Outcome::Decided("light configuration found".into()))
}

fn search(model: &ModelArgs, budget: usize) -> Result<Outcome, CliError> {
    let report = search_counterexample(&model.config(), budget)?;
    print(&report)?;
    let summary = format!(
        "{} graphs, {} anchor tuples, {} findings",
        report.instances,
        report.anchor_tuples,
        report.findings.len()
    );
    Ok(Outcome::Decided(summary))
}

fn gen(model: &ModelArgs, raw: bool, format: FormatArg) -> Result<Outcome, CliError> {
    let config = model.config();
    let g = generate(&config)?;
    if raw {
        emit(&String::from_utf8_lossy(&emit_graph(&g, format.into())))?;
    } else {
        print(&json!({ "config": config, "order": g.order(), "size": g.size(), "graph6": emit_graph6(&g) }))?;
    }
    Ok(Outcome::Decided(format!("{} vertices, {} edges", g.order(), g.size())))
}

fn verify(path: &PathBuf) -> Result<Outcome, CliError> {
    let cert: Certificate = serde_json::from_slice(&fs::read(path)?)?;
    let g = parse_graph6(cert.graph6.as_bytes())?;
    let valid = verify_certificate(&g, &cert);
    print(&json!({ "valid": valid }))?;
    if valid {
        Ok(Outcome::Decided("certificate valid".into()))
    } else {
        Ok(Outcome::Failed("certificate invalid".into()))
    }
}

fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Connectivity(input) => connectivity(input),
        Command::Linkage { input, terminals, budget } => linkage(input, terminals, *budget),
        Command::ThreePlanar { input, boundary, budget } => three_planar(input, boundary, *budget),
        Command::OrderedCycle { input, anchors, mode } => ordered_cycle(input, anchors, *mode),
        Command::Skeleton { input, anchors } => skeleton(input, anchors),
        Command::Discharge { input, x, y, outer } => discharge(input, *x, *y, outer.as_deref()),
        Command::SearchCounterexample { model, budget } => search(model, *budget),
        Command::Gen { model, raw, format } => gen(model, *raw, *format),
        Command::Verify { certificate } => verify(certificate),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(Outcome::Decided(s)) => {
            eprintln!("{s}");
            ExitCode::SUCCESS
        }
        Ok(Outcome::Inconclusive(s)) => {
            eprintln!("inconclusive: {s}");
            ExitCode::from(2)
        }
        Ok(Outcome::Failed(s)) => {
            eprintln!("error: {s}");
            ExitCode::from(1)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
