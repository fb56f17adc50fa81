//! Command-line front end.
//!
//! Exit codes: 0 success, 2 invalid input, 3 inconclusive (search budget
//! exhausted), 4 a checked property failed, 5 internal error.

use std::collections::BTreeSet;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use flipgraph::curve::{disc_curve, CurveTrace, TraceJson};
use flipgraph::explorer::{key_strings, Explorer, NlfReport, NlfStatus, NodeId, DEFAULT_BUDGET};
use flipgraph::export;
use flipgraph::oracle::{self, OracleGraph, PolygonTriangulation};
use flipgraph::par::Exec;
use flipgraph::projection::project;
use flipgraph::surface::{GluingTable, Triangulation};
use flipgraph::sweep::{self, polygon_diagonals};
use flipgraph::Error;

const EXIT_INPUT: u8 = 2;
const EXIT_INCONCLUSIVE: u8 = 3;
const EXIT_PROPERTY: u8 = 4;
const EXIT_INTERNAL: u8 = 5;

#[derive(Parser, Serialize, Debug)]
#[command(
    name = "flipgraph",
    version,
    about = "Flip graphs of triangulated marked surfaces"
)]
struct Cli {
    /// Node cap for graph searches.
    #[arg(long, global = true, env = "FLIPGRAPH_BUDGET", default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Seed for sampled checks.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    /// Run graph sweeps on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Serialize, Debug)]
struct SurfaceArg {
    /// `disc:C`, `annulus:P,Q`, `torus1`, or a gluing-table JSON file.
    #[arg(long)]
    surface: String,
}

#[derive(Subcommand, Serialize, Debug)]
enum Command {
    /// Print the base triangulation of a surface as a gluing table.
    Surface(SurfaceArg),
    /// Check a triangulation's structure and its arc count.
    Validate {
        #[command(flatten)]
        surface: SurfaceArg,
    },
    /// Project a triangulation onto the face of an oriented curve.
    Project {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Gluing-table JSON of the triangulation to project (default: base).
        #[arg(long)]
        triangulation: Option<PathBuf>,
        /// Disc triangulation given by diagonals, e.g. `1-3,0-3,0-4`.
        #[arg(long, conflicts_with = "triangulation")]
        diagonals: Option<String>,
        /// Oriented disc curve `FROM-TO`.
        #[arg(long, required_unless_present = "curve_file")]
        curve: Option<String>,
        /// Trace JSON relative to the triangulation.
        #[arg(long, conflicts_with = "curve")]
        curve_file: Option<PathBuf>,
    },
    /// Certified flip distance between two nodes.
    Distance {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Node: `base`, `path:I,J,..` or, on discs, `diagonals:A-B,..`.
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// BFS ball around the base triangulation.
    Ball {
        #[command(flatten)]
        surface: SurfaceArg,
        #[arg(long)]
        radius: usize,
    },
    /// Non-leaving-face checks, one JSON line per pair.
    NlfCheck {
        #[command(flatten)]
        surface: SurfaceArg,
        /// A pair of nodes; repeatable.
        #[arg(long, num_args = 2, value_names = ["V", "W"])]
        pair: Vec<String>,
        /// Every pair of a finite exchange graph.
        #[arg(long)]
        exhaustive: bool,
        /// Pairs inside the ball of this radius around the base.
        #[arg(long)]
        radius: Option<usize>,
        /// With `--radius`, only pairs at most this far apart.
        #[arg(long, default_value_t = 6)]
        max_distance: usize,
        /// Check only this many pairs, drawn with `--seed`.
        #[arg(long)]
        sample: Option<usize>,
        /// Exit 0 even if some pairs are inconclusive.
        #[arg(long)]
        allow_inconclusive: bool,
    },
    /// Brute-force polygon computations.
    Oracle {
        #[command(subcommand)]
        command: OracleCommand,
    },
    /// Render an explored subgraph.
    Export {
        #[command(flatten)]
        surface: SurfaceArg,
        /// Explore to this radius; without it the whole (finite) graph.
        #[arg(long)]
        radius: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Dot)]
        format: Format,
        /// Colour the minimal face containing these two nodes.
        #[arg(long, num_args = 2, value_names = ["V", "W"])]
        face_of: Vec<String>,
    },
}

#[derive(Subcommand, Serialize, Debug)]
enum OracleCommand {
    /// Number of triangulations and flips of the polygon.
    Count {
        #[arg(long)]
        polygon: usize,
    },
    /// Dragging projection of a polygon triangulation.
    Project {
        #[arg(long)]
        polygon: usize,
        /// Diagonals `A-B,..` (default: the fan at 0).
        #[arg(long)]
        diagonals: Option<String>,
        #[arg(long)]
        curve: String,
    },
    /// Flip distance between two polygon triangulations.
    Distance {
        #[arg(long)]
        polygon: usize,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
    },
    /// Exhaustive non-leaving-face check on the polygon's graph.
    Nlf {
        #[arg(long)]
        polygon: usize,
    },
}

#[derive(ValueEnum, Clone, Copy, Serialize, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Format {
    Json,
    Dot,
}

/// A failure with the exit code it maps to.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::BudgetExceeded(_) => EXIT_INCONCLUSIVE,
            Error::Watchdog(_) | Error::MeasureNotDecreasing(_) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        };
        Failure(code, e.to_string())
    }
}

fn input(msg: impl Into<String>) -> Failure {
    Failure(EXIT_INPUT, msg.into())
}

type Run<T = ()> = std::result::Result<T, Failure>;

fn load_surface(spec: &str) -> Run<Triangulation> {
    let parse = |s: &str| {
        s.trim()
            .parse::<usize>()
            .map_err(|_| input(format!("bad number in {spec:?}")))
    };
    if let Some(c) = spec.strip_prefix("disc:") {
        return Ok(Triangulation::disc(parse(c)?)?);
    }
    if let Some(pq) = spec.strip_prefix("annulus:") {
        let (p, q) = pq
            .split_once(',')
            .ok_or_else(|| input("annulus needs P,Q"))?;
        return Ok(Triangulation::annulus(parse(p)?, parse(q)?)?);
    }
    if spec == "torus1" {
        return Ok(Triangulation::torus_one_boundary()?);
    }
    load_gluing(Path::new(spec))
}

fn load_gluing(path: &Path) -> Run<Triangulation> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    let table =
        GluingTable::from_json(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(table.build()?)
}

fn parse_pairs(s: &str) -> Run<Vec<(usize, usize)>> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (a, b) = p
                .trim()
                .split_once('-')
                .ok_or_else(|| input(format!("bad pair {p:?}")))?;
            let a = a.parse().map_err(|_| input(format!("bad pair {p:?}")))?;
            let b = b.parse().map_err(|_| input(format!("bad pair {p:?}")))?;
            Ok((a, b))
        })
        .collect()
}

/// `FROM-TO`; anything without an explicit direction is refused.
fn parse_oriented(s: &str) -> Run<(u32, u32)> {
    let (a, b) = s
        .split_once('-')
        .ok_or_else(|| input(format!("curve {s:?} must be oriented, written FROM-TO")))?;
    let a = a
        .trim()
        .parse()
        .map_err(|_| input(format!("bad curve {s:?}")))?;
    let b = b
        .trim()
        .parse()
        .map_err(|_| input(format!("bad curve {s:?}")))?;
    Ok((a, b))
}

fn load_trace(path: &Path) -> Run<CurveTrace> {
    let text = fs::read_to_string(path).map_err(|e| input(format!("{}: {e}", path.display())))?;
    if let Ok(t) = serde_json::from_str::<CurveTrace>(&text) {
        return Ok(t);
    }
    let t: TraceJson =
        serde_json::from_str(&text).map_err(|e| input(format!("{}: {e}", path.display())))?;
    Ok(CurveTrace::from_json(&t))
}

fn find_node(e: &mut Explorer, spec: &str) -> Run<NodeId> {
    if spec == "base" {
        return Ok(e.root());
    }
    if let Some(p) = spec.strip_prefix("path:") {
        let steps = p
            .split(',')
            .filter(|s| !s.is_empty())
            .map(|s| {
                s.trim()
                    .parse()
                    .map_err(|_| input(format!("bad path {spec:?}")))
            })
            .collect::<Run<Vec<usize>>>()?;
        return Ok(e.follow(&steps)?);
    }
    if let Some(d) = spec.strip_prefix("diagonals:") {
        let want: BTreeSet<(usize, usize)> = parse_pairs(d)?
            .into_iter()
            .map(|(a, b)| (a.min(b), a.max(b)))
            .collect();
        let s = e.base().surface();
        if s.genus != 0 || s.boundary_components() != 1 {
            return Err(input("diagonal nodes need a disc"));
        }
        e.explore_all()?;
        return (0..e.len())
            .find(|&u| polygon_diagonals(e.triangulation(u)) == want)
            .ok_or_else(|| input(format!("{spec:?} is not a triangulation of the polygon")));
    }
    Err(input(format!("unknown node {spec:?}")))
}

struct Out {
    sink: Box<dyn Write>,
}

impl Out {
    fn open(path: &Option<PathBuf>) -> Run<Out> {
        let sink: Box<dyn Write> = match path {
            Some(p) => {
                Box::new(fs::File::create(p).map_err(|e| input(format!("{}: {e}", p.display())))?)
            }
            None => Box::new(std::io::stdout()),
        };
        Ok(Out { sink })
    }

    fn text(&mut self, s: &str) -> Run {
        self.sink
            .write_all(s.as_bytes())
            .map_err(|e| Failure(EXIT_INTERNAL, e.to_string()))
    }

    fn pretty(&mut self, v: &Value) -> Run {
        self.text(&(serde_json::to_string_pretty(v).expect("json") + "\n"))
    }

    fn line(&mut self, v: &Value) -> Run {
        self.text(&(serde_json::to_string(v).expect("json") + "\n"))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("flipgraph: {msg}");
            ExitCode::from(code)
        }
    }
}

fn run(cli: &Cli) -> Run<u8> {
    let exec = if cli.sequential {
        Exec::Sequential
    } else {
        Exec::Parallel
    };
    let config = serde_json::to_value(cli).expect("config serializes");
    let mut out = Out::open(&cli.output)?;
    let explorer = |spec: &SurfaceArg| -> Run<Explorer> {
        Ok(Explorer::with_budget(load_surface(&spec.surface)?, cli.budget).with_exec(exec))
    };
    match &cli.command {
        Command::Surface(s) => {
            let t = load_surface(&s.surface)?;
            out.pretty(&json!({
                "config": config,
                "surface": t.surface(),
                "internal_arcs": t.internal_arcs().len(),
                "gluing": t.to_gluing_table(),
            }))?;
            Ok(0)
        }
        Command::Validate { surface } => {
            let t = load_surface(&surface.surface)?;
            let report = t.validate();
            out.pretty(&json!({ "config": config, "validation": report }))?;
            Ok(if report.ok { 0 } else { EXIT_PROPERTY })
        }
        Command::Project {
            surface,
            triangulation,
            diagonals,
            curve,
            curve_file,
        } => {
            let base = load_surface(&surface.surface)?;
            let t = match (triangulation, diagonals) {
                (Some(p), _) => load_gluing(p)?,
                (None, Some(d)) => {
                    let c = base.surface().marked_points();
                    Triangulation::disc_from_diagonals(c, &parse_pairs(d)?)?
                }
                (None, None) => base.clone(),
            };
            if t.surface() != base.surface() {
                return Err(input("triangulation is not of the given surface"));
            }
            let gamma = match (curve, curve_file) {
                (Some(c), _) => {
                    let (a, b) = parse_oriented(c)?;
                    disc_curve(&t, a, b)?
                }
                (None, Some(p)) => load_trace(p)?.reduce(&t)?,
                (None, None) => return Err(input("a curve is required")),
            };
            let result = project(&t, &gamma)?;
            if !result.measure_decreasing() {
                return Err(Failure(EXIT_INTERNAL, "measure did not decrease".into()));
            }
            out.pretty(&json!({
                "config": config,
                "flips": result.flip_sequence.len(),
                "final_diagonals": diagonals_if_disc(&result.final_triangulation),
                "result": result,
            }))?;
            Ok(0)
        }
        Command::Distance { surface, from, to } => {
            let mut e = explorer(surface)?;
            let v = find_node(&mut e, from)?;
            let w = find_node(&mut e, to)?;
            let cert = e.distance(v, w)?;
            out.pretty(&json!({
                "config": config,
                "distance": cert.distance,
                "from": key_strings(&e.key(v)),
                "to": key_strings(&e.key(w)),
                "meeting": key_strings(&e.key(cert.meeting)),
                "meeting_from_v": cert.from_v,
                "meeting_from_w": cert.from_w,
            }))?;
            Ok(0)
        }
        Command::Ball { surface, radius } => {
            let mut e = explorer(surface)?;
            let layers = e.bfs_ball(e.root(), *radius)?;
            let sizes: Vec<usize> = layers.iter().map(Vec::len).collect();
            let nodes: Vec<NodeId> = layers.concat();
            out.pretty(&json!({
                "config": config,
                "layer_sizes": sizes,
                "vertices": nodes.len(),
                "graph": export::to_json(&e, &nodes, None),
            }))?;
            Ok(0)
        }
        Command::NlfCheck {
            surface,
            pair,
            exhaustive,
            radius,
            max_distance,
            sample,
            allow_inconclusive,
        } => {
            let mut e = explorer(surface)?;
            out.line(&json!({ "config": config }))?;
            let reports = nlf_reports(
                &mut e,
                pair,
                *exhaustive,
                *radius,
                *max_distance,
                *sample,
                cli.seed,
                exec,
            )?;
            let (mut ok, mut fail, mut inconclusive) = (0, 0, 0);
            for r in &reports {
                match r.status {
                    NlfStatus::Ok => ok += 1,
                    NlfStatus::Fail => fail += 1,
                    NlfStatus::Inconclusive => inconclusive += 1,
                }
                out.line(&serde_json::to_value(r).expect("report serializes"))?;
            }
            out.line(&json!({
                "summary": { "pairs": reports.len(), "ok": ok, "fail": fail, "inconclusive": inconclusive }
            }))?;
            Ok(if fail > 0 {
                EXIT_PROPERTY
            } else if inconclusive > 0 && !allow_inconclusive {
                EXIT_INCONCLUSIVE
            } else {
                0
            })
        }
        Command::Oracle { command } => run_oracle(command, config, &mut out),
        Command::Export {
            surface,
            radius,
            format,
            face_of,
        } => {
            let mut e = explorer(surface)?;
            let nodes: Vec<NodeId> = match radius {
                Some(r) => {
                    let nodes = e.bfs_ball(e.root(), *r)?.concat();
                    e.expand(&nodes)?;
                    nodes
                }
                None => {
                    e.explore_all()?;
                    (0..e.len()).collect()
                }
            };
            let face = match face_of.as_slice() {
                [v, w] => {
                    let (v, w) = (find_node(&mut e, v)?, find_node(&mut e, w)?);
                    Some(e.common_arcs(v, w))
                }
                _ => None,
            };
            match format {
                Format::Dot => out.text(&export::to_dot(&e, &nodes, face.as_ref()))?,
                Format::Json => out.pretty(&json!({
                    "config": config,
                    "graph": export::to_json(&e, &nodes, face.as_ref()),
                }))?,
            }
            Ok(0)
        }
    }
}

fn diagonals_if_disc(t: &Triangulation) -> Option<Vec<(usize, usize)>> {
    let s = t.surface();
    (s.genus == 0 && s.boundary_components() == 1)
        .then(|| polygon_diagonals(t).into_iter().collect())
}

#[allow(clippy::too_many_arguments)]
fn nlf_reports(
    e: &mut Explorer,
    pair: &[String],
    exhaustive: bool,
    radius: Option<usize>,
    max_distance: usize,
    sample: Option<usize>,
    seed: u64,
    exec: Exec,
) -> Run<Vec<NlfReport>> {
    if !pair.is_empty() {
        let mut reports = Vec::new();
        for p in pair.chunks(2) {
            let v = find_node(e, &p[0])?;
            let w = find_node(e, &p[1])?;
            reports.push(e.nlf_check(v, w)?);
        }
        return Ok(reports);
    }
    let (sources, max_distance) = match (exhaustive, radius) {
        (true, None) => {
            e.explore_all()?;
            ((0..e.len()).collect::<Vec<_>>(), usize::MAX)
        }
        (false, Some(r)) => {
            let layers = match e.bfs_ball(e.root(), r + max_distance) {
                Ok(layers) => layers,
                Err(Error::BudgetExceeded(_)) => return Ok(vec![inconclusive_report()]),
                Err(err) => return Err(err.into()),
            };
            let mut ball = layers[..=r.min(layers.len() - 1)].concat();
            ball.sort_unstable();
            (ball, max_distance)
        }
        _ => return Err(input("give --pair, --exhaustive or --radius")),
    };
    let tables: Vec<_> = sources
        .iter()
        .map(|&v| {
            e.frozen_distances(v, max_distance, |_| true)
                .expect("region explored")
        })
        .collect();
    let mut reports = sweep::pair_reports(e, &sources, &tables, max_distance, exec);
    if let Some(k) = sample {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all: Vec<usize> = (0..reports.len()).collect();
        let mut picked: Vec<usize> = all.choose_multiple(&mut rng, k).copied().collect();
        picked.sort_unstable();
        reports = picked.into_iter().map(|i| reports[i].clone()).collect();
    }
    Ok(reports.into_iter().map(|(_, r)| r).collect())
}

fn inconclusive_report() -> NlfReport {
    NlfReport {
        v: Vec::new(),
        w: Vec::new(),
        status: NlfStatus::Inconclusive,
        distance: None,
        common_arcs: Vec::new(),
        interval_size: None,
        face_distance: None,
        ok: false,
        witness: None,
    }
}

fn polygon(c: usize, diagonals: Option<&str>) -> Run<PolygonTriangulation> {
    match diagonals {
        None => {
            if !(4..=oracle::MAX_POLYGON).contains(&c) {
                return Err(Error::PolygonOutOfRange(c).into());
            }
            Ok(PolygonTriangulation::fan(c))
        }
        Some(d) => Ok(PolygonTriangulation::new(c, parse_pairs(d)?)?),
    }
}

fn run_oracle(command: &OracleCommand, config: Value, out: &mut Out) -> Run<u8> {
    match command {
        OracleCommand::Count { polygon } => {
            let g = OracleGraph::new(*polygon)?;
            out.pretty(&json!({
                "config": config,
                "vertices": g.nodes.len(),
                "edges": g.edge_count(),
            }))?;
            Ok(0)
        }
        OracleCommand::Project {
            polygon: c,
            diagonals,
            curve,
        } => {
            let t = polygon(*c, diagonals.as_deref())?;
            let (a, b) = parse_oriented(curve)?;
            let r = oracle::stt_project(&t, a as usize, b as usize)?;
            out.pretty(&json!({ "config": config, "diagonals": r.diagonals }))?;
            Ok(0)
        }
        OracleCommand::Distance {
            polygon: c,
            from,
            to,
        } => {
            let g = OracleGraph::new(*c)?;
            let lookup = |s: &str| -> Run<usize> {
                let t = polygon(*c, Some(s))?;
                Ok(g.index[&t])
            };
            let (v, w) = (lookup(from)?, lookup(to)?);
            out.pretty(&json!({ "config": config, "distance": g.distances_from(v)[w] }))?;
            Ok(0)
        }
        OracleCommand::Nlf { polygon } => {
            let g = OracleGraph::new(*polygon)?;
            let (pairs, failures) = g.nlf_exhaustive();
            let failures: Vec<_> = failures
                .iter()
                .map(|&(v, w)| (&g.nodes[v].diagonals, &g.nodes[w].diagonals))
                .collect();
            out.pretty(&json!({ "config": config, "pairs": pairs, "failures": failures }))?;
            Ok(if failures.is_empty() {
                0
            } else {
                EXIT_PROPERTY
            })
        }
    }
}
