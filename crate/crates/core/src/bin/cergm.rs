//! `cergm`: command-line front end to the `constrained_ergm` library.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Map, Value};

use constrained_ergm::enumeration::{conditional_concentration, exact_conditional_psi, exact_psi_n, EnumSpec};
use constrained_ergm::euler_lagrange::{el_fixed_point, ELConfig};
use constrained_ergm::phase::{critical_curve, detect_jump, CriticalPoint, EntropyCurve, PhaseOptions};
use constrained_ergm::sampling::{sample_stats, sample_w_random, SampleSpec};
use constrained_ergm::variational::{
    entropy, region_bounds, s_half_closed, s_numeric_seeded, BipodalParams, EntropyPoint, SolverOptions,
};
use constrained_ergm::{
    cut_distance_upper, cut_norm, edge_density, hom_density, rate_function, triangle_density, Error, SimpleGraph,
    StepGraphon,
};

const SIG_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "cergm", version, about = "Step graphons and the constrained edge-triangle model")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Global {
    /// Output format; each subcommand has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the payload to FILE instead of standard output.
    #[arg(long, global = true, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Cap on worker threads.
    #[arg(long, global = true, value_name = "K")]
    threads: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Edge and triangle densities, rate function and optional pattern density of a graphon.
    Density {
        #[arg(long, value_name = "FILE")]
        graphon: PathBuf,
        /// Pattern graph in edge-list format.
        #[arg(long, value_name = "FILE")]
        pattern: Option<PathBuf>,
    },
    /// Constrained entropy s(e, t) with its bipodal maximizer.
    Entropy {
        #[arg(long)]
        e: f64,
        #[arg(long)]
        t: f64,
        #[arg(long, default_value_t = 32)]
        starts: usize,
        /// Constraint tolerance of the numeric solver.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Cut norm of the difference and the block-permutation cut distance bound.
    Cutnorm {
        #[arg(long, value_name = "FILE")]
        a: PathBuf,
        #[arg(long, value_name = "FILE")]
        b: PathBuf,
    },
    /// s(e, t) along a t grid.
    SCurve {
        #[arg(long)]
        e: f64,
        #[arg(long = "t-min")]
        t_min: Option<f64>,
        #[arg(long = "t-max")]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 100)]
        steps: usize,
        #[arg(long, default_value_t = 32)]
        starts: usize,
    },
    /// ψ(e, β₂) over a β₂ grid with the largest jump of the maximizing t.
    PhaseScan {
        #[arg(long)]
        e: f64,
        #[arg(long = "beta2-from", allow_hyphen_values = true)]
        beta2_from: f64,
        #[arg(long = "beta2-to", allow_hyphen_values = true)]
        beta2_to: f64,
        #[arg(long)]
        steps: usize,
    },
    /// Support-line critical point β₂^c(e).
    Critical {
        #[arg(long)]
        e: f64,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// β₂^c and t^c over an e grid.
    CriticalCurve {
        #[arg(long = "e-from")]
        e_from: f64,
        #[arg(long = "e-to")]
        e_to: f64,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Damped fixed-point solve of the Euler–Lagrange equation.
    ElSolve {
        #[arg(long, allow_hyphen_values = true)]
        beta1: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta2: f64,
        /// Second pattern graph in edge-list format.
        #[arg(long, value_name = "FILE")]
        h2: PathBuf,
        #[arg(long)]
        blocks: usize,
        #[arg(long, default_value_t = 0.5)]
        damping: f64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
        #[arg(long = "max-iter", default_value_t = 10_000)]
        max_iter: usize,
        /// Initial graphon on `blocks` equal blocks; defaults to h ≡ 1/2.
        #[arg(long, value_name = "FILE")]
        init: Option<PathBuf>,
        /// Also write the final graphon to FILE.
        #[arg(long = "graphon-out", value_name = "FILE")]
        graphon_out: Option<PathBuf>,
    },
    /// Exact finite-n normalization constants.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta1: f64,
        #[arg(long, allow_hyphen_values = true, default_value_t = 0.0)]
        beta2: f64,
        #[arg(long)]
        e: Option<f64>,
        #[arg(long)]
        alpha: Option<f64>,
        /// Also report cut-distance concentration against --reference.
        #[arg(long)]
        concentration: bool,
        #[arg(long, value_name = "FILE")]
        reference: Option<PathBuf>,
        #[arg(long)]
        eta: Option<f64>,
    },
    /// W-random graph from a graphon, or density statistics over seeds.
    Sample {
        #[arg(long, value_name = "FILE")]
        graphon: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit (seed, e, t) rows instead of a graph.
        #[arg(long)]
        stats: bool,
        #[arg(long, default_value_t = 1)]
        reps: usize,
    },
    /// Attainable triangle densities at edge density e.
    Region {
        #[arg(long)]
        e: f64,
    },
}

enum Payload {
    Json(Value),
    Csv { header: Vec<&'static str>, rows: Vec<Vec<Value>> },
    Text(String),
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(err: Error) -> Self {
        Failure::Lib(err)
    }
}

type Outcome = Result<Payload, Failure>;

fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Domain(_) | Error::Region(_) | Error::Boundary(_) => 2,
        Error::Convergence { .. } => 3,
        Error::Size(_) => 4,
        Error::EmptyShell(_) => 5,
        Error::Invalid(_) | Error::Parse(_) | Error::Io(_) | Error::Json(_) => 1,
    }
}

/// Rounds to [`SIG_DIGITS`] significant digits.
fn round_sig(x: f64) -> f64 {
    if x == 0.0 {
        return 0.0;
    }
    if !x.is_finite() {
        return x;
    }
    format!("{:.*e}", SIG_DIGITS - 1, x).parse().unwrap_or(x)
}

/// Rounds every real in `v`, except graphon data that must re-validate exactly.
fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(x) = n.as_f64() {
                *v = json!(round_sig(x));
            }
        }
        Value::Array(items) => items.iter_mut().for_each(round_value),
        Value::Object(map) => {
            for (key, item) in map.iter_mut() {
                if key != "masses" && key != "values" {
                    round_value(item);
                }
            }
        }
        _ => {}
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(x) if n.is_f64() => format!("{}", round_sig(x)),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn to_value<T: Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("library types serialize")
}

fn with_meta(mut body: Value, invocation: &[String]) -> Value {
    round_value(&mut body);
    let mut obj = match body {
        Value::Object(map) => map,
        other => {
            let mut map = Map::new();
            map.insert("rows".into(), other);
            map
        }
    };
    obj.insert("meta".into(), json!({ "version": env!("CARGO_PKG_VERSION"), "invocation": invocation }));
    Value::Object(obj)
}

fn render(payload: Payload, invocation: &[String]) -> Result<Vec<u8>, Failure> {
    match payload {
        Payload::Json(body) => {
            let mut text = serde_json::to_string_pretty(&with_meta(body, invocation)).map_err(Error::from)?;
            text.push('\n');
            Ok(text.into_bytes())
        }
        Payload::Csv { header, rows } => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Failure::Lib(Error::Io(std::io::Error::other(e)));
            w.write_record(&header).map_err(io)?;
            for row in &rows {
                w.write_record(row.iter().map(cell_text)).map_err(io)?;
            }
            w.into_inner().map_err(|e| Failure::Lib(Error::Io(e.into_error())))
        }
        Payload::Text(text) => Ok(text.into_bytes()),
    }
}

fn read_graphon(path: &Path) -> Result<StepGraphon, Error> {
    StepGraphon::from_json(&fs::read_to_string(path)?)
}

fn read_graph(path: &Path) -> Result<SimpleGraph, Error> {
    fs::read_to_string(path)?.parse()
}

/// `steps + 1` equispaced points from `a` to `b`.
fn linspace(a: f64, b: f64, steps: usize) -> Result<Vec<f64>, Failure> {
    if steps == 0 {
        if a == b {
            return Ok(vec![a]);
        }
        return Err(Failure::Usage("--steps 0 needs equal endpoints".into()));
    }
    Ok((0..=steps).map(|i| if i == steps { b } else { a + (b - a) * i as f64 / steps as f64 }).collect())
}

/// Rejects a CSV request for payloads that only have a JSON form.
fn json_only(format: Option<Format>, what: &str) -> Result<(), Failure> {
    if format == Some(Format::Csv) {
        return Err(Failure::Usage(format!("{what} has no CSV form")));
    }
    Ok(())
}

/// A single flat record: JSON object or one-row CSV.
fn record(format: Option<Format>, fields: Vec<(&'static str, Value)>) -> Payload {
    match format {
        Some(Format::Csv) => Payload::Csv {
            header: fields.iter().map(|f| f.0).collect(),
            rows: vec![fields.into_iter().map(|f| f.1).collect()],
        },
        _ => Payload::Json(Value::Object(fields.into_iter().map(|(k, v)| (k.to_string(), v)).collect())),
    }
}

fn entropy_fields(p: &EntropyPoint) -> Vec<(&'static str, Value)> {
    let m = p.maximizer;
    vec![
        ("e", json!(p.e)),
        ("t", json!(p.t)),
        ("s", json!(p.s)),
        ("c", json!(m.c)),
        ("p11", json!(m.p11)),
        ("p12", json!(m.p12)),
        ("p22", json!(m.p22)),
    ]
}

fn critical_fields(c: &CriticalPoint) -> Vec<(&'static str, Value)> {
    vec![
        ("e", json!(c.e)),
        ("beta2_c", json!(c.beta2_c)),
        ("t_c", json!(c.t_c)),
        ("eps_c", json!(c.eps_c)),
        ("conjectural", json!(c.conjectural)),
    ]
}

fn run(command: Command, format: Option<Format>) -> Outcome {
    match command {
        Command::Density { graphon, pattern } => {
            let h = read_graphon(&graphon)?;
            let mut fields = vec![
                ("edge_density", json!(edge_density(&h))),
                ("triangle_density", json!(triangle_density(&h))),
                ("rate", json!(rate_function(&h))),
            ];
            if let Some(path) = pattern {
                fields.push(("hom_density", json!(hom_density(&read_graph(&path)?, &h)?)));
            }
            Ok(record(format, fields))
        }
        Command::Entropy { e, t, starts, tol } => {
            let opts = SolverOptions { starts, constraint_tol: tol, ..SolverOptions::default() };
            let p = entropy(e, t, &opts)?;
            let mut fields = entropy_fields(&p);
            fields.push(("conjectural", json!(p.conjectural)));
            Ok(record(format, fields))
        }
        Command::Cutnorm { a, b } => {
            let (a, b) = (read_graphon(&a)?, read_graphon(&b)?);
            Ok(record(
                format,
                vec![
                    ("cut_norm", json!(cut_norm(&a, &b)?)),
                    ("cut_distance_upper", json!(cut_distance_upper(&a, &b)?)),
                ],
            ))
        }
        Command::SCurve { e, t_min, t_max, steps, starts } => {
            let bounds = region_bounds(e)?;
            let lo = t_min.unwrap_or(bounds.t_min);
            let hi = t_max.unwrap_or_else(|| e.powi(3).min(bounds.t_max));
            let opts = SolverOptions { starts, ..SolverOptions::default() };
            // sweep downwards from the upper end so each solve is seeded by its neighbour
            let mut grid = linspace(lo, hi, steps)?;
            grid.reverse();
            let mut points = Vec::with_capacity(grid.len());
            let mut prev: Option<BipodalParams> = None;
            for t in grid {
                let p = if e == 0.5 && (0.0..=0.125).contains(&t) {
                    s_half_closed(t)?
                } else {
                    let seeds: Vec<BipodalParams> = prev.into_iter().collect();
                    s_numeric_seeded(e, t, &opts, &seeds)?
                };
                prev = Some(p.maximizer);
                points.push(p);
            }
            points.reverse();
            let rows: Vec<Vec<Value>> =
                points.iter().map(|p| entropy_fields(p).into_iter().map(|f| f.1).collect()).collect();
            Ok(table(format, vec!["e", "t", "s", "c", "p11", "p12", "p22"], rows, None))
        }
        Command::PhaseScan { e, beta2_from, beta2_to, steps } => {
            let grid = linspace(beta2_from, beta2_to, steps)?;
            let curve = EntropyCurve::new(e, &PhaseOptions::default())?;
            let mut points = Vec::with_capacity(grid.len());
            for &b in &grid {
                points.push(curve.psi(b)?);
            }
            let mut ordered = points.clone();
            ordered.sort_by(|x, y| y.beta2.total_cmp(&x.beta2));
            let jump = detect_jump(&ordered);
            let rows =
                points.iter().map(|p| vec![json!(p.beta2), json!(p.psi), json!(p.t_star), json!(p.eps_star)]).collect();
            let extra = json!({ "e": e, "conjectural": curve.is_conjectural(), "jump": jump, "points": points });
            Ok(table(format, vec!["beta2", "psi", "t_star", "eps_star"], rows, Some(extra)))
        }
        Command::Critical { e, tol } => {
            let c = constrained_ergm::phase::critical_point(e, tol, &PhaseOptions::default())?;
            Ok(record(format, critical_fields(&c)))
        }
        Command::CriticalCurve { e_from, e_to, steps, tol } => {
            let grid = linspace(e_from, e_to, steps)?;
            let curve = critical_curve(&grid, tol, &PhaseOptions::default());
            let mut rows = Vec::with_capacity(curve.len());
            let mut entries = Vec::with_capacity(curve.len());
            for (e, result) in curve {
                match result {
                    Ok(c) => {
                        rows.push(critical_fields(&c).into_iter().map(|f| f.1).chain([Value::Null]).collect());
                        entries.push(to_value(&c));
                    }
                    Err(err) => {
                        let msg = err.to_string();
                        rows.push(vec![json!(e), Value::Null, Value::Null, Value::Null, Value::Null, json!(msg)]);
                        entries.push(json!({ "e": e, "error": msg }));
                    }
                }
            }
            Ok(table(
                format,
                vec!["e", "beta2_c", "t_c", "eps_c", "conjectural", "error"],
                rows,
                Some(json!({ "points": entries })),
            ))
        }
        Command::ElSolve { beta1, beta2, h2, blocks, damping, tol, max_iter, init, graphon_out } => {
            json_only(format, "el-solve")?;
            let cfg = ELConfig { beta1, beta2, h2: read_graph(&h2)?, blocks, damping, tol, max_iter };
            let start = match init {
                Some(path) => read_graphon(&path)?,
                None => StepGraphon::equal_blocks(vec![vec![0.5; blocks.max(1)]; blocks.max(1)])?,
            };
            let sol = el_fixed_point(&cfg, &start)?;
            if let Some(path) = graphon_out {
                fs::write(path, sol.graphon.to_json()).map_err(Error::from)?;
            }
            Ok(Payload::Json(to_value(&sol)))
        }
        Command::Enumerate { n, beta1, beta2, e, alpha, concentration, reference, eta } => {
            let spec = EnumSpec { n, beta1, beta2, e_target: e, alpha };
            let result =
                if e.is_some() || alpha.is_some() { exact_conditional_psi(&spec)? } else { exact_psi_n(&spec)? };
            let mut fields = vec![
                ("psi", json!(result.psi)),
                ("graph_count", json!(result.graph_count)),
                ("total_graphs", json!(result.total_graphs)),
                ("log_partition", json!(result.log_partition)),
            ];
            if concentration {
                let (Some(reference), Some(eta)) = (reference, eta) else {
                    return Err(Failure::Usage("--concentration needs --reference and --eta".into()));
                };
                let c = conditional_concentration(&spec, &read_graphon(&reference)?, eta)?;
                fields.push(("mass_far", json!(c.mass_far)));
                fields.push(("mean_t", json!(c.mean_t)));
            }
            Ok(record(format, fields))
        }
        Command::Sample { graphon, n, seed, stats, reps } => {
            let h = read_graphon(&graphon)?;
            if stats {
                let rows: Vec<Vec<Value>> = sample_stats(&h, n, seed, reps)?
                    .iter()
                    .map(|s| vec![json!(s.seed), json!(s.e), json!(s.t)])
                    .collect();
                return Ok(table(format, vec!["seed", "e", "t"], rows, None));
            }
            let g = sample_w_random(&SampleSpec { n, graphon: h, seed })?;
            Ok(match format {
                Some(Format::Json) => Payload::Json(json!({ "n": g.n_vertices(), "edges": g.edges() })),
                Some(Format::Csv) => Payload::Csv {
                    header: vec!["i", "j"],
                    rows: g.edges().iter().map(|&(i, j)| vec![json!(i), json!(j)]).collect(),
                },
                None => Payload::Text(g.to_text()),
            })
        }
        Command::Region { e } => {
            let r = region_bounds(e)?;
            Ok(record(format, vec![("t_min", json!(r.t_min)), ("t_max", json!(r.t_max))]))
        }
    }
}

/// Tabular payload: CSV by default, or JSON rows keyed by the header
/// (merged with `extra` when given).
fn table(format: Option<Format>, header: Vec<&'static str>, rows: Vec<Vec<Value>>, extra: Option<Value>) -> Payload {
    match format {
        Some(Format::Json) => {
            let objects: Vec<Value> = rows
                .into_iter()
                .map(|r| Value::Object(header.iter().map(|h| h.to_string()).zip(r).collect()))
                .collect();
            let mut body = match extra {
                Some(Value::Object(map)) => map,
                _ => Map::new(),
            };
            body.insert("rows".into(), Value::Array(objects));
            Payload::Json(Value::Object(body))
        }
        _ => Payload::Csv { header, rows },
    }
}

fn main() -> ExitCode {
    let invocation: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            let code = if err.use_stderr() { 1 } else { 0 };
            let _ = err.print();
            return ExitCode::from(code);
        }
    };
    if let Some(k) = cli.global.threads {
        if k == 0 {
            eprintln!("error: --threads must be at least 1");
            return ExitCode::from(1);
        }
        if let Err(err) = rayon::ThreadPoolBuilder::new().num_threads(k).build_global() {
            eprintln!("error: {err}");
            return ExitCode::from(1);
        }
    }
    let outcome = run(cli.command, cli.global.format).and_then(|p| render(p, &invocation));
    let bytes = match outcome {
        Ok(bytes) => bytes,
        Err(Failure::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            return ExitCode::from(1);
        }
        Err(Failure::Lib(err)) => {
            eprintln!("error: {err}");
            return ExitCode::from(exit_code(&err));
        }
    };
    let written = match &cli.global.out {
        Some(path) => fs::write(path, &bytes),
        None => std::io::stdout().write_all(&bytes),
    };
    if let Err(err) = written {
        eprintln!("error: {err}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}
