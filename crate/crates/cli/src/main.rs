use std::collections::BTreeMap;
use std::io::{Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flatwall::decomposition::exact_treewidth;
use flatwall::generators::{self, GridCoords};
use flatwall::json::{
    certificate_from_json, certificate_to_json, decomposition_from_json, decomposition_to_json, graph_from_json,
    graph_to_json, minor_from_json, minor_to_json, rural_from_json, wall_from_json, wall_to_json,
};
use flatwall::rural::validate_rural;
use flatwall::structure::{
    apex_number, apex_reduce, trichotomy_check, verify_certificate, ApexReduceError, StructureConstants, Trichotomy,
};
use flatwall::wall::{compass, is_flat, FlatVerdict, SubdividedWall};
use flatwall::{Error, Graph, VertexSet};

const SCHEMA_VERSION: &str = "1";

#[derive(Parser)]
#[command(name = "flatwall", version, about = "Walls, flatness, rural divisions and structure certificates")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    global: Global,
}

#[derive(Args)]
struct Global {
    /// Time budget for the flatness search, in milliseconds.
    #[arg(long, global = true)]
    budget_ms: Option<u64>,
    /// Echoed into reports; the library itself is deterministic.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    Grid,
    Gamma,
    GammaStar,
    Wall,
    Pyramid,
    LowerBound,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a generated graph with its coordinates.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        /// Comma-separated `name=value` pairs, e.g. `k=2` or `k=3,r=4`.
        #[arg(long, default_value = "")]
        params: String,
    },
    /// Exact treewidth with an optimal decomposition.
    Treewidth {
        #[arg(long)]
        graph: PathBuf,
    },
    /// Check a tree decomposition of a graph.
    TdValidate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        td: PathBuf,
    },
    /// Check a minor-model certificate against its host.
    VerifyMinor {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        cert: PathBuf,
    },
    /// Decide whether a subdivided wall is flat in a graph.
    CheckFlat {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        wall: PathBuf,
    },
    /// Validate a rural division of a wall's compass.
    CheckRural {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        wall: PathBuf,
        #[arg(long)]
        division: PathBuf,
    },
    /// Drop one apex whose neighbourhood misses some subwall's compass.
    ReduceApex {
        #[arg(long)]
        graph: PathBuf,
        /// The excluded graph H.
        #[arg(long)]
        pattern: PathBuf,
        /// A JSON list of apex ids, or an object with an `apices` list.
        #[arg(long)]
        apices: PathBuf,
        /// Wall certificate of a wall in G minus the apices.
        #[arg(long)]
        wall: PathBuf,
        #[arg(long)]
        k: usize,
        /// Number of disjoint subwalls to examine (default g(h)²).
        #[arg(long)]
        window_count: Option<usize>,
        /// Apex parameter; defaults to the apex number of H.
        #[arg(long)]
        an: Option<u64>,
        #[arg(long, default_value_t = 0)]
        f1: u64,
        #[arg(long, default_value_t = 0)]
        f2: u64,
    },
    /// Certify one clause of the weak structure trichotomy by brute force.
    Trichotomy {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        threshold: usize,
    },
    /// Re-check a trichotomy certificate.
    VerifyCert {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        pattern: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        cert: PathBuf,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Status {
    Ok = 0,
    Refuted = 1,
    Usage = 2,
    Undetermined = 3,
}

/// Failure before a verdict: bad input (exit 2) or a size cap (exit 3).
struct Failure {
    status: Status,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e {
            Error::CapExceeded { .. } => Status::Undetermined,
            _ => Status::Usage,
        };
        Failure { status, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { status: Status::Usage, message: message.into() }
}

type Outcome = Result<(Status, Value), Failure>;

fn read_json(path: &PathBuf) -> Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &PathBuf) -> Result<Graph, Failure> {
    graph_from_json(&read_json(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn read_wall(path: &PathBuf) -> Result<SubdividedWall, Failure> {
    wall_from_json(&read_json(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_params(s: &str) -> Result<BTreeMap<String, usize>, Failure> {
    s.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| usage(format!("--params: expected name=value, got {p:?}")))?;
            let v = v.trim().parse().map_err(|_| usage(format!("--params: {k} must be a natural number")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

fn coords_json(c: &GridCoords) -> Value {
    Value::Object(c.coords.iter().map(|(v, (x, y))| (v.to_string(), json!([x, y]))).collect())
}

fn generate(family: Family, params: &str) -> Outcome {
    let p = parse_params(params)?;
    let get = |name: &str| p.get(name).copied().ok_or_else(|| usage(format!("--params: missing {name}")));
    let (graph, metadata) = match family {
        Family::Grid => {
            let k = get("k")?;
            let g = generators::grid(k, p.get("r").copied().unwrap_or(k))?;
            (g.graph.clone(), json!({"coords": coords_json(&g.coords), "corners": g.corners()}))
        }
        Family::Gamma | Family::GammaStar => {
            let k = get("k")?;
            let g = if matches!(family, Family::Gamma) { generators::gamma(k)? } else { generators::gamma_star(k)? };
            (g.graph, json!({"coords": coords_json(&g.coords), "loaded": g.loaded}))
        }
        Family::Wall => {
            let k = get("k")?;
            let w = generators::wall(k)?;
            let cert = wall_to_json(&SubdividedWall::elementary(k)?);
            (w.graph, json!({"coords": coords_json(&w.coords), "corners": w.corners, "wall": cert}))
        }
        Family::Pyramid | Family::LowerBound => {
            let k = get("k")?;
            let g = if matches!(family, Family::Pyramid) {
                generators::pyramid(k, get("l")?)?
            } else {
                generators::lower_bound_graph(k, get("h")?)?
            };
            (g.graph, json!({"coords": coords_json(&g.coords)}))
        }
    };
    Ok((Status::Ok, json!({"graph": graph_to_json(&graph), "metadata": metadata})))
}

fn flat_report(v: &FlatVerdict) -> (Status, Value) {
    match v {
        FlatVerdict::Flat { transcript, explored } => {
            (Status::Ok, json!({"flat": true, "transcript": transcript, "explored": explored}))
        }
        FlatVerdict::NotFlat { path13, path24 } => {
            (Status::Refuted, json!({"flat": false, "path13": path13, "path24": path24}))
        }
        FlatVerdict::Unknown { explored } => (Status::Undetermined, json!({"flat": null, "explored": explored})),
    }
}

fn read_apices(path: &PathBuf) -> Result<VertexSet, Failure> {
    let v = read_json(path)?;
    let list = v.get("apices").unwrap_or(&v);
    serde_json::from_value(list.clone()).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn dispatch(cmd: &Command, global: &Global) -> Outcome {
    let budget = global.budget_ms.map(Duration::from_millis);
    match cmd {
        Command::Generate { family, params } => generate(*family, params),
        Command::Treewidth { graph } => {
            let g = read_graph(graph)?;
            let (tw, td) = exact_treewidth(&g)?;
            Ok((Status::Ok, json!({"treewidth": tw, "decomposition": decomposition_to_json(&td)})))
        }
        Command::TdValidate { graph, td } => {
            let g = read_graph(graph)?;
            let td = decomposition_from_json(&read_json(td)?, &g)?;
            Ok(match td.validate()? {
                Ok(()) => (Status::Ok, json!({"valid": true, "width": td.width()?})),
                Err(v) => (
                    Status::Refuted,
                    json!({"valid": false, "condition": v.condition(), "violation": format!("{v:?}")}),
                ),
            })
        }
        Command::VerifyMinor { graph, cert } => {
            let g = read_graph(graph)?;
            let m = minor_from_json(&read_json(cert)?, &g)?;
            Ok(match m.validate() {
                Ok(()) => (Status::Ok, json!({"valid": true})),
                Err(v) => (Status::Refuted, json!({"valid": false, "violation": format!("{v:?}")})),
            })
        }
        Command::CheckFlat { graph, wall } => {
            let g = read_graph(graph)?;
            let c = compass(&g, &read_wall(wall)?)?;
            Ok(flat_report(&is_flat(&c, budget)))
        }
        Command::CheckRural { graph, wall, division } => {
            let g = read_graph(graph)?;
            let c = compass(&g, &read_wall(wall)?)?;
            let rd = rural_from_json(&read_json(division)?, c)?;
            Ok(match validate_rural(&rd)? {
                Ok(()) => (Status::Ok, json!({"valid": true, "flaps": rd.flaps.len()})),
                Err(v) => (
                    Status::Refuted,
                    json!({"valid": false, "property": v.property(), "violation": format!("{v:?}")}),
                ),
            })
        }
        Command::ReduceApex { graph, pattern, apices, wall, k, window_count, an, f1, f2 } => {
            let g = read_graph(graph)?;
            let h = read_graph(pattern)?;
            let a = read_apices(apices)?;
            let w = read_wall(wall)?;
            let an_h = match an {
                Some(x) => *x,
                None => apex_number(&h)?.0 as u64,
            };
            let consts =
                StructureConstants { h: h.n() as u64, an_h, a_size: a.len() as u64, f1_value: *f1, f2_value: *f2 };
            match apex_reduce(&g, &h, &a, &w, *k, &consts, *window_count) {
                Ok(r) => Ok((
                    Status::Ok,
                    json!({
                        "apices": r.a_prime,
                        "dropped": r.dropped,
                        "window": r.window,
                        "wall": wall_to_json(&r.w_prime),
                    }),
                )),
                Err(ApexReduceError::HMinorFound { apex_grid, h_model }) => Ok((
                    Status::Refuted,
                    json!({
                        "h_minor_found": true,
                        "minor": minor_to_json(&h_model),
                        "apex_grid": minor_to_json(&apex_grid),
                    }),
                )),
                Err(ApexReduceError::AllOnes { apex_grid }) => Ok((
                    Status::Undetermined,
                    json!({"h_minor_found": null, "apex_grid": minor_to_json(&apex_grid)}),
                )),
                Err(ApexReduceError::Failed(e)) => Err(e.into()),
            }
        }
        Command::Trichotomy { graph, pattern, k, threshold } => {
            let g = read_graph(graph)?;
            let h = read_graph(pattern)?;
            Ok(match trichotomy_check(&g, &h, *k, *threshold)? {
                Trichotomy::Certified(cert) => (Status::Ok, json!({"certificate": certificate_to_json(&cert)})),
                Trichotomy::Undetermined { reason } => {
                    (Status::Undetermined, json!({"certificate": null, "undetermined": reason}))
                }
            })
        }
        Command::VerifyCert { graph, pattern, k, cert } => {
            let g = read_graph(graph)?;
            let h = read_graph(pattern)?;
            let c = certificate_from_json(&read_json(cert)?, &g)?;
            Ok(match verify_certificate(&g, &h, *k, &c)? {
                Ok(()) => (Status::Ok, json!({"valid": true, "clause": c.clause()})),
                Err(v) => (
                    Status::Refuted,
                    json!({"valid": false, "clause": c.clause(), "violation": v.to_string()}),
                ),
            })
        }
    }
}

fn verb(cmd: &Command) -> &'static str {
    match cmd {
        Command::Generate { .. } => "generate",
        Command::Treewidth { .. } => "treewidth",
        Command::TdValidate { .. } => "td-validate",
        Command::VerifyMinor { .. } => "verify-minor",
        Command::CheckFlat { .. } => "check-flat",
        Command::CheckRural { .. } => "check-rural",
        Command::ReduceApex { .. } => "reduce-apex",
        Command::Trichotomy { .. } => "trichotomy",
        Command::VerifyCert { .. } => "verify-cert",
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (status, mut report) = match dispatch(&cli.command, &cli.global) {
        Ok(r) => r,
        Err(f) => {
            eprintln!("flatwall: {}", f.message);
            let kind = if f.status == Status::Usage { "error" } else { "undetermined" };
            (f.status, json!({ kind: f.message }))
        }
    };
    let obj = report.as_object_mut().expect("reports are objects");
    obj.insert("schema_version".into(), json!(SCHEMA_VERSION));
    obj.insert("command".into(), json!(verb(&cli.command)));
    obj.insert("seed".into(), json!(cli.global.seed));
    let text = serde_json::to_string_pretty(&report).expect("report serializes");
    // a closed stdout (e.g. piped into `head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout(), "{text}");
    ExitCode::from(status as u8)
}
