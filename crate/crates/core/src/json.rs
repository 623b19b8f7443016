//! JSON interchange for graphs, tree decompositions, minor models, walls,
//! rural divisions and structure certificates.
//!
//! Graphs use `{"n", "edges", "labels"?}` with ids `0..n`. A graph whose ids
//! are not contiguous (say, after deleting vertices) carries an explicit
//! `"vertices"` list instead of relying on `n`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::decomposition::TreeDecomposition;
use crate::graph::{Graph, VertexId, VertexSet};
use crate::minors::MinorModel;
use crate::rural::{flap_from_edges, RuralDivision};
use crate::structure::WeakStructureCertificate;
use crate::wall::{compass, Compass, SubdividedWall};
use crate::{Error, Result};

fn bad(what: &str, e: impl std::fmt::Display) -> Error {
    Error::Certificate(format!("{what}: {e}"))
}

fn parse<T: for<'de> Deserialize<'de>>(what: &str, v: &Value) -> Result<T> {
    T::deserialize(v).map_err(|e| bad(what, e))
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    n: usize,
    edges: Vec<[VertexId; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<BTreeMap<String, String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    vertices: Option<Vec<VertexId>>,
}

pub fn graph_to_json(g: &Graph) -> Value {
    let contiguous = g.vertices().enumerate().all(|(i, v)| i == v);
    let doc = GraphDoc {
        n: g.n(),
        edges: g.edges().map(|(u, v)| [u, v]).collect(),
        labels: None,
        vertices: (!contiguous).then(|| g.vertices().collect()),
    };
    serde_json::to_value(doc).expect("graph serializes")
}

pub fn graph_from_json(v: &Value) -> Result<Graph> {
    let doc: GraphDoc = parse("graph", v)?;
    let mut g = match &doc.vertices {
        Some(vs) => {
            if vs.len() != doc.n {
                return Err(bad("graph", format!("n = {} but {} vertices listed", doc.n, vs.len())));
            }
            Graph::with_vertices(vs.iter().copied())
        }
        None => Graph::empty(doc.n),
    };
    if let Some(labels) = &doc.labels {
        if let Some(k) = labels.keys().find(|k| k.parse::<VertexId>().map_or(true, |id| !g.contains_vertex(id))) {
            return Err(bad("graph", format!("label for unknown vertex {k:?}")));
        }
    }
    for [a, b] in doc.edges {
        g.try_add_edge(a, b)?;
    }
    Ok(g)
}

/// SHA-256 of the canonical JSON of `g`.
pub fn host_ref(g: &Graph) -> String {
    let text = serde_json::to_string(&graph_to_json(g)).expect("graph serializes");
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn set_map_to_json(m: &BTreeMap<VertexId, VertexSet>) -> Value {
    Value::Object(m.iter().map(|(k, s)| (k.to_string(), json!(s))).collect())
}

fn set_map_from_json(what: &str, v: &Value) -> Result<BTreeMap<VertexId, VertexSet>> {
    let raw: BTreeMap<String, VertexSet> = parse(what, v)?;
    raw.into_iter()
        .map(|(k, s)| Ok((k.parse().map_err(|e| bad(what, format!("key {k:?}: {e}")))?, s)))
        .collect()
}

/// `{"tree_edges", "bags"}`; the host travels separately.
pub fn decomposition_to_json(td: &TreeDecomposition) -> Value {
    json!({
        "tree_edges": td.tree.edges().map(|(a, b)| [a, b]).collect::<Vec<_>>(),
        "bags": set_map_to_json(&td.bags),
    })
}

pub fn decomposition_from_json(v: &Value, host: &Graph) -> Result<TreeDecomposition> {
    let edges: Vec<[usize; 2]> = parse("tree_edges", v.get("tree_edges").unwrap_or(&Value::Null))?;
    let bags = set_map_from_json("bags", v.get("bags").unwrap_or(&Value::Null))?;
    let mut tree = Graph::with_vertices(bags.keys().copied());
    for [a, b] in edges {
        if !bags.contains_key(&a) || !bags.contains_key(&b) {
            return Err(bad("tree_edges", format!("edge {{{a}, {b}}} names a node without a bag")));
        }
        tree.try_add_edge(a, b)?;
    }
    Ok(TreeDecomposition::new(tree, bags, host.clone()))
}

/// `{"branch_sets", "pattern", "host_ref"}`.
pub fn minor_to_json(m: &MinorModel) -> Value {
    json!({
        "branch_sets": set_map_to_json(&m.branch_sets),
        "pattern": graph_to_json(&m.pattern),
        "host_ref": host_ref(&m.host),
    })
}

/// Reads a minor certificate for `host`; the recorded host reference must match.
pub fn minor_from_json(v: &Value, host: &Graph) -> Result<MinorModel> {
    let recorded: String = parse("host_ref", v.get("host_ref").unwrap_or(&Value::Null))?;
    if recorded != host_ref(host) {
        return Err(bad("host_ref", "certificate was issued for a different host"));
    }
    Ok(MinorModel {
        host: host.clone(),
        pattern: graph_from_json(v.get("pattern").unwrap_or(&Value::Null))?,
        branch_sets: set_map_from_json("branch_sets", v.get("branch_sets").unwrap_or(&Value::Null))?,
    })
}

#[derive(Serialize, Deserialize)]
struct BranchPathDoc {
    edge: [VertexId; 2],
    path: Vec<VertexId>,
}

#[derive(Serialize, Deserialize)]
struct WallDoc {
    height: usize,
    original_vertices: BTreeMap<String, VertexId>,
    branch_paths: Vec<BranchPathDoc>,
    corners: [VertexId; 4],
}

pub fn wall_to_json(w: &SubdividedWall) -> Value {
    let doc = WallDoc {
        height: w.height,
        original_vertices: w.original_vertices.iter().map(|(t, h)| (t.to_string(), *h)).collect(),
        branch_paths: w
            .branch_paths
            .iter()
            .map(|(&(a, b), p)| BranchPathDoc { edge: [a, b], path: p.clone() })
            .collect(),
        corners: w.corners,
    };
    serde_json::to_value(doc).expect("wall serializes")
}

pub fn wall_from_json(v: &Value) -> Result<SubdividedWall> {
    let doc: WallDoc = parse("wall", v)?;
    let original_vertices = doc
        .original_vertices
        .into_iter()
        .map(|(t, h)| Ok((t.parse().map_err(|e| bad("wall", format!("key {t:?}: {e}")))?, h)))
        .collect::<Result<_>>()?;
    let mut branch_paths = BTreeMap::new();
    for BranchPathDoc { edge: [a, b], path } in doc.branch_paths {
        let (key, path) = if a < b { ((a, b), path) } else { ((b, a), path.into_iter().rev().collect()) };
        if branch_paths.insert(key, path).is_some() {
            return Err(bad("wall", format!("two paths for template edge {{{a}, {b}}}")));
        }
    }
    Ok(SubdividedWall { height: doc.height, original_vertices, branch_paths, corners: doc.corners })
}

/// `{"flaps": [[[u, v], ...], ...]}`, one edge list per flap.
pub fn rural_to_json(rd: &RuralDivision) -> Value {
    let flaps: Vec<Vec<[VertexId; 2]>> =
        rd.flaps.iter().map(|f| f.edges().map(|(u, v)| [u, v]).collect()).collect();
    json!({ "flaps": flaps })
}

pub fn rural_from_json(v: &Value, compass: Compass) -> Result<RuralDivision> {
    let flaps: Vec<Vec<(VertexId, VertexId)>> = parse("flaps", v.get("flaps").unwrap_or(&Value::Null))?;
    Ok(RuralDivision { compass, flaps: flaps.iter().map(|f| flap_from_edges(f)).collect() })
}

/// Tagged by `"clause"`: 1 carries `"minor"`, 2 carries `"decomposition"` and
/// `"width_bound"`, 3 carries `"apices"`, `"wall"`, `"flaps"` and
/// `"flap_treewidth_bound"`.
pub fn certificate_to_json(cert: &WeakStructureCertificate) -> Value {
    match cert {
        WeakStructureCertificate::Minor(m) => json!({ "clause": 1, "minor": minor_to_json(m) }),
        WeakStructureCertificate::Treewidth { decomposition, width_bound } => json!({
            "clause": 2,
            "decomposition": decomposition_to_json(decomposition),
            "width_bound": width_bound,
        }),
        WeakStructureCertificate::FlatWall { apices, division, flap_treewidth_bound } => json!({
            "clause": 3,
            "apices": apices,
            "wall": wall_to_json(&division.compass.wall),
            "flaps": rural_to_json(division)["flaps"],
            "flap_treewidth_bound": flap_treewidth_bound,
        }),
    }
}

/// Reads a certificate about `g`. For clause 3 the compass is recomputed
/// from the wall in `g ∖ A`; if that is impossible (the wall is invalid) an
/// empty compass is attached and verification reports the wall.
pub fn certificate_from_json(v: &Value, g: &Graph) -> Result<WeakStructureCertificate> {
    let field = |name: &str| v.get(name).ok_or_else(|| bad("certificate", format!("missing field {name:?}")));
    let clause: u8 = parse("clause", field("clause")?)?;
    match clause {
        1 => Ok(WeakStructureCertificate::Minor(minor_from_json(field("minor")?, g)?)),
        2 => Ok(WeakStructureCertificate::Treewidth {
            decomposition: decomposition_from_json(field("decomposition")?, g)?,
            width_bound: parse("width_bound", field("width_bound")?)?,
        }),
        3 => {
            let apices: VertexSet = parse("apices", field("apices")?)?;
            let wall = wall_from_json(field("wall")?)?;
            let compass = g
                .delete_vertices(&apices)
                .and_then(|rest| compass(&rest, &wall))
                .unwrap_or_else(|_| Compass { wall, graph: Graph::new() });
            Ok(WeakStructureCertificate::FlatWall {
                apices,
                division: rural_from_json(v, compass)?,
                flap_treewidth_bound: parse("flap_treewidth_bound", field("flap_treewidth_bound")?)?,
            })
        }
        c => Err(bad("clause", format!("{c} is not 1, 2 or 3"))),
    }
}
