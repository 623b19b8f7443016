use std::collections::{BTreeMap, BTreeSet};

use super::{verify_contraction, ContractionModel};
use crate::graph::{edge, embed_planar, Edge, RotationEmbedding, VertexId, VertexSet};
use crate::{Error, Result};

/// A contraction whose host is (partly) embedded, together with a closed
/// disk `D` given as a set of faces of the embedding (indices into
/// `embedding.faces()`). Host vertices missing from the embedding count as
/// lying outside `D`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmoothContractionWitness {
    pub model: ContractionModel,
    pub embedding: RotationEmbedding,
    pub v: VertexId,
    pub disk_faces: BTreeSet<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SmoothViolation {
    NotADisk(String),
    /// Vertices outside `D` that are not in the model of `v`, and vertices of
    /// the model of `v` that lie in `D`.
    ModelMismatch { outside: VertexSet, inside: VertexSet },
}

impl SmoothContractionWitness {
    /// Embeds the (planar) host and takes as `D` every face that avoids the
    /// model of `v`.
    pub fn from_model(model: ContractionModel, v: VertexId) -> Result<Self> {
        let embedding = embed_planar(&model.host)
            .ok_or_else(|| Error::Precondition("host is not planar".into()))?;
        let outside = model.model_of(v);
        let disk_faces = embedding
            .faces()
            .iter()
            .enumerate()
            .filter(|(_, f)| f.iter().all(|(a, _)| !outside.contains(a)))
            .map(|(i, _)| i)
            .collect();
        Ok(SmoothContractionWitness { model, embedding, v, disk_faces })
    }

    /// Vertices lying on the faces of `D`.
    pub fn disk_vertices(&self) -> VertexSet {
        let faces = self.embedding.faces();
        self.disk_faces
            .iter()
            .filter_map(|&i| faces.get(i))
            .flat_map(|f| f.iter().map(|&(a, _)| a))
            .collect()
    }
}

pub fn verify_smooth_contraction(w: &SmoothContractionWitness) -> Result<Result<(), SmoothViolation>> {
    if let Err(e) = verify_contraction(&w.model)? {
        return Err(Error::Invalid(format!("contraction model fails condition {}", e.condition())));
    }
    if !w.model.pattern.contains_vertex(w.v) {
        return Err(Error::UnknownVertex(w.v));
    }
    let emb = &w.embedding;
    if !emb.host.is_subgraph_of(&w.model.host) || !emb.satisfies_euler() {
        return Err(Error::Invalid("embedding is not a plane embedding of a host subgraph".into()));
    }
    let faces = emb.faces();
    if let Some(&bad) = w.disk_faces.iter().find(|&&i| i >= faces.len()) {
        return Err(Error::Certificate(format!("face index {bad} out of range")));
    }
    if let Err(reason) = check_disk(&faces, &w.disk_faces) {
        return Ok(Err(SmoothViolation::NotADisk(reason)));
    }
    let in_disk = w.disk_vertices();
    let model_v = w.model.model_of(w.v);
    let outside: VertexSet = w
        .model
        .host
        .vertices()
        .filter(|x| !in_disk.contains(x) && !model_v.contains(x))
        .collect();
    let inside: VertexSet = model_v.intersection(&in_disk).copied().collect();
    if !outside.is_empty() || !inside.is_empty() {
        return Ok(Err(SmoothViolation::ModelMismatch { outside, inside }));
    }
    Ok(Ok(()))
}

/// The chosen faces form a closed disk: they are edge-connected, have Euler
/// characteristic one, and their boundary is a single simple cycle.
fn check_disk(faces: &[Vec<(VertexId, VertexId)>], chosen: &BTreeSet<usize>) -> Result<(), String> {
    if chosen.is_empty() {
        return Err("no faces chosen".into());
    }
    let mut dart_count: BTreeMap<Edge, usize> = BTreeMap::new();
    let mut edge_faces: BTreeMap<Edge, Vec<usize>> = BTreeMap::new();
    let mut vertices = VertexSet::new();
    for &i in chosen {
        for &(a, b) in &faces[i] {
            *dart_count.entry(edge(a, b)).or_default() += 1;
            edge_faces.entry(edge(a, b)).or_default().push(i);
            vertices.insert(a);
        }
    }
    // edge-connectivity of the chosen faces
    let mut seen = BTreeSet::from([*chosen.iter().next().expect("non-empty")]);
    let mut stack: Vec<usize> = seen.iter().copied().collect();
    while let Some(f) = stack.pop() {
        for &(a, b) in &faces[f] {
            for &g in &edge_faces[&edge(a, b)] {
                if seen.insert(g) {
                    stack.push(g);
                }
            }
        }
    }
    if seen.len() != chosen.len() {
        return Err("faces are not edge-connected".into());
    }
    let chi = vertices.len() as i64 - dart_count.len() as i64 + chosen.len() as i64;
    if chi != 1 {
        return Err(format!("Euler characteristic {chi}, expected 1"));
    }
    let boundary: Vec<Edge> = dart_count.iter().filter(|(_, &c)| c == 1).map(|(&e, _)| e).collect();
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &(a, b) in &boundary {
        *deg.entry(a).or_default() += 1;
        *deg.entry(b).or_default() += 1;
    }
    if boundary.len() < 3 || deg.values().any(|&d| d != 2) {
        return Err("boundary is not a simple cycle".into());
    }
    let g = crate::graph::Graph::with_vertices(deg.keys().copied());
    let mut g = g;
    for &(a, b) in &boundary {
        g.add_edge(a, b);
    }
    if !g.is_connected() {
        return Err("boundary has several cycles".into());
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::gamma;

    fn identity_witness(k: usize) -> SmoothContractionWitness {
        let gm = gamma(k).unwrap();
        let phi = gm.graph.vertices().map(|x| (x, x)).collect();
        let model = ContractionModel { host: gm.graph.clone(), pattern: gm.graph, phi };
        SmoothContractionWitness::from_model(model, gm.loaded).unwrap()
    }

    #[test]
    fn identity_on_gamma() {
        let w = identity_witness(4);
        assert_eq!(verify_smooth_contraction(&w).unwrap(), Ok(()));
    }

    #[test]
    fn vertex_on_wrong_side() {
        let mut w = identity_witness(4);
        // Swap the loaded corner with an inner vertex in the map: the model of
        // v now lies inside D and the corner lies outside.
        let loaded = w.v;
        let inner = 5;
        let host = w.model.host.clone();
        w.model.phi.insert(loaded, inner);
        w.model.phi.insert(inner, loaded);
        // the swapped map is an automorphism-free relabelling, so fix the pattern too
        let swap: BTreeMap<_, _> = host
            .vertices()
            .map(|x| (x, if x == loaded { inner } else if x == inner { loaded } else { x }))
            .collect();
        w.model.pattern = host.relabel(&swap);
        assert_eq!(verify_contraction(&w.model).unwrap(), Ok(()));
        assert!(matches!(
            verify_smooth_contraction(&w).unwrap(),
            Err(SmoothViolation::ModelMismatch { .. })
        ));
    }

    #[test]
    fn non_disk_rejected() {
        let mut w = identity_witness(4);
        w.disk_faces = (0..w.embedding.faces().len()).collect();
        assert!(matches!(verify_smooth_contraction(&w).unwrap(), Err(SmoothViolation::NotADisk(_))));
    }
}
