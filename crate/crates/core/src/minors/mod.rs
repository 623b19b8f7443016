//! Minor, topological-minor and contraction relations with certifying models,
//! ΔY-transformations, subdivision and dissolution, and v-smooth contractions.

mod iso;
mod search;
mod smooth;
mod topological;
mod transform;

pub use iso::{are_isomorphic, find_isomorphism};
pub use search::{find_minor, find_minor_with, SearchCaps};
pub use smooth::{verify_smooth_contraction, SmoothContractionWitness, SmoothViolation};
pub use topological::{find_topological_minor, find_topological_minor_with, TopologicalModel};
pub use transform::{delta_y, dissolve, subdivide};

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId, VertexSet};
use crate::{Error, Result};

/// `H ≤_c G` via a surjective map `φ: V(G) → V(H)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionModel {
    pub host: Graph,
    pub pattern: Graph,
    pub phi: BTreeMap<VertexId, VertexId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ContractionViolation {
    /// Condition 1: the model of this pattern vertex is disconnected.
    DisconnectedModel(VertexId),
    /// Condition 2: the union of the two models is disconnected.
    DisconnectedEdge(VertexId, VertexId),
    /// Condition 3: this host edge maps to a non-edge of the pattern.
    StrayEdge(VertexId, VertexId),
}

impl ContractionViolation {
    pub fn condition(&self) -> u8 {
        match self {
            ContractionViolation::DisconnectedModel(_) => 1,
            ContractionViolation::DisconnectedEdge(..) => 2,
            ContractionViolation::StrayEdge(..) => 3,
        }
    }
}

impl ContractionModel {
    /// The model `φ⁻¹(v)` of a pattern vertex.
    pub fn model_of(&self, v: VertexId) -> VertexSet {
        self.phi.iter().filter(|(_, &p)| p == v).map(|(&h, _)| h).collect()
    }

    pub fn models(&self) -> BTreeMap<VertexId, VertexSet> {
        let mut out: BTreeMap<VertexId, VertexSet> =
            self.pattern.vertices().map(|v| (v, VertexSet::new())).collect();
        for (&h, &p) in &self.phi {
            out.entry(p).or_default().insert(h);
        }
        out
    }
}

/// Checks contraction conditions 1–3. A non-total or non-surjective map is an error.
pub fn verify_contraction(m: &ContractionModel) -> Result<Result<(), ContractionViolation>> {
    if let Some(v) = m.host.vertices().find(|v| !m.phi.contains_key(v)) {
        return Err(Error::Invalid(format!("phi is not defined on host vertex {v}")));
    }
    if let Some((&h, _)) = m.phi.iter().find(|(h, _)| !m.host.contains_vertex(**h)) {
        return Err(Error::UnknownVertex(h));
    }
    if let Some((_, &p)) = m.phi.iter().find(|(_, p)| !m.pattern.contains_vertex(**p)) {
        return Err(Error::Invalid(format!("phi maps onto non-pattern vertex {p}")));
    }
    let models = m.models();
    if let Some((&p, _)) = models.iter().find(|(_, s)| s.is_empty()) {
        return Err(Error::Invalid(format!("phi is not surjective: {p} has no preimage")));
    }
    for (&p, s) in &models {
        if !m.host.is_connected_set(s) {
            return Ok(Err(ContractionViolation::DisconnectedModel(p)));
        }
    }
    for (a, b) in m.pattern.edges() {
        let union: VertexSet = models[&a].union(&models[&b]).copied().collect();
        if !m.host.is_connected_set(&union) {
            return Ok(Err(ContractionViolation::DisconnectedEdge(a, b)));
        }
    }
    for (u, v) in m.host.edges() {
        let (pu, pv) = (m.phi[&u], m.phi[&v]);
        if pu != pv && !m.pattern.has_edge(pu, pv) {
            return Ok(Err(ContractionViolation::StrayEdge(u, v)));
        }
    }
    Ok(Ok(()))
}

/// Disjoint connected branch sets, one per pattern vertex, with a host edge
/// between the sets of every pattern edge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinorModel {
    pub host: Graph,
    pub pattern: Graph,
    pub branch_sets: BTreeMap<VertexId, VertexSet>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MinorViolation {
    MissingBranchSet(VertexId),
    EmptyBranchSet(VertexId),
    ForeignVertex(VertexId),
    Overlap { first: VertexId, second: VertexId, shared: VertexId },
    Disconnected(VertexId),
    MissingEdge(VertexId, VertexId),
}

impl MinorModel {
    pub fn validate(&self) -> Result<(), MinorViolation> {
        if let Some(p) = self.pattern.vertices().find(|p| !self.branch_sets.contains_key(p)) {
            return Err(MinorViolation::MissingBranchSet(p));
        }
        if let Some(&p) = self.branch_sets.keys().find(|&&p| !self.pattern.contains_vertex(p)) {
            return Err(MinorViolation::ForeignVertex(p));
        }
        let mut owner: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        for (&p, set) in &self.branch_sets {
            if set.is_empty() {
                return Err(MinorViolation::EmptyBranchSet(p));
            }
            for &v in set {
                if !self.host.contains_vertex(v) {
                    return Err(MinorViolation::ForeignVertex(v));
                }
                if let Some(&q) = owner.get(&v) {
                    return Err(MinorViolation::Overlap { first: q, second: p, shared: v });
                }
                owner.insert(v, p);
            }
            if !self.host.is_connected_set(set) {
                return Err(MinorViolation::Disconnected(p));
            }
        }
        for (a, b) in self.pattern.edges() {
            let joined = self.branch_sets[&a]
                .iter()
                .any(|&u| self.host.neighbors(u).any(|w| self.branch_sets[&b].contains(&w)));
            if !joined {
                return Err(MinorViolation::MissingEdge(a, b));
            }
        }
        Ok(())
    }

    /// The subgraph of the host that contracts onto the pattern: the branch
    /// sets' induced edges plus the host edges realizing pattern edges.
    pub fn contraction_model(&self) -> ContractionModel {
        let mut phi = BTreeMap::new();
        let mut sub = Graph::new();
        for (&p, set) in &self.branch_sets {
            for &v in set {
                phi.insert(v, p);
                sub.add_vertex(v);
            }
        }
        for (u, v) in self.host.edges() {
            if let (Some(&pu), Some(&pv)) = (phi.get(&u), phi.get(&v)) {
                if pu == pv || self.pattern.has_edge(pu, pv) {
                    sub.add_edge(u, v);
                }
            }
        }
        ContractionModel { host: sub, pattern: self.pattern.clone(), phi }
    }
}
