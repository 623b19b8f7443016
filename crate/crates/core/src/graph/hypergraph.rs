use std::collections::{BTreeMap, BTreeSet};

use super::{Graph, VertexId, VertexSet};
use crate::{Error, Result};

/// Hyperedges of any positive arity over a vertex set. Duplicate hyperedges collapse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Hypergraph {
    vertices: VertexSet,
    edges: BTreeSet<VertexSet>,
}

impl Hypergraph {
    pub fn new(vertices: VertexSet, edges: impl IntoIterator<Item = VertexSet>) -> Result<Self> {
        let edges: BTreeSet<VertexSet> = edges.into_iter().collect();
        for e in &edges {
            if e.is_empty() {
                return Err(Error::Invalid("hyperedge must be non-empty".into()));
            }
            if let Some(v) = e.iter().find(|v| !vertices.contains(v)) {
                return Err(Error::UnknownVertex(*v));
            }
        }
        Ok(Hypergraph { vertices, edges })
    }

    pub fn from_graph(g: &Graph) -> Self {
        Hypergraph {
            vertices: g.vertex_set(),
            edges: g.edges().map(|(u, v)| VertexSet::from([u, v])).collect(),
        }
    }

    pub fn vertices(&self) -> &VertexSet {
        &self.vertices
    }

    pub fn edges(&self) -> &BTreeSet<VertexSet> {
        &self.edges
    }
}

/// `I(H)` together with the id assigned to each hyperedge node.
#[derive(Clone, Debug)]
pub struct IncidenceGraph {
    pub graph: Graph,
    /// Hyperedge node ids, in the hypergraph's edge order.
    pub edge_nodes: Vec<(VertexSet, VertexId)>,
}

impl IncidenceGraph {
    pub fn node_of(&self, e: &VertexSet) -> Option<VertexId> {
        self.edge_nodes.iter().find(|(f, _)| f == e).map(|&(_, id)| id)
    }
}

/// Bipartite graph on `V(H) ∪ E(H)`; hyperedge nodes get fresh ids above the vertex ids.
pub fn incidence_graph(h: &Hypergraph) -> IncidenceGraph {
    let mut g = Graph::with_vertices(h.vertices.iter().copied());
    let first = h.vertices.iter().next_back().map_or(0, |&m| m + 1);
    let mut edge_nodes = Vec::with_capacity(h.edges.len());
    let mut by_edge = BTreeMap::new();
    for (node, e) in (first..).zip(&h.edges) {
        g.add_vertex(node);
        for &v in e {
            g.add_edge(v, node);
        }
        by_edge.insert(e.clone(), node);
        edge_nodes.push((e.clone(), node));
    }
    IncidenceGraph { graph: g, edge_nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::are_isomorphic;

    #[test]
    fn single_hyperedge_is_a_star() {
        let h = Hypergraph::new(VertexSet::from([0, 1, 2]), [VertexSet::from([0, 1, 2])]).unwrap();
        let i = incidence_graph(&h);
        assert_eq!(i.graph.n(), 4);
        assert_eq!(i.graph.m(), 3);
        assert_eq!(i.graph.degree(i.edge_nodes[0].1), 3);
    }

    #[test]
    fn triangle_becomes_hexagon() {
        let i = incidence_graph(&Hypergraph::from_graph(&Graph::cycle(3)));
        assert!(are_isomorphic(&i.graph, &Graph::cycle(6)));
    }

    #[test]
    fn rejects_foreign_vertices() {
        assert!(Hypergraph::new(VertexSet::from([0]), [VertexSet::from([0, 4])]).is_err());
    }
}
