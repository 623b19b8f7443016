//! Simple undirected graphs, hypergraphs and planarity.
//!
//! Vertex ids are opaque `usize` values. They stay stable under deletion, so a
//! certificate built against one graph keeps meaning after other vertices are
//! removed. All iteration orders are ascending by id.

mod hypergraph;
mod planarity;

pub use hypergraph::{incidence_graph, Hypergraph, IncidenceGraph};
pub use planarity::{embed_planar, embeds_with_outer_cycle, is_planar, RotationEmbedding};

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::{Error, Result};

pub type VertexId = usize;
pub type VertexSet = BTreeSet<VertexId>;

/// Normalized undirected edge, smaller endpoint first.
pub type Edge = (VertexId, VertexId);

pub fn edge(u: VertexId, v: VertexId) -> Edge {
    if u <= v {
        (u, v)
    } else {
        (v, u)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: BTreeMap<VertexId, BTreeSet<VertexId>>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    /// Graph on vertices `0..n` with no edges.
    pub fn empty(n: usize) -> Self {
        Self::with_vertices(0..n)
    }

    pub fn with_vertices<I: IntoIterator<Item = VertexId>>(vertices: I) -> Self {
        Graph {
            adj: vertices.into_iter().map(|v| (v, BTreeSet::new())).collect(),
        }
    }

    /// Builds a graph on `0..n` from an edge list. Loops and unknown endpoints
    /// are rejected; repeated edges collapse.
    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self> {
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            g.try_add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.adj.entry(v).or_default();
    }

    /// Adds a vertex with the next unused id and returns it.
    pub fn add_fresh_vertex(&mut self) -> VertexId {
        let v = self.next_free_id();
        self.adj.insert(v, BTreeSet::new());
        v
    }

    pub fn next_free_id(&self) -> VertexId {
        self.adj.keys().next_back().map_or(0, |&m| m + 1)
    }

    /// Adds an edge, inserting missing endpoints. Panics on a loop.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) {
        assert_ne!(u, v, "loops are not allowed");
        self.adj.entry(u).or_default().insert(v);
        self.adj.entry(v).or_default().insert(u);
    }

    pub fn try_add_edge(&mut self, u: VertexId, v: VertexId) -> Result<()> {
        if u == v {
            return Err(Error::Loop(u));
        }
        for x in [u, v] {
            if !self.adj.contains_key(&x) {
                return Err(Error::UnknownVertex(x));
            }
        }
        self.add_edge(u, v);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        let a = self.adj.get_mut(&u).is_some_and(|s| s.remove(&v));
        let b = self.adj.get_mut(&v).is_some_and(|s| s.remove(&u));
        a && b
    }

    pub fn remove_vertex(&mut self, v: VertexId) -> bool {
        match self.adj.remove(&v) {
            Some(nbrs) => {
                for u in nbrs {
                    if let Some(s) = self.adj.get_mut(&u) {
                        s.remove(&v);
                    }
                }
                true
            }
            None => false,
        }
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn m(&self) -> usize {
        self.adj.values().map(|s| s.len()).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.adj.contains_key(&v)
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.adj.get(&u).is_some_and(|s| s.contains(&v))
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.adj.keys().copied()
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.adj.keys().copied().collect()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.adj
            .iter()
            .flat_map(|(&u, s)| s.range(u + 1..).map(move |&v| (u, v)))
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.edges().collect()
    }

    pub fn neighbors(&self, v: VertexId) -> impl DoubleEndedIterator<Item = VertexId> + '_ {
        self.adj.get(&v).into_iter().flat_map(|s| s.iter().copied())
    }

    pub fn neighbor_set(&self, v: VertexId) -> Option<&BTreeSet<VertexId>> {
        self.adj.get(&v)
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj.get(&v).map_or(0, |s| s.len())
    }

    pub fn max_degree(&self) -> usize {
        self.adj.values().map(|s| s.len()).max().unwrap_or(0)
    }

    fn check_vertices<'a, I: IntoIterator<Item = &'a VertexId>>(&self, vs: I) -> Result<()> {
        for &v in vs {
            if !self.contains_vertex(v) {
                return Err(Error::UnknownVertex(v));
            }
        }
        Ok(())
    }

    /// `G[S]`.
    pub fn induced_subgraph(&self, s: &VertexSet) -> Result<Graph> {
        self.check_vertices(s)?;
        Ok(self.induced_unchecked(s))
    }

    pub(crate) fn induced_unchecked(&self, s: &VertexSet) -> Graph {
        let adj = s
            .iter()
            .filter_map(|&v| {
                self.adj
                    .get(&v)
                    .map(|nb| (v, nb.iter().copied().filter(|u| s.contains(u)).collect()))
            })
            .collect();
        Graph { adj }
    }

    /// `G - U`.
    pub fn delete_vertices(&self, u: &VertexSet) -> Result<Graph> {
        self.check_vertices(u)?;
        let keep: VertexSet = self.vertices().filter(|v| !u.contains(v)).collect();
        Ok(self.induced_unchecked(&keep))
    }

    /// `G - E`.
    pub fn delete_edges(&self, es: &[Edge]) -> Result<Graph> {
        let mut g = self.clone();
        for &(u, v) in es {
            if !g.remove_edge(u, v) {
                return Err(Error::UnknownEdge(u, v));
            }
        }
        Ok(g)
    }

    /// Deletes vertices and edges in one step; edges are removed first, so an
    /// edge incident to a deleted vertex may be listed.
    pub fn delete(&self, vertices: &VertexSet, edges: &[Edge]) -> Result<Graph> {
        self.delete_edges(edges)?.delete_vertices(vertices)
    }

    /// Union of two graphs on the shared id space.
    pub fn union(&self, other: &Graph) -> Graph {
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u, v);
        }
        g
    }

    /// `H ⊆ G`: every vertex and edge of `self` is in `other`.
    pub fn is_subgraph_of(&self, other: &Graph) -> bool {
        self.vertices().all(|v| other.contains_vertex(v))
            && self.edges().all(|(u, v)| other.has_edge(u, v))
    }

    /// Components ordered by their smallest vertex.
    pub fn connected_components(&self) -> Vec<VertexSet> {
        let mut seen = VertexSet::new();
        let mut out = Vec::new();
        for v in self.vertices() {
            if seen.contains(&v) {
                continue;
            }
            let comp = self.reachable_from(v, |_| true);
            seen.extend(comp.iter().copied());
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        match self.vertices().next() {
            None => true,
            Some(v) => self.reachable_from(v, |_| true).len() == self.n(),
        }
    }

    /// Vertices reachable from `start` moving only through vertices accepted by `allow`.
    pub fn reachable_from<F: Fn(VertexId) -> bool>(&self, start: VertexId, allow: F) -> VertexSet {
        let mut seen = VertexSet::new();
        if !self.contains_vertex(start) || !allow(start) {
            return seen;
        }
        let mut queue = VecDeque::from([start]);
        seen.insert(start);
        while let Some(v) = queue.pop_front() {
            for u in self.neighbors(v) {
                if allow(u) && seen.insert(u) {
                    queue.push_back(u);
                }
            }
        }
        seen
    }

    /// Whether `s` is non-empty and induces a connected subgraph.
    pub fn is_connected_set(&self, s: &VertexSet) -> bool {
        match s.iter().next() {
            None => false,
            Some(&v) => self.reachable_from(v, |u| s.contains(&u)).len() == s.len(),
        }
    }

    /// Shortest path between two vertices through allowed vertices, endpoints included.
    pub fn shortest_path<F: Fn(VertexId) -> bool>(
        &self,
        from: VertexId,
        to: VertexId,
        allow: F,
    ) -> Option<Vec<VertexId>> {
        if !self.contains_vertex(from) || !self.contains_vertex(to) {
            return None;
        }
        let mut parent = BTreeMap::from([(from, from)]);
        let mut queue = VecDeque::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                let mut path = vec![to];
                let mut cur = to;
                while cur != from {
                    cur = parent[&cur];
                    path.push(cur);
                }
                path.reverse();
                return Some(path);
            }
            for u in self.neighbors(v) {
                if (u == to || allow(u)) && !parent.contains_key(&u) {
                    parent.insert(u, v);
                    queue.push_back(u);
                }
            }
        }
        None
    }

    /// Relabels vertices to `0..n` in ascending order; returns the graph and old ids by new id.
    pub fn compact(&self) -> (Graph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let index: BTreeMap<VertexId, VertexId> =
            old.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut g = Graph::empty(old.len());
        for (u, v) in self.edges() {
            g.add_edge(index[&u], index[&v]);
        }
        (g, old)
    }

    /// Applies an injective relabeling.
    pub fn relabel(&self, map: &BTreeMap<VertexId, VertexId>) -> Graph {
        let mut g = Graph::with_vertices(self.vertices().map(|v| map[&v]));
        for (u, v) in self.edges() {
            g.add_edge(map[&u], map[&v]);
        }
        g
    }

    /// Adjacency as bitmasks over the compacted ids. Requires `n <= 64`.
    pub(crate) fn bitmasks(&self) -> (Vec<u64>, Vec<VertexId>) {
        let (c, old) = self.compact();
        assert!(c.n() <= 64, "bitmask view supports at most 64 vertices");
        let masks = (0..c.n())
            .map(|v| c.neighbors(v).fold(0u64, |m, u| m | (1 << u)))
            .collect();
        (masks, old)
    }

    /// Disjoint union: `other` is shifted past this graph's ids. Returns the shift.
    pub fn disjoint_union(&self, other: &Graph) -> (Graph, VertexId) {
        let shift = self.next_free_id();
        let mut g = self.clone();
        for v in other.vertices() {
            g.add_vertex(v + shift);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + shift, v + shift);
        }
        (g, shift)
    }

    /// Adds `count` new vertices adjacent to every existing vertex and to each other.
    pub fn join_clique(&self, count: usize) -> (Graph, Vec<VertexId>) {
        let mut g = self.clone();
        let old: Vec<VertexId> = self.vertices().collect();
        let mut added = Vec::with_capacity(count);
        for _ in 0..count {
            let a = g.add_fresh_vertex();
            for &v in &old {
                g.add_edge(a, v);
            }
            for &b in &added {
                g.add_edge(a, b);
            }
            added.push(a);
        }
        (g, added)
    }

    pub fn complete(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Graph {
        assert!(n >= 3);
        let mut g = Graph::empty(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n);
        }
        g
    }

    pub fn path(n: usize) -> Graph {
        let mut g = Graph::empty(n);
        for i in 1..n {
            g.add_edge(i - 1, i);
        }
        g
    }

    /// Checks that consecutive entries are adjacent and no vertex repeats.
    pub fn is_path(&self, path: &[VertexId]) -> bool {
        !path.is_empty()
            && path.iter().all(|&v| self.contains_vertex(v))
            && path.iter().collect::<BTreeSet<_>>().len() == path.len()
            && path.windows(2).all(|w| self.has_edge(w[0], w[1]))
    }

    /// Whether this graph is a tree (connected, `m = n - 1`, non-empty).
    pub fn is_tree(&self) -> bool {
        self.n() > 0 && self.m() + 1 == self.n() && self.is_connected()
    }
}
