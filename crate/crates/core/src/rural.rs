//! Rural divisions of a compass: the boundary operator, validation of
//! properties 1–5, disk embeddability of the boundary hypergraph, and the
//! vertex-disjoint linkage condition.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::graph::{edge, incidence_graph, is_planar, Edge, Graph, Hypergraph, VertexId, VertexSet};
use crate::wall::Compass;
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RuralDivision {
    pub compass: Compass,
    pub flaps: Vec<Graph>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RuralViolation {
    /// Property 1.
    EmptyFlap(usize),
    SharedEdge { edge: Edge, first: usize, second: usize },
    UncoveredEdge(Edge),
    /// Property 2.
    EqualBoundaries(usize, usize),
    StrayIntersection { first: usize, second: usize, vertex: VertexId },
    /// Property 3.
    Unlinked { flap: usize, from: VertexId, to: VertexId },
    /// Property 4.
    LargeBoundary { flap: usize, size: usize },
    /// Property 5.
    NotDiskEmbeddable,
    NoLinkage(usize),
}

impl RuralViolation {
    pub fn property(&self) -> u8 {
        use RuralViolation::*;
        match self {
            EmptyFlap(_) | SharedEdge { .. } | UncoveredEdge(_) => 1,
            EqualBoundaries(..) | StrayIntersection { .. } => 2,
            Unlinked { .. } => 3,
            LargeBoundary { .. } => 4,
            NotDiskEmbeddable | NoLinkage(_) => 5,
        }
    }
}

/// `∂_K J`: the corners in `J` plus the vertices of `J` incident to an edge
/// of `K` outside `J`.
pub fn boundary(k: &Compass, j: &Graph) -> Result<VertexSet> {
    if !j.is_subgraph_of(&k.graph) {
        return Err(Error::Invalid("flap is not a subgraph of the compass".into()));
    }
    let corners = k.corners();
    Ok(j.vertices()
        .filter(|&v| corners.contains(&v) || k.graph.neighbors(v).any(|u| !j.has_edge(u, v)))
        .collect())
}

impl RuralDivision {
    /// One flap per edge of the compass.
    pub fn trivial(compass: &Compass) -> Self {
        let flaps = compass
            .graph
            .edges()
            .map(|(u, v)| {
                let mut f = Graph::with_vertices([u, v]);
                f.add_edge(u, v);
                f
            })
            .collect();
        RuralDivision { compass: compass.clone(), flaps }
    }

    pub fn boundaries(&self) -> Result<Vec<VertexSet>> {
        self.flaps.iter().map(|f| boundary(&self.compass, f)).collect()
    }

    /// `H_K`: vertex set `⋃ ∂_K D_i`, one hyperedge per boundary.
    pub fn boundary_hypergraph(&self) -> Result<Hypergraph> {
        let bs = self.boundaries()?;
        let vertices: VertexSet = bs.iter().flatten().copied().collect();
        Hypergraph::new(vertices, bs.into_iter().filter(|b| !b.is_empty()))
    }
}

/// Reports the lowest-numbered violated property.
pub fn validate_rural(rd: &RuralDivision) -> Result<Result<(), RuralViolation>> {
    let k = &rd.compass.graph;
    let bs = rd.boundaries()?;

    let mut owner: BTreeMap<Edge, usize> = BTreeMap::new();
    for (i, f) in rd.flaps.iter().enumerate() {
        if f.m() == 0 {
            return Ok(Err(RuralViolation::EmptyFlap(i)));
        }
        for e in f.edges() {
            if let Some(&first) = owner.get(&e) {
                return Ok(Err(RuralViolation::SharedEdge { edge: e, first, second: i }));
            }
            owner.insert(e, i);
        }
    }
    if let Some(e) = k.edges().find(|e| !owner.contains_key(e)) {
        return Ok(Err(RuralViolation::UncoveredEdge(e)));
    }

    for i in 0..bs.len() {
        for j in i + 1..bs.len() {
            if bs[i] == bs[j] {
                return Ok(Err(RuralViolation::EqualBoundaries(i, j)));
            }
            let shared = rd.flaps[i].vertices().find(|&v| {
                rd.flaps[j].contains_vertex(v) && !(bs[i].contains(&v) && bs[j].contains(&v))
            });
            if let Some(vertex) = shared {
                return Ok(Err(RuralViolation::StrayIntersection { first: i, second: j, vertex }));
            }
        }
    }

    for (i, (f, b)) in rd.flaps.iter().zip(&bs).enumerate() {
        let list: Vec<VertexId> = b.iter().copied().collect();
        for (x, &from) in list.iter().enumerate() {
            for &to in &list[x + 1..] {
                if f.shortest_path(from, to, |v| !b.contains(&v)).is_none() {
                    return Ok(Err(RuralViolation::Unlinked { flap: i, from, to }));
                }
            }
        }
    }

    if let Some((flap, b)) = bs.iter().enumerate().find(|(_, b)| b.len() > 3) {
        return Ok(Err(RuralViolation::LargeBoundary { flap, size: b.len() }));
    }

    let h = rd.boundary_hypergraph()?;
    if !check_disk_embeddable(&h, rd.compass.corners())? {
        return Ok(Err(RuralViolation::NotDiskEmbeddable));
    }
    for (i, b) in bs.iter().enumerate() {
        if !check_linkage(&rd.compass, b)? {
            return Ok(Err(RuralViolation::NoLinkage(i)));
        }
    }
    Ok(Ok(()))
}

/// `I(H)` plus the cycle `c1 c2 c3 c4` plus a hub on the four corners is
/// planar exactly when `H` embeds in a disk with the corners on the boundary
/// in this cyclic order.
pub fn check_disk_embeddable(h: &Hypergraph, corners: [VertexId; 4]) -> Result<bool> {
    if let Some(&c) = corners.iter().find(|c| !h.vertices().contains(c)) {
        return Err(Error::UnknownVertex(c));
    }
    let mut g = incidence_graph(h).graph;
    for i in 0..4 {
        let (a, b) = (corners[i], corners[(i + 1) % 4]);
        if a != b && !g.has_edge(a, b) {
            g.add_edge(a, b);
        }
    }
    let hub = g.add_fresh_vertex();
    for c in corners {
        g.add_edge(hub, c);
    }
    Ok(is_planar(&g))
}

/// Whether `|e|` vertex-disjoint paths join `e` to the corners of `k`.
pub fn check_linkage(k: &Compass, e: &VertexSet) -> Result<bool> {
    if e.len() > 4 {
        return Err(Error::Precondition(format!("{} terminals exceed the four corners", e.len())));
    }
    if let Some(&v) = e.iter().find(|&&v| !k.graph.contains_vertex(v)) {
        return Err(Error::UnknownVertex(v));
    }
    let corners: VertexSet = k.corners().into_iter().collect();
    Ok(max_disjoint_paths(&k.graph, e, &corners) >= e.len())
}

/// Maximum number of vertex-disjoint paths from `sources` to `sinks`
/// (unit vertex capacities, via split vertices and augmenting paths).
pub fn max_disjoint_paths(g: &Graph, sources: &VertexSet, sinks: &VertexSet) -> usize {
    // node 2v: v_in, 2v+1: v_out; s and t after them
    let n = g.next_free_id();
    let (s, t) = (2 * n, 2 * n + 1);
    let mut cap: BTreeMap<(usize, usize), i32> = BTreeMap::new();
    let mut adj: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); 2 * n + 2];
    let mut add = |a: usize, b: usize, c: i32, cap: &mut BTreeMap<(usize, usize), i32>| {
        *cap.entry((a, b)).or_default() += c;
        cap.entry((b, a)).or_default();
        adj[a].insert(b);
        adj[b].insert(a);
    };
    for v in g.vertices() {
        add(2 * v, 2 * v + 1, 1, &mut cap);
    }
    for (u, v) in g.edges() {
        add(2 * u + 1, 2 * v, 1, &mut cap);
        add(2 * v + 1, 2 * u, 1, &mut cap);
    }
    for &v in sources {
        add(s, 2 * v, 1, &mut cap);
    }
    for &v in sinks {
        add(2 * v + 1, t, 1, &mut cap);
    }
    let mut flow = 0;
    loop {
        let mut parent = vec![usize::MAX; 2 * n + 2];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if parent[y] == usize::MAX && cap[&(x, y)] > 0 {
                    parent[y] = x;
                    queue.push_back(y);
                }
            }
        }
        if parent[t] == usize::MAX {
            return flow;
        }
        let mut y = t;
        while y != s {
            let x = parent[y];
            *cap.get_mut(&(x, y)).expect("arc") -= 1;
            *cap.get_mut(&(y, x)).expect("arc") += 1;
            y = x;
        }
        flow += 1;
    }
}

/// Indices of the flaps that avoid the perimeter.
pub fn internal_flaps(rd: &RuralDivision) -> Vec<usize> {
    let perimeter: VertexSet = rd.compass.wall.perimeter().into_iter().collect();
    rd.flaps
        .iter()
        .enumerate()
        .filter(|(_, f)| f.vertices().all(|v| !perimeter.contains(&v)))
        .map(|(i, _)| i)
        .collect()
}

/// Sum of flap edge counts; equals `|E(K)|` for every valid division.
pub fn edge_checksum(rd: &RuralDivision) -> usize {
    rd.flaps.iter().map(Graph::m).sum()
}

/// A flap given by its edge list.
pub fn flap_from_edges(edges: &[(VertexId, VertexId)]) -> Graph {
    let mut g = Graph::new();
    for &(u, v) in edges {
        let (a, b) = edge(u, v);
        g.add_vertex(a);
        g.add_vertex(b);
        g.add_edge(a, b);
    }
    g
}
