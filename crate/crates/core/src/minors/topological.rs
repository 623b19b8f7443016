use std::collections::{BTreeMap, VecDeque};

use super::search::{connected_order, find_minor_with, SearchCaps};
use super::MinorModel;
use crate::graph::{edge, Edge, Graph, VertexId, VertexSet};
use crate::{Error, Result};

/// A subdivision of `pattern` inside `host`: injective branch vertices and,
/// per pattern edge `{p,q}` with `p < q`, a host path from the image of `p`
/// to the image of `q`. Paths are internally disjoint and avoid other branch
/// vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TopologicalModel {
    pub host: Graph,
    pub pattern: Graph,
    pub branch_vertices: BTreeMap<VertexId, VertexId>,
    pub paths: BTreeMap<Edge, Vec<VertexId>>,
}

impl TopologicalModel {
    pub fn validate(&self) -> Result<(), String> {
        let mut images = VertexSet::new();
        for p in self.pattern.vertices() {
            let Some(&h) = self.branch_vertices.get(&p) else {
                return Err(format!("pattern vertex {p} has no branch vertex"));
            };
            if !self.host.contains_vertex(h) {
                return Err(format!("branch vertex {h} is not in the host"));
            }
            if !images.insert(h) {
                return Err(format!("branch vertex {h} is used twice"));
            }
        }
        if self.branch_vertices.len() != self.pattern.n() {
            return Err("branch vertices for non-pattern vertices".into());
        }
        let mut interior = VertexSet::new();
        for (p, q) in self.pattern.edges() {
            let Some(path) = self.paths.get(&(p, q)) else {
                return Err(format!("pattern edge {{{p}, {q}}} has no path"));
            };
            if path.first() != Some(&self.branch_vertices[&p])
                || path.last() != Some(&self.branch_vertices[&q])
            {
                return Err(format!("path for {{{p}, {q}}} has wrong endpoints"));
            }
            if !self.host.is_path(path) {
                return Err(format!("path for {{{p}, {q}}} is not a host path"));
            }
            for &v in &path[1..path.len() - 1] {
                if images.contains(&v) || !interior.insert(v) {
                    return Err(format!("path for {{{p}, {q}}} reuses vertex {v}"));
                }
            }
        }
        if self.paths.len() != self.pattern.m() {
            return Err("paths for non-pattern edges".into());
        }
        Ok(())
    }
}

pub fn find_topological_minor(host: &Graph, pattern: &Graph) -> Result<Option<TopologicalModel>> {
    find_topological_minor_with(host, pattern, &SearchCaps::default())
}

/// Exhaustive search. For patterns of maximum degree at most 3 a minor model
/// is found instead and converted, since there the two relations coincide.
/// Otherwise degree-2 pattern vertices are dissolved first and come
/// back as minimum path lengths; the remaining branch vertices are placed in
/// a connectivity order, candidates tried closest-first, and each pattern
/// edge is routed by enumerating free paths shortest-first.
pub fn find_topological_minor_with(
    host: &Graph,
    pattern: &Graph,
    caps: &SearchCaps,
) -> Result<Option<TopologicalModel>> {
    caps.check(host, pattern)?;
    if pattern.n() > host.n() || pattern.m() > host.m() {
        return Ok(None);
    }
    if pattern.max_degree() <= 3 {
        return Ok(find_minor_with(host, pattern, caps)?.map(|m| subdivision_from_minor(&m)));
    }
    let (hc, host_ids) = host.compact();
    let (pc, pattern_ids) = pattern.compact();
    let (reduced, chains) = dissolve_chains(&pc);
    let (rc, reduced_ids) = reduced.compact();
    let weight = |a: usize, b: usize| chains[&edge(reduced_ids[a], reduced_ids[b])].len() - 1;
    let order = connected_order(&rc);
    let p = rc.n();
    let twins = |a: usize, b: usize| {
        let na: BTreeMap<usize, usize> = rc.neighbors(a).filter(|&x| x != b).map(|x| (x, weight(a, x))).collect();
        let nb: BTreeMap<usize, usize> = rc.neighbors(b).filter(|&x| x != a).map(|x| (x, weight(b, x))).collect();
        na == nb
    };
    let back_neighbors: Vec<Vec<usize>> = (0..p)
        .map(|i| (0..i).filter(|&j| rc.has_edge(order[i], order[j])).collect())
        .collect();
    let min_len: Vec<Vec<usize>> = (0..p)
        .map(|i| back_neighbors[i].iter().map(|&j| weight(order[i], order[j])).collect())
        .collect();
    let back_twins: Vec<Vec<usize>> = (0..p)
        .map(|i| (0..i).filter(|&j| twins(order[i], order[j])).collect())
        .collect();
    let mut s = TopoSearch {
        adj: (0..hc.n()).map(|v| hc.neighbors(v).collect()).collect(),
        pdeg: order.iter().map(|&v| rc.degree(v)).collect(),
        back_neighbors,
        min_len,
        back_twins,
        image: vec![usize::MAX; p],
        pending: vec![0; p],
        paths: Vec::new(),
        used: vec![false; hc.n()],
        steps: 0,
        max_steps: caps.max_steps,
    };
    if !s.place(0)? {
        return Ok(None);
    }
    let mut branch_vertices: BTreeMap<VertexId, VertexId> =
        (0..p).map(|i| (pattern_ids[reduced_ids[order[i]]], host_ids[s.image[i]])).collect();
    let mut paths = BTreeMap::new();
    for (i, j, path) in &s.paths {
        let (a, b) = (reduced_ids[order[*i]], reduced_ids[order[*j]]);
        // stored from position i to position j; chains run from the smaller id
        let mut hp: Vec<VertexId> = path.iter().map(|&v| host_ids[v]).collect();
        if a > b {
            hp.reverse();
        }
        let chain = &chains[&edge(a, b)];
        let last = chain.len() - 1;
        for t in 1..last {
            branch_vertices.insert(pattern_ids[chain[t]], hp[t]);
        }
        for t in 0..last {
            let segment = if t + 1 == last { hp[t..].to_vec() } else { hp[t..t + 2].to_vec() };
            let (x, y) = (pattern_ids[chain[t]], pattern_ids[chain[t + 1]]);
            let segment = if x < y { segment } else { segment.into_iter().rev().collect() };
            paths.insert(edge(x, y), segment);
        }
    }
    Ok(Some(TopologicalModel {
        host: host.clone(),
        pattern: pattern.clone(),
        branch_vertices,
        paths,
    }))
}

/// Turns a minor model of a subcubic pattern into a subdivision. In each
/// branch set the branch vertex is the median, in a spanning tree, of the
/// (at most three) endpoints of the chosen edges leaving the set; tree paths
/// from a median to distinct endpoints share only the median.
fn subdivision_from_minor(m: &MinorModel) -> TopologicalModel {
    let trees: BTreeMap<VertexId, SpanningTree> =
        m.branch_sets.iter().map(|(&p, b)| (p, SpanningTree::new(&m.host, b))).collect();
    let links: BTreeMap<Edge, (VertexId, VertexId)> = m
        .pattern
        .edges()
        .map(|(p, q)| {
            let link = m.branch_sets[&p]
                .iter()
                .find_map(|&x| m.host.neighbors(x).find(|y| m.branch_sets[&q].contains(y)).map(|y| (x, y)))
                .expect("valid minor model");
            ((p, q), link)
        })
        .collect();
    let branch_vertices: BTreeMap<VertexId, VertexId> = m
        .pattern
        .vertices()
        .map(|p| {
            let ends: Vec<VertexId> = m
                .pattern
                .neighbors(p)
                .map(|q| {
                    let (x, y) = links[&edge(p, q)];
                    if p < q {
                        x
                    } else {
                        y
                    }
                })
                .collect();
            let t = &trees[&p];
            let c = match ends.as_slice() {
                [] => t.root,
                [a] | [a, _] => *a,
                [a, b, c] => t.median(*a, *b, *c),
                _ => unreachable!("pattern is subcubic"),
            };
            (p, c)
        })
        .collect();
    let paths = links
        .iter()
        .map(|(&(p, q), &(x, y))| {
            let mut path = trees[&p].path(branch_vertices[&p], x);
            path.extend(trees[&q].path(y, branch_vertices[&q]));
            ((p, q), path)
        })
        .collect();
    TopologicalModel { host: m.host.clone(), pattern: m.pattern.clone(), branch_vertices, paths }
}

struct SpanningTree {
    root: VertexId,
    parent: BTreeMap<VertexId, VertexId>,
    depth: BTreeMap<VertexId, usize>,
}

impl SpanningTree {
    /// BFS tree of `host[set]`; `set` must be connected and non-empty.
    fn new(host: &Graph, set: &VertexSet) -> Self {
        let root = *set.first().expect("non-empty branch set");
        let mut parent = BTreeMap::new();
        let mut depth = BTreeMap::from([(root, 0)]);
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for u in host.neighbors(v) {
                if set.contains(&u) && !depth.contains_key(&u) {
                    depth.insert(u, depth[&v] + 1);
                    parent.insert(u, v);
                    queue.push_back(u);
                }
            }
        }
        SpanningTree { root, parent, depth }
    }

    /// Tree path from `a` to `b`, both ends included.
    fn path(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        let (mut x, mut y) = (a, b);
        let (mut head, mut tail) = (vec![x], vec![y]);
        while x != y {
            if self.depth[&x] >= self.depth[&y] {
                x = self.parent[&x];
                head.push(x);
            } else {
                y = self.parent[&y];
                tail.push(y);
            }
        }
        tail.pop();
        head.extend(tail.into_iter().rev());
        head
    }

    fn median(&self, a: VertexId, b: VertexId, c: VertexId) -> VertexId {
        let ab: VertexSet = self.path(a, b).into_iter().collect();
        let ac: VertexSet = self.path(a, c).into_iter().collect();
        self.path(b, c).into_iter().find(|v| ab.contains(v) && ac.contains(v)).expect("trees have medians")
    }
}

/// Repeatedly dissolves degree-2 vertices whose neighbours are not yet
/// adjacent. Each edge of the result maps to the chain of original vertices
/// it replaces, listed from its smaller endpoint.
fn dissolve_chains(g: &Graph) -> (Graph, BTreeMap<Edge, Vec<VertexId>>) {
    let mut g = g.clone();
    let mut chains: BTreeMap<Edge, Vec<VertexId>> = g.edges().map(|(a, b)| ((a, b), vec![a, b])).collect();
    let oriented = |chains: &BTreeMap<Edge, Vec<VertexId>>, from: VertexId, to: VertexId| {
        let c = chains[&edge(from, to)].clone();
        if from < to {
            c
        } else {
            c.into_iter().rev().collect::<Vec<_>>()
        }
    };
    loop {
        let next = g.vertices().find(|&v| {
            let ns: Vec<VertexId> = g.neighbors(v).collect();
            ns.len() == 2 && !g.has_edge(ns[0], ns[1])
        });
        let Some(v) = next else { break };
        let ns: Vec<VertexId> = g.neighbors(v).collect();
        let (a, b) = (ns[0].min(ns[1]), ns[0].max(ns[1]));
        let mut chain = oriented(&chains, a, v);
        chain.extend_from_slice(&oriented(&chains, v, b)[1..]);
        chains.remove(&edge(a, v));
        chains.remove(&edge(v, b));
        chains.insert((a, b), chain);
        g.remove_vertex(v);
        g.add_edge(a, b);
    }
    (g, chains)
}

struct TopoSearch {
    adj: Vec<Vec<usize>>,
    pdeg: Vec<usize>,
    back_neighbors: Vec<Vec<usize>>,
    /// Minimum length of the path for each back edge.
    min_len: Vec<Vec<usize>>,
    back_twins: Vec<Vec<usize>>,
    image: Vec<usize>,
    /// Pattern edges at each position not routed yet.
    pending: Vec<usize>,
    paths: Vec<(usize, usize, Vec<usize>)>,
    used: Vec<bool>,
    steps: u64,
    max_steps: Option<u64>,
}

impl TopoSearch {
    fn tick(&mut self) -> Result<()> {
        self.steps += 1;
        match self.max_steps {
            Some(max) if self.steps > max => Err(Error::CapExceeded {
                what: "search steps",
                size: self.steps as usize,
                cap: max as usize,
            }),
            _ => Ok(()),
        }
    }

    fn free_degree(&self, v: usize) -> usize {
        self.adj[v].iter().filter(|&&u| !self.used[u]).count()
    }

    /// BFS distances through free vertices from `src`.
    fn distances(&self, src: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.adj.len()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(v) = queue.pop_front() {
            for &u in &self.adj[v] {
                if dist[u] == usize::MAX && !self.used[u] {
                    dist[u] = dist[v] + 1;
                    queue.push_back(u);
                }
            }
        }
        dist
    }

    /// Every placed vertex must keep enough free neighbours for its
    /// remaining edges.
    fn capacity_ok(&self, upto: usize) -> bool {
        (0..upto).all(|j| self.pending[j] <= self.free_degree(self.image[j]) + self.direct_pending(j, upto))
    }

    fn direct_pending(&self, j: usize, upto: usize) -> usize {
        // pending unit-length edges to placed neighbours that are adjacent in the host
        (0..upto)
            .filter(|&i| i != j)
            .filter(|&i| {
                let pending_edge = self.edge_len(i, j) == Some(1)
                    && !self.paths.iter().any(|(a, b, _)| (*a == i && *b == j) || (*a == j && *b == i));
                pending_edge && self.adj[self.image[j]].contains(&self.image[i])
            })
            .count()
    }

    fn edge_len(&self, i: usize, j: usize) -> Option<usize> {
        let (hi, lo) = (i.max(j), i.min(j));
        let k = self.back_neighbors[hi].iter().position(|&x| x == lo)?;
        Some(self.min_len[hi][k])
    }

    fn place(&mut self, i: usize) -> Result<bool> {
        if i == self.image.len() {
            return Ok(true);
        }
        let lower = self.back_twins[i].iter().map(|&j| self.image[j] as i64).max().unwrap_or(-1);
        let dists: Vec<Vec<usize>> =
            self.back_neighbors[i].iter().map(|&j| self.distances(self.image[j])).collect();
        let mut cands: Vec<(usize, usize)> = (0..self.adj.len())
            .filter(|&c| !self.used[c] && c as i64 > lower && self.adj[c].len() >= self.pdeg[i])
            .filter_map(|c| {
                let mut total = 0usize;
                for d in &dists {
                    if d[c] == usize::MAX {
                        return None;
                    }
                    total += d[c];
                }
                Some((total, c))
            })
            .collect();
        cands.sort_unstable();
        for (_, c) in cands {
            self.tick()?;
            self.image[i] = c;
            self.used[c] = true;
            self.pending[i] = self.pdeg[i];
            if self.free_degree(c) + self.back_neighbors[i].len() >= self.pdeg[i]
                && self.capacity_ok(i + 1)
                && self.route(i, 0)?
            {
                return Ok(true);
            }
            self.used[c] = false;
            self.image[i] = usize::MAX;
        }
        Ok(false)
    }

    /// Routes the `k`-th back edge of position `i`, then the rest, then
    /// continues placing.
    fn route(&mut self, i: usize, k: usize) -> Result<bool> {
        if k == self.back_neighbors[i].len() {
            return self.place(i + 1);
        }
        let j = self.back_neighbors[i][k];
        let (src, dst) = (self.image[i], self.image[j]);
        let free_count = self.used.iter().filter(|u| !**u).count();
        for len in self.min_len[i][k]..=free_count + 1 {
            let mut paths = Vec::new();
            let mut path = vec![src];
            self.paths_of_length(dst, len, &mut path, &mut paths);
            if paths.is_empty() && len > self.min_len[i][k] && !self.reachable(src, dst) {
                break;
            }
            for path in paths {
                self.tick()?;
                for &v in &path[1..path.len() - 1] {
                    self.used[v] = true;
                }
                self.pending[i] -= 1;
                self.pending[j] -= 1;
                self.paths.push((i, j, path.clone()));
                if self.capacity_ok(i + 1) && self.route(i, k + 1)? {
                    return Ok(true);
                }
                self.paths.pop();
                self.pending[i] += 1;
                self.pending[j] += 1;
                for &v in &path[1..path.len() - 1] {
                    self.used[v] = false;
                }
            }
        }
        Ok(false)
    }

    fn reachable(&self, src: usize, dst: usize) -> bool {
        let mut seen = vec![false; self.adj.len()];
        seen[src] = true;
        let mut stack = vec![src];
        while let Some(v) = stack.pop() {
            for &u in &self.adj[v] {
                if u == dst {
                    return true;
                }
                if !seen[u] && !self.used[u] {
                    seen[u] = true;
                    stack.push(u);
                }
            }
        }
        false
    }

    fn paths_of_length(&self, dst: usize, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().expect("non-empty path");
        let edges_so_far = path.len() - 1;
        if edges_so_far + 1 == len {
            if self.adj[last].contains(&dst) {
                let mut p = path.clone();
                p.push(dst);
                out.push(p);
            }
            return;
        }
        for &u in &self.adj[last] {
            if !self.used[u] && !path.contains(&u) {
                path.push(u);
                self.paths_of_length(dst, len, path, out);
                path.pop();
            }
        }
    }
}
