//! Planarity testing by path addition (Demoucron, Malgrange, Pertuiset) on each
//! biconnected block, producing a rotation system for the whole graph.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use super::{edge, Edge, Graph, VertexId, VertexSet};

/// Combinatorial embedding: a cyclic order of neighbours at every vertex.
///
/// Faces are traced with the rule "after dart `(u, v)` comes `(v, succ_v(u))`",
/// where `succ_v` is the successor in the rotation at `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RotationEmbedding {
    pub host: Graph,
    pub rotation: BTreeMap<VertexId, Vec<VertexId>>,
    /// Vertex sequence of one facial walk, closed implicitly.
    pub outer_face: Vec<VertexId>,
}

impl RotationEmbedding {
    pub fn new(host: Graph, rotation: BTreeMap<VertexId, Vec<VertexId>>) -> Self {
        let mut emb = RotationEmbedding { host, rotation, outer_face: Vec::new() };
        let faces = emb.faces();
        if let Some(longest) = faces.iter().max_by_key(|f| f.len()) {
            emb.outer_face = longest.iter().map(|&(u, _)| u).collect();
        }
        emb
    }

    /// Rotation lists exactly the incident edges of each vertex.
    pub fn is_consistent(&self) -> bool {
        self.host.vertices().all(|v| {
            let rot = self.rotation.get(&v).map(Vec::as_slice).unwrap_or(&[]);
            let set: BTreeSet<_> = rot.iter().copied().collect();
            set.len() == rot.len() && Some(&set) == self.host.neighbor_set(v)
        }) && self.rotation.keys().all(|&v| self.host.contains_vertex(v))
    }

    fn successor(&self, v: VertexId, u: VertexId) -> VertexId {
        let rot = &self.rotation[&v];
        let i = rot.iter().position(|&x| x == u).expect("dart in rotation");
        rot[(i + 1) % rot.len()]
    }

    /// All facial walks as dart sequences, starting from the smallest unused dart.
    pub fn faces(&self) -> Vec<Vec<(VertexId, VertexId)>> {
        let mut used = BTreeSet::new();
        let mut faces = Vec::new();
        for (u, v) in self.host.edges() {
            for start in [(u, v), (v, u)] {
                if used.contains(&start) {
                    continue;
                }
                let mut face = Vec::new();
                let mut dart = start;
                loop {
                    used.insert(dart);
                    face.push(dart);
                    let (a, b) = dart;
                    dart = (b, self.successor(b, a));
                    if dart == start {
                        break;
                    }
                }
                faces.push(face);
            }
        }
        faces
    }

    /// `V - E + F = 2` on every connected component; an isolated vertex has one face.
    pub fn satisfies_euler(&self) -> bool {
        if !self.is_consistent() {
            return false;
        }
        let faces = self.faces();
        self.host.connected_components().iter().all(|comp| {
            let e = self
                .host
                .edges()
                .filter(|(u, _)| comp.contains(u))
                .count();
            let f = if e == 0 {
                1
            } else {
                faces.iter().filter(|face| comp.contains(&face[0].0)).count()
            };
            comp.len() as i64 - e as i64 + f as i64 == 2
        })
    }
}

pub fn is_planar(g: &Graph) -> bool {
    embed_planar(g).is_some()
}

/// Whether `g` has a plane embedding with `cycle` bounding a face: equivalent to
/// planarity after adding a hub adjacent to every vertex of the cycle.
pub fn embeds_with_outer_cycle(g: &Graph, cycle: &[VertexId]) -> bool {
    let mut h = g.clone();
    let hub = h.add_fresh_vertex();
    for &v in cycle {
        h.add_edge(hub, v);
    }
    is_planar(&h)
}

pub fn embed_planar(g: &Graph) -> Option<RotationEmbedding> {
    let mut rotation: BTreeMap<VertexId, Vec<VertexId>> =
        g.vertices().map(|v| (v, Vec::new())).collect();
    for block in biconnected_blocks(g) {
        if block.len() == 1 {
            let (u, v) = block[0];
            rotation.get_mut(&u).unwrap().push(v);
            rotation.get_mut(&v).unwrap().push(u);
            continue;
        }
        let mut b = Graph::new();
        for &(u, v) in &block {
            b.add_edge(u, v);
        }
        if b.m() > 3 * b.n() - 6 {
            return None;
        }
        let faces = embed_biconnected(&b)?;
        for (v, order) in rotation_from_faces(&b, &faces) {
            rotation.get_mut(&v).unwrap().extend(order);
        }
    }
    Some(RotationEmbedding::new(g.clone(), rotation))
}

/// Edge sets of the biconnected blocks (bridges are single-edge blocks).
fn biconnected_blocks(g: &Graph) -> Vec<Vec<Edge>> {
    struct State<'a> {
        g: &'a Graph,
        disc: BTreeMap<VertexId, usize>,
        low: BTreeMap<VertexId, usize>,
        stack: Vec<Edge>,
        blocks: Vec<Vec<Edge>>,
        time: usize,
    }
    fn dfs(s: &mut State, v: VertexId, parent: Option<VertexId>) {
        s.time += 1;
        s.disc.insert(v, s.time);
        s.low.insert(v, s.time);
        let nbrs: Vec<VertexId> = s.g.neighbors(v).collect();
        for u in nbrs {
            if Some(u) == parent {
                continue;
            }
            match s.disc.get(&u).copied() {
                None => {
                    s.stack.push(edge(v, u));
                    dfs(s, u, Some(v));
                    let lu = s.low[&u];
                    if lu < s.low[&v] {
                        s.low.insert(v, lu);
                    }
                    if lu >= s.disc[&v] {
                        let mut block = Vec::new();
                        while let Some(e) = s.stack.pop() {
                            block.push(e);
                            if e == edge(v, u) {
                                break;
                            }
                        }
                        block.sort_unstable();
                        s.blocks.push(block);
                    }
                }
                Some(du) if du < s.disc[&v] => {
                    s.stack.push(edge(v, u));
                    if du < s.low[&v] {
                        s.low.insert(v, du);
                    }
                }
                Some(_) => {}
            }
        }
    }
    let mut s = State {
        g,
        disc: BTreeMap::new(),
        low: BTreeMap::new(),
        stack: Vec::new(),
        blocks: Vec::new(),
        time: 0,
    };
    for v in g.vertices() {
        if !s.disc.contains_key(&v) {
            dfs(&mut s, v, None);
        }
    }
    s.blocks
}

struct Fragment {
    attachments: VertexSet,
    /// Interior vertices; empty for a chord.
    interior: VertexSet,
}

/// Facial cycles of a plane embedding of a 2-connected graph, as directed vertex cycles.
fn embed_biconnected(b: &Graph) -> Option<Vec<Vec<VertexId>>> {
    let (s, t) = b.edges().next()?;
    let mut cycle = b.shortest_path(s, t, |_| true).filter(|p| p.len() > 2);
    if cycle.is_none() {
        // the direct edge is the shortest route; find one avoiding it
        let mut h = b.clone();
        h.remove_edge(s, t);
        cycle = h.shortest_path(s, t, |_| true);
    }
    let cycle = cycle?;
    let mut embedded_v: VertexSet = cycle.iter().copied().collect();
    let mut embedded_e: BTreeSet<Edge> = BTreeSet::new();
    for i in 0..cycle.len() {
        embedded_e.insert(edge(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut faces: Vec<Vec<VertexId>> = vec![cycle.clone(), cycle.iter().rev().copied().collect()];

    while embedded_e.len() < b.m() {
        let fragments = fragments(b, &embedded_v, &embedded_e);
        let mut choice: Option<(usize, usize)> = None;
        for (fi, frag) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = faces
                .iter()
                .enumerate()
                .filter(|(_, f)| frag.attachments.iter().all(|a| f.contains(a)))
                .map(|(i, _)| i)
                .collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if choice.is_none() {
                        choice = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = choice?;
        let path = fragment_path(b, &fragments[fi]);
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
        embedded_v.extend(path.iter().copied());
        for w in path.windows(2) {
            embedded_e.insert(edge(w[0], w[1]));
        }
    }
    Some(faces)
}

fn fragments(b: &Graph, hv: &VertexSet, he: &BTreeSet<Edge>) -> Vec<Fragment> {
    let mut out = Vec::new();
    for (u, v) in b.edges() {
        if hv.contains(&u) && hv.contains(&v) && !he.contains(&(u, v)) {
            out.push(Fragment { attachments: VertexSet::from([u, v]), interior: VertexSet::new() });
        }
    }
    let mut seen = VertexSet::new();
    for v in b.vertices() {
        if hv.contains(&v) || seen.contains(&v) {
            continue;
        }
        let comp = b.reachable_from(v, |x| !hv.contains(&x));
        seen.extend(comp.iter().copied());
        let attachments = comp
            .iter()
            .flat_map(|&x| b.neighbors(x))
            .filter(|x| hv.contains(x))
            .collect();
        out.push(Fragment { attachments, interior: comp });
    }
    out
}

/// A path between two distinct attachments running through the fragment.
fn fragment_path(b: &Graph, frag: &Fragment) -> Vec<VertexId> {
    let mut att = frag.attachments.iter().copied();
    let a = att.next().expect("fragment has attachments");
    let z = att.next().expect("2-connected fragment has two attachments");
    if frag.interior.is_empty() {
        return vec![a, z];
    }
    let mut parent: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    let mut queue = VecDeque::new();
    for x in b.neighbors(a).filter(|x| frag.interior.contains(x)) {
        parent.insert(x, a);
        queue.push_back(x);
    }
    while let Some(x) = queue.pop_front() {
        if b.has_edge(x, z) {
            let mut path = vec![z, x];
            let mut cur = x;
            while parent[&cur] != a {
                cur = parent[&cur];
                path.push(cur);
            }
            path.push(a);
            path.reverse();
            return path;
        }
        for y in b.neighbors(x) {
            if frag.interior.contains(&y) && !parent.contains_key(&y) {
                parent.insert(y, x);
                queue.push_back(y);
            }
        }
    }
    unreachable!("fragment interior is connected to every attachment")
}

fn split_face(face: &[VertexId], path: &[VertexId]) -> (Vec<VertexId>, Vec<VertexId>) {
    let n = face.len();
    let a = path[0];
    let z = *path.last().unwrap();
    let i = face.iter().position(|&x| x == a).unwrap();
    let j = face.iter().position(|&x| x == z).unwrap();
    let inner = &path[1..path.len() - 1];
    let mut f1 = Vec::new();
    let mut k = i;
    loop {
        f1.push(face[k]);
        if k == j {
            break;
        }
        k = (k + 1) % n;
    }
    f1.extend(inner.iter().rev().copied());
    let mut f2 = Vec::new();
    let mut k = j;
    loop {
        f2.push(face[k]);
        if k == i {
            break;
        }
        k = (k + 1) % n;
    }
    f2.extend(inner.iter().copied());
    (f1, f2)
}

fn rotation_from_faces(b: &Graph, faces: &[Vec<VertexId>]) -> BTreeMap<VertexId, Vec<VertexId>> {
    let mut succ: BTreeMap<VertexId, BTreeMap<VertexId, VertexId>> = BTreeMap::new();
    for f in faces {
        let n = f.len();
        for t in 0..n {
            let u = f[(t + n - 1) % n];
            let v = f[t];
            let x = f[(t + 1) % n];
            succ.entry(v).or_default().insert(u, x);
        }
    }
    b.vertices()
        .map(|v| {
            let s = &succ[&v];
            let first = b.neighbors(v).next().unwrap();
            let mut order = vec![first];
            let mut cur = s[&first];
            while cur != first {
                order.push(cur);
                cur = s[&cur];
            }
            (v, order)
        })
        .collect()
}
