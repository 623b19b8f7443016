//! Independent brute-force oracles shared by the integration tests. None of
//! them call into the library's search routines.
#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use flatwall::{Graph, VertexId, VertexSet};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> Graph {
    let mut g = Graph::empty(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v);
            }
        }
    }
    g
}

pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> Graph {
    let mut g = Graph::empty(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        g.add_edge(u, v);
    }
    g
}

fn adjacency(g: &Graph) -> BTreeMap<VertexId, BTreeSet<VertexId>> {
    g.vertices().map(|v| (v, g.neighbors(v).collect())).collect()
}

/// Minimum over all elimination orders of the largest neighbourhood met
/// while eliminating. Orders are pruned once they cannot beat the best.
pub fn brute_treewidth(g: &Graph) -> usize {
    fn go(adj: &BTreeMap<VertexId, BTreeSet<VertexId>>, so_far: usize, best: &mut usize) {
        if adj.len() <= so_far + 1 || so_far >= *best {
            *best = (*best).min(so_far.max(adj.len().saturating_sub(1)));
            return;
        }
        for (&v, nb) in adj {
            let width = so_far.max(nb.len());
            if width >= *best {
                continue;
            }
            let mut next = adj.clone();
            next.remove(&v);
            for &a in nb {
                let set = next.get_mut(&a).unwrap();
                set.remove(&v);
                set.extend(nb.iter().copied().filter(|&b| b != a));
            }
            go(&next, width, best);
        }
    }
    let mut best = g.n().saturating_sub(1);
    go(&adjacency(g), 0, &mut best);
    best
}

fn connected_within(g: &Graph, set: &BTreeSet<VertexId>) -> bool {
    let Some(&start) = set.iter().next() else { return false };
    let mut seen = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some(v) = stack.pop() {
        for u in g.neighbors(v) {
            if set.contains(&u) && seen.insert(u) {
                stack.push(u);
            }
        }
    }
    seen.len() == set.len()
}

/// Tries every assignment of host vertices to pattern vertices or to
/// nothing, and checks the minor-model conditions literally.
pub fn brute_minor(host: &Graph, pattern: &Graph) -> bool {
    let hv: Vec<VertexId> = host.vertices().collect();
    let pv: Vec<VertexId> = pattern.vertices().collect();
    if pv.is_empty() {
        return true;
    }
    let base = pv.len() + 1;
    let total = (base as u64).pow(hv.len() as u32);
    'maps: for code in 0..total {
        let mut c = code;
        let mut sets: Vec<BTreeSet<VertexId>> = vec![BTreeSet::new(); pv.len()];
        for &v in &hv {
            let d = (c % base as u64) as usize;
            c /= base as u64;
            if d > 0 {
                sets[d - 1].insert(v);
            }
        }
        if sets.iter().any(|s| !connected_within(host, s)) {
            continue;
        }
        for (a, b) in pattern.edges() {
            let (ia, ib) = (pv.iter().position(|&x| x == a).unwrap(), pv.iter().position(|&x| x == b).unwrap());
            if !sets[ia].iter().any(|&x| host.neighbors(x).any(|y| sets[ib].contains(&y))) {
                continue 'maps;
            }
        }
        return true;
    }
    false
}

pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

pub fn brute_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.n() != b.n() || a.m() != b.m() {
        return false;
    }
    let av: Vec<VertexId> = a.vertices().collect();
    let bv: Vec<VertexId> = b.vertices().collect();
    permutations(av.len()).into_iter().any(|p| {
        let map: BTreeMap<VertexId, VertexId> = p.iter().enumerate().map(|(i, &j)| (av[i], bv[j])).collect();
        a.edges().all(|(x, y)| b.has_edge(map[&x], map[&y]))
    })
}

/// All simple paths from `from` that stop at the first vertex of `targets`,
/// avoiding `blocked`.
pub fn simple_paths_to(
    g: &Graph,
    from: VertexId,
    targets: &BTreeSet<VertexId>,
    blocked: &BTreeSet<VertexId>,
) -> Vec<Vec<VertexId>> {
    fn go(
        g: &Graph,
        path: &mut Vec<VertexId>,
        targets: &BTreeSet<VertexId>,
        blocked: &BTreeSet<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        let last = *path.last().unwrap();
        if targets.contains(&last) {
            out.push(path.clone());
            return;
        }
        for u in g.neighbors(last) {
            if !blocked.contains(&u) && !path.contains(&u) {
                path.push(u);
                go(g, path, targets, blocked, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    if !blocked.contains(&from) {
        go(g, &mut vec![from], targets, blocked, &mut out);
    }
    out
}

/// Whether every terminal can be joined to its own corner by pairwise
/// vertex-disjoint paths, by enumerating the paths.
pub fn brute_linkage(k: &Graph, terminals: &VertexSet, corners: &BTreeSet<VertexId>) -> bool {
    fn go(k: &Graph, rest: &[VertexId], corners: &BTreeSet<VertexId>, used: &mut BTreeSet<VertexId>) -> bool {
        let Some((&t, tail)) = rest.split_first() else { return true };
        let blocked: BTreeSet<VertexId> = used.iter().copied().filter(|&u| u != t).collect();
        if used.contains(&t) {
            return false;
        }
        let free: BTreeSet<VertexId> = corners.difference(used).copied().collect();
        for p in simple_paths_to(k, t, &free, &blocked) {
            for &v in &p {
                used.insert(v);
            }
            // other terminals may not be swallowed by this path
            if tail.iter().all(|x| !p.contains(x)) && go(k, tail, corners, used) {
                return true;
            }
            for v in &p {
                used.remove(v);
            }
        }
        false
    }
    let list: Vec<VertexId> = terminals.iter().copied().collect();
    go(k, &list, corners, &mut BTreeSet::new())
}

/// Whether `k` has vertex-disjoint `(c1, c3)`- and `(c2, c4)`-paths, trying
/// every simple `(c1, c3)`-path.
pub fn brute_crossing(k: &Graph, [c1, c2, c3, c4]: [VertexId; 4]) -> bool {
    let blocked = BTreeSet::from([c2, c4]);
    simple_paths_to(k, c1, &BTreeSet::from([c3]), &blocked).into_iter().any(|p| {
        let off: BTreeSet<VertexId> = p.into_iter().collect();
        !simple_paths_to(k, c2, &BTreeSet::from([c4]), &off).is_empty()
    })
}

pub fn components(g: &Graph) -> Vec<BTreeSet<VertexId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for s in g.vertices() {
        if seen.contains(&s) {
            continue;
        }
        let mut comp = BTreeSet::from([s]);
        let mut stack = vec![s];
        while let Some(v) = stack.pop() {
            for u in g.neighbors(v) {
                if comp.insert(u) {
                    stack.push(u);
                }
            }
        }
        seen.extend(comp.iter().copied());
        out.push(comp);
    }
    out
}

/// `W_k` built literally: the `(k+1) × (2k+2)` grid, vertical edges kept
/// only where the column and the upper row have the same parity, then the
/// two resulting degree-1 vertices removed. Returns `(n, m)`.
pub fn literal_wall_counts(k: usize) -> (usize, usize) {
    let rows = k + 1;
    let cols = 2 * k + 2;
    let mut g = Graph::empty(rows * cols);
    let id = |x: usize, y: usize| (y - 1) * cols + (x - 1);
    for y in 1..=rows {
        for x in 1..=cols {
            if x < cols {
                g.add_edge(id(x, y), id(x + 1, y));
            }
            if y < rows && (x + y) % 2 == 0 {
                g.add_edge(id(x, y), id(x, y + 1));
            }
        }
    }
    loop {
        let low: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) <= 1).collect();
        if low.is_empty() {
            break;
        }
        for v in low {
            g.remove_vertex(v);
        }
    }
    (g.n(), g.m())
}

/// Whether `pattern` is a topological minor of `host`: every injective
/// placement of branch vertices, then backtracking over internally disjoint
/// simple paths for the pattern edges.
pub fn brute_topological_minor(host: &Graph, pattern: &Graph) -> bool {
    let pv: Vec<VertexId> = pattern.vertices().collect();
    let hv: Vec<VertexId> = host.vertices().collect();
    let edges: Vec<(VertexId, VertexId)> = pattern.edges().collect();

    fn route(
        host: &Graph,
        edges: &[(VertexId, VertexId)],
        image: &BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        let Some(&(p, q)) = edges.first() else { return true };
        let (a, b) = (image[&p], image[&q]);
        // `used` holds the branch images and earlier interiors
        for path in simple_paths_to(host, a, &BTreeSet::from([b]), &BTreeSet::new()) {
            if path.len() < 2 || path[1..path.len() - 1].iter().any(|v| used.contains(v)) {
                continue;
            }
            let interior: Vec<VertexId> = path[1..path.len() - 1].to_vec();
            used.extend(interior.iter().copied());
            if route(host, &edges[1..], image, used) {
                return true;
            }
            for v in &interior {
                used.remove(v);
            }
        }
        false
    }

    fn place(
        host: &Graph,
        pv: &[VertexId],
        hv: &[VertexId],
        edges: &[(VertexId, VertexId)],
        image: &mut BTreeMap<VertexId, VertexId>,
        used: &mut BTreeSet<VertexId>,
    ) -> bool {
        if image.len() == pv.len() {
            return route(host, edges, image, used);
        }
        let p = pv[image.len()];
        for &h in hv {
            if used.insert(h) {
                image.insert(p, h);
                if place(host, pv, hv, edges, image, used) {
                    return true;
                }
                image.remove(&p);
                used.remove(&h);
            }
        }
        false
    }

    place(host, &pv, &hv, &edges, &mut BTreeMap::new(), &mut BTreeSet::new())
}
