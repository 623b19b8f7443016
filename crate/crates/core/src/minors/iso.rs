use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId};

/// Colour refinement on the disjoint union, so colours are comparable
/// across the two graphs.
fn refine(a: &Graph, b: &Graph) -> (BTreeMap<VertexId, usize>, BTreeMap<VertexId, usize>) {
    let mut ca: BTreeMap<VertexId, usize> = a.vertices().map(|v| (v, a.degree(v))).collect();
    let mut cb: BTreeMap<VertexId, usize> = b.vertices().map(|v| (v, b.degree(v))).collect();
    loop {
        let sig = |g: &Graph, c: &BTreeMap<VertexId, usize>, v: VertexId| {
            let mut nb: Vec<usize> = g.neighbors(v).map(|u| c[&u]).collect();
            nb.sort_unstable();
            (c[&v], nb)
        };
        let mut palette: BTreeMap<(usize, Vec<usize>), usize> = BTreeMap::new();
        let sa: Vec<_> = a.vertices().map(|v| (v, sig(a, &ca, v))).collect();
        let sb: Vec<_> = b.vertices().map(|v| (v, sig(b, &cb, v))).collect();
        for (_, s) in sa.iter().chain(&sb) {
            let next = palette.len();
            palette.entry(s.clone()).or_insert(next);
        }
        let na: BTreeMap<_, _> = sa.into_iter().map(|(v, s)| (v, palette[&s])).collect();
        let nb: BTreeMap<_, _> = sb.into_iter().map(|(v, s)| (v, palette[&s])).collect();
        let classes = |x: &BTreeMap<VertexId, usize>, y: &BTreeMap<VertexId, usize>| {
            x.values().chain(y.values()).collect::<std::collections::BTreeSet<_>>().len()
        };
        let stable = classes(&na, &nb) == classes(&ca, &cb);
        ca = na;
        cb = nb;
        if stable {
            return (ca, cb);
        }
    }
}

/// A vertex bijection `a → b` preserving adjacency, if one exists.
pub fn find_isomorphism(a: &Graph, b: &Graph) -> Option<BTreeMap<VertexId, VertexId>> {
    if a.n() != b.n() || a.m() != b.m() {
        return None;
    }
    let (ca, cb) = refine(a, b);
    let histogram = |c: &BTreeMap<VertexId, usize>| {
        let mut h: BTreeMap<usize, usize> = BTreeMap::new();
        for &x in c.values() {
            *h.entry(x).or_default() += 1;
        }
        h
    };
    let (ha, hb) = (histogram(&ca), histogram(&cb));
    if ha != hb {
        return None;
    }
    // Rare colours first, then neighbours of already ordered vertices.
    let mut order: Vec<VertexId> = Vec::with_capacity(a.n());
    let mut placed = std::collections::BTreeSet::new();
    while order.len() < a.n() {
        let next = a
            .vertices()
            .filter(|v| !placed.contains(v))
            .min_by_key(|&v| {
                let back = a.neighbors(v).filter(|u| placed.contains(u)).count();
                (std::cmp::Reverse(back), ha[&ca[&v]], v)
            })
            .expect("vertex left");
        placed.insert(next);
        order.push(next);
    }
    let mut by_colour: BTreeMap<usize, Vec<VertexId>> = BTreeMap::new();
    for (&v, &c) in &cb {
        by_colour.entry(c).or_default().push(v);
    }
    let mut map = BTreeMap::new();
    let mut used = std::collections::BTreeSet::new();
    if extend(a, b, &order, 0, &ca, &by_colour, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn extend(
    a: &Graph,
    b: &Graph,
    order: &[VertexId],
    i: usize,
    ca: &BTreeMap<VertexId, usize>,
    by_colour: &BTreeMap<usize, Vec<VertexId>>,
    map: &mut BTreeMap<VertexId, VertexId>,
    used: &mut std::collections::BTreeSet<VertexId>,
) -> bool {
    let Some(&v) = order.get(i) else {
        return true;
    };
    for &w in &by_colour[&ca[&v]] {
        if used.contains(&w) {
            continue;
        }
        let consistent = map.iter().all(|(&x, &y)| a.has_edge(v, x) == b.has_edge(w, y));
        if !consistent {
            continue;
        }
        map.insert(v, w);
        used.insert(w);
        if extend(a, b, order, i + 1, ca, by_colour, map, used) {
            return true;
        }
        map.remove(&v);
        used.remove(&w);
    }
    false
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    find_isomorphism(a, b).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabelled_graphs_match() {
        let g = crate::generators::wall(2).unwrap().graph;
        let n = g.n();
        let map: BTreeMap<_, _> = g.vertices().map(|v| (v, (v * 7 + 3) % n + 100)).collect();
        let h = g.relabel(&map);
        let iso = find_isomorphism(&g, &h).unwrap();
        for (u, v) in g.edges() {
            assert!(h.has_edge(iso[&u], iso[&v]));
        }
    }

    #[test]
    fn regular_non_isomorphic() {
        // C_6 versus two triangles: same degree sequence
        let two_triangles =
            Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]).unwrap();
        assert!(!are_isomorphic(&Graph::cycle(6), &two_triangles));
        assert!(are_isomorphic(&Graph::cycle(6), &Graph::cycle(6)));
    }
}
