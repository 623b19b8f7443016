use crate::graph::{Graph, VertexId};
use crate::{Error, Result};

/// Replaces the triangle `{x,y,z}` by a fresh vertex `w` adjacent to all three.
pub fn delta_y(g: &Graph, triangle: [VertexId; 3]) -> Result<(Graph, VertexId)> {
    let [x, y, z] = triangle;
    for v in triangle {
        if !g.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
    }
    if x == y || y == z || x == z || !g.has_edge(x, y) || !g.has_edge(y, z) || !g.has_edge(x, z) {
        return Err(Error::Precondition(format!("{{{x}, {y}, {z}}} is not a triangle")));
    }
    let mut out = g.clone();
    out.remove_edge(x, y);
    out.remove_edge(y, z);
    out.remove_edge(x, z);
    let w = out.add_fresh_vertex();
    for v in triangle {
        out.add_edge(w, v);
    }
    Ok((out, w))
}

pub fn subdivide(g: &Graph, e: (VertexId, VertexId)) -> Result<(Graph, VertexId)> {
    let (u, v) = e;
    if !g.has_edge(u, v) {
        return Err(Error::UnknownEdge(u, v));
    }
    let mut out = g.clone();
    out.remove_edge(u, v);
    let w = out.add_fresh_vertex();
    out.add_edge(u, w);
    out.add_edge(w, v);
    Ok((out, w))
}

/// Contracts a degree-2 vertex into its path. Rejected when the neighbours are
/// already adjacent, since the result would need a parallel edge.
pub fn dissolve(g: &Graph, v: VertexId) -> Result<Graph> {
    if !g.contains_vertex(v) {
        return Err(Error::UnknownVertex(v));
    }
    let nb: Vec<VertexId> = g.neighbors(v).collect();
    if nb.len() != 2 {
        return Err(Error::Precondition(format!("vertex {v} has degree {}", nb.len())));
    }
    if g.has_edge(nb[0], nb[1]) {
        return Err(Error::Precondition(format!(
            "neighbours {} and {} of {v} are adjacent",
            nb[0], nb[1]
        )));
    }
    let mut out = g.clone();
    out.remove_vertex(v);
    out.add_edge(nb[0], nb[1]);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::minors::are_isomorphic;

    #[test]
    fn delta_y_examples() {
        let (g, w) = delta_y(&Graph::complete(3), [0, 1, 2]).unwrap();
        assert_eq!(w, 3);
        assert!(are_isomorphic(&g, &Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3)]).unwrap()));

        let (g, w) = delta_y(&Graph::complete(4), [0, 1, 2]).unwrap();
        assert_eq!((g.n(), g.m()), (5, 6));
        assert!(!g.has_edge(0, 1));
        for x in 0..3 {
            assert!(g.has_edge(3, x) && g.has_edge(w, x));
        }
        assert!(delta_y(&Graph::cycle(4), [0, 1, 2]).is_err());
    }

    #[test]
    fn subdivide_dissolve_examples() {
        let (c4, w) = subdivide(&Graph::cycle(3), (0, 1)).unwrap();
        assert!(are_isomorphic(&c4, &Graph::cycle(4)));
        assert_eq!(c4.degree(w), 2);
        let c3 = dissolve(&Graph::cycle(4), 2).unwrap();
        assert!(are_isomorphic(&c3, &Graph::cycle(3)));
        assert!(dissolve(&Graph::cycle(3), 0).is_err());
        assert!(dissolve(&Graph::complete(4), 0).is_err());
    }

    #[test]
    fn wall_round_trip() {
        let w1 = crate::generators::wall(1).unwrap().graph;
        let mut g = w1.clone();
        let mut fresh = Vec::new();
        for e in w1.edges() {
            let (h, v) = subdivide(&g, e).unwrap();
            g = h;
            fresh.push(v);
        }
        for v in fresh {
            g = dissolve(&g, v).unwrap();
        }
        assert!(are_isomorphic(&g, &w1));
    }
}
