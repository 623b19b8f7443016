//! Subdivided walls living inside host graphs: bookkeeping, perimeter,
//! layers, bricks, compasses, flatness, extraction from Γ-contractions,
//! subwall packing, and tracking a wall through ΔY-transformations.

mod extract;
mod flat;
mod refind;
mod subwalls;

pub use extract::extract_wall_from_gamma_contraction;
pub use flat::{is_flat, is_flat_in, validate_crossing, FlatVerdict};
pub use refind::{is_subdivision_of, refind_after_transform, TransformOp, Transformed};
pub use subwalls::{disjoint_subwalls, disjoint_subwalls_avoiding, windows, Window};

use std::collections::{BTreeMap, BTreeSet};

use crate::generators::{self, Wall};
use crate::graph::{edge, Edge, Graph, VertexId, VertexSet};
use crate::{Error, Result};

/// A subdivision of the elementary wall `W_height` inside some host graph.
///
/// `original_vertices` maps template vertices to host vertices and
/// `branch_paths` maps each template edge `{a, b}` (`a < b`) to the host path
/// from the image of `a` to the image of `b`. The host is not stored; every
/// operation that needs it takes it explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubdividedWall {
    pub height: usize,
    pub original_vertices: BTreeMap<VertexId, VertexId>,
    pub branch_paths: BTreeMap<Edge, Vec<VertexId>>,
    pub corners: [VertexId; 4],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WallViolation {
    BadHeight(usize),
    MissingOriginal(VertexId),
    ForeignTemplateVertex(VertexId),
    NotInjective(VertexId),
    MissingPath(VertexId, VertexId),
    ForeignTemplateEdge(VertexId, VertexId),
    WrongEndpoints(VertexId, VertexId),
    NotAHostPath(VertexId, VertexId),
    SharedVertex(VertexId),
    WrongCorner(usize),
}

impl std::fmt::Display for WallViolation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

impl SubdividedWall {
    /// The elementary wall itself, with identity images.
    pub fn elementary(height: usize) -> Result<Self> {
        let w = generators::wall(height)?;
        let map = w.graph.vertices().map(|v| (v, v)).collect();
        Ok(Self::from_vertex_map(&w, &map))
    }

    /// Unsubdivided image of a template under a vertex map.
    pub fn from_vertex_map(template: &Wall, map: &BTreeMap<VertexId, VertexId>) -> Self {
        let branch_paths = template.graph.edges().map(|(a, b)| ((a, b), vec![map[&a], map[&b]])).collect();
        SubdividedWall {
            height: template.height,
            original_vertices: template.graph.vertices().map(|v| (v, map[&v])).collect(),
            branch_paths,
            corners: template.corners.map(|c| map[&c]),
        }
    }

    pub fn template(&self) -> Result<Wall> {
        generators::wall(self.height)
    }

    pub fn validate(&self, host: &Graph) -> Result<(), WallViolation> {
        let template = generators::wall(self.height).map_err(|_| WallViolation::BadHeight(self.height))?;
        let mut images = VertexSet::new();
        for v in template.graph.vertices() {
            let Some(&h) = self.original_vertices.get(&v) else {
                return Err(WallViolation::MissingOriginal(v));
            };
            if !host.contains_vertex(h) || !images.insert(h) {
                return Err(WallViolation::NotInjective(h));
            }
        }
        if let Some(&v) = self.original_vertices.keys().find(|&&v| !template.graph.contains_vertex(v)) {
            return Err(WallViolation::ForeignTemplateVertex(v));
        }
        let mut interior = VertexSet::new();
        for (a, b) in template.graph.edges() {
            let Some(path) = self.branch_paths.get(&(a, b)) else {
                return Err(WallViolation::MissingPath(a, b));
            };
            if path.first() != Some(&self.original_vertices[&a])
                || path.last() != Some(&self.original_vertices[&b])
            {
                return Err(WallViolation::WrongEndpoints(a, b));
            }
            if path.len() < 2 || !host.is_path(path) {
                return Err(WallViolation::NotAHostPath(a, b));
            }
            for &x in &path[1..path.len() - 1] {
                if images.contains(&x) || !interior.insert(x) {
                    return Err(WallViolation::SharedVertex(x));
                }
            }
        }
        if let Some(&(a, b)) = self.branch_paths.keys().find(|&&(a, b)| !template.graph.has_edge(a, b)) {
            return Err(WallViolation::ForeignTemplateEdge(a, b));
        }
        for (i, &c) in template.corners.iter().enumerate() {
            if self.corners[i] != self.original_vertices[&c] {
                return Err(WallViolation::WrongCorner(i));
            }
        }
        Ok(())
    }

    pub(crate) fn check(&self, host: &Graph) -> Result<()> {
        self.validate(host)
            .map_err(|v| Error::Invalid(format!("wall certificate does not fit the host: {v}")))
    }

    /// The host path of a template edge oriented from `a` to `b`.
    pub fn path(&self, a: VertexId, b: VertexId) -> Option<Vec<VertexId>> {
        if a < b {
            self.branch_paths.get(&(a, b)).cloned()
        } else {
            let mut p = self.branch_paths.get(&(b, a))?.clone();
            p.reverse();
            Some(p)
        }
    }

    /// Host vertex sequence of a closed template walk.
    pub fn expand_cycle(&self, cycle: &[VertexId]) -> Vec<VertexId> {
        let mut out = Vec::new();
        for i in 0..cycle.len() {
            let p = self.path(cycle[i], cycle[(i + 1) % cycle.len()]).expect("template edge");
            out.extend_from_slice(&p[..p.len() - 1]);
        }
        out
    }

    /// Host vertex sequence of an open template walk.
    pub fn expand_path(&self, walk: &[VertexId]) -> Vec<VertexId> {
        let mut out = vec![self.original_vertices[&walk[0]]];
        for pair in walk.windows(2) {
            let p = self.path(pair[0], pair[1]).expect("template edge");
            out.extend_from_slice(&p[1..]);
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.branch_paths.values().flatten().copied().collect()
    }

    pub fn edge_set(&self) -> BTreeSet<Edge> {
        self.branch_paths
            .values()
            .flat_map(|p| p.windows(2).map(|e| edge(e[0], e[1])))
            .collect()
    }

    /// The union of the branch paths as a graph.
    pub fn graph(&self) -> Graph {
        let mut g = Graph::with_vertices(self.vertex_set());
        for (u, v) in self.edge_set() {
            g.add_edge(u, v);
        }
        g
    }

    pub fn perimeter(&self) -> Vec<VertexId> {
        let t = self.template().expect("valid height");
        self.expand_cycle(&t.perimeter())
    }

    /// Nested layers, outermost first; a height-1 wall has its perimeter as
    /// its only layer.
    pub fn layers(&self) -> Vec<Vec<VertexId>> {
        let t = self.template().expect("valid height");
        t.layers().iter().map(|l| self.expand_cycle(l)).collect()
    }

    /// Host cycles of the bricks, in the template's brick order.
    pub fn bricks(&self) -> Vec<Vec<VertexId>> {
        let t = self.template().expect("valid height");
        t.bricks().iter().map(|b| self.expand_cycle(b)).collect()
    }

    /// Pairs of brick indices whose cycles share an edge.
    pub fn brick_neighbors(&self) -> BTreeSet<(usize, usize)> {
        let t = self.template().expect("valid height");
        let edges: Vec<BTreeSet<Edge>> = t
            .bricks()
            .iter()
            .map(|b| (0..b.len()).map(|i| edge(b[i], b[(i + 1) % b.len()])).collect())
            .collect();
        let mut out = BTreeSet::new();
        for i in 0..edges.len() {
            for j in i + 1..edges.len() {
                if !edges[i].is_disjoint(&edges[j]) {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    /// Host image of a template path such as `P^(h)_j`.
    pub fn image_of_template_path(&self, walk: &[VertexId]) -> Vec<VertexId> {
        self.expand_path(walk)
    }

    pub fn anti_diametrical_pairs(&self) -> [(VertexId, VertexId); 2] {
        [(self.corners[0], self.corners[2]), (self.corners[1], self.corners[3])]
    }
}

/// A wall together with its compass `K` in the host.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compass {
    pub wall: SubdividedWall,
    pub graph: Graph,
}

impl Compass {
    pub fn corners(&self) -> [VertexId; 4] {
        self.wall.corners
    }
}

/// `K = G[V(K′) ∪ V(P)]` where `K′` is the component of `G ∖ P` holding
/// `W ∖ P`. When `W ∖ P` is empty (height 1) `K′` is empty and `K = G[V(P)]`.
pub fn compass(g: &Graph, w: &SubdividedWall) -> Result<Compass> {
    w.check(g)?;
    let perimeter: VertexSet = w.perimeter().into_iter().collect();
    let rest: VertexSet = w.vertex_set().difference(&perimeter).copied().collect();
    let mut keep = perimeter.clone();
    if let Some(&start) = rest.iter().next() {
        let comp = g.reachable_from(start, |x| !perimeter.contains(&x));
        if !rest.is_subset(&comp) {
            return Err(Error::Invalid("wall interior is split by its perimeter".into()));
        }
        keep.extend(comp);
    }
    Ok(Compass { wall: w.clone(), graph: g.induced_unchecked(&keep) })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elementary_wall_bookkeeping() {
        let w1 = SubdividedWall::elementary(1).unwrap();
        let g1 = generators::wall(1).unwrap().graph;
        assert_eq!(w1.validate(&g1), Ok(()));
        assert_eq!(w1.perimeter().len(), 6);
        assert_eq!(w1.layers(), vec![{
            let mut p = w1.perimeter();
            let m = *p.iter().min().unwrap();
            p = generators::rotate_to(p, m);
            p
        }]);
        assert_eq!(w1.bricks().len(), 1);

        let w2 = SubdividedWall::elementary(2).unwrap();
        assert_eq!(w2.perimeter().len(), 14);
        assert_eq!(w2.bricks().len(), 4);
        // bricks 0 and 1 are the two bricks of the top row
        assert!(w2.brick_neighbors().contains(&(0, 1)));
    }

    #[test]
    fn subdivided_perimeter_grows() {
        let base = generators::wall(2).unwrap();
        let (g, x) = crate::minors::subdivide(&base.graph, (0, 1)).unwrap();
        let mut w = SubdividedWall::elementary(2).unwrap();
        w.branch_paths.insert((0, 1), vec![0, x, 1]);
        assert_eq!(w.validate(&g), Ok(()));
        assert_eq!(w.perimeter().len(), 15);
        assert_eq!(w.validate(&base.graph), Err(WallViolation::NotAHostPath(0, 1)));
    }

    #[test]
    fn compass_examples() {
        let base = generators::wall(2).unwrap().graph;
        let w = SubdividedWall::elementary(2).unwrap();
        assert_eq!(compass(&base, &w).unwrap().graph, base);

        // pendant vertex on an internal wall vertex joins the compass
        let inner = w.vertex_set().difference(&w.perimeter().into_iter().collect()).copied().next().unwrap();
        let mut g = base.clone();
        let p = g.add_fresh_vertex();
        g.add_edge(inner, p);
        assert!(compass(&g, &w).unwrap().graph.contains_vertex(p));

        // a separate component does not
        let mut g = base.clone();
        let (a, b) = (g.add_fresh_vertex(), g.add_fresh_vertex());
        g.add_edge(a, b);
        let k = compass(&g, &w).unwrap();
        assert!(!k.graph.contains_vertex(a));
        assert_eq!(k.graph, base);
    }
}
