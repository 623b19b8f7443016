use super::{compass, SubdividedWall};
use crate::graph::{edge, Edge, Graph, VertexId};
use crate::minors::{delta_y, subdivide};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TransformOp {
    DeltaY([VertexId; 3]),
    Subdivide(VertexId, VertexId),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transformed {
    pub graph: Graph,
    pub wall: SubdividedWall,
}

/// Applies the operations to `g` one by one and carries the wall along.
///
/// A ΔY on a triangle sharing one edge with the wall reroutes that edge
/// through the new vertex. With two shared edges meeting at `x`: if `x` is
/// a degree-3 original vertex, the new vertex takes over its role and `x`
/// becomes a subdivision vertex on the third branch path; otherwise `x` is
/// simply replaced by the new vertex. Subdividing a wall edge lengthens its
/// branch path. Every ΔY target must be a triangle of the current compass.
pub fn refind_after_transform(g: &Graph, w: &SubdividedWall, ops: &[TransformOp]) -> Result<Transformed> {
    let mut graph = g.clone();
    let mut wall = w.clone();
    wall.check(&graph)?;
    for &op in ops {
        match op {
            TransformOp::Subdivide(u, v) => {
                let (next, x) = subdivide(&graph, (u, v))?;
                if let Some((key, i)) = locate(&wall, u, v) {
                    wall.branch_paths.get_mut(&key).expect("located").insert(i + 1, x);
                }
                graph = next;
            }
            TransformOp::DeltaY(tri) => {
                let k = compass(&graph, &wall)?;
                let [x, y, z] = tri;
                if !(k.graph.has_edge(x, y) && k.graph.has_edge(y, z) && k.graph.has_edge(x, z)) {
                    return Err(Error::Precondition(format!(
                        "{{{x}, {y}, {z}}} is not a triangle of the compass"
                    )));
                }
                let (next, nw) = delta_y(&graph, tri)?;
                reroute(&mut wall, tri, nw);
                graph = next;
            }
        }
        wall.check(&graph)?;
    }
    Ok(Transformed { graph, wall })
}

/// The branch path containing the host edge `{u, v}` and the index of the
/// earlier endpoint within it.
fn locate(w: &SubdividedWall, u: VertexId, v: VertexId) -> Option<(Edge, usize)> {
    w.branch_paths.iter().find_map(|(&key, p)| {
        p.windows(2)
            .position(|e| edge(e[0], e[1]) == edge(u, v))
            .map(|i| (key, i))
    })
}

fn reroute(wall: &mut SubdividedWall, [x, y, z]: [VertexId; 3], nw: VertexId) {
    let shared: Vec<Edge> = [edge(x, y), edge(y, z), edge(x, z)]
        .into_iter()
        .filter(|&(a, b)| locate(wall, a, b).is_some())
        .collect();
    match shared.len() {
        0 => {}
        1 => {
            let (a, b) = shared[0];
            let (key, i) = locate(wall, a, b).expect("shared");
            wall.branch_paths.get_mut(&key).expect("located").insert(i + 1, nw);
        }
        _ => {
            // the vertex common to both shared edges
            let (e, f) = (shared[0], shared[1]);
            let apex = if e.0 == f.0 || e.0 == f.1 { e.0 } else { e.1 };
            let original = wall.original_vertices.iter().find(|(_, &h)| h == apex).map(|(&t, _)| t);
            let degree3 = original.is_some_and(|t| {
                wall.branch_paths.keys().filter(|&&(a, b)| a == t || b == t).count() == 3
            });
            if degree3 {
                let t = original.expect("original");
                wall.original_vertices.insert(t, nw);
                let on_triangle = [x, y, z];
                for (&(a, b), p) in wall.branch_paths.iter_mut() {
                    if a != t && b != t {
                        continue;
                    }
                    // orient so the path starts at apex
                    let flip = p[0] != apex;
                    if flip {
                        p.reverse();
                    }
                    if on_triangle.contains(&p[1]) {
                        p[0] = nw;
                    } else {
                        p.insert(0, nw);
                    }
                    if flip {
                        p.reverse();
                    }
                }
            } else {
                for p in wall.branch_paths.values_mut() {
                    for v in p.iter_mut() {
                        if *v == apex {
                            *v = nw;
                        }
                    }
                }
                if let Some(t) = original {
                    wall.original_vertices.insert(t, nw);
                }
            }
            for c in wall.corners.iter_mut() {
                if *c == apex && !degree3 {
                    *c = nw;
                }
            }
        }
    }
}

/// Same height and every branch path at least as long as before, so the
/// new wall is a subdivision of the old one.
pub fn is_subdivision_of(new: &SubdividedWall, old: &SubdividedWall) -> bool {
    new.height == old.height
        && new.branch_paths.len() == old.branch_paths.len()
        && old
            .branch_paths
            .iter()
            .all(|(e, p)| new.branch_paths.get(e).is_some_and(|q| q.len() >= p.len()))
}
