use std::collections::BTreeMap;

use super::SubdividedWall;
use crate::generators::{self, Wall};
use crate::graph::{VertexId, VertexSet};
use crate::{Error, Result};

/// A placement of a small elementary wall inside a larger one: the small
/// template is optionally mirrored (`flip_x`, `flip_y`) and then shifted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    pub flip_x: bool,
    pub flip_y: bool,
    pub dx: i64,
    pub dy: i64,
    /// Small template vertex → big template vertex.
    pub map: BTreeMap<VertexId, VertexId>,
}

impl Window {
    pub fn vertices(&self) -> VertexSet {
        self.map.values().copied().collect()
    }
}

/// Every placement of `sub` inside `big` that maps vertices to vertices and
/// edges to edges, ordered by row, then column, then orientation.
pub fn windows(big: &Wall, sub: &Wall) -> Vec<Window> {
    let sw = sub.coords.width as i64;
    let sh = sub.coords.height as i64;
    let mut out = Vec::new();
    for dy in -sh..=big.coords.height as i64 {
        for dx in -sw..=big.coords.width as i64 {
            for (flip_x, flip_y) in [(false, false), (true, false), (false, true), (true, true)] {
                let place = |v: VertexId| {
                    let (x, y) = sub.coords.coord(v);
                    let x = if flip_x { sw + 1 - x } else { x };
                    let y = if flip_y { sh + 1 - y } else { y };
                    big.coords.id(x + dx, y + dy)
                };
                let map: Option<BTreeMap<VertexId, VertexId>> =
                    sub.graph.vertices().map(|v| place(v).map(|b| (v, b))).collect();
                let Some(map) = map else { continue };
                if sub.graph.edges().all(|(a, b)| big.graph.has_edge(map[&a], map[&b])) {
                    out.push(Window { flip_x, flip_y, dx, dy, map });
                }
            }
        }
    }
    out
}

/// The subwall of `w` occupying a window of its template.
pub fn compose(w: &SubdividedWall, sub: &Wall, window: &Window) -> SubdividedWall {
    let original_vertices =
        window.map.iter().map(|(&s, &b)| (s, w.original_vertices[&b])).collect();
    let branch_paths = sub
        .graph
        .edges()
        .map(|(a, b)| ((a, b), w.path(window.map[&a], window.map[&b]).expect("window edge")))
        .collect();
    SubdividedWall {
        height: sub.height,
        original_vertices,
        branch_paths,
        corners: sub.corners.map(|c| w.original_vertices[&window.map[&c]]),
    }
}

pub fn disjoint_subwalls(w: &SubdividedWall, count: usize, sub_height: usize) -> Result<Vec<SubdividedWall>> {
    disjoint_subwalls_avoiding(w, count, sub_height, &VertexSet::new())
}

/// Greedy row-major packing of pairwise disjoint subwall windows that avoid
/// the `forbidden` template vertices of `w`.
pub fn disjoint_subwalls_avoiding(
    w: &SubdividedWall,
    count: usize,
    sub_height: usize,
    forbidden: &VertexSet,
) -> Result<Vec<SubdividedWall>> {
    let big = w.template()?;
    let sub = generators::wall(sub_height)?;
    let mut taken = forbidden.clone();
    let mut chosen = Vec::new();
    for window in windows(&big, &sub) {
        if chosen.len() == count {
            break;
        }
        let vs = window.vertices();
        if vs.is_disjoint(&taken) {
            taken.extend(vs);
            chosen.push(compose(w, &sub, &window));
        }
    }
    if chosen.len() < count {
        return Err(Error::Precondition(format!(
            "a wall of height {} holds only {} disjoint subwalls of height {sub_height}, {count} requested",
            w.height,
            chosen.len()
        )));
    }
    Ok(chosen)
}
