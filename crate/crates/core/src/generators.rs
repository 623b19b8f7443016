//! Deterministic constructors for grids, triangulated grids, walls, pyramids
//! and the treewidth lower-bound graph.
//!
//! Coordinates are `(x, y)` with `x` the column (1-based, growing east) and `y`
//! the row (1-based, growing south).

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::graph::{Graph, RotationEmbedding, VertexId, VertexSet};
use crate::{Error, Result};

pub type Coord = (i64, i64);

/// Bijective coordinate map attached to a generated graph.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GridCoords {
    pub width: usize,
    pub height: usize,
    pub coords: BTreeMap<VertexId, Coord>,
    #[serde(skip)]
    pub ids: BTreeMap<Coord, VertexId>,
}

impl GridCoords {
    fn insert(&mut self, v: VertexId, c: Coord) {
        self.coords.insert(v, c);
        self.ids.insert(c, v);
    }

    pub fn id(&self, x: i64, y: i64) -> Option<VertexId> {
        self.ids.get(&(x, y)).copied()
    }

    pub fn coord(&self, v: VertexId) -> Coord {
        self.coords[&v]
    }
}

#[derive(Clone, Debug)]
pub struct Grid {
    pub graph: Graph,
    pub coords: GridCoords,
}

impl Grid {
    /// Degree-2 vertices, ordered NW, NE, SE, SW.
    pub fn corners(&self) -> Vec<VertexId> {
        let (w, h) = (self.coords.width as i64, self.coords.height as i64);
        [(1, 1), (w, 1), (w, h), (1, h)]
            .into_iter()
            .map(|(x, y)| self.coords.id(x, y).unwrap())
            .collect()
    }

    pub fn internal_vertices(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.graph.degree(v) == 4).collect()
    }

    pub fn external_vertices(&self) -> Vec<VertexId> {
        self.graph.vertices().filter(|&v| self.graph.degree(v) < 4).collect()
    }
}

fn param(name: &'static str, value: usize, min: usize) -> Result<()> {
    if value < min {
        return Err(Error::Parameter {
            name,
            value: value as i64,
            reason: "below the family's minimum",
        });
    }
    Ok(())
}

/// The `(k × r)`-grid: `k` rows and `r` columns, ids row-major from 0.
pub fn grid(k: usize, r: usize) -> Result<Grid> {
    param("k", k, 2)?;
    param("r", r, 2)?;
    Ok(grid_unchecked(k, r))
}

fn grid_unchecked(rows: usize, cols: usize) -> Grid {
    let mut graph = Graph::empty(rows * cols);
    let mut coords = GridCoords { width: cols, height: rows, ..Default::default() };
    for y in 0..rows {
        for x in 0..cols {
            let v = y * cols + x;
            coords.insert(v, (x as i64 + 1, y as i64 + 1));
            if x + 1 < cols {
                graph.add_edge(v, v + 1);
            }
            if y + 1 < rows {
                graph.add_edge(v, v + cols);
            }
        }
    }
    Grid { graph, coords }
}

/// `Γ_k` together with its loaded corner.
#[derive(Clone, Debug)]
pub struct Gamma {
    pub graph: Graph,
    pub coords: GridCoords,
    pub loaded: VertexId,
}

impl Gamma {
    /// Vertices on the boundary of the underlying grid.
    pub fn external_vertices(&self) -> VertexSet {
        let k = self.coords.width as i64;
        self.coords
            .coords
            .iter()
            .filter(|(_, &(x, y))| x == 1 || y == 1 || x == k || y == k)
            .map(|(&v, _)| v)
            .collect()
    }
}

/// Triangulated `(k × k)`-grid with the diagonal `(x, y)–(x+1, y+1)` in every
/// cell, loaded at the north-east corner `(k, 1)`.
pub fn gamma(k: usize) -> Result<Gamma> {
    param("k", k, 3)?;
    let Grid { mut graph, coords } = grid_unchecked(k, k);
    let k = k as i64;
    for y in 1..k {
        for x in 1..k {
            graph.add_edge(coords.id(x, y).unwrap(), coords.id(x + 1, y + 1).unwrap());
        }
    }
    let loaded = coords.id(k, 1).unwrap();
    let mut out = Gamma { graph, coords, loaded };
    for v in out.external_vertices() {
        if v != loaded {
            out.graph.add_edge(loaded, v);
        }
    }
    Ok(out)
}

/// `Γ*_k`: `Γ_k` without the edges at the loaded corner that are not grid edges.
pub fn gamma_star(k: usize) -> Result<Gamma> {
    let mut g = gamma(k)?;
    let (lx, ly) = g.coords.coord(g.loaded);
    let extra: Vec<VertexId> = g
        .graph
        .neighbors(g.loaded)
        .filter(|&u| {
            let (x, y) = g.coords.coord(u);
            (x - lx).abs() + (y - ly).abs() != 1
        })
        .collect();
    for u in extra {
        g.graph.remove_edge(g.loaded, u);
    }
    Ok(g)
}

/// The elementary wall `W_k` with coordinates, corners and named paths.
#[derive(Clone, Debug)]
pub struct Wall {
    pub height: usize,
    pub graph: Graph,
    pub coords: GridCoords,
    /// `c1` (NW), `c2` (NE), `c3` (SE), `c4` (SW); `{c1, c3}` and `{c2, c4}`
    /// are the anti-diametrical pairs.
    pub corners: [VertexId; 4],
}

/// `W_k`: the `((k+1) × (2k+2))`-grid minus the vertical edges
/// `{(x,y),(x,y+1)}` with `x + y` odd, minus the resulting degree-1 vertices.
pub fn wall(k: usize) -> Result<Wall> {
    param("k", k, 1)?;
    let rows = k as i64 + 1;
    let cols = 2 * k as i64 + 2;
    let mut keep: BTreeSet<Coord> = (1..=rows)
        .flat_map(|y| (1..=cols).map(move |x| (x, y)))
        .collect();
    let adjacent = |a: Coord, b: Coord| {
        let horizontal = a.1 == b.1 && (a.0 - b.0).abs() == 1;
        let top = a.1.min(b.1);
        let vertical = a.0 == b.0 && (a.1 - b.1).abs() == 1 && (a.0 + top) % 2 == 0;
        horizontal || vertical
    };
    let degree = |keep: &BTreeSet<Coord>, c: Coord| {
        [(1, 0), (-1, 0), (0, 1), (0, -1)]
            .iter()
            .map(|(dx, dy)| (c.0 + dx, c.1 + dy))
            .filter(|n| keep.contains(n) && adjacent(c, *n))
            .count()
    };
    loop {
        let low: Vec<Coord> = keep.iter().copied().filter(|&c| degree(&keep, c) <= 1).collect();
        if low.is_empty() {
            break;
        }
        for c in low {
            keep.remove(&c);
        }
    }
    let mut coords = GridCoords { width: cols as usize, height: rows as usize, ..Default::default() };
    // row-major ids
    let mut ordered: Vec<Coord> = keep.iter().copied().collect();
    ordered.sort_by_key(|&(x, y)| (y, x));
    let mut graph = Graph::empty(ordered.len());
    for (v, &c) in ordered.iter().enumerate() {
        coords.insert(v, c);
    }
    for (&c, &v) in &coords.ids {
        for n in [(c.0 + 1, c.1), (c.0, c.1 + 1)] {
            if let Some(&u) = coords.ids.get(&n) {
                if adjacent(c, n) {
                    graph.add_edge(v, u);
                }
            }
        }
    }
    let shift = (k as i64 + 1) % 2;
    let corners = [
        coords.id(1, 1).unwrap(),
        coords.id(2 * k as i64 + 1, 1).unwrap(),
        coords.id(2 * k as i64 + 1 + shift, rows).unwrap(),
        coords.id(1 + shift, rows).unwrap(),
    ];
    Ok(Wall { height: k, graph, coords, corners })
}

impl Wall {
    pub fn anti_diametrical_pairs(&self) -> [(VertexId, VertexId); 2] {
        [(self.corners[0], self.corners[2]), (self.corners[1], self.corners[3])]
    }

    /// Straight-line rotation system from the coordinates.
    pub fn embedding(&self) -> RotationEmbedding {
        geometric_embedding(&self.graph, &self.coords)
    }

    /// Boundary cycle, starting at `c1`.
    pub fn perimeter(&self) -> Vec<VertexId> {
        let cycle = outer_cycle(&self.graph, &self.coords);
        rotate_to(cycle, self.corners[0])
    }

    /// Bounded faces; each is a brick (a 6-cycle).
    pub fn bricks(&self) -> Vec<Vec<VertexId>> {
        let emb = self.embedding();
        let mut bricks: Vec<Vec<VertexId>> = emb
            .faces()
            .into_iter()
            .map(|f| f.into_iter().map(|(u, _)| u).collect::<Vec<_>>())
            .filter(|f| signed_area(f, &self.coords) < 0)
            .map(|f| {
                let start = *f.iter().min().unwrap();
                rotate_to(f, start)
            })
            .collect();
        bricks.sort();
        bricks
    }

    /// Nested layers, outermost first. At least the perimeter is returned even
    /// when `⌊k/2⌋ = 0`.
    pub fn layers(&self) -> Vec<Vec<VertexId>> {
        let count = (self.height / 2).max(1);
        let mut layers = Vec::with_capacity(count);
        let mut current = self.graph.clone();
        while layers.len() < count {
            let cycle = outer_cycle(&current, &self.coords);
            let on_cycle: VertexSet = cycle.iter().copied().collect();
            let start = *cycle.iter().min().unwrap();
            layers.push(rotate_to(cycle, start));
            current = current.delete_vertices(&on_cycle).expect("cycle vertices exist");
            prune_low_degree(&mut current);
            if current.m() == 0 {
                break;
            }
        }
        layers
    }

    /// `P^(h)_j`: row `j` from its westmost to its eastmost vertex.
    pub fn horizontal_path(&self, j: i64) -> Option<Vec<VertexId>> {
        let row: Vec<VertexId> = (1..=self.coords.width as i64)
            .filter_map(|x| self.coords.id(x, j))
            .collect();
        (!row.is_empty()).then_some(row)
    }

    /// `P^(v)_i`: the top-to-bottom path using only columns `i` and `i + 1`.
    pub fn vertical_path(&self, i: i64) -> Option<Vec<VertexId>> {
        if i < 1 || i > 2 * self.height as i64 + 1 {
            return None;
        }
        let rows = self.height as i64 + 1;
        let column_of = |y: i64| if (i + y) % 2 == 0 { i } else { i + 1 };
        let mut path = Vec::new();
        let mut x = column_of(1);
        for y in 1..=rows {
            let next = if y < rows { column_of(y) } else { x };
            let step: i64 = if next >= x { 1 } else { -1 };
            let mut cx = x;
            loop {
                path.push(self.coords.id(cx, y)?);
                if cx == next {
                    break;
                }
                cx += step;
            }
            x = next;
        }
        Some(path)
    }

    pub fn northern_path(&self) -> Vec<VertexId> {
        self.horizontal_path(1).unwrap()
    }

    pub fn southern_path(&self) -> Vec<VertexId> {
        self.horizontal_path(self.height as i64 + 1).unwrap()
    }

    pub fn western_path(&self) -> Vec<VertexId> {
        self.vertical_path(1).unwrap()
    }

    pub fn eastern_path(&self) -> Vec<VertexId> {
        self.vertical_path(2 * self.height as i64 + 1).unwrap()
    }
}

fn prune_low_degree(g: &mut Graph) {
    loop {
        let low: Vec<VertexId> = g.vertices().filter(|&v| g.degree(v) <= 1).collect();
        if low.is_empty() {
            return;
        }
        for v in low {
            g.remove_vertex(v);
        }
    }
}

pub(crate) fn rotate_to(mut cycle: Vec<VertexId>, start: VertexId) -> Vec<VertexId> {
    if let Some(i) = cycle.iter().position(|&v| v == start) {
        cycle.rotate_left(i);
    }
    cycle
}

/// Counter-clockwise rotation (y axis pointing north) from integer coordinates.
pub(crate) fn geometric_embedding(g: &Graph, coords: &GridCoords) -> RotationEmbedding {
    let rotation = g
        .vertices()
        .map(|v| {
            let (x, y) = coords.coord(v);
            let mut nbrs: Vec<VertexId> = g.neighbors(v).collect();
            nbrs.sort_by(|&a, &b| {
                let (ax, ay) = coords.coord(a);
                let (bx, by) = coords.coord(b);
                let ta = ((-(ay - y)) as f64).atan2((ax - x) as f64);
                let tb = ((-(by - y)) as f64).atan2((bx - x) as f64);
                ta.partial_cmp(&tb).unwrap()
            });
            (v, nbrs)
        })
        .collect();
    RotationEmbedding::new(g.clone(), rotation)
}

/// Twice the signed area with the y axis flipped to point north. Bounded
/// faces are traced clockwise, so they come out negative.
fn signed_area(face: &[VertexId], coords: &GridCoords) -> i64 {
    let n = face.len();
    (0..n)
        .map(|i| {
            let (x1, y1) = coords.coord(face[i]);
            let (x2, y2) = coords.coord(face[(i + 1) % n]);
            x1 * (-y2) - x2 * (-y1)
        })
        .sum()
}

/// The outer face of a connected plane straight-line drawing, clockwise.
fn outer_cycle(g: &Graph, coords: &GridCoords) -> Vec<VertexId> {
    let emb = geometric_embedding(g, coords);
    let mut face = emb
        .faces()
        .into_iter()
        .map(|f| f.into_iter().map(|(u, _)| u).collect::<Vec<_>>())
        .filter(|f| signed_area(f, coords) > 0)
        .max_by_key(|f| f.len())
        .expect("non-empty drawing has an outer face");
    face.reverse();
    face
}

/// `Π_{k,l}`: a `(k × k)`-grid completely joined to a clique `K_l`.
pub fn pyramid(k: usize, l: usize) -> Result<Grid> {
    param("k", k, 2)?;
    let g = grid_unchecked(k, k);
    let (graph, _) = g.graph.join_clique(l);
    Ok(Grid { graph, coords: g.coords })
}

/// The graph `J`: a `(k × k)`-grid joined to `K_{h-5}`.
pub fn lower_bound_graph(k: usize, h: usize) -> Result<Grid> {
    param("k", k, 3)?;
    param("h", h, 6)?;
    pyramid(k, h - 5)
}
