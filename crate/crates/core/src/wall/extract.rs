use std::collections::BTreeMap;

use super::{compass, disjoint_subwalls_avoiding, SubdividedWall};
use crate::generators::{self, Wall};
use crate::graph::{embeds_with_outer_cycle, Graph, VertexId, VertexSet};
use crate::minors::{verify_smooth_contraction, SmoothContractionWitness};
use crate::{Error, Result};

/// Finds a height-`k` subdivided wall in `g` from a witness that `g`
/// contains `Γ_{2k+8}` as a v-smooth contraction with `v` the loaded corner.
///
/// `W_{k+2}` sits in the inner grid of `Γ_{2k+8}`; it is lifted through the
/// contraction (each branch vertex becomes a junction inside its model, each
/// edge a host path through the two models) and a height-`k` subwall clear of
/// its perimeter is returned. The result is checked: its compass must embed
/// in a disk with the wall's perimeter as the boundary.
pub fn extract_wall_from_gamma_contraction(
    g: &Graph,
    witness: &SmoothContractionWitness,
    k: usize,
) -> Result<SubdividedWall> {
    if k == 0 {
        return Err(Error::Parameter { name: "k", value: 0, reason: "wall height must be positive" });
    }
    let gamma = generators::gamma(2 * k + 8)?;
    if witness.model.pattern != gamma.graph {
        return Err(Error::Precondition(format!("witness pattern is not Γ_{}", 2 * k + 8)));
    }
    if witness.v != gamma.loaded {
        return Err(Error::Precondition(format!(
            "witness vertex {} is not the loaded corner {}",
            witness.v, gamma.loaded
        )));
    }
    if &witness.model.host != g {
        return Err(Error::Precondition("witness is for a different host".into()));
    }
    if let Err(v) = verify_smooth_contraction(witness)? {
        return Err(Error::Invalid(format!("witness is not a v-smooth contraction: {v:?}")));
    }

    let template = generators::wall(k + 2)?;
    // template (x, y) sits on pattern coordinate (x + 1, y + 1)
    let on_pattern: BTreeMap<VertexId, VertexId> = template
        .graph
        .vertices()
        .map(|t| {
            let (x, y) = template.coords.coord(t);
            (t, gamma.coords.id(x + 1, y + 1).expect("inner grid"))
        })
        .collect();
    let models = witness.model.models();
    let lifted = lift(g, &template, &on_pattern, &models)?;
    lifted.check(g)?;

    let outer: VertexSet = template.perimeter().into_iter().collect();
    let inner = disjoint_subwalls_avoiding(&lifted, 1, k, &outer)
        .or_else(|_| disjoint_subwalls_avoiding(&lifted, 1, k, &VertexSet::new()))?
        .remove(0);
    let c = compass(g, &inner)?;
    if !embeds_with_outer_cycle(&c.graph, &inner.perimeter()) {
        return Err(Error::Invalid("extracted wall's compass does not embed in a disk".into()));
    }
    Ok(inner)
}

/// Realizes a template mapped into the pattern as a subdivided wall of the host.
fn lift(
    g: &Graph,
    template: &Wall,
    on_pattern: &BTreeMap<VertexId, VertexId>,
    models: &BTreeMap<VertexId, VertexSet>,
) -> Result<SubdividedWall> {
    // one host edge per template edge, from the model of a to the model of b
    let mut link: BTreeMap<(VertexId, VertexId), (VertexId, VertexId)> = BTreeMap::new();
    for (a, b) in template.graph.edges() {
        let (ma, mb) = (&models[&on_pattern[&a]], &models[&on_pattern[&b]]);
        let (x, y) = ma
            .iter()
            .find_map(|&x| g.neighbors(x).find(|y| mb.contains(y)).map(|y| (x, y)))
            .ok_or_else(|| Error::Invalid(format!("models of {a} and {b} are not adjacent")))?;
        link.insert((a, b), (x, y));
        link.insert((b, a), (y, x));
    }
    // inside each model: a junction and a leg from it to every attachment
    let mut junction = BTreeMap::new();
    let mut legs: BTreeMap<(VertexId, VertexId), Vec<VertexId>> = BTreeMap::new();
    for a in template.graph.vertices() {
        let model = &models[&on_pattern[&a]];
        let inside = |x: VertexId| model.contains(&x);
        let nbrs: Vec<VertexId> = template.graph.neighbors(a).collect();
        let attach: Vec<VertexId> = nbrs.iter().map(|&b| link[&(a, b)].0).collect();
        let spine = g
            .shortest_path(attach[0], attach[1], inside)
            .ok_or_else(|| Error::Invalid("disconnected model".into()))?;
        let (centre, third) = if nbrs.len() == 3 {
            let to_spine = shortest_to_set(g, attach[2], &spine, &inside)
                .ok_or_else(|| Error::Invalid("disconnected model".into()))?;
            let centre = *to_spine.last().expect("non-empty");
            let mut leg = to_spine;
            leg.reverse();
            (centre, Some(leg))
        } else {
            (attach[0], None)
        };
        let at = spine.iter().position(|&x| x == centre).expect("centre on spine");
        let mut first: Vec<VertexId> = spine[..=at].to_vec();
        first.reverse();
        legs.insert((a, nbrs[0]), first);
        legs.insert((a, nbrs[1]), spine[at..].to_vec());
        if let Some(leg) = third {
            legs.insert((a, nbrs[2]), leg);
        }
        junction.insert(a, centre);
    }
    let branch_paths = template
        .graph
        .edges()
        .map(|(a, b)| {
            let mut p = legs[&(a, b)].clone();
            let mut back = legs[&(b, a)].clone();
            back.reverse();
            p.extend(back);
            ((a, b), p)
        })
        .collect();
    Ok(SubdividedWall {
        height: template.height,
        corners: template.corners.map(|c| junction[&c]),
        original_vertices: junction,
        branch_paths,
    })
}

/// Shortest path from `from` to the nearest vertex of `targets`, staying
/// inside `allow`.
fn shortest_to_set<F: Fn(VertexId) -> bool>(
    g: &Graph,
    from: VertexId,
    targets: &[VertexId],
    allow: &F,
) -> Option<Vec<VertexId>> {
    let mut parent = BTreeMap::from([(from, from)]);
    let mut queue = std::collections::VecDeque::from([from]);
    while let Some(v) = queue.pop_front() {
        if targets.contains(&v) {
            let mut path = vec![v];
            let mut cur = v;
            while cur != from {
                cur = parent[&cur];
                path.push(cur);
            }
            path.reverse();
            return Some(path);
        }
        for u in g.neighbors(v) {
            if allow(u) && !parent.contains_key(&u) {
                parent.insert(u, v);
                queue.push_back(u);
            }
        }
    }
    None
}
