use std::collections::BTreeMap;

use super::MinorModel;
use crate::error::cap;
use crate::graph::{Graph, VertexSet};
use crate::{Error, Result};

/// Hosts are handled as 128-bit masks, whatever the configured cap.
const HARD_HOST_LIMIT: usize = 128;

/// Size caps for the exhaustive searches. `max_steps` bounds the number of
/// candidate branch sets (or paths) tried; `None` means unbounded.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchCaps {
    pub max_pattern: usize,
    pub max_host: usize,
    pub max_steps: Option<u64>,
}

impl Default for SearchCaps {
    fn default() -> Self {
        SearchCaps { max_pattern: 6, max_host: 30, max_steps: None }
    }
}

impl SearchCaps {
    pub fn unbounded() -> Self {
        SearchCaps { max_pattern: usize::MAX, max_host: HARD_HOST_LIMIT, max_steps: None }
    }

    pub(crate) fn check(&self, host: &Graph, pattern: &Graph) -> Result<()> {
        cap("pattern", pattern.n(), self.max_pattern)?;
        cap("host", host.n(), self.max_host.min(HARD_HOST_LIMIT))
    }
}

pub fn find_minor(host: &Graph, pattern: &Graph) -> Result<Option<MinorModel>> {
    find_minor_with(host, pattern, &SearchCaps::default())
}

/// Exhaustive branch-and-bound search for a minor model.
///
/// Branch sets are grown as connected vertex sets, bounded by a maximum size
/// that is raised one step at a time until it can no longer matter, so small
/// models are found first and the last round is a complete search.
pub fn find_minor_with(host: &Graph, pattern: &Graph, caps: &SearchCaps) -> Result<Option<MinorModel>> {
    caps.check(host, pattern)?;
    let found = |sets: BTreeMap<_, _>| MinorModel {
        host: host.clone(),
        pattern: pattern.clone(),
        branch_sets: sets,
    };
    if pattern.is_empty() {
        return Ok(Some(found(BTreeMap::new())));
    }
    if pattern.n() > host.n() || pattern.m() > host.m() {
        return Ok(None);
    }
    let mut search = Search::new(host, pattern, caps.max_steps);
    let p = pattern.n();
    let largest = host.n() - (p - 1);
    for limit in 1..=largest {
        search.limit = limit;
        search.clipped = false;
        if search.place(0, 0)? {
            let sets = search
                .order
                .iter()
                .zip(&search.sets)
                .map(|(&pi, &mask)| (search.pattern_ids[pi], search.unmask(mask)))
                .collect();
            return Ok(Some(found(sets)));
        }
        // Nothing was cut off by the size bound, so larger bounds cannot help.
        if !search.clipped {
            break;
        }
    }
    Ok(None)
}

struct Search {
    adj: Vec<u128>,
    host_ids: Vec<usize>,
    pattern_ids: Vec<usize>,
    order: Vec<usize>,
    /// For position i: earlier positions adjacent in the pattern.
    back_neighbors: Vec<Vec<usize>>,
    /// For position i: earlier positions holding a twin pattern vertex.
    back_twins: Vec<Vec<usize>>,
    /// For position i: whether it has pattern neighbours at later positions.
    has_forward: Vec<Vec<bool>>,
    sets: Vec<u128>,
    limit: usize,
    clipped: bool,
    steps: u64,
    max_steps: Option<u64>,
}

impl Search {
    fn new(host: &Graph, pattern: &Graph, max_steps: Option<u64>) -> Self {
        let (hc, host_ids) = host.compact();
        let adj = (0..hc.n())
            .map(|v| hc.neighbors(v).fold(0u128, |m, u| m | (1u128 << u)))
            .collect();
        let (pc, pattern_ids) = pattern.compact();
        let p = pc.n();
        let order = connected_order(&pc);
        let mut pos = vec![0; p];
        for (i, &v) in order.iter().enumerate() {
            pos[v] = i;
        }
        let twins = |a: usize, b: usize| {
            let na: VertexSet = pc.neighbors(a).filter(|&x| x != b).collect();
            let nb: VertexSet = pc.neighbors(b).filter(|&x| x != a).collect();
            na == nb
        };
        let mut back_neighbors = vec![Vec::new(); p];
        let mut back_twins = vec![Vec::new(); p];
        for i in 0..p {
            for j in 0..i {
                if pc.has_edge(order[i], order[j]) {
                    back_neighbors[i].push(j);
                }
                if twins(order[i], order[j]) {
                    back_twins[i].push(j);
                }
            }
        }
        // has_forward[i][j]: after placing position i, does position j <= i
        // still have an unplaced pattern neighbour?
        let has_forward = (0..p)
            .map(|i| {
                (0..=i)
                    .map(|j| pc.neighbors(order[j]).any(|u| pos[u] > i))
                    .collect()
            })
            .collect();
        Search {
            adj,
            host_ids,
            pattern_ids,
            order,
            back_neighbors,
            back_twins,
            has_forward,
            sets: vec![0; p],
            limit: 1,
            clipped: false,
            steps: 0,
            max_steps,
        }
    }

    fn unmask(&self, mut mask: u128) -> VertexSet {
        let mut out = VertexSet::new();
        while mask != 0 {
            let v = mask.trailing_zeros() as usize;
            out.insert(self.host_ids[v]);
            mask &= mask - 1;
        }
        out
    }

    fn neighborhood(&self, mut set: u128) -> u128 {
        let mut out = 0;
        while set != 0 {
            let v = set.trailing_zeros() as usize;
            out |= self.adj[v];
            set &= set - 1;
        }
        out
    }

    fn place(&mut self, i: usize, used: u128) -> Result<bool> {
        let p = self.order.len();
        if i == p {
            return Ok(true);
        }
        let n = self.adj.len();
        let all: u128 = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
        let free = all & !used;
        let remaining = p - i - 1;
        let room = free.count_ones() as usize;
        if room < remaining + 1 {
            return Ok(false);
        }
        let size_cap = self.limit.min(room - remaining);
        if self.limit < room - remaining {
            self.clipped = true;
        }
        // Twin symmetry: branch-set minima increase along twin classes.
        let lower = self.back_twins[i]
            .iter()
            .map(|&j| self.sets[j].trailing_zeros() as i64)
            .max()
            .unwrap_or(-1);
        let above = if lower < 0 { all } else { all & !((1u128 << (lower + 1)) - 1) };
        let allowed = free & above;
        let roots = match self.back_neighbors[i].first() {
            Some(&j) => self.neighborhood(self.sets[j]) & allowed,
            None => allowed,
        };
        let candidates = connected_sets(&self.adj, roots, allowed, size_cap);
        for s in candidates {
            self.steps += 1;
            if let Some(max) = self.max_steps {
                if self.steps > max {
                    return Err(Error::CapExceeded {
                        what: "search steps",
                        size: self.steps as usize,
                        cap: max as usize,
                    });
                }
            }
            if lower >= 0 && (s.trailing_zeros() as i64) <= lower {
                continue;
            }
            let ns = self.neighborhood(s);
            if self.back_neighbors[i].iter().any(|&j| ns & self.sets[j] == 0) {
                continue;
            }
            let now_used = used | s;
            let now_free = all & !now_used;
            self.sets[i] = s;
            let stuck = (0..=i).any(|j| {
                self.has_forward[i][j] && self.neighborhood(self.sets[j]) & now_free == 0
            });
            if stuck {
                continue;
            }
            if self.place(i + 1, now_used)? {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// Max-degree start, then repeatedly the vertex with the most already-ordered
/// neighbours, ties by degree and then id.
pub(crate) fn connected_order(p: &Graph) -> Vec<usize> {
    let mut order = Vec::with_capacity(p.n());
    let mut placed = VertexSet::new();
    while order.len() < p.n() {
        let next = p
            .vertices()
            .filter(|v| !placed.contains(v))
            .max_by_key(|&v| {
                let back = p.neighbors(v).filter(|u| placed.contains(u)).count();
                (back, p.degree(v), std::cmp::Reverse(v))
            })
            .expect("unplaced vertex");
        placed.insert(next);
        order.push(next);
    }
    order
}

/// All connected vertex sets of size at most `max_size` inside `allowed`
/// that contain at least one root. Each set is produced once: a set is
/// assigned to its smallest root.
fn connected_sets(adj: &[u128], roots: u128, allowed: u128, max_size: usize) -> Vec<u128> {
    let mut out = Vec::new();
    let mut earlier_roots = 0u128;
    let mut rs = roots;
    while rs != 0 {
        let r = rs.trailing_zeros() as usize;
        rs &= rs - 1;
        let bit = 1u128 << r;
        grow(adj, bit, allowed & !earlier_roots, 0, max_size, &mut out);
        earlier_roots |= bit;
    }
    out
}

fn grow(adj: &[u128], set: u128, allowed: u128, excluded: u128, max_size: usize, out: &mut Vec<u128>) {
    out.push(set);
    if set.count_ones() as usize >= max_size {
        return;
    }
    let mut nb = 0u128;
    let mut s = set;
    while s != 0 {
        let v = s.trailing_zeros() as usize;
        nb |= adj[v];
        s &= s - 1;
    }
    let cand = nb & allowed & !set & !excluded;
    let mut seen = 0u128;
    let mut c = cand;
    while c != 0 {
        let v = c.trailing_zeros() as usize;
        c &= c - 1;
        let bit = 1u128 << v;
        grow(adj, set | bit, allowed, excluded | seen, max_size, out);
        seen |= bit;
    }
}
