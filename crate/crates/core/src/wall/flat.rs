use std::collections::VecDeque;
use std::time::{Duration, Instant};

use sha2::{Digest, Sha256};

use super::Compass;
use crate::graph::{Graph, VertexId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FlatVerdict {
    /// No crossing pair exists. `transcript` is the SHA-256 of the search
    /// trace and `explored` the number of path extensions tried.
    Flat { transcript: String, explored: u64 },
    /// Vertex-disjoint `(c1, c3)`- and `(c2, c4)`-paths.
    NotFlat { path13: Vec<VertexId>, path24: Vec<VertexId> },
    /// The time budget ran out before the search finished.
    Unknown { explored: u64 },
}

impl FlatVerdict {
    pub fn is_flat(&self) -> Option<bool> {
        match self {
            FlatVerdict::Flat { .. } => Some(true),
            FlatVerdict::NotFlat { .. } => Some(false),
            FlatVerdict::Unknown { .. } => None,
        }
    }
}

pub fn is_flat(c: &Compass, budget: Option<Duration>) -> FlatVerdict {
    is_flat_in(&c.graph, c.corners(), budget)
}

/// Decides whether `k` has vertex-disjoint `(c1,c3)`- and `(c2,c4)`-paths.
///
/// If such a pair exists then one exists whose `(c1,c3)`-path is induced
/// (shortcut it along chords), so only induced paths are enumerated. A
/// branch is abandoned as soon as the partial path separates `c2` from `c4`.
pub fn is_flat_in(k: &Graph, corners: [VertexId; 4], budget: Option<Duration>) -> FlatVerdict {
    let [c1, c2, c3, c4] = corners;
    let mut s = FlatSearch {
        k,
        c2,
        c3,
        c4,
        on_path: vec![false; k.next_free_id()],
        path: vec![c1],
        hasher: Sha256::new(),
        explored: 0,
        deadline: budget.map(|b| Instant::now() + b),
        timed_out: false,
    };
    s.on_path[c1] = true;
    let found = if corners.iter().all(|&c| k.contains_vertex(c)) { s.extend() } else { None };
    match found {
        Some((path13, path24)) => FlatVerdict::NotFlat { path13, path24 },
        None if s.timed_out => FlatVerdict::Unknown { explored: s.explored },
        None => FlatVerdict::Flat { transcript: hex::encode(s.hasher.finalize()), explored: s.explored },
    }
}

/// Checks a claimed crossing: two vertex-disjoint paths in `k` joining the
/// anti-diametrical corner pairs.
pub fn validate_crossing(k: &Graph, corners: [VertexId; 4], path13: &[VertexId], path24: &[VertexId]) -> bool {
    let [c1, c2, c3, c4] = corners;
    let ends = |p: &[VertexId], a, b| {
        (p.first() == Some(&a) && p.last() == Some(&b)) || (p.first() == Some(&b) && p.last() == Some(&a))
    };
    k.is_path(path13)
        && k.is_path(path24)
        && ends(path13, c1, c3)
        && ends(path24, c2, c4)
        && path13.iter().all(|v| !path24.contains(v))
}

struct FlatSearch<'a> {
    k: &'a Graph,
    c2: VertexId,
    c3: VertexId,
    c4: VertexId,
    on_path: Vec<bool>,
    path: Vec<VertexId>,
    hasher: Sha256,
    explored: u64,
    deadline: Option<Instant>,
    timed_out: bool,
}

impl FlatSearch<'_> {
    fn other_path(&self) -> Option<Vec<VertexId>> {
        if self.on_path[self.c2] || self.on_path[self.c4] {
            return None;
        }
        self.k.shortest_path(self.c2, self.c4, |x| !self.on_path[x])
    }

    fn extend(&mut self) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
        self.explored += 1;
        if self.explored.is_multiple_of(1024) {
            if let Some(d) = self.deadline {
                if Instant::now() > d {
                    self.timed_out = true;
                }
            }
        }
        if self.timed_out {
            return None;
        }
        let last = *self.path.last().expect("non-empty");
        self.hasher.update((last as u64).to_le_bytes());
        if last == self.c3 {
            return self.other_path().map(|p24| (self.path.clone(), p24));
        }
        if !self.c2_c4_connected() {
            self.hasher.update(b"x");
            return None;
        }
        // Once the path touches c3 it must end there to stay induced.
        let next: Vec<VertexId> = if self.k.has_edge(last, self.c3) {
            vec![self.c3]
        } else {
            self.k
                .neighbors(last)
                .filter(|&u| !self.on_path[u] && u != self.c2 && u != self.c4)
                .filter(|&u| {
                    // induced: u sees no path vertex other than `last`
                    self.k.neighbors(u).all(|x| x == last || !self.on_path[x])
                })
                .collect()
        };
        for u in next {
            if u == self.c3 && self.k.neighbors(u).any(|x| x != last && self.on_path[x]) {
                continue;
            }
            self.on_path[u] = true;
            self.path.push(u);
            let r = self.extend();
            self.path.pop();
            self.on_path[u] = false;
            if r.is_some() || self.timed_out {
                return r;
            }
        }
        self.hasher.update(b"<");
        None
    }

    fn c2_c4_connected(&self) -> bool {
        let mut seen = vec![false; self.on_path.len()];
        seen[self.c2] = true;
        let mut queue = VecDeque::from([self.c2]);
        while let Some(v) = queue.pop_front() {
            if v == self.c4 {
                return true;
            }
            for u in self.k.neighbors(v) {
                if !seen[u] && !self.on_path[u] {
                    seen[u] = true;
                    queue.push_back(u);
                }
            }
        }
        false
    }
}
