//! Apex number, the constants `g`, `f₃`, `f₄`, `f₅`, the pyramid minor
//! construction, apex reduction, flap merging, and a brute-force checker for
//! the weak structure trichotomy together with an independent certificate
//! verifier.

use std::collections::BTreeMap;
use std::fmt;

use crate::decomposition::{exact_treewidth, exact_treewidth_capped, TdViolation, TreeDecomposition};
use crate::error::cap;
use crate::generators;
use crate::graph::{is_planar, Graph, VertexId, VertexSet};
use crate::minors::{find_minor_with, find_topological_minor_with, MinorModel, MinorViolation, SearchCaps};
use crate::rural::{internal_flaps, validate_rural, RuralDivision, RuralViolation};
use crate::wall::{compass, disjoint_subwalls, is_flat, Compass, SubdividedWall, WallViolation};
use crate::{Error, Result};

pub const APEX_NUMBER_CAP: usize = 16;

/// The formula plumbing behind the structure bounds. `f1_value` and
/// `f2_value` stand in for functions we cannot compute.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureConstants {
    pub h: u64,
    pub an_h: u64,
    pub a_size: u64,
    pub f1_value: u64,
    pub f2_value: u64,
}

pub fn ceil_sqrt(n: u64) -> u64 {
    let mut r = (n as f64).sqrt() as u64;
    while r * r > n {
        r -= 1;
    }
    while r * r < n {
        r += 1;
    }
    r
}

fn overflow(name: &'static str) -> Error {
    Error::Parameter { name, value: -1, reason: "value overflows 128 bits" }
}

impl StructureConstants {
    /// `14·(h − an) + ⌈√an⌉ − 24`, required to be at least 1.
    pub fn f5(&self) -> Result<u128> {
        if self.an_h > self.h {
            return Err(Error::Parameter { name: "an_h", value: self.an_h as i64, reason: "exceeds h" });
        }
        let v = 14 * (self.h - self.an_h) as i128 + ceil_sqrt(self.an_h) as i128 - 24;
        if v < 1 {
            return Err(Error::Parameter { name: "f5", value: v as i64, reason: "must be at least 1" });
        }
        Ok(v as u128)
    }

    /// The side of the grid of windows; equal to `f₅`.
    pub fn g(&self) -> Result<u128> {
        self.f5()
    }

    /// `f₅^(|A| − an + 1)`.
    pub fn f4(&self) -> Result<u128> {
        if self.a_size + 1 < self.an_h {
            return Err(Error::Parameter {
                name: "a_size",
                value: self.a_size as i64,
                reason: "exponent a_size - an_h + 1 is negative",
            });
        }
        let exp = u32::try_from(self.a_size + 1 - self.an_h).map_err(|_| overflow("f4"))?;
        self.f5()?.checked_pow(exp).ok_or_else(|| overflow("f4"))
    }

    /// `f₂·(4k·f₄ + 12) + f₁`.
    pub fn f3(&self, k: u64) -> Result<u128> {
        let f4 = self.f4()?;
        (4 * k as u128)
            .checked_mul(f4)
            .and_then(|x| x.checked_add(12))
            .and_then(|x| x.checked_mul(self.f2_value as u128))
            .and_then(|x| x.checked_add(self.f1_value as u128))
            .ok_or_else(|| overflow("f3"))
    }
}

/// Size-`r` subsets of `items` in lexicographic order.
fn subsets(items: &[VertexId], r: usize) -> impl Iterator<Item = VertexSet> + '_ {
    let n = items.len();
    let mut idx: Option<Vec<usize>> = (r <= n).then(|| (0..r).collect());
    std::iter::from_fn(move || {
        let cur = idx.take()?;
        let out = cur.iter().map(|&i| items[i]).collect();
        let mut next = cur;
        let mut i = r;
        while i > 0 {
            i -= 1;
            if next[i] < n - r + i {
                next[i] += 1;
                for j in i + 1..r {
                    next[j] = next[j - 1] + 1;
                }
                idx = Some(next);
                break;
            }
        }
        Some(out)
    })
}

/// The smallest `|S|` with `g ∖ S` planar, and the lexicographically first such `S`.
pub fn apex_number(g: &Graph) -> Result<(usize, VertexSet)> {
    cap("graph for apex number", g.n(), APEX_NUMBER_CAP)?;
    let vs: Vec<VertexId> = g.vertices().collect();
    for r in 0..=vs.len() {
        for s in subsets(&vs, r) {
            if is_planar(&g.delete_vertices(&s)?) {
                return Ok((r, s));
            }
        }
    }
    unreachable!("the empty graph is planar")
}

/// The host of the pyramid construction: a `(k+α) × (k+α)`-grid whose
/// vertices are all made adjacent to `h` new, pairwise non-adjacent vertices.
/// Returns the host and the new vertices.
pub fn pyramid_host(k: usize, h: usize) -> Result<(generators::Grid, Vec<VertexId>)> {
    let n = k + ceil_sqrt(h as u64) as usize;
    let mut grid = generators::grid(n, n)?;
    let old: Vec<VertexId> = grid.graph.vertices().collect();
    let apices: Vec<VertexId> = (0..h)
        .map(|_| {
            let a = grid.graph.add_fresh_vertex();
            for &v in &old {
                grid.graph.add_edge(a, v);
            }
            a
        })
        .collect();
    Ok((grid, apices))
}

/// A model of `Π_{k,h}` in [`pyramid_host`]`(k, h)`.
///
/// `G₁` is the north-west `k × k` corner of the grid and maps identically
/// onto the pyramid's grid. `G₂` is the south-east `α × α` corner; its
/// vertices are dealt out to the apices (the last apex takes the surplus), so
/// each clique branch set is an apex plus a non-empty part of `G₂`, and any
/// two of them touch through the `K_{h,α²}` between apices and `G₂`.
pub fn pyramid_minor_model(k: usize, h: usize) -> Result<MinorModel> {
    if k < 2 {
        return Err(Error::Parameter { name: "k", value: k as i64, reason: "pyramid needs k >= 2" });
    }
    if h < 1 {
        return Err(Error::Parameter { name: "h", value: 0, reason: "pyramid needs h >= 1" });
    }
    let alpha = ceil_sqrt(h as u64) as usize;
    let (host, apices) = pyramid_host(k, h)?;
    let pattern = generators::pyramid(k, h)?;
    let n = (k + alpha) as i64;
    let mut branch_sets = BTreeMap::new();
    for v in pattern.coords.coords.keys() {
        let (x, y) = pattern.coords.coord(*v);
        let image = host.coords.id(x, y).expect("G1 inside the host grid");
        branch_sets.insert(*v, VertexSet::from([image]));
    }
    let clique: Vec<VertexId> = pattern.graph.vertices().filter(|v| !pattern.coords.coords.contains_key(v)).collect();
    for (i, &c) in clique.iter().enumerate() {
        branch_sets.insert(c, VertexSet::from([apices[i]]));
    }
    let g2 = (n - alpha as i64 + 1..=n).flat_map(|y| (n - alpha as i64 + 1..=n).map(move |x| (x, y)));
    for (t, (x, y)) in g2.enumerate() {
        let owner = clique[t.min(h - 1)];
        let v = host.coords.id(x, y).expect("G2 inside the host grid");
        branch_sets.get_mut(&owner).expect("clique branch set").insert(v);
    }
    Ok(MinorModel { host: host.graph, pattern: pattern.graph, branch_sets })
}

/// `A′ = A ∖ {α}` and the subwall `W′` whose compass in `G ∖ A` misses `α`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ApexReduction {
    pub a_prime: VertexSet,
    pub w_prime: SubdividedWall,
    pub dropped: VertexId,
    /// Index of `W′` among the windows that were examined.
    pub window: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ApexReduceError {
    #[error(transparent)]
    Failed(#[from] Error),
    /// Every window compass sees every apex, and the resulting
    /// windows-plus-apices minor contains `H`.
    #[error("every window compass is adjacent to every apex: H is a minor of G")]
    HMinorFound { apex_grid: Box<MinorModel>, h_model: Box<MinorModel> },
    /// Every window compass sees every apex, but too few windows were used
    /// for the windows-plus-apices minor to contain `H`.
    #[error("every window compass is adjacent to every apex, but the windowed minor does not contain H")]
    AllOnes { apex_grid: Box<MinorModel> },
}

/// One step of apex reduction.
///
/// `window_count` defaults to `g(h)²`; pass a smaller count to run at desk
/// scale. The windows are pairwise disjoint height-`k` subwalls of `w`, each
/// with its compass taken in `g ∖ a`. The first window (in packing order)
/// whose compass misses some apex gives `W′`, and the first such apex is
/// dropped.
pub fn apex_reduce(
    g: &Graph,
    h_graph: &Graph,
    a: &VertexSet,
    w: &SubdividedWall,
    k: usize,
    consts: &StructureConstants,
    window_count: Option<usize>,
) -> Result<ApexReduction, ApexReduceError> {
    if (a.len() as u64) < consts.an_h || a.is_empty() {
        return Err(Error::Precondition(format!(
            "|A| = {} is below the apex parameter {} (or zero)",
            a.len(),
            consts.an_h
        ))
        .into());
    }
    if let Some(&v) = a.iter().find(|&&v| !g.contains_vertex(v)) {
        return Err(Error::UnknownVertex(v).into());
    }
    let count = match window_count {
        Some(c) => c,
        None => {
            let side = consts.g()?;
            usize::try_from(side.checked_mul(side).ok_or_else(|| overflow("g(h)^2"))?)
                .map_err(|_| overflow("g(h)^2"))?
        }
    };
    let rest = g.delete_vertices(a)?;
    w.check(&rest)?;
    let windows = disjoint_subwalls(w, count, k)?;
    let compasses: Vec<Compass> = windows.iter().map(|s| compass(&rest, s)).collect::<Result<_>>()?;
    for (i, c) in compasses.iter().enumerate() {
        let missed = a.iter().find(|&&apex| c.graph.vertices().all(|v| !g.has_edge(v, apex)));
        if let Some(&apex) = missed {
            let mut a_prime = a.clone();
            a_prime.remove(&apex);
            let w_prime = windows[i].clone();
            let k_prime = compass(&g.delete_vertices(&a_prime)?, &w_prime)?;
            if k_prime.graph.vertices().any(|v| a.contains(&v)) {
                return Err(Error::Invalid(format!("compass of window {i} reaches an apex")).into());
            }
            return Ok(ApexReduction { a_prime, w_prime, dropped: apex, window: i });
        }
    }
    let apex_grid = windows_plus_apices(g, a, &compasses);
    debug_assert_eq!(apex_grid.validate(), Ok(()));
    let caps = SearchCaps { max_host: apex_grid.pattern.n().max(30), ..SearchCaps::default() };
    match find_minor_with(&apex_grid.pattern, h_graph, &caps)? {
        Some(inner) => {
            let h_model = compose_models(&apex_grid, &inner);
            Err(ApexReduceError::HMinorFound { apex_grid: Box::new(apex_grid), h_model: Box::new(h_model) })
        }
        None => Err(ApexReduceError::AllOnes { apex_grid: Box::new(apex_grid) }),
    }
}

/// Contracts each window compass (overlapping compasses are merged) and keeps
/// the apices: a minor of `g` in which every apex sees every window vertex.
/// Window vertices come first, apices after them in increasing order.
fn windows_plus_apices(g: &Graph, a: &VertexSet, compasses: &[Compass]) -> MinorModel {
    let mut groups: Vec<VertexSet> = Vec::new();
    for c in compasses {
        let mut set = c.graph.vertex_set();
        let (touching, rest): (Vec<VertexSet>, Vec<VertexSet>) =
            groups.into_iter().partition(|s| !s.is_disjoint(&set));
        for s in touching {
            set.extend(s);
        }
        groups = rest;
        groups.push(set);
    }
    groups.extend(a.iter().map(|&v| VertexSet::from([v])));
    let branch_sets: BTreeMap<VertexId, VertexSet> = groups.into_iter().enumerate().collect();
    let mut pattern = Graph::empty(branch_sets.len());
    for (&i, si) in &branch_sets {
        for (&j, sj) in branch_sets.range(i + 1..) {
            if si.iter().any(|&u| g.neighbors(u).any(|x| sj.contains(&x))) {
                pattern.add_edge(i, j);
            }
        }
    }
    MinorModel { host: g.clone(), pattern, branch_sets }
}

/// `H ≤ J` and `J ≤ G` give `H ≤ G`.
pub fn compose_models(outer: &MinorModel, inner: &MinorModel) -> MinorModel {
    let branch_sets = inner
        .branch_sets
        .iter()
        .map(|(&p, set)| (p, set.iter().flat_map(|j| outer.branch_sets[j].iter().copied()).collect()))
        .collect();
    MinorModel { host: outer.host.clone(), pattern: inner.pattern.clone(), branch_sets }
}

/// The classes `𝒫_{ℱ,S,G}`: components of the members of `family` after
/// deleting `s`, restricted to those meeting `G ∖ S`, grouped by their trace
/// on `G ∖ S`, one union per class, ordered by trace.
pub fn merge_flaps(family: &[Graph], s: &VertexSet, g: &Graph) -> Vec<Graph> {
    let mut classes: BTreeMap<VertexSet, Graph> = BTreeMap::new();
    for f in family {
        let keep: VertexSet = f.vertices().filter(|v| !s.contains(v)).collect();
        let rest = f.induced_unchecked(&keep);
        for comp in rest.connected_components() {
            let trace: VertexSet = comp.iter().copied().filter(|&v| g.contains_vertex(v)).collect();
            if trace.is_empty() {
                continue;
            }
            let part = rest.induced_unchecked(&comp);
            let entry = classes.entry(trace).or_default();
            *entry = entry.union(&part);
        }
    }
    classes.into_values().collect()
}

/// One of the three outcomes of the trichotomy, with everything
/// needed to check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum WeakStructureCertificate {
    /// `H` is a minor of `G`.
    Minor(MinorModel),
    /// `G` has treewidth at most `width_bound`.
    Treewidth { decomposition: TreeDecomposition, width_bound: usize },
    /// Removing `apices` leaves a flat wall (the wall of the division's
    /// compass) with a rural division whose internal flaps have treewidth at
    /// most `flap_treewidth_bound`.
    FlatWall { apices: VertexSet, division: RuralDivision, flap_treewidth_bound: usize },
}

impl WeakStructureCertificate {
    pub fn clause(&self) -> u8 {
        match self {
            WeakStructureCertificate::Minor(_) => 1,
            WeakStructureCertificate::Treewidth { .. } => 2,
            WeakStructureCertificate::FlatWall { .. } => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trichotomy {
    Certified(WeakStructureCertificate),
    /// No clause could be certified by the searches available at this size.
    Undetermined { reason: String },
}

pub const TRICHOTOMY_HOST_CAP: usize = 16;
pub const TRICHOTOMY_PATTERN_CAP: usize = 6;

/// Tries the clauses in order (minor, treewidth, apices plus flat wall) and
/// certifies the first that holds.
///
/// Clause 3 runs over apex sets of size at most `an(H) − 1` in
/// lexicographic order. For each, a subdivided `W_k` is searched for in
/// `G ∖ A` as a topological minor, and its compass must be flat with a valid
/// one-edge-per-flap rural division. Only the first wall found per apex set
/// is examined, so failure is reported as undetermined rather than refuted.
pub fn trichotomy_check(g: &Graph, h_graph: &Graph, k: usize, width_threshold: usize) -> Result<Trichotomy> {
    cap("graph", g.n(), TRICHOTOMY_HOST_CAP)?;
    cap("pattern graph", h_graph.n(), TRICHOTOMY_PATTERN_CAP)?;
    if !(1..=2).contains(&k) {
        return Err(Error::Parameter { name: "k", value: k as i64, reason: "desk scale allows k in {1, 2}" });
    }
    let caps = SearchCaps { max_pattern: TRICHOTOMY_PATTERN_CAP, max_host: TRICHOTOMY_HOST_CAP, max_steps: None };
    if let Some(model) = find_minor_with(g, h_graph, &caps)? {
        return Ok(Trichotomy::Certified(WeakStructureCertificate::Minor(model)));
    }
    let (tw, decomposition) = exact_treewidth(g)?;
    if tw <= width_threshold {
        return Ok(Trichotomy::Certified(WeakStructureCertificate::Treewidth {
            decomposition,
            width_bound: width_threshold,
        }));
    }
    let (an, _) = apex_number(h_graph)?;
    if an == 0 {
        return Ok(Trichotomy::Undetermined {
            reason: format!("H is planar (apex number 0) and G has treewidth {tw} > {width_threshold}"),
        });
    }
    let template = generators::wall(k)?;
    let wall_caps = SearchCaps { max_pattern: template.graph.n(), max_host: TRICHOTOMY_HOST_CAP, max_steps: None };
    let vs: Vec<VertexId> = g.vertices().collect();
    let mut tried = 0usize;
    for r in 0..an {
        for apices in subsets(&vs, r) {
            tried += 1;
            let rest = g.delete_vertices(&apices)?;
            let Some(model) = find_topological_minor_with(&rest, &template.graph, &wall_caps)? else {
                continue;
            };
            let wall = SubdividedWall {
                height: k,
                original_vertices: model.branch_vertices.clone(),
                branch_paths: model.paths.clone(),
                corners: template.corners.map(|c| model.branch_vertices[&c]),
            };
            if wall.validate(&rest).is_err() {
                continue;
            }
            let c = compass(&rest, &wall)?;
            if is_flat(&c, None).is_flat() != Some(true) {
                continue;
            }
            let division = RuralDivision::trivial(&c);
            if validate_rural(&division)?.is_err() {
                continue;
            }
            let widest = max_internal_flap_width(&division)?;
            if widest.is_some_and(|(_, w)| w > width_threshold) {
                continue;
            }
            return Ok(Trichotomy::Certified(WeakStructureCertificate::FlatWall {
                apices,
                division,
                flap_treewidth_bound: width_threshold,
            }));
        }
    }
    Ok(Trichotomy::Undetermined {
        reason: format!(
            "H is not a minor, treewidth {tw} > {width_threshold}, and none of the {tried} apex sets of size < {an} \
             yielded a flat height-{k} wall with a valid rural division"
        ),
    })
}

/// The internal flap of largest treewidth, as `(index, treewidth)`.
fn max_internal_flap_width(rd: &RuralDivision) -> Result<Option<(usize, usize)>> {
    let mut best: Option<(usize, usize)> = None;
    for i in internal_flaps(rd) {
        let (w, _) = exact_treewidth_capped(&rd.flaps[i], 26)?;
        if best.is_none_or(|(_, b)| w > b) {
            best = Some((i, w));
        }
    }
    Ok(best)
}

/// The condition a rejected certificate fails.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CertificateViolation {
    /// The certificate is about a different host graph.
    HostMismatch,
    /// The minor model is for a different pattern than `H`.
    PatternMismatch,
    Model(MinorViolation),
    Decomposition(TdViolation),
    WidthExceeded { width: usize, bound: usize },
    /// Clause 3 needs a non-planar `H`.
    PlanarPattern,
    TooManyApices { size: usize, max: usize },
    ForeignApex(VertexId),
    WrongHeight { height: usize, k: usize },
    Wall(WallViolation),
    /// The division's compass is not the compass of its wall in `G ∖ A`.
    CompassMismatch,
    NotFlat,
    FlatnessUndecided,
    Rural(RuralViolation),
    FlapTooWide { flap: usize, width: usize, bound: usize },
}

impl fmt::Display for CertificateViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use CertificateViolation::*;
        match self {
            HostMismatch => write!(f, "certificate host differs from G"),
            PatternMismatch => write!(f, "minor model pattern differs from H"),
            Model(v) => write!(f, "invalid minor model: {v:?}"),
            Decomposition(v) => write!(f, "invalid tree decomposition (condition {}): {v:?}", v.condition()),
            WidthExceeded { width, bound } => write!(f, "decomposition width {width} exceeds bound {bound}"),
            PlanarPattern => write!(f, "H is planar, so no apex set satisfies |A| <= an(H) - 1"),
            TooManyApices { size, max } => write!(f, "apex set has {size} vertices, at most {max} allowed"),
            ForeignApex(v) => write!(f, "apex {v} is not a vertex of G"),
            WrongHeight { height, k } => write!(f, "wall has height {height}, expected {k}"),
            Wall(v) => write!(f, "invalid wall: {v}"),
            CompassMismatch => write!(f, "division compass is not the compass of the wall in G - A"),
            NotFlat => write!(f, "wall is not flat"),
            FlatnessUndecided => write!(f, "flatness could not be decided"),
            Rural(v) => write!(f, "rural division violates property {}: {v:?}", v.property()),
            FlapTooWide { flap, width, bound } => {
                write!(f, "internal flap {flap} has treewidth {width} > {bound}")
            }
        }
    }
}

/// Re-checks every component of a certificate against `G`, `H` and `k`.
pub fn verify_certificate(
    g: &Graph,
    h_graph: &Graph,
    k: usize,
    cert: &WeakStructureCertificate,
) -> Result<Result<(), CertificateViolation>> {
    use CertificateViolation as V;
    Ok(match cert {
        WeakStructureCertificate::Minor(m) => {
            if &m.host != g {
                Err(V::HostMismatch)
            } else if &m.pattern != h_graph {
                Err(V::PatternMismatch)
            } else {
                m.validate().map_err(V::Model)
            }
        }
        WeakStructureCertificate::Treewidth { decomposition, width_bound } => {
            if &decomposition.host != g {
                Err(V::HostMismatch)
            } else if let Err(v) = decomposition.validate()? {
                Err(V::Decomposition(v))
            } else {
                let width = decomposition.width()?;
                if width > *width_bound {
                    Err(V::WidthExceeded { width, bound: *width_bound })
                } else {
                    Ok(())
                }
            }
        }
        WeakStructureCertificate::FlatWall { apices, division, flap_treewidth_bound } => {
            verify_flat_wall(g, h_graph, k, apices, division, *flap_treewidth_bound)?
        }
    })
}

fn verify_flat_wall(
    g: &Graph,
    h_graph: &Graph,
    k: usize,
    apices: &VertexSet,
    division: &RuralDivision,
    bound: usize,
) -> Result<Result<(), CertificateViolation>> {
    use CertificateViolation as V;
    let (an, _) = apex_number(h_graph)?;
    if an == 0 {
        return Ok(Err(V::PlanarPattern));
    }
    if apices.len() > an - 1 {
        return Ok(Err(V::TooManyApices { size: apices.len(), max: an - 1 }));
    }
    if let Some(&v) = apices.iter().find(|&&v| !g.contains_vertex(v)) {
        return Ok(Err(V::ForeignApex(v)));
    }
    let wall = &division.compass.wall;
    if wall.height != k {
        return Ok(Err(V::WrongHeight { height: wall.height, k }));
    }
    let rest = g.delete_vertices(apices)?;
    if let Err(v) = wall.validate(&rest) {
        return Ok(Err(V::Wall(v)));
    }
    let Ok(c) = compass(&rest, wall) else {
        return Ok(Err(V::CompassMismatch));
    };
    if c != division.compass {
        return Ok(Err(V::CompassMismatch));
    }
    match is_flat(&c, None).is_flat() {
        Some(true) => {}
        Some(false) => return Ok(Err(V::NotFlat)),
        None => return Ok(Err(V::FlatnessUndecided)),
    }
    if let Err(v) = validate_rural(division)? {
        return Ok(Err(V::Rural(v)));
    }
    if let Some((flap, width)) = max_internal_flap_width(division)? {
        if width > bound {
            return Ok(Err(V::FlapTooWide { flap, width, bound }));
        }
    }
    Ok(Ok(()))
}
