//! Property tests for the invariants of each module.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use flatwall::decomposition::{decomposition_from_order, exact_treewidth, TreeDecomposition};
use flatwall::generators::{gamma, gamma_star, grid, wall};
use flatwall::graph::{embed_planar, incidence_graph, is_planar, Hypergraph};
use flatwall::minors::{
    are_isomorphic, delta_y, dissolve, find_minor, find_minor_with, subdivide, verify_contraction, SearchCaps,
};
use flatwall::rural::{boundary, edge_checksum, validate_rural, RuralDivision};
use flatwall::structure::{ceil_sqrt, StructureConstants};
use flatwall::wall::{compass, disjoint_subwalls, is_flat, is_flat_in, Compass, SubdividedWall};
use flatwall::{Graph, VertexId, VertexSet};
use proptest::prelude::*;
use proptest::sample::subsequence;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = Graph::empty(n);
            let mut it = bits.into_iter();
            for u in 0..n {
                for v in u + 1..n {
                    if it.next().unwrap() {
                        g.add_edge(u, v);
                    }
                }
            }
            g
        })
    })
}

fn with_subset(max_n: usize) -> impl Strategy<Value = (Graph, VertexSet)> {
    graph(max_n).prop_flat_map(|g| {
        let vs: Vec<VertexId> = g.vertices().collect();
        let n = vs.len();
        (Just(g), subsequence(vs, 0..=n).prop_map(|s| s.into_iter().collect()))
    })
}

/// A valid decomposition from an elimination order, with some redundant
/// leaves hung off it whose bags are subsets of their parent's.
fn decomposition(max_n: usize) -> impl Strategy<Value = TreeDecomposition> {
    graph(max_n)
        .prop_flat_map(|g| {
            let n = g.n();
            (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle(), proptest::collection::vec(any::<u64>(), 0..4))
        })
        .prop_map(|(g, order, extra)| {
            let mut td = decomposition_from_order(&g, &order);
            for seed in extra {
                let parent = (seed as usize) % td.bags.len();
                let bag: VertexSet =
                    td.bags[&parent].iter().copied().filter(|v| (seed >> (v % 60)) & 1 == 1).collect();
                let id = td.tree.add_fresh_vertex();
                td.tree.add_edge(parent, id);
                td.bags.insert(id, bag);
            }
            td
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn delete_and_induce_commute((g, u) in with_subset(9)) {
        let keep: VertexSet = g.vertices().filter(|v| !u.contains(v)).collect();
        prop_assert_eq!(g.induced_subgraph(&keep).unwrap(), g.delete_vertices(&u).unwrap());
    }

    #[test]
    fn incidence_graph_counts(g in graph(9)) {
        let i = incidence_graph(&Hypergraph::from_graph(&g));
        prop_assert_eq!(i.graph.n(), g.n() + g.m());
        prop_assert_eq!(i.graph.m(), 2 * g.m());
    }

    #[test]
    fn planarity_respects_euler_bound(g in graph(9)) {
        if g.n() >= 3 && g.m() > 3 * g.n() - 6 {
            prop_assert!(!is_planar(&g));
        }
        if let Some(e) = embed_planar(&g) {
            prop_assert!(e.is_consistent());
            prop_assert!(e.satisfies_euler());
        }
    }

    #[test]
    fn treewidth_drops_by_at_most_the_deleted((g, x) in with_subset(8)) {
        let tw = exact_treewidth(&g).unwrap().0;
        let rest = exact_treewidth(&g.delete_vertices(&x).unwrap()).unwrap().0;
        prop_assert!(rest + x.len() >= tw);
    }

    #[test]
    fn some_closure_bag_is_as_wide_as_the_host(td in decomposition(8)) {
        prop_assert!(td.is_valid());
        let tw = exact_treewidth(&td.host).unwrap().0;
        let best = td.bags.keys().map(|&i| exact_treewidth(&td.closure_bag(i).unwrap()).unwrap().0).max().unwrap();
        prop_assert!(best >= tw);
    }

    #[test]
    fn make_small_is_small_and_bounded(td in decomposition(9)) {
        let s = td.make_small();
        prop_assert!(s.is_valid());
        let bags: Vec<&VertexSet> = s.bags.values().collect();
        for a in 0..bags.len() {
            for b in 0..bags.len() {
                prop_assert!(a == b || !bags[a].is_subset(bags[b]));
            }
        }
        prop_assert!(s.tree.n() <= td.host.n().max(1));
        prop_assert!(s.width().unwrap() <= td.width().unwrap());
    }

    #[test]
    fn delta_y_counts(g in graph(8)) {
        let triangles: Vec<[VertexId; 3]> = g.edges()
            .flat_map(|(a, b)| g.neighbors(a).filter(move |&c| c > b).map(move |c| [a, b, c]))
            .filter(|&[_, b, c]| g.has_edge(b, c))
            .collect();
        for t in triangles {
            let (h, w) = delta_y(&g, t).unwrap();
            prop_assert_eq!(h.m(), g.m());
            prop_assert_eq!(h.n(), g.n() + 1);
            prop_assert_eq!(h.degree(w), 3);
        }
    }

    #[test]
    fn minor_models_are_contractions(host in graph(7)) {
        for pattern in [Graph::complete(3), Graph::cycle(4), Graph::complete(4)] {
            if let Some(m) = find_minor(&host, &pattern).unwrap() {
                prop_assert_eq!(m.validate(), Ok(()));
                prop_assert_eq!(verify_contraction(&m.contraction_model()).unwrap(), Ok(()));
            }
        }
    }

    #[test]
    fn flat_walls_stay_flat_under_deletion(seed in any::<u64>()) {
        let t = wall(2).unwrap();
        let w = SubdividedWall::elementary(2).unwrap();
        let mut g = t.graph.clone();
        // one chord inside a brick keeps some walls flat
        let n = g.n();
        let (a, b) = ((seed % n as u64) as usize, ((seed / 7) % n as u64) as usize);
        if a != b {
            g.add_edge(a, b);
        }
        let c = compass(&g, &w).unwrap();
        if is_flat(&c, None).is_flat() == Some(true) {
            for e in c.graph.edges() {
                let smaller = c.graph.delete_edges(&[e]).unwrap();
                prop_assert_eq!(is_flat_in(&smaller, c.corners(), None).is_flat(), Some(true));
            }
        }
    }

    #[test]
    fn boundary_is_inside_and_monotone(seed in any::<u64>()) {
        let g = wall(2).unwrap().graph;
        let c = compass(&g, &SubdividedWall::elementary(2).unwrap()).unwrap();
        let edges: Vec<(VertexId, VertexId)> = c.graph.edges().collect();
        let picked: Vec<(VertexId, VertexId)> =
            edges.iter().enumerate().filter(|(i, _)| (seed >> (i % 64)) & 1 == 1).map(|(_, &e)| e).collect();
        if picked.is_empty() {
            return Ok(());
        }
        let d = flatwall::rural::flap_from_edges(&picked);
        let b = boundary(&c, &d).unwrap();
        prop_assert!(b.iter().all(|&v| d.contains_vertex(v)));
        let v = d.vertices().next().unwrap();
        let mut bigger = c.graph.clone();
        let extra = bigger.add_fresh_vertex();
        bigger.add_edge(v, extra);
        let k2 = Compass { wall: c.wall.clone(), graph: bigger };
        prop_assert!(b.is_subset(&boundary(&k2, &d).unwrap()));
    }

    #[test]
    fn constants_match_the_formulas(h in 0u64..60, an in 0u64..10, a_size in 0u64..6, f1 in 0u64..1000, f2 in 0u64..1000, k in 1u64..5) {
        let c = StructureConstants { h, an_h: an, a_size, f1_value: f1, f2_value: f2 };
        let root = (0..).find(|r: &i128| r * r >= an as i128).unwrap();
        let f5 = 14 * (h as i128 - an as i128) + root - 24;
        prop_assert_eq!(ceil_sqrt(an) as i128, root);
        if an > h || f5 < 1 {
            prop_assert!(c.f5().is_err());
            return Ok(());
        }
        prop_assert_eq!(c.f5().unwrap() as i128, f5);
        prop_assert_eq!(c.g().unwrap() as i128, f5);
        if a_size + 1 < an {
            prop_assert!(c.f4().is_err());
            return Ok(());
        }
        let mut f4: u128 = 1;
        for _ in 0..(a_size + 1 - an) {
            f4 *= f5 as u128;
        }
        prop_assert_eq!(c.f4().unwrap(), f4);
        prop_assert_eq!(c.f3(k).unwrap(), f2 as u128 * (4 * k as u128 * f4 + 12) + f1 as u128);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn subdivide_then_dissolve_is_identity(g in graph(8), pick in any::<prop::sample::Index>()) {
        let edges: Vec<(VertexId, VertexId)> = g.edges().collect();
        if edges.is_empty() {
            return Ok(());
        }
        let e = edges[pick.index(edges.len())];
        let (s, w) = subdivide(&g, e).unwrap();
        prop_assert_eq!(s.n(), g.n() + 1);
        let back = dissolve(&s, w).unwrap();
        prop_assert!(are_isomorphic(&back, &g));
    }
}

#[test]
fn wall_corners_have_degree_two() {
    for k in 1..=5 {
        let w = wall(k).unwrap();
        let corners: BTreeSet<VertexId> = w.corners.into_iter().collect();
        assert_eq!(corners.len(), 4);
        assert!(corners.iter().all(|&c| w.graph.degree(c) == 2));
    }
}

#[test]
fn wall_paths_are_disjoint() {
    for k in 1..=5 {
        let w = wall(k).unwrap();
        let rows: Vec<Vec<VertexId>> = (1..=k as i64 + 1).map(|j| w.horizontal_path(j).unwrap()).collect();
        for (i, a) in rows.iter().enumerate() {
            assert!(w.graph.is_path(a));
            for b in &rows[i + 1..] {
                assert!(a.iter().all(|v| !b.contains(v)));
            }
        }
        // vertical paths with odd indices use disjoint column pairs
        let cols: Vec<Vec<VertexId>> =
            (1..=2 * k as i64 + 1).step_by(2).map(|i| w.vertical_path(i).unwrap()).collect();
        for (i, a) in cols.iter().enumerate() {
            assert!(w.graph.is_path(a));
            for b in &cols[i + 1..] {
                assert!(a.iter().all(|v| !b.contains(v)));
            }
        }
    }
}

#[test]
fn gamma_minus_loading_is_gamma_star() {
    for k in 3..=7 {
        let g = gamma(k).unwrap();
        let s = gamma_star(k).unwrap();
        let grid_edge = |a: VertexId, b: VertexId| {
            let ((x1, y1), (x2, y2)) = (g.coords.coord(a), g.coords.coord(b));
            (x1 - x2).abs() + (y1 - y2).abs() == 1
        };
        let removed: BTreeSet<(VertexId, VertexId)> = g.graph.edge_set().difference(&s.graph.edge_set()).copied().collect();
        assert!(s.graph.edge_set().is_subset(&g.graph.edge_set()));
        let expected: BTreeSet<(VertexId, VertexId)> = g
            .graph
            .edges()
            .filter(|&(a, b)| (a == g.loaded || b == g.loaded) && !grid_edge(a, b))
            .collect();
        assert_eq!(removed, expected, "k = {k}");
    }
}

#[test]
fn grids_are_minors_of_double_height_walls() {
    let caps = SearchCaps { max_pattern: 9, max_host: 128, max_steps: None };
    for k in [2, 3] {
        let host = wall(2 * k).unwrap().graph;
        let m = find_minor_with(&host, &grid(k, k).unwrap().graph, &caps).unwrap().expect("grid minor");
        assert_eq!(m.validate(), Ok(()));
    }
}

#[test]
fn plane_walls_are_flat_and_trivially_rural() {
    for k in 1..=3 {
        let g = wall(k).unwrap().graph;
        let c = compass(&g, &SubdividedWall::elementary(k).unwrap()).unwrap();
        assert_eq!(is_flat(&c, None).is_flat(), Some(true));
        let rd = RuralDivision::trivial(&c);
        assert_eq!(validate_rural(&rd).unwrap(), Ok(()));
        assert_eq!(edge_checksum(&rd), c.graph.m());
    }
}

#[test]
fn packed_subwalls_are_disjoint_and_valid() {
    for (h, sub, count) in [(3, 1, 4), (4, 1, 6), (5, 2, 4), (6, 2, 4)] {
        let g = wall(h).unwrap().graph;
        let w = SubdividedWall::elementary(h).unwrap();
        let subs = disjoint_subwalls(&w, count, sub).unwrap();
        let mut seen: BTreeMap<VertexId, usize> = BTreeMap::new();
        for (i, s) in subs.iter().enumerate() {
            assert_eq!(s.validate(&g), Ok(()));
            assert_eq!(s.height, sub);
            for v in s.vertex_set() {
                assert!(seen.insert(v, i).is_none(), "vertex {v} in two subwalls");
            }
        }
    }
}
