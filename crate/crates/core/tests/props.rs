use crossbound::bounds::{check_degree_inequality, check_second_degree_inequality};
use crossbound::cliquesum::{build_ki, check_subdivision, compose, random_tree};
use crossbound::convex::{convex_draw_chordal, convex_draw_interval};
use crossbound::decomposition::{
    chordal_certificate, clique_tree, interval_order, interval_supergraph, is_forest,
    is_interval_order, validate, Decomposition,
};
use crossbound::drawers::{draw_planar_decomposition, make_home_assignment};
use crossbound::formats::{drawing_from_json, drawing_to_json, graph_from_json, graph_to_json};
use crossbound::generators::{
    gen_k33_free, gen_random_certified, random_planar_decomposition, RandomKind,
};
use crossbound::geometry::{convex_crossings, count_crossings, q, qr};
use crossbound::graph::{clique_sum, subdivide_all};
use crossbound::oracle::convex_optimum;
use crossbound::planar::straight_line_layout;
use crossbound::{Drawing, Graph, Point, Style};
use proptest::prelude::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..=n * (n - 1) / 2)
            .prop_map(move |es| Graph::from_edges_lossy(n, es.into_iter().filter(|(a, b)| a != b)))
    })
}

fn graph_and_order(max_n: usize) -> impl Strategy<Value = (Graph, Vec<usize>)> {
    graph(max_n).prop_flat_map(|g| {
        let n = g.n();
        (Just(g), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn double_subdivision_counts(g in graph(12)) {
        let s = subdivide_all(&subdivide_all(&g));
        prop_assert_eq!(s.n(), g.n() + 3 * g.m());
        prop_assert_eq!(s.m(), 4 * g.m());
    }

    #[test]
    fn zero_sum_adds_components(a in graph(8), b in graph(8)) {
        let s = clique_sum(&a, &b, &[], &[], &[]).unwrap();
        prop_assert_eq!(s.graph.component_count(), a.component_count() + b.component_count());
    }

    #[test]
    fn graph_json_round_trip(g in graph(12)) {
        let s = graph_to_json(&g);
        let back = graph_from_json(&s).unwrap();
        prop_assert_eq!(graph_to_json(&back), s);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn convex_count_matches_geometry((g, order) in graph_and_order(12)) {
        let fast = convex_crossings(&g, &order).unwrap();
        let geo = count_crossings(&Drawing::convex(&g, &order)).unwrap();
        prop_assert_eq!(fast.total, geo.total);
        prop_assert_eq!(fast.per_edge, geo.per_edge);
    }

    #[test]
    fn affine_maps_and_subdivision_keep_count(
        (g, order) in graph_and_order(9),
        (a, b, c, d) in (-5i64..=5, -5i64..=5, -5i64..=5, -5i64..=5),
        (tx, ty) in (-9i64..=9, -9i64..=9),
        pick in any::<prop::sample::Index>(),
    ) {
        prop_assume!(a * d - b * c != 0);
        let mut base = Drawing::convex(&g, &order);
        // an affine image of a circle is an ellipse
        base.style = Style::Polyline;
        let want = count_crossings(&base).unwrap();
        let m = base.map_points(|p| Point::new(
            q(a) * &p.x + q(b) * &p.y + q(tx),
            q(c) * &p.x + q(d) * &p.y + q(ty),
        ));
        let got = count_crossings(&m).unwrap();
        prop_assert_eq!(got.total, want.total);
        prop_assert_eq!(got.per_edge, want.per_edge.clone());
        if g.m() > 0 {
            let mut s = base.clone();
            let e = pick.index(g.m());
            let mid = s.routes[e][0].lerp(&s.routes[e][1], &qr(2, 7));
            s.routes[e].insert(1, mid);
            prop_assert_eq!(count_crossings(&s).unwrap().total, want.total);
        }
    }

    #[test]
    fn drawing_json_round_trip((g, order) in graph_and_order(8)) {
        let d = Drawing::convex(&g, &order);
        prop_assert_eq!(drawing_from_json(&drawing_to_json(&d)).unwrap(), d);
    }

    #[test]
    fn oracle_ignores_labels(g in graph(7), perm in Just((0..7).collect::<Vec<usize>>()).prop_shuffle()) {
        let p: Vec<usize> = perm.into_iter().filter(|&v| v < g.n()).collect();
        let base = convex_optimum(&g).unwrap().crossings;
        prop_assert_eq!(convex_optimum(&g.relabel(&p)).unwrap().crossings, base);
    }

    #[test]
    fn inequalities_hold(g in graph(14)) {
        prop_assume!(g.m() > 0);
        let a = check_degree_inequality(&g).unwrap();
        prop_assert!(a.holds);
        prop_assert_eq!(a.equality, a.equality_predicted);
        let b = check_second_degree_inequality(&g);
        prop_assert!(b.holds);
        prop_assert_eq!(b.equality, b.equality_predicted);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn chordal_pipeline(k in 1usize..=3, n in 1usize..=20, seed in any::<u64>()) {
        let (g, _) = gen_random_certified(RandomKind::KTree { k }, n, seed).unwrap();
        let peo = chordal_certificate(&g).unwrap();
        let ct = clique_tree(&g, &peo).unwrap();
        let v = validate(&g, &ct).unwrap();
        prop_assert!(v.is_decomposition && v.is_strong);
        prop_assert!(ct.bags.iter().all(|b| g.is_clique(b)));
        prop_assert!(is_forest(&ct.host));
        let c = convex_draw_chordal(&g).unwrap();
        prop_assert!(c.report.all_satisfied());
        if g.n() <= 8 {
            prop_assert!(convex_optimum(&g).unwrap().crossings <= c.report.total);
        }
    }

    #[test]
    fn interval_graphs_are_chordal(n in 1usize..=24, seed in any::<u64>()) {
        let (g, _) = gen_random_certified(RandomKind::Interval, n, seed).unwrap();
        let order = interval_order(&g).unwrap();
        prop_assert!(is_interval_order(&g, &order));
        prop_assert!(chordal_certificate(&g).is_ok());
        prop_assert!(convex_draw_interval(&g, &order).unwrap().report.all_satisfied());
        prop_assert!(convex_draw_chordal(&g).unwrap().report.all_satisfied());
    }

    #[test]
    fn interval_supergraph_of_path_decomposition(
        spans in prop::collection::vec((0usize..8, 0usize..4), 1..=12),
        keep in prop::collection::vec(any::<bool>(), 66),
    ) {
        let n = spans.len();
        let mut bags = vec![Vec::new(); 8];
        for (v, &(s, l)) in spans.iter().enumerate() {
            for bag in bags.iter_mut().take((s + l).min(7) + 1).skip(s) {
                bag.push(v);
            }
        }
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n {
            for b in a + 1..n {
                if bags.iter().any(|x| x.contains(&a) && x.contains(&b)) && keep[k % keep.len()] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        let g = Graph::new(n, edges).unwrap();
        let pd = Decomposition::path(bags.clone());
        let (sup, order) = interval_supergraph(&g, &pd).unwrap();
        prop_assert!(is_interval_order(&sup, &order));
        prop_assert!(g.edges().iter().all(|&(a, b)| sup.has_edge(a, b)));
        let peo = chordal_certificate(&sup).unwrap();
        let omega = clique_tree(&sup, &peo).unwrap().width();
        prop_assert_eq!(omega, bags.iter().map(Vec::len).max().unwrap());
    }

    #[test]
    fn planar_layouts_have_no_crossings(n in 1usize..=30, seed in any::<u64>()) {
        let (g, _) = gen_random_certified(RandomKind::Planar, n, seed).unwrap();
        let d = straight_line_layout(&g).unwrap();
        prop_assert_eq!(count_crossings(&d).unwrap().total, 0);
    }

    #[test]
    fn decomposition_drawer_certifies(n in 1usize..=24, width in 1usize..=3, spread in 1usize..=3, seed in any::<u64>()) {
        let bags = n.div_ceil(width) + 2;
        let (g, d) = random_planar_decomposition(n, bags, width, spread, seed).unwrap();
        let h = make_home_assignment(&g, &d).unwrap();
        let out = draw_planar_decomposition(&g, &d, &h).unwrap();
        prop_assert!(out.report.all_satisfied());
        prop_assert_eq!(count_crossings(&out.drawing).unwrap().total, out.report.total);
    }

    #[test]
    fn k33_free_shape(quarter in 1usize..=5, copies in 1usize..=3) {
        let delta = 4 * quarter;
        let inst = gen_k33_free(delta, copies).unwrap();
        prop_assert!(chordal_certificate(&inst.graph).is_ok());
        let mut deg = inst.graph.degrees();
        deg.sort_unstable();
        let big = deg.iter().filter(|&&x| x == delta).count();
        prop_assert_eq!(big, 5 * copies);
        if delta >= 8 {
            prop_assert!(deg.iter().all(|&x| x == 2 || x == delta));
        }
    }

    #[test]
    fn hub_contraction_recovers_graph(pieces in 1usize..=6, seed in 0u64..1000) {
        let t = random_tree(pieces, seed);
        let c = compose(&t).unwrap();
        let aux: Vec<_> = (0..t.pieces.len()).map(|i| build_ki(&c, i).unwrap()).collect();
        prop_assert!(check_subdivision(&c, &aux).is_ok());
    }
}
