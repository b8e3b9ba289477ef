mod common;

use common::*;
use proptest::prelude::*;
use treepow::harness::record::to_csv;
use treepow::harness::{parse_results, ExperimentRecord};
use treepow::iso::automorphism_count;
use treepow::polygraph::point_of;
use treepow::transfer::transfer_with_map;
use treepow::*;

fn graph(max_n: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        let k = pairs.len();
        proptest::collection::vec(any::<bool>(), k)
            .prop_map(move |keep| Graph::new(n, pairs.iter().zip(&keep).filter(|(_, &k)| k).map(|(&e, _)| e)).unwrap())
    })
}

fn rooted_graph(max_n: usize) -> impl Strategy<Value = RootedGraph> {
    graph(max_n)
        .prop_filter("needs two vertices", |g| g.n() >= 2)
        .prop_flat_map(|g| {
            let n = g.n();
            (Just(g), proptest::collection::vec(any::<bool>(), n))
        })
        .prop_map(|(g, mask)| {
            let mut roots: Vec<Vertex> = (0..g.n()).filter(|&v| mask[v]).collect();
            if roots.len() == g.n() {
                roots.pop();
            }
            RootedGraph::new(g, roots).unwrap()
        })
}

fn small_patterns() -> Vec<Graph> {
    vec![
        Graph::path(2),
        Graph::path(3),
        Graph::path(4),
        Graph::cycle(3),
        Graph::cycle(4),
        Graph::star(3),
        Graph::complete_bipartite(2, 2),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn copy_counts_match_injective_maps(g in graph(7), i in 0usize..7) {
        let h = &small_patterns()[i];
        let aut = automorphism_count(h, None);
        prop_assert_eq!(aut, naive_embeddings(h, h));
        prop_assert_eq!(count_subgraph_copies(&g, h) * aut, naive_embeddings(&g, h));
        prop_assert_eq!(contains_subgraph(&g, h), naive_embeddings(&g, h) > 0);
    }

    #[test]
    fn copy_counts_are_monotone(g in graph(7), u in 0usize..7, v in 0usize..7, i in 0usize..7) {
        let h = &small_patterns()[i];
        prop_assume!(u < g.n() && v < g.n() && u != v && !g.has_edge(u, v));
        let bigger = g.with_edge(u, v).unwrap();
        prop_assert!(count_subgraph_copies(&bigger, h) >= count_subgraph_copies(&g, h));
    }

    #[test]
    fn rooted_density_matches_subsets(g in rooted_graph(8)) {
        let d = rooted_density(&g).unwrap();
        prop_assert_eq!(d.value, naive_rooted_density(&g));
        prop_assert!(d.witness.iter().all(|&v| !g.is_root(v)));
        prop_assert_eq!(
            Rational::new(edges_meeting(g.graph(), &d.witness) as i64, d.witness.len() as i64),
            d.value
        );
    }

    #[test]
    fn unrooted_densities_match_subsets(g in graph(7)) {
        prop_assume!(g.m() >= 1);
        prop_assert_eq!(density_m(&g).unwrap().value, naive_m(&g));
        if g.m() >= 2 {
            prop_assert_eq!(two_density(&g).unwrap().value, naive_two_density(&g));
        }
    }

    #[test]
    fn local_maps_compose(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_rooted_forest(7, &mut r);
        let first = local_quotients(&t, t.n()).unwrap();
        let a = &first[rand::Rng::gen_range(&mut r, 0..first.len())];
        let second = local_quotients(a.target(), a.target().n()).unwrap();
        let b = &second[rand::Rng::gen_range(&mut r, 0..second.len())];
        let c = a.then(b).unwrap();
        prop_assert!(c.is_valid(), "{} then {}", a.to_line(), b.to_line());
        prop_assert!(verify_density_monotone(&c).unwrap().holds);
    }

    #[test]
    fn map_lines_round_trip(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = random_rooted_forest(6, &mut r);
        for m in local_quotients(&t, t.n()).unwrap() {
            let back = LocalMap::parse_line(&m.to_line(), t.n()).unwrap();
            prop_assert_eq!(back.as_slice(), m.map());
            let ascii = m.to_line().replace('→', "->");
            prop_assert_eq!(LocalMap::parse_line(&ascii, t.n()).unwrap(), back);
        }
    }

    #[test]
    fn graph_text_round_trips(g in rooted_graph(9)) {
        prop_assert_eq!(RootedGraph::from_text(&g.to_text()).unwrap(), g.clone());
        prop_assert_eq!(Graph::from_text(&g.graph().to_text()).unwrap(), g.graph().clone());
    }

    #[test]
    fn power_freeness_is_monotone_in_ell(g in graph(7), s in 1usize..=2) {
        let base = fixtures::star_at_leaves(s);
        let mut prev = false;
        for ell in 1..=4 {
            let free = is_power_free(&g, &TreePowerSpec::tree(base.clone(), ell).unwrap()).unwrap();
            prop_assert!(!prev || free, "free at ell - 1 but not at {}", ell);
            prev = free;
        }
        // For K_{1,2} rooted at leaves, freeness of the power means no pair
        // has ell common neighbours.
        if s == 2 {
            let n = g.n();
            let max = (0..n).flat_map(|u| (0..n).map(move |v| (u, v))).filter(|(u, v)| u != v)
                .map(|(u, v)| common_neighbours(&g, u, v)).max().unwrap_or(0);
            for ell in 1..=4 {
                let free = is_power_free(&g, &TreePowerSpec::tree(base.clone(), ell).unwrap()).unwrap();
                prop_assert_eq!(free, max < ell);
            }
        }
    }

    #[test]
    fn field_arithmetic(q in prop::sample::select(vec![2u64, 3, 5, 7, 11, 13, 101, 65_521]), x in any::<u64>(), y in any::<u64>()) {
        let f = PrimeField::new(q).unwrap();
        let (a, b) = (x % q, y % q);
        prop_assert_eq!(f.add(a, b), ((a as u128 + b as u128) % q as u128) as u64);
        prop_assert_eq!(f.mul(a, b), ((a as u128 * b as u128) % q as u128) as u64);
        prop_assert_eq!(f.add(f.sub(a, b), b), a);
        if a != 0 {
            prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            prop_assert_eq!(f.pow(a, q - 1), 1);
        }
    }

    #[test]
    fn polynomials_are_symmetric(seed in any::<u64>(), b in 1usize..=2, d in 1u32..=3) {
        let q = 7;
        let f = SymmetricPolynomial::from_seed(PrimeField::new(q).unwrap(), b, d, seed);
        for x in 0..q.pow(b as u32) {
            let y = (x * 3 + 1) % q.pow(b as u32);
            let (px, py) = (point_of(x, q, b), point_of(y, q, b));
            prop_assert_eq!(f.evaluate(&px, &py), f.evaluate(&py, &px));
        }
        prop_assert_eq!(SymmetricPolynomial::from_text(&f.to_text()).unwrap(), f);
    }

    #[test]
    fn transfer_keeps_a_subgraph(g in graph(9), seed in any::<u64>(), m in 2usize..6) {
        let template = Graph::cycle(m.max(3));
        let t = transfer_subgraph(&g, &template, seed).unwrap();
        prop_assert!(t.graph.is_edge_subset_of(&g));
        prop_assert_eq!(&t.graph, &transfer_with_map(&g, &template, &t.map));
        for &(u, v) in t.graph.edges() {
            prop_assert!(template.has_edge(t.map[u], t.map[v]));
        }
        prop_assert_eq!(t, transfer_subgraph(&g, &template, seed).unwrap());
    }

    #[test]
    fn deletion_output_is_free(seed in any::<u64>()) {
        let g = sample_gnp(&GnpConfig { n: 10, p: 0.5, seed }).unwrap();
        let family = [Graph::cycle(4), Graph::cycle(3)];
        let d = deletion_construct(&g, &family).unwrap();
        prop_assert!(d.graph.is_edge_subset_of(&g));
        prop_assert!(family.iter().all(|f| !contains_subgraph(&d.graph, f)));
        prop_assert_eq!(g.m() - d.graph.m(), d.deleted_edges);
    }

    #[test]
    fn csv_round_trip(seeds in proptest::collection::vec(any::<u64>(), 0..6), p in 0.0f64..=1.0) {
        let records: Vec<ExperimentRecord> = seeds.iter().enumerate().map(|(i, &s)| ExperimentRecord {
            config_hash: "00ff00ff00ff00ff".into(),
            mode: "deletion".into(),
            seed: s,
            n: i as u64,
            p,
            q: 0, b: 0, a: 0, ell: 0,
            m: s % 1000,
            edges: s % 997,
            nh_count: 3,
            bad_tuples: 1,
            free_checked: true,
            free: s % 2 == 0,
            runtime_ms: 5,
        }).collect();
        let text = to_csv(&records).unwrap();
        prop_assert_eq!(parse_results(&text).unwrap(), records.clone());
        prop_assert_eq!(to_csv(&records).unwrap(), text);
    }
}

#[test]
fn random_forest_generator_gives_forests() {
    let mut r = rng(0);
    for _ in 0..100 {
        let t = random_rooted_forest(8, &mut r);
        assert!(t.graph().is_forest());
        assert!(!t.non_roots().is_empty());
    }
    assert_eq!(all_forests(4).len(), 6);
    assert_eq!(all_forests(6).len(), 20);
}
