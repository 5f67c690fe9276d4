mod common;

use ec_designs::constructions::{boolean_sqs8, builtin, complete_design, doubling_sqs, netto13, ts13_4};
use ec_designs::ec::{
    find_dominating_union_pair, is_1_ec_by_degree, is_2_ec_fast, is_dominating_pair, is_n_ec,
    witness_vertex, xi, xi_with_cap, EcError,
};
use ec_designs::graph::{build_big, build_s_big};
use ec_designs::{Design, EcFailure, Graph};

fn cycle(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).unwrap()
}

/// Paley graph on 13 vertices: 2-e.c. but not 3-e.c.
fn paley13() -> Graph {
    let squares: Vec<usize> = (1..13).map(|x| x * x % 13).collect();
    let mut edges = Vec::new();
    for u in 0..13 {
        for v in u + 1..13 {
            if squares.contains(&(v - u)) {
                edges.push((u, v));
            }
        }
    }
    Graph::from_edges(13, edges).unwrap()
}

#[test]
fn five_cycle_is_one_ec() {
    let c5 = cycle(5);
    assert!(is_n_ec(&c5, 1).unwrap().holds);
    assert!(!is_n_ec(&c5, 2).unwrap().holds);
    assert_eq!(xi(&c5).value, 1);
}

#[test]
fn order_errors() {
    let g = cycle(5);
    assert_eq!(is_n_ec(&g, 0).unwrap_err(), EcError::ZeroOrder);
    assert!(matches!(is_n_ec(&g, 5), Err(EcError::TooFewVertices { .. })));
    assert!(is_2_ec_fast(&Graph::complete(2)).is_err());
    assert_eq!(xi(&Graph::empty(1)).value, 0);
}

#[test]
fn netto_and_ts13_4_are_two_ec() {
    assert!(is_n_ec(&build_big(&netto13()), 2).unwrap().holds);
    assert!(is_2_ec_fast(&build_big(&ts13_4())).unwrap().holds);
    assert!(is_2_ec_fast(&build_big(&doubling_sqs(&boolean_sqs8()).unwrap())).unwrap().holds);
}

#[test]
fn sqs8_big_fails_with_a_parallel_pair() {
    let d = boolean_sqs8();
    let g = build_big(&d);
    let res = is_n_ec(&g, 2).unwrap();
    let f = res.witness_failure.clone().unwrap();
    assert!(f.a.is_empty());
    assert_eq!(f.b, vec![0, 1]);
    // The only block missing B_0 is its parallel mate, which meets B_1.
    assert_eq!(d.intersection_size(0, 1), 2);
    // Every parallel pair is also a failure for A = {}.
    for i in 0..14 {
        for j in i + 1..14 {
            if d.intersection_size(i, j) == 0 {
                assert_eq!(witness_vertex(&g, &[], &[i, j]), None);
            }
        }
    }
    assert_eq!(res, is_2_ec_fast(&g).unwrap());
    assert_eq!(common::naive_ec(&g, 2), (res.witness_failure, res.checked_pairs));
}

#[test]
fn one_big_of_sqs8_fails() {
    assert!(!is_2_ec_fast(&build_s_big(&boolean_sqs8(), &[1])).unwrap().holds);
}

#[test]
fn xi_values() {
    assert_eq!(xi(&build_big(&netto13())).value, 2);
    let complete9 = build_big(&complete_design(9, 3).unwrap());
    let x = xi(&complete9);
    assert_eq!((x.value, x.at_least), (2, false));
    assert!(x.next_failure.is_some());
    // A block meeting every other block gives a vertex of full degree.
    let star = Design::new(5, vec![vec![0, 1, 2, 3, 4], vec![0, 1], vec![2, 3], vec![1, 4]]).unwrap();
    assert_eq!(xi(&build_big(&star)).value, 0);
}

#[test]
fn xi_cap_reports_at_least() {
    let p = paley13();
    let capped = xi_with_cap(&p, 1);
    assert_eq!((capped.value, capped.at_least), (1, true));
    let full = xi(&p);
    assert_eq!((full.value, full.at_least), (2, false));
}

#[test]
fn search_matches_definition_on_paley() {
    let p = paley13();
    for n in 1..=4 {
        let res = is_n_ec(&p, n).unwrap();
        assert_eq!(common::naive_ec(&p, n), (res.witness_failure.clone(), res.checked_pairs), "n = {n}");
        assert_eq!(res.holds, n <= 2);
    }
}

#[test]
fn one_ec_by_degree_matches_search() {
    let mut rng = common::seeded_rng(11);
    for i in 0..60 {
        let g = common::random_graph(&mut rng, 2 + i % 12, [0.05, 0.5, 0.95][i % 3]);
        assert_eq!(is_1_ec_by_degree(&g).unwrap(), is_n_ec(&g, 1).unwrap());
    }
}

#[test]
fn hundred_random_graphs_against_definition() {
    let mut rng = common::seeded_rng(20190225);
    for i in 0..100 {
        let n = 3 + i % 38;
        let p = 0.2 + 0.6 * (i % 7) as f64 / 6.0;
        let g = common::random_graph(&mut rng, n, p);
        let fast = is_2_ec_fast(&g).unwrap();
        assert_eq!(fast, is_n_ec(&g, 2).unwrap(), "graph {i}");
        assert_eq!(common::naive_ec(&g, 2), (fast.witness_failure, fast.checked_pairs), "graph {i}");
        if (4..=16).contains(&n) {
            let three = is_n_ec(&g, 3).unwrap();
            assert_eq!(common::naive_ec(&g, 3), (three.witness_failure, three.checked_pairs));
        }
    }
}

#[test]
fn witness_vertex_is_least() {
    let c5 = cycle(5);
    assert_eq!(witness_vertex(&c5, &[0], &[]), Some(1));
    assert_eq!(witness_vertex(&c5, &[0, 2], &[]), Some(1));
    assert_eq!(witness_vertex(&c5, &[0], &[1]), Some(4));
    assert_eq!(witness_vertex(&c5, &[0, 1], &[]), None);
}

#[test]
fn failure_sets_are_disjoint_and_sized() {
    let g = build_big(&boolean_sqs8());
    for n in 1..=3 {
        if let Some(EcFailure { a, b }) = is_n_ec(&g, n).unwrap().witness_failure {
            assert_eq!(a.len() + b.len(), n);
            assert!(a.iter().all(|x| !b.contains(x)));
        }
    }
}

#[test]
fn dominating_pairs() {
    let d = complete_design(6, 3).unwrap();
    let (i, j) = find_dominating_union_pair(&d).unwrap();
    assert!(is_dominating_pair(&d, i, j));
    let complementary = d.blocks().iter().position(|b| b == &[3, 4, 5]).unwrap();
    assert!(is_dominating_pair(&d, 0, complementary));
    assert_eq!(find_dominating_union_pair(&ts13_4()), None);
    // Two blocks meeting every block would leave no witness for A = {}.
    let sqs8 = boolean_sqs8();
    assert!(find_dominating_union_pair(&sqs8).is_some());
    assert!(!is_2_ec_fast(&build_big(&sqs8)).unwrap().holds);
}

#[test]
fn thread_count_does_not_change_results() {
    let g = build_s_big(&builtin("sqs16").unwrap(), &[1]);
    let reference = is_n_ec(&g, 2).unwrap();
    for threads in [1, 3] {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        let res = pool.install(|| is_n_ec(&g, 2).unwrap());
        assert_eq!(res, reference);
        assert_eq!(pool.install(|| is_2_ec_fast(&g).unwrap()), reference);
    }
}
