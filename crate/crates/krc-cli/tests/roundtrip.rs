use krc_cli::formats::{parse_cnf, parse_cwe, parse_graph, parse_td, write_cnf, write_cwe, write_graph, write_td};
use krc_core::generators::{gen_random_cnf, gen_random_cw_expression, gen_random_instance, mark_random_irrelevant};
use krc_core::witness::{eval_cw_expression, heuristic_decomposition};
use krc_core::Graph;
use proptest::prelude::*;

#[test]
fn graphs_round_trip() {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 12);
        let m = (n - 1) + (seed as usize % (n * (n - 1) / 2 - (n - 1) + 1));
        let mut g = gen_random_instance(n, m, 1 + seed % 5, seed).unwrap();
        if seed % 3 == 0 {
            mark_random_irrelevant(&mut g, 0.3, seed);
        }
        let text = write_graph(&g);
        assert_eq!(parse_graph(&text).unwrap(), g, "seed {seed}");
        assert_eq!(write_graph(&parse_graph(&text).unwrap()), text);
    }
}

#[test]
fn directed_and_zero_weight_graphs_round_trip() {
    let mut g = Graph::new(4);
    g.allow_zero_weights();
    for (u, v, w) in [(0, 1, 0), (1, 0, 3), (2, 3, 1), (2, 3, 2), (3, 3, 5)] {
        g.add_arc(u, v, w).unwrap();
    }
    g.set_irrelevant(2).unwrap();
    assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
}

#[test]
fn decompositions_round_trip() {
    for seed in 0..100u64 {
        let n = 1 + (seed as usize % 14);
        let m = (n - 1) + (seed as usize % (n * (n - 1) / 2 - (n - 1) + 1));
        let g = gen_random_instance(n, m, 1, seed).unwrap();
        let td = heuristic_decomposition(&g);
        let text = write_td(&td, g.n());
        assert_eq!(parse_td(&text, Some(&g)).unwrap(), td, "seed {seed}");
    }
}

#[test]
fn expressions_round_trip() {
    for seed in 0..100u64 {
        let e = gen_random_cw_expression(1 + seed as usize % 9, 2 + seed as usize % 3, 3, seed).unwrap();
        let back = parse_cwe(&write_cwe(&e)).unwrap();
        assert_eq!(back, e, "seed {seed}");
        assert_eq!(eval_cw_expression(&back).unwrap(), eval_cw_expression(&e).unwrap());
    }
}

proptest! {
    #[test]
    fn formulas_round_trip(vars in 1usize..8, clauses in 0usize..10, seed in any::<u64>()) {
        let f = gen_random_cnf(vars, clauses, vars.min(3), seed).unwrap();
        prop_assert_eq!(parse_cnf(&write_cnf(&f)).unwrap(), f);
    }

    #[test]
    fn garbage_never_panics(text in "[pacibsnr0-9 \\n-]{0,80}") {
        let _ = parse_graph(&text);
        let _ = parse_td(&text, None);
        let _ = parse_cwe(&text);
        let _ = parse_cnf(&text);
    }
}
