mod common;

use common::*;
use stree_core::balls::{complexity_profile, Analysis};
use stree_core::ballgraphs::{build_indexed, Side};
use stree_core::eig::{graphs_isomorphic, segment_embedding, Graph};
use stree_core::induction::*;
use stree_core::synthesis::*;

fn tuples(t: &InductionTrace) -> Vec<Vec<u32>> {
    t.i.iter().map(|&x| x.into()).collect()
}

/// n_k + 1 for the Fibonacci example are the Fibonacci numbers 1, 2, 3, 5, ...
fn fibonacci_levels(count: usize) -> Vec<usize> {
    let (mut f, mut g) = (1usize, 2usize);
    let mut out = Vec::new();
    for _ in 0..count {
        out.push(f - 1);
        (f, g) = (g, f + g);
    }
    out
}

#[test]
fn fibonacci_word_coloring_trace() {
    let g = fibonacci_graph(110);
    let trace = extract_trace(&g, 13).unwrap();
    assert_eq!(trace.nk, fibonacci_levels(6));
    assert_eq!(trace.k, Some(0));
    assert_eq!(letters_to_string(&trace.alpha), "ABABAB");
    // first tuple doubles t = (1, 2, 3), then t_{2+i} with i cycling
    assert_eq!(tuples(&trace), vec![vec![2, 4, 6], vec![3], vec![1], vec![2], vec![3], vec![1]]);
    assert_eq!(trace.cases[0], "(2)(a)");
    assert!(trace.cases[1..].iter().all(|c| c == "(3)"));
    assert!(trace.notes.is_empty(), "{:?}", trace.notes);
}

#[test]
fn figure1_trace() {
    let g = figure1_graph(30);
    let trace = extract_trace(&g, 10).unwrap();
    assert_eq!(trace.k, Some(0));
    assert_eq!(trace.nk, vec![0, 1, 3, 6, 8]);
    assert_eq!(letters_to_string(&trace.alpha), "AABBB");
    assert_eq!(tuples(&trace), vec![vec![1, 2, 2], vec![1], vec![1, 1], vec![1, 1], vec![1]]);
}

#[test]
fn extracted_sequences_are_admissible() {
    for g in [fibonacci_graph(110), figure1_graph(30)] {
        let an = Analysis::new(&g, 12);
        let trace = trace_of(&an, 10).unwrap();
        let (seq, _) = sequence_from_trace(&an, &trace).unwrap();
        let report = validate_alpha_i(&seq);
        assert!(report.ok, "{:?}", report.failure);
        assert!(validate_beta(&seq.alpha, &seq.beta));
    }
}

fn degree_in(g: &Graph, id: i64) -> usize {
    g.edges.iter().filter(|e| e.u == id || e.v == id).count()
}

#[test]
fn next_level_from_the_other_graph() {
    for g in [fibonacci_graph(110), figure1_graph(30)] {
        let an = Analysis::new(&g, 15);
        let trace = trace_of(&an, 13).unwrap();
        for k in 0..trace.nk.len() - 1 {
            let n = trace.nk[k];
            let other = build_indexed(&an, n as isize, trace.alpha[k].other().side()).unwrap();
            let m = other.graph.len();
            assert_eq!(degree_in(&other.graph, other.special()), 1, "k = {k}: S is not a leaf");
            let expected = match trace.i[k + 1] {
                IndexTuple::Single(_) => n + m - 1,
                _ => n + m,
            };
            assert_eq!(trace.nk[k + 1], expected, "k = {k}, m = {m}");
        }
    }
}

#[test]
fn graphs_only_change_at_recorded_levels() {
    for g in [fibonacci_graph(110), figure1_graph(30)] {
        let an = Analysis::new(&g, 15);
        let trace = trace_of(&an, 13).unwrap();
        for n in 1..=13usize {
            if trace.nk.contains(&n) {
                continue;
            }
            for side in [Side::A, Side::B] {
                let before = build_indexed(&an, n as isize - 1, side).unwrap().graph;
                let after = build_indexed(&an, n as isize, side).unwrap().graph;
                assert!(graphs_isomorphic(&before, &after).is_some(), "level {n}, side {side:?}");
            }
        }
    }
}

#[test]
fn every_vertex_has_a_consistent_beta() {
    let g = fibonacci_graph(110);
    let an = Analysis::new(&g, 15);
    let trace = trace_of(&an, 13).unwrap();
    let k_max = trace.nk.len() - 2;
    let last = trace.nk[k_max + 1];
    let ids: Vec<i64> = (0..g.len()).filter(|&x| an.level(last).class_of[x].is_some()).map(|x| g.vertices[x].id).collect();
    assert!(ids.len() > 10);
    let reports: Vec<BetaReport> = ids.iter().map(|&id| beta_of_vertex(&an, &trace, id, k_max).unwrap()).collect();
    for r in &reports {
        assert!(r.follows_alpha, "vertex {}: {}", r.vertex, letters_to_string(&r.beta));
        assert!(r.in_own_graph, "vertex {}", r.vertex);
    }
}

#[test]
fn fibonacci_sequence_round_trip() {
    let seq = fibonacci_sequence(12);
    let prefix = build_prefix(&seq, 11).unwrap();
    let n_max = prefix.nk[6];
    let trace = extract_trace(&prefix.graph, n_max).unwrap();
    assert_eq!(trace.k, Some(seq.k));
    assert_eq!(trace.nk[..7], prefix.nk[..7]);
    assert_eq!(trace.alpha[..7], seq.alpha[..7]);
    assert_eq!(trace.i[..7], seq.i[..7]);
    // the vertex every frame grows from reads back a beta ending like the input
    let origin = prefix.graph.vertices[prefix.into_final[0][0]].id;
    let an = Analysis::new(&prefix.graph, n_max + 2);
    let beta = beta_of_vertex(&an, &trace, origin, 5).unwrap();
    let k0 = agreement_index(&beta.beta, &seq.beta[..beta.beta.len()]);
    eprintln!("beta {} agrees from k = {k0:?}", letters_to_string(&beta.beta));
    assert!(k0.is_some());
}

#[test]
fn figure1_graph_round_trip() {
    let g = figure1_graph(44);
    let an = Analysis::new(&g, 12);
    let trace = trace_of(&an, 10).unwrap();
    let (seq, _) = sequence_from_trace(&an, &trace).unwrap();
    assert_eq!(seq.limit, Limit::Ray);
    let prefix = build_prefix(&seq, seq.i.len() - 1).unwrap();
    assert!(segment_embedding(&prefix.graph, &g).is_some());
}

#[test]
fn synthesized_prefixes_are_sturmian() {
    for seq in [fibonacci_sequence(10), figure1_sequence(20)] {
        let g = build_prefix(&seq, seq.i.len() - 1).unwrap().graph;
        let profile = complexity_profile(&g, 8);
        assert!(profile.b.len() >= 6, "{:?}", profile);
        assert!(profile.sturmian, "{:?}", profile.b);
    }
}
