mod common;

use common::corpus;
use stree_core::balls::Analysis;
use stree_core::ballgraphs::{build_gn, build_indexed, detect_cycle, lemma_failures, Side};
use stree_core::eig::graphs_isomorphic;
use stree_core::induction::*;

const HORIZON: usize = 10;

#[test]
fn special_class_lies_on_every_cycle() {
    for name in ["cyclic1.eig", "cyclic2.eig"] {
        let g = corpus(name);
        let an = Analysis::new(&g, HORIZON + 2);
        let mut seen = false;
        for n in 0..=HORIZON {
            let gn = build_gn(&an, n);
            let Some(cycle) = detect_cycle(&gn) else {
                assert!(!seen, "{name}: cycle vanished at level {n}");
                continue;
            };
            seen = true;
            let ch = an.full_chain_at(n).unwrap();
            assert!(cycle.contains(&ch.s), "{name} level {n}: {cycle:?} misses S = {}", ch.s);
            let allowed = [ch.a, ch.b, ch.s, ch.c.unwrap()];
            assert!(gn.neighbours(ch.s).iter().all(|x| allowed.contains(x)), "{name} level {n}");
        }
        assert!(seen, "{name} has no cycle");
    }
}

#[test]
fn one_side_stabilizes_once_the_cycle_holds_c() {
    for name in ["cyclic1.eig", "cyclic2.eig"] {
        let g = corpus(name);
        let an = Analysis::new(&g, HORIZON + 2);
        let start = (0..=HORIZON)
            .find(|&n| {
                let ch = an.full_chain_at(n).unwrap();
                let c = ch.c.unwrap();
                c != ch.s && detect_cycle(&build_gn(&an, n)).is_some_and(|cy| cy.contains(&ch.s) && cy.contains(&c))
            })
            .unwrap_or_else(|| panic!("{name}: no cycle through S != C"));
        let stable = [Side::A, Side::B].into_iter().any(|side| {
            let first = build_indexed(&an, start as isize, side).unwrap().graph;
            (start + 1..=HORIZON).all(|n| graphs_isomorphic(&first, &build_indexed(&an, n as isize, side).unwrap().graph).is_some())
        });
        assert!(stable, "{name}: neither side is constant from level {start}");
        assert_eq!(boundedness_of(&an, HORIZON).unwrap().verdict, Verdict::Bounded);
    }
}

#[test]
fn cyclic_colorings_refuse_the_trace() {
    for (name, level) in [("cyclic1.eig", 1), ("cyclic2.eig", 2)] {
        let g = corpus(name);
        assert!(matches!(extract_trace(&g, 6), Err(InductionError::Cyclic(n)) if n == level), "{name}");
    }
}

#[test]
fn lemmas_hold_on_cyclic_corpora() {
    for name in ["cyclic1.eig", "cyclic2.eig"] {
        let g = corpus(name);
        let an = Analysis::new(&g, HORIZON + 3);
        for n in 0..=HORIZON {
            assert_eq!(lemma_failures(&an, n).unwrap(), Vec::<String>::new(), "{name}");
        }
    }
}
