#![allow(dead_code)]

use stree_core::eig::{parse_eig, Color, Graph};
use stree_core::synthesis::{build_prefix, AdmissibleSequence};
use stree_core::words::{mechanical_word, Rounding, Surd};

/// The degree-6 coloring built from the Fibonacci word: a white vertex per
/// letter, each with a pendant black vertex; letter 0 uses (s, t) = (4, 1),
/// letter 1 uses (2, 2), and consecutive whites are joined with index 3.
pub fn fibonacci_graph(whites: usize) -> Graph {
    let theta = Surd { a: 3, b: -1, d: 5, c: 2 };
    let w = mechanical_word(&theta, &theta, whites, Rounding::Floor).unwrap();
    let (loops, pendant) = ([4u32, 2], [1u32, 2]);
    let mut g = Graph::new(6);
    g.truncation.left = true;
    g.truncation.right = true;
    let mut id = 0i64;
    for (k, &x) in w.iter().enumerate() {
        g.add_vertex(id, Color::A, loops[x as usize]);
        if k > 0 {
            g.add_edge(id - 1, id, 3, pendant[x as usize]);
        }
        g.add_vertex(id + 1, Color::B, 0);
        g.add_edge(id, id + 1, pendant[x as usize], 3);
        id += 2;
    }
    g
}

pub fn fibonacci_sequence(steps: usize) -> AdmissibleSequence {
    let t = [1u32, 2, 3];
    let mut i = vec![vec![2 * t[0], 2 * t[1], 2 * t[2]]];
    for k in 1..steps {
        i.push(vec![t[(k + 1) % 3]]);
    }
    let alpha: String = (0..steps).map(|k| if k % 2 == 0 { 'A' } else { 'B' }).collect();
    let text = serde_json::json!({"d": 6, "K": 0, "alpha": alpha, "i": i, "beta": alpha});
    serde_json::from_value(text).unwrap()
}

/// figure1 sequence: (1,2,2), (1), (1,1), (1,1), then (1) and (1,1)
/// alternating, with B growing from k = 2 on.
pub fn figure1_sequence(steps: usize) -> AdmissibleSequence {
    let mut i = vec![vec![1u32, 2, 2], vec![1], vec![1, 1], vec![1, 1]];
    for k in 4..steps {
        i.push(if k % 2 == 0 { vec![1] } else { vec![1, 1] });
    }
    i.truncate(steps);
    let alpha: String = (0..steps).map(|k| if k < 2 { 'A' } else { 'B' }).collect();
    let text = serde_json::json!({"d": 3, "K": 0, "alpha": alpha, "i": i, "beta": alpha, "limit": "ray"});
    serde_json::from_value(text).unwrap()
}

pub fn figure1_graph(steps: usize) -> Graph {
    let seq = figure1_sequence(steps);
    build_prefix(&seq, steps - 1).unwrap().graph
}

pub fn corpus(name: &str) -> Graph {
    let path = format!("{}/../cli/examples/{name}", env!("CARGO_MANIFEST_DIR"));
    parse_eig(&std::fs::read_to_string(path).unwrap()).unwrap()
}
