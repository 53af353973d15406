//! Adjacency graphs of ball classes and their edge-indexed A/B versions.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::Serialize;
use thiserror::Error;

use crate::balls::{Analysis, BallsError};
use crate::eig::{to_dot_labeled, Color, Graph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Side {
    Plain,
    A,
    B,
}

impl Side {
    pub fn letter(self) -> &'static str {
        match self {
            Side::Plain => "",
            Side::A => "A",
            Side::B => "B",
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("index from class {class} at level {level} differs between representatives")]
    IllDefined { level: usize, class: usize },
    #[error("class {class} at level {level} has no representative with a complete neighbourhood")]
    NoRepresentative { level: usize, class: usize },
    #[error(transparent)]
    Balls(#[from] BallsError),
}

/// Classes of n-balls joined when their centres can be adjacent.
#[derive(Debug, Clone, Serialize)]
pub struct BallGraph {
    pub n: usize,
    pub vertices: Vec<usize>,
    /// Unordered pairs (x <= y); (x, x) is a loop.
    pub edges: BTreeSet<(usize, usize)>,
    /// Directed pairs (x, y): every centre of x has a neighbour of class y.
    pub always: BTreeSet<(usize, usize)>,
}

impl BallGraph {
    pub fn neighbours(&self, x: usize) -> BTreeSet<usize> {
        self.edges
            .iter()
            .filter_map(|&(p, q)| if p == x { Some(q) } else if q == x { Some(p) } else { None })
            .filter(|&y| y != x)
            .collect()
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("graph G {\n");
        for v in &self.vertices {
            s.push_str(&format!("  \"{v}\";\n"));
        }
        for (p, q) in &self.edges {
            s.push_str(&format!("  \"{p}\" -- \"{q}\";\n"));
        }
        s.push_str("}\n");
        s
    }
}

pub fn build_gn(an: &Analysis, n: usize) -> BallGraph {
    let lv = an.level(n);
    let mut edges = BTreeSet::new();
    for x in 0..an.graph.len() {
        let Some(cx) = lv.class_of[x] else { continue };
        if an.graph.vertices[x].loop_index > 0 {
            edges.insert((cx, cx));
        }
        for s in &an.adj.slots[x] {
            if let (true, Some(cy)) = (s.out > 0, lv.class_of[s.to]) {
                edges.insert((cx.min(cy), cx.max(cy)));
            }
        }
    }
    let mut always = BTreeSet::new();
    if n < an.max_level() {
        let up = an.level(n + 1);
        for c in 0..lv.count() {
            let reps: Vec<usize> = lv.reps[c].iter().copied().filter(|&x| up.class_of[x].is_some()).collect();
            if reps.is_empty() {
                continue;
            }
            for d in 0..lv.count() {
                if reps.iter().all(|&x| an.neighbour_count(x, n, d) > 0) {
                    always.insert((c, d));
                }
            }
        }
    }
    BallGraph { n, vertices: (0..lv.count()).collect(), edges, always }
}

/// Number of neighbours of class `y` around a centre of class `x` at level n.
/// When `x` is the special class the side picks its A- or B-extension.
pub fn index_of(an: &Analysis, n: usize, x: usize, y: usize, side: Side) -> Result<u32, GraphError> {
    if n + 1 > an.max_level() {
        return Err(BallsError::HorizonTooShort { level: n + 1, reason: "indices need the next level".into() }.into());
    }
    let lv = an.level(n);
    let up = an.level(n + 1);
    let filter = match side {
        Side::Plain => None,
        _ => {
            let chain = an.chain_at(n)?;
            if x != chain.s {
                None
            } else {
                let next = an.chain_at(n + 1)?;
                Some(if side == Side::A { next.a } else { next.b })
            }
        }
    };
    let mut value = None;
    for &r in &lv.reps[x] {
        let Some(cu) = up.class_of[r] else { continue };
        if filter.is_some_and(|f| f != cu) {
            continue;
        }
        let k = an.neighbour_count(r, n, y);
        match value {
            None => value = Some(k),
            Some(v) if v != k => return Err(GraphError::IllDefined { level: n, class: x }),
            _ => {}
        }
    }
    value.ok_or(GraphError::NoRepresentative { level: n, class: x })
}

/// 𝒢^A_n or 𝒢^B_n. Vertex ids are class indices; `n = -1` is the single
/// empty ball.
#[derive(Debug, Clone)]
pub struct IndexedBallGraph {
    pub n: isize,
    pub side: Side,
    pub graph: Graph,
}

impl IndexedBallGraph {
    pub fn special(&self) -> i64 {
        self.graph.marks["S"]
    }

    pub fn central(&self) -> Option<i64> {
        self.graph.marks.get("C").copied()
    }

    pub fn classes(&self) -> BTreeSet<usize> {
        self.graph.vertices.iter().map(|v| v.id as usize).collect()
    }

    pub fn to_dot(&self, an: &Analysis) -> String {
        if self.n < 0 {
            return to_dot_labeled(&self.graph, |_| "empty".into());
        }
        let lv = an.level(self.n as usize);
        to_dot_labeled(&self.graph, |v| format!("{}: {}", v.id, lv.classes[v.id as usize].describe()))
    }
}

pub fn point_graph(d: u32) -> Graph {
    let mut g = Graph::new(d);
    g.add_vertex(0, Color::A, d);
    g.marks.insert("S".into(), 0);
    g.marks.insert("C".into(), 0);
    g
}

pub fn build_indexed(an: &Analysis, n: isize, side: Side) -> Result<IndexedBallGraph, GraphError> {
    if n < 0 {
        // the empty ball takes the color of the level-0 class it grows into
        let ch = an.chain_at(0)?;
        let class = if side == Side::B { ch.b } else { ch.a };
        let mut graph = point_graph(an.graph.degree);
        graph.vertices[0].color = an.level(0).classes[class].color;
        return Ok(IndexedBallGraph { n, side, graph });
    }
    let n = n as usize;
    let chain = an.chain_at(n)?;
    let count = an.level(n).count();
    let mut rows: BTreeMap<usize, Vec<u32>> = BTreeMap::new();
    let mut queue = VecDeque::from([chain.s]);
    while let Some(x) = queue.pop_front() {
        if rows.contains_key(&x) {
            continue;
        }
        let row = (0..count).map(|y| index_of(an, n, x, y, side)).collect::<Result<Vec<_>, _>>()?;
        for (y, &k) in row.iter().enumerate() {
            if k > 0 && !rows.contains_key(&y) {
                queue.push_back(y);
            }
        }
        rows.insert(x, row);
    }
    let lv = an.level(n);
    let mut g = Graph::new(an.graph.degree);
    for (&x, row) in &rows {
        g.add_vertex(x as i64, lv.classes[x].color, row[x]);
    }
    let keys: Vec<usize> = rows.keys().copied().collect();
    for (p, &x) in keys.iter().enumerate() {
        for &y in &keys[p + 1..] {
            let (f, r) = (rows[&x][y], rows[&y][x]);
            if f > 0 || r > 0 {
                g.add_edge(x as i64, y as i64, f, r);
            }
        }
    }
    g.marks.insert("S".into(), chain.s as i64);
    if let Some(c) = chain.c.filter(|c| rows.contains_key(c)) {
        g.marks.insert("C".into(), c as i64);
    }
    Ok(IndexedBallGraph { n: n as isize, side, graph: g })
}

/// A cycle of length at least 2 (loops do not count), if any.
pub fn detect_cycle(bg: &BallGraph) -> Option<Vec<usize>> {
    let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for &(p, q) in &bg.edges {
        if p != q {
            adj.entry(p).or_default().push(q);
            adj.entry(q).or_default().push(p);
        }
    }
    let mut parent: BTreeMap<usize, Option<usize>> = BTreeMap::new();
    for &root in adj.keys() {
        if parent.contains_key(&root) {
            continue;
        }
        parent.insert(root, None);
        let mut stack = vec![root];
        while let Some(x) = stack.pop() {
            for &y in &adj[&x] {
                if parent[&x] == Some(y) {
                    continue;
                }
                if parent.contains_key(&y) {
                    // y is an ancestor or already visited in this tree: walk both up to the meeting point
                    let path = |mut v: usize| {
                        let mut p = vec![v];
                        while let Some(u) = parent[&v] {
                            p.push(u);
                            v = u;
                        }
                        p
                    };
                    let (px, py) = (path(x), path(y));
                    let common = px.iter().find(|v| py.contains(v)).copied()?;
                    let mut cycle: Vec<usize> = px.iter().copied().take_while(|&v| v != common).collect();
                    cycle.push(common);
                    let tail: Vec<usize> = py.iter().copied().take_while(|&v| v != common).collect();
                    cycle.extend(tail.into_iter().rev());
                    return Some(cycle);
                }
                parent.insert(y, Some(x));
                stack.push(y);
            }
        }
    }
    None
}

/// Index identities between consecutive levels, adjacency facts around the
/// special class, and row sums of the A/B graphs. Returns the failures.
pub fn lemma_failures(an: &Analysis, n: usize) -> Result<Vec<String>, GraphError> {
    let mut fails = Vec::new();
    let chain = an.full_chain_at(n)?;
    let next = an.full_chain_at(n + 1)?;
    an.chain_at(n + 2)?;
    let (s, c) = (chain.s, chain.c.unwrap());
    let count = an.level(n).count();
    let ext = an.extensions(n);
    let bar = |u: usize| ext[u][0];
    let i = |m: usize, x: usize, y: usize, side: Side| index_of(an, m, x, y, side);
    let mut expect = |what: String, lhs: u32, rhs: u32| {
        if lhs != rhs {
            fails.push(format!("level {n}: {what}: {lhs} != {rhs}"));
        }
    };
    let (a1, b1) = (next.a, next.b);
    let others: Vec<usize> = (0..count).filter(|&v| v != s).collect();

    for u in 0..count {
        if u == s || u == c {
            continue;
        }
        for &v in &others {
            expect(format!("i({u},{v}) vs extensions"), i(n, u, v, Side::Plain)?, i(n + 1, bar(u), bar(v), Side::Plain)?);
        }
        let split = i(n + 1, bar(u), a1, Side::Plain)? + i(n + 1, bar(u), b1, Side::Plain)?;
        expect(format!("i({u},S) split"), i(n, u, s, Side::Plain)?, split);
    }
    if c != s {
        for side in [Side::A, Side::B] {
            let own = if side == Side::A { a1 } else { b1 };
            for &v in &others {
                expect(format!("i(C,{v}) vs S_(n+1) side {side:?}"), i(n, c, v, Side::Plain)?, i(n + 1, next.s, bar(v), side)?);
                expect(format!("i_{side:?}(S,{v})"), i(n, s, v, side)?, i(n + 1, own, bar(v), Side::Plain)?);
            }
            let split = i(n + 1, next.s, a1, side)? + i(n + 1, next.s, b1, side)?;
            expect(format!("i(C,S) split side {side:?}"), i(n, c, s, Side::Plain)?, split);
            let split = i(n + 1, own, a1, Side::Plain)? + i(n + 1, own, b1, Side::Plain)?;
            expect(format!("i_{side:?}(S,S) split"), i(n, s, s, side)?, split);
        }
    } else {
        // one extension of S_n is S_{n+1}, the other is ordinary
        let (special_side, plain_side) = if a1 == next.s { (Side::A, Side::B) } else { (Side::B, Side::A) };
        let plain_ext = if plain_side == Side::A { a1 } else { b1 };
        for &v in &others {
            let lhs = i(n, s, v, special_side)?;
            expect(format!("i_{special_side:?}(S,{v}) via side A"), lhs, i(n + 1, next.s, bar(v), Side::A)?);
            expect(format!("i_{special_side:?}(S,{v}) via side B"), lhs, i(n + 1, next.s, bar(v), Side::B)?);
            expect(format!("i_{plain_side:?}(S,{v})"), i(n, s, v, plain_side)?, i(n + 1, plain_ext, bar(v), Side::Plain)?);
        }
        let lhs = i(n, s, s, special_side)?;
        for side in [Side::A, Side::B] {
            let split = i(n + 1, next.s, a1, side)? + i(n + 1, next.s, b1, side)?;
            expect(format!("i_{special_side:?}(S,S) split via {side:?}"), lhs, split);
        }
        let split = i(n + 1, plain_ext, a1, Side::Plain)? + i(n + 1, plain_ext, b1, Side::Plain)?;
        expect(format!("i_{plain_side:?}(S,S) split"), i(n, s, s, plain_side)?, split);
    }

    let gn = build_gn(an, n);
    if !gn.edges.contains(&(s.min(c), s.max(c))) {
        fails.push(format!("level {n}: S and C are not adjacent"));
    }
    let around = gn.neighbours(s);
    if around.len() > 3 {
        fails.push(format!("level {n}: {} classes adjacent to S", around.len()));
    }
    // vanishing only holds when the whole coloring is acyclic
    let acyclic = (0..=an.max_level()).all(|m| detect_cycle(&build_gn(an, m)).is_none());
    if acyclic {
        for d in 0..count {
            if ![chain.a, chain.b, s, c].contains(&d) && i(n, d, s, Side::Plain)? != 0 {
                fails.push(format!("level {n}: class {d} touches S"));
            }
        }
    }
    let mut covered = BTreeSet::new();
    for side in [Side::A, Side::B] {
        let ig = build_indexed(an, n as isize, side)?;
        let adj = ig.graph.adjacency();
        for k in 0..ig.graph.len() {
            let sum = ig.graph.out_sum(&adj, k);
            if sum != an.graph.degree {
                fails.push(format!("level {n}: row sum {sum} at class {} of side {side:?}", ig.graph.vertices[k].id));
            }
        }
        covered.extend(ig.classes());
    }
    if covered.len() != count {
        fails.push(format!("level {n}: A/B graphs cover {} of {count} classes", covered.len()));
    }
    Ok(fails)
}
