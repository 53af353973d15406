//! Edge-indexed colored graphs: the quotient data from which a colored
//! d-regular tree is unfolded.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Color {
    A,
    B,
}

impl Color {
    pub fn letter(self) -> char {
        match self {
            Color::A => 'a',
            Color::B => 'b',
        }
    }

    pub fn from_letter(c: &str) -> Option<Color> {
        match c {
            "a" => Some(Color::A),
            "b" => Some(Color::B),
            _ => None,
        }
    }

    pub fn other(self) -> Color {
        match self {
            Color::A => Color::B,
            Color::B => Color::A,
        }
    }
}

impl fmt::Display for Color {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vertex {
    pub id: i64,
    pub color: Color,
    /// 0 means no loop.
    pub loop_index: u32,
}

/// Unordered edge with both orientations: `fwd` = i(u->v), `rev` = i(v->u).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: i64,
    pub v: i64,
    pub fwd: u32,
    pub rev: u32,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Truncation {
    pub left: bool,
    pub right: bool,
}

impl Truncation {
    pub fn any(self) -> bool {
        self.left || self.right
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    pub degree: u32,
    pub vertices: Vec<Vertex>,
    pub edges: Vec<Edge>,
    pub truncation: Truncation,
    pub marks: BTreeMap<String, i64>,
}

/// One outgoing non-loop edge as seen from a vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Slot {
    pub to: usize,
    pub out: u32,
    /// Position of the reverse slot in `to`'s list.
    pub back: usize,
}

#[derive(Debug, Clone)]
pub struct Adjacency {
    pub slots: Vec<Vec<Slot>>,
}

impl Graph {
    pub fn new(degree: u32) -> Self {
        Graph {
            degree,
            vertices: Vec::new(),
            edges: Vec::new(),
            truncation: Truncation::default(),
            marks: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, id: i64, color: Color, loop_index: u32) {
        self.vertices.push(Vertex { id, color, loop_index });
    }

    pub fn add_edge(&mut self, u: i64, v: i64, fwd: u32, rev: u32) {
        self.edges.push(Edge { u, v, fwd, rev });
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn id_map(&self) -> HashMap<i64, usize> {
        self.vertices.iter().enumerate().map(|(k, v)| (v.id, k)).collect()
    }

    pub fn position(&self, id: i64) -> Option<usize> {
        self.vertices.iter().position(|v| v.id == id)
    }

    pub fn vertex(&self, id: i64) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    /// Panics on edges naming unknown vertices; parse and the builders never produce them.
    pub fn adjacency(&self) -> Adjacency {
        let ids = self.id_map();
        let mut slots: Vec<Vec<Slot>> = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            let (x, y) = (ids[&e.u], ids[&e.v]);
            let bx = slots[y].len();
            let by = slots[x].len();
            slots[x].push(Slot { to: y, out: e.fwd, back: bx });
            slots[y].push(Slot { to: x, out: e.rev, back: by });
        }
        Adjacency { slots }
    }

    /// Vertex positions from the left end when the graph is a path
    /// (loops allowed). The left end is the endpoint listed first.
    pub fn linear_order(&self) -> Option<Vec<usize>> {
        let n = self.vertices.len();
        if n == 0 {
            return Some(Vec::new());
        }
        if self.edges.len() != n - 1 {
            return None;
        }
        let adj = self.adjacency();
        if adj.slots.iter().any(|s| s.len() > 2) {
            return None;
        }
        let start = if n == 1 { 0 } else { (0..n).find(|&k| adj.slots[k].len() == 1)? };
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while order.len() < n {
            let next = adj.slots[cur].iter().map(|s| s.to).find(|&t| t != prev)?;
            if next == cur {
                return None;
            }
            prev = cur;
            cur = next;
            order.push(cur);
        }
        let mut seen = vec![false; n];
        for &k in &order {
            if seen[k] {
                return None;
            }
            seen[k] = true;
        }
        Some(order)
    }

    /// Vertices sitting at a truncated end: their color is final, their
    /// loop and outgoing indices are not.
    pub fn frontier(&self) -> Vec<bool> {
        let mut out = vec![false; self.vertices.len()];
        if !self.truncation.any() {
            return out;
        }
        if let Some(order) = self.linear_order() {
            if let (Some(&first), Some(&last)) = (order.first(), order.last()) {
                if self.truncation.left {
                    out[first] = true;
                }
                if self.truncation.right {
                    out[last] = true;
                }
            }
        }
        out
    }

    pub fn out_sum(&self, adj: &Adjacency, k: usize) -> u32 {
        self.vertices[k].loop_index + adj.slots[k].iter().map(|s| s.out).sum::<u32>()
    }
}

/// Where a linear graph `small` sits inside the linear graph `big`: the
/// offset of its first vertex and whether it runs backwards. Colors must
/// agree everywhere; loops and edge indices are compared only where neither
/// side is at a truncated end.
pub fn segment_embedding(small: &Graph, big: &Graph) -> Option<(usize, bool)> {
    let (os, ob) = (small.linear_order()?, big.linear_order()?);
    if os.len() > ob.len() || small.degree != big.degree {
        return None;
    }
    let (fs, fb) = (small.frontier(), big.frontier());
    let (adj_s, adj_b) = (small.adjacency(), big.adjacency());
    let link = |adj: &Adjacency, x: usize, y: usize| adj.slots[x].iter().find(|sl| sl.to == y).map(|sl| (sl.out, sl.back));
    let fits = |offset: usize, rev: bool| {
        let image = |p: usize| if rev { ob[offset + os.len() - 1 - p] } else { ob[offset + p] };
        for (p, &x) in os.iter().enumerate() {
            let y = image(p);
            let (vx, vy) = (&small.vertices[x], &big.vertices[y]);
            if vx.color != vy.color {
                return false;
            }
            let firm = !fs[x] && !fb[y];
            if firm && vx.loop_index != vy.loop_index {
                return false;
            }
            if p + 1 < os.len() {
                let (x2, y2) = (os[p + 1], image(p + 1));
                let (Some((o1, b1)), Some((o2, b2))) = (link(&adj_s, x, x2), link(&adj_b, y, y2)) else {
                    return false;
                };
                if firm && o1 != o2 {
                    return false;
                }
                if !fs[x2] && !fb[y2] && b1 != b2 {
                    return false;
                }
            }
        }
        true
    };
    for offset in 0..=ob.len() - os.len() {
        for rev in [false, true] {
            if fits(offset, rev) {
                return Some((offset, rev));
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub enum Violation {
    DegreeMismatch { vertex: i64, expected: u32, actual: u32 },
    ZeroIndexEdge { u: i64, v: i64 },
    TruncationOnNonLinear,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::DegreeMismatch { vertex, expected, actual } => {
                write!(f, "vertex {vertex}: index sum {actual}, expected {expected}")
            }
            Violation::ZeroIndexEdge { u, v } => write!(f, "edge {u}-{v} has a zero index"),
            Violation::TruncationOnNonLinear => write!(f, "truncation flags on a non-linear graph"),
        }
    }
}

/// Empty result means valid.
pub fn validate_graph(g: &Graph) -> Vec<Violation> {
    let mut out = Vec::new();
    if g.truncation.any() && g.linear_order().is_none() {
        out.push(Violation::TruncationOnNonLinear);
    }
    for e in &g.edges {
        if e.fwd == 0 || e.rev == 0 {
            out.push(Violation::ZeroIndexEdge { u: e.u, v: e.v });
        }
    }
    let adj = g.adjacency();
    let frontier = g.frontier();
    for (k, v) in g.vertices.iter().enumerate() {
        let sum = g.out_sum(&adj, k);
        let bad = if frontier[k] { sum > g.degree } else { sum != g.degree };
        if bad {
            out.push(Violation::DegreeMismatch { vertex: v.id, expected: g.degree, actual: sum });
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EigError {
    #[error("line {line}: {msg}")]
    SyntaxError { line: usize, msg: String },
    #[error("duplicate vertex {0}")]
    DuplicateVertex(i64),
    #[error("line {line}: edge names unknown vertex {id}")]
    UnknownVertexInEdge { line: usize, id: i64 },
}

fn syntax(line: usize, msg: impl Into<String>) -> EigError {
    EigError::SyntaxError { line, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, EigError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad {what} `{tok}`")))
}

pub fn parse_eig(text: &str) -> Result<Graph, EigError> {
    let mut g: Option<Graph> = None;
    for (k, raw) in text.lines().enumerate() {
        let line = k + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let mut toks = body.split_whitespace();
        let head = toks.next().unwrap_or("");
        if head == "degree" {
            if g.is_some() {
                return Err(syntax(line, "repeated degree statement"));
            }
            let d: u32 = num(toks.next(), line, "degree")?;
            if d == 0 {
                return Err(syntax(line, "degree must be positive"));
            }
            g = Some(Graph::new(d));
        } else {
            let g = g.as_mut().ok_or_else(|| syntax(line, "first statement must be `degree`"))?;
            match head {
                "truncated" => {
                    let mut any = false;
                    for t in toks.by_ref() {
                        match t {
                            "left" => g.truncation.left = true,
                            "right" => g.truncation.right = true,
                            _ => return Err(syntax(line, format!("unknown end `{t}`"))),
                        }
                        any = true;
                    }
                    if !any {
                        return Err(syntax(line, "truncated needs left and/or right"));
                    }
                }
                "v" => {
                    let id: i64 = num(toks.next(), line, "vertex id")?;
                    let c = toks.next().ok_or_else(|| syntax(line, "missing color"))?;
                    let color = Color::from_letter(c).ok_or_else(|| syntax(line, format!("bad color `{c}`")))?;
                    let mut loop_index = 0;
                    for t in toks.by_ref() {
                        let v = t.strip_prefix("loop=").ok_or_else(|| syntax(line, format!("unexpected `{t}`")))?;
                        loop_index = num(Some(v), line, "loop index")?;
                    }
                    if g.vertices.iter().any(|v| v.id == id) {
                        return Err(EigError::DuplicateVertex(id));
                    }
                    g.add_vertex(id, color, loop_index);
                }
                "e" => {
                    let u: i64 = num(toks.next(), line, "endpoint")?;
                    let v: i64 = num(toks.next(), line, "endpoint")?;
                    let fwd: u32 = num(toks.next(), line, "index")?;
                    let rev: u32 = num(toks.next(), line, "index")?;
                    if toks.next().is_some() {
                        return Err(syntax(line, "trailing tokens"));
                    }
                    if u == v {
                        return Err(syntax(line, "self-edge; use loop= on the vertex"));
                    }
                    for id in [u, v] {
                        if !g.vertices.iter().any(|x| x.id == id) {
                            return Err(EigError::UnknownVertexInEdge { line, id });
                        }
                    }
                    g.add_edge(u, v, fwd, rev);
                }
                "mark" => {
                    let name = toks.next().ok_or_else(|| syntax(line, "missing mark name"))?;
                    let id: i64 = num(toks.next(), line, "vertex id")?;
                    if !g.vertices.iter().any(|x| x.id == id) {
                        return Err(syntax(line, format!("mark on unknown vertex {id}")));
                    }
                    g.marks.insert(name.to_string(), id);
                }
                _ => return Err(syntax(line, format!("unknown statement `{head}`"))),
            }
        }
    }
    g.ok_or_else(|| syntax(1, "missing `degree` statement"))
}

pub fn serialize_eig(g: &Graph) -> String {
    let mut s = format!("degree {}\n", g.degree);
    match (g.truncation.left, g.truncation.right) {
        (true, true) => s.push_str("truncated left right\n"),
        (true, false) => s.push_str("truncated left\n"),
        (false, true) => s.push_str("truncated right\n"),
        _ => {}
    }
    for v in &g.vertices {
        if v.loop_index > 0 {
            s.push_str(&format!("v {} {} loop={}\n", v.id, v.color, v.loop_index));
        } else {
            s.push_str(&format!("v {} {}\n", v.id, v.color));
        }
    }
    for e in &g.edges {
        s.push_str(&format!("e {} {} {} {}\n", e.u, e.v, e.fwd, e.rev));
    }
    for (name, id) in &g.marks {
        s.push_str(&format!("mark {name} {id}\n"));
    }
    s
}

type EdgeTable = HashMap<(usize, usize), Vec<(u32, u32)>>;

fn edge_table(g: &Graph) -> EdgeTable {
    let ids = g.id_map();
    let mut t: EdgeTable = HashMap::new();
    for e in &g.edges {
        let (x, y) = (ids[&e.u], ids[&e.v]);
        t.entry((x, y)).or_default().push((e.fwd, e.rev));
        t.entry((y, x)).or_default().push((e.rev, e.fwd));
    }
    for l in t.values_mut() {
        l.sort_unstable();
    }
    t
}

fn signature(g: &Graph, adj: &Adjacency, k: usize) -> (u32, Vec<(u32, u32)>) {
    let mut s: Vec<(u32, u32)> = adj.slots[k]
        .iter()
        .map(|sl| (sl.out, adj.slots[sl.to][sl.back].out))
        .collect();
    s.sort_unstable();
    (g.vertices[k].loop_index, s)
}

/// Isomorphism comparing vertex colors by letter. Returns the witness as
/// (id in g1, id in g2) pairs.
pub fn graphs_isomorphic(g1: &Graph, g2: &Graph) -> Option<Vec<(i64, i64)>> {
    graphs_isomorphic_by(g1, g2, |a, b| a.color == b.color)
}

/// Isomorphism with a caller-supplied vertex compatibility relation.
pub fn graphs_isomorphic_by<F>(g1: &Graph, g2: &Graph, compat: F) -> Option<Vec<(i64, i64)>>
where
    F: Fn(&Vertex, &Vertex) -> bool,
{
    let n = g1.vertices.len();
    if n != g2.vertices.len() || g1.edges.len() != g2.edges.len() || g1.degree != g2.degree {
        return None;
    }
    let (a1, a2) = (g1.adjacency(), g2.adjacency());
    let (t1, t2) = (edge_table(g1), edge_table(g2));
    let sig2: Vec<_> = (0..n).map(|k| signature(g2, &a2, k)).collect();
    let cands: Vec<Vec<usize>> = (0..n)
        .map(|x| {
            let s = signature(g1, &a1, x);
            (0..n)
                .filter(|&y| sig2[y] == s && compat(&g1.vertices[x], &g2.vertices[y]))
                .collect()
        })
        .collect();
    if cands.iter().any(|c| c.is_empty()) {
        return None;
    }

    // BFS order keeps already-mapped neighbours close, which prunes early.
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut roots: Vec<usize> = (0..n).collect();
    roots.sort_by_key(|&x| cands[x].len());
    for r in roots {
        if seen[r] {
            continue;
        }
        seen[r] = true;
        let mut q = VecDeque::from([r]);
        while let Some(x) = q.pop_front() {
            order.push(x);
            for s in &a1.slots[x] {
                if !seen[s.to] {
                    seen[s.to] = true;
                    q.push_back(s.to);
                }
            }
        }
    }

    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];
    fn go(
        depth: usize,
        order: &[usize],
        cands: &[Vec<usize>],
        map: &mut [usize],
        used: &mut [bool],
        t1: &EdgeTable,
        t2: &EdgeTable,
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let x = order[depth];
        'next: for &y in &cands[x] {
            if used[y] {
                continue;
            }
            for &w in &order[..depth] {
                let e1 = t1.get(&(x, w));
                let e2 = t2.get(&(y, map[w]));
                if e1 != e2 {
                    continue 'next;
                }
            }
            map[x] = y;
            used[y] = true;
            if go(depth + 1, order, cands, map, used, t1, t2) {
                return true;
            }
            used[y] = false;
            map[x] = usize::MAX;
        }
        false
    }
    if go(0, &order, &cands, &mut map, &mut used, &t1, &t2) {
        Some((0..n).map(|x| (g1.vertices[x].id, g2.vertices[map[x]].id)).collect())
    } else {
        None
    }
}

pub fn to_dot(g: &Graph) -> String {
    to_dot_labeled(g, |v| v.id.to_string())
}

/// DOT rendering with custom vertex labels (ball graphs label by class).
pub fn to_dot_labeled<F: Fn(&Vertex) -> String>(g: &Graph, label: F) -> String {
    let mut s = String::from("graph G {\n");
    for v in &g.vertices {
        let style = match v.color {
            Color::A => "fillcolor=white",
            Color::B => "fillcolor=black, fontcolor=white",
        };
        s.push_str(&format!(
            "  \"{}\" [label=\"{}\", style=filled, {}];\n",
            v.id,
            label(v).replace('"', "\\\""),
            style
        ));
    }
    for v in &g.vertices {
        if v.loop_index > 0 {
            s.push_str(&format!("  \"{}\" -- \"{}\" [label=\"{}\"];\n", v.id, v.id, v.loop_index));
        }
    }
    for e in &g.edges {
        s.push_str(&format!("  \"{}\" -- \"{}\" [label=\"{}/{}\"];\n", e.u, e.v, e.fwd, e.rev));
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
pub(crate) mod testgen {
    use super::*;
    use proptest::prelude::*;

    /// Random valid untruncated graphs: a spanning tree plus a few extra
    /// edges, each vertex's leftover degree going into its loop.
    pub fn valid_graph() -> impl Strategy<Value = Graph> {
        (2u32..=5, 1usize..=5, any::<u64>()).prop_map(|(d, n, seed)| random_graph(d, n, seed))
    }

    pub struct XorShift(pub u64);

    impl XorShift {
        pub fn below(&mut self, m: u64) -> u64 {
            self.0 ^= self.0 << 13;
            self.0 ^= self.0 >> 7;
            self.0 ^= self.0 << 17;
            self.0 % m.max(1)
        }
    }

    pub fn random_graph(d: u32, n: usize, seed: u64) -> Graph {
        let mut rng = XorShift(seed | 1);
        let mut g = Graph::new(d);
        let mut room = vec![d; n];
        for k in 0..n {
            let c = if rng.below(2) == 0 { Color::A } else { Color::B };
            g.add_vertex(k as i64, c, 0);
        }
        let mut pairs: Vec<(usize, usize)> = (1..n).map(|y| (rng.below(y as u64) as usize, y)).collect();
        for _ in 0..n {
            let (x, y) = (rng.below(n as u64) as usize, rng.below(n as u64) as usize);
            if x != y {
                pairs.push((x, y));
            }
        }
        for (x, y) in pairs {
            if room[x] == 0 || room[y] == 0 {
                continue;
            }
            let f = 1 + rng.below(room[x] as u64) as u32;
            let r = 1 + rng.below(room[y] as u64) as u32;
            room[x] -= f;
            room[y] -= r;
            g.add_edge(x as i64, y as i64, f, r);
        }
        for (k, v) in g.vertices.iter_mut().enumerate() {
            v.loop_index = room[k];
        }
        g
    }

    pub fn shuffled(g: &Graph, seed: u64) -> Graph {
        let mut h = g.clone();
        let n = h.vertices.len();
        let mut state = seed | 1;
        for k in (1..n).rev() {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let j = (state >> 33) as usize % (k + 1);
            h.vertices.swap(k, j);
        }
        for v in h.vertices.iter_mut() {
            v.id += 100;
        }
        for (k, e) in h.edges.iter_mut().enumerate() {
            e.u += 100;
            e.v += 100;
            if k % 2 == 1 {
                std::mem::swap(&mut e.u, &mut e.v);
                std::mem::swap(&mut e.fwd, &mut e.rev);
            }
        }
        h.edges.reverse();
        h
    }
}

#[cfg(test)]
mod tests {
    use super::testgen::*;
    use super::*;
    use proptest::prelude::*;

    fn path_ab() -> Graph {
        parse_eig("degree 3\nv 0 a loop=2\nv 1 b loop=1\ne 0 1 1 2\n").unwrap()
    }

    #[test]
    fn single_loop_vertex_is_valid() {
        let g = parse_eig("degree 3\nv 0 a loop=3\n").unwrap();
        assert_eq!(g.vertices.len(), 1);
        assert!(validate_graph(&g).is_empty());
    }

    #[test]
    fn short_sums_are_reported_per_vertex() {
        let g = parse_eig("degree 3\nv 0 a\nv 1 b\ne 0 1 1 1\n").unwrap();
        let v = validate_graph(&g);
        assert_eq!(
            v,
            vec![
                Violation::DegreeMismatch { vertex: 0, expected: 3, actual: 1 },
                Violation::DegreeMismatch { vertex: 1, expected: 3, actual: 1 },
            ]
        );
    }

    #[test]
    fn frontier_vertex_may_fall_short() {
        let g = parse_eig("degree 3\ntruncated right\nv 0 b loop=1\nv 1 a\ne 0 1 2 2\n").unwrap();
        assert!(validate_graph(&g).is_empty());
        let g = parse_eig("degree 3\nv 0 b loop=1\nv 1 a\ne 0 1 2 2\n").unwrap();
        assert_eq!(validate_graph(&g).len(), 1);
    }

    #[test]
    fn unknown_vertex_in_edge() {
        let e = parse_eig("degree 3\nv 0 a\nv 1 b\ne 0 9 1 1\n").unwrap_err();
        assert_eq!(e, EigError::UnknownVertexInEdge { line: 4, id: 9 });
        assert_eq!(parse_eig("degree 3\nv 0 a\nv 0 b\n").unwrap_err(), EigError::DuplicateVertex(0));
        assert!(matches!(parse_eig("v 0 a\n"), Err(EigError::SyntaxError { line: 1, .. })));
        assert!(matches!(parse_eig("degree 3\nv 0 c\n"), Err(EigError::SyntaxError { line: 2, .. })));
    }

    #[test]
    fn comments_and_marks_round_trip() {
        let text = "# header\ndegree 3\ntruncated left right\nv 0 a loop=2 # end\nv 1 b loop=1\ne 0 1 1 2\nmark S 0\n";
        let g = parse_eig(text).unwrap();
        assert_eq!(g.marks["S"], 0);
        let again = serialize_eig(&g);
        assert_eq!(parse_eig(&again).unwrap(), g);
        assert_eq!(serialize_eig(&parse_eig(&again).unwrap()), again);
    }

    #[test]
    fn reversed_vertex_list_is_isomorphic() {
        let g = path_ab();
        let mut h = g.clone();
        h.vertices.reverse();
        assert!(graphs_isomorphic(&g, &h).is_some());
        let w = graphs_isomorphic(&g, &g).unwrap();
        assert!(w.iter().all(|(x, y)| x == y));
    }

    #[test]
    fn the_two_level_zero_ball_graphs_differ() {
        let ga = path_ab();
        let gb = parse_eig("degree 3\nv 0 a loop=1\nv 1 b loop=1\ne 0 1 2 2\n").unwrap();
        assert!(graphs_isomorphic(&ga, &gb).is_none());
    }

    #[test]
    fn dot_output() {
        let g = parse_eig("degree 3\nv 0 a loop=3\n").unwrap();
        let d = to_dot(&g);
        assert!(d.contains("\"0\" -- \"0\" [label=\"3\"]"));
        assert_eq!(d.matches(" -- ").count(), 1);
        let gb = parse_eig("degree 3\nv 0 a loop=1\nv 1 b loop=1\ne 0 1 2 2\n").unwrap();
        let d = to_dot(&gb);
        assert!(d.contains("[label=\"2/2\"]"));
        assert_eq!(d.matches("[label=\"1\"]").count(), 2);
        assert!(d.contains("fillcolor=black"));
        assert_eq!(to_dot(&Graph::new(3)), "graph G {\n}\n");
    }

    #[test]
    fn linear_order_starts_at_first_listed_end() {
        let g = parse_eig("degree 3\nv 5 a\nv 2 b\nv 9 a\ne 9 2 1 1\ne 2 5 1 1\n").unwrap();
        let ord: Vec<i64> = g.linear_order().unwrap().iter().map(|&k| g.vertices[k].id).collect();
        assert_eq!(ord, vec![5, 2, 9]);
        let tri = parse_eig("degree 3\nv 0 a\nv 1 a\nv 2 a\ne 0 1 1 1\ne 1 2 1 1\ne 2 0 1 1\n").unwrap();
        assert!(tri.linear_order().is_none());
    }

    proptest! {
        #[test]
        fn total_index_sum(g in valid_graph()) {
            prop_assert!(validate_graph(&g).is_empty());
            let adj = g.adjacency();
            let total: u32 = (0..g.len()).map(|k| g.out_sum(&adj, k)).sum();
            prop_assert_eq!(total, g.len() as u32 * g.degree);
        }

        #[test]
        fn codec_round_trip(g in valid_graph()) {
            let text = serialize_eig(&g);
            prop_assert_eq!(parse_eig(&text).unwrap(), g);
        }

        #[test]
        fn isomorphism_is_an_equivalence(g in valid_graph(), s1 in any::<u64>(), s2 in any::<u64>()) {
            let h = shuffled(&g, s1);
            let k = shuffled(&h, s2);
            prop_assert!(graphs_isomorphic(&g, &g).is_some());
            prop_assert!(graphs_isomorphic(&g, &h).is_some());
            prop_assert!(graphs_isomorphic(&h, &g).is_some());
            prop_assert!(graphs_isomorphic(&h, &k).is_some());
            prop_assert!(graphs_isomorphic(&g, &k).is_some());
        }

        #[test]
        fn witness_preserves_everything(g in valid_graph(), s in any::<u64>()) {
            let h = shuffled(&g, s);
            let w: HashMap<i64, i64> = graphs_isomorphic(&g, &h).unwrap().into_iter().collect();
            for v in &g.vertices {
                let img = h.vertex(w[&v.id]).unwrap();
                prop_assert_eq!(img.color, v.color);
                prop_assert_eq!(img.loop_index, v.loop_index);
            }
            let mut mapped: Vec<(i64, i64, u32, u32)> = g.edges.iter()
                .map(|e| (w[&e.u], w[&e.v], e.fwd, e.rev))
                .map(|(u, v, f, r)| if u < v { (u, v, f, r) } else { (v, u, r, f) })
                .collect();
            let mut target: Vec<(i64, i64, u32, u32)> = h.edges.iter()
                .map(|e| if e.u < e.v { (e.u, e.v, e.fwd, e.rev) } else { (e.v, e.u, e.rev, e.fwd) })
                .collect();
            mapped.sort();
            target.sort();
            prop_assert_eq!(mapped, target);
        }

        #[test]
        fn recoloring_breaks_isomorphism_when_counts_differ(g in valid_graph()) {
            let mut h = g.clone();
            h.vertices[0].color = h.vertices[0].color.other();
            let ca = g.vertices.iter().filter(|v| v.color == Color::A).count();
            let cb = h.vertices.iter().filter(|v| v.color == Color::A).count();
            prop_assert!(ca != cb);
            prop_assert!(graphs_isomorphic(&g, &h).is_none());
        }
    }
}
