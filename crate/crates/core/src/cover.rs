//! Colored balls of the universal cover, hash-consed into canonical forms.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Mutex, OnceLock};

use thiserror::Error;

use crate::eig::{Adjacency, Color, Graph};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CoverError {
    #[error("unknown vertex {0}")]
    UnknownVertex(i64),
    #[error("cannot restrict a radius-{radius} ball to radius {requested}")]
    RadiusTooLarge { radius: usize, requested: usize },
    #[error("lifting reached the truncated end at vertex {vertex} (depth {depth})")]
    TruncationHit { vertex: i64, depth: usize },
}

/// Handle of an interned rooted colored tree shape.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FormId(u32);

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum Kids {
    /// Child forms with multiplicity, sorted by id.
    List(Vec<(FormId, u32)>),
    /// Unfolding stopped at a truncated end.
    Cut,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Node {
    color: Color,
    kids: Kids,
}

#[derive(Default)]
struct Interner {
    nodes: Vec<Node>,
    index: HashMap<Node, FormId>,
    restricted: HashMap<(FormId, usize), FormId>,
    complete: HashMap<FormId, bool>,
    size: HashMap<FormId, u64>,
}

impl Interner {
    fn intern(&mut self, node: Node) -> FormId {
        if let Some(&id) = self.index.get(&node) {
            return id;
        }
        let id = FormId(self.nodes.len() as u32);
        self.nodes.push(node.clone());
        self.index.insert(node, id);
        id
    }

    fn restrict(&mut self, f: FormId, m: usize) -> FormId {
        if let Some(&r) = self.restricted.get(&(f, m)) {
            return r;
        }
        let node = self.nodes[f.0 as usize].clone();
        let out = if m == 0 {
            self.intern(Node { color: node.color, kids: Kids::List(Vec::new()) })
        } else {
            match node.kids {
                Kids::Cut => f,
                Kids::List(kids) => {
                    let mut merged: Vec<(FormId, u32)> =
                        kids.iter().map(|&(c, k)| (self.restrict(c, m - 1), k)).collect();
                    let kids = merge(&mut merged);
                    self.intern(Node { color: node.color, kids: Kids::List(kids) })
                }
            }
        };
        self.restricted.insert((f, m), out);
        out
    }

    fn is_complete(&mut self, f: FormId) -> bool {
        if let Some(&c) = self.complete.get(&f) {
            return c;
        }
        let c = match self.nodes[f.0 as usize].kids.clone() {
            Kids::Cut => false,
            Kids::List(kids) => kids.iter().all(|&(k, _)| self.is_complete(k)),
        };
        self.complete.insert(f, c);
        c
    }

    /// Number of tree nodes, saturating.
    fn size(&mut self, f: FormId) -> u64 {
        if let Some(&s) = self.size.get(&f) {
            return s;
        }
        let s = match self.nodes[f.0 as usize].kids.clone() {
            Kids::Cut => 1,
            Kids::List(kids) => kids
                .iter()
                .fold(1u64, |acc, &(k, n)| acc.saturating_add(self.size(k).saturating_mul(n as u64))),
        };
        self.size.insert(f, s);
        s
    }

    fn render(&self, f: FormId, memo: &mut HashMap<FormId, String>) -> String {
        if let Some(s) = memo.get(&f) {
            return s.clone();
        }
        let node = &self.nodes[f.0 as usize];
        let s = match &node.kids {
            Kids::Cut => format!("({}; ...)", node.color),
            Kids::List(kids) if kids.is_empty() => node.color.to_string(),
            Kids::List(kids) => {
                let mut parts = Vec::new();
                for &(k, n) in kids {
                    let r = self.render(k, memo);
                    for _ in 0..n {
                        parts.push(r.clone());
                    }
                }
                parts.sort();
                format!("({}; {{{}}})", node.color, parts.join(", "))
            }
        };
        memo.insert(f, s.clone());
        s
    }
}

fn merge(kids: &mut [(FormId, u32)]) -> Vec<(FormId, u32)> {
    kids.sort_unstable();
    let mut out: Vec<(FormId, u32)> = Vec::with_capacity(kids.len());
    for &(f, n) in kids.iter() {
        match out.last_mut() {
            Some(last) if last.0 == f => last.1 += n,
            _ => out.push((f, n)),
        }
    }
    out
}

fn interner() -> &'static Mutex<Interner> {
    static CELL: OnceLock<Mutex<Interner>> = OnceLock::new();
    CELL.get_or_init(|| Mutex::new(Interner::default()))
}

fn with<R>(f: impl FnOnce(&mut Interner) -> R) -> R {
    let mut guard = interner().lock().unwrap_or_else(|e| e.into_inner());
    f(&mut guard)
}

/// Class of an n-ball: two balls are the same class iff they compare equal.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ColoredBall {
    pub radius: usize,
    pub color: Color,
    pub form: FormId,
    pub complete: bool,
}

/// Rendered strings longer than this are replaced by a size summary.
const RENDER_LIMIT: u64 = 400;

impl ColoredBall {
    /// Full canonical text `(a; {child, ...})`; exponential in the radius.
    pub fn render(&self) -> String {
        with(|i| i.render(self.form, &mut HashMap::new()))
    }

    /// Canonical text when small, otherwise a stable summary.
    pub fn describe(&self) -> String {
        let size = with(|i| i.size(self.form));
        if size <= RENDER_LIMIT {
            self.render()
        } else {
            format!("<{}-ball, {} nodes>", self.color, size)
        }
    }

    /// Root's children with multiplicities (empty for leaves and cut roots).
    pub fn children(&self) -> Vec<(ColoredBall, u32)> {
        with(|i| match i.nodes[self.form.0 as usize].kids.clone() {
            Kids::Cut => Vec::new(),
            Kids::List(kids) => kids
                .into_iter()
                .map(|(f, n)| {
                    let color = i.nodes[f.0 as usize].color;
                    let complete = i.is_complete(f);
                    (ColoredBall { radius: self.radius.saturating_sub(1), color, form: f, complete }, n)
                })
                .collect(),
        })
    }
}

impl fmt::Display for ColoredBall {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.describe())
    }
}

pub fn restrict_ball(ball: &ColoredBall, m: usize) -> Result<ColoredBall, CoverError> {
    if m > ball.radius {
        return Err(CoverError::RadiusTooLarge { radius: ball.radius, requested: m });
    }
    let (form, complete) = with(|i| {
        let f = i.restrict(ball.form, m);
        (f, i.is_complete(f))
    });
    Ok(ColoredBall { radius: m, color: ball.color, form, complete })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Arrival {
    Root,
    Edge(usize),
    Loop,
}

/// Unfolds balls of one graph, memoized on (vertex, arrival, depth).
pub struct Unfolder<'g> {
    graph: &'g Graph,
    adj: Adjacency,
    frontier: Vec<bool>,
    ids: HashMap<i64, usize>,
    memo: HashMap<(usize, Arrival, usize), (FormId, bool)>,
}

impl<'g> Unfolder<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Unfolder {
            graph,
            adj: graph.adjacency(),
            frontier: graph.frontier(),
            ids: graph.id_map(),
            memo: HashMap::new(),
        }
    }

    pub fn graph(&self) -> &Graph {
        self.graph
    }

    pub fn ball(&mut self, id: i64, n: usize) -> Result<ColoredBall, CoverError> {
        let x = *self.ids.get(&id).ok_or(CoverError::UnknownVertex(id))?;
        Ok(self.ball_at(x, n))
    }

    /// Same as `ball` but by vertex position.
    pub fn ball_at(&mut self, x: usize, n: usize) -> ColoredBall {
        let (form, complete) = self.node(x, Arrival::Root, n);
        ColoredBall { radius: n, color: self.graph.vertices[x].color, form, complete }
    }

    fn node(&mut self, x: usize, arrival: Arrival, depth: usize) -> (FormId, bool) {
        if let Some(&r) = self.memo.get(&(x, arrival, depth)) {
            return r;
        }
        let color = self.graph.vertices[x].color;
        let r = if depth == 0 {
            (with(|i| i.intern(Node { color, kids: Kids::List(Vec::new()) })), true)
        } else if self.frontier[x] {
            (with(|i| i.intern(Node { color, kids: Kids::Cut })), false)
        } else {
            let mut kids = Vec::new();
            let mut complete = true;
            for s in 0..self.adj.slots[x].len() {
                let slot = self.adj.slots[x][s];
                let count = slot.out - u32::from(arrival == Arrival::Edge(s));
                if count > 0 {
                    let (f, c) = self.node(slot.to, Arrival::Edge(slot.back), depth - 1);
                    complete &= c;
                    kids.push((f, count));
                }
            }
            let loops = self.graph.vertices[x].loop_index.saturating_sub(u32::from(arrival == Arrival::Loop));
            if loops > 0 {
                let (f, c) = self.node(x, Arrival::Loop, depth - 1);
                complete &= c;
                kids.push((f, loops));
            }
            let kids = merge(&mut kids);
            (with(|i| i.intern(Node { color, kids: Kids::List(kids) })), complete)
        };
        self.memo.insert((x, arrival, depth), r);
        r
    }
}

pub fn unfold_ball(g: &Graph, id: i64, n: usize) -> Result<ColoredBall, CoverError> {
    Unfolder::new(g).ball(id, n)
}

#[derive(Debug, Clone)]
pub struct CoverNode {
    pub color: Color,
    /// Id of the graph vertex this tree vertex lies over.
    pub over: i64,
    pub parent: Option<usize>,
    pub children: Vec<usize>,
}

/// Explicit finite piece of the universal cover, root at index 0.
#[derive(Debug, Clone)]
pub struct CoverTree {
    pub nodes: Vec<CoverNode>,
}

impl CoverTree {
    /// AHU-style canonical string, computed directly on the explicit tree.
    pub fn canonical(&self) -> String {
        self.canon(0)
    }

    fn canon(&self, k: usize) -> String {
        let node = &self.nodes[k];
        if node.children.is_empty() {
            return node.color.to_string();
        }
        let mut parts: Vec<String> = node.children.iter().map(|&c| self.canon(c)).collect();
        parts.sort();
        format!("({}; {{{}}})", node.color, parts.join(", "))
    }
}

/// Breadth-first lifting of the radius-`r` ball around `id`, one tree
/// vertex at a time. Exponential; meant as an oracle for small radii.
pub fn brute_force_cover(g: &Graph, id: i64, r: usize) -> Result<CoverTree, CoverError> {
    let ids = g.id_map();
    let root = *ids.get(&id).ok_or(CoverError::UnknownVertex(id))?;
    let adj = g.adjacency();
    let frontier = g.frontier();
    let mut nodes = vec![CoverNode { color: g.vertices[root].color, over: id, parent: None, children: Vec::new() }];
    // (tree node, graph vertex, how we got here, depth)
    let mut queue = VecDeque::from([(0usize, root, Arrival::Root, 0usize)]);
    while let Some((t, x, arrival, depth)) = queue.pop_front() {
        if depth == r {
            continue;
        }
        if frontier[x] {
            return Err(CoverError::TruncationHit { vertex: g.vertices[x].id, depth });
        }
        let mut lifts = Vec::new();
        for (s, slot) in adj.slots[x].iter().enumerate() {
            let skip = usize::from(arrival == Arrival::Edge(s));
            for _ in skip..slot.out as usize {
                lifts.push((slot.to, Arrival::Edge(slot.back)));
            }
        }
        let skip = usize::from(arrival == Arrival::Loop);
        for _ in skip..g.vertices[x].loop_index as usize {
            lifts.push((x, Arrival::Loop));
        }
        for (y, arr) in lifts {
            let c = nodes.len();
            nodes.push(CoverNode { color: g.vertices[y].color, over: g.vertices[y].id, parent: Some(t), children: Vec::new() });
            nodes[t].children.push(c);
            queue.push_back((c, y, arr, depth + 1));
        }
    }
    Ok(CoverTree { nodes })
}
