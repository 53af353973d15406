//! Ball classes per level, factor complexity and the special chain
//! S_n, A_n, B_n, C_n.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::cover::{ColoredBall, Unfolder};
use crate::eig::{Adjacency, Graph};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum BallsError {
    #[error("not Sturmian at level {level}: {reason}")]
    NotSturmian { level: usize, reason: String },
    #[error("cannot tell A from B at level {0}")]
    AmbiguousAssignment(usize),
    #[error("prefix too short at level {level}: {reason}")]
    HorizonTooShort { level: usize, reason: String },
    #[error("no complete ball in the window at level {0}")]
    EmptyWindow(usize),
    #[error("unknown vertex {0}")]
    UnknownVertex(i64),
    #[error("ball around vertex {vertex} reaches the truncated end at radius {radius}")]
    TruncationHit { vertex: i64, radius: usize },
}

/// Classes of n-balls over the complete vertices of a graph.
#[derive(Debug, Clone)]
pub struct Level {
    pub n: usize,
    /// In order of first appearance along the vertex list.
    pub classes: Vec<ColoredBall>,
    /// Vertex positions realizing each class.
    pub reps: Vec<Vec<usize>>,
    /// Class of each vertex position, `None` when its ball is incomplete.
    pub class_of: Vec<Option<usize>>,
    /// Positions away from the truncated ends (see `Analysis::new`).
    pub window: Vec<usize>,
    pub saturated: bool,
}

impl Level {
    pub fn count(&self) -> usize {
        self.classes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChainLevel {
    pub n: usize,
    pub s: usize,
    pub a: usize,
    pub b: usize,
    /// Needs the special class one level up.
    pub c: Option<usize>,
}

/// Everything computed about one graph up to a fixed level.
pub struct Analysis<'g> {
    pub graph: &'g Graph,
    pub adj: Adjacency,
    pub levels: Vec<Level>,
    pub chain: Vec<ChainLevel>,
    /// Why the chain stops where it does.
    pub chain_stop: Option<BallsError>,
    order_rank: Vec<usize>,
}

fn positions_by_line(g: &Graph) -> Vec<usize> {
    match g.linear_order() {
        Some(order) => {
            let mut rank = vec![0; g.len()];
            for (r, &k) in order.iter().enumerate() {
                rank[k] = r;
            }
            rank
        }
        None => (0..g.len()).collect(),
    }
}

/// Classes, their representatives, and (position, class) pairs.
type Classified = (Vec<ColoredBall>, Vec<Vec<usize>>, Vec<(usize, usize)>);

fn classify(unfolder: &mut Unfolder, positions: &[usize], n: usize) -> Classified {
    let mut index: HashMap<ColoredBall, usize> = HashMap::new();
    let mut classes = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    let mut assigned = Vec::new();
    for &x in positions {
        let ball = unfolder.ball_at(x, n);
        if !ball.complete {
            continue;
        }
        let c = *index.entry(ball).or_insert_with(|| {
            classes.push(ball);
            reps.push(Vec::new());
            classes.len() - 1
        });
        reps[c].push(x);
        assigned.push((x, c));
    }
    (classes, reps, assigned)
}

impl<'g> Analysis<'g> {
    /// Classifies balls for every level 0..=max_level and derives the
    /// special chain as far as the data allows.
    pub fn new(graph: &'g Graph, max_level: usize) -> Self {
        let mut unfolder = Unfolder::new(graph);
        let order_rank = positions_by_line(graph);
        let truncation = graph.truncation;
        let all: Vec<usize> = (0..graph.len()).collect();
        let mut levels = Vec::new();
        for n in 0..=max_level {
            let (classes, reps, assigned) = classify(&mut unfolder, &all, n);
            let mut class_of = vec![None; graph.len()];
            for &(x, c) in &assigned {
                class_of[x] = Some(c);
            }
            let mut complete: Vec<usize> = assigned.iter().map(|&(x, _)| x).collect();
            complete.sort_by_key(|&x| order_rank[x]);
            let cut = n + 1;
            let lo = if truncation.left { cut.min(complete.len()) } else { 0 };
            let hi = if truncation.right { complete.len().saturating_sub(cut) } else { complete.len() };
            let window: Vec<usize> = if lo < hi { complete[lo..hi].to_vec() } else { Vec::new() };
            let seen: BTreeSet<usize> = window.iter().filter_map(|&x| class_of[x]).collect();
            let saturated = !window.is_empty() && seen.len() == classes.len();
            levels.push(Level { n, classes, reps, class_of, window, saturated });
        }
        let mut an = Analysis { graph, adj: graph.adjacency(), levels, chain: Vec::new(), chain_stop: None, order_rank };
        an.build_chain();
        an
    }

    pub fn max_level(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn level(&self, n: usize) -> &Level {
        &self.levels[n]
    }

    /// Class at level n of an (n+1)-class.
    pub fn parent(&self, n: usize, class_up: usize) -> usize {
        let x = self.levels[n + 1].reps[class_up][0];
        self.levels[n].class_of[x].expect("complete at n+1 implies complete at n")
    }

    /// (n+1)-classes restricting to each n-class.
    pub fn extensions(&self, n: usize) -> Vec<Vec<usize>> {
        let mut ext = vec![Vec::new(); self.levels[n].count()];
        for c in 0..self.levels[n + 1].count() {
            ext[self.parent(n, c)].push(c);
        }
        ext
    }

    /// Vertex positions in left-to-right order for linear graphs.
    pub fn rank(&self, x: usize) -> usize {
        self.order_rank[x]
    }

    /// Number of tree neighbours of a lift of `x` whose n-ball is `target`.
    /// Requires the neighbours of `x` to be complete at level n.
    pub fn neighbour_count(&self, x: usize, n: usize, target: usize) -> u32 {
        let lv = &self.levels[n];
        let mut k = 0;
        for s in &self.adj.slots[x] {
            if lv.class_of[s.to] == Some(target) {
                k += s.out;
            }
        }
        if lv.class_of[x] == Some(target) {
            k += self.graph.vertices[x].loop_index;
        }
        k
    }

    fn check_level(&self, n: usize) -> Result<usize, BallsError> {
        for m in [n, n + 1] {
            let lv = &self.levels[m];
            if lv.classes.is_empty() {
                return Err(BallsError::HorizonTooShort { level: m, reason: "no complete balls".into() });
            }
            if !lv.saturated {
                return Err(BallsError::HorizonTooShort { level: m, reason: "window not saturated".into() });
            }
        }
        let b = self.levels[n].count();
        if b != n + 2 {
            return Err(BallsError::NotSturmian { level: n, reason: format!("{b} classes, expected {}", n + 2) });
        }
        let ext = self.extensions(n);
        if let Some(c) = ext.iter().position(|e| e.is_empty()) {
            return Err(BallsError::HorizonTooShort { level: n, reason: format!("class {c} has no extension in the prefix") });
        }
        let doubles: Vec<usize> = (0..b).filter(|&c| ext[c].len() >= 2).collect();
        if doubles.len() != 1 || ext[doubles[0]].len() != 2 {
            return Err(BallsError::NotSturmian {
                level: n,
                reason: format!("{} classes extend in more than one way", doubles.len()),
            });
        }
        Ok(doubles[0])
    }

    fn build_chain(&mut self) {
        let mut chain: Vec<ChainLevel> = Vec::new();
        let mut stop = None;
        for n in 0..self.max_level() {
            let s = match self.check_level(n) {
                Ok(s) => s,
                Err(e) => {
                    stop = Some(e);
                    break;
                }
            };
            let (a, b) = if n == 0 {
                (s, 1 - s)
            } else {
                let prev = chain[n - 1];
                let ext = self.extensions(n - 1);
                let (e1, e2) = (ext[prev.s][0], ext[prev.s][1]);
                match self.assign(n - 1, prev.a, prev.b, e1, e2) {
                    Ok(p) => p,
                    Err(e) => {
                        stop = Some(e);
                        break;
                    }
                }
            };
            chain.push(ChainLevel { n, s, a, b, c: None });
        }
        if stop.is_none() {
            stop = Some(BallsError::HorizonTooShort {
                level: self.max_level(),
                reason: "special class needs the next level".into(),
            });
        }
        for n in 0..chain.len().saturating_sub(1) {
            let s_up = chain[n + 1].s;
            chain[n].c = Some(self.parent(n, s_up));
        }
        self.chain = chain;
        self.chain_stop = stop;
    }

    /// Orders the two extensions (e1, e2) of S_n as (A_{n+1}, B_{n+1}).
    fn assign(&self, n: usize, a: usize, b: usize, e1: usize, e2: usize) -> Result<(usize, usize), BallsError> {
        let up = &self.levels[n + 1];
        let count = |e: usize, target: usize| self.neighbour_count(up.reps[e][0], n, target);
        let first = count(e1, a) > 0 && count(e2, b) > 0;
        let second = count(e2, a) > 0 && count(e1, b) > 0;
        match (first, second) {
            (true, false) => Ok((e1, e2)),
            (false, true) => Ok((e2, e1)),
            (true, true) => match count(e1, a).cmp(&count(e2, a)) {
                std::cmp::Ordering::Greater => Ok((e1, e2)),
                std::cmp::Ordering::Less => Ok((e2, e1)),
                std::cmp::Ordering::Equal => Err(BallsError::AmbiguousAssignment(n + 1)),
            },
            (false, false) => Err(BallsError::AmbiguousAssignment(n + 1)),
        }
    }

    /// Chain entry, or the reason it is unavailable.
    pub fn chain_at(&self, n: usize) -> Result<ChainLevel, BallsError> {
        self.chain.get(n).copied().ok_or_else(|| {
            self.chain_stop.clone().unwrap_or(BallsError::HorizonTooShort { level: n, reason: "beyond horizon".into() })
        })
    }

    /// Chain entry with C_n filled in.
    pub fn full_chain_at(&self, n: usize) -> Result<ChainLevel, BallsError> {
        let c = self.chain_at(n)?;
        if c.c.is_none() {
            return Err(self.chain_at(n + 1).err().unwrap_or(BallsError::HorizonTooShort {
                level: n + 1,
                reason: "central ball needs the next special class".into(),
            }));
        }
        Ok(c)
    }

    /// Table view of one level for reports.
    pub fn table(&self, n: usize) -> BallClassTable {
        let lv = &self.levels[n];
        let ids = |xs: &[usize]| xs.iter().map(|&x| self.graph.vertices[x].id).collect::<Vec<_>>();
        let chain = self.chain.get(n);
        let extensions = if n < self.max_level() { Some(self.extensions(n)) } else { None };
        BallClassTable {
            n,
            b: lv.count(),
            classes: lv.classes.iter().map(|c| c.describe()).collect(),
            representatives: lv.reps.iter().map(|r| ids(r)).collect(),
            special: chain.map(|c| c.s),
            a_class: chain.map(|c| c.a),
            b_class: chain.map(|c| c.b),
            central: chain.and_then(|c| c.c),
            extensions,
            window: ids(&lv.window),
            saturated: lv.saturated,
            skipped: self.graph.len() - lv.reps.iter().map(|r| r.len()).sum::<usize>(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BallClassTable {
    pub n: usize,
    pub b: usize,
    pub classes: Vec<String>,
    pub representatives: Vec<Vec<i64>>,
    #[serde(rename = "S")]
    pub special: Option<usize>,
    #[serde(rename = "A")]
    pub a_class: Option<usize>,
    #[serde(rename = "B")]
    pub b_class: Option<usize>,
    #[serde(rename = "C")]
    pub central: Option<usize>,
    pub extensions: Option<Vec<Vec<usize>>>,
    pub window: Vec<i64>,
    pub saturated: bool,
    /// Vertices whose ball reaches a truncated end.
    pub skipped: usize,
}

/// Classes of n-balls over an explicit window. `saturated` says whether the
/// window already shows every class found anywhere in the graph.
pub fn classify_balls(g: &Graph, window: &[i64], n: usize) -> Result<BallClassTable, BallsError> {
    let ids = g.id_map();
    let mut positions = Vec::new();
    for id in window {
        positions.push(*ids.get(id).ok_or(BallsError::UnknownVertex(*id))?);
    }
    let mut unfolder = Unfolder::new(g);
    let (classes, reps, assigned) = classify(&mut unfolder, &positions, n);
    if classes.is_empty() {
        return Err(BallsError::EmptyWindow(n));
    }
    let all: Vec<usize> = (0..g.len()).collect();
    let (everywhere, _, _) = classify(&mut unfolder, &all, n);
    let mine: BTreeSet<_> = classes.iter().map(|c| c.form).collect();
    let saturated = everywhere.iter().all(|c| mine.contains(&c.form));
    let idv = |xs: &[usize]| xs.iter().map(|&x| g.vertices[x].id).collect::<Vec<_>>();
    Ok(BallClassTable {
        n,
        b: classes.len(),
        classes: classes.iter().map(|c| c.describe()).collect(),
        representatives: reps.iter().map(|r| idv(r)).collect(),
        special: None,
        a_class: None,
        b_class: None,
        central: None,
        extensions: None,
        window: idv(&assigned.iter().map(|&(x, _)| x).collect::<Vec<_>>()),
        saturated,
        skipped: positions.len() - assigned.len(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct Profile {
    pub b: Vec<usize>,
    pub sturmian: bool,
    /// Why the profile stops before the requested level, if it does.
    pub cut: Option<String>,
}

pub fn complexity_profile(g: &Graph, n_max: usize) -> Profile {
    profile_of(&Analysis::new(g, n_max))
}

pub fn profile_of(an: &Analysis) -> Profile {
    let mut b = Vec::new();
    let mut cut = None;
    for lv in &an.levels {
        if lv.classes.is_empty() || !lv.saturated {
            cut = Some(format!("level {}: {}", lv.n, if lv.classes.is_empty() { "no complete balls" } else { "window not saturated" }));
            break;
        }
        b.push(lv.count());
    }
    let sturmian = b.iter().enumerate().all(|(n, &x)| x == n + 2);
    Profile { b, sturmian, cut }
}

pub fn special_chain(g: &Graph, n_max: usize) -> Result<Vec<ChainLevel>, BallsError> {
    let an = Analysis::new(g, n_max + 2);
    let chain: Vec<ChainLevel> = an.chain.iter().take(n_max + 1).copied().collect();
    if chain.len() < n_max + 1 {
        return Err(an.chain_stop.clone().unwrap());
    }
    Ok(chain)
}

/// Levels m <= n_max at which the m-ball around `id` is the special class.
pub fn type_set(g: &Graph, id: i64, n_max: usize) -> Result<BTreeSet<usize>, BallsError> {
    let an = Analysis::new(g, n_max + 1);
    type_set_in(&an, id, n_max)
}

pub fn type_set_in(an: &Analysis, id: i64, n_max: usize) -> Result<BTreeSet<usize>, BallsError> {
    let x = an.graph.position(id).ok_or(BallsError::UnknownVertex(id))?;
    let mut out = BTreeSet::new();
    for m in 0..=n_max {
        let class = an.levels.get(m).and_then(|lv| lv.class_of[x]);
        let Some(class) = class else {
            return Err(BallsError::TruncationHit { vertex: id, radius: m });
        };
        // A graph with no special class at level m has an empty type set there.
        match an.chain.get(m) {
            Some(c) if c.s == class => {
                out.insert(m);
            }
            Some(_) => {}
            None => match &an.chain_stop {
                Some(BallsError::NotSturmian { .. }) | None => {}
                Some(e) => return Err(e.clone()),
            },
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::parse_eig;
    use crate::eig::testgen::valid_graph;
    use proptest::prelude::*;

    const RAY: &str = "degree 3\ntruncated right\n\
        v 0 b loop=1\nv 1 a\nv 2 a\nv 3 b loop=1\nv 4 a loop=2\n\
        e 0 1 2 2\ne 1 2 1 1\ne 2 3 2 1\ne 3 4 1 1\n";

    #[test]
    fn level_zero_and_one_on_a_short_ray() {
        let g = parse_eig(RAY).unwrap();
        let t0 = classify_balls(&g, &[0, 1, 2, 3], 0).unwrap();
        assert_eq!(t0.b, 2);
        assert_eq!(t0.classes, vec!["b", "a"]);
        assert!(t0.saturated);
        let t1 = classify_balls(&g, &[0, 1, 2, 3, 4], 1).unwrap();
        assert_eq!(t1.classes, vec!["(b; {a, a, b})", "(a; {a, b, b})"]);
        assert_eq!(t1.skipped, 1);
        assert!(matches!(classify_balls(&g, &[4], 1), Err(BallsError::EmptyWindow(1))));
    }

    #[test]
    fn monochromatic_graph_is_periodic() {
        let g = parse_eig("degree 3\nv 0 a loop=3\n").unwrap();
        let p = complexity_profile(&g, 5);
        assert_eq!(p.b, vec![1; 6]);
        assert!(!p.sturmian);
        assert!(matches!(special_chain(&g, 2), Err(BallsError::NotSturmian { level: 0, .. })));
        assert!(type_set(&g, 0, 4).unwrap().is_empty());
    }

    proptest! {
        #[test]
        fn enlarging_the_window_never_loses_classes(g in valid_graph(), n in 0usize..4, cut in any::<usize>()) {
            let ids: Vec<i64> = g.vertices.iter().map(|v| v.id).collect();
            let k = 1 + cut % ids.len();
            let small = classify_balls(&g, &ids[..k], n).unwrap();
            let big = classify_balls(&g, &ids, n).unwrap();
            prop_assert!(small.b <= big.b);
            prop_assert!(big.saturated);
        }

        #[test]
        fn restriction_map_is_onto(g in valid_graph(), n in 0usize..4) {
            let an = Analysis::new(&g, n + 1);
            let ext = an.extensions(n);
            prop_assert!(ext.iter().all(|e| !e.is_empty()));
            prop_assert!(an.level(n + 1).count() >= an.level(n).count());
        }
    }
}
