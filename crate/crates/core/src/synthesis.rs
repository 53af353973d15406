//! Building colorings back from (alpha_k, i_k, beta_k): admissibility of the
//! index sequence, the frame graphs F^A_k / F^B_k, and their direct limit.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::ballgraphs::Side;
use crate::concat::{concat_i, concat_ij, Concat, ConcatError};
use crate::cover::Unfolder;
use crate::eig::{Color, Graph, Truncation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Letter {
    A,
    B,
}

impl Letter {
    pub fn other(self) -> Letter {
        match self {
            Letter::A => Letter::B,
            Letter::B => Letter::A,
        }
    }

    pub fn side(self) -> Side {
        match self {
            Letter::A => Side::A,
            Letter::B => Side::B,
        }
    }

    pub fn from_char(c: char) -> Option<Letter> {
        match c {
            'A' => Some(Letter::A),
            'B' => Some(Letter::B),
            _ => None,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(if *self == Letter::A { "A" } else { "B" })
    }
}

impl Serialize for Letter {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn letters_to_string(ls: &[Letter]) -> String {
    ls.iter().map(|l| l.to_string()).collect()
}

pub fn parse_letters(s: &str) -> Result<Vec<Letter>, String> {
    s.chars()
        .map(|c| Letter::from_char(c).ok_or_else(|| format!("'{c}' is not A or B")))
        .collect()
}

pub(crate) mod letter_string {
    use super::*;

    pub fn serialize<S: Serializer>(ls: &[Letter], s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&letters_to_string(ls))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Letter>, D::Error> {
        let s = String::deserialize(d)?;
        parse_letters(&s).map_err(serde::de::Error::custom)
    }
}

/// One i_k: (i), (i, j) or (i, i', j).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub enum IndexTuple {
    Single(u32),
    Pair(u32, u32),
    Triple(u32, u32, u32),
}

impl IndexTuple {
    pub fn arity(self) -> usize {
        match self {
            IndexTuple::Single(_) => 1,
            IndexTuple::Pair(..) => 2,
            IndexTuple::Triple(..) => 3,
        }
    }

    /// The j entry of a pair or triple.
    pub fn last(self) -> u32 {
        match self {
            IndexTuple::Single(i) => i,
            IndexTuple::Pair(_, j) | IndexTuple::Triple(_, _, j) => j,
        }
    }
}

impl TryFrom<Vec<u32>> for IndexTuple {
    type Error = String;
    fn try_from(v: Vec<u32>) -> Result<Self, String> {
        match v[..] {
            [i] => Ok(IndexTuple::Single(i)),
            [i, j] => Ok(IndexTuple::Pair(i, j)),
            [i, i2, j] => Ok(IndexTuple::Triple(i, i2, j)),
            _ => Err(format!("index tuple of length {} (expected 1, 2 or 3)", v.len())),
        }
    }
}

impl From<IndexTuple> for Vec<u32> {
    fn from(t: IndexTuple) -> Vec<u32> {
        match t {
            IndexTuple::Single(i) => vec![i],
            IndexTuple::Pair(i, j) => vec![i, j],
            IndexTuple::Triple(i, i2, j) => vec![i, i2, j],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Limit {
    /// Both ends of the prefix keep growing.
    #[default]
    Line,
    /// Only the common end grows; the other end is a genuine end.
    Ray,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdmissibleSequence {
    pub d: u32,
    #[serde(rename = "K")]
    pub k: usize,
    #[serde(with = "letter_string")]
    pub alpha: Vec<Letter>,
    pub i: Vec<IndexTuple>,
    #[serde(with = "letter_string")]
    pub beta: Vec<Letter>,
    #[serde(default)]
    pub limit: Limit,
}

/// Indices at the ends of the two frames: non-common end of F^A, of F^B,
/// and the common end.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EndIndices {
    pub a: u32,
    pub b: u32,
    pub c: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub k: usize,
    pub rule: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct AdmissibilityReport {
    pub ok: bool,
    pub failure: Option<Failure>,
    /// End indices for k = K, K+1, ... as far as the sequence is valid.
    pub ends: Vec<EndIndices>,
}

/// Checks every index inequality in order and stops at the first failure.
pub fn validate_alpha_i(seq: &AdmissibleSequence) -> AdmissibilityReport {
    let mut ends = Vec::new();
    let fail = |k: usize, rule: String, ends: Vec<EndIndices>| AdmissibilityReport {
        ok: false,
        failure: Some(Failure { k, rule }),
        ends,
    };
    let d = seq.d;
    if seq.alpha.len() != seq.i.len() {
        return fail(0, format!("alpha has {} letters but there are {} index tuples", seq.alpha.len(), seq.i.len()), ends);
    }
    for (k, &a) in seq.alpha.iter().enumerate() {
        let expected = if k < seq.k {
            Some(Letter::B)
        } else if k == seq.k {
            Some(Letter::A)
        } else {
            None
        };
        if let Some(e) = expected.filter(|&e| e != a) {
            return fail(k, format!("alpha_{k} must be {e} (K = {})", seq.k), ends);
        }
    }
    let mut prev_i = 0u32;
    let mut cur: Option<EndIndices> = None;
    let j0 = seq.i.first().map(|t| t.last()).unwrap_or(0);
    for (k, &t) in seq.i.iter().enumerate() {
        if k < seq.k {
            let IndexTuple::Pair(i, j) = t else {
                return fail(k, format!("i_{k} must be a pair before K"), ends);
            };
            if !(1 <= i && i < d) {
                return fail(k, format!("1 <= i_{k} < d fails (i = {i}, d = {d})"), ends);
            }
            if !(1 <= j && j <= d - prev_i) {
                return fail(k, format!("1 <= j_{k} <= d - i_{} fails (j = {j}, bound {})", k as isize - 1, d - prev_i), ends);
            }
            prev_i = i;
        } else if k == seq.k {
            let e = match t {
                IndexTuple::Triple(i, i2, j) => {
                    if !(1 <= i && i < i2 && i2 <= d) {
                        return fail(k, format!("1 <= i_K < i'_K <= d fails ({i}, {i2})"), ends);
                    }
                    if !(1 <= j && j <= d - prev_i) {
                        return fail(k, format!("1 <= j_K <= d - i_(K-1) fails (j = {j}, bound {})", d - prev_i), ends);
                    }
                    EndIndices { a: i, b: i2, c: j0 }
                }
                IndexTuple::Pair(i, j) => {
                    if k == 0 {
                        return fail(k, "i_K must be a triple when K = 0".into(), ends);
                    }
                    if !(1 <= i && i <= d) {
                        return fail(k, format!("1 <= i_K <= d fails (i = {i})"), ends);
                    }
                    if !(1 <= j && j <= d - prev_i) {
                        return fail(k, format!("1 <= j_K <= d - i_(K-1) fails (j = {j}, bound {})", d - prev_i), ends);
                    }
                    EndIndices { a: i, b: prev_i, c: j0 }
                }
                IndexTuple::Single(_) => return fail(k, "i_K must be a pair or a triple".into(), ends),
            };
            ends.push(e);
            cur = Some(e);
        } else {
            let e = cur.unwrap();
            match t {
                IndexTuple::Single(i) => {
                    if !(1 <= i && i < e.c) {
                        return fail(k, format!("1 <= i_{k} < c-index {} fails (i = {i})", e.c), ends);
                    }
                }
                IndexTuple::Pair(i, j) => {
                    let room = d.saturating_sub(e.c);
                    if !(1 <= i && i <= room) {
                        return fail(k, format!("1 <= i_{k} <= d - c-index = {room} fails (i = {i})"), ends);
                    }
                    if !(1 <= j && j <= room) {
                        return fail(k, format!("1 <= j_{k} <= d - c-index = {room} fails (j = {j})"), ends);
                    }
                }
                IndexTuple::Triple(..) => return fail(k, format!("i_{k} must be a single index or a pair after K"), ends),
            }
            let next = match seq.alpha[k] {
                Letter::A => EndIndices { a: e.a, b: e.c, c: e.b },
                Letter::B => EndIndices { a: e.c, b: e.b, c: e.a },
            };
            ends.push(next);
            cur = Some(next);
        }
    }
    AdmissibilityReport { ok: true, failure: None, ends }
}

/// beta_k is alpha_k or beta_{k-1}; beta_0 is free.
pub fn validate_beta(alpha: &[Letter], beta: &[Letter]) -> bool {
    alpha.len() == beta.len() && (1..beta.len()).all(|k| beta[k] == alpha[k] || beta[k] == beta[k - 1])
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum SynthesisError {
    #[error("sequence is not admissible at k = {k}: {rule}")]
    NotAdmissible { k: usize, rule: String },
    #[error("beta does not satisfy beta_k in {{alpha_k, beta_(k-1)}}")]
    BadBeta,
    #[error("sequence has {have} steps, {want} needed")]
    TooShort { have: usize, want: usize },
    #[error("gluing failed at k = {k}: {source}")]
    Gluing { k: usize, source: ConcatError },
}

/// A frame graph with vertices 0..N-1 along the line.
#[derive(Debug, Clone)]
pub struct Frame {
    pub graph: Graph,
    /// Whether the common end is the last vertex (else the first).
    pub common_last: bool,
    /// Positions of the previous A and B frames inside this one.
    pub from_a: Option<Vec<usize>>,
    pub from_b: Option<Vec<usize>>,
}

impl Frame {
    fn point(d: u32, color: Color) -> Frame {
        let mut graph = Graph::new(d);
        graph.add_vertex(0, color, d);
        Frame { graph, common_last: true, from_a: None, from_b: None }
    }

    pub fn len(&self) -> usize {
        self.graph.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.is_empty()
    }

    fn unchanged(&self, prev: Letter) -> Frame {
        let id: Vec<usize> = (0..self.len()).collect();
        let (from_a, from_b) = if prev == Letter::A { (Some(id), None) } else { (None, Some(id)) };
        Frame { graph: self.graph.clone(), common_last: self.common_last, from_a, from_b }
    }
}

fn reversed(g: &Graph) -> Graph {
    let last = g.len() as i64 - 1;
    let mut r = Graph::new(g.degree);
    for v in g.vertices.iter().rev() {
        r.add_vertex(last - v.id, v.color, v.loop_index);
    }
    for e in g.edges.iter().rev() {
        r.add_edge(last - e.v, last - e.u, e.rev, e.fwd);
    }
    r.truncation = Truncation { left: g.truncation.right, right: g.truncation.left };
    r
}

fn positions(map: &std::collections::BTreeMap<i64, i64>) -> Vec<usize> {
    map.values().map(|&v| v as usize).collect()
}

/// State after step k: both frames and the end indices.
#[derive(Debug, Clone)]
pub struct FrameState {
    pub k: isize,
    pub a: Frame,
    pub b: Frame,
    /// n_k = |F^{alpha_k}_k| - 2; -1 before the first step.
    pub nk: isize,
}

impl FrameState {
    pub fn initial(d: u32) -> FrameState {
        FrameState { k: -1, a: Frame::point(d, Color::A), b: Frame::point(d, Color::B), nk: -1 }
    }

    pub fn frame(&self, l: Letter) -> &Frame {
        if l == Letter::A {
            &self.a
        } else {
            &self.b
        }
    }
}

fn glued_frame(c: Concat, a_len: usize, a_rev: bool, b_len: usize, b_rev: bool, common_last: bool) -> Frame {
    // operands may have been reversed before gluing; map original positions
    let la = positions(&c.left);
    let lb = positions(&c.right);
    let from_a = (0..a_len).map(|p| la[if a_rev { a_len - 1 - p } else { p }]).collect();
    let from_b = (0..b_len).map(|p| lb[if b_rev { b_len - 1 - p } else { p }]).collect();
    Frame { graph: c.graph, common_last, from_a: Some(from_a), from_b: Some(from_b) }
}

/// One frame step with the given k, K, alpha_k and i_k.
pub fn synth_step(state: &FrameState, t: IndexTuple, alpha: Letter, big_k: usize) -> Result<FrameState, SynthesisError> {
    let k = (state.k + 1) as usize;
    let wrap = |source: ConcatError| SynthesisError::Gluing { k, source };
    let (fa, fb) = (&state.a, &state.b);
    let (a, b) = if k < big_k {
        let IndexTuple::Pair(i, j) = t else {
            return Err(SynthesisError::NotAdmissible { k, rule: "pair expected".into() });
        };
        // the new a-vertex goes in front; the b-vertex stays last
        let c = concat_ij(&fa.graph, 0, &fb.graph, 0, i, j).map_err(wrap)?;
        (fa.unchanged(Letter::A), glued_frame(c, fa.len(), false, fb.len(), false, true))
    } else if k == big_k {
        let (i, i2, j) = match t {
            IndexTuple::Triple(i, i2, j) => (i, Some(i2), j),
            IndexTuple::Pair(i, j) => (i, None, j),
            IndexTuple::Single(_) => return Err(SynthesisError::NotAdmissible { k, rule: "pair or triple expected".into() }),
        };
        let ca = concat_ij(&fa.graph, 0, &fb.graph, 0, i, j).map_err(wrap)?;
        let a = glued_frame(ca, fa.len(), false, fb.len(), false, true);
        let b = match i2 {
            Some(i2) => {
                let cb = concat_ij(&fa.graph, 0, &fb.graph, 0, i2, j).map_err(wrap)?;
                glued_frame(cb, fa.len(), false, fb.len(), false, true)
            }
            None => fb.unchanged(Letter::B),
        };
        (a, b)
    } else {
        let ga = if fa.common_last { fa.graph.clone() } else { reversed(&fa.graph) };
        let gb = if fb.common_last { reversed(&fb.graph) } else { fb.graph.clone() };
        let (va, vb) = (ga.len() as i64 - 1, 0);
        let c = match t {
            IndexTuple::Single(i) => concat_i(&ga, va, &gb, vb, i),
            IndexTuple::Pair(i, j) => concat_ij(&ga, va, &gb, vb, i, j),
            IndexTuple::Triple(..) => return Err(SynthesisError::NotAdmissible { k, rule: "single or pair expected".into() }),
        }
        .map_err(wrap)?;
        // the new common end is the far end of the side that did not grow
        let grown = glued_frame(c, fa.len(), !fa.common_last, fb.len(), fb.common_last, alpha == Letter::A);
        let mut kept = state.frame(alpha.other()).unchanged(alpha.other());
        kept.common_last = !kept.common_last;
        if alpha == Letter::A {
            (grown, kept)
        } else {
            (kept, grown)
        }
    };
    let nk = if alpha == Letter::A { a.len() } else { b.len() } as isize - 2;
    Ok(FrameState { k: k as isize, a, b, nk })
}

/// All frame states F_{-1} .. F_{k_max}.
pub fn frames(seq: &AdmissibleSequence, k_max: usize) -> Result<Vec<FrameState>, SynthesisError> {
    if seq.i.len() <= k_max {
        return Err(SynthesisError::TooShort { have: seq.i.len(), want: k_max + 1 });
    }
    let rep = validate_alpha_i(&AdmissibleSequence {
        alpha: seq.alpha[..=k_max].to_vec(),
        i: seq.i[..=k_max].to_vec(),
        beta: seq.beta.clone(),
        ..seq.clone()
    });
    if let Some(f) = rep.failure {
        return Err(SynthesisError::NotAdmissible { k: f.k, rule: f.rule });
    }
    let mut states = vec![FrameState::initial(seq.d)];
    for k in 0..=k_max {
        let next = synth_step(states.last().unwrap(), seq.i[k], seq.alpha[k], seq.k)?;
        states.push(next);
    }
    Ok(states)
}

/// The synthesized prefix F^{beta_{k_max}}_{k_max} and how every earlier
/// F^{beta_k}_k sits inside it.
#[derive(Debug, Clone)]
pub struct Prefix {
    pub graph: Graph,
    pub nk: Vec<usize>,
    /// into_final[k][p]: position in `graph` of vertex p of F^{beta_k}_k.
    pub into_final: Vec<Vec<usize>>,
    pub frames: Vec<FrameState>,
}

pub fn build_prefix(seq: &AdmissibleSequence, k_max: usize) -> Result<Prefix, SynthesisError> {
    if seq.beta.len() <= k_max {
        return Err(SynthesisError::TooShort { have: seq.beta.len(), want: k_max + 1 });
    }
    if !validate_beta(&seq.alpha[..=k_max.min(seq.alpha.len() - 1)], &seq.beta[..=k_max.min(seq.alpha.len() - 1)]) {
        return Err(SynthesisError::BadBeta);
    }
    let states = frames(seq, k_max)?;
    let beta = &seq.beta;
    let last = &states[k_max + 1];
    let top = last.frame(beta[k_max]);
    let n = top.len();
    // ray: the non-common end is genuine and goes to position 0
    let rev = seq.limit == Limit::Ray && !top.common_last;
    let mut graph = if rev { reversed(&top.graph) } else { top.graph.clone() };
    graph.truncation = match seq.limit {
        Limit::Line => Truncation { left: true, right: true },
        Limit::Ray => Truncation { left: false, right: true },
    };
    let mut into_final = vec![Vec::new(); k_max + 1];
    into_final[k_max] = (0..n).map(|p| if rev { n - 1 - p } else { p }).collect();
    for k in (0..k_max).rev() {
        let f = states[k + 2].frame(beta[k + 1]);
        let inner = if beta[k] == Letter::A { &f.from_a } else { &f.from_b };
        let inner = inner.as_ref().expect("admissible beta embeds each frame in the next");
        into_final[k] = inner.iter().map(|&p| into_final[k + 1][p]).collect();
    }
    let nk = states[1..].iter().map(|s| s.nk as usize).collect();
    Ok(Prefix { graph, nk, into_final, frames: states })
}

/// Distinctness and source-agreement of n_k-balls on each glued frame.
/// Returns human-readable failures (empty when all hold).
pub fn frame_ball_checks(states: &[FrameState], alpha: &[Letter]) -> Vec<String> {
    let mut failures = Vec::new();
    for k in 0..states.len() - 1 {
        let (prev, cur) = (&states[k], &states[k + 1]);
        let nk = cur.nk.max(0) as usize;
        let top = cur.frame(alpha[k]);
        let mut unf = Unfolder::new(&top.graph);
        let balls: Vec<_> = (0..top.len()).map(|x| unf.ball_at(x, nk)).collect();
        for x in 0..balls.len() {
            for y in x + 1..balls.len() {
                if balls[x] == balls[y] {
                    failures.push(format!("k = {k}: vertices {x} and {y} share an {nk}-ball"));
                }
            }
        }
        for (src, map) in [(&prev.a, &top.from_a), (&prev.b, &top.from_b)] {
            let Some(map) = map else { continue };
            let mut su = Unfolder::new(&src.graph);
            for (p, &q) in map.iter().enumerate() {
                if su.ball_at(p, nk) != balls[q] {
                    failures.push(format!("k = {k}: vertex {q} differs from its source {p} at radius {nk}"));
                }
            }
        }
    }
    failures
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eig::{graphs_isomorphic, parse_eig, validate_graph};

    pub(crate) fn fibonacci(steps: usize) -> AdmissibleSequence {
        let mut i = vec![IndexTuple::Triple(2, 4, 6)];
        let cycle = [3, 1, 2];
        for k in 1..steps {
            i.push(IndexTuple::Single(cycle[(k - 1) % 3]));
        }
        let alpha: Vec<Letter> = (0..steps).map(|k| if k % 2 == 0 { Letter::A } else { Letter::B }).collect();
        AdmissibleSequence { d: 6, k: 0, beta: alpha.clone(), alpha, i, limit: Limit::Line }
    }

    fn seq(d: u32, k: usize, alpha: &str, i: Vec<IndexTuple>) -> AdmissibleSequence {
        let alpha = parse_letters(alpha).unwrap();
        AdmissibleSequence { d, k, beta: alpha.clone(), alpha, i, limit: Limit::Line }
    }

    #[test]
    fn fibonacci_sequence_is_admissible() {
        let r = validate_alpha_i(&fibonacci(12));
        assert!(r.ok, "{:?}", r.failure);
        // end indices cycle through the permutations of (2, 4, 6)
        assert_eq!(r.ends[0], EndIndices { a: 2, b: 4, c: 6 });
        assert_eq!(r.ends[1], EndIndices { a: 6, b: 4, c: 2 });
    }

    #[test]
    fn inequality_failures_are_located() {
        let bad = seq(3, 0, "A", vec![IndexTuple::Triple(2, 2, 1)]);
        let r = validate_alpha_i(&bad);
        assert_eq!(r.failure.unwrap().k, 0);
        let bad = seq(3, 0, "A", vec![IndexTuple::Pair(1, 2)]);
        assert!(validate_alpha_i(&bad).failure.unwrap().rule.contains("K = 0"));
        let mut f = fibonacci(4);
        f.i[2] = IndexTuple::Single(4);
        let fail = validate_alpha_i(&f).failure.unwrap();
        assert_eq!(fail.k, 2);
    }

    #[test]
    fn beta_recurrence() {
        use Letter::*;
        assert!(validate_beta(&[A, B, A], &[A, B, A]));
        assert!(validate_beta(&[B, B, A], &[B, B, B]));
        assert!(!validate_beta(&[A, A, A], &[A, B, A]));
    }

    #[test]
    fn first_step_gives_the_two_level_zero_graphs() {
        let s = seq(3, 0, "A", vec![IndexTuple::Triple(1, 2, 2)]);
        let st = frames(&s, 0).unwrap();
        let ga = parse_eig("degree 3\nv 0 a loop=2\nv 1 b loop=1\ne 0 1 1 2\n").unwrap();
        let gb = parse_eig("degree 3\nv 0 a loop=1\nv 1 b loop=1\ne 0 1 2 2\n").unwrap();
        assert!(graphs_isomorphic(&st[1].a.graph, &ga).is_some());
        assert!(graphs_isomorphic(&st[1].b.graph, &gb).is_some());
        assert_eq!(st[1].nk, 0);
    }

    #[test]
    fn fibonacci_frames_stay_valid_and_grow() {
        let s = fibonacci(8);
        let st = frames(&s, 7).unwrap();
        let nk: Vec<isize> = st[1..].iter().map(|x| x.nk).collect();
        assert_eq!(nk, vec![0, 1, 2, 4, 7, 12, 20, 33]);
        for x in &st {
            assert!(validate_graph(&x.a.graph).is_empty());
            assert!(validate_graph(&x.b.graph).is_empty());
        }
        // single gluing: |F^alpha_k| = |F^A_{k-1}| + |F^B_{k-1}| - 1
        for k in 2..st.len() {
            let grown = st[k].frame(s.alpha[k - 1]).len();
            assert_eq!(grown, st[k - 1].a.len() + st[k - 1].b.len() - 1);
        }
    }

    #[test]
    fn frame_balls_are_distinct_and_match_sources() {
        let s = fibonacci(6);
        let st = frames(&s, 5).unwrap();
        assert_eq!(frame_ball_checks(&st, &s.alpha), Vec::<String>::new());
    }

    #[test]
    fn prefix_maps_are_consistent() {
        let s = fibonacci(7);
        let p = build_prefix(&s, 6).unwrap();
        for k in 0..6 {
            let f = p.frames[k + 1].frame(s.beta[k]);
            for (pos, &q) in p.into_final[k].iter().enumerate() {
                assert_eq!(f.graph.vertices[pos].color, p.graph.vertices[q].color);
            }
        }
    }

    #[test]
    fn sequence_json_round_trips() {
        let s = fibonacci(4);
        let text = serde_json::to_string(&s).unwrap();
        assert!(text.contains("\"alpha\":\"ABAB\""));
        assert!(text.contains("[2,4,6]"));
        let back: AdmissibleSequence = serde_json::from_str(&text).unwrap();
        assert_eq!(back, s);
        assert!(serde_json::from_str::<AdmissibleSequence>(r#"{"d":3,"K":0,"alpha":"AC","i":[],"beta":""}"#).is_err());
    }
}
