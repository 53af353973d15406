//! Reading (K, n_k, alpha_k, i_k, beta_k) off an analyzed coloring, with the
//! concatenation identities between consecutive A/B ball graphs checked.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::ballgraphs::{build_gn, build_indexed, detect_cycle, index_of, GraphError, IndexedBallGraph, Side};
use crate::balls::{Analysis, BallsError};
use crate::concat::{concat_i, concat_ij, Concat};
use crate::eig::{graphs_isomorphic, graphs_isomorphic_by, Graph};
use crate::synthesis::{AdmissibleSequence, IndexTuple, Letter, Limit};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum InductionError {
    #[error(transparent)]
    Balls(#[from] BallsError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("ball graph of side {side:?} at level {level} is not the predicted gluing: {detail}")]
    DecompositionMismatch { level: isize, side: Side, detail: String },
    #[error("the class graph has a cycle at level {0}; the induction applies to acyclic colorings")]
    Cyclic(usize),
}

impl From<crate::concat::ConcatError> for InductionError {
    fn from(e: crate::concat::ConcatError) -> Self {
        InductionError::DecompositionMismatch { level: -1, side: Side::Plain, detail: e.to_string() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum StepKind {
    Unchanged,
    Single(u32),
    Pair(u32, u32),
}

#[derive(Debug, Clone, Serialize)]
pub struct SideStep {
    pub kind: StepKind,
    /// Which branch of the gluing rule applied: "1", "2", "3(i)" or "3(ii)".
    pub rule: &'static str,
}

/// How the A and B ball graphs at level n+1 arise from those at level n.
#[derive(Debug, Clone, Serialize)]
pub struct StepReport {
    pub from: isize,
    pub a: SideStep,
    pub b: SideStep,
}

#[derive(Clone, Copy)]
struct Marks {
    s: usize,
    c: usize,
}

/// Class data needed on both levels of a step. Level -1 is the empty ball.
fn marks(an: &Analysis, n: isize) -> Result<Marks, InductionError> {
    if n < 0 {
        return Ok(Marks { s: 0, c: 0 });
    }
    let ch = an.full_chain_at(n as usize)?;
    Ok(Marks { s: ch.s, c: ch.c.unwrap() })
}

fn ball_graph(an: &Analysis, n: isize, side: Side) -> Result<IndexedBallGraph, InductionError> {
    Ok(build_indexed(an, n, side)?)
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Tag {
    A,
    B,
}

/// Predicted graph with a (side, class) label per vertex id.
struct Prediction {
    graph: Graph,
    labels: HashMap<i64, (Tag, usize)>,
}

fn glued(c: Concat) -> Prediction {
    let mut labels = HashMap::new();
    // the right operand is inserted second so a merged vertex keeps its A label
    for (&old, &new) in &c.right {
        labels.insert(new, (Tag::B, old as usize));
    }
    for (&old, &new) in &c.left {
        labels.insert(new, (Tag::A, old as usize));
    }
    Prediction { graph: c.graph, labels }
}

fn unchanged(g: &Graph, tag: Tag) -> Prediction {
    Prediction { graph: g.clone(), labels: g.vertices.iter().map(|v| (v.id, (tag, v.id as usize))).collect() }
}

fn end_loop(g: &Graph, id: i64) -> u32 {
    g.vertex(id).map_or(0, |v| v.loop_index)
}

fn end_out(g: &Graph, id: i64) -> u32 {
    g.edges.iter().find_map(|e| if e.u == id { Some(e.fwd) } else if e.v == id { Some(e.rev) } else { None }).unwrap_or(0)
}

/// Checks one step n -> n+1 for both sides.
pub fn verify_step_decomposition(an: &Analysis, n: isize) -> Result<StepReport, InductionError> {
    let up = (n + 1) as usize;
    if detect_cycle(&build_gn(an, up)).is_some() {
        return Err(InductionError::Cyclic(up));
    }
    let lo = marks(an, n)?;
    let hi_chain = an.full_chain_at(up)?;
    let hi = Marks { s: hi_chain.s, c: hi_chain.c.unwrap() };
    let (ga, gb) = (ball_graph(an, n, Side::A)?, ball_graph(an, n, Side::B)?);
    let (ca, cb) = match (ga.central(), gb.central()) {
        (Some(x), Some(y)) => (x, y),
        _ => {
            return Err(InductionError::DecompositionMismatch {
                level: n,
                side: Side::Plain,
                detail: "central class missing from an A/B graph".into(),
            })
        }
    };

    let mut steps = Vec::new();
    for side in [Side::A, Side::B] {
        let other_ext = if side == Side::A { hi_chain.b } else { hi_chain.a };
        let idx = |x: usize, y: usize| index_of(an, up, x, y, side);
        let (rule, kind) = if other_ext != hi.s && other_ext != hi.c {
            ("1", StepKind::Unchanged)
        } else if lo.s != lo.c && other_ext == hi.c {
            ("2", StepKind::Single(idx(hi.s, hi_chain.a)?))
        } else {
            let rule = if other_ext == hi.s { "3(i)" } else { "3(ii)" };
            (rule, StepKind::Pair(idx(hi_chain.a, hi_chain.b)?, idx(hi_chain.b, hi_chain.a)?))
        };
        let actual = ball_graph(an, n + 1, side)?;
        let predict = |kind: StepKind| -> Result<Prediction, InductionError> {
            Ok(match kind {
                StepKind::Unchanged => unchanged(if side == Side::A { &ga.graph } else { &gb.graph }, if side == Side::A { Tag::A } else { Tag::B }),
                StepKind::Single(i) => glued(concat_i(&ga.graph, ca, &gb.graph, cb, i)?),
                StepKind::Pair(i, j) => glued(concat_ij(&ga.graph, ca, &gb.graph, cb, i, j)?),
            })
        };
        let matches = |p: &Prediction| -> bool {
            graphs_isomorphic_by(&actual.graph, &p.graph, |d, q| {
                let (tag, class) = p.labels[&q.id];
                let dc = d.id as usize;
                if n >= 0 && an.parent(n as usize, dc) != class {
                    return false;
                }
                if dc == hi_chain.a {
                    return tag == Tag::A && class == lo.s;
                }
                if dc == hi_chain.b {
                    return tag == Tag::B && class == lo.s;
                }
                true
            })
            .is_some()
        };
        let ok = predict(kind).map(|p| matches(&p)).unwrap_or(false);
        if !ok {
            // look for any gluing that would have matched, for the report
            let mut found = Vec::new();
            let mut candidates = vec![StepKind::Unchanged];
            for i in 1..end_out(&ga.graph, ca).max(1) {
                candidates.push(StepKind::Single(i));
            }
            for i in 1..=end_loop(&ga.graph, ca) {
                for j in 1..=end_loop(&gb.graph, cb) {
                    candidates.push(StepKind::Pair(i, j));
                }
            }
            for cand in candidates {
                if let Ok(p) = predict(cand) {
                    if matches(&p) {
                        found.push(format!("{cand:?}"));
                    }
                }
            }
            return Err(InductionError::DecompositionMismatch {
                level: n + 1,
                side,
                detail: format!("rule {rule} predicted {kind:?}; matching gluings: [{}]", found.join(", ")),
            });
        }
        steps.push(SideStep { kind, rule });
    }
    let b = steps.pop().unwrap();
    let a = steps.pop().unwrap();
    Ok(StepReport { from: n, a, b })
}

#[derive(Debug, Clone, Serialize)]
pub struct InductionTrace {
    /// First level where the A-side graph grows; `None` if not within the horizon.
    #[serde(rename = "K")]
    pub k: Option<usize>,
    pub nk: Vec<usize>,
    #[serde(serialize_with = "crate::synthesis::letter_string::serialize")]
    pub alpha: Vec<Letter>,
    pub i: Vec<IndexTuple>,
    pub cases: Vec<String>,
    /// Highest level whose ball graphs were checked.
    pub horizon: usize,
    pub steps: Vec<StepReport>,
    /// Disagreements with statements the extraction relies on but does not need.
    pub notes: Vec<String>,
}

/// Induction data up to level `n_max`. Needs balls up to radius n_max + 2.
pub fn extract_trace(g: &Graph, n_max: usize) -> Result<InductionTrace, InductionError> {
    let an = Analysis::new(g, n_max + 2);
    trace_of(&an, n_max)
}

pub fn trace_of(an: &Analysis, n_max: usize) -> Result<InductionTrace, InductionError> {
    for m in 0..=n_max {
        an.full_chain_at(m)?;
        if detect_cycle(&build_gn(an, m)).is_some() {
            return Err(InductionError::Cyclic(m));
        }
    }
    let mut steps = Vec::new();
    for n in -1..n_max as isize {
        steps.push(verify_step_decomposition(an, n)?);
    }
    let mut k_level = None;
    let mut nk = Vec::new();
    let mut alpha = Vec::new();
    let mut tuples = Vec::new();
    let mut cases = Vec::new();
    let mut notes = Vec::new();
    let size = |m: usize, side: Side| build_indexed(an, m as isize, side).map(|g| g.graph.len());
    for (m, st) in steps.iter().enumerate() {
        let a_changed = st.a.kind != StepKind::Unchanged;
        let b_changed = st.b.kind != StepKind::Unchanged;
        let mismatch = |detail: String| InductionError::DecompositionMismatch { level: m as isize, side: Side::Plain, detail };
        match k_level {
            None if !a_changed => {
                let StepKind::Pair(i, j) = st.b.kind else {
                    return Err(mismatch(format!("before K the B side must gain a pair, got {:?}", st.b.kind)));
                };
                let ch = an.full_chain_at(m)?;
                if !(ch.a == ch.s && ch.c == Some(ch.s)) {
                    notes.push(format!("level {m}: expected A = C = S before K"));
                }
                nk.push(m);
                alpha.push(Letter::B);
                tuples.push(IndexTuple::Pair(i, j));
                cases.push("(1)".to_string());
            }
            None => {
                k_level = Some(m);
                let StepKind::Pair(i, j) = st.a.kind else {
                    return Err(mismatch(format!("at K the A side must gain a pair, got {:?}", st.a.kind)));
                };
                nk.push(m);
                alpha.push(Letter::A);
                match st.b.kind {
                    StepKind::Pair(i2, j2) => {
                        if j2 != j {
                            return Err(mismatch(format!("the two pairs at K disagree on j ({j} vs {j2})")));
                        }
                        if i >= i2 {
                            notes.push(format!("level {m}: expected i < i' at K, got {i} >= {i2}"));
                        }
                        tuples.push(IndexTuple::Triple(i, i2, j));
                        cases.push("(2)(a)".to_string());
                    }
                    StepKind::Unchanged => {
                        tuples.push(IndexTuple::Pair(i, j));
                        cases.push("(2)(b)".to_string());
                    }
                    StepKind::Single(_) => return Err(mismatch("single gluing on the B side at K".into())),
                }
            }
            Some(_) => {
                let (side, kind) = match (a_changed, b_changed) {
                    (false, false) => continue,
                    (true, false) => (Letter::A, st.a.kind),
                    (false, true) => (Letter::B, st.b.kind),
                    (true, true) => return Err(mismatch("both sides grow after K".into())),
                };
                let (sa, sb) = (size(m, Side::A)?, size(m, Side::B)?);
                let by_size = if sa >= sb { Letter::A } else { Letter::B };
                if by_size != side {
                    notes.push(format!("level {m}: grown side {side:?} is not the larger one ({sa} vs {sb})"));
                }
                nk.push(m);
                alpha.push(side);
                tuples.push(match kind {
                    StepKind::Single(i) => IndexTuple::Single(i),
                    StepKind::Pair(i, j) => IndexTuple::Pair(i, j),
                    StepKind::Unchanged => unreachable!(),
                });
                cases.push("(3)".to_string());
            }
        }
    }
    Ok(InductionTrace { k: k_level, nk, alpha, i: tuples, cases, horizon: n_max, steps, notes })
}

#[derive(Debug, Clone, Serialize)]
pub struct BetaReport {
    pub vertex: i64,
    #[serde(serialize_with = "crate::synthesis::letter_string::serialize")]
    pub beta: Vec<Letter>,
    /// Each beta_k is alpha_k or beta_{k-1}.
    pub follows_alpha: bool,
    /// The n_k-ball of the vertex lies in the beta_k graph.
    pub in_own_graph: bool,
}

/// beta_{k-1}(t) for every k >= 1 in the trace: the side not grown at n_k
/// if the vertex's n_k-ball is there, the grown side otherwise.
pub fn beta_of_vertex(an: &Analysis, trace: &InductionTrace, id: i64, k_max: usize) -> Result<BetaReport, InductionError> {
    let x = an.graph.position(id).ok_or(BallsError::UnknownVertex(id))?;
    let mut beta = Vec::new();
    let upto = (k_max + 1).min(trace.nk.len().saturating_sub(1));
    for k in 1..=upto {
        let m = trace.nk[k];
        let class = an
            .level(m)
            .class_of[x]
            .ok_or(BallsError::TruncationHit { vertex: id, radius: m })?;
        let other = trace.alpha[k].other();
        let g = build_indexed(an, m as isize, other.side())?;
        beta.push(if g.classes().contains(&class) { other } else { trace.alpha[k] });
    }
    if beta.len() < k_max + 1 {
        return Err(BallsError::HorizonTooShort {
            level: trace.horizon,
            reason: format!("beta up to k = {k_max} needs n_{}", k_max + 1),
        }
        .into());
    }
    let follows_alpha = (1..beta.len()).all(|k| beta[k] == trace.alpha[k] || beta[k] == beta[k - 1]);
    let mut in_own_graph = true;
    for (k, b) in beta.iter().enumerate() {
        let m = trace.nk[k];
        let class = an.level(m).class_of[x];
        let g = build_indexed(an, m as isize, b.side())?;
        if !class.is_some_and(|c| g.classes().contains(&c)) {
            in_own_graph = false;
        }
    }
    Ok(BetaReport { vertex: id, beta, follows_alpha, in_own_graph })
}

/// First k from which two beta sequences agree, if they agree at the end.
pub fn agreement_index(a: &[Letter], b: &[Letter]) -> Option<usize> {
    let n = a.len().min(b.len());
    if n == 0 || a[n - 1] != b[n - 1] {
        return None;
    }
    let mut k = n;
    while k > 0 && a[k - 1] == b[k - 1] {
        k -= 1;
    }
    Some(k)
}

/// The sequence a trace describes, with beta taken from the leftmost vertex
/// whose balls reach the last n_k. Returns the vertex used.
pub fn sequence_from_trace(an: &Analysis, trace: &InductionTrace) -> Result<(AdmissibleSequence, i64), InductionError> {
    let g = an.graph;
    let steps = trace.nk.len();
    let limit = if g.truncation.left != g.truncation.right { Limit::Ray } else { Limit::Line };
    let order = g.linear_order().unwrap_or_else(|| (0..g.len()).collect());
    let last = *trace.nk.last().ok_or(BallsError::HorizonTooShort { level: 0, reason: "empty trace".into() })?;
    let x = order
        .iter()
        .copied()
        .find(|&x| an.level(last).class_of[x].is_some())
        .ok_or(BallsError::EmptyWindow(last))?;
    let id = g.vertices[x].id;
    let mut beta = if steps >= 2 { beta_of_vertex(an, trace, id, steps - 2)?.beta } else { Vec::new() };
    beta.push(beta.last().copied().unwrap_or(trace.alpha[0]));
    let seq = AdmissibleSequence {
        d: g.degree,
        k: trace.k.unwrap_or(steps),
        alpha: trace.alpha.clone(),
        i: trace.i.clone(),
        beta,
        limit,
    };
    Ok((seq, id))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Verdict {
    Bounded,
    UnboundedWithinHorizon,
}

#[derive(Debug, Clone, Serialize)]
pub struct Boundedness {
    pub verdict: Verdict,
    pub cyclic_level: Option<usize>,
    pub cycle: Option<Vec<usize>>,
    /// Side whose graph is constant over the trailing run, if any.
    pub stable_side: Option<Side>,
    /// Length of the longest trailing run of isomorphic graphs per side (A, B).
    pub runs: (usize, usize),
    /// How often the opposite side changed during each side's run (A, B).
    pub growth_during_run: (usize, usize),
    pub required_run: usize,
    pub horizon: usize,
}

pub fn classify_boundedness(g: &Graph, n_max: usize) -> Result<Boundedness, InductionError> {
    let an = Analysis::new(g, n_max + 2);
    boundedness_of(&an, n_max)
}

/// Cyclic, or one side constant (up to isomorphism) over the last
/// max(3, n_max/4) levels, counts as bounded.
pub fn boundedness_of(an: &Analysis, n_max: usize) -> Result<Boundedness, InductionError> {
    let mut cyclic_level = None;
    let mut cycle = None;
    for m in 0..=n_max {
        if let Some(c) = detect_cycle(&build_gn(an, m)) {
            cyclic_level = Some(m);
            cycle = Some(c);
            break;
        }
    }
    let mut runs = [0usize; 2];
    let mut changes: [Vec<usize>; 2] = [Vec::new(), Vec::new()];
    for (slot, side) in [Side::A, Side::B].into_iter().enumerate() {
        let mut prev: Option<Graph> = None;
        let mut run = 0;
        for m in 0..=n_max {
            let cur = build_indexed(an, m as isize, side)?.graph;
            run = match &prev {
                Some(p) if graphs_isomorphic(p, &cur).is_some() => run + 1,
                Some(_) => {
                    changes[slot].push(m);
                    1
                }
                None => 1,
            };
            prev = Some(cur);
        }
        runs[slot] = run;
    }
    // a stable side only counts if the other side kept growing meanwhile;
    // alternating growth leaves long runs on both sides without settling
    let start = |slot: usize| n_max + 1 - runs[slot];
    let growth = [
        changes[1].iter().filter(|&&m| m > start(0)).count(),
        changes[0].iter().filter(|&&m| m > start(1)).count(),
    ];
    let required_run = 3.max(n_max / 4);
    let settled = |slot: usize| runs[slot] >= required_run && growth[slot] >= 2;
    let stable_side = if settled(0) && (!settled(1) || runs[0] >= runs[1]) {
        Some(Side::A)
    } else if settled(1) {
        Some(Side::B)
    } else {
        None
    };
    let verdict = if cyclic_level.is_some() || stable_side.is_some() { Verdict::Bounded } else { Verdict::UnboundedWithinHorizon };
    Ok(Boundedness {
        verdict,
        cyclic_level,
        cycle,
        stable_side,
        runs: (runs[0], runs[1]),
        growth_during_run: (growth[0], growth[1]),
        required_run,
        horizon: n_max,
    })
}

/// Classes of the two A/B graphs at a level, for membership tests.
pub fn side_classes(an: &Analysis, n: usize) -> Result<(BTreeSet<usize>, BTreeSet<usize>), InductionError> {
    Ok((build_indexed(an, n as isize, Side::A)?.classes(), build_indexed(an, n as isize, Side::B)?.classes()))
}
