//! Gluing two edge-indexed graphs at end vertices.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::eig::{Graph, Vertex};

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum ConcatError {
    #[error("joining vertices disagree on {0}")]
    EndMismatch(String),
    #[error("index {index} outside 1..={max}")]
    IndexOutOfRange { index: u32, max: u32 },
    #[error("vertex {0} is not an end vertex")]
    NotAnEnd(i64),
    #[error("unknown vertex {0}")]
    UnknownVertex(i64),
}

/// Result of a concatenation. Vertices are renumbered 0.. with the left
/// operand first; the maps send old ids of each operand to new ids.
#[derive(Debug, Clone)]
pub struct Concat {
    pub graph: Graph,
    pub left: BTreeMap<i64, i64>,
    pub right: BTreeMap<i64, i64>,
}

struct End {
    vertex: Vertex,
    /// Out-index of the single non-loop edge, if any.
    out: Option<u32>,
}

fn end_of(g: &Graph, id: i64) -> Result<End, ConcatError> {
    let vertex = g.vertex(id).ok_or(ConcatError::UnknownVertex(id))?.clone();
    let mut outs = g.edges.iter().filter_map(|e| {
        if e.u == id {
            Some(e.fwd)
        } else if e.v == id {
            Some(e.rev)
        } else {
            None
        }
    });
    let out = outs.next();
    if outs.next().is_some() {
        return Err(ConcatError::NotAnEnd(id));
    }
    Ok(End { vertex, out })
}

fn check(index: u32, max: u32, strict: bool) -> Result<(), ConcatError> {
    let ok = index >= 1 && if strict { index < max } else { index <= max };
    if ok {
        Ok(())
    } else {
        Err(ConcatError::IndexOutOfRange { index, max: if strict { max.saturating_sub(1) } else { max } })
    }
}

/// Copies both operands side by side; `merge` says whether V' is folded into V.
fn assemble(g1: &Graph, g2: &Graph, v2: i64, merge_into: Option<i64>) -> Concat {
    let mut graph = Graph::new(g1.degree);
    let mut left = BTreeMap::new();
    let mut right = BTreeMap::new();
    let mut next = 0i64;
    for v in &g1.vertices {
        left.insert(v.id, next);
        graph.add_vertex(next, v.color, v.loop_index);
        next += 1;
    }
    for v in &g2.vertices {
        if let (Some(target), true) = (merge_into, v.id == v2) {
            right.insert(v.id, left[&target]);
            continue;
        }
        right.insert(v.id, next);
        graph.add_vertex(next, v.color, v.loop_index);
        next += 1;
    }
    for e in &g1.edges {
        graph.add_edge(left[&e.u], left[&e.v], e.fwd, e.rev);
    }
    for e in &g2.edges {
        graph.add_edge(right[&e.u], right[&e.v], e.fwd, e.rev);
    }
    Concat { graph, left, right }
}

fn set_loop(g: &mut Graph, id: i64, l: u32) {
    if let Some(v) = g.vertices.iter_mut().find(|v| v.id == id) {
        v.loop_index = l;
    }
}

/// (i)-concatenation: V and V' are identified; the merged vertex keeps the
/// loop and splits the common end index m into i (towards g1) and m - i.
pub fn concat_i(g1: &Graph, v1: i64, g2: &Graph, v2: i64, i: u32) -> Result<Concat, ConcatError> {
    let (e1, e2) = (end_of(g1, v1)?, end_of(g2, v2)?);
    let m1 = e1.out.ok_or(ConcatError::NotAnEnd(v1))?;
    let m2 = e2.out.ok_or(ConcatError::NotAnEnd(v2))?;
    if g1.degree != g2.degree {
        return Err(ConcatError::EndMismatch("degree".into()));
    }
    if m1 != m2 {
        return Err(ConcatError::EndMismatch(format!("edge index ({m1} vs {m2})")));
    }
    if e1.vertex.loop_index != e2.vertex.loop_index {
        return Err(ConcatError::EndMismatch(format!(
            "loop index ({} vs {})",
            e1.vertex.loop_index, e2.vertex.loop_index
        )));
    }
    if e1.vertex.color != e2.vertex.color {
        return Err(ConcatError::EndMismatch("color".into()));
    }
    check(i, m1, true)?;
    let mut c = assemble(g1, g2, v2, Some(v1));
    let joined = c.left[&v1];
    let n1 = g1.edges.len();
    for (k, e) in c.graph.edges.iter_mut().enumerate() {
        let share = if k < n1 { i } else { m1 - i };
        if e.u == joined {
            e.fwd = share;
        } else if e.v == joined {
            e.rev = share;
        }
    }
    Ok(c)
}

/// (i,j)-concatenation: a new edge V -> V' with indices i, j taken out of
/// the two end loops (a loop that reaches 0 disappears).
pub fn concat_ij(g1: &Graph, v1: i64, g2: &Graph, v2: i64, i: u32, j: u32) -> Result<Concat, ConcatError> {
    let (e1, e2) = (end_of(g1, v1)?, end_of(g2, v2)?);
    if g1.degree != g2.degree {
        return Err(ConcatError::EndMismatch("degree".into()));
    }
    check(i, e1.vertex.loop_index, false)?;
    check(j, e2.vertex.loop_index, false)?;
    let mut c = assemble(g1, g2, v2, None);
    let (a, b) = (c.left[&v1], c.right[&v2]);
    set_loop(&mut c.graph, a, e1.vertex.loop_index - i);
    set_loop(&mut c.graph, b, e2.vertex.loop_index - j);
    c.graph.add_edge(a, b, i, j);
    Ok(c)
}
