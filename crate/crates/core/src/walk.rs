//! Assembling paths and cycles from pieces.

use crate::graph::{visits_in_cyclic_order, visits_in_order, Cycle, Graph, GraphError, Path, VertexId, VertexSet};

/// Concatenates vertex sequences. Consecutive pieces either share their
/// junction vertex (kept once) or are meant to be joined by an edge.
pub fn join(pieces: &[&[VertexId]]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    for piece in pieces {
        let skip = match (out.last(), piece.first()) {
            (Some(a), Some(b)) if a == b => 1,
            _ => 0,
        };
        out.extend_from_slice(&piece[skip..]);
    }
    out
}

/// Validates `seq` as a path of `g`.
pub fn as_path(g: &Graph, seq: Vec<VertexId>) -> Result<Path, GraphError> {
    let p = Path::new(seq);
    p.validate(g)?;
    Ok(p)
}

/// Validates `seq` as a cycle of `g`; a repeated closing vertex is dropped.
pub fn as_cycle(g: &Graph, mut seq: Vec<VertexId>) -> Result<Cycle, GraphError> {
    if seq.len() > 1 && seq.first() == seq.last() {
        seq.pop();
    }
    let c = Cycle::new(seq)?;
    c.validate(g)?;
    Ok(c)
}

/// A validated cycle that also visits `anchors` in cyclic order.
pub fn as_ordered_cycle(g: &Graph, seq: Vec<VertexId>, anchors: &[VertexId]) -> Result<Cycle, GraphError> {
    let c = as_cycle(g, seq)?;
    if !visits_in_cyclic_order(c.stored(), anchors) {
        return Err(GraphError::NotACycle(format!("anchors {anchors:?} out of order on {:?}", c.stored())));
    }
    Ok(c)
}

/// A validated path that also visits `anchors` in the given order.
pub fn as_ordered_path(g: &Graph, seq: Vec<VertexId>, anchors: &[VertexId]) -> Result<Path, GraphError> {
    let p = as_path(g, seq)?;
    if !visits_in_order(p.vertices(), anchors) {
        return Err(GraphError::NotAPath(format!("anchors {anchors:?} out of order on {:?}", p.vertices())));
    }
    Ok(p)
}

/// Part of the sequence from index of `a` to index of `b`, in that direction.
pub fn segment(seq: &[VertexId], a: VertexId, b: VertexId) -> Vec<VertexId> {
    Path::new(seq.to_vec()).subpath(a, b).map(|p| p.0).unwrap_or_default()
}

/// Sequence with every vertex of `removed` filtered out.
pub fn minus(seq: &[VertexId], removed: &VertexSet) -> Vec<VertexId> {
    seq.iter().copied().filter(|v| !removed.contains(v)).collect()
}

/// Rotates a cyclic sequence so it starts at `v`.
pub fn rotate_to(seq: &[VertexId], v: VertexId) -> Vec<VertexId> {
    match seq.iter().position(|&x| x == v) {
        Some(i) => seq[i..].iter().chain(&seq[..i]).copied().collect(),
        None => seq.to_vec(),
    }
}

/// Keeps only the first occurrence of each vertex and shortcuts the walk
/// back to a simple path by cutting out loops.
pub fn shortcut_loops(seq: &[VertexId]) -> Vec<VertexId> {
    let mut out: Vec<VertexId> = Vec::new();
    for &v in seq {
        if let Some(i) = out.iter().position(|&x| x == v) {
            out.truncate(i + 1);
        } else {
            out.push(v);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn join_merges_shared_junctions() {
        assert_eq!(join(&[&[1, 2, 3], &[3, 4], &[5, 6]]), vec![1, 2, 3, 4, 5, 6]);
        assert_eq!(join(&[&[], &[1], &[1]]), vec![1]);
    }

    #[test]
    fn cycle_assembly() {
        let g = Graph::cycle(5);
        assert!(as_cycle(&g, vec![0, 1, 2, 3, 4, 0]).is_ok());
        assert!(as_cycle(&g, vec![0, 2, 1, 3, 4]).is_err());
        assert!(as_ordered_cycle(&g, vec![0, 1, 2, 3, 4], &[4, 2, 1, 0]).is_ok());
        assert!(as_ordered_cycle(&g, vec![0, 1, 2, 3, 4], &[0, 2, 1, 3]).is_err());
    }

    #[test]
    fn loops_are_cut() {
        assert_eq!(shortcut_loops(&[1, 2, 3, 2, 4]), vec![1, 2, 4]);
        assert_eq!(rotate_to(&[1, 2, 3], 3), vec![3, 1, 2]);
        assert_eq!(segment(&[1, 2, 3, 4], 3, 1), vec![3, 2, 1]);
    }
}
