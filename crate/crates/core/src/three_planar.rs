//! 3-planar structures: reduced graphs, witnesses, search and minimality.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{neighborhood_of_set, Graph, GraphError, VertexId, VertexSet};
use crate::planarity::{check_rotation, embed_with_constraints, Embedding};

pub use crate::planarity::facial_cycles;

pub const WITNESS_SCHEMA: &str = "kordered/three-planar-witness/v1";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ThreePlanarError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("part {index} has {count} neighbors")]
    TooManyNeighbors { index: usize, count: usize },
    #[error("parts {0} and {1} overlap")]
    Overlap(usize, usize),
    #[error("part {0} meets the neighborhood of part {1}")]
    NeighborhoodClash(usize, usize),
    #[error("designated vertex {0} lies in a part")]
    BoundaryInPart(VertexId),
    #[error("part {0} is empty")]
    EmptyPart(usize),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThreePlanarWitness {
    pub schema: String,
    /// Parts as sorted id lists.
    pub parts: Vec<Vec<VertexId>>,
    pub boundary: Vec<VertexId>,
    pub drawing: Embedding,
}

impl ThreePlanarWitness {
    pub fn part_sets(&self) -> Vec<VertexSet> {
        self.parts.iter().map(|p| p.iter().copied().collect()).collect()
    }

    pub fn part_containing(&self, v: VertexId) -> Option<usize> {
        self.parts.iter().position(|p| p.contains(&v))
    }
}

/// Checks that parts are nonempty, pairwise disjoint, have at most three
/// neighbors, miss each other's neighborhoods and avoid the boundary.
/// Returns the neighborhoods.
pub fn check_parts(g: &Graph, parts: &[VertexSet], boundary: &[VertexId]) -> Result<Vec<VertexSet>, ThreePlanarError> {
    let mut hoods = Vec::with_capacity(parts.len());
    for (i, a) in parts.iter().enumerate() {
        if a.is_empty() {
            return Err(ThreePlanarError::EmptyPart(i));
        }
        let n = neighborhood_of_set(g, a)?;
        if n.len() > 3 {
            return Err(ThreePlanarError::TooManyNeighbors { index: i, count: n.len() });
        }
        hoods.push(n);
    }
    for i in 0..parts.len() {
        for j in 0..parts.len() {
            if i == j {
                continue;
            }
            if i < j && !parts[i].is_disjoint(&parts[j]) {
                return Err(ThreePlanarError::Overlap(i, j));
            }
            if !hoods[i].is_disjoint(&parts[j]) {
                return Err(ThreePlanarError::NeighborhoodClash(j, i));
            }
        }
    }
    for &b in boundary {
        g.check_vertex(b)?;
        if parts.iter().any(|a| a.contains(&b)) {
            return Err(ThreePlanarError::BoundaryInPart(b));
        }
    }
    Ok(hoods)
}

/// `p(G, 𝒜)`: parts deleted, their neighborhoods completed to cliques.
/// Vertex ids are kept.
pub fn reduce_graph(g: &Graph, parts: &[VertexSet]) -> Result<Graph, ThreePlanarError> {
    let hoods = check_parts(g, parts, &[])?;
    Ok(reduce_unchecked(g, parts, &hoods))
}

fn reduce_unchecked(g: &Graph, parts: &[VertexSet], hoods: &[VertexSet]) -> Graph {
    let mut p = g.without(parts.iter().flatten().copied());
    for n in hoods {
        let n: Vec<VertexId> = n.iter().copied().collect();
        for i in 0..n.len() {
            for j in i + 1..n.len() {
                p.add_edge(n[i], n[j]).expect("neighbors are present");
            }
        }
    }
    p
}

fn triangles(hoods: &[VertexSet]) -> Vec<[VertexId; 3]> {
    hoods
        .iter()
        .filter(|n| n.len() == 3)
        .map(|n| {
            let v: Vec<VertexId> = n.iter().copied().collect();
            [v[0], v[1], v[2]]
        })
        .collect()
}

/// Draws `p(G, 𝒜)` with the boundary constraint and facial triangles, if
/// such a drawing exists.
pub fn draw(g: &Graph, parts: &[VertexSet], boundary: &[VertexId]) -> Result<Option<ThreePlanarWitness>, ThreePlanarError> {
    let hoods = check_parts(g, parts, boundary)?;
    let p = reduce_unchecked(g, parts, &hoods);
    let Some(drawing) = embed_with_constraints(&p, boundary, &triangles(&hoods)) else {
        return Ok(None);
    };
    let mut sorted: Vec<Vec<VertexId>> = parts.iter().map(|a| a.iter().copied().collect()).collect();
    sorted.sort();
    Ok(Some(ThreePlanarWitness { schema: WITNESS_SCHEMA.into(), parts: sorted, boundary: boundary.to_vec(), drawing }))
}

/// All conditions of 3-planarity, checked on the drawing as given.
pub fn verify_witness(g: &Graph, w: &ThreePlanarWitness) -> bool {
    let parts = w.part_sets();
    let Ok(hoods) = check_parts(g, &parts, &w.boundary) else { return false };
    let p = reduce_unchecked(g, &parts, &hoods);
    let Some(hub) = w.drawing.hub else { return false };
    if hub != p.id_bound() {
        return false;
    }
    let mut plus = p.clone();
    plus.add_vertex();
    for &b in &w.boundary {
        if plus.add_edge(hub, b).is_err() {
            return false;
        }
    }
    if check_rotation(&plus, &w.drawing.rotation).is_err() || !w.drawing.boundary_matches(&w.boundary) {
        return false;
    }
    triangles(&hoods).iter().all(|t| w.drawing.is_facial_triangle(t))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessSearch {
    Found(Box<ThreePlanarWitness>),
    /// The search space was exhausted: no witness exists.
    Absent,
    /// The budget ran out before the search space was covered.
    BudgetExhausted,
}

impl WitnessSearch {
    pub fn witness(&self) -> Option<&ThreePlanarWitness> {
        match self {
            WitnessSearch::Found(w) => Some(w),
            _ => None,
        }
    }
}

/// Largest number of free vertices whose subsets are enumerated as parts.
pub const MAX_FREE_VERTICES: usize = 16;

/// Nonempty subsets of `free` with at most three neighbors, by size then
/// lexicographically.
fn candidate_parts(g: &Graph, free: &[VertexId]) -> Vec<(VertexSet, VertexSet)> {
    let mut out = Vec::new();
    for mask in 1u32..(1u32 << free.len()) {
        let a: VertexSet = (0..free.len()).filter(|i| mask >> i & 1 == 1).map(|i| free[i]).collect();
        let n = neighborhood_of_set(g, &a).expect("free vertices are present");
        if n.len() <= 3 {
            out.push((a, n));
        }
    }
    out.sort_by(|x, y| x.0.len().cmp(&y.0.len()).then_with(|| x.0.cmp(&y.0)));
    out
}

/// Enumerates collections of `k` compatible candidates in index order and
/// calls `visit` on each; stops when `visit` returns true or the budget runs
/// out. Returns `Some(true)` on a hit, `Some(false)` when exhausted.
fn for_each_collection(
    cands: &[(VertexSet, VertexSet)],
    k: usize,
    budget: &mut usize,
    visit: &mut dyn FnMut(&[usize]) -> bool,
) -> Option<bool> {
    fn rec(
        cands: &[(VertexSet, VertexSet)],
        k: usize,
        start: usize,
        chosen: &mut Vec<usize>,
        budget: &mut usize,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> Option<bool> {
        if chosen.len() == k {
            if *budget == 0 {
                return None;
            }
            *budget -= 1;
            return Some(visit(chosen));
        }
        for i in start..cands.len() {
            let ok = chosen.iter().all(|&j| {
                cands[i].0.is_disjoint(&cands[j].0) && cands[i].1.is_disjoint(&cands[j].0) && cands[j].1.is_disjoint(&cands[i].0)
            });
            if !ok {
                continue;
            }
            chosen.push(i);
            let r = rec(cands, k, i + 1, chosen, budget, visit);
            chosen.pop();
            match r {
                Some(false) => {}
                other => return other,
            }
        }
        Some(false)
    }
    rec(cands, k, 0, &mut Vec::new(), budget, visit)
}

/// Searches collections `𝒜 = ∅` first, then by number of parts. `budget`
/// bounds the number of collections whose drawing is attempted.
pub fn find_witness(g: &Graph, order: &[VertexId], budget: usize) -> WitnessSearch {
    find_witness_filtered(g, order, budget, &|_| true)
}

fn find_witness_filtered(g: &Graph, order: &[VertexId], budget: usize, accept: &dyn Fn(&[VertexSet]) -> bool) -> WitnessSearch {
    let mut budget = budget;
    if budget == 0 {
        return WitnessSearch::BudgetExhausted;
    }
    if accept(&[]) {
        budget -= 1;
        if let Ok(Some(w)) = draw(g, &[], order) {
            return WitnessSearch::Found(Box::new(w));
        }
    }
    let free: Vec<VertexId> = g.vertices().filter(|v| !order.contains(v)).collect();
    if free.len() > MAX_FREE_VERTICES {
        return WitnessSearch::BudgetExhausted;
    }
    let cands = candidate_parts(g, &free);
    for k in 1..=free.len() {
        let mut found = None;
        let r = for_each_collection(&cands, k, &mut budget, &mut |idx| {
            let parts: Vec<VertexSet> = idx.iter().map(|&i| cands[i].0.clone()).collect();
            if !accept(&parts) {
                return false;
            }
            if let Ok(Some(w)) = draw(g, &parts, order) {
                found = Some(w);
                return true;
            }
            false
        });
        match r {
            None => return WitnessSearch::BudgetExhausted,
            Some(true) => return WitnessSearch::Found(Box::new(found.expect("hit recorded"))),
            Some(false) => {}
        }
    }
    WitnessSearch::Absent
}

/// Whether part `a` admits a finer 3-planar structure; returns it if so.
fn refine_part(g: &Graph, a: &VertexSet, budget: usize) -> Option<Vec<VertexSet>> {
    let n = neighborhood_of_set(g, a).ok()?;
    let keep: VertexSet = a.union(&n).copied().collect();
    let h = g.induced(&keep);
    let order: Vec<VertexId> = n.iter().copied().collect();
    let whole = a.clone();
    let accept = move |parts: &[VertexSet]| !(parts.len() == 1 && parts[0] == whole);
    match find_witness_filtered(&h, &order, budget, &accept) {
        WitnessSearch::Found(w) => Some(w.part_sets()),
        _ => None,
    }
}

/// Replaces non-minimal parts by finer structures until every part is
/// minimal (or the per-part budget is exhausted).
pub fn minimalize_witness(g: &Graph, w: &ThreePlanarWitness, budget: usize) -> ThreePlanarWitness {
    let mut current = w.clone();
    'outer: loop {
        let parts = current.part_sets();
        for (i, a) in parts.iter().enumerate() {
            let Some(finer) = refine_part(g, a, budget) else { continue };
            let mut next: Vec<VertexSet> = parts.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, p)| p.clone()).collect();
            next.extend(finer);
            if let Ok(Some(better)) = draw(g, &next, &current.boundary) {
                current = better;
                continue 'outer;
            }
        }
        return current;
    }
}

/// Whether every part of the witness is minimal within `budget`.
pub fn is_minimal(g: &Graph, w: &ThreePlanarWitness, budget: usize) -> bool {
    w.part_sets().iter().all(|a| refine_part(g, a, budget).is_none())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::embed;

    fn set(v: &[VertexId]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn reduce_examples() {
        let mut g = Graph::complete(3);
        let x = g.add_vertex();
        for v in 0..3 {
            g.add_edge(x, v).unwrap();
        }
        let p = reduce_graph(&g, &[set(&[x])]).unwrap();
        assert_eq!((p.order(), p.size()), (3, 3));

        let p = reduce_graph(&Graph::path(3), &[set(&[1])]).unwrap();
        assert_eq!((p.order(), p.size()), (2, 1));
        assert!(p.has_edge(0, 2));

        let g = Graph::cycle(5);
        assert_eq!(reduce_graph(&g, &[]).unwrap(), g);

        let star = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
        assert!(matches!(reduce_graph(&star, &[set(&[0])]), Err(ThreePlanarError::TooManyNeighbors { .. })));
    }

    #[test]
    fn cycle_witness() {
        let c4 = Graph::cycle(4);
        let w = find_witness(&c4, &[0, 1, 2, 3], 10).witness().cloned().unwrap();
        assert!(w.parts.is_empty());
        assert!(verify_witness(&c4, &w));
        assert_eq!(find_witness(&Graph::complete(4), &[0, 1, 2, 3], 100), WitnessSearch::Absent);
    }

    #[test]
    fn four_neighbor_part_is_rejected() {
        let c4 = Graph::cycle(4);
        let mut w = find_witness(&c4, &[0, 1, 2, 3], 10).witness().cloned().unwrap();
        let mut g = c4.clone();
        let x = g.add_vertex();
        for v in 0..4 {
            g.add_edge(x, v).unwrap();
        }
        w.parts = vec![vec![x]];
        assert!(!verify_witness(&g, &w));
    }

    #[test]
    fn non_facial_triangle_is_rejected() {
        // p = K4 on 0..4 plus 5 inside triangle 012; part {4} needs 012 facial.
        let mut g = Graph::complete(4);
        let x = g.add_vertex();
        let y = g.add_vertex();
        for v in 0..3 {
            g.add_edge(x, v).unwrap();
            g.add_edge(y, v).unwrap();
        }
        let parts = vec![set(&[x])];
        let p = reduce_graph(&g, &parts).unwrap();
        let mut rotation = embed(&p).unwrap();
        rotation.push(Vec::new());
        let drawing = Embedding { rotation, hub: Some(p.id_bound()), outer_face: Vec::new() };
        let w = ThreePlanarWitness { schema: WITNESS_SCHEMA.into(), parts: vec![vec![x]], boundary: vec![], drawing };
        assert!(!verify_witness(&g, &w));
        assert!(draw(&g, &parts, &[]).unwrap().is_none());
    }

    #[test]
    fn blob_behind_three_cut() {
        // Square 0,1,2,3 with a two-vertex blob attached to 0,1,2.
        let mut g = Graph::cycle(4);
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.add_edge(a, b).unwrap();
        for v in [0, 1, 2] {
            g.add_edge(a, v).unwrap();
            g.add_edge(b, v).unwrap();
        }
        assert!(crate::linkage::find_two_linkage(&g, 0, 2, 1, 3).is_none());
        let w = find_witness(&g, &[0, 1, 2, 3], 1000).witness().cloned().unwrap();
        assert!(verify_witness(&g, &w));
        assert_eq!(w.parts, vec![vec![a, b]]);
    }

    #[test]
    fn minimalize_drops_redundant_part() {
        // The part {x} can be drawn inside its triangle, so it is not minimal.
        let mut g = Graph::cycle(4);
        g.add_edge(0, 2).unwrap();
        let x = g.add_vertex();
        let y = g.add_vertex();
        for v in [0, 1, 2] {
            g.add_edge(x, v).unwrap();
        }
        for v in [0, 2, 3] {
            g.add_edge(y, v).unwrap();
        }
        let w = draw(&g, &[set(&[x])], &[0, 1, 2, 3]).unwrap().unwrap();
        assert!(verify_witness(&g, &w));
        let m = minimalize_witness(&g, &w, 1000);
        assert!(verify_witness(&g, &m));
        assert!(is_minimal(&g, &m, 1000));
        assert!(m.parts.is_empty());

        let c4 = Graph::cycle(4);
        let w = find_witness(&c4, &[0, 1, 2, 3], 10).witness().cloned().unwrap();
        assert_eq!(minimalize_witness(&c4, &w, 100), w);
    }

    #[test]
    fn witness_round_trips_through_json() {
        let c4 = Graph::cycle(4);
        let w = find_witness(&c4, &[0, 1, 2, 3], 10).witness().cloned().unwrap();
        let s = serde_json::to_string(&w).unwrap();
        let back: ThreePlanarWitness = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert!(verify_witness(&c4, &back));
    }
}
