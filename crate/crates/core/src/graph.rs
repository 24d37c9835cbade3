//! Undirected simple graphs with stable vertex ids, plus paths and cycles.
//!
//! Vertex ids are dense integers. Deleting a vertex keeps the ids of every
//! other vertex, so subgraphs such as `G - (V(C0) ∪ V(C2))` can be handled in
//! the id space of the host graph without any relabeling.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type VertexId = usize;
pub type VertexSet = BTreeSet<VertexId>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("not a path: {0}")]
    NotAPath(String),
    #[error("not a cycle: {0}")]
    NotACycle(String),
    #[error("arc endpoints coincide at {0}")]
    EqualEndpoints(VertexId),
    #[error("vertex {0} is not on the cycle")]
    VertexNotOnCycle(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Graph {
    adj: Vec<Vec<VertexId>>,
    present: Vec<bool>,
    edge_count: usize,
}

impl Graph {
    /// Graph on vertices `0..n` without edges.
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            present: vec![true; n],
            edge_count: 0,
        }
    }

    pub fn from_edges(n: usize, edges: &[(VertexId, VertexId)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::new(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v).expect("valid ids");
            }
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 0..n {
            g.add_edge(i, (i + 1) % n).expect("valid ids");
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = Graph::new(n);
        for i in 1..n {
            g.add_edge(i - 1, i).expect("valid ids");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        self.adj.push(Vec::new());
        self.present.push(true);
        self.adj.len() - 1
    }

    /// Adds `uv`; returns `false` when the edge was already present.
    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<bool, GraphError> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        match self.adj[u].binary_search(&v) {
            Ok(_) => Ok(false),
            Err(pos) => {
                self.adj[u].insert(pos, v);
                let pos = self.adj[v].binary_search(&u).unwrap_err();
                self.adj[v].insert(pos, u);
                self.edge_count += 1;
                Ok(true)
            }
        }
    }

    pub fn remove_edge(&mut self, u: VertexId, v: VertexId) -> bool {
        if !self.contains(u) || !self.contains(v) {
            return false;
        }
        if let Ok(pos) = self.adj[u].binary_search(&v) {
            self.adj[u].remove(pos);
            let pos = self.adj[v].binary_search(&u).expect("symmetric adjacency");
            self.adj[v].remove(pos);
            self.edge_count -= 1;
            true
        } else {
            false
        }
    }

    pub fn remove_vertex(&mut self, v: VertexId) {
        if !self.contains(v) {
            return;
        }
        for u in std::mem::take(&mut self.adj[v]) {
            let pos = self.adj[u].binary_search(&v).expect("symmetric adjacency");
            self.adj[u].remove(pos);
            self.edge_count -= 1;
        }
        self.present[v] = false;
    }

    /// One past the largest vertex id ever allocated.
    pub fn id_bound(&self) -> usize {
        self.adj.len()
    }

    /// Number of vertices.
    pub fn order(&self) -> usize {
        self.present.iter().filter(|&&p| p).count()
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.edge_count
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.present.get(v).copied().unwrap_or(false)
    }

    pub fn check_vertex(&self, v: VertexId) -> Result<(), GraphError> {
        if self.contains(v) {
            Ok(())
        } else {
            Err(GraphError::UnknownVertex(v))
        }
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        (0..self.adj.len()).filter(move |&v| self.present[v])
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.vertices().collect()
    }

    /// Presence mask indexed by vertex id.
    pub fn mask(&self) -> Vec<bool> {
        self.present.clone()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        &self.adj[v]
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> Option<usize> {
        self.vertices().map(|v| self.degree(v)).min()
    }

    pub fn has_edge(&self, u: VertexId, v: VertexId) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (VertexId, VertexId)> + '_ {
        self.vertices()
            .flat_map(move |u| self.adj[u].iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by the vertices with `keep[v]`; ids are preserved.
    pub fn induced_by_mask(&self, keep: &[bool]) -> Graph {
        let mut g = self.clone();
        for v in 0..self.adj.len() {
            if self.present[v] && !keep.get(v).copied().unwrap_or(false) {
                g.remove_vertex(v);
            }
        }
        g
    }

    pub fn induced(&self, keep: &VertexSet) -> Graph {
        let mut mask = vec![false; self.adj.len()];
        for &v in keep {
            if v < mask.len() {
                mask[v] = true;
            }
        }
        self.induced_by_mask(&mask)
    }

    /// `G - X`, ids preserved.
    pub fn without<I: IntoIterator<Item = VertexId>>(&self, removed: I) -> Graph {
        let mut g = self.clone();
        for v in removed {
            g.remove_vertex(v);
        }
        g
    }

    /// Renumbers the present vertices to `0..order()`; returns the old id of
    /// each new vertex.
    pub fn compacted(&self) -> (Graph, Vec<VertexId>) {
        let old: Vec<VertexId> = self.vertices().collect();
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (i, &v) in old.iter().enumerate() {
            new_id[v] = i;
        }
        let mut g = Graph::new(old.len());
        for (u, v) in self.edges() {
            g.add_edge(new_id[u], new_id[v]).expect("compacted ids are valid");
        }
        (g, old)
    }

    /// Connected components, each as a sorted vertex list, ordered by smallest id.
    pub fn components(&self) -> Vec<Vec<VertexId>> {
        let mut seen = vec![false; self.adj.len()];
        let mut out = Vec::new();
        for s in self.vertices() {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            let mut comp = vec![s];
            let mut i = 0;
            while i < comp.len() {
                let u = comp[i];
                i += 1;
                for &w in &self.adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

/// `N(A)`: vertices outside `a` adjacent to some vertex of `a`.
pub fn neighborhood_of_set(g: &Graph, a: &VertexSet) -> Result<VertexSet, GraphError> {
    for &v in a {
        g.check_vertex(v)?;
    }
    let mut out = VertexSet::new();
    for &v in a {
        for &w in g.neighbors(v) {
            if !a.contains(&w) {
                out.insert(w);
            }
        }
    }
    Ok(out)
}

/// A path given by its vertex sequence; the empty path is a legal value.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, Default)]
pub struct Path(pub Vec<VertexId>);

impl Path {
    pub fn new(seq: Vec<VertexId>) -> Self {
        Path(seq)
    }

    pub fn empty() -> Self {
        Path(Vec::new())
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<VertexId> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<VertexId> {
        self.0.last().copied()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.0.contains(&v)
    }

    pub fn reversed(&self) -> Path {
        Path(self.0.iter().rev().copied().collect())
    }

    /// `end(P)`: the vertices of smallest degree in P.
    pub fn ends(&self) -> VertexSet {
        match self.0.len() {
            0 => VertexSet::new(),
            _ => [self.0[0], self.0[self.0.len() - 1]].into_iter().collect(),
        }
    }

    /// `int(P) = V(P) \ end(P)`; empty when P has at most two vertices.
    pub fn interior(&self) -> VertexSet {
        if self.0.len() <= 2 {
            VertexSet::new()
        } else {
            self.0[1..self.0.len() - 1].iter().copied().collect()
        }
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.0.iter().copied().collect()
    }

    /// Subpath between two of its vertices, in the direction from `a` to `b`.
    pub fn subpath(&self, a: VertexId, b: VertexId) -> Option<Path> {
        let i = self.0.iter().position(|&x| x == a)?;
        let j = self.0.iter().position(|&x| x == b)?;
        Some(if i <= j {
            Path(self.0[i..=j].to_vec())
        } else {
            Path(self.0[j..=i].iter().rev().copied().collect())
        })
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        let mut seen = VertexSet::new();
        for &v in &self.0 {
            g.check_vertex(v)?;
            if !seen.insert(v) {
                return Err(GraphError::NotAPath(format!("vertex {v} repeats")));
            }
        }
        for w in self.0.windows(2) {
            if !g.has_edge(w[0], w[1]) {
                return Err(GraphError::NotAPath(format!("{} and {} are not adjacent", w[0], w[1])));
            }
        }
        Ok(())
    }
}

/// `(end(P), int(P))`.
pub fn path_ends(p: &Path) -> (VertexSet, VertexSet) {
    (p.ends(), p.interior())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, Default)]
pub enum Orientation {
    /// Stored sequence order.
    #[default]
    Clockwise,
    CounterClockwise,
}

impl Orientation {
    pub fn flipped(self) -> Self {
        match self {
            Orientation::Clockwise => Orientation::CounterClockwise,
            Orientation::CounterClockwise => Orientation::Clockwise,
        }
    }
}

/// Which endpoints an arc `C[u,v]` keeps.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Inclusivity {
    /// `C[u,v]`
    Both,
    /// `C[u,v)`
    Left,
    /// `C(u,v]`
    Right,
    /// `C(u,v)`
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cycle {
    seq: Vec<VertexId>,
    #[serde(default)]
    orientation: Orientation,
}

impl Cycle {
    /// Requires at least three pairwise distinct vertices.
    pub fn new(seq: Vec<VertexId>) -> Result<Self, GraphError> {
        if seq.len() < 3 {
            return Err(GraphError::NotACycle(format!("{} vertices", seq.len())));
        }
        let distinct: VertexSet = seq.iter().copied().collect();
        if distinct.len() != seq.len() {
            return Err(GraphError::NotACycle("repeated vertex".into()));
        }
        Ok(Cycle { seq, orientation: Orientation::Clockwise })
    }

    pub fn with_orientation(mut self, orientation: Orientation) -> Self {
        self.orientation = orientation;
        self
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    pub fn reversed(&self) -> Cycle {
        Cycle { seq: self.seq.clone(), orientation: self.orientation.flipped() }
    }

    /// The stored sequence, independent of orientation.
    pub fn stored(&self) -> &[VertexId] {
        &self.seq
    }

    /// The vertices in clockwise order under the current orientation.
    pub fn sequence(&self) -> Vec<VertexId> {
        match self.orientation {
            Orientation::Clockwise => self.seq.clone(),
            Orientation::CounterClockwise => {
                let mut s = self.seq.clone();
                s.reverse();
                s
            }
        }
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }

    pub fn contains(&self, v: VertexId) -> bool {
        self.seq.contains(&v)
    }

    pub fn vertex_set(&self) -> VertexSet {
        self.seq.iter().copied().collect()
    }

    /// Clockwise successor.
    pub fn next(&self, v: VertexId) -> Option<VertexId> {
        let i = self.seq.iter().position(|&x| x == v)?;
        let n = self.seq.len();
        Some(match self.orientation {
            Orientation::Clockwise => self.seq[(i + 1) % n],
            Orientation::CounterClockwise => self.seq[(i + n - 1) % n],
        })
    }

    /// `C[u,v]` and its half-open and open variants.
    pub fn arc(&self, u: VertexId, v: VertexId, inc: Inclusivity) -> Result<Path, GraphError> {
        if u == v {
            return Err(GraphError::EqualEndpoints(u));
        }
        let seq = self.sequence();
        let n = seq.len();
        let i = seq.iter().position(|&x| x == u).ok_or(GraphError::VertexNotOnCycle(u))?;
        let j = seq.iter().position(|&x| x == v).ok_or(GraphError::VertexNotOnCycle(v))?;
        let steps = (j + n - i) % n;
        let mut out: Vec<VertexId> = (0..=steps).map(|k| seq[(i + k) % n]).collect();
        if matches!(inc, Inclusivity::Right | Inclusivity::Neither) {
            out.remove(0);
        }
        if matches!(inc, Inclusivity::Left | Inclusivity::Neither) {
            out.pop();
        }
        Ok(Path(out))
    }

    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        for &v in &self.seq {
            g.check_vertex(v)?;
        }
        let n = self.seq.len();
        for i in 0..n {
            let (a, b) = (self.seq[i], self.seq[(i + 1) % n]);
            if !g.has_edge(a, b) {
                return Err(GraphError::NotACycle(format!("{a} and {b} are not adjacent")));
            }
        }
        Ok(())
    }
}

/// Whether `anchors` occur along the closed sequence `seq` in their cyclic
/// order, read in either direction.
pub fn visits_in_cyclic_order(seq: &[VertexId], anchors: &[VertexId]) -> bool {
    let n = seq.len();
    let pos: Option<Vec<usize>> = anchors.iter().map(|a| seq.iter().position(|x| x == a)).collect();
    let Some(pos) = pos else { return false };
    let k = pos.len();
    if k <= 2 {
        return true;
    }
    let forward = |p: &[usize]| {
        let total: usize = (0..k).map(|i| (p[(i + 1) % k] + n - p[i]) % n).sum();
        total == n
    };
    let rev: Vec<usize> = pos.iter().map(|&p| (n - p) % n).collect();
    forward(&pos) || forward(&rev)
}

/// Whether `anchors` occur along the open sequence `seq` in the given order.
pub fn visits_in_order(seq: &[VertexId], anchors: &[VertexId]) -> bool {
    let mut last = None;
    for a in anchors {
        let Some(p) = seq.iter().position(|x| x == a) else { return false };
        if let Some(l) = last {
            if p < l {
                return false;
            }
        }
        last = Some(p);
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn neighborhood_examples() {
        let p3 = Graph::path(3);
        assert_eq!(neighborhood_of_set(&p3, &set(&[1])).unwrap(), set(&[0, 2]));
        assert_eq!(neighborhood_of_set(&p3, &set(&[0])).unwrap(), set(&[1]));
        let k4 = Graph::complete(4);
        assert_eq!(neighborhood_of_set(&k4, &set(&[0, 1])).unwrap(), set(&[2, 3]));
        assert_eq!(neighborhood_of_set(&k4, &set(&[9])), Err(GraphError::UnknownVertex(9)));
    }

    #[test]
    fn arc_examples() {
        let c = Cycle::new((0..6).collect()).unwrap();
        assert_eq!(c.arc(1, 4, Inclusivity::Both).unwrap().0, vec![1, 2, 3, 4]);
        assert_eq!(c.arc(4, 1, Inclusivity::Both).unwrap().0, vec![4, 5, 0, 1]);
        assert_eq!(c.arc(1, 4, Inclusivity::Right).unwrap().0, vec![2, 3, 4]);
        assert_eq!(c.arc(1, 4, Inclusivity::Left).unwrap().0, vec![1, 2, 3]);
        assert_eq!(c.arc(1, 4, Inclusivity::Neither).unwrap().0, vec![2, 3]);
        assert_eq!(c.reversed().arc(1, 4, Inclusivity::Both).unwrap().0, vec![1, 0, 5, 4]);
        assert_eq!(c.arc(2, 2, Inclusivity::Both), Err(GraphError::EqualEndpoints(2)));
        assert_eq!(c.arc(2, 7, Inclusivity::Both), Err(GraphError::VertexNotOnCycle(7)));
    }

    #[test]
    fn path_end_examples() {
        let (e, i) = path_ends(&Path::new(vec![0, 1, 2]));
        assert_eq!((e, i), (set(&[0, 2]), set(&[1])));
        let (e, i) = path_ends(&Path::new(vec![0, 1]));
        assert_eq!((e, i), (set(&[0, 1]), set(&[])));
        let (e, i) = path_ends(&Path::new(vec![5]));
        assert_eq!((e, i), (set(&[5]), set(&[])));
        let (e, i) = path_ends(&Path::empty());
        assert!(e.is_empty() && i.is_empty());
    }

    #[test]
    fn rejects_loops_and_short_cycles() {
        let mut g = Graph::new(2);
        assert_eq!(g.add_edge(1, 1), Err(GraphError::SelfLoop(1)));
        assert!(g.add_edge(0, 1).unwrap());
        assert!(!g.add_edge(1, 0).unwrap());
        assert_eq!(g.size(), 1);
        assert!(Cycle::new(vec![0, 1]).is_err());
        assert!(Cycle::new(vec![0, 1, 0]).is_err());
    }

    #[test]
    fn vertex_removal_keeps_ids() {
        let mut g = Graph::complete(5);
        g.remove_vertex(2);
        assert_eq!(g.order(), 4);
        assert_eq!(g.size(), 6);
        assert!(!g.contains(2));
        assert_eq!(g.neighbors(0), &[1, 3, 4]);
        let (h, old) = g.compacted();
        assert_eq!(old, vec![0, 1, 3, 4]);
        assert_eq!(h, Graph::complete(4));
    }

    #[test]
    fn cyclic_order() {
        let seq = [0, 1, 2, 3, 4, 5];
        assert!(visits_in_cyclic_order(&seq, &[1, 3, 5, 0]));
        assert!(visits_in_cyclic_order(&seq, &[5, 3, 1, 0]));
        assert!(!visits_in_cyclic_order(&seq, &[1, 5, 3, 0]));
        assert!(visits_in_order(&seq, &[1, 3, 4]));
        assert!(!visits_in_order(&seq, &[3, 1]));
    }

    proptest::proptest! {
        #[test]
        fn complementary_arcs_cover_cycle(n in 3usize..12, a in 0usize..12, b in 0usize..12) {
            let (u, v) = (a % n, b % n);
            proptest::prop_assume!(u != v);
            let c = Cycle::new((0..n).collect()).unwrap();
            let x = c.arc(u, v, Inclusivity::Both).unwrap();
            let y = c.arc(v, u, Inclusivity::Both).unwrap();
            proptest::prop_assert_eq!(x.len() + y.len(), n + 2);
            let all: VertexSet = x.vertex_set().union(&y.vertex_set()).copied().collect();
            proptest::prop_assert_eq!(all.len(), n);
        }

        #[test]
        fn interior_empty_iff_short(len in 0usize..8) {
            let p = Path::new((0..len).collect());
            proptest::prop_assert_eq!(p.interior().is_empty(), len <= 2);
        }

        #[test]
        fn neighborhood_disjoint_from_set(edges in proptest::collection::vec((0usize..8, 0usize..8), 0..20),
                                          members in proptest::collection::btree_set(0usize..8, 0..8)) {
            let mut g = Graph::new(8);
            for (u, v) in edges { if u != v { g.add_edge(u, v).unwrap(); } }
            let n = neighborhood_of_set(&g, &members).unwrap();
            proptest::prop_assert!(n.is_disjoint(&members));
        }
    }
}
