//! Vertex connectivity, Menger path systems and block decomposition.
//!
//! Vertex-disjoint flows use the usual split of each vertex `v` into an
//! entry node `2v` and an exit node `2v + 1` joined by a unit arc.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Cycle, Graph, GraphError, Path, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConnectivityError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("connectivity needs at least two vertices, got {0}")]
    TooSmall(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Disjointness {
    InternallyDisjoint,
    FullyDisjoint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathSystem {
    pub paths: Vec<Path>,
    pub disjointness: Disjointness,
}

impl PathSystem {
    /// Checks every path against `g` and the declared disjointness.
    pub fn validate(&self, g: &Graph) -> Result<(), GraphError> {
        for p in &self.paths {
            p.validate(g)?;
        }
        for (i, p) in self.paths.iter().enumerate() {
            for q in &self.paths[i + 1..] {
                let (a, b) = match self.disjointness {
                    Disjointness::FullyDisjoint => (p.vertex_set(), q.vertex_set()),
                    Disjointness::InternallyDisjoint => {
                        let a: VertexSet = p.vertex_set();
                        let b: VertexSet = q.vertex_set();
                        let shared_ends: VertexSet = p.ends().intersection(&q.ends()).copied().collect();
                        (
                            a.difference(&shared_ends).copied().collect(),
                            b.difference(&shared_ends).copied().collect(),
                        )
                    }
                };
                if !a.is_disjoint(&b) {
                    return Err(GraphError::NotAPath(format!("paths {:?} and {:?} intersect", p.0, q.0)));
                }
            }
        }
        Ok(())
    }
}

struct Arc {
    to: usize,
    cap: i32,
}

/// Unit-capacity flow network on split vertices.
struct SplitNetwork {
    arcs: Vec<Arc>,
    out: Vec<Vec<usize>>,
    source: usize,
    sink: usize,
}

impl SplitNetwork {
    const BIG: i32 = 1 << 20;

    fn new(g: &Graph, allowed: &[bool]) -> Self {
        let n = g.id_bound();
        let mut net = SplitNetwork {
            arcs: Vec::new(),
            out: vec![Vec::new(); 2 * n + 2],
            source: 2 * n,
            sink: 2 * n + 1,
        };
        for v in g.vertices().filter(|&v| allowed[v]) {
            net.add(2 * v, 2 * v + 1, 1);
            for &w in g.neighbors(v) {
                if allowed[w] {
                    net.add(2 * v + 1, 2 * w, Self::BIG);
                }
            }
        }
        net
    }

    fn add(&mut self, from: usize, to: usize, cap: i32) {
        self.out[from].push(self.arcs.len());
        self.arcs.push(Arc { to, cap });
        self.out[to].push(self.arcs.len());
        self.arcs.push(Arc { to: from, cap: 0 });
    }

    fn augment(&mut self) -> bool {
        let mut prev = vec![usize::MAX; self.out.len()];
        let mut seen = vec![false; self.out.len()];
        seen[self.source] = true;
        let mut queue = VecDeque::from([self.source]);
        while let Some(x) = queue.pop_front() {
            if x == self.sink {
                break;
            }
            for &a in &self.out[x] {
                let to = self.arcs[a].to;
                if self.arcs[a].cap > 0 && !seen[to] {
                    seen[to] = true;
                    prev[to] = a;
                    queue.push_back(to);
                }
            }
        }
        if !seen[self.sink] {
            return false;
        }
        let mut x = self.sink;
        while x != self.source {
            let a = prev[x];
            self.arcs[a].cap -= 1;
            self.arcs[a ^ 1].cap += 1;
            x = self.arcs[a ^ 1].to;
        }
        true
    }

    fn max_flow(&mut self, limit: usize) -> usize {
        let mut f = 0;
        while f < limit && self.augment() {
            f += 1;
        }
        f
    }

    /// Decomposes the flow into source-to-sink node walks over original vertices.
    fn paths(&mut self) -> Vec<Vec<VertexId>> {
        let mut out = Vec::new();
        loop {
            let mut walk = Vec::new();
            let mut x = self.source;
            let mut found = false;
            while x != self.sink {
                let next = self.out[x].iter().copied().find(|&a| a % 2 == 0 && self.arcs[a ^ 1].cap > 0 && self.flow_on(a) > 0);
                let Some(a) = next else { break };
                self.arcs[a ^ 1].cap -= 1;
                self.arcs[a].cap += 1;
                x = self.arcs[a].to;
                if x < self.source && x.is_multiple_of(2) {
                    walk.push(x / 2);
                }
                if x == self.sink {
                    found = true;
                }
            }
            if !found {
                break;
            }
            out.push(walk);
        }
        out
    }

    fn flow_on(&self, forward_arc: usize) -> i32 {
        // Residual reverse capacity equals the flow on the forward arc.
        self.arcs[forward_arc ^ 1].cap
    }
}

fn all_allowed(g: &Graph) -> Vec<bool> {
    g.mask()
}

/// Up to `limit` pairwise vertex-disjoint paths from `s` to `t` inside the
/// vertices marked in `allowed`. Each path meets `s` only in its first vertex
/// and `t` only in its last.
pub fn max_disjoint_paths(g: &Graph, allowed: &[bool], s: &VertexSet, t: &VertexSet, limit: usize) -> Vec<Path> {
    let mut net = SplitNetwork::new(g, allowed);
    for &v in s {
        if g.contains(v) && allowed[v] {
            net.add(net.source, 2 * v, 1);
        }
    }
    for &v in t {
        if g.contains(v) && allowed[v] {
            net.add(2 * v + 1, net.sink, 1);
        }
    }
    net.max_flow(limit);
    net.paths()
        .into_iter()
        .map(|walk| {
            let start = walk.iter().rposition(|v| s.contains(v)).unwrap_or(0);
            let rest = &walk[start..];
            let end = rest.iter().position(|v| t.contains(v)).unwrap_or(rest.len() - 1);
            Path::new(rest[..=end].to_vec())
        })
        .collect()
}

/// `k` fully vertex-disjoint paths from `s` to `t`, or `None` when fewer exist.
pub fn disjoint_paths_between_sets(
    g: &Graph,
    s: &VertexSet,
    t: &VertexSet,
    k: usize,
) -> Result<Option<PathSystem>, GraphError> {
    for v in s.iter().chain(t) {
        g.check_vertex(*v)?;
    }
    let paths = max_disjoint_paths(g, &all_allowed(g), s, t, k);
    Ok((paths.len() >= k).then_some(PathSystem { paths, disjointness: Disjointness::FullyDisjoint }))
}

/// Up to `limit` internally disjoint `u`–`v` paths within `allowed`
/// (`u`, `v` distinct and non-adjacent for the count to be meaningful).
pub fn internally_disjoint_paths(g: &Graph, allowed: &[bool], u: VertexId, v: VertexId, limit: usize) -> Vec<Path> {
    let mut net = SplitNetwork::new(g, allowed);
    net.add(net.source, 2 * u + 1, SplitNetwork::BIG);
    net.add(2 * v, net.sink, SplitNetwork::BIG);
    net.max_flow(limit);
    net.paths()
        .into_iter()
        .map(|walk| {
            let mut seq = vec![u];
            seq.extend(walk);
            Path::new(seq)
        })
        .collect()
}

/// Up to `limit` paths from `x` to distinct vertices of `targets`, disjoint
/// apart from `x` and meeting `targets` only at their last vertex.
pub fn fan(g: &Graph, allowed: &[bool], x: VertexId, targets: &VertexSet, limit: usize) -> Vec<Path> {
    let mut net = SplitNetwork::new(g, allowed);
    net.add(net.source, 2 * x + 1, SplitNetwork::BIG);
    for &t in targets {
        if t != x && g.contains(t) && allowed[t] {
            net.add(2 * t + 1, net.sink, 1);
        }
    }
    net.max_flow(limit);
    net.paths()
        .into_iter()
        .filter_map(|walk| {
            let start = walk.iter().rposition(|&v| v == x).map_or(0, |i| i + 1);
            let walk = &walk[start..];
            let end = walk.iter().position(|v| targets.contains(v))?;
            let mut seq = vec![x];
            seq.extend_from_slice(&walk[..=end]);
            Some(Path::new(seq))
        })
        .collect()
}

/// Largest number of internally disjoint `u`–`v` paths, capped at `limit`.
pub fn local_connectivity(g: &Graph, u: VertexId, v: VertexId, limit: usize) -> usize {
    let allowed = all_allowed(g);
    let mut net = SplitNetwork::new(g, &allowed);
    net.add(net.source, 2 * u + 1, SplitNetwork::BIG);
    net.add(2 * v, net.sink, SplitNetwork::BIG);
    net.max_flow(limit)
}

fn connectivity_capped(g: &Graph, cap: usize) -> usize {
    let n = g.order();
    let verts: Vec<VertexId> = g.vertices().collect();
    let mut best = g.min_degree().unwrap_or(0).min(n.saturating_sub(1)).min(cap);
    if !g.is_connected() {
        return 0;
    }
    // Even's scheme: some vertex among the first best+1 lies outside a minimum cut.
    let mut i = 0;
    while i < verts.len() && i <= best {
        let u = verts[i];
        for &v in &verts[i + 1..] {
            if !g.has_edge(u, v) {
                best = best.min(local_connectivity(g, u, v, best));
            }
        }
        i += 1;
    }
    best
}

/// κ(G); complete graphs give `|V| - 1`.
pub fn vertex_connectivity(g: &Graph) -> Result<usize, ConnectivityError> {
    let n = g.order();
    if n < 2 {
        return Err(ConnectivityError::TooSmall(n));
    }
    Ok(connectivity_capped(g, n))
}

/// `κ(G) >= k` and `|V(G)| > k`.
pub fn is_k_connected(g: &Graph, k: usize) -> bool {
    let n = g.order();
    if n <= k {
        return false;
    }
    if k == 0 {
        return true;
    }
    if g.min_degree().unwrap_or(0) < k {
        return false;
    }
    connectivity_capped(g, k) >= k
}

/// Maximal 2-connected blocks and bridges as vertex sets; isolated vertices
/// form singleton blocks.
pub fn block_decomposition(g: &Graph) -> Vec<VertexSet> {
    let n = g.id_bound();
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![0usize; n];
    let mut time = 0;
    let mut blocks = Vec::new();
    let mut edge_stack: Vec<(VertexId, VertexId)> = Vec::new();
    for root in g.vertices() {
        if disc[root] != usize::MAX {
            continue;
        }
        if g.degree(root) == 0 {
            blocks.push([root].into_iter().collect());
            disc[root] = time;
            time += 1;
            continue;
        }
        disc[root] = time;
        low[root] = time;
        time += 1;
        // (vertex, parent, next neighbor index)
        let mut stack = vec![(root, usize::MAX, 0usize)];
        while let Some(&mut (v, parent, ref mut idx)) = stack.last_mut() {
            if *idx < g.degree(v) {
                let w = g.neighbors(v)[*idx];
                *idx += 1;
                if w == parent {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push((v, w));
                    disc[w] = time;
                    low[w] = time;
                    time += 1;
                    stack.push((w, v, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push((v, w));
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if parent != usize::MAX {
                    low[parent] = low[parent].min(low[v]);
                    if low[v] >= disc[parent] {
                        let mut block = VertexSet::new();
                        while let Some((a, b)) = edge_stack.pop() {
                            block.insert(a);
                            block.insert(b);
                            if (a, b) == (parent, v) {
                                break;
                            }
                        }
                        blocks.push(block);
                    }
                }
            }
        }
    }
    blocks
}

/// Adds `copies` twins of each listed vertex (same neighborhood, not adjacent
/// to the original). Returns the new graph and `(twin, original)` pairs.
pub fn duplicate_vertices(g: &Graph, originals: &[VertexId], copies: usize) -> (Graph, Vec<(VertexId, VertexId)>) {
    let mut h = g.clone();
    let mut twins = Vec::new();
    for &v in originals {
        let nbrs: Vec<VertexId> = g.neighbors(v).to_vec();
        for _ in 0..copies {
            let t = h.add_vertex();
            for &w in &nbrs {
                h.add_edge(t, w).expect("twin edges are valid");
            }
            twins.push((t, v));
        }
    }
    (h, twins)
}

/// Vertices of `g` reachable from `from` inside `allowed`.
pub fn reachable(g: &Graph, allowed: &[bool], from: VertexId) -> Vec<bool> {
    let mut seen = vec![false; g.id_bound()];
    if !g.contains(from) || !allowed[from] {
        return seen;
    }
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &w in g.neighbors(x) {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                queue.push_back(w);
            }
        }
    }
    seen
}

/// Shortest path from any vertex of `from` to any vertex of `to`, all of it
/// inside `allowed`.
pub fn shortest_path_between(g: &Graph, allowed: &[bool], from: &VertexSet, to: &VertexSet) -> Option<Path> {
    let n = g.id_bound();
    let mut prev = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut queue = VecDeque::new();
    for &s in from {
        if g.contains(s) && allowed[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(x) = queue.pop_front() {
        if to.contains(&x) {
            let mut seq = vec![x];
            let mut y = x;
            while prev[y] != usize::MAX {
                y = prev[y];
                seq.push(y);
            }
            seq.reverse();
            return Some(Path::new(seq));
        }
        for &w in g.neighbors(x) {
            if allowed[w] && !seen[w] {
                seen[w] = true;
                prev[w] = x;
                queue.push_back(w);
            }
        }
    }
    None
}

pub fn shortest_path(g: &Graph, allowed: &[bool], from: VertexId, to: VertexId) -> Option<Path> {
    shortest_path_between(g, allowed, &[from].into_iter().collect(), &[to].into_iter().collect())
}

/// A shortest cycle through `a` and `b` inside `allowed`: two internally
/// disjoint `a`–`b` paths of minimum total order, found by a two-unit
/// min-cost flow on split vertices.
pub fn shortest_cycle_through(g: &Graph, allowed: &[bool], a: VertexId, b: VertexId) -> Option<Cycle> {
    if a == b || !allowed[a] || !allowed[b] {
        return None;
    }
    let n = g.id_bound();
    // arc: (to, cap, cost)
    let mut arcs: Vec<(usize, i32, i32)> = Vec::new();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); 2 * n];
    let mut add = |arcs: &mut Vec<(usize, i32, i32)>, from: usize, to: usize, cost: i32| {
        out[from].push(arcs.len());
        arcs.push((to, 1, cost));
        out[to].push(arcs.len());
        arcs.push((from, 0, -cost));
    };
    for v in g.vertices().filter(|&v| allowed[v]) {
        if v != a && v != b {
            add(&mut arcs, 2 * v, 2 * v + 1, 1);
        }
        for &w in g.neighbors(v) {
            if allowed[w] && w != a && v != b {
                add(&mut arcs, 2 * v + 1, 2 * w, 0);
            }
        }
    }
    let (source, sink) = (2 * a + 1, 2 * b);
    for _ in 0..2 {
        let mut dist = vec![i32::MAX; 2 * n];
        let mut prev = vec![usize::MAX; 2 * n];
        dist[source] = 0;
        let mut changed = true;
        while changed {
            changed = false;
            for x in 0..2 * n {
                if dist[x] == i32::MAX {
                    continue;
                }
                for &e in &out[x] {
                    let (to, cap, cost) = arcs[e];
                    if cap > 0 && dist[x] + cost < dist[to] {
                        dist[to] = dist[x] + cost;
                        prev[to] = e;
                        changed = true;
                    }
                }
            }
        }
        if dist[sink] == i32::MAX {
            return None;
        }
        let mut x = sink;
        while x != source {
            let e = prev[x];
            arcs[e].1 -= 1;
            arcs[e ^ 1].1 += 1;
            x = arcs[e ^ 1].0;
        }
    }
    let mut legs = Vec::new();
    for _ in 0..2 {
        let mut seq = vec![a];
        let mut x = source;
        while x != sink {
            let e = out[x].iter().copied().find(|&e| e % 2 == 0 && arcs[e ^ 1].1 > 0)?;
            arcs[e ^ 1].1 -= 1;
            x = arcs[e].0;
            if x % 2 == 0 {
                seq.push(x / 2);
            }
        }
        legs.push(seq);
    }
    let mut seq = legs[0].clone();
    seq.extend(legs[1].iter().rev().skip(1).take(legs[1].len().saturating_sub(2)));
    Cycle::new(seq).ok()
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::generate::{complete_bipartite, petersen};

    /// Smallest vertex cut by exhaustive subset enumeration.
    pub(crate) fn brute_connectivity(g: &Graph) -> usize {
        let verts: Vec<VertexId> = g.vertices().collect();
        let n = verts.len();
        let mut best = n - 1;
        for mask in 0u32..(1 << n) {
            let k = mask.count_ones() as usize;
            if k >= best || n - k < 2 {
                continue;
            }
            let removed = verts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v);
            if !g.without(removed).is_connected() {
                best = k;
            }
        }
        best
    }

    /// Whether some set of fewer than `k` vertices meets every s–t path.
    pub(crate) fn brute_separable(g: &Graph, s: &VertexSet, t: &VertexSet, k: usize) -> bool {
        let verts: Vec<VertexId> = g.vertices().collect();
        let n = verts.len();
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize >= k {
                continue;
            }
            let removed: VertexSet = verts.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect();
            let h = g.without(removed.iter().copied());
            let mask_h = h.mask();
            let blocked = s.iter().filter(|v| !removed.contains(v)).all(|&a| {
                let r = reachable(&h, &mask_h, a);
                t.iter().all(|&b| removed.contains(&b) || !r[b])
            });
            if blocked {
                return true;
            }
        }
        false
    }

    fn set(v: &[usize]) -> VertexSet {
        v.iter().copied().collect()
    }

    #[test]
    fn connectivity_examples() {
        assert_eq!(vertex_connectivity(&Graph::complete(5)).unwrap(), 4);
        assert_eq!(vertex_connectivity(&Graph::cycle(6)).unwrap(), 2);
        let p = petersen();
        assert_eq!(brute_connectivity(&p), 3);
        assert_eq!(vertex_connectivity(&p).unwrap(), 3);
        assert_eq!(vertex_connectivity(&Graph::new(1)), Err(ConnectivityError::TooSmall(1)));
    }

    #[test]
    fn k_connected_examples() {
        assert!(is_k_connected(&Graph::complete(8), 7));
        assert!(!is_k_connected(&Graph::cycle(6), 3));
        let k77 = complete_bipartite(7, 7);
        assert!(is_k_connected(&k77, 7));
        assert!(!is_k_connected(&k77, 8));
        assert!(!is_k_connected(&Graph::complete(7), 7));
    }

    #[test]
    fn disjoint_path_examples() {
        let k7 = Graph::complete(7);
        let sys = disjoint_paths_between_sets(&k7, &set(&[0, 1, 2]), &set(&[3, 4, 5]), 3).unwrap().unwrap();
        sys.validate(&k7).unwrap();
        assert_eq!(sys.paths.len(), 3);
        assert!(sys.paths.iter().all(|p| p.len() <= 3));

        let p3 = Graph::path(3);
        assert!(disjoint_paths_between_sets(&p3, &set(&[0]), &set(&[2]), 2).unwrap().is_none());

        // Terminal duplication on K8: two twins of each of four anchors.
        let k8 = Graph::complete(8);
        let (h, twins) = duplicate_vertices(&k8, &[0, 1, 2, 3], 2);
        let mut s = set(&[0, 2]);
        let mut t = set(&[1, 3]);
        for (twin, orig) in twins {
            if orig % 2 == 0 { s.insert(twin); } else { t.insert(twin); }
        }
        let sys = disjoint_paths_between_sets(&h, &s, &t, 6).unwrap().unwrap();
        sys.validate(&h).unwrap();
        for p in &sys.paths {
            assert!(s.contains(&p.first().unwrap()) && t.contains(&p.last().unwrap()));
            assert!(p.interior().iter().all(|v| !s.contains(v) && !t.contains(v)));
        }
    }

    #[test]
    fn block_examples() {
        assert_eq!(block_decomposition(&Graph::path(3)).len(), 2);
        assert_eq!(block_decomposition(&Graph::cycle(5)), vec![set(&[0, 1, 2, 3, 4])]);
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        let mut blocks = block_decomposition(&bowtie);
        blocks.sort();
        assert_eq!(blocks, vec![set(&[0, 1, 2]), set(&[2, 3, 4])]);
    }

    fn arb_graph(max_n: usize) -> impl proptest::strategy::Strategy<Value = Graph> {
        use proptest::prelude::*;
        (2..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
                let mut g = Graph::new(n);
                let mut k = 0;
                for u in 0..n {
                    for v in u + 1..n {
                        if bits[k] { g.add_edge(u, v).unwrap(); }
                        k += 1;
                    }
                }
                g
            })
        })
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(200))]
        #[test]
        fn connectivity_matches_brute_force(g in arb_graph(9)) {
            proptest::prop_assert_eq!(vertex_connectivity(&g).unwrap(), brute_connectivity(&g));
        }

        #[test]
        fn menger_matches_cut_enumeration(g in arb_graph(8), a in 0usize..8, b in 0usize..8, k in 1usize..4) {
            let n = g.order();
            let (a, b) = (a % n, b % n);
            proptest::prop_assume!(a != b);
            let (s, t) = (set(&[a]), set(&[b]));
            let found = disjoint_paths_between_sets(&g, &s, &t, k).unwrap();
            if let Some(sys) = &found { sys.validate(&g).unwrap(); }
            // Single-vertex sources: k fully disjoint paths need k = 1.
            let expected = if k == 1 { !brute_separable(&g, &s, &t, 1) } else { false };
            proptest::prop_assert_eq!(found.is_some(), expected);
        }

        #[test]
        fn set_menger_matches_cut_enumeration(g in arb_graph(8), k in 1usize..4) {
            let n = g.order();
            proptest::prop_assume!(n >= 4);
            let (s, t) = (set(&[0, 1]), set(&[n - 2, n - 1]));
            let found = disjoint_paths_between_sets(&g, &s, &t, k).unwrap();
            if let Some(sys) = &found { sys.validate(&g).unwrap(); }
            proptest::prop_assert_eq!(found.is_some(), k <= 2 && !brute_separable(&g, &s, &t, k));
        }

        #[test]
        fn blocks_partition_edges(g in arb_graph(9)) {
            let blocks = block_decomposition(&g);
            for (u, v) in g.edges() {
                let owners = blocks.iter().filter(|b| b.contains(&u) && b.contains(&v)).count();
                proptest::prop_assert_eq!(owners, 1);
            }
        }
    }
}
