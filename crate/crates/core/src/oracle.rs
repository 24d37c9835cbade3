//! Exact search for paths and cycles through anchors in a prescribed order.

use crate::connectivity::{fan, reachable, shortest_path};
use crate::graph::{Cycle, Graph, Path, VertexId, VertexSet};

struct Search<'a> {
    g: &'a Graph,
    anchors: Vec<VertexId>,
    closed: bool,
    free: Vec<bool>,
    legs: Vec<Vec<VertexId>>,
}

impl Search<'_> {
    fn leg_count(&self) -> usize {
        if self.closed {
            self.anchors.len()
        } else {
            self.anchors.len() - 1
        }
    }

    fn target(&self, i: usize) -> VertexId {
        self.anchors[(i + 1) % self.anchors.len()]
    }

    /// Free vertices plus the two ends of leg `i`.
    fn leg_mask(&self, i: usize) -> Vec<bool> {
        let mut m = self.free.clone();
        m[self.anchors[i]] = true;
        m[self.target(i)] = true;
        m
    }

    /// Every remaining leg still has its ends connected.
    fn feasible(&self, from: usize) -> bool {
        (from..self.leg_count()).all(|i| reachable(self.g, &self.leg_mask(i), self.anchors[i])[self.target(i)])
    }

    fn run(&mut self, i: usize) -> bool {
        let m = self.leg_count();
        if m - i == 2 {
            let mid = self.anchors[i + 1];
            let ends: VertexSet = [self.anchors[i], self.target(i + 1)].into_iter().collect();
            let mut mask = self.free.clone();
            mask[mid] = true;
            for &e in &ends {
                mask[e] = true;
            }
            let paths = fan(self.g, &mask, mid, &ends, 2);
            if paths.len() < 2 {
                return false;
            }
            let a = self.anchors[i];
            let (to_a, to_b) = if paths[0].last() == Some(a) { (&paths[0], &paths[1]) } else { (&paths[1], &paths[0]) };
            self.legs.push(to_a.reversed().0);
            self.legs.push(to_b.0.clone());
            return true;
        }
        if m - i == 1 {
            let Some(p) = shortest_path(self.g, &self.leg_mask(i), self.anchors[i], self.target(i)) else { return false };
            self.legs.push(p.0);
            return true;
        }
        if !self.feasible(i) {
            return false;
        }
        let start = self.anchors[i];
        let goal = self.target(i);
        let limit = if i == 0 { 1..=self.g.order() } else { self.g.order()..=self.g.order() };
        for depth in limit {
            let mut path = vec![start];
            if self.extend(i, goal, depth, &mut path) {
                return true;
            }
        }
        false
    }

    /// Extends an induced path of leg `i` up to `depth` edges; recurses into
    /// the next leg whenever the goal is reached.
    fn extend(&mut self, i: usize, goal: VertexId, depth: usize, path: &mut Vec<VertexId>) -> bool {
        let end = *path.last().expect("nonempty");
        if self.g.has_edge(end, goal) {
            if i > 0 || path.len() == depth {
                self.legs.push(path.iter().copied().chain([goal]).collect());
                if self.run(i + 1) {
                    return true;
                }
                self.legs.pop();
            }
            return false;
        }
        if path.len() >= depth {
            return false;
        }
        let mut nbrs: Vec<VertexId> = self.g.neighbors(end).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if !self.free[w] || self.g.neighbors(w).iter().any(|x| *x != end && path.contains(x)) {
                continue;
            }
            self.free[w] = false;
            path.push(w);
            if self.extend(i, goal, depth, path) {
                return true;
            }
            path.pop();
            self.free[w] = true;
        }
        false
    }
}

/// Vertex sequence visiting `anchors` in order (cyclically when `closed`),
/// using only vertices in `allowed`.
pub fn ordered_walk(g: &Graph, allowed: &[bool], anchors: &[VertexId], closed: bool) -> Option<Vec<VertexId>> {
    let distinct: VertexSet = anchors.iter().copied().collect();
    if distinct.len() != anchors.len() || anchors.iter().any(|&a| !g.contains(a) || !allowed[a]) {
        return None;
    }
    if anchors.len() < if closed { 3 } else { 1 } {
        return None;
    }
    if anchors.len() == 1 {
        return Some(anchors.to_vec());
    }
    let mut free: Vec<bool> = allowed.to_vec();
    free.resize(g.id_bound(), false);
    for &a in anchors {
        free[a] = false;
    }
    let mut s = Search { g, anchors: anchors.to_vec(), closed, free, legs: Vec::new() };
    if !s.run(0) {
        return None;
    }
    let mut seq: Vec<VertexId> = Vec::new();
    for leg in &s.legs {
        let skip = usize::from(!seq.is_empty());
        seq.extend_from_slice(&leg[skip..]);
    }
    if closed {
        seq.pop();
    }
    Some(seq)
}

pub fn ordered_cycle_in(g: &Graph, allowed: &[bool], anchors: &[VertexId]) -> Option<Cycle> {
    ordered_walk(g, allowed, anchors, true).and_then(|s| Cycle::new(s).ok())
}

pub fn ordered_cycle(g: &Graph, anchors: &[VertexId]) -> Option<Cycle> {
    ordered_cycle_in(g, &g.mask(), anchors)
}

pub fn ordered_path_in(g: &Graph, allowed: &[bool], anchors: &[VertexId]) -> Option<Path> {
    ordered_walk(g, allowed, anchors, false).map(Path::new)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::graph::{visits_in_cyclic_order, visits_in_order};
    use crate::generate::{gnp, rng_for};
    use proptest::prelude::*;

    /// Every cycle of `g` as a vertex sequence, each listed once per
    /// starting point and direction.
    pub(crate) fn all_cycles(g: &Graph) -> Vec<Vec<VertexId>> {
        fn rec(g: &Graph, path: &mut Vec<VertexId>, out: &mut Vec<Vec<VertexId>>) {
            let end = *path.last().unwrap();
            for &w in g.neighbors(end) {
                if w == path[0] && path.len() >= 3 {
                    out.push(path.clone());
                } else if w > path[0] && !path.contains(&w) {
                    path.push(w);
                    rec(g, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        for v in g.vertices() {
            rec(g, &mut vec![v], &mut out);
        }
        out
    }

    #[test]
    fn square_examples() {
        let c4 = Graph::cycle(4);
        let c = ordered_cycle(&c4, &[0, 1, 2, 3]).unwrap();
        c.validate(&c4).unwrap();
        assert!(ordered_cycle(&c4, &[0, 2, 1, 3]).is_none());
        assert!(ordered_cycle(&Graph::complete(4), &[0, 2, 1, 3]).is_some());
    }

    #[test]
    fn ordered_paths() {
        let p = ordered_path_in(&Graph::path(5), &[true; 5], &[0, 2, 4]).unwrap();
        assert_eq!(p.vertices(), &[0, 1, 2, 3, 4]);
        assert!(ordered_path_in(&Graph::path(5), &[true; 5], &[0, 4, 2]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(150))]
        #[test]
        fn agrees_with_cycle_enumeration(seed in any::<u64>(), n in 4usize..=8, p in 0.3f64..0.9) {
            let g = gnp(n, p, &mut rng_for(seed));
            let cycles = all_cycles(&g);
            for anchors in [[0, 1, 2, 3], [0, 2, 1, 3], [1, 3, 0, 2]] {
                let brute = cycles.iter().any(|c| visits_in_cyclic_order(c, &anchors));
                let found = ordered_cycle(&g, &anchors);
                prop_assert_eq!(found.is_some(), brute);
                if let Some(c) = found {
                    prop_assert!(c.validate(&g).is_ok());
                    prop_assert!(visits_in_cyclic_order(c.stored(), &anchors));
                }
            }
            let path = ordered_path_in(&g, &g.mask(), &[0, 1, 2, 3]);
            if let Some(q) = path {
                prop_assert!(q.validate(&g).is_ok());
                prop_assert!(visits_in_order(q.vertices(), &[0, 1, 2, 3]));
                prop_assert_eq!(q.first(), Some(0));
                prop_assert_eq!(q.last(), Some(3));
            }
        }

        #[test]
        fn adding_edges_keeps_cycles(seed in any::<u64>(), n in 5usize..=9) {
            let mut rng = rng_for(seed);
            let g = gnp(n, 0.45, &mut rng);
            let mut h = g.clone();
            for (u, v) in gnp(n, 0.2, &mut rng).edges() {
                let _ = h.add_edge(u, v);
            }
            if ordered_cycle(&g, &[0, 1, 2, 3]).is_some() {
                prop_assert!(ordered_cycle(&h, &[0, 1, 2, 3]).is_some());
            }
        }
    }
}
