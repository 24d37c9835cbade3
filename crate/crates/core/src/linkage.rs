//! Two disjoint paths: exact search and extension through 3-planar parts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{reachable, shortest_path};
use crate::graph::{neighborhood_of_set, Cycle, Graph, GraphError, Inclusivity, Path, VertexId, VertexSet};
use crate::three_planar::{reduce_graph, ThreePlanarError, ThreePlanarWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinkageError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    ThreePlanar(#[from] ThreePlanarError),
    #[error("invalid linkage: {0}")]
    Invalid(String),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
}

/// Two vertex-disjoint paths, `p1` joining `s1,t1` and `p2` joining `s2,t2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Linkage {
    pub p1: Path,
    pub p2: Path,
}

impl Linkage {
    /// Shared structural validator: both paths live in `g`, have the
    /// requested ends, and are vertex-disjoint.
    pub fn validate(&self, g: &Graph, s1: VertexId, t1: VertexId, s2: VertexId, t2: VertexId) -> Result<(), LinkageError> {
        for (p, s, t, name) in [(&self.p1, s1, t1, "p1"), (&self.p2, s2, t2, "p2")] {
            p.validate(g)?;
            if p.ends() != [s, t].into_iter().collect::<VertexSet>() {
                return Err(LinkageError::Invalid(format!("{name} has ends {:?}, expected {{{s}, {t}}}", p.ends())));
            }
        }
        if !self.p1.vertex_set().is_disjoint(&self.p2.vertex_set()) {
            return Err(LinkageError::Invalid("paths intersect".into()));
        }
        Ok(())
    }
}

/// Exact search over induced `s1`–`t1` paths inside `allowed`, each checked
/// for an `s2`–`t2` path in the rest.
pub fn find_two_linkage_in(
    g: &Graph,
    allowed: &[bool],
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2: VertexId,
) -> Option<Linkage> {
    let terms = [s1, t1, s2, t2];
    if terms.iter().any(|&v| !g.contains(v) || !allowed[v]) || terms.iter().copied().collect::<VertexSet>().len() < 4 {
        return None;
    }
    let mut free: Vec<bool> = allowed.to_vec();
    free.resize(g.id_bound(), false);
    let mut on_path = vec![false; g.id_bound()];
    let mut path = vec![s1];
    on_path[s1] = true;
    free[s1] = false;

    fn rec(
        g: &Graph,
        free: &mut Vec<bool>,
        on_path: &mut Vec<bool>,
        path: &mut Vec<VertexId>,
        t1: VertexId,
        s2: VertexId,
        t2: VertexId,
    ) -> Option<Path> {
        let end = *path.last().expect("nonempty");
        // Second path must still exist in what remains.
        if !reachable(g, free, s2)[t2] {
            return None;
        }
        if g.has_edge(end, t1) {
            let mut f = free.clone();
            f[t1] = false;
            if reachable(g, &f, s2)[t2] {
                return shortest_path(g, &f, s2, t2);
            }
            return None;
        }
        let mut f = free.clone();
        f[s2] = false;
        f[t2] = false;
        f[end] = true;
        if !reachable(g, &f, end)[t1] {
            return None;
        }
        let mut nbrs: Vec<VertexId> = g.neighbors(end).to_vec();
        nbrs.sort_unstable();
        for w in nbrs {
            if !free[w] || w == s2 || w == t2 || w == t1 {
                continue;
            }
            if g.neighbors(w).iter().any(|&x| on_path[x] && x != end) {
                continue;
            }
            path.push(w);
            on_path[w] = true;
            free[w] = false;
            if let Some(q) = rec(g, free, on_path, path, t1, s2, t2) {
                return Some(q);
            }
            free[w] = true;
            on_path[w] = false;
            path.pop();
        }
        None
    }

    let q = rec(g, &mut free, &mut on_path, &mut path, t1, s2, t2)?;
    let mut p1 = path;
    p1.push(t1);
    Some(Linkage { p1: Path::new(p1), p2: q })
}

pub fn find_two_linkage(g: &Graph, s1: VertexId, t1: VertexId, s2: VertexId, t2: VertexId) -> Option<Linkage> {
    find_two_linkage_in(g, &g.mask(), s1, t1, s2, t2)
}

/// Shortest path from `u` to `v` whose interior lies in `part`.
fn through_part(g: &Graph, part: &VertexSet, u: VertexId, v: VertexId) -> Option<Vec<VertexId>> {
    let mut allowed = vec![false; g.id_bound()];
    for &x in part {
        allowed[x] = true;
    }
    allowed[u] = true;
    allowed[v] = true;
    shortest_path(g, &allowed, u, v).map(|p| p.0)
}

/// Expands every edge of `seq` missing from `g` through the part whose
/// neighborhood contains both ends. Consecutive reduced edges through the
/// same part are merged.
fn expand(g: &Graph, parts: &[VertexSet], hoods: &[VertexSet], seq: &[VertexId]) -> Result<Vec<VertexId>, LinkageError> {
    let part_of_edge = |u: VertexId, v: VertexId| hoods.iter().position(|n| n.contains(&u) && n.contains(&v));
    let mut out: Vec<VertexId> = vec![seq[0]];
    let mut i = 0;
    while i + 1 < seq.len() {
        let (u, v) = (seq[i], seq[i + 1]);
        if g.has_edge(u, v) {
            out.push(v);
            i += 1;
            continue;
        }
        let k = part_of_edge(u, v).ok_or_else(|| LinkageError::Hypothesis(format!("edge {u}{v} belongs to no part")))?;
        let mut j = i + 1;
        if j + 1 < seq.len() && !g.has_edge(seq[j], seq[j + 1]) && part_of_edge(seq[j], seq[j + 1]) == Some(k) {
            j += 1;
        }
        let w = seq[j];
        let piece = through_part(g, &parts[k], u, w)
            .ok_or_else(|| LinkageError::Hypothesis(format!("no path through part {k} between {u} and {w}")))?;
        out.extend_from_slice(&piece[1..]);
        i = j;
    }
    Ok(out)
}

/// Lifts a linkage of `p(G, 𝒜)` for `s1,t1,s2,t2*` to a linkage of `g` for
/// `s1,t1,s2,t2`. `t2star` defaults to `t2` when `t2` is not in a part.
pub fn extend_linkage_through_witness(
    g: &Graph,
    w: &ThreePlanarWitness,
    reduced: &Linkage,
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2: VertexId,
) -> Result<Linkage, LinkageError> {
    let parts = w.part_sets();
    let p = reduce_graph(g, &parts)?;
    let t2star = reduced.p2.vertices().iter().copied().find(|&x| x != s2 && reduced.p2.ends().contains(&x)).unwrap_or(t2);
    reduced.validate(&p, s1, t1, s2, t2star)?;
    if [s1, t1, s2].contains(&t2star) {
        return Err(LinkageError::Hypothesis("t2* coincides with another terminal".into()));
    }
    let home = w.part_containing(t2);
    match home {
        None if t2star != t2 => return Err(LinkageError::Hypothesis("t2 is outside every part but t2* differs".into())),
        Some(k) if !neighborhood_of_set(g, &parts[k])?.contains(&t2star) => {
            return Err(LinkageError::Hypothesis(format!("t2* = {t2star} is not a neighbor of the part holding {t2}")))
        }
        _ => {}
    }
    let hoods: Vec<VertexSet> = parts.iter().map(|a| neighborhood_of_set(g, a)).collect::<Result<_, _>>()?;
    let orient = |path: &Path, start: VertexId| -> Vec<VertexId> {
        if path.first() == Some(start) {
            path.0.clone()
        } else {
            path.reversed().0
        }
    };
    let p1 = expand(g, &parts, &hoods, &orient(&reduced.p1, s1))?;
    let mut p2 = expand(g, &parts, &hoods, &orient(&reduced.p2, s2))?;
    if let Some(k) = home {
        let part = &parts[k];
        // Leave the part's neighborhood at the first visit and walk to t2.
        let entry = p2.iter().position(|x| hoods[k].contains(x)).expect("t2* is in the neighborhood");
        let x = p2[entry];
        p2.truncate(entry + 1);
        let mut blocked: VertexSet = p1.iter().copied().collect();
        blocked.extend(p2.iter().copied());
        let inner: VertexSet = part.iter().copied().filter(|v| !blocked.contains(v)).collect();
        let tail = through_part(g, &inner, x, t2);
        match tail {
            Some(t) => p2.extend_from_slice(&t[1..]),
            None => {
                // p1 crosses the part; relink both inside G[A ∪ N(A)].
                let (a, b, lo, hi) = p1_span(&p1, &hoods[k]).ok_or_else(|| {
                    LinkageError::Hypothesis(format!("part {k} blocks the extension to {t2}"))
                })?;
                let mut allowed = vec![false; g.id_bound()];
                for &v in part {
                    allowed[v] = true;
                }
                for v in [a, b, x] {
                    allowed[v] = true;
                }
                let inner = find_two_linkage_in(g, &allowed, a, b, x, t2)
                    .ok_or_else(|| LinkageError::Hypothesis(format!("part {k} is not minimal")))?;
                let ab = if inner.p1.first() == Some(a) { inner.p1.0 } else { inner.p1.reversed().0 };
                let xt = if inner.p2.first() == Some(x) { inner.p2.0 } else { inner.p2.reversed().0 };
                let mut new_p1 = p1[..lo].to_vec();
                new_p1.extend_from_slice(&ab);
                new_p1.extend_from_slice(&p1[hi + 1..]);
                p2.extend_from_slice(&xt[1..]);
                let l = Linkage { p1: Path::new(new_p1), p2: Path::new(p2) };
                l.validate(g, s1, t1, s2, t2)?;
                return Ok(l);
            }
        }
    }
    let l = Linkage { p1: Path::new(p1), p2: Path::new(p2) };
    l.validate(g, s1, t1, s2, t2)?;
    Ok(l)
}

/// First and last positions of `p1` in `hood`, when the stretch between them
/// enters the part.
fn p1_span(p1: &[VertexId], hood: &VertexSet) -> Option<(VertexId, VertexId, usize, usize)> {
    let lo = p1.iter().position(|x| hood.contains(x))?;
    let hi = p1.iter().rposition(|x| hood.contains(x))?;
    (hi > lo).then(|| (p1[lo], p1[hi], lo, hi))
}

/// `p1` along the outer cycle avoiding `s2`; `p2` any path from `t2*` to
/// `s2` off `p1`.
pub fn planar_outer_linkage(
    g: &Graph,
    outer: &Cycle,
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2star: VertexId,
) -> Result<Linkage, LinkageError> {
    for v in [s1, t1, s2] {
        if !outer.contains(v) {
            return Err(LinkageError::Hypothesis(format!("{v} is not on the outer cycle")));
        }
    }
    if outer.contains(t2star) {
        return Err(LinkageError::Hypothesis(format!("{t2star} lies on the outer cycle")));
    }
    if [s1, t1, s2].into_iter().collect::<VertexSet>().len() < 3 {
        return Err(LinkageError::Hypothesis("terminals on the outer cycle coincide".into()));
    }
    let forward = outer.arc(s1, t1, Inclusivity::Both)?;
    let p1 = if forward.contains(s2) { outer.arc(t1, s1, Inclusivity::Both)?.reversed() } else { forward };
    let mut allowed = g.mask();
    for &v in p1.vertices() {
        allowed[v] = false;
    }
    let p2 = shortest_path(g, &allowed, s2, t2star)
        .ok_or_else(|| LinkageError::Hypothesis("graph is not 3-connected and planar with this outer cycle".into()))?;
    let l = Linkage { p1, p2 };
    l.validate(g, s1, t1, s2, t2star)?;
    Ok(l)
}

/// Linkage for three terminals on the outer face of `p(G, 𝒜)` and `t2` off
/// it. `t2*` is `t2` itself or the smallest neighbor of its part that is off
/// the outer cycle.
pub fn outer_face_linkage(
    g: &Graph,
    w: &ThreePlanarWitness,
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2: VertexId,
) -> Result<Linkage, LinkageError> {
    let parts = w.part_sets();
    let p = reduce_graph(g, &parts)?;
    let walk = &w.drawing.outer_face;
    let outer = Cycle::new(walk.clone()).map_err(|_| LinkageError::Hypothesis("outer face is not a cycle".into()))?;
    if outer.len() < 4 {
        return Err(LinkageError::Hypothesis(format!("outer face has {} vertices", outer.len())));
    }
    if outer.contains(t2) {
        return Err(LinkageError::Hypothesis(format!("{t2} lies on the outer face")));
    }
    let t2star = match w.part_containing(t2) {
        None => t2,
        Some(k) => neighborhood_of_set(g, &parts[k])?
            .into_iter()
            .find(|v| !outer.contains(*v))
            .ok_or_else(|| LinkageError::Hypothesis(format!("part {k} has every neighbor on the outer cycle")))?,
    };
    let reduced = planar_outer_linkage(&p, &outer, s1, t1, s2, t2star)?;
    extend_linkage_through_witness(g, w, &reduced, s1, t1, s2, t2)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::generate::{octahedron, petersen, rng_for, wheel};
    use crate::three_planar::{draw, find_witness};
    use proptest::prelude::*;

    /// Enumerates every `s1`–`t1` path and looks for an `s2`–`t2` path in the
    /// rest.
    pub(crate) fn brute_linkage_exists(g: &Graph, s1: VertexId, t1: VertexId, s2: VertexId, t2: VertexId) -> bool {
        fn rec(g: &Graph, used: &mut Vec<bool>, v: VertexId, t1: VertexId, s2: VertexId, t2: VertexId) -> bool {
            if v == t1 {
                let free: Vec<bool> = used.iter().map(|u| !u).collect();
                return reachable(g, &free, s2)[t2];
            }
            for &w in g.neighbors(v) {
                if !used[w] && w != s2 && w != t2 {
                    used[w] = true;
                    if rec(g, used, w, t1, s2, t2) {
                        return true;
                    }
                    used[w] = false;
                }
            }
            false
        }
        let mut used = vec![false; g.id_bound()];
        used[s1] = true;
        rec(g, &mut used, s1, t1, s2, t2)
    }

    #[test]
    fn small_examples() {
        let k4 = Graph::complete(4);
        let l = find_two_linkage(&k4, 0, 1, 2, 3).unwrap();
        l.validate(&k4, 0, 1, 2, 3).unwrap();
        assert_eq!((l.p1.len(), l.p2.len()), (2, 2));
        let c4 = Graph::cycle(4);
        assert!(find_two_linkage(&c4, 0, 2, 1, 3).is_none());
        assert!(find_two_linkage(&c4, 0, 1, 2, 3).is_some());
    }

    #[test]
    fn wheel_outer_linkage() {
        let w5 = wheel(5);
        let rim = Cycle::new((0..5).collect()).unwrap();
        let l = planar_outer_linkage(&w5, &rim, 0, 2, 4, 5).unwrap();
        assert_eq!(l.p1.vertices(), &[0, 1, 2]);
        assert_eq!(l.p2.len(), 2);
    }

    #[test]
    fn octahedron_outer_triangle() {
        let oct = octahedron();
        // Triangle 0,1,2 bounds a face; 3,4,5 lie inside.
        let outer = Cycle::new(vec![0, 1, 2]).unwrap();
        let l = planar_outer_linkage(&oct, &outer, 0, 1, 2, 4).unwrap();
        l.validate(&oct, 0, 1, 2, 4).unwrap();
    }

    #[test]
    fn grid_outer_linkage() {
        let mut g = Graph::new(16);
        for r in 0..4 {
            for c in 0..4 {
                let v = 4 * r + c;
                if c < 3 {
                    g.add_edge(v, v + 1).unwrap();
                }
                if r < 3 {
                    g.add_edge(v, v + 4).unwrap();
                }
            }
        }
        let outer = Cycle::new(vec![0, 1, 2, 3, 7, 11, 15, 14, 13, 12, 8, 4]).unwrap();
        let l = planar_outer_linkage(&g, &outer, 0, 3, 15, 5).unwrap();
        l.validate(&g, 0, 3, 15, 5).unwrap();
    }

    #[test]
    fn identity_lift_without_parts() {
        let w5 = wheel(5);
        let w = draw(&w5, &[], &[0, 1, 2, 3, 4]).unwrap().unwrap();
        let reduced = find_two_linkage(&w5, 0, 2, 3, 5).unwrap();
        let lifted = extend_linkage_through_witness(&w5, &w, &reduced, 0, 2, 3, 5).unwrap();
        assert_eq!(lifted, reduced);
        outer_face_linkage(&w5, &w, 0, 2, 3, 5).unwrap().validate(&w5, 0, 2, 3, 5).unwrap();
    }

    /// Wheel on rim 0..6 with hub 6 whose rim edge 12 is replaced by a
    /// minimal blob {7,8} attached to 1, 2 and 6.
    fn wheel_with_blob() -> (Graph, VertexSet) {
        let mut g = wheel(6);
        g.remove_edge(1, 2);
        let a = g.add_vertex();
        let b = g.add_vertex();
        g.add_edge(a, b).unwrap();
        for v in [1, 2, 6] {
            g.add_edge(a, v).unwrap();
            g.add_edge(b, v).unwrap();
        }
        (g, [a, b].into_iter().collect())
    }

    #[test]
    fn reduced_edge_expands_through_part() {
        let (g, blob) = wheel_with_blob();
        let w = draw(&g, std::slice::from_ref(&blob), &[0, 1, 2, 3]).unwrap().unwrap();
        let p = reduce_graph(&g, &[blob]).unwrap();
        let reduced = Linkage { p1: Path::new(vec![0, 1, 2, 3]), p2: Path::new(vec![4, 6]) };
        reduced.validate(&p, 0, 3, 4, 6).unwrap();
        let lifted = extend_linkage_through_witness(&g, &w, &reduced, 0, 3, 4, 6).unwrap();
        assert_eq!(lifted.p1.len(), 5);
        assert!(crate::three_planar::is_minimal(&g, &w, 1000));
    }

    #[test]
    fn tail_extends_into_part() {
        let (g, blob) = wheel_with_blob();
        let w = draw(&g, &[blob], &[0, 1, 2, 3, 4, 5]).unwrap().unwrap();
        // t2 = 8 sits in the part; its neighbor off the rim is the hub.
        let l = outer_face_linkage(&g, &w, 0, 3, 4, 8).unwrap();
        l.validate(&g, 0, 3, 4, 8).unwrap();
    }

    #[test]
    fn blob_witness_outer_linkage() {
        let (g, blob) = wheel_with_blob();
        let w = draw(&g, &[blob], &[0, 1, 2, 3, 4, 5]).unwrap().unwrap();
        let l = outer_face_linkage(&g, &w, 1, 4, 2, 6).unwrap();
        l.validate(&g, 1, 4, 2, 6).unwrap();
    }

    #[test]
    fn petersen_agrees_with_brute_force() {
        let g = petersen();
        let mut rng = rng_for(11);
        use rand::seq::SliceRandom;
        let ids: Vec<VertexId> = (0..10).collect();
        for _ in 0..60 {
            let t: Vec<VertexId> = ids.choose_multiple(&mut rng, 4).copied().collect();
            let found = find_two_linkage(&g, t[0], t[1], t[2], t[3]);
            assert_eq!(found.is_some(), brute_linkage_exists(&g, t[0], t[1], t[2], t[3]));
            if let Some(l) = found {
                l.validate(&g, t[0], t[1], t[2], t[3]).unwrap();
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]
        #[test]
        fn random_instances_agree(seed in any::<u64>(), n in 4usize..=10, p in 0.2f64..0.7) {
            let mut rng = rng_for(seed);
            let g = crate::generate::gnp(n, p, &mut rng);
            let found = find_two_linkage(&g, 0, 1, 2, 3);
            prop_assert_eq!(found.is_some(), brute_linkage_exists(&g, 0, 1, 2, 3));
            if let Some(l) = found {
                prop_assert!(l.validate(&g, 0, 1, 2, 3).is_ok());
            }
            let witness = find_witness(&g, &[0, 2, 1, 3], 5000);
            if n <= 8 {
                prop_assert_ne!(witness.witness().is_some(), brute_linkage_exists(&g, 0, 1, 2, 3));
            }
        }
    }
}
