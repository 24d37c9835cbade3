//! Skeletons: two anchor cycles `C0 ∋ c0, c1` and `C2 ∋ c2, c3`, a hub
//! cycle `Z`, and four connector paths `P_i` from `c_i` to `z_i ∈ Z` with
//! `z0, z1, z3, z2` in cyclic order on `Z`.
//!
//! Construction and refinement never trust an intermediate claim: each step
//! returns either a validated ordered cycle or a skeleton that passes
//! [`check_skeleton`], and anything else becomes a [`GapError`].

use std::cmp::{Ordering, Reverse};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::certificate::GapError;
use crate::connectivity::{
    block_decomposition, duplicate_vertices, is_k_connected, max_disjoint_paths, shortest_path, shortest_path_between,
};
use crate::graph::{neighborhood_of_set, visits_in_cyclic_order, Cycle, Graph, GraphError, Inclusivity, Path, VertexId, VertexSet};
use crate::linkage::find_two_linkage_in;
use crate::oracle::{ordered_cycle_in, ordered_path_in};
use crate::separating::{
    cycle_avoiding_interior_of, has_shorter_cycle_through, minimum_separating_pair, ordered_path_between_interiors_of,
    ordered_path_from_pair, ordered_path_via_attachment, SeparatingError, SeparatingPair,
};
use crate::walk::{as_ordered_cycle, join};

pub const IDENTITY: [usize; 4] = [0, 1, 2, 3];
/// `c0 ↔ c1`, `c2 ↔ c3`.
pub const SWAP_ENDS: [usize; 4] = [1, 0, 3, 2];
/// `C0 ↔ C2`.
pub const SWAP_CYCLES: [usize; 4] = [2, 3, 0, 1];
pub const SWAP_BOTH: [usize; 4] = [3, 2, 1, 0];
/// Relabelings that preserve the skeleton shape, indexed by the old label
/// that becomes `c0`.
pub const KLEIN: [[usize; 4]; 4] = [IDENTITY, SWAP_ENDS, SWAP_CYCLES, SWAP_BOTH];
/// `c0' = c3, c1' = c0, c2' = c1, c3' = c2`.
pub const SHIFT: [usize; 4] = [3, 0, 1, 2];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SkeletonError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Separating(#[from] SeparatingError),
    #[error("hypothesis fails: {0}")]
    Hypothesis(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Gap(Box<GapError>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skeleton {
    /// Current labels `c0..c3`.
    pub anchors: [VertexId; 4],
    pub c0_cycle: Cycle,
    pub c2_cycle: Cycle,
    pub z_cycle: Cycle,
    /// `P_i` listed from `c_i` to `z_i`.
    pub paths: [Path; 4],
    pub z_contacts: [VertexId; 4],
    /// `anchors[i]` is input anchor number `label_permutation[i]`.
    pub label_permutation: [usize; 4],
}

impl Skeleton {
    pub fn new(anchors: [VertexId; 4], c0_cycle: Cycle, c2_cycle: Cycle, z_cycle: Cycle, paths: [Path; 4]) -> Self {
        let z_contacts = std::array::from_fn(|i| paths[i].last().unwrap_or(usize::MAX));
        Skeleton { anchors, c0_cycle, c2_cycle, z_cycle, paths, z_contacts, label_permutation: IDENTITY }
    }

    /// The anchor cycle holding `c_i`.
    pub fn cycle_of(&self, i: usize) -> &Cycle {
        if i < 2 {
            &self.c0_cycle
        } else {
            &self.c2_cycle
        }
    }

    fn set_cycle(&mut self, i: usize, c: Cycle) {
        if i < 2 {
            self.c0_cycle = c;
        } else {
            self.c2_cycle = c;
        }
    }

    /// New label `i` is old label `perm[i]`. Only the [`KLEIN`] relabelings
    /// keep a skeleton valid.
    pub fn relabel(&self, perm: [usize; 4]) -> Skeleton {
        let (c0_cycle, c2_cycle) = if perm[0] < 2 {
            (self.c0_cycle.clone(), self.c2_cycle.clone())
        } else {
            (self.c2_cycle.clone(), self.c0_cycle.clone())
        };
        Skeleton {
            anchors: perm.map(|p| self.anchors[p]),
            c0_cycle,
            c2_cycle,
            z_cycle: self.z_cycle.clone(),
            paths: perm.map(|p| self.paths[p].clone()),
            z_contacts: perm.map(|p| self.z_contacts[p]),
            label_permutation: perm.map(|p| self.label_permutation[p]),
        }
    }

    /// Anchors in the caller's original labeling.
    pub fn input_anchors(&self) -> [VertexId; 4] {
        let mut out = [0; 4];
        for i in 0..4 {
            out[self.label_permutation[i]] = self.anchors[i];
        }
        out
    }

    pub fn vertex_set(&self) -> VertexSet {
        let mut s: VertexSet = self.c0_cycle.vertex_set();
        s.extend(self.c2_cycle.stored());
        s.extend(self.z_cycle.stored());
        for p in &self.paths {
            s.extend(p.vertices());
        }
        s
    }

    pub fn path_total(&self) -> usize {
        self.paths.iter().map(Path::len).sum()
    }

    /// `H = G - (V(C0) ∪ V(C2))`, ids preserved.
    pub fn residual(&self, g: &Graph) -> Graph {
        g.without(self.c0_cycle.stored().iter().chain(self.c2_cycle.stored()).copied())
    }

    /// `Z` oriented so that `z0, z1, z3, z2` follow its orientation.
    pub fn oriented_z(&self) -> Cycle {
        let [z0, z1, z2, z3] = self.z_contacts;
        for c in [self.z_cycle.clone(), self.z_cycle.reversed()] {
            let seq = c.sequence();
            let Some(s) = seq.iter().position(|&x| x == z0) else { break };
            let rank = |v: VertexId| seq.iter().position(|&x| x == v).map(|p| (p + seq.len() - s) % seq.len());
            if let (Some(a), Some(b), Some(d)) = (rank(z1), rank(z3), rank(z2)) {
                if a < b && b < d {
                    return c;
                }
            }
        }
        self.z_cycle.clone()
    }
}

/// Every defining condition of a skeleton, with the first violation named.
pub fn check_skeleton(g: &Graph, s: &Skeleton) -> Result<(), String> {
    let anchors: VertexSet = s.anchors.iter().copied().collect();
    if anchors.len() != 4 {
        return Err("anchors are not distinct".into());
    }
    let cycles = [&s.c0_cycle, &s.c2_cycle, &s.z_cycle];
    for c in cycles {
        c.validate(g).map_err(|e| e.to_string())?;
    }
    let sets: Vec<VertexSet> = cycles.iter().map(|c| c.vertex_set()).collect();
    for i in 0..3 {
        for j in i + 1..3 {
            if !sets[i].is_disjoint(&sets[j]) {
                return Err(format!("cycles {i} and {j} intersect"));
            }
        }
    }
    for i in 0..4 {
        if !sets[i / 2].contains(&s.anchors[i]) {
            return Err(format!("c{i} is not on its anchor cycle"));
        }
    }
    let on_cycles: VertexSet = sets.iter().flatten().copied().collect();
    let mut used = VertexSet::new();
    for i in 0..4 {
        let p = &s.paths[i];
        p.validate(g).map_err(|e| format!("P{i}: {e}"))?;
        if p.first() != Some(s.anchors[i]) {
            return Err(format!("P{i} does not start at c{i}"));
        }
        let z = p.last().expect("validated path is nonempty");
        if z != s.z_contacts[i] || !sets[2].contains(&z) {
            return Err(format!("P{i} does not end at z{i} on Z"));
        }
        if p.interior().iter().any(|v| on_cycles.contains(v)) || p.len() < 2 {
            return Err(format!("P{i} is not internally disjoint from the cycles"));
        }
        for &v in p.vertices() {
            if !used.insert(v) {
                return Err(format!("P{i} meets another connector at {v}"));
            }
        }
    }
    let [z0, z1, z2, z3] = s.z_contacts;
    if !visits_in_cyclic_order(s.z_cycle.stored(), &[z0, z1, z3, z2]) {
        return Err("z0, z1, z3, z2 are not in cyclic order on Z".into());
    }
    Ok(())
}

pub fn validate_skeleton(g: &Graph, s: &Skeleton) -> bool {
    check_skeleton(g, s).is_ok()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SkeletonOutcome {
    OrderedCycle { cycle: Cycle },
    Skeleton { skeleton: Skeleton },
}

impl SkeletonOutcome {
    pub fn cycle(&self) -> Option<&Cycle> {
        match self {
            SkeletonOutcome::OrderedCycle { cycle } => Some(cycle),
            SkeletonOutcome::Skeleton { .. } => None,
        }
    }

    pub fn skeleton(&self) -> Option<&Skeleton> {
        match self {
            SkeletonOutcome::Skeleton { skeleton } => Some(skeleton),
            SkeletonOutcome::OrderedCycle { .. } => None,
        }
    }
}

/// Branch tags and counters collected along a run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Trace {
    pub events: Vec<String>,
    pub refine_iterations: usize,
    pub union_searches: usize,
}

impl Trace {
    pub fn tag(&mut self, t: &str) {
        self.events.push(t.to_string());
    }

    pub fn has(&self, t: &str) -> bool {
        self.events.iter().any(|e| e == t || e.strip_suffix("+union") == Some(t))
    }
}

pub(crate) fn gap(g: &Graph, s: Option<&Skeleton>, stage: &str, detail: impl Into<String>, trace: &Trace) -> SkeletonError {
    let anchors = s.map(|s| s.input_anchors().to_vec()).unwrap_or_default();
    let sk = s.and_then(|s| serde_json::to_value(s).ok());
    SkeletonError::Gap(Box::new(GapError::new(g, &anchors, stage, detail, sk, &trace.events)))
}

/// Turns a non-gap failure inside a construction step into a gap.
fn as_gap(e: SkeletonError, g: &Graph, s: &Skeleton, stage: &str, trace: &Trace) -> SkeletonError {
    match e {
        SkeletonError::Gap(_) => e,
        other => gap(g, Some(s), stage, other.to_string(), trace),
    }
}

pub(crate) fn mask_of<'a>(g: &Graph, sets: impl IntoIterator<Item = &'a VertexId>) -> Vec<bool> {
    let mut m = vec![false; g.id_bound()];
    for &v in sets {
        if g.contains(v) {
            m[v] = true;
        }
    }
    m
}

/// `from` to `to` along the orientation of `c`, both included.
pub(crate) fn walk(c: &Cycle, from: VertexId, to: VertexId) -> Vec<VertexId> {
    if from == to {
        return vec![from];
    }
    c.arc(from, to, Inclusivity::Both).map(|p| p.0).unwrap_or_default()
}

/// Arc from `from` to `to` in whichever direction contains `via`.
pub(crate) fn arc_via(c: &Cycle, from: VertexId, to: VertexId, via: VertexId) -> Vec<VertexId> {
    for d in [c.clone(), c.reversed()] {
        let w = walk(&d, from, to);
        if w.contains(&via) {
            return w;
        }
    }
    Vec::new()
}

/// Subpath of `p` from `a` to `b`.
pub(crate) fn seg(p: &Path, a: VertexId, b: VertexId) -> Vec<VertexId> {
    p.subpath(a, b).map(|q| q.0).unwrap_or_default()
}

fn rev(v: &[VertexId]) -> Vec<VertexId> {
    v.iter().rev().copied().collect()
}

fn oriented(p: &Path, start: VertexId) -> Vec<VertexId> {
    if p.first() == Some(start) {
        p.0.clone()
    } else {
        p.reversed().0
    }
}

/// Disjoint paths `s1`–`t1` and `s2`–`t2` inside `allowed`, listed from the
/// first terminal of each pair; a pair with equal terminals is one vertex.
pub(crate) fn link(
    g: &Graph,
    allowed: &[bool],
    s1: VertexId,
    t1: VertexId,
    s2: VertexId,
    t2: VertexId,
) -> Option<(Vec<VertexId>, Vec<VertexId>)> {
    if [s1, t1, s2, t2].iter().any(|&v| !g.contains(v) || !allowed[v]) {
        return None;
    }
    if s1 == t1 || s2 == t2 {
        if [s1, t1].iter().any(|v| [s2, t2].contains(v)) {
            return None;
        }
        let (single, a, b, first) = if s1 == t1 { (s1, s2, t2, true) } else { (s2, s1, t1, false) };
        let mut m = allowed.to_vec();
        m[single] = false;
        let p = if a == b { vec![a] } else { shortest_path(g, &m, a, b)?.0 };
        return Some(if first { (vec![single], p) } else { (p, vec![single]) });
    }
    let l = find_two_linkage_in(g, allowed, s1, t1, s2, t2)?;
    Some((oriented(&l.p1, s1), oriented(&l.p2, s2)))
}

/// Validates `seq` as an ordered cycle; otherwise searches for one inside
/// the vertices of `seq` and `union`, which the construction guarantees to
/// contain one.
fn close(
    g: &Graph,
    seq: Vec<VertexId>,
    anchors: &[VertexId; 4],
    union: &VertexSet,
    trace: &mut Trace,
    tag: &str,
) -> Option<Cycle> {
    if let Ok(c) = as_ordered_cycle(g, seq.clone(), anchors) {
        trace.tag(tag);
        return Some(c);
    }
    let m = mask_of(g, union.iter().chain(&seq));
    let c = ordered_cycle_in(g, &m, anchors)?;
    trace.tag(&format!("{tag}+union"));
    trace.union_searches += 1;
    Some(c)
}

/// For a path `p` from `V(C0)` to `V(C2)` internally disjoint from `s`:
/// `None` when its ends are `{c0, c2}` or `{c1, c3}`, otherwise the ordered
/// cycle running around both anchor cycles, two connectors, an arc of `Z`,
/// and `p`.
pub fn cross_path_dichotomy(g: &Graph, s: &Skeleton, p: &Path) -> Result<Option<Cycle>, SkeletonError> {
    p.validate(g)?;
    let (Some(a), Some(b)) = (p.first(), p.last()) else {
        return Err(SkeletonError::Input("empty path".into()));
    };
    let seq = if s.c0_cycle.contains(a) && s.c2_cycle.contains(b) {
        p.0.clone()
    } else if s.c2_cycle.contains(a) && s.c0_cycle.contains(b) {
        p.reversed().0
    } else {
        return Err(SkeletonError::Input("path does not join C0 to C2".into()));
    };
    let sv = s.vertex_set();
    if p.interior().iter().any(|v| sv.contains(v)) {
        return Err(SkeletonError::Input("path is not internally disjoint from the skeleton".into()));
    }
    let (x, y) = (seq[0], seq[seq.len() - 1]);
    let c = s.anchors;
    let ends: VertexSet = [x, y].into_iter().collect();
    if ends == [c[0], c[2]].into_iter().collect() || ends == [c[1], c[3]].into_iter().collect() {
        return Ok(None);
    }
    let z = &s.z_cycle;
    for (i, j) in [(0, 1), (1, 0)] {
        for (k, l) in [(2, 3), (3, 2)] {
            for c0d in [s.c0_cycle.clone(), s.c0_cycle.reversed()] {
                let first = walk(&c0d, x, c[j]);
                if !first.contains(&c[i]) {
                    continue;
                }
                for c2d in [s.c2_cycle.clone(), s.c2_cycle.reversed()] {
                    let last = walk(&c2d, c[k], y);
                    if !last.contains(&c[l]) {
                        continue;
                    }
                    for zd in [z.clone(), z.reversed()] {
                        let hub = walk(&zd, s.z_contacts[j], s.z_contacts[k]);
                        let cyc = join(&[&first, &s.paths[j].0, &hub, &rev(&s.paths[k].0), &last, &rev(&seq)]);
                        if let Ok(cy) = as_ordered_cycle(g, cyc, &c) {
                            return Ok(Some(cy));
                        }
                    }
                }
            }
        }
    }
    Err(gap(g, Some(s), "cross-path", format!("no ordered cycle through path {:?}", seq), &Trace::default()))
}

fn check_host(g: &Graph, anchors: &[VertexId; 4]) -> Result<(), SkeletonError> {
    for &a in anchors {
        g.check_vertex(a)?;
    }
    if anchors.iter().copied().collect::<VertexSet>().len() != 4 {
        return Err(SkeletonError::Input("anchors are not distinct".into()));
    }
    if g.order() < 8 {
        return Err(SkeletonError::Hypothesis("a 7-connected graph has at least 8 vertices".into()));
    }
    if !is_k_connected(g, 7) {
        return Err(SkeletonError::Hypothesis("graph is not 7-connected".into()));
    }
    Ok(())
}

/// Index of the path of `family` containing `v`.
fn holder(family: &[Path], v: VertexId) -> Option<usize> {
    family.iter().position(|p| p.contains(v))
}

/// Routes inside a family of three internally disjoint `a`–`b` paths from
/// `x` to `y` through both `a` and `b`, in either order.
fn routes(family: &[Path], x: VertexId, y: VertexId) -> Vec<Vec<VertexId>> {
    let (a, b) = (family[0].first().expect("path"), family[0].last().expect("path"));
    let (Some(ix), Some(iy)) = (holder(family, x), holder(family, y)) else { return Vec::new() };
    let mut out = Vec::new();
    for (first, second) in [(a, b), (b, a)] {
        for m in 0..family.len() {
            if m == ix || m == iy {
                continue;
            }
            out.push(join(&[&seg(&family[ix], x, first), &seg(&family[m], first, second), &seg(&family[iy], second, y)]));
        }
    }
    out
}

/// Builds a skeleton on a 7-connected host, or the ordered cycle met on the
/// way. The returned skeleton records the relabeling it applied.
pub fn build_skeleton(g: &Graph, anchors: [VertexId; 4], trace: &mut Trace) -> Result<SkeletonOutcome, SkeletonError> {
    check_host(g, &anchors)?;
    let c = anchors;
    let stage = "build";
    let fail = |detail: String, trace: &Trace| {
        let e = GapError::new(g, &anchors, stage, detail, None, &trace.events);
        SkeletonError::Gap(Box::new(e))
    };
    // Adjacent consecutive anchors close an ordered path.
    for i in 0..4 {
        let (a, b) = (c[i], c[(i + 1) % 4]);
        if g.has_edge(a, b) {
            let order = [b, c[(i + 2) % 4], c[(i + 3) % 4], a];
            let p = ordered_path_in(g, &g.mask(), &order).ok_or_else(|| fail(format!("no ordered path {order:?}"), trace))?;
            let cyc = as_ordered_cycle(g, p.0, &c).map_err(|e| fail(e.to_string(), trace))?;
            trace.tag("build.adjacent-anchors");
            return Ok(SkeletonOutcome::OrderedCycle { cycle: cyc });
        }
    }
    // Six disjoint paths between the two anchor classes.
    let (twin_graph, twins) = duplicate_vertices(g, &c, 2);
    let original = |v: VertexId| twins.iter().find(|t| t.0 == v).map_or(v, |t| t.1);
    let class = |members: [VertexId; 2]| -> VertexSet {
        let mut s: VertexSet = members.into_iter().collect();
        s.extend(twins.iter().filter(|t| members.contains(&t.1)).map(|t| t.0));
        s
    };
    let found = max_disjoint_paths(&twin_graph, &twin_graph.mask(), &class([c[0], c[2]]), &class([c[1], c[3]]), 6);
    if found.len() < 6 {
        return Err(fail(format!("only {} disjoint paths between anchor classes", found.len()), trace));
    }
    let six: Vec<Path> = found.iter().map(|p| Path::new(p.0.iter().map(|&v| original(v)).collect())).collect();
    let between = |i: usize, j: usize| -> Vec<Vec<VertexId>> {
        six.iter()
            .filter(|p| p.ends() == [c[i], c[j]].into_iter().collect())
            .map(|p| oriented(p, c[i]))
            .collect()
    };
    let (m01, m03) = (between(0, 1), between(0, 3));
    if !m01.is_empty() && !m03.is_empty() {
        let (m12, m23) = (between(1, 2), between(2, 3));
        if m12.is_empty() || m23.is_empty() {
            return Err(fail("anchor path classes are unbalanced".into(), trace));
        }
        let seq = join(&[&m01[0], &m12[0], &m23[0], &rev(&m03[0])]);
        let cyc = as_ordered_cycle(g, seq, &c).map_err(|e| fail(e.to_string(), trace))?;
        trace.tag("build.four-classes");
        return Ok(SkeletonOutcome::OrderedCycle { cycle: cyc });
    }
    let perm = if m01.len() == 3 {
        IDENTITY
    } else if m03.len() == 3 {
        trace.tag("build.shift-labels");
        SHIFT
    } else {
        return Err(fail("anchor path classes are mixed".into(), trace));
    };
    let d = perm.map(|p| c[p]);
    let family = |a: VertexId, b: VertexId| -> Vec<Path> {
        six.iter().filter(|p| p.ends() == [a, b].into_iter().collect()).map(|p| Path::new(oriented(p, a))).collect()
    };
    let (b0, b2) = (family(d[0], d[1]), family(d[2], d[3]));
    if b0.len() != 3 || b2.len() != 3 {
        return Err(fail("anchor families do not have three paths each".into(), trace));
    }
    // Two bridges between the families.
    let vb = |f: &[Path], skip: [VertexId; 2]| -> VertexSet {
        f.iter().flat_map(|p| p.vertices().iter().copied()).filter(|v| !skip.contains(v)).collect()
    };
    let mut allowed = g.mask();
    for &a in &c {
        allowed[a] = false;
    }
    let rs = max_disjoint_paths(g, &allowed, &vb(&b0, [d[0], d[1]]), &vb(&b2, [d[2], d[3]]), 2);
    if rs.len() < 2 {
        return Err(fail("fewer than two bridges between the families".into(), trace));
    }
    let (mut r0, mut r1) = (rs[0].0.clone(), rs[1].0.clone());
    let ends_of = |r0: &[VertexId], r1: &[VertexId]| (r0[0], r1[0], r0[r0.len() - 1], r1[r1.len() - 1]);
    let (r00, r10, r02, r12) = ends_of(&r0, &r1);
    if holder(&b0, r00) != holder(&b0, r10) || holder(&b2, r02) != holder(&b2, r12) {
        let mut union: VertexSet = b0.iter().chain(&b2).flat_map(|p| p.vertices().iter().copied()).collect();
        union.extend(r0.iter().chain(&r1));
        for route0 in routes(&b0, r00, r10) {
            for route2 in routes(&b2, r12, r02) {
                let seq = join(&[&route0, &r1, &route2, &rev(&r0)]);
                if let Ok(cyc) = as_ordered_cycle(g, seq, &d) {
                    trace.tag("build.split-bridges");
                    return Ok(SkeletonOutcome::OrderedCycle { cycle: cyc });
                }
            }
        }
        let cyc = close(g, Vec::new(), &d, &union, trace, "build.split-bridges")
            .ok_or_else(|| fail("bridges on different paths but no ordered cycle".into(), trace))?;
        return Ok(SkeletonOutcome::OrderedCycle { cycle: cyc });
    }
    let k0 = holder(&b0, r00).expect("bridge end on family");
    let k2 = holder(&b2, r02).expect("bridge end on family");
    let pos = |p: &Path, v: VertexId| p.vertices().iter().position(|&x| x == v).expect("on path");
    if pos(&b0[k0], r00) > pos(&b0[k0], r10) {
        std::mem::swap(&mut r0, &mut r1);
    }
    let (r00, r10, r02, r12) = ends_of(&r0, &r1);
    let (p00, p02) = (&b0[k0], &b2[k2]);
    let other = |f: &[Path], k: usize| -> Vec<Path> { (0..3).filter(|&i| i != k).map(|i| f[i].clone()).collect() };
    let (o0, o2) = (other(&b0, k0), other(&b2, k2));
    if pos(p02, r02) > pos(p02, r12) {
        let seq = join(&[
            &seg(p00, r00, d[0]),
            &o0[0].0,
            &seg(p00, d[1], r10),
            &r1,
            &seg(p02, r12, d[2]),
            &o2[0].0,
            &seg(p02, d[3], r02),
            &rev(&r0),
        ]);
        let cyc = as_ordered_cycle(g, seq, &d).map_err(|e| fail(e.to_string(), trace))?;
        trace.tag("build.crossed-bridges");
        return Ok(SkeletonOutcome::OrderedCycle { cycle: cyc });
    }
    let ring = |f: &[Path]| -> Result<Cycle, GraphError> {
        let mut seq = join(&[&f[0].0, &rev(&f[1].0)]);
        seq.pop();
        Cycle::new(seq)
    };
    let mut zseq = join(&[&seg(p00, r00, r10), &r1, &seg(p02, r12, r02), &rev(&r0)]);
    zseq.pop();
    let mut sk = Skeleton::new(
        d,
        ring(&o0)?,
        ring(&o2)?,
        Cycle::new(zseq)?,
        [
            Path::new(seg(p00, d[0], r00)),
            Path::new(seg(p00, d[1], r10)),
            Path::new(seg(p02, d[2], r02)),
            Path::new(seg(p02, d[3], r12)),
        ],
    );
    sk.label_permutation = perm;
    check_skeleton(g, &sk).map_err(|e| gap(g, Some(&sk), stage, e, trace))?;
    trace.tag("build.skeleton");
    Ok(SkeletonOutcome::Skeleton { skeleton: sk })
}

/// The residual graph split around the block holding `Z`.
struct Residual {
    h: Graph,
    block: VertexSet,
    /// Components of `H - V(B)` meeting the skeleton, largest first.
    with_s: Vec<VertexSet>,
    /// Components of `H - V(B)` missing the skeleton, largest first.
    without_s: Vec<VertexSet>,
}

fn residual(g: &Graph, s: &Skeleton) -> Residual {
    let h = s.residual(g);
    let z = s.z_cycle.vertex_set();
    let block = block_decomposition(&h).into_iter().find(|b| z.is_subset(b)).unwrap_or_default();
    let sv = s.vertex_set();
    let (mut with_s, mut without_s): (Vec<VertexSet>, Vec<VertexSet>) = h
        .without(block.iter().copied())
        .components()
        .into_iter()
        .map(|c| c.into_iter().collect::<VertexSet>())
        .partition(|c| c.iter().any(|v| sv.contains(v)));
    with_s.sort_by_key(|c| Reverse(c.len()));
    without_s.sort_by_key(|c| Reverse(c.len()));
    Residual { h, block, with_s, without_s }
}

/// The extremal quantities driving refinement, compared so that greater is
/// better: fewer connector vertices, then a larger hub block, then
/// lexicographically larger component size vectors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Measure {
    pub path_total: usize,
    pub block: usize,
    pub with_skeleton: Vec<usize>,
    pub without_skeleton: Vec<usize>,
}

impl Measure {
    fn key(&self) -> (Reverse<usize>, usize, &[usize], &[usize]) {
        (Reverse(self.path_total), self.block, &self.with_skeleton, &self.without_skeleton)
    }
}

impl PartialOrd for Measure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Measure {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

pub fn measure(g: &Graph, s: &Skeleton) -> Measure {
    let r = residual(g, s);
    Measure {
        path_total: s.path_total(),
        block: r.block.len(),
        with_skeleton: r.with_s.iter().map(VertexSet::len).collect(),
        without_skeleton: r.without_s.iter().map(VertexSet::len).collect(),
    }
}

enum Step {
    Cycle(Cycle),
    Better(Skeleton),
}

impl Step {
    /// Undoes a [`KLEIN`] relabeling (each is an involution).
    fn unrelabel(self, perm: [usize; 4]) -> Step {
        match self {
            Step::Better(s) => Step::Better(s.relabel(perm)),
            c => c,
        }
    }
}

/// The same pair seen from the other orientation of its cycle, so that the
/// old `R1` plays the part of `R0`.
fn swap_sides(pair: &SeparatingPair) -> SeparatingPair {
    SeparatingPair {
        r0: pair.r1.reversed(),
        r1: pair.r0.reversed(),
        cycle: pair.cycle.reversed(),
        v0: pair.v0,
        v1: pair.v1,
        attachment: pair.attachment.clone(),
    }
}

fn shorter_anchor_cycle(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Option<Step> {
    for i in [0, 2] {
        if let Some(c) = has_shorter_cycle_through(g, s.cycle_of(i), s.anchors[i], s.anchors[i + 1]) {
            let mut t = s.clone();
            t.set_cycle(i, c);
            trace.tag("refine.shorter-cycle");
            return Some(Step::Better(t));
        }
    }
    None
}

/// A cross path through `set` (disjoint from the skeleton) that closes an
/// ordered cycle.
fn cross_through(g: &Graph, s: &Skeleton, set: &VertexSet, trace: &mut Trace, tag: &str) -> Result<Option<Cycle>, SkeletonError> {
    let nbrs = neighborhood_of_set(g, set)?;
    for &x in nbrs.iter().filter(|v| s.c0_cycle.contains(**v)) {
        for &y in nbrs.iter().filter(|v| s.c2_cycle.contains(**v)) {
            let mut m = mask_of(g, set);
            m[x] = true;
            m[y] = true;
            let mut m2 = m.clone();
            m2[y] = false;
            let Some(p) = shortest_path(g, &m, x, y) else { continue };
            if let Some(c) = cross_path_dichotomy(g, s, &p)? {
                trace.tag(tag);
                return Ok(Some(c));
            }
        }
    }
    Ok(None)
}

fn empty_intersection(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<Option<Step>, SkeletonError> {
    let r = residual(g, s);
    let Some(a) = r.without_s.last().cloned() else { return Ok(None) };
    if let Some(c) = cross_through(g, s, &a, trace, "refine.empty-intersection.cross")? {
        return Ok(Some(Step::Cycle(c)));
    }
    let nbrs = neighborhood_of_set(g, &a)?;
    let on = |i: usize| nbrs.iter().filter(|v| s.cycle_of(i).contains(**v)).count();
    let perm = if on(0) >= 3 {
        IDENTITY
    } else if on(2) >= 3 {
        SWAP_CYCLES
    } else {
        return Err(gap(g, Some(s), "refine.empty-intersection", "detached component has few cycle neighbors", trace));
    };
    let t = s.relabel(perm);
    let r = residual(g, &t);
    Ok(Some(empty_intersection_c0(g, &t, &a, &r, trace)?.unrelabel(perm)))
}

fn empty_intersection_c0(g: &Graph, s: &Skeleton, a: &VertexSet, r: &Residual, trace: &mut Trace) -> Result<Step, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let pair = minimum_separating_pair(g, &s.c0_cycle, c0, c1, a)?;
    let ints = pair.interiors();
    let hset = r.h.vertex_set();
    let mut x: VertexSet = ints.clone();
    x.extend(a);
    let mut t = pair.ends();
    t.extend(neighborhood_of_set(g, a)?.intersection(&hset));
    let edges: Vec<(VertexId, VertexId)> = x
        .iter()
        .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .filter(|(_, v)| !x.contains(v) && !t.contains(v))
        .collect();
    for &(u, v) in &edges {
        if s.c2_cycle.contains(v) && ints.contains(&u) {
            if let Some(c) = cross_path_dichotomy(g, s, &Path::new(vec![u, v]))? {
                trace.tag("refine.empty-intersection.cross");
                return Ok(Step::Cycle(c));
            }
        }
    }
    let into_h: Vec<(VertexId, VertexId)> =
        edges.iter().copied().filter(|(u, v)| ints.contains(u) && hset.contains(v)).collect();
    let pick = into_h
        .iter()
        .enumerate()
        .find_map(|(i, e)| into_h[i + 1..].iter().find(|f| f.0 != e.0 && f.1 != e.1).map(|f| (*e, *f)));
    let Some(((mut u, mut v), (mut u2, mut v2))) = pick else {
        return Err(gap(g, Some(s), "refine.empty-intersection", "no two disjoint edges leave the separated side", trace));
    };
    let side = |w: VertexId| usize::from(!pair.r0.interior().contains(&w));
    let reroute = if side(u) == side(u2) || !r.block.contains(&v) {
        Some(side(u))
    } else if !r.block.contains(&v2) {
        Some(side(u2))
    } else {
        None
    };
    if let Some(i) = reroute {
        let p = if i == 0 { pair.clone() } else { swap_sides(&pair) };
        let av = cycle_avoiding_interior_of(g, &p)?;
        let mut next = s.clone();
        next.c0_cycle = av.cycle;
        trace.tag("refine.empty-intersection.reroute");
        return Ok(Step::Better(next));
    }
    if side(u) == 1 {
        std::mem::swap(&mut u, &mut u2);
        std::mem::swap(&mut v, &mut v2);
    }
    let first_in_block = |p: &Path| p.vertices().iter().copied().find(|w| r.block.contains(w));
    let (Some(z2b), Some(z3b)) = (first_in_block(&s.paths[2]), first_in_block(&s.paths[3])) else {
        return Err(gap(g, Some(s), "refine.empty-intersection", "connector misses the hub block", trace));
    };
    let rs = max_disjoint_paths(g, &mask_of(g, &r.block), &[v, v2].into_iter().collect(), &[z2b, z3b].into_iter().collect(), 2);
    if rs.len() < 2 {
        return Err(gap(g, Some(s), "refine.empty-intersection", "hub block lacks two disjoint paths", trace));
    }
    let (r2, r3) = if rs[0].last() == Some(z2b) { (&rs[0], &rs[1]) } else { (&rs[1], &rs[0]) };
    let (lead, lead_v, tail_v) = if r2.first() == Some(v) {
        (ordered_path_between_interiors_of(g, &pair, u2, u)?.path, v, v2)
    } else {
        (ordered_path_between_interiors_of(g, &pair, u, u2)?.path, v2, v)
    };
    let seq = join(&[
        &lead.0,
        &oriented(r2, lead_v),
        &seg(&s.paths[2], z2b, c2),
        &walk(&s.c2_cycle, c2, c3),
        &seg(&s.paths[3], c3, z3b),
        &rev(&oriented(r3, tail_v)),
    ]);
    let mut union = s.vertex_set();
    union.extend(a);
    union.extend(&r.block);
    close(g, seq, &s.anchors, &union, trace, "refine.empty-intersection.linked")
        .map(Step::Cycle)
        .ok_or_else(|| gap(g, Some(s), "refine.empty-intersection", "linked construction failed", trace))
}

fn long_connector(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<Option<Step>, SkeletonError> {
    let Some(j) = (0..4).find(|&j| s.paths[j].len() > 2) else { return Ok(None) };
    let perm = KLEIN[j];
    let t = s.relabel(perm);
    Ok(Some(long_connector0(g, &t, trace)?.unrelabel(perm)))
}

fn long_connector0(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<Step, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [z0, z1, z2, _] = s.z_contacts;
    let h = s.residual(g);
    let hz = h.without([z0]);
    let comps: Vec<VertexSet> = hz.components().into_iter().map(|c| c.into_iter().collect()).collect();
    let p0 = &s.paths[0];
    let int0 = p0.interior();
    let home = |v: VertexId| comps.iter().position(|c| c.contains(&v));
    let (Some(k0), Some(k1)) = (int0.iter().next().and_then(|&v| home(v)), home(z1)) else {
        return Err(gap(g, Some(s), "refine.long-connector", "connector interior or z1 missing from H - z0", trace));
    };
    if comps.len() > 2 || (comps.len() == 2 && k0 == k1) {
        return Err(gap(g, Some(s), "refine.long-connector", "H - z0 has a component off the skeleton", trace));
    }
    let zo = s.oriented_z();
    if k0 == k1 {
        let mut targets: VertexSet = s.vertex_set().intersection(&h.vertex_set()).copied().collect();
        for v in p0.vertices() {
            targets.remove(v);
        }
        let p = shortest_path_between(g, &hz.mask(), &int0, &targets)
            .ok_or_else(|| gap(g, Some(s), "refine.long-connector", "no path from the connector interior", trace))?;
        let (u, v) = (p.first().expect("path"), p.last().expect("path"));
        let z_open = zo.arc(z1, z2, Inclusivity::Neither)?;
        if s.paths[3].contains(v) || z_open.contains(v) {
            let mut pool: VertexSet = p0.vertex_set();
            pool.extend(s.paths[3].vertices());
            pool.extend(z_open.vertices());
            pool.extend(p.vertices());
            pool.remove(&z0);
            let r = shortest_path(g, &mask_of(g, &pool), c0, c3)
                .ok_or_else(|| gap(g, Some(s), "refine.long-connector", "no c0-c3 path in the shortcut", trace))?;
            let seq = join(&[
                &walk(&s.c0_cycle, c0, c1),
                &s.paths[1].0,
                &rev(&walk(&zo, z2, z1)),
                &rev(&s.paths[2].0),
                &walk(&s.c2_cycle, c2, c3),
                &rev(&r.0),
            ]);
            let mut union = s.vertex_set();
            union.extend(p.vertices());
            return close(g, seq, &s.anchors, &union, trace, "refine.long-connector.shortcut")
                .map(Step::Cycle)
                .ok_or_else(|| gap(g, Some(s), "refine.long-connector", "shortcut cycle failed", trace));
        }
        let mut paths = s.paths.clone();
        paths[0] = Path::new(seg(p0, c0, u));
        let (w, tail) = if s.z_cycle.contains(v) {
            (v, Vec::new())
        } else if let Some(k) = [1, 2].into_iter().find(|&k| s.paths[k].interior().contains(&v)) {
            paths[k] = Path::new(seg(&s.paths[k], s.anchors[k], v));
            (s.z_contacts[k], seg(&s.paths[k], s.z_contacts[k], v))
        } else {
            return Err(gap(g, Some(s), "refine.long-connector", format!("path ends at unexpected vertex {v}"), trace));
        };
        for zd in [zo.clone(), zo.reversed()] {
            let mut seq = join(&[&seg(p0, u, z0), &walk(&zd, z0, w), &tail, &rev(&p.0)]);
            if seq.len() > 1 && seq.first() == seq.last() {
                seq.pop();
            }
            let Ok(zc) = Cycle::new(seq) else { continue };
            let mut next = Skeleton::new(s.anchors, s.c0_cycle.clone(), s.c2_cycle.clone(), zc, paths.clone());
            next.label_permutation = s.label_permutation;
            if check_skeleton(g, &next).is_ok() {
                trace.tag("refine.long-connector.shorten");
                return Ok(Step::Better(next));
            }
        }
        return Err(gap(g, Some(s), "refine.long-connector", "no shorter skeleton from the shortcut", trace));
    }
    // z0 separates the connector interior from the rest of the hub.
    let x0 = &comps[k0];
    let pair = minimum_separating_pair(g, &s.c0_cycle, c0, c1, x0)?;
    let ints = pair.interiors();
    let mut x: VertexSet = x0.clone();
    x.extend(&ints);
    let mut t = pair.ends();
    t.extend([z0, c2]);
    let edges: Vec<(VertexId, VertexId)> = x
        .iter()
        .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .filter(|(_, v)| !x.contains(v) && !t.contains(v))
        .collect();
    for &(_, v) in &edges {
        if !s.c2_cycle.contains(v) {
            continue;
        }
        for c0d in [s.c0_cycle.clone(), s.c0_cycle.reversed()] {
            for c2d in [s.c2_cycle.clone(), s.c2_cycle.reversed()] {
                let r = join(&[&walk(&c0d, c0, c1), &s.paths[1].0, &walk(&zo, z1, z2), &rev(&s.paths[2].0), &walk(&c2d, c2, c3)]);
                let mut m = g.mask();
                for &w in &r[1..r.len() - 1] {
                    m[w] = false;
                }
                let Some(q) = shortest_path(g, &m, c3, c0) else { continue };
                let mut seq = join(&[&r, &q.0]);
                seq.pop();
                if let Ok(cyc) = as_ordered_cycle(g, seq, &s.anchors) {
                    trace.tag("refine.long-connector.split.c2-edge");
                    return Ok(Step::Cycle(cyc));
                }
            }
        }
    }
    let x1 = &comps[k1];
    let mut hx = h.mask();
    for &w in x0 {
        hx[w] = false;
    }
    let (u2, u3) = (s.paths[2].0[1], s.paths[3].0[1]);
    let mut union = s.vertex_set();
    union.extend(h.vertices());
    for &(u, v) in edges.iter().filter(|(u, v)| ints.contains(u) && x1.contains(v)) {
        if let Some((r2, r3)) = link(g, &hx, v, u2, u3, z0) {
            let seq = join(&[
                &arc_via(&s.c0_cycle, c0, u, c1),
                &r2,
                &walk(&s.c2_cycle, c2, c3),
                &r3,
                &rev(&s.paths[0].0),
            ]);
            if let Some(cyc) = close(g, seq, &s.anchors, &union, trace, "refine.long-connector.split.direct") {
                return Ok(Step::Cycle(cyc));
            }
        }
        if let Some((r2, r3)) = link(g, &hx, z0, u2, u3, v) {
            let ap = ordered_path_via_attachment(g, &s.c0_cycle, c0, c1, x0, u)?;
            let Some(&xa) = g.neighbors(ap.anchor).iter().filter(|w| x0.contains(w)).min() else { continue };
            let mut inner = mask_of(g, x0);
            inner[z0] = true;
            let Some(pp) = shortest_path(g, &inner, xa, z0) else { continue };
            let seq = join(&[&ap.path.0, &pp.0, &r2, &walk(&s.c2_cycle, c2, c3), &r3]);
            if let Some(cyc) = close(g, seq, &s.anchors, &union, trace, "refine.long-connector.split.attached") {
                return Ok(Step::Cycle(cyc));
            }
        }
    }
    Err(gap(g, Some(s), "refine.long-connector", "separated connector yields neither cycle nor linkage", trace))
}

/// Polynomial cap on refinement rounds.
pub fn iteration_bound(g: &Graph) -> usize {
    let n = g.order();
    n * n * n + 16
}

/// Improves a skeleton until no anchor cycle can be shortened, every
/// connector is a single edge and `H` is 2-connected, or returns the ordered
/// cycle that one of the improvement steps produced. Every round strictly
/// increases [`measure`].
pub fn refine_skeleton(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<SkeletonOutcome, SkeletonError> {
    check_skeleton(g, s).map_err(SkeletonError::Input)?;
    let bound = iteration_bound(g);
    let mut cur = s.clone();
    let mut m = measure(g, &cur);
    let mut rounds = 0;
    loop {
        rounds += 1;
        trace.refine_iterations += 1;
        if rounds > bound {
            return Err(gap(g, Some(&cur), "refine", format!("more than {bound} rounds"), trace));
        }
        let step = match shorter_anchor_cycle(g, &cur, trace) {
            Some(st) => Some(st),
            None => match empty_intersection(g, &cur, trace) {
                Ok(Some(st)) => Some(st),
                Ok(None) => long_connector(g, &cur, trace).map_err(|e| as_gap(e, g, &cur, "refine.long-connector", trace))?,
                Err(e) => return Err(as_gap(e, g, &cur, "refine.empty-intersection", trace)),
            },
        };
        match step {
            None => break,
            Some(Step::Cycle(c)) => {
                as_ordered_cycle(g, c.stored().to_vec(), &cur.anchors)
                    .map_err(|e| gap(g, Some(&cur), "refine", e.to_string(), trace))?;
                return Ok(SkeletonOutcome::OrderedCycle { cycle: c });
            }
            Some(Step::Better(next)) => {
                check_skeleton(g, &next).map_err(|e| gap(g, Some(&next), "refine", e, trace))?;
                let m2 = measure(g, &next);
                if m2 <= m {
                    return Err(gap(g, Some(&next), "refine", format!("measure did not improve: {m:?} -> {m2:?}"), trace));
                }
                cur = next;
                m = m2;
            }
        }
    }
    let h = cur.residual(g);
    if !is_k_connected(&h.compacted().0, 2) {
        return Err(gap(g, Some(&cur), "refine", "residual graph is not 2-connected at the fixed point", trace));
    }
    Ok(SkeletonOutcome::Skeleton { skeleton: cur })
}

/// Postconditions of [`refine_skeleton`] at a fixed point.
pub fn is_refined(g: &Graph, s: &Skeleton) -> bool {
    validate_skeleton(g, s)
        && s.paths.iter().all(|p| p.len() == 2)
        && [0, 2].iter().all(|&i| has_shorter_cycle_through(g, s.cycle_of(i), s.anchors[i], s.anchors[i + 1]).is_none())
        && is_k_connected(&s.residual(g).compacted().0, 2)
}

/// For a refined skeleton: the skeleton itself when `H` is 3-connected,
/// otherwise the ordered cycle produced from a 2-cut of `H`.
pub fn refine_to_3_connected(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<SkeletonOutcome, SkeletonError> {
    if !is_refined(g, s) {
        return Err(SkeletonError::Input("skeleton is not refined".into()));
    }
    let h = s.residual(g);
    if is_k_connected(&h.compacted().0, 3) {
        return Ok(SkeletonOutcome::Skeleton { skeleton: s.clone() });
    }
    let hv: Vec<VertexId> = h.vertices().collect();
    let zs = s.z_contacts;
    let mut best: Option<(usize, VertexSet, VertexSet)> = None;
    for i in 0..hv.len() {
        for j in i + 1..hv.len() {
            let comps = h.without([hv[i], hv[j]]).components();
            if comps.len() < 2 {
                continue;
            }
            for comp in comps {
                let hits = zs.iter().filter(|z| comp.contains(z)).count();
                if best.as_ref().is_none_or(|b| hits < b.0) {
                    best = Some((hits, [hv[i], hv[j]].into_iter().collect(), comp.into_iter().collect()));
                }
            }
        }
    }
    let Some((_, t, a)) = best else {
        return Err(gap(g, Some(s), "three-connect", "no 2-cut in a residual graph that is not 3-connected", trace));
    };
    let hits: Vec<usize> = (0..4).filter(|&i| a.contains(&zs[i])).collect();
    let perm = match hits.first() {
        Some(&j) => KLEIN[j],
        None => {
            let nb = neighborhood_of_set(g, &a)?;
            let off_anchor = |i: usize| nb.iter().any(|v| s.cycle_of(i).contains(*v) && !s.anchors.contains(v));
            if off_anchor(0) {
                IDENTITY
            } else if off_anchor(2) {
                SWAP_CYCLES
            } else {
                return Err(gap(g, Some(s), "three-connect", "separated part touches only anchors", trace));
            }
        }
    };
    let t_s = s.relabel(perm);
    let c = two_cut(g, &t_s, &t, &a, trace).map_err(|e| as_gap(e, g, &t_s, "three-connect", trace))?;
    as_ordered_cycle(g, c.stored().to_vec(), &s.anchors).map_err(|e| gap(g, Some(s), "three-connect", e.to_string(), trace))?;
    Ok(SkeletonOutcome::OrderedCycle { cycle: c })
}

fn two_cut(g: &Graph, s: &Skeleton, t: &VertexSet, a: &VertexSet, trace: &mut Trace) -> Result<Cycle, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [z0, z1, z2, z3] = s.z_contacts;
    let h = s.residual(g);
    let hm = h.mask();
    let mut union = s.vertex_set();
    union.extend(h.vertices());
    if a.contains(&z3) {
        let (l03, l12) = link(g, &hm, z3, z0, z1, z2)
            .ok_or_else(|| gap(g, Some(s), "three-connect.crossed-contacts", "no linkage", trace))?;
        let seq = join(&[&walk(&s.c0_cycle, c0, c1), &l12, &walk(&s.c2_cycle, c2, c3), &l03]);
        return close(g, seq, &s.anchors, &union, trace, "three-connect.crossed-contacts")
            .ok_or_else(|| gap(g, Some(s), "three-connect.crossed-contacts", "cycle failed", trace));
    }
    if a.contains(&z2) {
        return opposite_contacts(g, s, t, a, trace);
    }
    let pair = minimum_separating_pair(g, &s.c0_cycle, c0, c1, a)?;
    let ints = pair.interiors();
    let mut w = VertexSet::new();
    if a.contains(&z0) {
        w.insert(c2);
    }
    if a.contains(&z1) {
        w.insert(c3);
    }
    let mut tp: VertexSet = t.clone();
    tp.extend(pair.ends());
    tp.extend(&w);
    let mut x: VertexSet = ints.clone();
    x.extend(a);
    let edges: Vec<(VertexId, VertexId)> = x
        .iter()
        .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .filter(|(_, v)| !x.contains(v) && !tp.contains(v))
        .collect();
    let hit = edges.iter().copied().find(|(u, v)| ints.contains(u) && hm[*v] && !t.contains(v) && !a.contains(v));
    let Some((u, v)) = hit else {
        for &(u, v) in &edges {
            if !s.c2_cycle.contains(v) {
                continue;
            }
            if ints.contains(&u) {
                if let Some(c) = cross_path_dichotomy(g, s, &Path::new(vec![u, v]))? {
                    trace.tag("three-connect.cross");
                    return Ok(c);
                }
            } else if a.contains(&u) && !w.contains(&v) {
                if let Some(c) = part_to_c2(g, s, a, u, v, trace)? {
                    return Ok(c);
                }
            }
        }
        return Err(gap(g, Some(s), "three-connect.edge", "no edge leaves the separated side usefully", trace));
    };
    let mut ha = hm.clone();
    for &v in a {
        ha[v] = false;
    }
    for &tv in t {
        let qs = max_disjoint_paths(g, &ha, &[tv, v].into_iter().collect(), &[z2, z3].into_iter().collect(), 2);
        if qs.len() < 2 {
            continue;
        }
        let (qv, qt) = if qs[0].first() == Some(v) { (&qs[0], &qs[1]) } else { (&qs[1], &qs[0]) };
        let to_z2 = qv.last() == Some(z2);
        let sp = ordered_path_from_pair(g, &pair, u, if to_z2 { c1 } else { c0 })?;
        let Some(&ai) = g.neighbors(sp.anchor).iter().filter(|w| a.contains(w)).min() else { continue };
        let mut am = mask_of(g, a);
        am[tv] = true;
        let Some(q) = shortest_path(g, &am, ai, tv) else { continue };
        let arc = if to_z2 { walk(&s.c2_cycle, c2, c3) } else { walk(&s.c2_cycle, c3, c2) };
        let seq = join(&[&qv.0, &arc, &rev(&qt.0), &rev(&q.0), &rev(&sp.path.0)]);
        if let Some(c) = close(g, seq, &s.anchors, &union, trace, "three-connect.final") {
            return Ok(c);
        }
    }
    Err(gap(g, Some(s), "three-connect.final", "no routing to z2, z3 closes a cycle", trace))
}

/// An edge from the separated part straight into `C2`.
fn part_to_c2(g: &Graph, s: &Skeleton, a: &VertexSet, u: VertexId, v: VertexId, trace: &mut Trace) -> Result<Option<Cycle>, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [z0, z1, z2, z3] = s.z_contacts;
    let h = s.residual(g);
    let mut ha = h.mask();
    for &x in a {
        ha[x] = false;
    }
    let mut union = s.vertex_set();
    union.extend(h.vertices());
    match (a.contains(&z0), a.contains(&z1)) {
        (false, false) => {
            let mut ac = mask_of(g, a.iter().chain(s.c0_cycle.stored()));
            ac[u] = true;
            for (order, q) in [([u, c1, c0], (z0, z3)), ([u, c0, c1], (z1, z2))] {
                let (Some(sp), Some(qp)) = (ordered_path_in(g, &ac, &order), shortest_path(g, &ha, q.0, q.1)) else { continue };
                let mut pool: VertexSet = s.c2_cycle.vertex_set();
                pool.extend(sp.vertices());
                pool.extend(qp.vertices());
                pool.insert(v);
                if let Some(c) = ordered_cycle_in(g, &mask_of(g, &pool), &s.anchors) {
                    trace.tag("three-connect.part-to-c2.free+union");
                    trace.union_searches += 1;
                    return Ok(Some(c));
                }
            }
            Ok(None)
        }
        (true, false) => {
            let inner = shortest_path(g, &mask_of(g, a), u, z0);
            let outer = shortest_path(g, &ha, z1, z2);
            let (Some(s0), Some(s1)) = (inner, outer) else { return Ok(None) };
            let seq = join(&[&walk(&s.c0_cycle, c0, c1), &s1.0, &arc_via(&s.c2_cycle, c2, v, c3), &s0.0]);
            Ok(close(g, seq, &s.anchors, &union, trace, "three-connect.part-to-c2.z0"))
        }
        _ => {
            if let Some((l0, l1)) = link(g, &h.mask(), u, z0, z1, z2) {
                let seq = join(&[&walk(&s.c0_cycle, c0, c1), &l1, &arc_via(&s.c2_cycle, c2, v, c3), &l0]);
                if let Some(c) = close(g, seq, &s.anchors, &union, trace, "three-connect.part-to-c2.z0z1") {
                    return Ok(Some(c));
                }
            }
            if let Some((l0, l1)) = link(g, &h.mask(), z3, z0, z1, u) {
                let seq = join(&[&walk(&s.c0_cycle, c0, c1), &l1, &arc_via(&s.c2_cycle, v, c3, c2), &l0]);
                if let Some(c) = close(g, seq, &s.anchors, &union, trace, "three-connect.part-to-c2.z0z1") {
                    return Ok(Some(c));
                }
            }
            Ok(None)
        }
    }
}

/// The separated part holds `z0` and `z2`.
fn opposite_contacts(g: &Graph, s: &Skeleton, t: &VertexSet, a: &VertexSet, trace: &mut Trace) -> Result<Cycle, SkeletonError> {
    let [c0, _, c2, _] = s.anchors;
    let p0 = minimum_separating_pair(g, &s.c0_cycle, s.anchors[0], s.anchors[1], a)?;
    let p2 = minimum_separating_pair(g, &s.c2_cycle, s.anchors[2], s.anchors[3], a)?;
    let mut tp: VertexSet = t.clone();
    tp.extend(p0.ends());
    tp.extend(p2.ends());
    tp.remove(&c0);
    tp.remove(&c2);
    let mut side0 = p0.interiors();
    side0.insert(c0);
    let mut side2 = p2.interiors();
    side2.insert(c2);
    let mut x: VertexSet = side0.union(&side2).copied().collect();
    x.extend(a);
    let edges: Vec<(VertexId, VertexId)> = x
        .iter()
        .flat_map(|&u| g.neighbors(u).iter().map(move |&v| (u, v)))
        .filter(|(_, v)| !x.contains(v) && !tp.contains(v))
        .collect();
    for (u, v) in edges {
        let perm = if side0.contains(&u) {
            IDENTITY
        } else if side2.contains(&u) {
            SWAP_CYCLES
        } else {
            continue;
        };
        if let Some(c) = opposite_edge(g, &s.relabel(perm), a, u, v, trace)? {
            return Ok(c);
        }
    }
    Err(gap(g, Some(s), "three-connect.opposite-contacts", "no edge closes a cycle", trace))
}

fn opposite_edge(g: &Graph, s: &Skeleton, a: &VertexSet, u: VertexId, v: VertexId, trace: &mut Trace) -> Result<Option<Cycle>, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [_, _, z2, z3] = s.z_contacts;
    if s.c2_cycle.contains(v) {
        let c = cross_path_dichotomy(g, s, &Path::new(vec![u, v]))?;
        if c.is_some() {
            trace.tag("three-connect.opposite-contacts.cross");
        }
        return Ok(c);
    }
    let h = s.residual(g);
    if !h.contains(v) || a.contains(&v) {
        return Ok(None);
    }
    let (lead, anchor) = if u == c0 {
        let nb = neighborhood_of_set(g, a)?;
        let Some(&x) = nb.iter().find(|&&x| x != c0 && s.c0_cycle.contains(x)) else { return Ok(None) };
        (arc_via(&s.c0_cycle, c0, x, c1), x)
    } else {
        let ap = ordered_path_via_attachment(g, &s.c0_cycle, c0, c1, a, u)?;
        (ap.path.0, ap.anchor)
    };
    let Some(&ai) = g.neighbors(anchor).iter().filter(|w| a.contains(w)).min() else { return Ok(None) };
    let Some((s2, s3)) = link(g, &h.mask(), ai, z2, z3, v) else { return Ok(None) };
    let seq = join(&[&lead, &s2, &walk(&s.c2_cycle, c2, c3), &s3]);
    let mut union = s.vertex_set();
    union.extend(h.vertices());
    Ok(close(g, seq, &s.anchors, &union, trace, "three-connect.opposite-contacts"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{circulant, complete_bipartite, gnp, rng_for};
    use proptest::prelude::*;

    /// Triangles `0 1 2` and `3 4 5`, hub `6 7 8 9`, connectors
    /// `0-6`, `1-7`, `3-9`, `4-8`.
    fn frame(extra: &[(VertexId, VertexId)], n: usize) -> (Graph, Skeleton) {
        let mut edges = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3), (6, 7), (7, 8), (8, 9), (9, 6)];
        edges.extend([(0, 6), (1, 7), (3, 9), (4, 8)]);
        edges.extend_from_slice(extra);
        let g = Graph::from_edges(n.max(10), &edges).unwrap();
        let s = Skeleton::new(
            [0, 1, 3, 4],
            Cycle::new(vec![0, 1, 2]).unwrap(),
            Cycle::new(vec![3, 4, 5]).unwrap(),
            Cycle::new(vec![6, 7, 8, 9]).unwrap(),
            [Path::new(vec![0, 6]), Path::new(vec![1, 7]), Path::new(vec![3, 9]), Path::new(vec![4, 8])],
        );
        (g, s)
    }

    fn is_ordered(g: &Graph, c: &Cycle, anchors: &[VertexId; 4]) -> bool {
        c.validate(g).is_ok() && visits_in_cyclic_order(c.stored(), anchors)
    }

    #[test]
    fn frame_is_a_skeleton() {
        let (g, s) = frame(&[], 10);
        assert_eq!(check_skeleton(&g, &s), Ok(()));
        assert_eq!(s.path_total(), 8);
        assert_eq!(s.oriented_z().sequence(), vec![6, 7, 8, 9]);
    }

    #[test]
    fn wrong_hub_order_is_rejected() {
        let (g, mut s) = frame(&[], 10);
        s.paths.swap(2, 3);
        s.anchors.swap(2, 3);
        s.z_contacts.swap(2, 3);
        assert!(check_skeleton(&g, &s).unwrap_err().contains("cyclic order"));
    }

    #[test]
    fn shared_contact_is_rejected() {
        let (g, mut s) = frame(&[(0, 7)], 10);
        s.paths[0] = Path::new(vec![0, 7]);
        s.z_contacts[0] = 7;
        assert!(!validate_skeleton(&g, &s));
    }

    #[test]
    fn relabelings_are_involutions() {
        let (g, s) = frame(&[], 10);
        for perm in KLEIN {
            let t = s.relabel(perm);
            assert_eq!(check_skeleton(&g, &t), Ok(()));
            assert_eq!(t.input_anchors(), s.anchors);
            assert_eq!(t.relabel(perm), s);
        }
    }

    #[test]
    fn dichotomy_examples() {
        let (g, s) = frame(&[(0, 3), (2, 5), (1, 5)], 10);
        assert_eq!(cross_path_dichotomy(&g, &s, &Path::new(vec![0, 3])), Ok(None));
        let c = cross_path_dichotomy(&g, &s, &Path::new(vec![2, 5])).unwrap().unwrap();
        assert!(is_ordered(&g, &c, &s.anchors));
        let c = cross_path_dichotomy(&g, &s, &Path::new(vec![5, 1])).unwrap().unwrap();
        assert!(is_ordered(&g, &c, &s.anchors));
        assert!(matches!(cross_path_dichotomy(&g, &s, &Path::new(vec![0, 6])), Err(SkeletonError::Input(_))));
    }

    #[test]
    fn refined_frame_is_a_fixed_point() {
        let (g, s) = frame(&[], 10);
        assert!(is_refined(&g, &s));
        let mut trace = Trace::default();
        assert_eq!(refine_skeleton(&g, &s, &mut trace), Ok(SkeletonOutcome::Skeleton { skeleton: s.clone() }));
        assert_eq!(trace.refine_iterations, 1);
        // The frame has no ordered cycle, so the 2-cut of the hub cannot close one.
        assert!(matches!(refine_to_3_connected(&g, &s, &mut trace), Err(SkeletonError::Gap(_))));
    }

    #[test]
    fn chord_shortens_the_anchor_cycle() {
        // C0 = 0 10 1 11 12 shortens along the edge 0-1; 11 and 12 join the hub block.
        let extra = [(0, 10), (10, 1), (1, 11), (11, 12), (12, 0), (11, 8), (12, 6), (12, 7)];
        let (mut g, mut s) = frame(&extra, 13);
        g.remove_vertex(2);
        s.c0_cycle = Cycle::new(vec![0, 10, 1, 11, 12]).unwrap();
        assert_eq!(check_skeleton(&g, &s), Ok(()));
        let mut trace = Trace::default();
        let out = refine_skeleton(&g, &s, &mut trace).unwrap();
        let t = out.skeleton().unwrap();
        assert_eq!(t.c0_cycle.len(), 3);
        assert!(trace.has("refine.shorter-cycle"));
        assert!(measure(&g, t) > measure(&g, &s));
        assert!(is_refined(&g, t));
    }

    #[test]
    fn long_connector_is_shortened() {
        let (mut g, mut s) = frame(&[(0, 10), (10, 6), (10, 7)], 11);
        g.remove_edge(0, 6);
        s.paths[0] = Path::new(vec![0, 10, 6]);
        assert_eq!(check_skeleton(&g, &s), Ok(()));
        let mut trace = Trace::default();
        let out = refine_skeleton(&g, &s, &mut trace).unwrap();
        let t = out.skeleton().unwrap();
        assert_eq!(t.path_total(), 8);
        assert!(trace.has("refine.long-connector.shorten"));
        assert!(is_refined(&g, t));
    }

    fn assert_outcome(g: &Graph, anchors: [VertexId; 4], out: &SkeletonOutcome) {
        match out {
            SkeletonOutcome::OrderedCycle { cycle } => assert!(is_ordered(g, cycle, &anchors)),
            SkeletonOutcome::Skeleton { skeleton } => {
                assert_eq!(check_skeleton(g, skeleton), Ok(()));
                assert_eq!(skeleton.input_anchors(), anchors);
            }
        }
    }

    #[test]
    fn build_examples() {
        for (g, anchors) in [
            (Graph::complete(9), [0, 1, 2, 3]),
            (circulant(16, &[1, 2, 3, 4]), [0, 8, 3, 11]),
            (complete_bipartite(7, 7), [0, 1, 2, 3]),
            (complete_bipartite(7, 7), [0, 7, 1, 8]),
        ] {
            let mut trace = Trace::default();
            let out = build_skeleton(&g, anchors, &mut trace).unwrap();
            assert_outcome(&g, anchors, &out);
            assert!(trace.events.iter().any(|e| e.starts_with("build.")));
        }
    }

    #[test]
    fn build_refuses_weak_hosts() {
        let mut t = Trace::default();
        assert!(matches!(build_skeleton(&Graph::complete(7), [0, 1, 2, 3], &mut t), Err(SkeletonError::Hypothesis(_))));
        assert!(matches!(build_skeleton(&circulant(16, &[1, 2, 3]), [0, 8, 3, 11], &mut t), Err(SkeletonError::Hypothesis(_))));
        assert!(matches!(build_skeleton(&Graph::complete(9), [0, 1, 1, 3], &mut t), Err(SkeletonError::Input(_))));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]
        #[test]
        fn build_on_dense_random_hosts(seed in any::<u64>(), n in 10usize..=14) {
            let g = gnp(n, 0.85, &mut rng_for(seed));
            prop_assume!(is_k_connected(&g, 7));
            let anchors = [0, 2, 4, 6];
            let mut trace = Trace::default();
            let out = build_skeleton(&g, anchors, &mut trace).unwrap();
            assert_outcome(&g, anchors, &out);
            if let SkeletonOutcome::Skeleton { skeleton } = out {
                let refined = refine_skeleton(&g, &skeleton, &mut trace).unwrap();
                assert_outcome(&g, anchors, &refined);
            }
        }
    }
}
