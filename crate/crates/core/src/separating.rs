//! Separating pairs on a cycle and the ordered path/cycle constructions
//! built from a minimum pair.
//!
//! Storage convention for a [`SeparatingPair`] with host cycle `C`
//! (oriented so that `R0 ⊆ C[v0,v1]`):
//! `r0` is listed along `C[v0,v1]`, so `r0.first()` is the end nearest `v0`;
//! `r1` is listed along `C[v1,v0]`, so `r1.first()` is the end nearest `v1`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::{shortest_cycle_through, shortest_path_between};
use crate::graph::{Cycle, Graph, GraphError, Inclusivity, Path, VertexId, VertexSet};
use crate::walk::{as_cycle, as_ordered_path, join};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SeparatingError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("malformed subpath {0:?}")]
    MalformedSubpath(Vec<VertexId>),
    #[error("attachment set meets the cycle at {0}")]
    AttachmentOnCycle(VertexId),
    #[error("pair is not a minimum separating pair")]
    NotMinimum,
    #[error("a shorter cycle through v0 and v1 exists: {0:?}")]
    ShorterCycle(Vec<VertexId>),
    #[error("{0} is not an interior vertex of the required path")]
    NotInInterior(VertexId),
    #[error("attachment set does not induce a connected graph")]
    AttachmentDisconnected,
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeparatingPair {
    pub r0: Path,
    pub r1: Path,
    pub cycle: Cycle,
    pub v0: VertexId,
    pub v1: VertexId,
    pub attachment: VertexSet,
}

impl SeparatingPair {
    pub fn total(&self) -> usize {
        self.r0.len() + self.r1.len()
    }

    /// `r_i^j`: the end of `R_i` nearest `v_j`.
    pub fn end(&self, i: usize, j: usize) -> Option<VertexId> {
        match (i, j) {
            (0, 0) => self.r0.first(),
            (0, _) => self.r0.last(),
            (_, 0) => self.r1.last(),
            _ => self.r1.first(),
        }
    }

    pub fn path(&self, i: usize) -> &Path {
        if i == 0 { &self.r0 } else { &self.r1 }
    }

    /// `end(R0) ∪ end(R1)`.
    pub fn ends(&self) -> VertexSet {
        self.r0.ends().union(&self.r1.ends()).copied().collect()
    }

    /// `int(R0) ∪ int(R1)`.
    pub fn interiors(&self) -> VertexSet {
        self.r0.interior().union(&self.r1.interior()).copied().collect()
    }
}

fn window_in(seq: &[VertexId], r: &[VertexId]) -> bool {
    r.is_empty() || seq.windows(r.len()).any(|w| w == r)
}

fn is_cycle_window(c: &Cycle, r: &[VertexId]) -> bool {
    if r.is_empty() {
        return true;
    }
    let s = c.stored();
    let doubled: Vec<VertexId> = s.iter().chain(s).copied().collect();
    let rev: Vec<VertexId> = r.iter().rev().copied().collect();
    r.len() <= s.len() && (window_in(&doubled, r) || window_in(&doubled, &rev))
}

fn check_inputs(c: &Cycle, v0: VertexId, v1: VertexId, a: &VertexSet) -> Result<(), SeparatingError> {
    if v0 == v1 {
        return Err(GraphError::EqualEndpoints(v0).into());
    }
    for v in [v0, v1] {
        if !c.contains(v) {
            return Err(GraphError::VertexNotOnCycle(v).into());
        }
    }
    if let Some(&x) = a.iter().find(|&&x| c.contains(x)) {
        return Err(SeparatingError::AttachmentOnCycle(x));
    }
    Ok(())
}

fn attached(g: &Graph, x: VertexId, a: &VertexSet) -> bool {
    g.neighbors(x).iter().any(|w| a.contains(w))
}

fn satisfies(
    g: &Graph,
    nbrs: &VertexSet,
    cycle_set: &VertexSet,
    p: [&[VertexId]; 2],
    r: [&[VertexId]; 2],
) -> bool {
    for i in 0..2 {
        if !window_in(p[i], r[i]) && !window_in(p[i], &r[i].iter().rev().copied().collect::<Vec<_>>()) {
            return false;
        }
        if p[i].iter().any(|v| nbrs.contains(v) && !r[i].contains(v)) {
            return false;
        }
    }
    let covered: VertexSet = r[0].iter().chain(r[1]).copied().collect();
    for ri in r {
        if ri.len() <= 2 {
            continue;
        }
        for &u in &ri[1..ri.len() - 1] {
            if g.neighbors(u).iter().any(|w| cycle_set.contains(w) && !covered.contains(w)) {
                return false;
            }
        }
    }
    true
}

/// Whether `{r0, r1}` is a `(v0, v1, C, A)`-separating pair under some
/// orientation of `C`.
pub fn is_separating_pair(
    g: &Graph,
    c: &Cycle,
    v0: VertexId,
    v1: VertexId,
    a: &VertexSet,
    r0: &Path,
    r1: &Path,
) -> Result<bool, SeparatingError> {
    check_inputs(c, v0, v1, a)?;
    for r in [r0, r1] {
        if !is_cycle_window(c, r.vertices()) {
            return Err(SeparatingError::MalformedSubpath(r.0.clone()));
        }
    }
    let nbrs: VertexSet = crate::graph::neighborhood_of_set(g, a)?.intersection(&c.vertex_set()).copied().collect();
    let cycle_set = c.vertex_set();
    for oriented in [c.clone(), c.reversed()] {
        let p0 = oriented.arc(v0, v1, Inclusivity::Both)?;
        let p1 = oriented.arc(v1, v0, Inclusivity::Both)?;
        if satisfies(g, &nbrs, &cycle_set, [&p0.0, &p1.0], [&r0.0, &r1.0]) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// A minimum `(v0, v1, C, A)`-separating pair with `R0 ⊆ C[v0, v1]` under the
/// stored orientation of `c`. Among minimum pairs the one whose concatenated
/// sequence `r0 ++ r1` is lexicographically least is returned.
pub fn minimum_separating_pair(
    g: &Graph,
    c: &Cycle,
    v0: VertexId,
    v1: VertexId,
    a: &VertexSet,
) -> Result<SeparatingPair, SeparatingError> {
    check_inputs(c, v0, v1, a)?;
    let nbrs: VertexSet = crate::graph::neighborhood_of_set(g, a)?.intersection(&c.vertex_set()).copied().collect();
    let cycle_set = c.vertex_set();
    let p0 = c.arc(v0, v1, Inclusivity::Both)?.0;
    let p1 = c.arc(v1, v0, Inclusivity::Both)?.0;
    let windows = |p: &[VertexId]| -> Vec<Vec<VertexId>> {
        let hits: Vec<usize> = (0..p.len()).filter(|&k| nbrs.contains(&p[k])).collect();
        let mut out = Vec::new();
        match (hits.first(), hits.last()) {
            (Some(&lo), Some(&hi)) => {
                for i in 0..=lo {
                    for j in hi..p.len() {
                        out.push(p[i..=j].to_vec());
                    }
                }
            }
            _ => {
                out.push(Vec::new());
                for i in 0..p.len() {
                    for j in i..p.len() {
                        out.push(p[i..=j].to_vec());
                    }
                }
            }
        }
        out
    };
    let w0 = windows(&p0);
    let w1 = windows(&p1);
    let mut best: Option<(usize, Vec<VertexId>, usize, usize)> = None;
    for (i, r0) in w0.iter().enumerate() {
        for (j, r1) in w1.iter().enumerate() {
            let total = r0.len() + r1.len();
            if best.as_ref().is_some_and(|b| total > b.0) {
                continue;
            }
            if !satisfies(g, &nbrs, &cycle_set, [&p0, &p1], [r0, r1]) {
                continue;
            }
            let key: Vec<VertexId> = r0.iter().chain(r1.iter()).copied().collect();
            if best.as_ref().is_none_or(|b| (total, &key) < (b.0, &b.1)) {
                best = Some((total, key, i, j));
            }
        }
    }
    let (_, _, i, j) = best.expect("the two arcs always form a separating pair");
    Ok(SeparatingPair {
        r0: Path::new(w0[i].clone()),
        r1: Path::new(w1[j].clone()),
        cycle: c.clone(),
        v0,
        v1,
        attachment: a.clone(),
    })
}

/// A cycle through `v0`, `v1` in `G[V(C)]` with fewer vertices than `C`.
pub fn has_shorter_cycle_through(g: &Graph, c: &Cycle, v0: VertexId, v1: VertexId) -> Option<Cycle> {
    let mut mask = vec![false; g.id_bound()];
    for v in c.stored() {
        mask[*v] = true;
    }
    shortest_cycle_through(g, &mask, v0, v1).filter(|s| s.len() < c.len())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Clause {
    /// `N(r_i^j) ∩ A ≠ ∅`
    AttachmentNeighbor,
    /// `N(r_i^j) ∩ int(R_{1-i}) ≠ ∅` and `N(r_{1-i}^j) ∩ A ≠ ∅`
    CrossInterior,
    Neither,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseEntry {
    pub i: usize,
    pub j: usize,
    pub vertex: VertexId,
    pub clause: Clause,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndClauseReport {
    pub entries: Vec<ClauseEntry>,
}

impl EndClauseReport {
    pub fn holds(&self) -> bool {
        self.entries.iter().all(|e| e.clause != Clause::Neither)
    }
}

fn check_hypotheses(g: &Graph, pair: &SeparatingPair) -> Result<(), SeparatingError> {
    let min = minimum_separating_pair(g, &pair.cycle, pair.v0, pair.v1, &pair.attachment)?;
    let valid = is_separating_pair(g, &pair.cycle, pair.v0, pair.v1, &pair.attachment, &pair.r0, &pair.r1)?;
    if !valid || pair.total() != min.total() {
        return Err(SeparatingError::NotMinimum);
    }
    if let Some(s) = has_shorter_cycle_through(g, &pair.cycle, pair.v0, pair.v1) {
        return Err(SeparatingError::ShorterCycle(s.stored().to_vec()));
    }
    Ok(())
}

/// Evaluates the two alternative clauses at every defined end `r_i^j` of a
/// minimum pair whose cycle has no shorter cycle through `v0`, `v1`.
pub fn check_end_clauses(g: &Graph, pair: &SeparatingPair) -> Result<EndClauseReport, SeparatingError> {
    check_hypotheses(g, pair)?;
    let a = &pair.attachment;
    let mut entries = Vec::new();
    for i in 0..2 {
        for j in 0..2 {
            let Some(r) = pair.end(i, j) else { continue };
            let clause = if attached(g, r, a) {
                Clause::AttachmentNeighbor
            } else {
                let other = pair.path(1 - i);
                let cross = !other.is_empty()
                    && g.neighbors(r).iter().any(|w| other.interior().contains(w))
                    && pair.end(1 - i, j).is_some_and(|x| attached(g, x, a));
                if cross { Clause::CrossInterior } else { Clause::Neither }
            };
            entries.push(ClauseEntry { i, j, vertex: r, clause });
        }
    }
    Ok(EndClauseReport { entries })
}

/// Which case of the construction produced a path or cycle.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Branch {
    /// Far end of `R0` is attached.
    PathDirect,
    /// Far end of `R0` reaches `int(R1)` instead.
    PathViaInterior,
    CycleBothAttached,
    CycleOneAttached,
    CycleNoneAttached,
    /// Cycle needs no rerouting: `int(R0)` is empty.
    CycleTrivial,
    BetweenBothAttached,
    BetweenOneAttached,
    BetweenNoneAttached,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttachmentPath {
    pub anchor: VertexId,
    pub path: Path,
    pub branch: Branch,
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AvoidingCycle {
    pub cycle: Cycle,
    pub branch: Branch,
    pub mirrored: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InteriorPath {
    pub path: Path,
    pub branch: Branch,
    pub mirrored: bool,
}

/// The pair seen from one of its symmetric labelings.
#[derive(Debug, Clone)]
struct Frame {
    p0: Vec<VertexId>,
    p1: Vec<VertexId>,
    r0: Vec<VertexId>,
    r1: Vec<VertexId>,
    v0: VertexId,
    v1: VertexId,
    mirrored: bool,
}

fn rev(v: &[VertexId]) -> Vec<VertexId> {
    v.iter().rev().copied().collect()
}

impl Frame {
    fn new(pair: &SeparatingPair) -> Result<Self, GraphError> {
        Ok(Frame {
            p0: pair.cycle.arc(pair.v0, pair.v1, Inclusivity::Both)?.0,
            p1: pair.cycle.arc(pair.v1, pair.v0, Inclusivity::Both)?.0,
            r0: pair.r0.0.clone(),
            r1: pair.r1.0.clone(),
            v0: pair.v0,
            v1: pair.v1,
            mirrored: false,
        })
    }

    /// Exchanges the roles of `v0` and `v1`, keeping each path on its side.
    fn swap_ends(&self) -> Frame {
        Frame {
            p0: rev(&self.p0),
            p1: rev(&self.p1),
            r0: rev(&self.r0),
            r1: rev(&self.r1),
            v0: self.v1,
            v1: self.v0,
            mirrored: !self.mirrored,
        }
    }

    /// Exchanges the roles of `R0` and `R1` (and of `v0`, `v1`).
    fn swap_sides(&self) -> Frame {
        Frame {
            p0: self.p1.clone(),
            p1: self.p0.clone(),
            r0: self.r1.clone(),
            r1: self.r0.clone(),
            v0: self.v1,
            v1: self.v0,
            mirrored: !self.mirrored,
        }
    }

    /// Reverses the orientation: `R0` and `R1` trade labels, `v0`, `v1` stay.
    fn reorient(&self) -> Frame {
        let mut f = self.swap_sides().swap_ends();
        f.mirrored = !self.mirrored;
        f
    }

    fn r(&self, i: usize, j: usize) -> VertexId {
        match (i, j) {
            (0, 0) => self.r0[0],
            (0, _) => self.r0[self.r0.len() - 1],
            (_, 0) => self.r1[self.r1.len() - 1],
            _ => self.r1[0],
        }
    }

    fn int(&self, i: usize) -> VertexSet {
        let r = if i == 0 { &self.r0 } else { &self.r1 };
        Path::new(r.clone()).interior()
    }

    fn seg0(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        crate::walk::segment(&self.p0, a, b)
    }

    fn seg1(&self, a: VertexId, b: VertexId) -> Vec<VertexId> {
        crate::walk::segment(&self.p1, a, b)
    }
}

fn first_neighbor_in(g: &Graph, x: VertexId, set: &VertexSet) -> Option<VertexId> {
    g.neighbors(x).iter().copied().find(|w| set.contains(w))
}

fn hyp(msg: &str) -> SeparatingError {
    SeparatingError::Hypothesis(msg.to_string())
}

/// `A[x,y]`: a shortest path from `x` to `y` whose interior is a nonempty
/// subset of `A`.
fn through_attachment(g: &Graph, a: &VertexSet, x: VertexId, y: VertexId) -> Result<Vec<VertexId>, SeparatingError> {
    let mut mask = vec![false; g.id_bound()];
    for &v in a.iter().chain([&y]) {
        mask[v] = true;
    }
    let starts: VertexSet = g.neighbors(x).iter().copied().filter(|w| a.contains(w)).collect();
    let inner = shortest_path_between(g, &mask, &starts, &[y].into_iter().collect())
        .ok_or_else(|| hyp("no path through the attachment set"))?;
    Ok(join(&[&[x], &inner.0]))
}

fn attachment_connected(g: &Graph, a: &VertexSet) -> bool {
    g.induced(a).is_connected()
}

/// Path through `u0, v0, v1, a` in `G[V(C)]` with `u0 ∈ int(R0)` of the frame.
fn path_core(g: &Graph, f: &Frame, a: &VertexSet, u0: VertexId) -> Result<AttachmentPath, SeparatingError> {
    let (r01, r11) = (f.r(0, 1), if f.r1.is_empty() { usize::MAX } else { f.r(1, 1) });
    let head = f.seg0(u0, f.v0);
    let (seq, anchor, branch) = if attached(g, r01, a) {
        (join(&[&head, &f.seg1(f.v0, f.v1), &f.seg0(f.v1, r01)]), r01, Branch::PathDirect)
    } else {
        let int1 = f.int(1);
        let w1 = first_neighbor_in(g, r01, &int1).ok_or_else(|| hyp("far end of R0 has no neighbor in int(R1)"))?;
        if !attached(g, r11, a) {
            return Err(hyp("end of R1 nearest v1 is not attached"));
        }
        let seq = join(&[&head, &f.seg1(f.v0, w1), &[r01], &f.seg0(r01, f.v1), &f.seg1(f.v1, r11)]);
        (seq, r11, Branch::PathViaInterior)
    };
    let path = as_ordered_path(g, seq, &[u0, f.v0, f.v1, anchor])?;
    Ok(AttachmentPath { anchor, path, branch, mirrored: f.mirrored })
}

/// Path in `G[V(C)]` through `u0`, `first`, the other of `v0`/`v1`, and an
/// attached vertex, for `u0` interior to either path of a minimum pair.
pub fn ordered_path_from_pair(
    g: &Graph,
    pair: &SeparatingPair,
    u0: VertexId,
    first: VertexId,
) -> Result<AttachmentPath, SeparatingError> {
    let mut f = Frame::new(pair)?;
    if f.int(1).contains(&u0) {
        f = f.reorient();
    } else if !f.int(0).contains(&u0) {
        return Err(SeparatingError::NotInInterior(u0));
    }
    if first == f.v1 {
        f = f.swap_ends();
    } else if first != f.v0 {
        return Err(GraphError::VertexNotOnCycle(first).into());
    }
    path_core(g, &f, &pair.attachment, u0)
}

/// Path in `G[V(C)]` through `u0, v0, v1, a` where `a ∈ V(C)` has a neighbor in
/// `A`; `u0` may lie in the interior of either path of the minimum pair.
pub fn ordered_path_via_attachment(
    g: &Graph,
    c: &Cycle,
    v0: VertexId,
    v1: VertexId,
    a: &VertexSet,
    u0: VertexId,
) -> Result<AttachmentPath, SeparatingError> {
    let pair = minimum_separating_pair(g, c, v0, v1, a)?;
    check_hypotheses(g, &pair)?;
    ordered_path_from_pair(g, &pair, u0, v0)
}

fn cycle_core(g: &Graph, f: &Frame, a: &VertexSet) -> Result<(Vec<VertexId>, Branch), SeparatingError> {
    let (r00, r01) = (f.r(0, 0), f.r(0, 1));
    let (at0, at1) = (attached(g, r00, a), attached(g, r01, a));
    if at0 && at1 {
        let seq = join(&[&through_attachment(g, a, r00, r01)?, &f.seg0(r01, f.v1), &f.p1, &f.seg0(f.v0, r00)]);
        return Ok((seq, Branch::CycleBothAttached));
    }
    if at1 {
        return cycle_core(g, &f.swap_ends(), a).map(|(s, _)| (s, Branch::CycleOneAttached));
    }
    if f.r1.is_empty() {
        return Err(hyp("R1 is empty but an end of R0 is unattached"));
    }
    let (r10, r11) = (f.r(1, 0), f.r(1, 1));
    let int1 = f.int(1);
    let w1 = first_neighbor_in(g, r01, &int1).ok_or_else(|| hyp("far end of R0 has no neighbor in int(R1)"))?;
    if at0 {
        let seq = join(&[
            &f.seg0(f.v0, r00),
            &through_attachment(g, a, r00, r11)?,
            &f.seg1(r11, f.v1),
            &f.seg0(f.v1, r01),
            &[w1],
            &f.seg1(w1, f.v0),
        ]);
        return Ok((seq, Branch::CycleOneAttached));
    }
    let x1 = first_neighbor_in(g, r00, &int1).ok_or_else(|| hyp("near end of R0 has no neighbor in int(R1)"))?;
    let seq = join(&[
        &f.seg0(f.v0, r00),
        &f.seg1(x1, w1),
        &f.seg0(r01, f.v1),
        &f.seg1(f.v1, r11),
        &through_attachment(g, a, r11, r10)?,
        &f.seg1(r10, f.v0),
    ]);
    Ok((seq, Branch::CycleNoneAttached))
}

/// Cycle through `v0`, `v1` in `G[V(C) ∪ A] - int(R0)` for the minimum pair
/// computed under the stored orientation of `c`.
pub fn cycle_avoiding_interior(
    g: &Graph,
    c: &Cycle,
    v0: VertexId,
    v1: VertexId,
    a: &VertexSet,
) -> Result<AvoidingCycle, SeparatingError> {
    let pair = minimum_separating_pair(g, c, v0, v1, a)?;
    cycle_avoiding_interior_of(g, &pair)
}

/// As [`cycle_avoiding_interior`] for an already computed minimum pair.
pub fn cycle_avoiding_interior_of(g: &Graph, pair: &SeparatingPair) -> Result<AvoidingCycle, SeparatingError> {
    let a = &pair.attachment;
    if !attachment_connected(g, a) {
        return Err(SeparatingError::AttachmentDisconnected);
    }
    check_hypotheses(g, pair)?;
    if pair.r0.interior().is_empty() {
        return Ok(AvoidingCycle { cycle: pair.cycle.clone(), branch: Branch::CycleTrivial, mirrored: false });
    }
    let f = Frame::new(pair)?;
    let (seq, branch) = cycle_core(g, &f, a)?;
    let cycle = as_cycle(g, seq)?;
    let avoided = pair.r0.interior();
    if cycle.stored().iter().any(|v| avoided.contains(v)) || !cycle.contains(pair.v0) || !cycle.contains(pair.v1) {
        return Err(hyp("constructed cycle misses v0/v1 or meets int(R0)"));
    }
    let mirrored = branch == Branch::CycleOneAttached && attached(g, f.r(0, 1), a);
    Ok(AvoidingCycle { cycle, branch, mirrored })
}

fn between_core(g: &Graph, f: &Frame, a: &VertexSet, u0: VertexId, u1: VertexId) -> Result<(Vec<VertexId>, Branch), SeparatingError> {
    let (r00, r01, r10, r11) = (f.r(0, 0), f.r(0, 1), f.r(1, 0), f.r(1, 1));
    let (at01, at10) = (attached(g, r01, a), attached(g, r10, a));
    if at01 && at10 {
        let seq = join(&[
            &f.seg0(u0, f.v0),
            &f.seg1(f.v0, r10),
            &through_attachment(g, a, r10, r01)?,
            &f.seg0(r01, f.v1),
            &f.seg1(f.v1, u1),
        ]);
        return Ok((seq, Branch::BetweenBothAttached));
    }
    if at01 {
        let (mut seq, branch) = between_core(g, &f.swap_sides(), a, u1, u0)?;
        seq.reverse();
        return Ok((seq, branch));
    }
    let int0 = f.int(0);
    let int1 = f.int(1);
    let w1 = first_neighbor_in(g, r01, &int1).ok_or_else(|| hyp("far end of R0 has no neighbor in int(R1)"))?;
    if at10 {
        let seq = join(&[
            &f.seg0(u0, f.v0),
            &f.seg1(f.v0, r10),
            &through_attachment(g, a, r10, r11)?,
            &f.seg1(r11, f.v1),
            &f.seg0(f.v1, r01),
            &f.seg1(w1, u1),
        ]);
        return Ok((seq, Branch::BetweenOneAttached));
    }
    let w0 = first_neighbor_in(g, r10, &int0).ok_or_else(|| hyp("near end of R1 has no neighbor in int(R0)"))?;
    let seq = join(&[
        &f.seg0(u0, w0),
        &f.seg1(r10, f.v0),
        &f.seg0(f.v0, r00),
        &through_attachment(g, a, r00, r11)?,
        &f.seg1(r11, f.v1),
        &f.seg0(f.v1, r01),
        &f.seg1(w1, u1),
    ]);
    Ok((seq, Branch::BetweenNoneAttached))
}

/// Path in `G[V(C) ∪ A]` through `u0, v0, v1, u1` in order for `u0`, `u1`
/// interior to different paths of the minimum pair.
pub fn ordered_path_between_interiors(
    g: &Graph,
    c: &Cycle,
    v0: VertexId,
    v1: VertexId,
    a: &VertexSet,
    u0: VertexId,
    u1: VertexId,
) -> Result<InteriorPath, SeparatingError> {
    let pair = minimum_separating_pair(g, c, v0, v1, a)?;
    ordered_path_between_interiors_of(g, &pair, u0, u1)
}

/// As [`ordered_path_between_interiors`] for an already computed minimum
/// pair; `u0` may lie on either side, `u1` on the other.
pub fn ordered_path_between_interiors_of(
    g: &Graph,
    pair: &SeparatingPair,
    u0: VertexId,
    u1: VertexId,
) -> Result<InteriorPath, SeparatingError> {
    let a = &pair.attachment;
    if !attachment_connected(g, a) {
        return Err(SeparatingError::AttachmentDisconnected);
    }
    check_hypotheses(g, pair)?;
    let mut f = Frame::new(pair)?;
    if f.int(1).contains(&u0) && f.int(0).contains(&u1) {
        f = f.reorient();
    }
    if !f.int(0).contains(&u0) {
        return Err(SeparatingError::NotInInterior(u0));
    }
    if !f.int(1).contains(&u1) {
        return Err(SeparatingError::NotInInterior(u1));
    }
    let (seq, branch) = between_core(g, &f, a, u0, u1)?;
    let at01 = attached(g, f.r(0, 1), a);
    let at10 = attached(g, f.r(1, 0), a);
    let mirrored = f.mirrored ^ (at01 && !at10);
    let path = as_ordered_path(g, seq, &[u0, pair.v0, pair.v1, u1])?;
    Ok(InteriorPath { path, branch, mirrored })
}
