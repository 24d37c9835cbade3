//! End-to-end search for ordered cycles: the exact oracle, the light
//! configuration scan on plane graphs, and the constructive route for
//! 7-connected hosts.

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use crate::certificate::{verify_ordered_cycle, GapError, OrderedCycleCertificate};
use crate::connectivity::{is_k_connected, max_disjoint_paths};
use crate::generate::{generate, GenerateError, GeneratorConfig};
use crate::graph::{neighborhood_of_set, visits_in_cyclic_order, visits_in_order, Cycle, Graph, Inclusivity, Path, VertexId, VertexSet};
use crate::io::emit_graph6;
use crate::oracle::{ordered_cycle, ordered_cycle_in, ordered_path_in};
use crate::planarity::{trace_faces, Embedding};
use crate::separating::{minimum_separating_pair, ordered_path_from_pair};
use crate::skeleton::{
    arc_via, build_skeleton, gap, link, mask_of, refine_skeleton, refine_to_3_connected, walk, Skeleton, SkeletonError,
    SkeletonOutcome, Trace, IDENTITY, SWAP_CYCLES, SWAP_ENDS,
};
use crate::three_planar::{find_witness, minimalize_witness, WitnessSearch};
use crate::walk::{as_ordered_cycle, join};

/// Collections tried by the 3-planar witness search inside the pipeline.
pub const WITNESS_BUDGET: usize = 200_000;

pub fn ordered_cycle_oracle(g: &Graph, anchors: [VertexId; 4]) -> Option<OrderedCycleCertificate> {
    let c = ordered_cycle(g, &anchors)?;
    OrderedCycleCertificate::from_cycle(c, anchors)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum LightConfiguration {
    InnerVertex { v: VertexId, degree: usize },
    BoundaryEdge { u: VertexId, v: VertexId, du: usize, dv: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DischargeError {
    #[error("graph is not 3-connected")]
    NotThreeConnected,
    #[error("outer walk is not a face of the embedding")]
    NotAFace,
    #[error("{0} is not on the outer cycle or x = y")]
    BadMarkers(VertexId),
    #[error("no light configuration exists")]
    NotFound,
}

/// Inner vertices are scanned first, then the edges of the outer cycle.
pub fn find_light_configuration(
    h: &Graph,
    embedding: &Embedding,
    x: VertexId,
    y: VertexId,
) -> Result<LightConfiguration, DischargeError> {
    if !is_k_connected(&h.compacted().0, 3) {
        return Err(DischargeError::NotThreeConnected);
    }
    let outer = &embedding.outer_face;
    let faces = trace_faces(&embedding.graph_rotation());
    let is_face = faces.iter().any(|f| {
        f.len() == outer.len() && (visits_in_cyclic_order(f, outer) || visits_in_cyclic_order(outer, f))
    });
    if !is_face || outer.len() < 3 {
        return Err(DischargeError::NotAFace);
    }
    for m in [x, y] {
        if !outer.contains(&m) || x == y {
            return Err(DischargeError::BadMarkers(m));
        }
    }
    for v in h.vertices() {
        if !outer.contains(&v) && h.degree(v) <= 6 {
            return Ok(LightConfiguration::InnerVertex { v, degree: h.degree(v) });
        }
    }
    for i in 0..outer.len() {
        let (u, v) = (outer[i], outer[(i + 1) % outer.len()]);
        let (du, dv) = (h.degree(u), h.degree(v));
        if ![u, v].contains(&x) && ![u, v].contains(&y) && du + dv <= 7 {
            return Ok(LightConfiguration::BoundaryEdge { u, v, du, dv });
        }
    }
    Err(DischargeError::NotFound)
}

/// Re-checks the degree claims and, for an inner vertex, that it is off the
/// outer walk.
pub fn verify_light_configuration(h: &Graph, embedding: &Embedding, x: VertexId, y: VertexId, c: &LightConfiguration) -> bool {
    let outer = &embedding.outer_face;
    match *c {
        LightConfiguration::InnerVertex { v, degree } => {
            h.contains(v) && !outer.contains(&v) && h.degree(v) == degree && degree <= 6
        }
        LightConfiguration::BoundaryEdge { u, v, du, dv } => {
            let n = outer.len();
            let consecutive = (0..n).any(|i| {
                let (a, b) = (outer[i], outer[(i + 1) % n]);
                (a, b) == (u, v) || (a, b) == (v, u)
            });
            consecutive
                && h.has_edge(u, v)
                && h.degree(u) == du
                && h.degree(v) == dv
                && du + dv <= 7
                && ![u, v].contains(&x)
                && ![u, v].contains(&y)
        }
    }
}

/// A constructive run: the certificate plus the states it passed through.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PipelineRun {
    pub certificate: OrderedCycleCertificate,
    pub states: Vec<String>,
    pub trace: Trace,
}

/// The named states of the constructive run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum State {
    Build,
    Refine,
    RaiseConnectivity,
    PlanarDrawing,
    BetterPlanar,
    Discharge,
    FinalSeparation,
}

impl State {
    fn name(self) -> &'static str {
        match self {
            State::Build => "build-skeleton",
            State::Refine => "refine-skeleton",
            State::RaiseConnectivity => "raise-connectivity",
            State::PlanarDrawing => "planar-drawing",
            State::BetterPlanar => "better-planar",
            State::Discharge => "discharge",
            State::FinalSeparation => "final-separation",
        }
    }
}

/// Carried between the drawing states: the refined skeleton, the outer cycle
/// `Z'` of a plane drawing of `H` (oriented so `z0, z1, z3, z2` follow it),
/// and the drawing itself in compacted ids.
struct Drawing {
    skeleton: Skeleton,
    outer: Cycle,
    embedding: Embedding,
    compact: Graph,
    ids: Vec<VertexId>,
}

/// Constructs a verified ordered-cycle certificate for a 7-connected host,
/// or a gap bundle naming the state that failed.
pub fn find_ordered_cycle_7connected(g: &Graph, anchors: [VertexId; 4]) -> Result<PipelineRun, SkeletonError> {
    let mut trace = Trace::default();
    let mut states = Vec::new();
    let cycle = run(g, anchors, &mut trace, &mut states)?;
    let certificate = OrderedCycleCertificate::from_cycle(cycle, anchors)
        .filter(|c| verify_ordered_cycle(g, c))
        .ok_or_else(|| gap(g, None, "verify", "constructed cycle fails verification", &trace))?;
    Ok(PipelineRun { certificate, states, trace })
}

fn run(g: &Graph, anchors: [VertexId; 4], trace: &mut Trace, states: &mut Vec<String>) -> Result<Cycle, SkeletonError> {
    let mut enter = |s: State, trace: &mut Trace| {
        states.push(s.name().to_string());
        trace.tag(&format!("state.{}", s.name()));
    };
    enter(State::Build, trace);
    let s = match build_skeleton(g, anchors, trace)? {
        SkeletonOutcome::OrderedCycle { cycle } => return Ok(cycle),
        SkeletonOutcome::Skeleton { skeleton } => skeleton,
    };
    enter(State::Refine, trace);
    let s = match refine_skeleton(g, &s, trace)? {
        SkeletonOutcome::OrderedCycle { cycle } => return Ok(cycle),
        SkeletonOutcome::Skeleton { skeleton } => skeleton,
    };
    enter(State::RaiseConnectivity, trace);
    let s = match refine_to_3_connected(g, &s, trace)? {
        SkeletonOutcome::OrderedCycle { cycle } => return Ok(cycle),
        SkeletonOutcome::Skeleton { skeleton } => skeleton,
    };
    enter(State::PlanarDrawing, trace);
    let d = match planar_drawing(g, &s, trace)? {
        Ok(c) => return Ok(c),
        Err(d) => d,
    };
    enter(State::BetterPlanar, trace);
    let (x0, x1) = match better_planar(g, &d, trace)? {
        Ok(c) => return Ok(c),
        Err(x) => x,
    };
    enter(State::Discharge, trace);
    let (s, u, v) = discharge(g, &d, x0, x1, trace)?;
    enter(State::FinalSeparation, trace);
    final_separation(g, &s, u, v, trace)
}

fn hub_union(g: &Graph, s: &Skeleton) -> VertexSet {
    let mut u = s.vertex_set();
    u.extend(s.residual(g).vertices());
    u
}

/// Closes `seq` as an ordered cycle, falling back to an exact search inside
/// `seq ∪ union`.
fn finish(g: &Graph, s: &Skeleton, seq: Vec<VertexId>, union: &VertexSet, trace: &mut Trace, tag: &str) -> Option<Cycle> {
    if let Ok(c) = as_ordered_cycle(g, seq.clone(), &s.anchors) {
        trace.tag(tag);
        return Some(c);
    }
    if seq.is_empty() {
        return None;
    }
    let c = ordered_cycle_in(g, &mask_of(g, union.iter().chain(&seq)), &s.anchors)?;
    trace.tag(&format!("{tag}+union"));
    trace.union_searches += 1;
    Some(c)
}

/// `C0[c0,c1] + P1 + (z1..z2) + P2 + C2[c2,c3] + P3 + (z3..u) + uv + C0[v,c0]`
/// with `C0[c0,c1]` avoiding `v`.
fn crossing_template(s: &Skeleton, r12: &[VertexId], r3u: &[VertexId], v: VertexId) -> Vec<VertexId> {
    let [c0, c1, c2, c3] = s.anchors;
    for d in [s.c0_cycle.clone(), s.c0_cycle.reversed()] {
        let head = walk(&d, c0, c1);
        if head.contains(&v) && v != c0 {
            continue;
        }
        return join(&[
            &head,
            &s.paths[1].0,
            r12,
            &rev(&s.paths[2].0),
            &walk(&s.c2_cycle, c2, c3),
            &s.paths[3].0,
            r3u,
            &walk(&d, v, c0),
        ]);
    }
    Vec::new()
}

fn rev(v: &[VertexId]) -> Vec<VertexId> {
    v.iter().rev().copied().collect()
}

/// The linkage `({z0, z3}, {z1, z2})` or a plane drawing of `H` whose outer
/// cycle carries every neighbor of the anchor cycles.
fn planar_drawing(g: &Graph, s: &Skeleton, trace: &mut Trace) -> Result<Result<Cycle, Drawing>, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [z0, z1, z2, z3] = s.z_contacts;
    let h = s.residual(g);
    let union = hub_union(g, s);
    if let Some((r03, r12)) = link(g, &h.mask(), z3, z0, z1, z2) {
        let seq = join(&[
            &walk(&s.c0_cycle, c0, c1),
            &s.paths[1].0,
            &r12,
            &rev(&s.paths[2].0),
            &walk(&s.c2_cycle, c2, c3),
            &s.paths[3].0,
            &r03,
            &rev(&s.paths[0].0),
        ]);
        return finish(g, s, seq, &union, trace, "planar-drawing.linkage")
            .map(Ok)
            .ok_or_else(|| gap(g, Some(s), "planar-drawing.linkage", "linkage did not close a cycle", trace));
    }
    let (hc, ids) = h.compacted();
    let local = |v: VertexId| ids.iter().position(|&x| x == v).expect("vertex of H");
    let order = [z0, z1, z3, z2].map(local);
    let w = match find_witness(&hc, &order, WITNESS_BUDGET) {
        WitnessSearch::Found(w) => minimalize_witness(&hc, &w, WITNESS_BUDGET),
        WitnessSearch::Absent => {
            return Err(gap(g, Some(s), "planar-drawing.witness", "neither linkage nor 3-planar witness", trace))
        }
        WitnessSearch::BudgetExhausted => {
            return Err(gap(g, Some(s), "planar-drawing.witness", "witness search budget exhausted", trace))
        }
    };
    let outer_local = w.drawing.outer_vertices();
    let hset = h.vertex_set();
    let sides: VertexSet = s.c0_cycle.stored().iter().chain(s.c2_cycle.stored()).copied().collect();
    let attached = neighborhood_of_set(g, &sides)?;
    if let Some(&u) = attached.iter().find(|u| hset.contains(u) && !outer_local.contains(&local(**u))) {
        for &v in g.neighbors(u).iter().filter(|v| sides.contains(v)) {
            let perm = match (s.c0_cycle.contains(v), v == c1 || v == c3) {
                (true, false) => IDENTITY,
                (true, true) => SWAP_ENDS,
                (false, false) => SWAP_CYCLES,
                (false, true) => crate::skeleton::SWAP_BOTH,
            };
            let t = s.relabel(perm);
            let [_, tz1, tz2, tz3] = t.z_contacts.map(local);
            let lk = crate::linkage::outer_face_linkage(&hc, &w, tz1, tz2, tz3, local(u))
                .ok()
                .map(|l| {
                    let lift = |p: &Path, from: VertexId| -> Vec<VertexId> {
                        let q: Vec<VertexId> = p.vertices().iter().map(|&x| ids[x]).collect();
                        if q.first() == Some(&from) {
                            q
                        } else {
                            rev(&q)
                        }
                    };
                    (lift(&l.p1, t.z_contacts[1]), lift(&l.p2, t.z_contacts[3]))
                })
                .or_else(|| link(g, &h.mask(), t.z_contacts[1], t.z_contacts[2], t.z_contacts[3], u));
            let Some((r12, r3u)) = lk else { continue };
            let seq = crossing_template(&t, &r12, &r3u, v);
            if let Some(c) = finish(g, &t, seq, &union, trace, "planar-drawing.inner-neighbor") {
                return Ok(Ok(c));
            }
        }
        return Err(gap(g, Some(s), "planar-drawing.inner-neighbor", format!("{u} is off the outer face but no cycle closes"), trace));
    }
    if !w.parts.is_empty() {
        return Err(gap(g, Some(s), "planar-drawing.parts", format!("{} parts survive minimalization", w.parts.len()), trace));
    }
    let mut outer = Cycle::new(w.drawing.outer_face.iter().map(|&x| ids[x]).collect())
        .map_err(|e| gap(g, Some(s), "planar-drawing.outer", e.to_string(), trace))?;
    if !visits_in_cyclic_order(&outer.sequence(), &[z0, z1, z3, z2]) {
        outer = outer.reversed();
    }
    trace.tag("planar-drawing.plane");
    Ok(Err(Drawing { skeleton: s.clone(), outer, embedding: w.drawing, compact: hc, ids }))
}

/// Open arc of the oriented outer cycle.
fn open_arc(c: &Cycle, a: VertexId, b: VertexId) -> VertexSet {
    c.arc(a, b, Inclusivity::Neither).map(|p| p.vertex_set()).unwrap_or_default()
}

/// Contacts `x0, x1` splitting `Z'` between the two anchor cycles, or the
/// cycle produced by a violation.
fn better_planar(g: &Graph, d: &Drawing, trace: &mut Trace) -> Result<Result<Cycle, (VertexId, VertexId)>, SkeletonError> {
    let s = &d.skeleton;
    let z = &d.outer;
    let [c0, c1, _, _] = s.anchors;
    let [z0, z1, z2, z3] = s.z_contacts;
    let h = s.residual(g);
    let hm = h.mask();
    let mut frame: VertexSet = s.c0_cycle.vertex_set();
    frame.extend(s.c2_cycle.stored());
    frame.extend(z.stored());
    frame.extend(s.paths.iter().flat_map(|p| p.vertices().iter().copied()));
    let hits = |c: VertexId, a: VertexId, b: VertexId| open_arc(z, a, b).iter().any(|x| g.has_edge(c, *x));
    if hits(c0, z1, z2) || hits(c1, z3, z0) {
        let c = ordered_cycle_in(g, &mask_of(g, &frame), &s.anchors)
            .ok_or_else(|| gap(g, Some(s), "better-planar.contacts", "misplaced anchor contact without a cycle", trace))?;
        trace.tag("better-planar.contacts+union");
        trace.union_searches += 1;
        return Ok(Ok(c));
    }
    let seq = z.sequence();
    let n = seq.len();
    let at = |v: VertexId| seq.iter().position(|&x| x == v).expect("on Z'");
    let x0 = (0..n).map(|k| seq[(at(z2) + k) % n]).find(|&x| g.has_edge(c0, x));
    let x1 = (0..n).map(|k| seq[(at(z3) + n - k) % n]).find(|&x| g.has_edge(c1, x));
    let (Some(x0), Some(x1)) = (x0, x1) else {
        return Err(gap(g, Some(s), "better-planar.contacts", "anchor without a neighbor on Z'", trace));
    };
    let union = hub_union(g, s);
    for &u in &open_arc(z, x1, x0) {
        let contacts: Vec<VertexId> = g.neighbors(u).iter().copied().filter(|&v| s.c0_cycle.contains(v)).collect();
        for &v in &contacts {
            for perm in [IDENTITY, SWAP_ENDS] {
                let t = s.relabel(perm);
                if v == t.anchors[1] {
                    continue;
                }
                let [tz0, tz1, tz2, tz3] = t.z_contacts;
                if let Some((r12, r3u)) = link(g, &hm, tz1, tz2, tz3, u) {
                    let seq = crossing_template(&t, &r12, &r3u, v);
                    if let Some(c) = finish(g, &t, seq, &union, trace, "better-planar.c0-contact") {
                        return Ok(Ok(c));
                    }
                }
                if v != t.anchors[0] {
                    if let Some((r03, r2u)) = link(g, &hm, tz0, tz3, tz2, u) {
                        let [tc0, tc1, tc2, tc3] = t.anchors;
                        let seq = join(&[
                            &t.paths[0].0,
                            &r03,
                            &rev(&t.paths[3].0),
                            &walk(&t.c2_cycle, tc3, tc2),
                            &t.paths[2].0,
                            &r2u,
                            &arc_via(&t.c0_cycle, v, tc0, tc1),
                        ]);
                        if let Some(c) = finish(g, &t, seq, &union, trace, "better-planar.c0-contact") {
                            return Ok(Ok(c));
                        }
                    }
                }
            }
        }
        if !contacts.is_empty() {
            return Err(gap(g, Some(s), "better-planar.c0-contact", format!("{u} sees C0 from the C2 side"), trace));
        }
    }
    for &u in &open_arc(z, x0, x1) {
        let contacts: Vec<VertexId> = g.neighbors(u).iter().copied().filter(|&v| s.c2_cycle.contains(v)).collect();
        for &v in &contacts {
            for (perm, x) in [(IDENTITY, x0), (SWAP_ENDS, x1)] {
                let t = s.relabel(perm);
                let [tc0, tc1, tc2, tc3] = t.anchors;
                let [_, tz1, _, tz3] = t.z_contacts;
                if v == tc3 {
                    continue;
                }
                let Some((rx, ru)) = link(g, &hm, x, tz3, u, tz1) else { continue };
                let seq = join(&[
                    &[tc0],
                    &rx,
                    &rev(&t.paths[3].0),
                    &arc_via(&t.c2_cycle, tc3, v, tc2),
                    &ru,
                    &rev(&t.paths[1].0),
                    &walk(&t.c0_cycle, tc1, tc0),
                ]);
                if let Some(c) = finish(g, &t, seq, &union, trace, "better-planar.c2-contact") {
                    return Ok(Ok(c));
                }
            }
        }
        if !contacts.is_empty() {
            return Err(gap(g, Some(s), "better-planar.c2-contact", format!("{u} sees C2 from the C0 side"), trace));
        }
    }
    trace.tag("better-planar.split");
    Ok(Err((x0, x1)))
}

/// A light edge of `Z'` away from `x0, x1`, relabeled so that it sees only
/// `C0` among the anchor cycles.
fn discharge(g: &Graph, d: &Drawing, x0: VertexId, x1: VertexId, trace: &mut Trace) -> Result<(Skeleton, VertexId, VertexId), SkeletonError> {
    let s = &d.skeleton;
    let local = |v: VertexId| d.ids.iter().position(|&x| x == v).expect("vertex of H");
    let light = find_light_configuration(&d.compact, &d.embedding, local(x0), local(x1))
        .map_err(|e| gap(g, Some(s), "discharge", e.to_string(), trace))?;
    let (u, v) = match light {
        LightConfiguration::InnerVertex { v, degree } => {
            return Err(gap(g, Some(s), "discharge", format!("inner vertex {} has degree {degree}", d.ids[v]), trace))
        }
        LightConfiguration::BoundaryEdge { u, v, .. } => (d.ids[u], d.ids[v]),
    };
    let c0_side = open_arc(&d.outer, x0, x1);
    let t = if c0_side.contains(&u) && c0_side.contains(&v) {
        s.clone()
    } else {
        s.relabel(SWAP_CYCLES)
    };
    trace.tag("discharge.light-edge");
    Ok((t, u, v))
}

/// The separating pair of `C0` around the light edge `uv`, closed through an
/// edge leaving its interior.
fn final_separation(g: &Graph, s: &Skeleton, u: VertexId, v: VertexId, trace: &mut Trace) -> Result<Cycle, SkeletonError> {
    let [c0, c1, c2, c3] = s.anchors;
    let [_, _, z2, z3] = s.z_contacts;
    let h = s.residual(g);
    let union = hub_union(g, s);
    let uv: VertexSet = [u, v].into_iter().collect();
    let pair = minimum_separating_pair(g, &s.c0_cycle, c0, c1, &uv)?;
    let ints = pair.interiors();
    let mut t = pair.ends();
    t.extend([u, v]);
    if ints.is_empty() {
        for (x, y) in [(u, v), (v, u)] {
            let Some((qx, qy)) = link(g, &h.mask(), z2, x, z3, y) else { continue };
            for &a in g.neighbors(x).iter().filter(|a| s.c0_cycle.contains(**a)) {
                for &b in g.neighbors(y).iter().filter(|b| s.c0_cycle.contains(**b) && **b != a) {
                    for dir in [s.c0_cycle.clone(), s.c0_cycle.reversed()] {
                        let mid = walk(&dir, a, b);
                        let seq = join(&[&qx, &mid, &rev(&qy), &rev(&s.paths[3].0), &walk(&s.c2_cycle, c3, c2), &s.paths[2].0]);
                        if let Ok(c) = as_ordered_cycle(g, seq, &s.anchors) {
                            trace.tag("final.trivial-pair");
                            return Ok(c);
                        }
                    }
                }
            }
        }
        return Err(gap(g, Some(s), "final.trivial-pair", "no bridge over C0 closes a cycle", trace));
    }
    let edge = ints
        .iter()
        .flat_map(|&x| g.neighbors(x).iter().map(move |&y| (x, y)))
        .find(|(_, y)| !ints.contains(y) && !t.contains(y));
    let Some((x, y)) = edge else {
        return Err(gap(g, Some(s), "final.edge", "separating pair interior has no outside edge", trace));
    };
    if !h.contains(y) {
        return Err(gap(g, Some(s), "final.edge", format!("edge {x}{y} leaves the pair outside H"), trace));
    }
    let mut hv = h.mask();
    hv[v] = false;
    let qs = max_disjoint_paths(g, &hv, &[u, y].into_iter().collect(), &[z2, z3].into_iter().collect(), 2);
    if qs.len() < 2 {
        return Err(gap(g, Some(s), "final.paths", "H - v lacks two disjoint paths to z2, z3", trace));
    }
    let (qu, qy) = if qs[0].first() == Some(u) { (&qs[0], &qs[1]) } else { (&qs[1], &qs[0]) };
    let u_to_z2 = qu.last() == Some(z2);
    // The path runs u, c_i, c_{1-i}, x with i = 1 when u reaches z2.
    let (ci, cj) = if u_to_z2 { (c1, c0) } else { (c0, c1) };
    let lead = lead_path(g, s, &pair, u, v, ci, cj, x, trace)
        .ok_or_else(|| gap(g, Some(s), "final.lead", "no path through u, c_i, c_(1-i), x", trace))?;
    let (tail_p, tail_c) = if u_to_z2 {
        (walk(&s.c2_cycle, c3, c2), (&s.paths[3], &s.paths[2]))
    } else {
        (walk(&s.c2_cycle, c2, c3), (&s.paths[2], &s.paths[3]))
    };
    let seq = join(&[&lead, &[y], &qy.0, &rev(&tail_c.0 .0), &tail_p, &tail_c.1 .0, &rev(&qu.0)]);
    finish(g, s, seq, &union, trace, "final.assembly")
        .ok_or_else(|| gap(g, Some(s), "final.assembly", "assembled walk is not an ordered cycle", trace))
}

/// Path in `G[V(C0) ∪ {u, v}]` through `u, ci, cj, x`.
#[allow(clippy::too_many_arguments)]
fn lead_path(
    g: &Graph,
    s: &Skeleton,
    pair: &crate::separating::SeparatingPair,
    u: VertexId,
    v: VertexId,
    ci: VertexId,
    cj: VertexId,
    x: VertexId,
    trace: &mut Trace,
) -> Option<Vec<VertexId>> {
    if let Ok(ap) = ordered_path_from_pair(g, pair, x, cj) {
        let mut p = rev(&ap.path.0);
        let a = p[0];
        if g.has_edge(a, u) {
            p.insert(0, u);
        } else if g.has_edge(a, v) && g.has_edge(v, u) {
            p.splice(0..0, [u, v]);
        }
        if p[0] == u && visits_in_order(&p, &[u, ci, cj, x]) {
            trace.tag("final.lead.pair");
            return Some(p);
        }
    }
    let mut m = mask_of(g, s.c0_cycle.stored());
    m[u] = true;
    m[v] = true;
    let p = ordered_path_in(g, &m, &[u, ci, cj, x])?;
    trace.tag("final.lead.search");
    Some(p.0)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub instance: usize,
    pub graph6: String,
    pub anchors: [VertexId; 4],
    /// Every route was excluded by the exhaustive search.
    pub evidence: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterexampleReport {
    pub instances: usize,
    pub anchor_tuples: usize,
    pub findings: Vec<Finding>,
}

/// Samples `budget` graphs (instance `i` uses seed `config.seed + i`) and
/// runs the oracle on one anchor tuple per cyclic class.
pub fn search_counterexample(config: &GeneratorConfig, budget: usize) -> Result<CounterexampleReport, GenerateError> {
    let mut report = CounterexampleReport { instances: 0, anchor_tuples: 0, findings: Vec::new() };
    for i in 0..budget {
        let mut cfg = config.clone();
        cfg.seed = config.seed.wrapping_add(i as u64);
        let g = generate(&cfg)?;
        report.instances += 1;
        let vs: Vec<VertexId> = g.vertices().collect();
        for tuple in anchor_classes(&vs) {
            report.anchor_tuples += 1;
            if ordered_cycle(&g, &tuple).is_none() {
                report.findings.push(Finding {
                    instance: i,
                    graph6: emit_graph6(&g),
                    anchors: tuple,
                    evidence: "exhaustive ordered-cycle search found no cycle".into(),
                });
            }
        }
    }
    Ok(report)
}

/// One representative per cyclic order class of every 4-subset: the smallest
/// vertex first, up to reversal.
pub fn anchor_classes(vs: &[VertexId]) -> Vec<[VertexId; 4]> {
    let mut out = Vec::new();
    let n = vs.len();
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                for d in c + 1..n {
                    let (a, b, c, d) = (vs[a], vs[b], vs[c], vs[d]);
                    out.extend([[a, b, c, d], [a, b, d, c], [a, c, b, d]]);
                }
            }
        }
    }
    out
}

/// Runs both the oracle and the constructive pipeline and reports whether
/// they agree on existence.
pub fn cross_check(g: &Graph, anchors: [VertexId; 4]) -> Result<bool, SkeletonError> {
    let run = find_ordered_cycle_7connected(g, anchors)?;
    Ok(verify_ordered_cycle(g, &run.certificate) && ordered_cycle_oracle(g, anchors).is_some())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{circulant, complete_bipartite, octahedron, random_planar_3conn, rng_for, wheel, Model};
    use crate::planarity::{embed, planar_with_boundary};
    use rand::Rng;

    #[test]
    fn oracle_examples() {
        let c4 = Graph::cycle(4);
        let cert = ordered_cycle_oracle(&c4, [0, 1, 2, 3]).unwrap();
        assert!(verify_ordered_cycle(&c4, &cert));
        assert_eq!(cert.cycle.len(), 4);
        assert!(ordered_cycle_oracle(&c4, [0, 2, 1, 3]).is_none());
    }

    #[test]
    fn wheel_has_a_light_rim_edge() {
        let w = wheel(8);
        let rim: Vec<VertexId> = (0..8).collect();
        let emb = planar_with_boundary(&w, &rim).unwrap();
        let light = find_light_configuration(&w, &emb, 0, 1).unwrap();
        assert!(matches!(light, LightConfiguration::BoundaryEdge { du: 3, dv: 3, .. }));
        assert!(verify_light_configuration(&w, &emb, 0, 1, &light));
    }

    #[test]
    fn octahedron_has_a_light_inner_vertex() {
        let g = octahedron();
        let rot = embed(&g).unwrap();
        let face = trace_faces(&rot).into_iter().find(|f| f.len() == 3).unwrap();
        let emb = Embedding { rotation: rot, hub: None, outer_face: face.clone() };
        let light = find_light_configuration(&g, &emb, face[0], face[1]).unwrap();
        assert!(matches!(light, LightConfiguration::InnerVertex { degree: 4, .. }));
        assert!(verify_light_configuration(&g, &emb, face[0], face[1], &light));
    }

    #[test]
    fn discharge_preconditions() {
        let c = Graph::cycle(5);
        let emb = planar_with_boundary(&c, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(find_light_configuration(&c, &emb, 0, 1), Err(DischargeError::NotThreeConnected));
        let w = wheel(6);
        let emb = planar_with_boundary(&w, &[0, 1, 2, 3, 4, 5]).unwrap();
        assert_eq!(find_light_configuration(&w, &emb, 1, 1), Err(DischargeError::BadMarkers(1)));
        assert_eq!(find_light_configuration(&w, &emb, 6, 1), Err(DischargeError::BadMarkers(6)));
    }

    #[test]
    fn random_plane_graphs_have_light_configurations() {
        let mut rng = rng_for(11);
        for _ in 0..40 {
            let n = rng.gen_range(5..=16);
            let g = random_planar_3conn(n, n / 2, &mut rng);
            let rot = embed(&g).unwrap();
            let faces = trace_faces(&rot);
            let face = faces[rng.gen_range(0..faces.len())].clone();
            let emb = Embedding { rotation: rot, hub: None, outer_face: face.clone() };
            let light = find_light_configuration(&g, &emb, face[0], face[1]).unwrap();
            assert!(verify_light_configuration(&g, &emb, face[0], face[1], &light));
        }
    }

    #[test]
    fn constructive_examples() {
        for (g, anchors) in [
            (Graph::complete(8), [0, 1, 2, 3]),
            (Graph::complete(8), [5, 2, 7, 0]),
            (circulant(16, &[1, 2, 3, 4]), [0, 8, 3, 11]),
            (circulant(16, &[1, 2, 3, 4]), [2, 9, 14, 6]),
            (complete_bipartite(7, 7), [0, 7, 1, 8]),
            (complete_bipartite(7, 7), [0, 1, 7, 8]),
        ] {
            let run = find_ordered_cycle_7connected(&g, anchors).unwrap();
            assert!(verify_ordered_cycle(&g, &run.certificate));
            assert!(ordered_cycle_oracle(&g, anchors).is_some());
            assert_eq!(run.states[0], "build-skeleton");
        }
    }

    #[test]
    fn constructive_rejects_weak_hosts() {
        assert!(matches!(
            find_ordered_cycle_7connected(&Graph::cycle(9), [0, 1, 2, 3]),
            Err(SkeletonError::Hypothesis(_))
        ));
    }

    #[test]
    fn counterexample_search_examples() {
        let config = GeneratorConfig { model: Model::Gnp { n: 8, p: 1.0 }, floor: 6, seed: 3, max_attempts: 4 };
        assert_eq!(search_counterexample(&config, 0).unwrap().instances, 0);
        let r = search_counterexample(&config, 2).unwrap();
        assert_eq!(r.instances, 2);
        assert_eq!(r.anchor_tuples, 2 * 3 * 70);
        assert!(r.findings.is_empty());
    }

    #[test]
    fn anchor_classes_cover_every_cyclic_order() {
        let classes = anchor_classes(&[0, 1, 2, 3]);
        assert_eq!(classes.len(), 3);
        let g = Graph::complete(4);
        for perm in [[0, 1, 2, 3], [1, 3, 0, 2], [3, 2, 1, 0], [2, 0, 3, 1]] {
            let c = ordered_cycle(&g, &perm).unwrap();
            assert!(classes.iter().any(|cl| visits_in_cyclic_order(c.stored(), cl)));
        }
    }
}
