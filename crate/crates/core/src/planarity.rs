//! Planarity testing with rotation-system output.
//!
//! Each biconnected block is embedded by the Demoucron–Malgrange–Pertuiset
//! face-splitting algorithm; blocks are glued at cut vertices. Boundary and
//! facial-triangle constraints are expressed through auxiliary gadgets.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::block_decomposition;
use crate::graph::{Cycle, Graph, VertexId, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EmbeddingError {
    #[error("rotation at {0} is not a permutation of its neighbors")]
    BadRotation(VertexId),
    #[error("face {0:?} is not a simple cycle")]
    NonSimpleFace(Vec<VertexId>),
    #[error("rotation system has positive genus")]
    NotPlanar,
}

/// Rotation system: for every vertex, the cyclic order of its neighbors.
/// Absent vertices have empty lists.
pub type Rotation = Vec<Vec<VertexId>>;

/// A planar rotation system of `G⁺ = G + hub`, where the hub (if any) is
/// adjacent to the boundary vertices in their cyclic order. The outer face of
/// `G` is the face that contained the hub.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub rotation: Rotation,
    pub hub: Option<VertexId>,
    /// Boundary walk of the outer face of `G`, read from the hub angle at the
    /// first boundary vertex with a neighbor in `G`.
    pub outer_face: Vec<VertexId>,
}

fn successor(rot: &[VertexId], x: VertexId) -> Option<VertexId> {
    let i = rot.iter().position(|&y| y == x)?;
    Some(rot[(i + 1) % rot.len()])
}

/// Traces all faces of a rotation system; each face is the list of dart
/// tails. Dart `(u, v)` is followed by `(v, σ_v(u))`.
pub fn trace_faces(rot: &Rotation) -> Vec<Vec<VertexId>> {
    let mut seen: HashSet<(VertexId, VertexId)> = HashSet::new();
    let mut faces = Vec::new();
    for u in 0..rot.len() {
        for &v in &rot[u] {
            if seen.contains(&(u, v)) {
                continue;
            }
            let mut face = Vec::new();
            let (mut a, mut b) = (u, v);
            while seen.insert((a, b)) {
                face.push(a);
                let c = successor(&rot[b], a).expect("rotation lists its neighbors");
                a = b;
                b = c;
            }
            faces.push(face);
        }
    }
    faces
}

/// Checks that `rot` is a rotation system of `g` and that it is planar
/// (`V − E + F = 2` on every component with an edge).
pub fn check_rotation(g: &Graph, rot: &Rotation) -> Result<(), EmbeddingError> {
    for v in 0..rot.len().max(g.id_bound()) {
        let listed: BTreeSet<VertexId> = rot.get(v).map(|r| r.iter().copied().collect()).unwrap_or_default();
        let actual: BTreeSet<VertexId> = if g.contains(v) { g.neighbors(v).iter().copied().collect() } else { BTreeSet::new() };
        let len = rot.get(v).map_or(0, Vec::len);
        if listed != actual || len != listed.len() {
            return Err(EmbeddingError::BadRotation(v));
        }
    }
    let faces = trace_faces(rot);
    let comps = g.components();
    let mut comp_of = vec![usize::MAX; g.id_bound()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = i;
        }
    }
    let mut face_count = vec![0i64; comps.len()];
    for f in &faces {
        face_count[comp_of[f[0]]] += 1;
    }
    for (i, c) in comps.iter().enumerate() {
        let v = c.len() as i64;
        let e: i64 = c.iter().map(|&x| g.degree(x) as i64).sum::<i64>() / 2;
        if e > 0 && v - e + face_count[i] != 2 {
            return Err(EmbeddingError::NotPlanar);
        }
    }
    Ok(())
}

/// DMP on one biconnected block given by its vertex list; returns its faces.
/// Attachments of a fragment and a lazily built path between two of them.
type Fragment<'a> = (BTreeSet<VertexId>, Box<dyn Fn() -> Vec<VertexId> + 'a>);

fn embed_block(g: &Graph, block: &[VertexId], avoid_faces_with: &HashSet<VertexId>) -> Option<Vec<Vec<VertexId>>> {
    let inb: HashSet<VertexId> = block.iter().copied().collect();
    let nb = |v: VertexId| g.neighbors(v).iter().copied().filter(|w| inb.contains(w));
    let total_edges: usize = block.iter().map(|&v| nb(v).count()).sum::<usize>() / 2;
    // Initial cycle: an edge plus a path avoiding it.
    let u0 = block[0];
    let v0 = nb(u0).next()?;
    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
    let mut queue = VecDeque::from([v0]);
    prev.insert(v0, v0);
    while let Some(x) = queue.pop_front() {
        if x == u0 {
            break;
        }
        for w in nb(x) {
            if (x == v0 && w == u0) || prev.contains_key(&w) {
                continue;
            }
            prev.insert(w, x);
            queue.push_back(w);
        }
    }
    let mut cycle = vec![u0];
    let mut x = u0;
    while x != v0 {
        x = *prev.get(&x)?;
        cycle.push(x);
    }
    let mut embedded: HashSet<VertexId> = cycle.iter().copied().collect();
    let key = |a: VertexId, b: VertexId| (a.min(b), a.max(b));
    let mut edges: HashSet<(VertexId, VertexId)> = HashSet::new();
    for i in 0..cycle.len() {
        edges.insert(key(cycle[i], cycle[(i + 1) % cycle.len()]));
    }
    let mut rev_cycle = cycle.clone();
    rev_cycle.reverse();
    let mut faces: Vec<Vec<VertexId>> = vec![cycle, rev_cycle];

    while edges.len() < total_edges {
        let mut fragments: Vec<Fragment<'_>> = Vec::new();
        for &u in block {
            if !embedded.contains(&u) {
                continue;
            }
            for w in nb(u) {
                if u < w && embedded.contains(&w) && !edges.contains(&key(u, w)) {
                    fragments.push(([u, w].into_iter().collect(), Box::new(move || vec![u, w])));
                }
            }
        }
        let mut seen: HashSet<VertexId> = HashSet::new();
        for &s in block {
            if embedded.contains(&s) || seen.contains(&s) {
                continue;
            }
            let mut comp = vec![s];
            seen.insert(s);
            let mut k = 0;
            while k < comp.len() {
                let x = comp[k];
                k += 1;
                for w in nb(x) {
                    if !embedded.contains(&w) && seen.insert(w) {
                        comp.push(w);
                    }
                }
            }
            let comp_set: HashSet<VertexId> = comp.iter().copied().collect();
            let attach: BTreeSet<VertexId> = comp.iter().flat_map(|&x| nb(x)).filter(|w| embedded.contains(w)).collect();
            let a1 = *attach.iter().next()?;
            let gref = g;
            let inb2 = inb.clone();
            let attach2 = attach.clone();
            fragments.push((
                attach,
                Box::new(move || {
                    let nbf = |v: VertexId| gref.neighbors(v).iter().copied().filter(|w| inb2.contains(w));
                    let mut prev: HashMap<VertexId, VertexId> = HashMap::new();
                    let mut queue = VecDeque::new();
                    for w in nbf(a1) {
                        if comp_set.contains(&w) && !prev.contains_key(&w) {
                            prev.insert(w, a1);
                            queue.push_back(w);
                        }
                    }
                    while let Some(x) = queue.pop_front() {
                        if let Some(a2) = nbf(x).find(|w| *w != a1 && attach2.contains(w)) {
                            let mut path = vec![a2, x];
                            let mut y = x;
                            while prev[&y] != a1 {
                                y = prev[&y];
                                path.push(y);
                            }
                            path.push(a1);
                            path.reverse();
                            return path;
                        }
                        for w in nbf(x) {
                            if comp_set.contains(&w) && !prev.contains_key(&w) {
                                prev.insert(w, x);
                                queue.push_back(w);
                            }
                        }
                    }
                    Vec::new()
                }),
            ));
        }
        let face_sets: Vec<HashSet<VertexId>> = faces.iter().map(|f| f.iter().copied().collect()).collect();
        let mut choice: Option<(usize, usize)> = None;
        let mut fallback: Option<(usize, usize)> = None;
        for (fi, (attach, _)) in fragments.iter().enumerate() {
            let admissible: Vec<usize> = (0..faces.len()).filter(|&k| attach.iter().all(|a| face_sets[k].contains(a))).collect();
            match admissible.len() {
                0 => return None,
                1 => {
                    choice = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if fallback.is_none() {
                        let pick = admissible
                            .iter()
                            .copied()
                            .find(|&k| !faces[k].iter().any(|v| avoid_faces_with.contains(v)))
                            .unwrap_or(admissible[0]);
                        fallback = Some((fi, pick));
                    }
                }
            }
        }
        let (fi, k) = choice.or(fallback)?;
        let path = (fragments[fi].1)();
        if path.len() < 2 {
            return None;
        }
        let f = faces.swap_remove(k);
        let (u, w) = (path[0], path[path.len() - 1]);
        let i = f.iter().position(|&x| x == u)?;
        let rotated: Vec<VertexId> = f[i..].iter().chain(&f[..i]).copied().collect();
        let j = rotated.iter().position(|&x| x == w)?;
        let interior = &path[1..path.len() - 1];
        let mut f1: Vec<VertexId> = rotated[..=j].to_vec();
        f1.extend(interior.iter().rev());
        let mut f2: Vec<VertexId> = rotated[j..].to_vec();
        f2.push(u);
        f2.extend(interior.iter());
        faces.push(f1);
        faces.push(f2);
        for win in path.windows(2) {
            edges.insert(key(win[0], win[1]));
        }
        embedded.extend(path.iter().copied());
    }
    Some(faces)
}

/// Planar rotation system of `g`, or `None` when `g` is not planar. Blocks
/// meeting at a cut vertex are glued in angles that do not touch any vertex
/// of `shielded`.
pub fn embed_avoiding(g: &Graph, shielded: &HashSet<VertexId>) -> Option<Rotation> {
    let n = g.id_bound();
    if g.order() >= 3 && g.size() > 3 * g.order() - 6 {
        return None;
    }
    let mut per_block: Vec<BTreeMap<VertexId, Vec<VertexId>>> = Vec::new();
    for block in block_decomposition(g) {
        let verts: Vec<VertexId> = block.iter().copied().collect();
        let mut rot: BTreeMap<VertexId, Vec<VertexId>> = BTreeMap::new();
        match verts.len() {
            1 => {}
            2 => {
                rot.insert(verts[0], vec![verts[1]]);
                rot.insert(verts[1], vec![verts[0]]);
            }
            _ => {
                let faces = embed_block(g, &verts, shielded)?;
                let mut next: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
                for f in &faces {
                    let k = f.len();
                    for i in 0..k {
                        next.insert((f[i], f[(i + k - 1) % k]), f[(i + 1) % k]);
                    }
                }
                for &v in &verts {
                    let first = g.neighbors(v).iter().copied().find(|w| block.contains(w))?;
                    let mut order = vec![first];
                    let mut x = *next.get(&(v, first))?;
                    while x != first {
                        order.push(x);
                        x = *next.get(&(v, x))?;
                    }
                    rot.insert(v, order);
                }
            }
        }
        per_block.push(rot);
    }
    let mut rotation: Rotation = vec![Vec::new(); n];
    for block_rot in &per_block {
        for (&v, order) in block_rot {
            let k = order.len();
            let safe = (0..k).find(|&i| {
                let (last, first) = (order[(i + k - 1) % k], order[i]);
                !shielded.contains(&last) && !shielded.contains(&first)
            });
            let start = safe.unwrap_or(0);
            rotation[v].extend(order[start..].iter().chain(&order[..start]));
        }
    }
    check_rotation(g, &rotation).ok()?;
    Some(rotation)
}

pub fn embed(g: &Graph) -> Option<Rotation> {
    embed_avoiding(g, &HashSet::new())
}

pub fn is_planar(g: &Graph) -> bool {
    embed(g).is_some()
}

/// Faces of `rot` restricted to `g` after removing the vertices in `drop`.
fn restrict(rot: &Rotation, keep: &dyn Fn(VertexId) -> bool) -> Rotation {
    rot.iter()
        .enumerate()
        .map(|(v, r)| if keep(v) { r.iter().copied().filter(|&w| keep(w)).collect() } else { Vec::new() })
        .collect()
}

/// Outer walk of `G` read at the hub angle of the first boundary vertex
/// that has a neighbor in `G`.
fn outer_walk(rot_plus: &Rotation, hub: VertexId, boundary: &[VertexId]) -> Vec<VertexId> {
    let rot = restrict(rot_plus, &|v| v != hub);
    for &b in boundary {
        let r = &rot_plus[b];
        let Some(i) = r.iter().position(|&x| x == hub) else { continue };
        if r.len() < 2 {
            continue;
        }
        let y = r[(i + 1) % r.len()];
        let mut face = Vec::new();
        let (mut a, mut c) = (b, y);
        let mut seen = HashSet::new();
        while seen.insert((a, c)) {
            face.push(a);
            let d = successor(&rot[c], a).expect("restricted rotation");
            a = c;
            c = d;
        }
        return face;
    }
    Vec::new()
}

/// Embedding of `g` drawn in a disc with `boundary` on the disc boundary in
/// the given cyclic order and each listed triangle bounding a face.
/// Triangles must be cliques of `g`.
pub fn embed_with_constraints(g: &Graph, boundary: &[VertexId], triangles: &[[VertexId; 3]]) -> Option<Embedding> {
    let mut aux = g.clone();
    let mut shielded: HashSet<VertexId> = HashSet::new();
    let mut mids: HashMap<(VertexId, VertexId), VertexId> = HashMap::new();
    let mut mid_of: HashMap<VertexId, (VertexId, VertexId)> = HashMap::new();
    for t in triangles {
        let s = aux.add_vertex();
        shielded.insert(s);
        for (i, j) in [(0, 1), (1, 2), (2, 0)] {
            let (a, b) = (t[i].min(t[j]), t[i].max(t[j]));
            if !g.has_edge(a, b) {
                return None;
            }
            let m = *mids.entry((a, b)).or_insert_with(|| {
                let m = aux.add_vertex();
                aux.remove_edge(a, b);
                aux.add_edge(a, m).expect("fresh vertex");
                aux.add_edge(m, b).expect("fresh vertex");
                mid_of.insert(m, (a, b));
                m
            });
            aux.add_edge(s, m).expect("fresh vertex");
            aux.add_edge(s, t[i]).expect("fresh vertex");
        }
    }
    let hub = aux.add_vertex();
    for &b in boundary {
        aux.add_edge(hub, b).ok()?;
    }
    if boundary.len() >= 3 {
        for i in 0..boundary.len() {
            let r = aux.add_vertex();
            aux.add_edge(boundary[i], r).expect("fresh vertex");
            aux.add_edge(r, boundary[(i + 1) % boundary.len()]).expect("fresh vertex");
        }
    }
    let rot_aux = embed_avoiding(&aux, &shielded)?;
    let n = g.id_bound();
    let mut rotation: Rotation = vec![Vec::new(); n + 1];
    for v in g.vertices() {
        rotation[v] = rot_aux[v]
            .iter()
            .filter_map(|&w| {
                if w < n {
                    Some(w)
                } else if w == hub {
                    Some(n)
                } else {
                    mid_of.get(&w).map(|&(a, b)| if a == v { b } else { a })
                }
            })
            .collect();
    }
    rotation[n] = rot_aux[hub].clone();
    let mut plus = g.clone();
    let h = plus.add_vertex();
    for &b in boundary {
        plus.add_edge(h, b).expect("fresh hub");
    }
    check_rotation(&plus, &rotation).ok()?;
    let outer_face = outer_walk(&rotation, n, boundary);
    Some(Embedding { rotation, hub: Some(n), outer_face })
}

/// Embedding with `order` on the outer face in that cyclic order.
pub fn planar_with_boundary(g: &Graph, order: &[VertexId]) -> Option<Embedding> {
    embed_with_constraints(g, order, &[])
}

impl Embedding {
    /// Rotation of `G` alone (hub removed).
    pub fn graph_rotation(&self) -> Rotation {
        let hub = self.hub;
        let mut rot = restrict(&self.rotation, &|v| Some(v) != hub);
        if let Some(h) = hub {
            rot.truncate(h);
        }
        rot
    }

    /// Faces of `G⁺` that avoid the hub; these are faces of `G` other than
    /// the outer face.
    pub fn inner_faces(&self) -> Vec<Vec<VertexId>> {
        trace_faces(&self.rotation).into_iter().filter(|f| self.hub.is_none_or(|h| !f.contains(&h))).collect()
    }

    /// Vertices on the outer face of `G`.
    pub fn outer_vertices(&self) -> VertexSet {
        match self.hub {
            Some(h) => trace_faces(&self.rotation).into_iter().filter(|f| f.contains(&h)).flatten().filter(|&v| v != h).collect(),
            None => self.outer_face.iter().copied().collect(),
        }
    }

    /// Whether `t` bounds a face of `G` other than the outer face.
    pub fn is_facial_triangle(&self, t: &[VertexId; 3]) -> bool {
        let want: VertexSet = t.iter().copied().collect();
        self.inner_faces().iter().any(|f| f.len() == 3 && f.iter().copied().collect::<VertexSet>() == want)
    }

    /// Whether the hub sees `order` in its cyclic order (either direction).
    pub fn boundary_matches(&self, order: &[VertexId]) -> bool {
        let Some(h) = self.hub else { return order.is_empty() };
        let r = &self.rotation[h];
        r.len() == order.len() && crate::graph::visits_in_cyclic_order(r, order)
    }
}

/// All faces of an embedded 2-connected graph as cycles.
pub fn facial_cycles(g: &Graph, rot: &Rotation) -> Result<Vec<Cycle>, EmbeddingError> {
    check_rotation(g, rot)?;
    trace_faces(rot)
        .into_iter()
        .map(|f| Cycle::new(f.clone()).map_err(|_| EmbeddingError::NonSimpleFace(f)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{circulant, octahedron, random_planar_3conn, rng_for, wheel};

    #[test]
    fn face_counts() {
        let k4 = Graph::complete(4);
        let faces = facial_cycles(&k4, &embed(&k4).unwrap()).unwrap();
        assert_eq!(faces.len(), 4);
        assert!(faces.iter().all(|f| f.len() == 3));

        let c6 = Graph::cycle(6);
        let faces = facial_cycles(&c6, &embed(&c6).unwrap()).unwrap();
        assert_eq!(faces.iter().map(Cycle::len).collect::<Vec<_>>(), vec![6, 6]);

        let oct = octahedron();
        let faces = facial_cycles(&oct, &embed(&oct).unwrap()).unwrap();
        assert_eq!(faces.len(), 8);
        assert_eq!(6 - 12 + faces.len() as i64, 2);
    }

    #[test]
    fn nonplanar_graphs_are_rejected() {
        assert!(!is_planar(&Graph::complete(5)));
        assert!(!is_planar(&crate::generate::complete_bipartite(3, 3)));
        assert!(!is_planar(&crate::generate::petersen()));
        assert!(!is_planar(&circulant(8, &[1, 3])));
        assert!(is_planar(&wheel(7)));
    }

    #[test]
    fn non_biconnected_faces() {
        let p = Graph::path(3);
        assert!(matches!(facial_cycles(&p, &embed(&p).unwrap()), Err(EmbeddingError::NonSimpleFace(_))));
        let bowtie = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]).unwrap();
        check_rotation(&bowtie, &embed(&bowtie).unwrap()).unwrap();
    }

    #[test]
    fn boundary_examples() {
        let c4 = Graph::cycle(4);
        let e = planar_with_boundary(&c4, &[0, 1, 2, 3]).unwrap();
        assert!(crate::graph::visits_in_cyclic_order(&e.outer_face, &[0, 1, 2, 3]));
        assert!(e.boundary_matches(&[0, 1, 2, 3]));
        assert!(planar_with_boundary(&c4, &[0, 2, 1, 3]).is_none());
        assert!(planar_with_boundary(&Graph::complete(4), &[0, 1, 2, 3]).is_none());
        assert!(planar_with_boundary(&Graph::complete(4), &[0, 1, 2]).is_some());
    }

    #[test]
    fn facial_triangle_gadget() {
        // Octahedron: every triangle through 0 and 1 is facial in some drawing.
        let oct = octahedron();
        let e = embed_with_constraints(&oct, &[], &[[0, 1, 2]]).unwrap();
        assert!(e.is_facial_triangle(&[0, 1, 2]));
        // Two vertices of K5 minus an edge see a separating triangle.
        let mut g = Graph::complete(5);
        g.remove_edge(3, 4);
        let e = embed_with_constraints(&g, &[], &[[0, 1, 2]]);
        assert!(e.is_none());
    }

    #[test]
    fn random_planar_graphs_embed() {
        let mut rng = rng_for(3);
        for _ in 0..50 {
            let g = random_planar_3conn(14, 8, &mut rng);
            let rot = embed(&g).unwrap();
            let faces = facial_cycles(&g, &rot).unwrap();
            assert_eq!(g.order() as i64 - g.size() as i64 + faces.len() as i64, 2);
        }
    }

    proptest::proptest! {
        #[test]
        fn planarity_is_monotone(seed in 0u64..400, n in 5usize..9) {
            let mut rng = rng_for(seed);
            let g = crate::generate::gnp(n, 0.55, &mut rng);
            let planar = is_planar(&g);
            for (u, v) in g.edges() {
                let mut h = g.clone();
                h.remove_edge(u, v);
                if planar {
                    proptest::prop_assert!(is_planar(&h));
                }
            }
            for u in 0..n {
                for v in u + 1..n {
                    if !g.has_edge(u, v) && !planar {
                        let mut h = g.clone();
                        h.add_edge(u, v).unwrap();
                        proptest::prop_assert!(!is_planar(&h));
                    }
                }
            }
        }
    }
}
