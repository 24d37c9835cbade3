//! Serializable certificates and the debug bundle emitted on construction gaps.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{visits_in_cyclic_order, Cycle, Graph, Path, VertexId, VertexSet};
use crate::io::emit_graph6;
use crate::linkage::Linkage;
use crate::three_planar::{verify_witness, ThreePlanarWitness};

pub const CERTIFICATE_SCHEMA: &str = "kordered/certificate/v1";
pub const GAP_SCHEMA: &str = "kordered/gap-bundle/v1";

/// A cycle through four anchors in cyclic order, with the four arcs between
/// consecutive anchors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrderedCycleCertificate {
    pub cycle: Cycle,
    pub anchors: [VertexId; 4],
    pub arcs: Vec<Path>,
}

impl OrderedCycleCertificate {
    /// Splits `cycle` into its anchor-to-anchor arcs; `None` when the anchors
    /// are missing or out of order.
    pub fn from_cycle(cycle: Cycle, anchors: [VertexId; 4]) -> Option<Self> {
        let arcs = order_arcs(cycle.stored(), &anchors)?;
        Some(OrderedCycleCertificate { cycle, anchors, arcs })
    }
}

fn order_arcs(seq: &[VertexId], anchors: &[VertexId; 4]) -> Option<Vec<Path>> {
    if !visits_in_cyclic_order(seq, anchors) {
        return None;
    }
    let n = seq.len();
    let start = seq.iter().position(|&x| x == anchors[0])?;
    for step in [1, n - 1] {
        let walk: Vec<VertexId> = (0..=n).map(|k| seq[(start + k * step) % n]).collect();
        let pos: Vec<usize> = anchors.iter().map(|a| walk[..n].iter().position(|x| x == a)).collect::<Option<_>>()?;
        if pos.windows(2).all(|w| w[0] < w[1]) {
            let mut cuts = pos.clone();
            cuts.push(n);
            return Some(cuts.windows(2).map(|w| Path::new(walk[w[0]..=w[1]].to_vec())).collect());
        }
    }
    None
}

/// True iff `cert.cycle` is a cycle of `g`, the anchors are distinct and
/// visited in cyclic order, and the arcs are exactly the anchor-to-anchor
/// pieces of the cycle.
pub fn verify_ordered_cycle(g: &Graph, cert: &OrderedCycleCertificate) -> bool {
    let distinct: VertexSet = cert.anchors.iter().copied().collect();
    if distinct.len() != 4 || cert.cycle.validate(g).is_err() {
        return false;
    }
    match order_arcs(cert.cycle.stored(), &cert.anchors) {
        Some(arcs) => arcs == cert.arcs,
        None => false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Payload {
    OrderedCycle(OrderedCycleCertificate),
    Linkage { terminals: [VertexId; 4], linkage: Linkage },
    ThreePlanar { witness: ThreePlanarWitness },
}

/// A self-contained certificate file: the host graph plus the object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub schema: String,
    pub graph6: String,
    #[serde(flatten)]
    pub payload: Payload,
}

impl Certificate {
    /// Expects `g` with vertex ids `0..order()`.
    pub fn new(g: &Graph, payload: Payload) -> Self {
        Certificate { schema: CERTIFICATE_SCHEMA.into(), graph6: emit_graph6(g), payload }
    }
}

pub fn verify_certificate(g: &Graph, cert: &Certificate) -> bool {
    if cert.schema != CERTIFICATE_SCHEMA {
        return false;
    }
    match &cert.payload {
        Payload::OrderedCycle(c) => verify_ordered_cycle(g, c),
        Payload::Linkage { terminals: [s1, t1, s2, t2], linkage } => linkage.validate(g, *s1, *t1, *s2, *t2).is_ok(),
        Payload::ThreePlanar { witness } => verify_witness(g, witness),
    }
}

/// Raised when a step of the construction applies but neither produces a
/// cycle nor an improved structure. Carries everything needed to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Error)]
#[error("gap at {stage}: {detail}")]
pub struct GapError {
    pub schema: String,
    pub stage: String,
    pub detail: String,
    /// The host graph after compaction.
    pub graph6: String,
    /// Original id of each compacted vertex.
    pub vertex_ids: Vec<VertexId>,
    pub anchors: Vec<VertexId>,
    pub skeleton: Option<serde_json::Value>,
    pub trace: Vec<String>,
}

impl GapError {
    pub fn new(
        g: &Graph,
        anchors: &[VertexId],
        stage: &str,
        detail: impl Into<String>,
        skeleton: Option<serde_json::Value>,
        trace: &[String],
    ) -> Self {
        let (compact, ids) = g.compacted();
        GapError {
            schema: GAP_SCHEMA.into(),
            stage: stage.into(),
            detail: detail.into(),
            graph6: emit_graph6(&compact),
            vertex_ids: ids,
            anchors: anchors.to_vec(),
            skeleton,
            trace: trace.to_vec(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn square_certificates() {
        let g = Graph::cycle(4);
        let c = Cycle::new(vec![0, 1, 2, 3]).unwrap();
        let cert = OrderedCycleCertificate::from_cycle(c.clone(), [0, 1, 2, 3]).unwrap();
        assert!(verify_ordered_cycle(&g, &cert));
        assert_eq!(cert.arcs.len(), 4);
        assert!(OrderedCycleCertificate::from_cycle(c.clone(), [0, 2, 1, 3]).is_none());
        let forged = OrderedCycleCertificate { cycle: c, anchors: [0, 2, 1, 3], arcs: cert.arcs.clone() };
        assert!(!verify_ordered_cycle(&g, &forged));
    }

    #[test]
    fn reversed_anchor_order_is_accepted() {
        let g = Graph::complete(8);
        let c = Cycle::new((0..8).collect()).unwrap();
        let cert = OrderedCycleCertificate::from_cycle(c, [6, 4, 2, 0]).unwrap();
        assert!(verify_ordered_cycle(&g, &cert));
        assert_eq!(cert.arcs[0].vertices(), &[6, 5, 4]);
    }

    #[test]
    fn certificate_json_round_trip() {
        let g = Graph::complete(5);
        let cert = OrderedCycleCertificate::from_cycle(Cycle::new(vec![0, 1, 2, 3, 4]).unwrap(), [0, 1, 2, 3]).unwrap();
        let file = Certificate::new(&g, Payload::OrderedCycle(cert));
        let text = serde_json::to_string(&file).unwrap();
        let back: Certificate = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert!(verify_certificate(&g, &back));
    }
}
