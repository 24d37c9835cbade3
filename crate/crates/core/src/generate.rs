//! Seeded random graph models with a connectivity floor.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::connectivity::is_k_connected;
use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", rename_all = "kebab-case")]
pub enum Model {
    Gnp { n: usize, p: f64 },
    Circulant { n: usize, offsets: Vec<usize> },
    CompleteBipartite { a: usize, b: usize },
    Planar3Conn { n: usize, deletions: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    #[serde(flatten)]
    pub model: Model,
    pub floor: usize,
    pub seed: u64,
    #[serde(default = "default_attempts")]
    pub max_attempts: usize,
}

fn default_attempts() -> usize {
    200
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("connectivity floor {floor} not reached in {attempts} attempts")]
    FloorUnreachable { floor: usize, attempts: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
}

pub fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gnp<R: Rng>(n: usize, p: f64, rng: &mut R) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                g.add_edge(u, v).expect("valid ids");
            }
        }
    }
    g
}

pub fn circulant(n: usize, offsets: &[usize]) -> Graph {
    let mut g = Graph::new(n);
    for u in 0..n {
        for &d in offsets {
            let v = (u + d) % n;
            if v != u {
                g.add_edge(u, v).expect("valid ids");
            }
        }
    }
    g
}

pub fn complete_bipartite(a: usize, b: usize) -> Graph {
    let mut g = Graph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v).expect("valid ids");
        }
    }
    g
}

pub fn petersen() -> Graph {
    let mut g = Graph::new(10);
    for i in 0..5 {
        for (u, v) in [(i, (i + 1) % 5), (i, i + 5), (i + 5, (i + 2) % 5 + 5)] {
            g.add_edge(u, v).expect("valid ids");
        }
    }
    g
}

/// Wheel with `k` rim vertices `0..k` and hub `k`.
pub fn wheel(k: usize) -> Graph {
    let mut g = Graph::cycle(k);
    let hub = g.add_vertex();
    for v in 0..k {
        g.add_edge(v, hub).expect("valid ids");
    }
    g
}

pub fn octahedron() -> Graph {
    let mut g = Graph::complete(6);
    for i in 0..3 {
        g.remove_edge(i, i + 3);
    }
    g
}

/// Random planar triangulation grown by splitting inner faces, followed by
/// up to `deletions` edge removals that keep the graph 3-connected.
pub fn random_planar_3conn<R: Rng>(n: usize, deletions: usize, rng: &mut R) -> Graph {
    let n = n.max(4);
    let mut g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]).expect("valid ids");
    let mut faces: Vec<[usize; 3]> = vec![[0, 1, 2]];
    while g.order() < n {
        let fi = rng.gen_range(0..faces.len());
        let [a, b, c] = faces.swap_remove(fi);
        let x = g.add_vertex();
        for v in [a, b, c] {
            g.add_edge(x, v).expect("valid ids");
        }
        faces.extend([[a, b, x], [b, c, x], [c, a, x]]);
    }
    let mut edges: Vec<(usize, usize)> = g.edges().collect();
    edges.shuffle(rng);
    let mut removed = 0;
    for (u, v) in edges {
        if removed >= deletions {
            break;
        }
        g.remove_edge(u, v);
        if is_k_connected(&g, 3) {
            removed += 1;
        } else {
            g.add_edge(u, v).expect("valid ids");
        }
    }
    g
}

/// Draws from the configured model until the connectivity floor holds.
pub fn generate(config: &GeneratorConfig) -> Result<Graph, GenerateError> {
    let mut rng = rng_for(config.seed);
    if let Model::Gnp { p, .. } = config.model {
        if !(0.0..=1.0).contains(&p) {
            return Err(GenerateError::InvalidParameters(format!("p = {p}")));
        }
    }
    for _ in 0..config.max_attempts.max(1) {
        let g = match &config.model {
            Model::Gnp { n, p } => gnp(*n, *p, &mut rng),
            Model::Circulant { n, offsets } => circulant(*n, offsets),
            Model::CompleteBipartite { a, b } => complete_bipartite(*a, *b),
            Model::Planar3Conn { n, deletions } => random_planar_3conn(*n, *deletions, &mut rng),
        };
        if config.floor == 0 || is_k_connected(&g, config.floor) {
            return Ok(g);
        }
        if !matches!(config.model, Model::Gnp { .. } | Model::Planar3Conn { .. }) {
            break;
        }
    }
    Err(GenerateError::FloorUnreachable { floor: config.floor, attempts: config.max_attempts })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::connectivity::vertex_connectivity;

    #[test]
    fn circulant_is_eight_regular() {
        let g = circulant(16, &[1, 2, 3, 4]);
        assert!(g.vertices().all(|v| g.degree(v) == 8));
        assert!(is_k_connected(&g, 7));
    }

    #[test]
    fn bipartite_connectivity() {
        assert_eq!(vertex_connectivity(&complete_bipartite(7, 7)).unwrap(), 7);
    }

    #[test]
    fn seeded_gnp_is_reproducible() {
        let cfg = GeneratorConfig { model: Model::Gnp { n: 12, p: 0.9 }, floor: 7, seed: 1, max_attempts: 500 };
        let a = generate(&cfg).unwrap();
        let b = generate(&cfg).unwrap();
        assert_eq!(a, b);
        assert!(vertex_connectivity(&a).unwrap() >= 7);
    }

    #[test]
    fn unreachable_floor_errors() {
        let cfg = GeneratorConfig { model: Model::Circulant { n: 8, offsets: vec![1] }, floor: 3, seed: 0, max_attempts: 3 };
        assert!(matches!(generate(&cfg), Err(GenerateError::FloorUnreachable { .. })));
    }

    #[test]
    fn planar_generator_keeps_three_connectivity() {
        let mut rng = rng_for(7);
        for _ in 0..20 {
            let g = random_planar_3conn(15, 10, &mut rng);
            assert!(is_k_connected(&g, 3));
            assert!(g.size() <= 3 * g.order() - 6);
        }
    }

    #[test]
    fn petersen_shape() {
        let p = petersen();
        assert_eq!((p.order(), p.size()), (10, 15));
        assert!(p.vertices().all(|v| p.degree(v) == 3));
    }
}
