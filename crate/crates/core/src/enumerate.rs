//! Graphs on few vertices up to isomorphism, for exhaustive checks.

use std::collections::HashSet;

use crate::graph::Graph;

/// Largest order supported; codes use one bit per vertex pair.
pub const MAX_ORDER: usize = 8;

fn bit(i: usize, j: usize) -> u32 {
    let (a, b) = if i < j { (i, j) } else { (j, i) };
    1 << (b * (b - 1) / 2 + a)
}

fn code_of(adj: &[u8], n: usize, pos: &[usize]) -> u32 {
    let mut c = 0;
    for i in 0..n {
        for j in i + 1..n {
            if adj[i] >> j & 1 == 1 {
                c |= bit(pos[i], pos[j]);
            }
        }
    }
    c
}

/// Smallest code over relabelings that list vertices by nondecreasing
/// degree; degree classes are permuted internally.
fn canonical(adj: &[u8], n: usize) -> u32 {
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&v| adj[v].count_ones());
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for &v in &order {
        match classes.last_mut() {
            Some(c) if adj[c[0]].count_ones() == adj[v].count_ones() => c.push(v),
            _ => classes.push(vec![v]),
        }
    }
    let mut best = u32::MAX;
    let mut pos = vec![0; n];
    fn rec(classes: &mut [Vec<usize>], k: usize, base: usize, adj: &[u8], n: usize, pos: &mut [usize], best: &mut u32) {
        if k == classes.len() {
            *best = (*best).min(code_of(adj, n, pos));
            return;
        }
        let len = classes[k].len();
        permute(classes, k, 0, len, base, adj, n, pos, best);
    }
    #[allow(clippy::too_many_arguments)]
    fn permute(
        classes: &mut [Vec<usize>],
        k: usize,
        i: usize,
        len: usize,
        base: usize,
        adj: &[u8],
        n: usize,
        pos: &mut [usize],
        best: &mut u32,
    ) {
        if i == len {
            for (t, &v) in classes[k].iter().enumerate() {
                pos[v] = base + t;
            }
            rec(classes, k + 1, base + len, adj, n, pos, best);
            return;
        }
        for j in i..len {
            classes[k].swap(i, j);
            permute(classes, k, i + 1, len, base, adj, n, pos, best);
            classes[k].swap(i, j);
        }
    }
    rec(&mut classes, 0, 0, adj, n, &mut pos, &mut best);
    best
}

fn decode(code: u32, n: usize) -> Graph {
    let mut g = Graph::new(n);
    for j in 0..n {
        for i in 0..j {
            if code & bit(i, j) != 0 {
                g.add_edge(i, j).expect("valid ids");
            }
        }
    }
    g
}

fn adjacency(code: u32, n: usize) -> Vec<u8> {
    let mut adj = vec![0u8; n];
    for j in 0..n {
        for i in 0..j {
            if code & bit(i, j) != 0 {
                adj[i] |= 1 << j;
                adj[j] |= 1 << i;
            }
        }
    }
    adj
}

/// One graph per isomorphism class on `n` vertices, in increasing order of
/// canonical code. Panics above [`MAX_ORDER`].
pub fn nonisomorphic_graphs(n: usize) -> Vec<Graph> {
    assert!(n <= MAX_ORDER, "order {n} exceeds {MAX_ORDER}");
    let mut level: Vec<u32> = vec![0];
    for m in 1..n {
        let mut next: HashSet<u32> = HashSet::new();
        for &code in &level {
            let base = adjacency(code, m);
            for subset in 0u32..(1 << m) {
                let mut adj = base.clone();
                adj.push(subset as u8);
                for (i, a) in adj.iter_mut().enumerate().take(m) {
                    if subset >> i & 1 == 1 {
                        *a |= 1 << m;
                    }
                }
                next.insert(canonical(&adj, m + 1));
            }
        }
        level = next.into_iter().collect();
        level.sort_unstable();
    }
    if n == 0 {
        return vec![Graph::new(0)];
    }
    level.into_iter().map(|c| decode(c, n)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts() {
        let counts: Vec<usize> = (1..=7).map(|n| nonisomorphic_graphs(n).len()).collect();
        assert_eq!(counts, vec![1, 2, 4, 11, 34, 156, 1044]);
    }

    #[test]
    fn relabeled_graphs_share_a_code() {
        let adj = adjacency(bit(0, 1) | bit(1, 2), 4);
        let other = adjacency(bit(2, 3) | bit(3, 0), 4);
        assert_eq!(canonical(&adj, 4), canonical(&other, 4));
        let bent = adjacency(bit(0, 1) | bit(0, 2), 4);
        let tri = adjacency(bit(0, 1) | bit(1, 2) | bit(0, 2), 4);
        assert_eq!(canonical(&bent, 4), canonical(&adj, 4));
        assert_ne!(canonical(&bent, 4), canonical(&tri, 4));
    }
}
