//! Deterministic graph generators used by the CLI, the examples, and tests.

use crate::graph::{MultiGraph, SimpleGraph, Vertex};
use crate::rng::SplitMix64;

/// Complete graph `K_n` as a multigraph, edges in lexicographic order.
pub fn complete(n: usize) -> MultiGraph {
    let mut g = MultiGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            g.add_edge(u, v);
        }
    }
    g
}

/// Complete graph `K_n` as a simple graph.
pub fn complete_simple(n: usize) -> SimpleGraph {
    SimpleGraph::from_multigraph_unchecked(complete(n))
}

/// Cycle `C_n` (`n >= 3`).
pub fn cycle(n: usize) -> SimpleGraph {
    assert!(n >= 3);
    let pairs: Vec<(Vertex, Vertex)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    SimpleGraph::from_pairs(n, &pairs).unwrap()
}

/// Path on `n` vertices.
pub fn path(n: usize) -> SimpleGraph {
    let pairs: Vec<(Vertex, Vertex)> = (1..n).map(|i| (i - 1, i)).collect();
    SimpleGraph::from_pairs(n, &pairs).unwrap()
}

/// Star `K_{1,n}` with center 0.
pub fn star(leaves: usize) -> SimpleGraph {
    let pairs: Vec<(Vertex, Vertex)> = (1..=leaves).map(|i| (0, i)).collect();
    SimpleGraph::from_pairs(leaves + 1, &pairs).unwrap()
}

/// Complete bipartite graph with sides `0..a` and `a..a+b`.
pub fn complete_bipartite(a: usize, b: usize) -> SimpleGraph {
    let mut g = MultiGraph::new(a + b);
    for u in 0..a {
        for v in a..a + b {
            g.add_edge(u, v);
        }
    }
    SimpleGraph::from_multigraph_unchecked(g)
}

/// The Petersen graph.
pub fn petersen() -> SimpleGraph {
    let mut pairs = Vec::new();
    for i in 0..5 {
        pairs.push((i, (i + 1) % 5)); // outer C5
        pairs.push((i, i + 5)); // spokes
        pairs.push((i + 5, (i + 2) % 5 + 5)); // inner pentagram
    }
    SimpleGraph::from_pairs(10, &pairs).unwrap()
}

/// Erdos-Renyi `G(n, p)` with `p` given as a fraction `p_num / p_den`.
pub fn gnp(n: usize, p_num: u64, p_den: u64, seed: u64) -> SimpleGraph {
    let mut rng = SplitMix64::new(seed);
    let mut g = MultiGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.next_ratio_bool(p_num, p_den) {
                g.add_edge(u, v);
            }
        }
    }
    SimpleGraph::from_multigraph_unchecked(g)
}

/// `G(n, p)` with a floating-point probability, quantized to 1/2^32 steps so
/// the result depends only on the quantized value.
pub fn gnp_f64(n: usize, p: f64, seed: u64) -> SimpleGraph {
    assert!((0.0..=1.0).contains(&p));
    let den = 1u64 << 32;
    let num = (p * den as f64).round() as u64;
    gnp(n, num.min(den), den, seed)
}

/// Uniform random simple graph with exactly `m` edges.
pub fn gnm(n: usize, m: usize, seed: u64) -> SimpleGraph {
    let max = n * (n - 1) / 2;
    assert!(m <= max, "too many edges requested");
    let mut all: Vec<(Vertex, Vertex)> = Vec::with_capacity(max);
    for u in 0..n {
        for v in u + 1..n {
            all.push((u, v));
        }
    }
    let mut rng = SplitMix64::new(seed);
    rng.shuffle(&mut all);
    SimpleGraph::from_multigraph_unchecked(MultiGraph::from_pairs(n, &all[..m]))
}

/// Random graph with minimum degree at least `d`: samples `G(n, p)` at a
/// slightly inflated `p`, re-drawing with the next derived seed until the
/// degree condition holds. Deterministic for a given `(n, d, seed)`.
pub fn random_min_degree(n: usize, d: usize, seed: u64) -> SimpleGraph {
    assert!(d < n, "minimum degree must be below n");
    let den = 1u64 << 32;
    for attempt in 0..64u64 {
        // Inflate the edge probability a little more on every retry.
        let base = d as f64 / (n - 1) as f64;
        let p = (base * (1.12 + 0.05 * attempt as f64)).min(1.0);
        let num = (p * den as f64).round() as u64;
        let g = gnp(n, num.min(den), den, seed.wrapping_add(attempt.wrapping_mul(0x9E37)));
        if g.min_degree() >= d {
            return g;
        }
    }
    panic!("random_min_degree: failed to hit min degree {d} on n={n} after 64 attempts");
}

/// Complement of `k` disjoint 5-cycles (`n = 5k`, regular of degree `n - 3`).
pub fn complement_of_five_cycles(k: usize) -> SimpleGraph {
    let n = 5 * k;
    let mut g = MultiGraph::new(n);
    let in_cycle = |u: usize, v: usize| {
        u / 5 == v / 5 && (u % 5 + 1) % 5 == v % 5 || u / 5 == v / 5 && (v % 5 + 1) % 5 == u % 5
    };
    for u in 0..n {
        for v in u + 1..n {
            if !in_cycle(u, v) {
                g.add_edge(u, v);
            }
        }
    }
    SimpleGraph::from_multigraph_unchecked(g)
}

/// Complement of a perfect matching on `n` vertices (`n` even): vertex `2i`
/// is nonadjacent to `2i+1` only.
pub fn complement_of_perfect_matching(n: usize) -> SimpleGraph {
    assert!(n % 2 == 0);
    let mut g = MultiGraph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if u / 2 != v / 2 {
                g.add_edge(u, v);
            }
        }
    }
    SimpleGraph::from_multigraph_unchecked(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_shapes() {
        assert_eq!(complete(5).m(), 10);
        assert_eq!(cycle(6).m(), 6);
        assert_eq!(path(4).m(), 3);
        assert_eq!(star(5).m(), 5);
        assert_eq!(complete_bipartite(2, 3).m(), 6);
        let p = petersen();
        assert_eq!(p.m(), 15);
        assert!(p.vertices().all(|v| p.degree(v) == 3));
    }

    #[test]
    fn gnp_deterministic() {
        let a = gnp_f64(50, 0.3, 7);
        let b = gnp_f64(50, 0.3, 7);
        assert_eq!(a.digest(), b.digest());
        let c = gnp_f64(50, 0.3, 8);
        assert_ne!(a.digest(), c.digest());
    }

    #[test]
    fn gnm_exact_count() {
        let g = gnm(11, 28, 3);
        assert_eq!(g.n(), 11);
        assert_eq!(g.m(), 28);
    }

    #[test]
    fn min_degree_generator() {
        let g = random_min_degree(60, 12, 5);
        assert!(g.min_degree() >= 12);
    }

    #[test]
    fn complement_families() {
        let g = complement_of_five_cycles(2);
        assert_eq!(g.n(), 10);
        assert!(g.vertices().all(|v| g.degree(v) == 7));
        let h = complement_of_perfect_matching(8);
        assert!(h.vertices().all(|v| h.degree(v) == 6));
    }
}
