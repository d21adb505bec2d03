//! Extracting an Eulerian subgraph of half the minimum degree.
//!
//! Any simple graph with minimum degree `4k` contains a spanning-even-degree
//! subgraph of minimum degree at least `2k`, obtained from a packing of `2k`
//! edge-disjoint spanning trees: the symmetric difference of all fundamental
//! cycles with respect to the first tree is even everywhere and keeps every
//! other tree.
//!
//! ```bash
//! cargo run --release --example eulerian_subgraph [n] [delta] [k] [seed]
//! ```

use immersion::generators;
use immersion::sparse::eulerian_min_degree_subgraph;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(120);
    let delta: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(24);
    let k: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(delta / 4);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(0);

    let g = generators::random_min_degree(n, delta, seed);
    println!(
        "input: n = {}, m = {}, min degree = {}",
        g.n(),
        g.m(),
        g.min_degree()
    );
    let start = Instant::now();
    let (h, witness) = eulerian_min_degree_subgraph(&g, k).unwrap();
    let stats = h.stats();
    println!(
        "Eulerian subgraph in {:.2?}: m = {}, min degree = {} (target {}), all even = {}",
        start.elapsed(),
        h.m(),
        stats.min_degree,
        2 * k,
        stats.is_all_degrees_even
    );
    println!(
        "packed {} edge-disjoint spanning trees over {} vertices",
        witness.trees.len(),
        witness.vertices.len()
    );
}
