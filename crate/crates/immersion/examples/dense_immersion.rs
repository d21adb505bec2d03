//! Strong 1-immersions in dense graphs.
//!
//! A graph with `n` vertices and `2cn^2` edges contains a strong 1-immersion
//! of a clique on at least `c^2 n` vertices. The finder recomputes `c` from
//! the input, takes a max-cut bipartition, selects the branch set by
//! dependent random choice, and routes pairs through middle vertices in
//! codegree order.
//!
//! ```bash
//! cargo run --release --example dense_immersion [n] [p%] [seed]
//! ```

use immersion::dense::{find_dense_immersion, guaranteed_order, DenseOptions};
use immersion::generators;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let n: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(1000);
    let p_percent: u64 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(32);
    let seed: u64 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(1);

    let g = generators::gnp(n, p_percent, 100, seed);
    let s = guaranteed_order(g.n(), g.m());
    println!(
        "G({n}, {}%) with seed {seed}: m = {}, guaranteed clique order {s}",
        p_percent,
        g.m()
    );

    let start = Instant::now();
    let cert = find_dense_immersion(&g, seed, &DenseOptions::default()).unwrap();
    let elapsed = start.elapsed();
    println!(
        "found strong 1-immersion of K_{} in {elapsed:.2?} (branch {:?})",
        cert.t, cert.branch
    );
    assert!(cert.t >= s);

    let report = immersion::verify_immersion(&g, &cert).unwrap();
    println!(
        "verification: valid={}, strong={}, k={:?}",
        report.valid, report.strong, report.k_uniform
    );
}
