//! Splitting a graph down to a clique: `m` edges on `n` vertices force a
//! strong immersion of `K_q` with `q = floor(m / (n ln(n^2/m)) + 1/3)`.
//!
//! The splitter repeatedly splits a vertex of at-most-average degree, which
//! costs almost no average degree while shrinking the graph; density rises
//! until the clique appears, and the clique lifts to an immersion of the
//! input. `K_{20,20}` is a nice showcase: it is triangle-free, so every one
//! of the seven branch vertices is manufactured by splitting.
//!
//! ```bash
//! cargo run --example density_splitting
//! ```

use immersion::generators;
use immersion::sparse::{clique_density_bound, split_to_clique};

fn main() {
    let g = generators::complete_bipartite(20, 20);
    let bound = clique_density_bound(g.n(), g.m()).unwrap();
    println!(
        "K_{{20,20}}: n = {}, m = {}, certified clique bound q = {bound}",
        g.n(),
        g.m()
    );
    let cert = split_to_clique(&g, bound).unwrap();
    println!(
        "strong K_{} immersion with branch vertices {:?}",
        cert.t, cert.branch
    );
    let lengths: Vec<usize> = cert.paths.iter().map(|p| p.edges.len()).collect();
    println!("path lengths: {lengths:?}");
    let report = immersion::verify_immersion(&g, &cert).unwrap();
    println!("verification: valid = {}, strong = {}", report.valid, report.strong);

    // The certified arithmetic also pins exact values; a classic pair:
    println!(
        "bound for n = 11, m = 28: {}",
        clique_density_bound(11, 28).unwrap()
    );
}
