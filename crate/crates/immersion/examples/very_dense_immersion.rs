//! Very dense graphs: minimum degree `n - n^(1/5)` forces an immersion of
//! `K_(delta - 1)`.
//!
//! The construction picks a small set `S` of vertices pairwise far apart in
//! the complement, colors the complement of the remaining vertices, and
//! routes every non-edge through the member of `S` named by its color.
//!
//! ```bash
//! cargo run --release --example very_dense_immersion [cycles]
//! ```
//!
//! With no argument this runs the 32-vertex complement-of-a-perfect-matching
//! instance (a `K_29`); pass a count of 5-cycles for the large family, e.g.
//! `625` for the 3125-vertex `K_3121` run.

use immersion::constructions::very_dense_immersion;
use immersion::generators;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let g = match args.get(1).and_then(|s| s.parse::<usize>().ok()) {
        Some(cycles) => {
            println!("complement of {cycles} disjoint 5-cycles:");
            generators::complement_of_five_cycles(cycles)
        }
        None => {
            println!("complement of a perfect matching on 32 vertices:");
            generators::complement_of_perfect_matching(32)
        }
    };
    println!(
        "  n = {}, m = {}, min degree = {}",
        g.n(),
        g.m(),
        g.min_degree()
    );
    let start = Instant::now();
    let cert = very_dense_immersion(&g).unwrap();
    println!(
        "  immersion of K_{} built in {:.2?} (strong = {})",
        cert.t,
        start.elapsed(),
        cert.strong
    );
    let report = immersion::verify_immersion(&g, &cert).unwrap();
    println!("  verification: valid = {}", report.valid);
}
