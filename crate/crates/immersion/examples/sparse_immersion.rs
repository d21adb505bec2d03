//! The minimum-degree engine: degree `200t` forces a strong `K_t`
//! immersion.
//!
//! ```bash
//! cargo run --release --example sparse_immersion [t] [n] [delta] [seed]
//! ```
//!
//! Defaults find a strong K_2 immersion in a random 900-vertex graph of
//! minimum degree 400. The engine log shows each iteration's (a, b, s)
//! ledger and which rule fired.

use immersion::generators;
use immersion::sparse::main_engine;
use std::time::Instant;

fn main() {
    let args: Vec<String> = std::env::args().collect();
    let t: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let n: usize = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(900);
    let delta: usize = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(200 * t);
    let seed: u64 = args.get(4).and_then(|s| s.parse().ok()).unwrap_or(11);

    let g = generators::random_min_degree(n, delta, seed);
    println!(
        "random graph: n = {}, m = {}, min degree = {}",
        g.n(),
        g.m(),
        g.min_degree()
    );

    let start = Instant::now();
    let (cert, log) = main_engine(&g, t).unwrap();
    println!(
        "strong K_{} immersion in {:.2?} after {} iterations",
        cert.t,
        start.elapsed(),
        log.iterations.len()
    );
    for record in log.iterations.iter().rev().take(3).rev() {
        println!(
            "  iteration {}: n = {}, a = {}, b = {}, s = {}, rule = {:?}",
            record.index, record.n_live, record.a, record.b, record.s, record.action
        );
    }

    let report = immersion::verify_immersion(&g, &cert).unwrap();
    println!("verification: valid={}, strong={}", report.valid, report.strong);
}
