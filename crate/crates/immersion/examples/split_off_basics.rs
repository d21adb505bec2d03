//! Splitting-off primitives and certificate lifting.
//!
//! Splitting off a pair of edges `uv`, `vw` replaces them by `uw`; splitting
//! a vertex splits off pairs until the vertex can be removed. Every split is
//! recorded in a trace, and a certificate found in the smaller graph lifts
//! back through the trace to the original.
//!
//! ```bash
//! cargo run --example split_off_basics
//! ```

use immersion::cert::{lift_certificate, ImmersionCertificate};
use immersion::graph::{MultiGraph, SplitTrace};

fn main() {
    // A path 0 - 1 - 2: split the pair at vertex 1.
    let path = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
    let (after, replacement) = path.split_off(0, 1).unwrap();
    println!(
        "path 0-1-2, split off (01, 12): new edge {:?}, vertex 1 now has degree {}",
        after.endpoints(replacement).unwrap(),
        after.degree(1)
    );

    // A triangle: splitting off two sides leaves a double edge.
    let triangle = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]);
    let (after, _) = triangle.split_off(0, 1).unwrap();
    println!(
        "triangle, split off two sides: {} parallel edges between 0 and 2",
        after.edges_between(0, 2).len()
    );

    // Split a whole vertex and lift a K_2 certificate back through it.
    let host = MultiGraph::from_pairs(5, &[(0, 1), (1, 2), (1, 3), (1, 4), (0, 4)]);
    let mut work = host.clone();
    let mut trace = SplitTrace::new();
    let incident = work.incident(1).to_vec();
    let record = work
        .split_vertex_in_place(1, &[(incident[0], incident[1]), (incident[2], incident[3])], &[])
        .unwrap();
    trace.push(record);
    println!(
        "after splitting vertex 1: {} vertices, {} edges",
        work.n(),
        work.m()
    );

    let cert = ImmersionCertificate::from_clique_subgraph(&work, &[0, 2]).unwrap();
    let lifted = lift_certificate(&cert, &trace, &host).unwrap();
    println!(
        "K_2 certificate on the split graph lifts to path {:?} in the original",
        lifted.paths[0].edges
    );
    let report = immersion::verify_immersion(&host, &lifted).unwrap();
    println!("lifted certificate valid: {}", report.valid);
}
