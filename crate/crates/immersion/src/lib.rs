//! Clique immersions in graphs, with machine-checkable certificates.
//!
//! An immersion of `K_t` in a host graph maps pattern vertices to distinct
//! host vertices and realizes every pattern edge by a host path, all paths
//! pairwise edge-disjoint; it is *strong* when no path passes through a
//! branch vertex, and a *1-immersion* when every path has exactly one
//! internal vertex. This crate provides:
//!
//! - finders for three regimes: minimum degree `200t` forces a strong
//!   `K_t` immersion ([`sparse`]), `2cn^2` edges force a strong 1-immersion
//!   of order `c^2 n` ([`dense`]), and minimum degree `n - n^(1/5)` forces
//!   an immersion of `K_(delta-1)` ([`constructions`]);
//! - explicit counterexample families with minimum degree `t - 1` and no
//!   `K_t` immersion, and clique minors in line graphs built from finite
//!   projective planes ([`constructions`]);
//! - a certificate layer ([`cert`]) that every finder feeds and an
//!   exhaustive oracle ([`oracle`]) for tiny instances, so every claim the
//!   crate makes is independently checkable.
//!
//! Start with the `examples/` directory: each example exercises one
//! capability end to end.

#![forbid(unsafe_code)]

pub mod cert;
pub mod coloring;
pub mod constructions;
pub mod dense;
pub mod oracle;
pub mod generators;
pub mod graph;
pub mod matching;
pub mod packing;
pub mod rng;
pub mod sparse;

pub use cert::{
    lift_certificate, normalize_certificate, verify_immersion, verify_line_minor,
    ImmersionCertificate, LineMinorCertificate,
};
pub use graph::{EdgeId, MultiGraph, SimpleGraph, SplitRecord, SplitTrace, Vertex};
