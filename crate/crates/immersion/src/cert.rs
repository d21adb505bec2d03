//! Immersion and line-graph-minor certificates: the data model, the
//! verifier, path-system normalization, and lifting through split traces.
//!
//! A certificate never asserts anything the verifier cannot recheck from the
//! host graph alone. Paths are stored as edge-id sequences, not vertex
//! sequences, because multigraph hosts make vertex sequences ambiguous.

use crate::graph::{EdgeId, MultiGraph, SplitTrace, Vertex};
use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CertError {
    #[error("certificate host digest does not match the supplied graph")]
    DigestMismatch,
    #[error("invalid certificate input: {0}")]
    InvalidInput(String),
    #[error("split trace does not replay onto the certified graph: {0}")]
    TraceMismatch(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Path of one pattern edge: the pattern pair `(i, j)` with `i < j`, and the
/// host edge ids of a trail from branch `i` to branch `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathEntry {
    pub pair: (usize, usize),
    pub edges: Vec<EdgeId>,
}

/// Witness that the host graph contains a (strong / k-uniform) immersion of
/// the complete graph `K_t`: an injective branch map plus one edge-disjoint
/// host path per pattern edge.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ImmersionCertificate {
    pub host_digest: String,
    pub t: usize,
    pub branch: Vec<Vertex>,
    pub paths: Vec<PathEntry>,
    pub strong: bool,
    pub k: Option<usize>,
}

/// Witness of a clique minor in the line graph of the host: edge-disjoint
/// connected subgraphs (at least one edge each) that pairwise share a vertex.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LineMinorCertificate {
    pub host_digest: String,
    pub parts: Vec<Vec<EdgeId>>,
}

/// One violated invariant, with enough detail to locate it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyFailure {
    BranchOutOfRange { index: usize, vertex: Vertex },
    BranchNotInjective { vertex: Vertex },
    WrongPairSet { detail: String },
    EmptyPath { pair: (usize, usize) },
    BadEdge { pair: (usize, usize), edge: EdgeId },
    NotATrail { pair: (usize, usize), edge: EdgeId },
    WrongEndpoints { pair: (usize, usize) },
    NotVertexSimple { pair: (usize, usize), vertex: Vertex },
    EdgeReuse { edge: EdgeId },
    DeclaredStrongMismatch { declared: bool, computed: bool },
    DeclaredKMismatch { declared: Option<usize>, computed: Option<usize> },
    PartEmpty { part: usize },
    PartNotConnected { part: usize },
    PartsDisjoint { part_a: usize, part_b: usize },
}

impl fmt::Display for VerifyFailure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VerifyFailure::BranchOutOfRange { index, vertex } => {
                write!(f, "branch {index} maps to invalid vertex {vertex}")
            }
            VerifyFailure::BranchNotInjective { vertex } => {
                write!(f, "branch map repeats vertex {vertex}")
            }
            VerifyFailure::WrongPairSet { detail } => write!(f, "path index broken: {detail}"),
            VerifyFailure::EmptyPath { pair } => {
                write!(f, "path for pair {pair:?} has no edges")
            }
            VerifyFailure::BadEdge { pair, edge } => {
                write!(f, "path for pair {pair:?} uses invalid edge {edge}")
            }
            VerifyFailure::NotATrail { pair, edge } => {
                write!(f, "path for pair {pair:?} breaks at edge {edge}")
            }
            VerifyFailure::WrongEndpoints { pair } => {
                write!(f, "path for pair {pair:?} does not join its branch vertices")
            }
            VerifyFailure::NotVertexSimple { pair, vertex } => {
                write!(f, "path for pair {pair:?} revisits vertex {vertex}")
            }
            VerifyFailure::EdgeReuse { edge } => write!(f, "edge {edge} used by two paths"),
            VerifyFailure::DeclaredStrongMismatch { declared, computed } => write!(
                f,
                "declared strong={declared} but verification computed strong={computed}"
            ),
            VerifyFailure::DeclaredKMismatch { declared, computed } => write!(
                f,
                "declared k={declared:?} but verification computed k={computed:?}"
            ),
            VerifyFailure::PartEmpty { part } => write!(f, "part {part} is empty or invalid"),
            VerifyFailure::PartNotConnected { part } => write!(f, "part {part} is not connected"),
            VerifyFailure::PartsDisjoint { part_a, part_b } => {
                write!(f, "parts {part_a} and {part_b} share no vertex")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub valid: bool,
    /// Computed independently of the declared flag.
    pub strong: bool,
    /// `Some(k)` when every path has exactly `k` internal vertices.
    pub k_uniform: Option<usize>,
    pub failures: Vec<VerifyFailure>,
}

#[derive(Clone, Debug)]
pub struct LineMinorReport {
    pub valid: bool,
    pub order: usize,
    pub failures: Vec<VerifyFailure>,
}

/// Walks a path's edge sequence from `start`, returning the visited vertex
/// sequence, or a failure if the edges do not chain.
fn walk_vertices(
    g: &MultiGraph,
    start: Vertex,
    edges: &[EdgeId],
    pair: (usize, usize),
) -> Result<Vec<Vertex>, VerifyFailure> {
    let mut seq = vec![start];
    let mut cur = start;
    for &e in edges {
        let (a, b) = match g.endpoints(e) {
            Some(p) => p,
            None => return Err(VerifyFailure::BadEdge { pair, edge: e }),
        };
        let next = if a == cur {
            b
        } else if b == cur {
            a
        } else {
            return Err(VerifyFailure::NotATrail { pair, edge: e });
        };
        seq.push(next);
        cur = next;
    }
    Ok(seq)
}

/// Checks every certificate invariant against `g`. The `strong` and `k`
/// flags of the report are recomputed from scratch and compared with the
/// declared ones; a mismatch invalidates the certificate.
pub fn verify_immersion(
    g: &MultiGraph,
    cert: &ImmersionCertificate,
) -> Result<VerificationReport, CertError> {
    if g.digest() != cert.host_digest {
        return Err(CertError::DigestMismatch);
    }
    let mut failures = Vec::new();

    if cert.branch.len() != cert.t {
        failures.push(VerifyFailure::WrongPairSet {
            detail: format!("branch has {} entries, t = {}", cert.branch.len(), cert.t),
        });
    }
    let mut seen = HashMap::new();
    for (i, &v) in cert.branch.iter().enumerate() {
        if !g.is_live_vertex(v) {
            failures.push(VerifyFailure::BranchOutOfRange { index: i, vertex: v });
        }
        if seen.insert(v, i).is_some() {
            failures.push(VerifyFailure::BranchNotInjective { vertex: v });
        }
    }
    // Exactly one path per unordered pattern pair, in lexicographic order.
    let expected: Vec<(usize, usize)> = (0..cert.t)
        .flat_map(|i| (i + 1..cert.t).map(move |j| (i, j)))
        .collect();
    let got: Vec<(usize, usize)> = cert.paths.iter().map(|p| p.pair).collect();
    if got != expected {
        failures.push(VerifyFailure::WrongPairSet {
            detail: format!("expected {} pairs in lex order", expected.len()),
        });
    }
    if !failures.is_empty() {
        return Ok(VerificationReport {
            valid: false,
            strong: false,
            k_uniform: None,
            failures,
        });
    }

    let branch_set: Vec<bool> = {
        let mut b = vec![false; g.vertex_slots()];
        for &v in &cert.branch {
            b[v] = true;
        }
        b
    };
    let mut used = vec![false; g.edge_slots()];
    let mut strong = true;
    let mut k_value: Option<Option<usize>> = None; // None = not yet seen
    for entry in &cert.paths {
        let (i, j) = entry.pair;
        let (src, dst) = (cert.branch[i], cert.branch[j]);
        if entry.edges.is_empty() {
            failures.push(VerifyFailure::EmptyPath { pair: entry.pair });
            continue;
        }
        for &e in &entry.edges {
            if e >= used.len() || !g.is_live_edge(e) {
                failures.push(VerifyFailure::BadEdge { pair: entry.pair, edge: e });
            } else if used[e] {
                failures.push(VerifyFailure::EdgeReuse { edge: e });
            } else {
                used[e] = true;
            }
        }
        let seq = match walk_vertices(g, src, &entry.edges, entry.pair) {
            Ok(s) => s,
            Err(fail) => {
                failures.push(fail);
                continue;
            }
        };
        if *seq.last().unwrap() != dst {
            failures.push(VerifyFailure::WrongEndpoints { pair: entry.pair });
            continue;
        }
        let mut visited = HashMap::new();
        let mut simple = true;
        for &v in &seq {
            if visited.insert(v, ()).is_some() {
                failures.push(VerifyFailure::NotVertexSimple { pair: entry.pair, vertex: v });
                simple = false;
                break;
            }
        }
        if !simple {
            continue;
        }
        let internal = &seq[1..seq.len() - 1];
        if internal.iter().any(|&v| branch_set[v]) {
            strong = false;
        }
        let path_k = internal.len();
        match k_value {
            None => k_value = Some(Some(path_k)),
            Some(Some(prev)) if prev != path_k => k_value = Some(None),
            _ => {}
        }
    }
    let k_uniform = k_value.unwrap_or(None);
    if failures.is_empty() {
        if cert.strong != strong {
            failures.push(VerifyFailure::DeclaredStrongMismatch {
                declared: cert.strong,
                computed: strong,
            });
        }
        // With no paths at all (t <= 1) any declared k holds vacuously.
        if let Some(declared) = cert.k {
            if !cert.paths.is_empty() && k_uniform != Some(declared) {
                failures.push(VerifyFailure::DeclaredKMismatch {
                    declared: cert.k,
                    computed: k_uniform,
                });
            }
        }
    }
    Ok(VerificationReport {
        valid: failures.is_empty(),
        strong,
        k_uniform,
        failures,
    })
}

pub fn verify_line_minor(
    g: &MultiGraph,
    cert: &LineMinorCertificate,
) -> Result<LineMinorReport, CertError> {
    if g.digest() != cert.host_digest {
        return Err(CertError::DigestMismatch);
    }
    let mut failures = Vec::new();
    let mut used = vec![false; g.edge_slots()];
    let mut vertex_sets: Vec<Vec<Vertex>> = Vec::with_capacity(cert.parts.len());
    for (idx, part) in cert.parts.iter().enumerate() {
        if part.is_empty() {
            failures.push(VerifyFailure::PartEmpty { part: idx });
            vertex_sets.push(Vec::new());
            continue;
        }
        let mut ok = true;
        for &e in part {
            if !g.is_live_edge(e) {
                failures.push(VerifyFailure::PartEmpty { part: idx });
                ok = false;
                break;
            }
            if used[e] {
                failures.push(VerifyFailure::EdgeReuse { edge: e });
                ok = false;
                break;
            }
            used[e] = true;
        }
        if !ok {
            vertex_sets.push(Vec::new());
            continue;
        }
        // Connectivity of the subgraph formed by the part's edges.
        let mut verts: Vec<Vertex> = part
            .iter()
            .flat_map(|&e| {
                let (u, v) = g.endpoints(e).unwrap();
                [u, v]
            })
            .collect();
        verts.sort_unstable();
        verts.dedup();
        let index: HashMap<Vertex, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for &e in part {
            let (u, v) = g.endpoints(e).unwrap();
            adj[index[&u]].push(index[&v]);
            adj[index[&v]].push(index[&u]);
        }
        let mut reach = vec![false; verts.len()];
        let mut stack = vec![0usize];
        reach[0] = true;
        while let Some(x) = stack.pop() {
            for &y in &adj[x] {
                if !reach[y] {
                    reach[y] = true;
                    stack.push(y);
                }
            }
        }
        if reach.iter().any(|&r| !r) {
            failures.push(VerifyFailure::PartNotConnected { part: idx });
        }
        vertex_sets.push(verts);
    }
    if failures.is_empty() {
        for a in 0..vertex_sets.len() {
            for b in a + 1..vertex_sets.len() {
                let (sa, sb) = (&vertex_sets[a], &vertex_sets[b]);
                let (mut i, mut j) = (0, 0);
                let mut meet = false;
                while i < sa.len() && j < sb.len() {
                    match sa[i].cmp(&sb[j]) {
                        std::cmp::Ordering::Less => i += 1,
                        std::cmp::Ordering::Greater => j += 1,
                        std::cmp::Ordering::Equal => {
                            meet = true;
                            break;
                        }
                    }
                }
                if !meet {
                    failures.push(VerifyFailure::PartsDisjoint { part_a: a, part_b: b });
                }
            }
        }
    }
    Ok(LineMinorReport {
        valid: failures.is_empty(),
        order: cert.parts.len(),
        failures,
    })
}

impl ImmersionCertificate {
    /// Builds a certificate from a branch map and per-pair edge paths, then
    /// verifies it; the stored `strong`/`k` flags are the computed ones.
    /// `paths` must be keyed by pattern pairs `(i, j)` with `i < j`.
    pub fn build(
        g: &MultiGraph,
        branch: Vec<Vertex>,
        mut paths: Vec<PathEntry>,
    ) -> Result<ImmersionCertificate, CertError> {
        paths.sort_by_key(|p| p.pair);
        let mut cert = ImmersionCertificate {
            host_digest: g.digest(),
            t: branch.len(),
            branch,
            paths,
            strong: false,
            k: None,
        };
        let report = verify_immersion(g, &cert)?;
        // Declared-flag failures cannot occur here: strong=false matches
        // nothing yet. Accept only structurally valid path systems.
        let structural: Vec<&VerifyFailure> = report
            .failures
            .iter()
            .filter(|f| {
                !matches!(
                    f,
                    VerifyFailure::DeclaredStrongMismatch { .. }
                        | VerifyFailure::DeclaredKMismatch { .. }
                )
            })
            .collect();
        if !structural.is_empty() {
            return Err(CertError::InvalidInput(format!(
                "path system invalid: {}",
                structural
                    .iter()
                    .map(|f| f.to_string())
                    .collect::<Vec<_>>()
                    .join("; ")
            )));
        }
        cert.strong = report.strong;
        cert.k = report.k_uniform;
        Ok(cert)
    }

    /// Certificate of a clique subgraph: every pattern edge is realized by a
    /// direct host edge between its branch vertices.
    pub fn from_clique_subgraph(
        g: &MultiGraph,
        clique: &[Vertex],
    ) -> Result<ImmersionCertificate, CertError> {
        let mut branch = clique.to_vec();
        branch.sort_unstable();
        let mut paths = Vec::new();
        for i in 0..branch.len() {
            for j in i + 1..branch.len() {
                let e = g
                    .first_edge_between(branch[i], branch[j])
                    .ok_or_else(|| {
                        CertError::InvalidInput(format!(
                            "vertices {} and {} are not adjacent",
                            branch[i], branch[j]
                        ))
                    })?;
                paths.push(PathEntry {
                    pair: (i, j),
                    edges: vec![e],
                });
            }
        }
        ImmersionCertificate::build(g, branch, paths)
    }

    /// Rewrites the certificate onto a host with different vertex/edge ids
    /// (`vertex_map[new] = old`, `edge_map[new] = old` from an induced
    /// subgraph), producing a certificate for the parent graph.
    pub fn relabelled(
        &self,
        parent: &MultiGraph,
        vertex_map: &[Vertex],
        edge_map: &[EdgeId],
    ) -> Result<ImmersionCertificate, CertError> {
        let branch = self.branch.iter().map(|&v| vertex_map[v]).collect();
        let paths = self
            .paths
            .iter()
            .map(|p| PathEntry {
                pair: p.pair,
                edges: p.edges.iter().map(|&e| edge_map[e]).collect(),
            })
            .collect();
        ImmersionCertificate::build(parent, branch, paths)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), CertError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self, CertError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

impl LineMinorCertificate {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self, CertError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<(), CertError> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn read_file(path: &Path) -> Result<Self, CertError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

/// Excises closed subwalks: scans the walk, and on the first repeated vertex
/// drops the cycle between the two occurrences; repeats until the walk is a
/// simple path. Deterministic. Returns the reduced edge sequence.
pub fn reduce_walk_to_path(
    g: &MultiGraph,
    start: Vertex,
    edges: &[EdgeId],
) -> Result<Vec<EdgeId>, CertError> {
    let mut edges = edges.to_vec();
    'outer: loop {
        let mut seq = vec![start];
        let mut cur = start;
        for &e in &edges {
            let (a, b) = g
                .endpoints(e)
                .ok_or_else(|| CertError::InvalidInput(format!("walk uses dead edge {e}")))?;
            let next = if a == cur {
                b
            } else if b == cur {
                a
            } else {
                return Err(CertError::InvalidInput(format!(
                    "walk breaks at edge {e}"
                )));
            };
            seq.push(next);
            cur = next;
        }
        let mut first_at: HashMap<Vertex, usize> = HashMap::new();
        for (pos, &v) in seq.iter().enumerate() {
            if let Some(&prev) = first_at.get(&v) {
                // Drop edges prev..pos (the closed subwalk at v).
                edges.drain(prev..pos);
                continue 'outer;
            }
            first_at.insert(v, pos);
        }
        return Ok(edges);
    }
}

/// Replays `trace` forward from `original`, checking each record applies
/// cleanly and that the final graph matches `expected_digest`.
fn replay_trace(
    original: &MultiGraph,
    trace: &SplitTrace,
    expected_digest: &str,
) -> Result<MultiGraph, CertError> {
    let mut g = original.clone();
    for (step, rec) in trace.records.iter().enumerate() {
        let pairing: Vec<(EdgeId, EdgeId)> = rec.pairs.iter().map(|&(a, b, _)| (a, b)).collect();
        let replay = g
            .split_vertex_in_place(rec.vertex, &pairing, &rec.deleted)
            .map_err(|e| CertError::TraceMismatch(format!("record {step}: {e}")))?;
        if replay != *rec {
            return Err(CertError::TraceMismatch(format!(
                "record {step}: replacement ids diverge"
            )));
        }
    }
    if g.digest() != expected_digest {
        return Err(CertError::TraceMismatch(
            "trace replay does not reach the certified graph".into(),
        ));
    }
    Ok(g)
}

/// Endpoint table covering original edges and every replacement edge a
/// trace creates. The endpoints of an edge id never change once assigned.
fn endpoint_table(
    original: &MultiGraph,
    trace: &SplitTrace,
) -> Result<HashMap<EdgeId, (Vertex, Vertex)>, CertError> {
    let mut table: HashMap<EdgeId, (Vertex, Vertex)> = HashMap::new();
    for e in original.edge_ids() {
        table.insert(e, original.endpoints(e).unwrap());
    }
    for rec in &trace.records {
        let v = rec.vertex;
        for &(e1, e2, repl) in &rec.pairs {
            let other = |e: EdgeId| -> Result<Vertex, CertError> {
                let (a, b) = *table
                    .get(&e)
                    .ok_or_else(|| CertError::TraceMismatch(format!("unknown edge {e}")))?;
                if a == v {
                    Ok(b)
                } else if b == v {
                    Ok(a)
                } else {
                    Err(CertError::TraceMismatch(format!(
                        "edge {e} not incident to split vertex {v}"
                    )))
                }
            };
            let pair = (other(e1)?, other(e2)?);
            if table.insert(repl, pair).is_some() {
                return Err(CertError::TraceMismatch(format!(
                    "replacement id {repl} not fresh"
                )));
            }
        }
    }
    Ok(table)
}

/// Recursively expands an edge of the split graph into the oriented sequence
/// of original edges it stands for, starting the traversal at `cur`.
fn expand_edge(
    e: EdgeId,
    cur: Vertex,
    expansion: &HashMap<EdgeId, (EdgeId, EdgeId, Vertex)>,
    table: &HashMap<EdgeId, (Vertex, Vertex)>,
    out: &mut Vec<EdgeId>,
) -> Result<Vertex, CertError> {
    match expansion.get(&e) {
        None => {
            let (a, b) = table[&e];
            if a != cur && b != cur {
                return Err(CertError::TraceMismatch(format!(
                    "walk breaks while expanding edge {e}"
                )));
            }
            out.push(e);
            Ok(if a == cur { b } else { a })
        }
        Some(&(e1, e2, v)) => {
            let (a, b) = table[&e];
            if cur == a {
                let mid = expand_edge(e1, cur, expansion, table, out)?;
                debug_assert_eq!(mid, v);
                expand_edge(e2, v, expansion, table, out)
            } else if cur == b {
                let mid = expand_edge(e2, cur, expansion, table, out)?;
                debug_assert_eq!(mid, v);
                expand_edge(e1, v, expansion, table, out)
            } else {
                Err(CertError::TraceMismatch(format!(
                    "walk breaks while expanding replacement {e}"
                )))
            }
        }
    }
}

/// Lifts a certificate valid on the split graph back to the graph the trace
/// started from: replacement edges expand (recursively, through all trace
/// records) to the original edges they stand for, and the resulting walks
/// are reduced to simple paths. Strongness is preserved because split
/// vertices no longer exist in the split graph and hence are never branch
/// vertices.
pub fn lift_certificate(
    cert: &ImmersionCertificate,
    trace: &SplitTrace,
    original: &MultiGraph,
) -> Result<ImmersionCertificate, CertError> {
    replay_trace(original, trace, &cert.host_digest)?;
    let table = endpoint_table(original, trace)?;
    let mut expansion: HashMap<EdgeId, (EdgeId, EdgeId, Vertex)> = HashMap::new();
    for rec in &trace.records {
        for &(e1, e2, repl) in &rec.pairs {
            expansion.insert(repl, (e1, e2, rec.vertex));
        }
    }
    let mut paths = Vec::with_capacity(cert.paths.len());
    for entry in &cert.paths {
        let start = cert.branch[entry.pair.0];
        let mut walk = Vec::with_capacity(entry.edges.len());
        let mut cur = start;
        for &e in &entry.edges {
            cur = expand_edge(e, cur, &expansion, &table, &mut walk)?;
        }
        let edges = reduce_walk_to_path(original, start, &walk)?;
        paths.push(PathEntry {
            pair: entry.pair,
            edges,
        });
    }
    ImmersionCertificate::build(original, cert.branch.clone(), paths)
}

/// Rewrites a valid certificate so that every branch pair adjacent in the
/// host uses a direct edge as its path. When the preferred direct edge is
/// occupied by another path, that path absorbs the displaced path's edges
/// and is reduced back to a simple path; the freed edges may in turn let
/// later pairs go direct. Single pass over pairs in lexicographic order;
/// already-direct pairs are never disturbed. The output's strong/k flags are
/// recomputed (the rewrite can demote strongness).
pub fn normalize_certificate(
    g: &MultiGraph,
    cert: &ImmersionCertificate,
) -> Result<ImmersionCertificate, CertError> {
    let report = verify_immersion(g, cert)?;
    let structurally_valid = report
        .failures
        .iter()
        .all(|f| matches!(
            f,
            VerifyFailure::DeclaredStrongMismatch { .. } | VerifyFailure::DeclaredKMismatch { .. }
        ));
    if !structurally_valid {
        return Err(CertError::InvalidInput(
            "normalize requires a valid certificate".into(),
        ));
    }
    let mut paths: Vec<Vec<EdgeId>> = cert.paths.iter().map(|p| p.edges.clone()).collect();
    // owner[edge] = index of the path using it.
    let mut owner: Vec<Option<usize>> = vec![None; g.edge_slots()];
    for (idx, edges) in paths.iter().enumerate() {
        for &e in edges {
            owner[e] = Some(idx);
        }
    }
    for idx in 0..cert.paths.len() {
        let (i, j) = cert.paths[idx].pair;
        let (u, v) = (cert.branch[i], cert.branch[j]);
        let direct = g.edges_between(u, v);
        if direct.is_empty() {
            continue;
        }
        if paths[idx].len() == 1 && direct.contains(&paths[idx][0]) {
            continue; // already the direct edge
        }
        // Prefer an unused direct copy; otherwise displace the lowest one.
        let chosen = direct
            .iter()
            .copied()
            .find(|&e| owner[e].is_none())
            .unwrap_or(direct[0]);
        let displaced_owner = owner[chosen];
        let old_path = std::mem::take(&mut paths[idx]);
        for &e in &old_path {
            owner[e] = None;
        }
        paths[idx] = vec![chosen];
        match displaced_owner {
            None => {
                owner[chosen] = Some(idx);
            }
            Some(host_idx) => {
                debug_assert_ne!(host_idx, idx);
                owner[chosen] = Some(idx);
                // Splice the displaced path into the host walk in place of
                // the direct edge (matching the direction of travel), then
                // reduce to a simple path.
                let host_pair = cert.paths[host_idx].pair;
                let host_start = cert.branch[host_pair.0];
                let mut walk = Vec::new();
                let mut cur = host_start;
                for &e in &paths[host_idx] {
                    let (a, b) = g.endpoints(e).expect("host path edge is live");
                    let next = if a == cur { b } else { a };
                    if e == chosen {
                        // old_path runs u -> v; insert along the traversal.
                        if cur == u {
                            walk.extend_from_slice(&old_path);
                        } else {
                            walk.extend(old_path.iter().rev().copied());
                        }
                    } else {
                        walk.push(e);
                    }
                    cur = next;
                }
                for &e in &paths[host_idx] {
                    if e != chosen {
                        owner[e] = None;
                    }
                }
                let reduced = reduce_walk_to_path(g, host_start, &walk)?;
                for &e in &reduced {
                    owner[e] = Some(host_idx);
                }
                paths[host_idx] = reduced;
            }
        }
    }
    let paths = cert
        .paths
        .iter()
        .zip(paths)
        .map(|(entry, edges)| PathEntry {
            pair: entry.pair,
            edges,
        })
        .collect();
    ImmersionCertificate::build(g, cert.branch.clone(), paths)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::graph::MultiGraph;

    fn k4_identity() -> (MultiGraph, ImmersionCertificate) {
        let g = generators::complete(4);
        let cert = ImmersionCertificate::from_clique_subgraph(&g, &[0, 1, 2, 3]).unwrap();
        (g, cert)
    }

    #[test]
    fn identity_immersion_is_valid_strong_k0() {
        let (g, cert) = k4_identity();
        let r = verify_immersion(&g, &cert).unwrap();
        assert!(r.valid);
        assert!(r.strong);
        assert_eq!(r.k_uniform, Some(0));
        assert!(cert.strong);
        assert_eq!(cert.k, Some(0));
    }

    #[test]
    fn c4_strong_k3() {
        // C4 a1-b1-a2-b2: branch {a1, a2, b1}, paths a1b1, a2b1, a1-b2-a2.
        let g = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        // branch order sorted: 0 (a1), 1 (b1), 2 (a2)
        let cert = ImmersionCertificate::build(
            &g,
            vec![0, 1, 2],
            vec![
                PathEntry { pair: (0, 1), edges: vec![0] },
                PathEntry { pair: (0, 2), edges: vec![3, 2] },
                PathEntry { pair: (1, 2), edges: vec![1] },
            ],
        )
        .unwrap();
        let r = verify_immersion(&g, &cert).unwrap();
        assert!(r.valid);
        assert!(r.strong);
        assert_eq!(r.k_uniform, None); // mixed path lengths
    }

    #[test]
    fn edge_reuse_detected() {
        let g = generators::complete(3);
        let cert = ImmersionCertificate {
            host_digest: g.digest(),
            t: 3,
            branch: vec![0, 1, 2],
            paths: vec![
                PathEntry { pair: (0, 1), edges: vec![0] },
                PathEntry { pair: (0, 2), edges: vec![0] },
                PathEntry { pair: (1, 2), edges: vec![2] },
            ],
            strong: true,
            k: Some(0),
        };
        let r = verify_immersion(&g, &cert).unwrap();
        assert!(!r.valid);
        assert!(r
            .failures
            .iter()
            .any(|f| matches!(f, VerifyFailure::EdgeReuse { edge: 0 })));
    }

    #[test]
    fn digest_mismatch_is_an_error() {
        let (_, cert) = k4_identity();
        let other = generators::complete(5);
        assert!(matches!(
            verify_immersion(&other, &cert),
            Err(CertError::DigestMismatch)
        ));
    }

    #[test]
    fn declared_flag_mismatch_invalidates() {
        let (g, mut cert) = k4_identity();
        cert.k = Some(1);
        let r = verify_immersion(&g, &cert).unwrap();
        assert!(!r.valid);
        cert.k = Some(0);
        cert.strong = false;
        let r = verify_immersion(&g, &cert).unwrap();
        assert!(!r.valid);
    }

    #[test]
    fn json_round_trip_bit_exact() {
        let (_, cert) = k4_identity();
        let text = cert.to_json();
        let back = ImmersionCertificate::from_json(&text).unwrap();
        assert_eq!(cert, back);
        assert_eq!(text, back.to_json());
    }

    #[test]
    fn normalize_is_fixpoint_on_normalized_input() {
        let (g, cert) = k4_identity();
        let n = normalize_certificate(&g, &cert).unwrap();
        assert_eq!(n, cert);
    }

    #[test]
    fn normalize_swaps_direct_edges_in() {
        // Host: K4 plus vertex 4 joined to 1 and 2. Branch {0,1,2}.
        // P01 = 0-2-1, P02 = 0-1-3-2 (uses edge 01 internally), P12 = 1-4-2.
        // Normalization must make all three paths direct.
        let mut g = generators::complete(4);
        let e14 = {
            let mut h = MultiGraph::new(5);
            for e in g.edge_ids() {
                let (u, v) = g.endpoints(e).unwrap();
                h.add_edge(u, v);
            }
            g = h;
            g.add_edge(1, 4)
        };
        let e24 = g.add_edge(2, 4);
        // K4 lex edges: e0=(0,1), e1=(0,2), e2=(0,3), e3=(1,2), e4=(1,3), e5=(2,3)
        let cert = ImmersionCertificate::build(
            &g,
            vec![0, 1, 2],
            vec![
                PathEntry { pair: (0, 1), edges: vec![1, 3] },
                PathEntry { pair: (0, 2), edges: vec![0, 4, 5] },
                PathEntry { pair: (1, 2), edges: vec![e14, e24] },
            ],
        )
        .unwrap();
        assert!(verify_immersion(&g, &cert).unwrap().valid);
        let norm = normalize_certificate(&g, &cert).unwrap();
        assert_eq!(norm.paths[0].edges, vec![0]);
        assert_eq!(norm.paths[1].edges, vec![1]);
        assert_eq!(norm.paths[2].edges, vec![3]);
        assert!(verify_immersion(&g, &norm).unwrap().valid);
        // Fixpoint.
        assert_eq!(normalize_certificate(&g, &norm).unwrap(), norm);
    }

    #[test]
    fn normalize_no_adjacent_pairs_is_identity() {
        // branch vertices pairwise nonadjacent: C6 with branch {0, 2, 4}
        let g = MultiGraph::from_pairs(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
        let cert = ImmersionCertificate::build(
            &g,
            vec![0, 2, 4],
            vec![
                PathEntry { pair: (0, 1), edges: vec![0, 1] },
                PathEntry { pair: (0, 2), edges: vec![5, 4] },
                PathEntry { pair: (1, 2), edges: vec![2, 3] },
            ],
        )
        .unwrap();
        let norm = normalize_certificate(&g, &cert).unwrap();
        assert_eq!(norm, cert);
    }

    #[test]
    fn lift_through_single_split() {
        // original: path 0-1-2; split vertex 1 -> edge (0,2); lift K2 cert.
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        let mut split = g.clone();
        let rec = split.split_vertex_in_place(1, &[(0, 1)], &[]).unwrap();
        let mut trace = SplitTrace::new();
        trace.push(rec);
        let cert = ImmersionCertificate::from_clique_subgraph(&split, &[0, 2]).unwrap();
        let lifted = lift_certificate(&cert, &trace, &g).unwrap();
        assert!(verify_immersion(&g, &lifted).unwrap().valid);
        assert_eq!(lifted.paths[0].edges, vec![0, 1]);
        assert!(lifted.strong);
    }

    #[test]
    fn lift_through_nested_splits() {
        // 0-1-2-3-4 path; split 1 then 2: single edge 0-4 remains... via two
        // records; endpoints unchanged after each expansion.
        let g = MultiGraph::from_pairs(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]);
        let mut split = g.clone();
        let mut trace = SplitTrace::new();
        let r1 = split.split_vertex_in_place(1, &[(0, 1)], &[]).unwrap();
        let first_new = r1.pairs[0].2;
        trace.push(r1);
        let r2 = split
            .split_vertex_in_place(2, &[(first_new, 2)], &[])
            .unwrap();
        trace.push(r2);
        let cert = ImmersionCertificate::from_clique_subgraph(&split, &[0, 3]).unwrap();
        let lifted = lift_certificate(&cert, &trace, &g).unwrap();
        assert!(verify_immersion(&g, &lifted).unwrap().valid);
        assert_eq!(lifted.branch, vec![0, 3]);
        assert_eq!(lifted.paths[0].edges, vec![0, 1, 2]);
    }

    #[test]
    fn lift_excises_self_intersecting_walk() {
        // Original: edges e0=(0,1), e1=(1,2), e2=(1,3), e3=(1,2) parallel.
        // Split vertex 1 pairing (e0,e1)->(0,2) and (e2,e3)->(3,2).
        // The certified path 0-2-3 lifts to walk 0-1-2-1-3, which must be
        // excised to the simple path 0-1-3.
        let g = MultiGraph::from_pairs(4, &[(0, 1), (1, 2), (1, 3), (1, 2)]);
        let mut split = g.clone();
        let rec = split
            .split_vertex_in_place(1, &[(0, 1), (2, 3)], &[])
            .unwrap();
        let r0 = rec.pairs[0].2;
        let r1 = rec.pairs[1].2;
        let mut trace = SplitTrace::new();
        trace.push(rec);
        let cert = ImmersionCertificate::build(
            &split,
            vec![0, 3],
            vec![PathEntry { pair: (0, 1), edges: vec![r0, r1] }],
        )
        .unwrap();
        assert!(cert.strong);
        let lifted = lift_certificate(&cert, &trace, &g).unwrap();
        assert!(verify_immersion(&g, &lifted).unwrap().valid);
        assert_eq!(lifted.paths[0].edges, vec![0, 2]);
        assert!(lifted.strong);
    }

    #[test]
    fn lift_rejects_wrong_original() {
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        let mut split = g.clone();
        let rec = split.split_vertex_in_place(1, &[(0, 1)], &[]).unwrap();
        let mut trace = SplitTrace::new();
        trace.push(rec);
        let cert = ImmersionCertificate::from_clique_subgraph(&split, &[0, 2]).unwrap();
        let wrong = MultiGraph::from_pairs(3, &[(0, 1), (0, 2)]);
        assert!(matches!(
            lift_certificate(&cert, &trace, &wrong),
            Err(CertError::TraceMismatch(_))
        ));
    }

    #[test]
    fn line_minor_verification() {
        let g = generators::complete(3);
        let cert = LineMinorCertificate {
            host_digest: g.digest(),
            parts: vec![vec![0], vec![1], vec![2]],
        };
        let r = verify_line_minor(&g, &cert).unwrap();
        assert!(r.valid);
        assert_eq!(r.order, 3);

        // two vertex-disjoint edges: invalid
        let h = MultiGraph::from_pairs(4, &[(0, 1), (2, 3)]);
        let bad = LineMinorCertificate {
            host_digest: h.digest(),
            parts: vec![vec![0], vec![1]],
        };
        let r = verify_line_minor(&h, &bad).unwrap();
        assert!(!r.valid);
    }
}
