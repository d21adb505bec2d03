//! Multigraph and simple-graph representations with splitting-off primitives.
//!
//! [`MultiGraph`] is the universal host structure: loops and parallel edges
//! are permitted, and every edge carries a stable [`EdgeId`] that survives
//! mutation (removed ids are tombstoned, never reused on other endpoints).
//! Stable ids are what make split traces replayable and certificates
//! liftable without ambiguity.
//!
//! [`SimpleGraph`] wraps a `MultiGraph` and guarantees no loops and no
//! parallel edges among live vertices.

pub mod io;

use num_rational::Ratio;
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

pub type Vertex = usize;
pub type EdgeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("edge ids must differ")]
    SameEdge,
    #[error("edges {0} and {1} share no endpoint")]
    NotAdjacentEdges(EdgeId, EdgeId),
    #[error("edge {0} is not incident to vertex {1}")]
    NotIncident(EdgeId, Vertex),
    #[error("invalid or removed vertex {0}")]
    BadVertex(Vertex),
    #[error("invalid or removed edge {0}")]
    BadEdge(EdgeId),
    #[error("codegree is undefined for a vertex with itself")]
    SameVertex,
    #[error("incident edge partition is invalid: {0}")]
    BadPartition(String),
    #[error("graph is not simple: {0}")]
    NotSimple(String),
    #[error("inconsistent adjacency index: {0}")]
    Inconsistent(String),
}

/// One vertex split: the pairs of incident edges that were split off (with
/// the replacement edge each pair produced) and the incident edges that were
/// deleted outright.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SplitRecord {
    pub vertex: Vertex,
    /// `(e1, e2, replacement)` triples; `e1`, `e2` were incident to `vertex`.
    pub pairs: Vec<(EdgeId, EdgeId, EdgeId)>,
    pub deleted: Vec<EdgeId>,
}

/// Replayable log of vertex splits, in application order. Lifting a
/// certificate walks this in reverse.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SplitTrace {
    pub records: Vec<SplitRecord>,
}

impl SplitTrace {
    pub fn new() -> Self {
        SplitTrace::default()
    }

    pub fn push(&mut self, record: SplitRecord) {
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }
}

/// Basic degree statistics of a graph.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphStats {
    pub min_degree: usize,
    /// Exact average degree over live vertices (0/1 for the empty graph).
    pub avg_degree: Ratio<i64>,
    pub is_all_degrees_even: bool,
    pub edge_count: usize,
}

/// Finite graph with loops and parallel edges and stable edge identifiers.
///
/// Vertices are indices `0..vertex_slots()`; removing a vertex tombstones it
/// (its index is never reused), so vertex names stay meaningful across
/// mutations. A loop contributes 2 to its vertex's degree but appears once
/// in the adjacency index.
#[derive(Clone, Debug)]
pub struct MultiGraph {
    live_vertex: Vec<bool>,
    live_vertex_count: usize,
    edges: Vec<Option<(Vertex, Vertex)>>,
    live_edge_count: usize,
    adj: Vec<Vec<EdgeId>>,
    degree: Vec<usize>,
}

impl MultiGraph {
    pub fn new(n: usize) -> Self {
        MultiGraph {
            live_vertex: vec![true; n],
            live_vertex_count: n,
            edges: Vec::new(),
            live_edge_count: 0,
            adj: vec![Vec::new(); n],
            degree: vec![0; n],
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Self {
        let mut g = MultiGraph::new(n);
        for &(u, v) in pairs {
            g.add_edge(u, v);
        }
        g
    }

    /// Total vertex index space (live and removed).
    pub fn vertex_slots(&self) -> usize {
        self.live_vertex.len()
    }

    /// Number of live vertices.
    pub fn n(&self) -> usize {
        self.live_vertex_count
    }

    /// Number of live edges.
    pub fn m(&self) -> usize {
        self.live_edge_count
    }

    /// Total edge id space (live and tombstoned).
    pub fn edge_slots(&self) -> usize {
        self.edges.len()
    }

    pub fn is_live_vertex(&self, v: Vertex) -> bool {
        v < self.live_vertex.len() && self.live_vertex[v]
    }

    pub fn is_live_edge(&self, e: EdgeId) -> bool {
        e < self.edges.len() && self.edges[e].is_some()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> + '_ {
        (0..self.live_vertex.len()).filter(move |&v| self.live_vertex[v])
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        (0..self.edges.len()).filter(move |&e| self.edges[e].is_some())
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(Vertex, Vertex)> {
        self.edges.get(e).copied().flatten()
    }

    /// Adds an edge between live vertices; returns its fresh id.
    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> EdgeId {
        assert!(self.is_live_vertex(u), "add_edge: dead vertex {u}");
        assert!(self.is_live_vertex(v), "add_edge: dead vertex {v}");
        let id = self.edges.len();
        self.edges.push(Some((u, v)));
        self.adj[u].push(id);
        if u != v {
            self.adj[v].push(id);
            self.degree[u] += 1;
            self.degree[v] += 1;
        } else {
            self.degree[u] += 2;
        }
        self.live_edge_count += 1;
        id
    }

    pub fn remove_edge(&mut self, e: EdgeId) -> Result<(), GraphError> {
        let (u, v) = self.endpoints(e).ok_or(GraphError::BadEdge(e))?;
        self.edges[e] = None;
        self.adj[u].retain(|&x| x != e);
        if u != v {
            self.adj[v].retain(|&x| x != e);
            self.degree[u] -= 1;
            self.degree[v] -= 1;
        } else {
            self.degree[u] -= 2;
        }
        self.live_edge_count -= 1;
        Ok(())
    }

    /// Removes a vertex together with all incident edges.
    pub fn remove_vertex(&mut self, v: Vertex) -> Result<(), GraphError> {
        if !self.is_live_vertex(v) {
            return Err(GraphError::BadVertex(v));
        }
        for e in self.adj[v].clone() {
            self.remove_edge(e)?;
        }
        self.live_vertex[v] = false;
        self.live_vertex_count -= 1;
        Ok(())
    }

    /// Degree of `v`; a loop contributes 2.
    pub fn degree(&self, v: Vertex) -> usize {
        self.degree[v]
    }

    /// Ids of edges incident to `v` (a loop appears once in this list).
    pub fn incident(&self, v: Vertex) -> &[EdgeId] {
        &self.adj[v]
    }

    /// Distinct neighbors of `v`, ascending, excluding `v` itself.
    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let mut out: Vec<Vertex> = self.adj[v]
            .iter()
            .filter_map(|&e| {
                let (a, b) = self.edges[e].unwrap();
                let w = if a == v { b } else { a };
                (w != v).then_some(w)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    pub fn is_adjacent(&self, u: Vertex, v: Vertex) -> bool {
        if u == v {
            return false;
        }
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() {
            (u, v)
        } else {
            (v, u)
        };
        self.adj[a].iter().any(|&e| {
            let (x, y) = self.edges[e].unwrap();
            x == b || y == b
        })
    }

    /// All live edge ids joining `u` and `v`, ascending (`u == v` for loops).
    pub fn edges_between(&self, u: Vertex, v: Vertex) -> Vec<EdgeId> {
        let mut out: Vec<EdgeId> = self.adj[u]
            .iter()
            .copied()
            .filter(|&e| {
                let (a, b) = self.edges[e].unwrap();
                (a, b) == (u, v) || (a, b) == (v, u)
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Lowest edge id joining `u` and `v`, if any.
    pub fn first_edge_between(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        self.edges_between(u, v).into_iter().next()
    }

    /// Sorted per-vertex (neighbor, lowest edge id) index for repeated
    /// endpoint-pair lookups; worth building once when a routine needs
    /// millions of them.
    pub fn edge_lookup(&self) -> EdgeLookup {
        let mut rows: Vec<Vec<(Vertex, EdgeId)>> = vec![Vec::new(); self.vertex_slots()];
        for e in self.edge_ids() {
            let (u, v) = self.edges[e].unwrap();
            rows[u].push((v, e));
            if u != v {
                rows[v].push((u, e));
            }
        }
        for row in rows.iter_mut() {
            row.sort_unstable();
        }
        EdgeLookup { rows }
    }

    pub fn has_loops(&self) -> bool {
        self.edge_ids().any(|e| {
            let (u, v) = self.edges[e].unwrap();
            u == v
        })
    }

    /// Groups live edges into parallel classes by (unordered) endpoint pair.
    /// Loops form their own classes. Classes are keyed `(min, max)`.
    pub fn parallel_classes(&self) -> HashMap<(Vertex, Vertex), Vec<EdgeId>> {
        let mut classes: HashMap<(Vertex, Vertex), Vec<EdgeId>> = HashMap::new();
        for e in self.edge_ids() {
            let (u, v) = self.edges[e].unwrap();
            let key = (u.min(v), u.max(v));
            classes.entry(key).or_default().push(e);
        }
        classes
    }

    pub fn is_simple(&self) -> bool {
        !self.has_loops() && self.parallel_classes().values().all(|c| c.len() == 1)
    }

    pub fn stats(&self) -> GraphStats {
        let mut min_degree = usize::MAX;
        let mut sum = 0usize;
        let mut all_even = true;
        for v in self.vertices() {
            let d = self.degree[v];
            min_degree = min_degree.min(d);
            sum += d;
            all_even &= d % 2 == 0;
        }
        if self.live_vertex_count == 0 {
            min_degree = 0;
        }
        let avg = if self.live_vertex_count == 0 {
            Ratio::new(0, 1)
        } else {
            Ratio::new(sum as i64, self.live_vertex_count as i64)
        };
        GraphStats {
            min_degree,
            avg_degree: avg,
            is_all_degrees_even: all_even,
            edge_count: self.live_edge_count,
        }
    }

    pub fn avg_degree(&self) -> Ratio<i64> {
        self.stats().avg_degree
    }

    pub fn min_degree(&self) -> usize {
        self.stats().min_degree
    }

    pub fn max_degree(&self) -> usize {
        self.vertices().map(|v| self.degree[v]).max().unwrap_or(0)
    }

    /// Round-trip consistency check between the edge sequence, the adjacency
    /// index, and the cached degrees.
    pub fn validate(&self) -> Result<(), GraphError> {
        let mut degree = vec![0usize; self.vertex_slots()];
        let mut incident: Vec<Vec<EdgeId>> = vec![Vec::new(); self.vertex_slots()];
        let mut live_edges = 0usize;
        for (e, slot) in self.edges.iter().enumerate() {
            if let Some((u, v)) = *slot {
                if !self.is_live_vertex(u) || !self.is_live_vertex(v) {
                    return Err(GraphError::Inconsistent(format!(
                        "edge {e} touches a removed vertex"
                    )));
                }
                live_edges += 1;
                incident[u].push(e);
                if u != v {
                    incident[v].push(e);
                    degree[u] += 1;
                    degree[v] += 1;
                } else {
                    degree[u] += 2;
                }
            }
        }
        if live_edges != self.live_edge_count {
            return Err(GraphError::Inconsistent("edge count drifted".into()));
        }
        for v in 0..self.vertex_slots() {
            if !self.live_vertex[v] {
                if !self.adj[v].is_empty() {
                    return Err(GraphError::Inconsistent(format!(
                        "removed vertex {v} has incident edges"
                    )));
                }
                continue;
            }
            if degree[v] != self.degree[v] {
                return Err(GraphError::Inconsistent(format!(
                    "degree cache wrong at {v}"
                )));
            }
            let mut a = self.adj[v].clone();
            a.sort_unstable();
            incident[v].sort_unstable();
            if a != incident[v] {
                return Err(GraphError::Inconsistent(format!(
                    "adjacency index wrong at {v}"
                )));
            }
        }
        Ok(())
    }

    /// Splits off the pair `e1 = uv`, `e2 = vw` at their unique common
    /// endpoint, returning the new graph and the replacement edge id. When
    /// the two edges are parallel (two common endpoints) the lower-indexed
    /// endpoint is taken as the split vertex; use [`Self::split_off_at`] to
    /// name it explicitly.
    pub fn split_off(&self, e1: EdgeId, e2: EdgeId) -> Result<(MultiGraph, EdgeId), GraphError> {
        let v = self.common_endpoint(e1, e2)?;
        let mut g = self.clone();
        let id = g.split_off_at_in_place(v, e1, e2)?;
        Ok((g, id))
    }

    /// In-place variant of [`Self::split_off`] with an explicit split vertex.
    pub fn split_off_at_in_place(
        &mut self,
        v: Vertex,
        e1: EdgeId,
        e2: EdgeId,
    ) -> Result<EdgeId, GraphError> {
        if e1 == e2 {
            return Err(GraphError::SameEdge);
        }
        let (a1, b1) = self.endpoints(e1).ok_or(GraphError::BadEdge(e1))?;
        let (a2, b2) = self.endpoints(e2).ok_or(GraphError::BadEdge(e2))?;
        if a1 != v && b1 != v {
            return Err(GraphError::NotIncident(e1, v));
        }
        if a2 != v && b2 != v {
            return Err(GraphError::NotIncident(e2, v));
        }
        let u = if a1 == v { b1 } else { a1 };
        let w = if a2 == v { b2 } else { a2 };
        self.remove_edge(e1)?;
        self.remove_edge(e2)?;
        // Possibly parallel to an existing edge, possibly a loop if u == w.
        Ok(self.add_edge(u, w))
    }

    fn common_endpoint(&self, e1: EdgeId, e2: EdgeId) -> Result<Vertex, GraphError> {
        if e1 == e2 {
            return Err(GraphError::SameEdge);
        }
        let (a1, b1) = self.endpoints(e1).ok_or(GraphError::BadEdge(e1))?;
        let (a2, b2) = self.endpoints(e2).ok_or(GraphError::BadEdge(e2))?;
        let mut common: Vec<Vertex> = [a1, b1]
            .iter()
            .copied()
            .filter(|&x| x == a2 || x == b2)
            .collect();
        common.sort_unstable();
        common.dedup();
        common
            .into_iter()
            .next()
            .ok_or(GraphError::NotAdjacentEdges(e1, e2))
    }

    /// Splits the vertex `v`: each pair in `pairing` is split off and the
    /// `deleted` edges are dropped, after which `v` is removed. The pairing
    /// and deletions together must cover every incident edge exactly once;
    /// loops at `v` must go to `deleted`.
    pub fn split_vertex(
        &self,
        v: Vertex,
        pairing: &[(EdgeId, EdgeId)],
        deleted: &[EdgeId],
    ) -> Result<(MultiGraph, SplitRecord), GraphError> {
        let mut g = self.clone();
        let record = g.split_vertex_in_place(v, pairing, deleted)?;
        Ok((g, record))
    }

    pub fn split_vertex_in_place(
        &mut self,
        v: Vertex,
        pairing: &[(EdgeId, EdgeId)],
        deleted: &[EdgeId],
    ) -> Result<SplitRecord, GraphError> {
        if !self.is_live_vertex(v) {
            return Err(GraphError::BadVertex(v));
        }
        let mut seen: HashMap<EdgeId, usize> = HashMap::new();
        for &(e1, e2) in pairing {
            if e1 == e2 {
                return Err(GraphError::BadPartition(format!(
                    "edge {e1} paired with itself"
                )));
            }
            *seen.entry(e1).or_insert(0) += 1;
            *seen.entry(e2).or_insert(0) += 1;
        }
        for &e in deleted {
            *seen.entry(e).or_insert(0) += 1;
        }
        for &e in &self.adj[v] {
            match seen.get(&e) {
                Some(1) => {}
                Some(_) => {
                    return Err(GraphError::BadPartition(format!(
                        "incident edge {e} assigned more than once"
                    )))
                }
                None => {
                    return Err(GraphError::BadPartition(format!(
                        "incident edge {e} unassigned"
                    )))
                }
            }
        }
        if seen.len() != self.adj[v].len() {
            return Err(GraphError::BadPartition(
                "assignment references non-incident edges".into(),
            ));
        }
        for &(e1, e2) in pairing {
            for &e in &[e1, e2] {
                let (a, b) = self.endpoints(e).ok_or(GraphError::BadEdge(e))?;
                if a == b {
                    return Err(GraphError::BadPartition(format!(
                        "loop {e} cannot be paired"
                    )));
                }
                if a != v && b != v {
                    return Err(GraphError::NotIncident(e, v));
                }
            }
        }
        let mut record = SplitRecord {
            vertex: v,
            pairs: Vec::with_capacity(pairing.len()),
            deleted: deleted.to_vec(),
        };
        for &(e1, e2) in pairing {
            let id = self.split_off_at_in_place(v, e1, e2)?;
            record.pairs.push((e1, e2, id));
        }
        for &e in deleted {
            self.remove_edge(e)?;
        }
        self.remove_vertex(v)?;
        Ok(record)
    }

    /// Induced subgraph on `keep`, relabeled to `0..keep.len()`. Returns the
    /// graph, the new-to-old vertex map, and the new-to-old edge id map.
    pub fn induced_subgraph(
        &self,
        keep: &[Vertex],
    ) -> Result<(MultiGraph, Vec<Vertex>, Vec<EdgeId>), GraphError> {
        let mut new_to_old = keep.to_vec();
        new_to_old.sort_unstable();
        new_to_old.dedup();
        let mut old_to_new: HashMap<Vertex, Vertex> = HashMap::new();
        for (i, &v) in new_to_old.iter().enumerate() {
            if !self.is_live_vertex(v) {
                return Err(GraphError::BadVertex(v));
            }
            old_to_new.insert(v, i);
        }
        let mut g = MultiGraph::new(new_to_old.len());
        let mut edge_map = Vec::new();
        for e in self.edge_ids() {
            let (u, v) = self.edges[e].unwrap();
            if let (Some(&nu), Some(&nv)) = (old_to_new.get(&u), old_to_new.get(&v)) {
                g.add_edge(nu, nv);
                edge_map.push(e);
            }
        }
        Ok((g, new_to_old, edge_map))
    }

    /// Copy of this graph keeping only the given edges (same vertex and edge
    /// ids); vertices outside `live` are removed.
    pub fn restriction(&self, keep_edges: &[bool], live: &[Vertex]) -> MultiGraph {
        let mut live_vertex = vec![false; self.vertex_slots()];
        for &v in live {
            live_vertex[v] = true;
        }
        let mut g = MultiGraph {
            live_vertex,
            live_vertex_count: live.len(),
            edges: vec![None; self.edges.len()],
            live_edge_count: 0,
            adj: vec![Vec::new(); self.vertex_slots()],
            degree: vec![0; self.vertex_slots()],
        };
        for e in self.edge_ids() {
            if !keep_edges.get(e).copied().unwrap_or(false) {
                continue;
            }
            let (u, v) = self.edges[e].unwrap();
            assert!(g.live_vertex[u] && g.live_vertex[v]);
            g.edges[e] = Some((u, v));
            g.adj[u].push(e);
            if u != v {
                g.adj[v].push(e);
                g.degree[u] += 1;
                g.degree[v] += 1;
            } else {
                g.degree[u] += 2;
            }
            g.live_edge_count += 1;
        }
        g
    }

    /// Order-independent digest of `(vertex span, edge multiset)`, printed as
    /// hex. Certificates carry this to pin down their host graph.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut pairs: Vec<(u64, u64)> = self
            .edge_ids()
            .map(|e| {
                let (u, v) = self.edges[e].unwrap();
                (u.min(v) as u64, u.max(v) as u64)
            })
            .collect();
        pairs.sort_unstable();
        let mut hasher = Sha256::new();
        hasher.update(b"immersion-graph-v1");
        hasher.update((self.vertex_slots() as u64).to_le_bytes());
        hasher.update((pairs.len() as u64).to_le_bytes());
        for (u, v) in pairs {
            hasher.update(u.to_le_bytes());
            hasher.update(v.to_le_bytes());
        }
        let out = hasher.finalize();
        let mut s = String::with_capacity(64);
        for byte in out {
            s.push_str(&format!("{byte:02x}"));
        }
        s
    }
}

impl fmt::Display for MultiGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "MultiGraph(n={}, m={}, slots={})",
            self.n(),
            self.m(),
            self.vertex_slots()
        )
    }
}

/// Precomputed endpoint-pair to edge-id index; see
/// [`MultiGraph::edge_lookup`].
pub struct EdgeLookup {
    rows: Vec<Vec<(Vertex, EdgeId)>>,
}

impl EdgeLookup {
    /// Lowest edge id joining `u` and `v`, if any.
    pub fn get(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let row = &self.rows[u];
        let start = row.partition_point(|&(w, _)| w < v);
        row[start..]
            .iter()
            .take_while(|&&(w, _)| w == v)
            .map(|&(_, e)| e)
            .min()
    }
}

/// Simple graph: no loops, no parallel edges. Wraps [`MultiGraph`] so the
/// same edge-id machinery applies.
#[derive(Clone, Debug)]
pub struct SimpleGraph {
    inner: MultiGraph,
}

impl std::ops::Deref for SimpleGraph {
    type Target = MultiGraph;

    fn deref(&self) -> &MultiGraph {
        &self.inner
    }
}

impl SimpleGraph {
    pub fn new(n: usize) -> Self {
        SimpleGraph {
            inner: MultiGraph::new(n),
        }
    }

    pub fn from_pairs(n: usize, pairs: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut g = SimpleGraph::new(n);
        for &(u, v) in pairs {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn from_multigraph(inner: MultiGraph) -> Result<Self, GraphError> {
        if inner.has_loops() {
            return Err(GraphError::NotSimple("graph has a loop".into()));
        }
        if let Some((pair, class)) = inner.parallel_classes().iter().find(|(_, c)| c.len() > 1) {
            return Err(GraphError::NotSimple(format!(
                "parallel class of size {} between {} and {}",
                class.len(),
                pair.0,
                pair.1
            )));
        }
        Ok(SimpleGraph { inner })
    }

    /// Wraps a multigraph the caller guarantees is simple by construction;
    /// generators use this to avoid quadratic duplicate checks.
    pub(crate) fn from_multigraph_unchecked(inner: MultiGraph) -> Self {
        SimpleGraph { inner }
    }

    pub fn as_multigraph(&self) -> &MultiGraph {
        &self.inner
    }

    pub fn into_multigraph(self) -> MultiGraph {
        self.inner
    }

    pub fn add_edge(&mut self, u: Vertex, v: Vertex) -> Result<EdgeId, GraphError> {
        if u == v {
            return Err(GraphError::NotSimple(format!("loop at {u}")));
        }
        if self.inner.is_adjacent(u, v) {
            return Err(GraphError::NotSimple(format!("duplicate edge {u}-{v}")));
        }
        Ok(self.inner.add_edge(u, v))
    }

    /// Complement over live vertices. An involution: complementing twice
    /// gives back the same edge set (fresh ids).
    pub fn complement(&self) -> SimpleGraph {
        let vs: Vec<Vertex> = self.vertices().collect();
        let mut out = MultiGraph {
            live_vertex: self.inner.live_vertex.clone(),
            live_vertex_count: self.inner.live_vertex_count,
            edges: Vec::new(),
            live_edge_count: 0,
            adj: vec![Vec::new(); self.vertex_slots()],
            degree: vec![0; self.vertex_slots()],
        };
        for (i, &u) in vs.iter().enumerate() {
            for &v in &vs[i + 1..] {
                if !self.is_adjacent(u, v) {
                    out.add_edge(u, v);
                }
            }
        }
        SimpleGraph { inner: out }
    }

    /// Number of common neighbors of two distinct vertices.
    pub fn codegree(&self, u: Vertex, v: Vertex) -> Result<usize, GraphError> {
        if u == v {
            return Err(GraphError::SameVertex);
        }
        if !self.is_live_vertex(u) {
            return Err(GraphError::BadVertex(u));
        }
        if !self.is_live_vertex(v) {
            return Err(GraphError::BadVertex(v));
        }
        let nu = self.neighbors(u);
        let nv = self.neighbors(v);
        let (mut i, mut j, mut count) = (0, 0, 0);
        while i < nu.len() && j < nv.len() {
            match nu[i].cmp(&nv[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        Ok(count)
    }

    /// Induced subgraph with relabeling maps; stays simple.
    pub fn induced(
        &self,
        keep: &[Vertex],
    ) -> Result<(SimpleGraph, Vec<Vertex>, Vec<EdgeId>), GraphError> {
        let (g, vmap, emap) = self.inner.induced_subgraph(keep)?;
        Ok((SimpleGraph { inner: g }, vmap, emap))
    }

    /// Bipartition `(a, b)` with at least `ceil(m/2)` crossing edges, found
    /// by a greedy placement followed by single-vertex local search. At a
    /// local optimum every vertex has at least half its edges crossing, so
    /// the total crossing count is at least `m/2`. Deterministic.
    pub fn max_cut_bipartition(&self) -> (Vec<Vertex>, Vec<Vertex>) {
        let slots = self.vertex_slots();
        let mut side: Vec<Option<bool>> = vec![None; slots];
        // Greedy: place each vertex opposite the majority of placed neighbors.
        for v in self.vertices() {
            let mut same = 0i64;
            let mut cross = 0i64;
            for &w in &self.neighbors(v) {
                match side[w] {
                    Some(false) => cross += 1,
                    Some(true) => same += 1,
                    None => {}
                }
            }
            // side=false is "A"; put v where more neighbors are opposed.
            side[v] = Some(same > cross);
        }
        // Local search: move a vertex while it strictly improves the cut.
        loop {
            let mut moved = false;
            for v in self.vertices() {
                let mine = side[v].unwrap();
                let mut crossing = 0i64;
                let mut internal = 0i64;
                for &w in &self.neighbors(v) {
                    if side[w].unwrap() == mine {
                        internal += 1;
                    } else {
                        crossing += 1;
                    }
                }
                if internal > crossing {
                    side[v] = Some(!mine);
                    moved = true;
                }
            }
            if !moved {
                break;
            }
        }
        let a: Vec<Vertex> = self.vertices().filter(|&v| side[v] == Some(false)).collect();
        let b: Vec<Vertex> = self.vertices().filter(|&v| side[v] == Some(true)).collect();
        (a, b)
    }

    /// Number of edges with endpoints on different sides of a bipartition.
    pub fn crossing_edges(&self, a: &[Vertex], b: &[Vertex]) -> usize {
        let mut in_a = vec![false; self.vertex_slots()];
        for &v in a {
            in_a[v] = true;
        }
        let mut in_b = vec![false; self.vertex_slots()];
        for &v in b {
            in_b[v] = true;
        }
        self.edge_ids()
            .filter(|&e| {
                let (u, v) = self.endpoints(e).unwrap();
                (in_a[u] && in_b[v]) || (in_b[u] && in_a[v])
            })
            .count()
    }

    /// Splits a vertex `u` of degree at most the average degree so that the
    /// average degree drops by at most `(q-2)/(n-1)` whenever the graph has
    /// no `K_q` subgraph: a maximal matching `M` in the complement of the
    /// subgraph induced on `N(u)` determines the split pairs, and the edges
    /// from `u` to the unmatched set are deleted. The result is simple.
    pub fn split_min_degree_vertex(
        &self,
        u: Vertex,
    ) -> Result<(SimpleGraph, SplitRecord), GraphError> {
        if !self.is_live_vertex(u) {
            return Err(GraphError::BadVertex(u));
        }
        let nbrs = self.neighbors(u);
        let (h_sub, vmap, _) = self.induced(&nbrs)?;
        let h = h_sub.complement();
        // Greedy maximal matching in vertex-index order.
        let mut matched = vec![false; h.vertex_slots()];
        let mut pairing = Vec::new();
        for x in h.vertices() {
            if matched[x] {
                continue;
            }
            if let Some(&y) = h.neighbors(x).iter().find(|&&y| !matched[y]) {
                matched[x] = true;
                matched[y] = true;
                let ex = self.first_edge_between(u, vmap[x]).unwrap();
                let ey = self.first_edge_between(u, vmap[y]).unwrap();
                pairing.push((ex, ey));
            }
        }
        let deleted: Vec<EdgeId> = h
            .vertices()
            .filter(|&x| !matched[x])
            .map(|x| self.first_edge_between(u, vmap[x]).unwrap())
            .collect();
        let (out, record) = self.inner.split_vertex(u, &pairing, &deleted)?;
        // New edges come from the complement of the neighborhood, so the
        // result is guaranteed simple.
        let out = SimpleGraph::from_multigraph(out)?;
        Ok((out, record))
    }

    /// Finds a clique of `q` vertices if one exists (pivoting backtracking
    /// with early exit). `q == 0` yields the empty clique.
    pub fn find_clique(&self, q: usize) -> Option<Vec<Vertex>> {
        if q == 0 {
            return Some(Vec::new());
        }
        if q == 1 {
            return self.vertices().next().map(|v| vec![v]);
        }
        let vs: Vec<Vertex> = self.vertices().collect();
        if vs.len() < q {
            return None;
        }
        let idx_of: HashMap<Vertex, usize> = vs.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let words = vs.len().div_ceil(64);
        let mut adj = vec![vec![0u64; words]; vs.len()];
        for e in self.edge_ids() {
            let (u, v) = self.endpoints(e).unwrap();
            let (iu, iv) = (idx_of[&u], idx_of[&v]);
            adj[iu][iv / 64] |= 1 << (iv % 64);
            adj[iv][iu / 64] |= 1 << (iu % 64);
        }
        let mut cand = vec![u64::MAX; words];
        if vs.len() % 64 != 0 {
            cand[words - 1] = (1u64 << (vs.len() % 64)) - 1;
        }
        let mut stack = Vec::new();
        if Self::clique_search(&adj, &mut cand, &mut stack, q) {
            stack.sort_unstable();
            return Some(stack.into_iter().map(|i| vs[i]).collect());
        }
        None
    }

    fn clique_search(adj: &[Vec<u64>], cand: &mut [u64], chosen: &mut Vec<usize>, q: usize) -> bool {
        if chosen.len() == q {
            return true;
        }
        let need = q - chosen.len();
        let available: usize = cand.iter().map(|w| w.count_ones() as usize).sum();
        if available < need {
            return false;
        }
        // Iterate candidates in ascending index order.
        let mut cand_copy = cand.to_vec();
        for w in 0..cand_copy.len() {
            while cand_copy[w] != 0 {
                let bit = cand_copy[w].trailing_zeros() as usize;
                cand_copy[w] &= cand_copy[w] - 1;
                let v = w * 64 + bit;
                let mut next: Vec<u64> = cand
                    .iter()
                    .zip(&adj[v])
                    .map(|(&c, &a)| c & a)
                    .collect();
                // Only look at candidates above v to avoid permutations.
                next[w] &= !((1u64 << bit) | ((1u64 << bit) - 1));
                for x in next.iter_mut().take(w) {
                    *x = 0;
                }
                chosen.push(v);
                if Self::clique_search(adj, &mut next, chosen, q) {
                    return true;
                }
                chosen.pop();
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn split_off_path_leaves_single_edge() {
        // path u-v-w: split (uv, vw) -> single edge uw, v isolated
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        let (h, id) = g.split_off(0, 1).unwrap();
        assert_eq!(h.endpoints(id), Some((0, 2)));
        assert_eq!(h.m(), 1);
        assert_eq!(h.degree(1), 0);
    }

    #[test]
    fn split_off_triangle_makes_double_edge() {
        let g = MultiGraph::from_pairs(3, &[(0, 1), (1, 2), (0, 2)]);
        let (h, _) = g.split_off(0, 1).unwrap();
        assert_eq!(h.edges_between(0, 2).len(), 2);
        assert!(!h.is_simple());
    }

    #[test]
    fn split_off_double_edge_forms_loop() {
        // double edge uv, split the pair at v -> loop at u
        let mut g = MultiGraph::from_pairs(2, &[(0, 1), (0, 1)]);
        let id = g.split_off_at_in_place(1, 0, 1).unwrap();
        assert_eq!(g.endpoints(id), Some((0, 0)));
        assert_eq!(g.degree(0), 2);
        assert_eq!(g.degree(1), 0);
    }

    #[test]
    fn split_off_rejects_disjoint_and_same() {
        let g = MultiGraph::from_pairs(4, &[(0, 1), (2, 3)]);
        assert_eq!(
            g.split_off(0, 1).unwrap_err(),
            GraphError::NotAdjacentEdges(0, 1)
        );
        assert_eq!(g.split_off(0, 0).unwrap_err(), GraphError::SameEdge);
    }

    #[test]
    fn split_vertex_star_gives_matching() {
        // center of K_{1,4}: pairing {(e0,e1),(e2,e3)} -> perfect matching on leaves
        let g = MultiGraph::from_pairs(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let (h, rec) = g.split_vertex(0, &[(0, 1), (2, 3)], &[]).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.m(), 2);
        assert!(h.is_adjacent(1, 2));
        assert!(h.is_adjacent(3, 4));
        assert_eq!(rec.pairs.len(), 2);
        h.validate().unwrap();
    }

    #[test]
    fn split_vertex_preserves_parity_when_nothing_deleted() {
        // Eulerian vertex of degree 6 fully paired: neighbor parity preserved
        let g = MultiGraph::from_pairs(
            4,
            &[(0, 1), (0, 1), (0, 2), (0, 2), (0, 3), (0, 3), (1, 2), (2, 3), (1, 3)],
        );
        let before: Vec<usize> = (1..4).map(|v| g.degree(v) % 2).collect();
        let (h, _) = g.split_vertex(0, &[(0, 1), (2, 3), (4, 5)], &[]).unwrap();
        let after: Vec<usize> = (1..4).map(|v| h.degree(v) % 2).collect();
        assert_eq!(before, after);
        assert_eq!(h.m(), 6);
    }

    #[test]
    fn split_vertex_k4_recount_degrees() {
        // K4 vertex split with one pair + two deletions -> triangle plus one
        // extra edge; degrees recomputed from scratch as the oracle.
        let g = generators::complete(4);
        let inc: Vec<EdgeId> = g.incident(3).to_vec();
        let (h, _) = g
            .split_vertex(3, &[(inc[0], inc[1])], &[inc[2]])
            .unwrap();
        assert_eq!(h.n(), 3);
        assert_eq!(h.m(), 4);
        let mut recount = vec![0usize; 4];
        for e in h.edge_ids() {
            let (u, v) = h.endpoints(e).unwrap();
            recount[u] += 1;
            recount[v] += 1;
        }
        for v in 0..3 {
            assert_eq!(recount[v], h.degree(v));
        }
        assert!(!h.is_simple()); // the pair created a parallel 0-1 edge
        h.validate().unwrap();
    }

    #[test]
    fn split_vertex_rejects_bad_partition() {
        let g = MultiGraph::from_pairs(3, &[(0, 1), (0, 2)]);
        let err = g.split_vertex(0, &[(0, 1)], &[0]).unwrap_err();
        assert!(matches!(err, GraphError::BadPartition(_)));
        let err = g.split_vertex(0, &[], &[0]).unwrap_err();
        assert!(matches!(err, GraphError::BadPartition(_)));
    }

    #[test]
    fn split_min_degree_vertex_on_c5() {
        // C5, u=0: complement of N(u) has a matching of size 1; result is C4.
        let g = generators::cycle(5);
        let (h, rec) = g.split_min_degree_vertex(0).unwrap();
        assert_eq!(h.n(), 4);
        assert_eq!(h.m(), 4);
        assert!(h.is_simple());
        assert_eq!(rec.pairs.len(), 1);
        assert!(h.is_adjacent(1, 4));
        assert_eq!(h.avg_degree(), Ratio::new(2, 1));
    }

    #[test]
    fn split_min_degree_vertex_deletes_clique_neighborhood() {
        // N(u) a clique joined to u: complement matching empty, all edges at
        // u deleted.
        let g = SimpleGraph::from_pairs(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
            .unwrap();
        let (h, rec) = g.split_min_degree_vertex(0).unwrap();
        assert!(rec.pairs.is_empty());
        assert_eq!(rec.deleted.len(), 3);
        assert_eq!(h.m(), 3);
        assert_eq!(h.n(), 3);
    }

    #[test]
    fn complement_involution_and_known_values() {
        let k5 = generators::complete_simple(5);
        assert_eq!(k5.complement().m(), 0);
        let c5 = generators::cycle(5);
        let cc = c5.complement();
        assert_eq!(cc.m(), 5);
        for v in cc.vertices() {
            assert_eq!(cc.degree(v), 2);
        }
        let petersen = generators::petersen();
        let pc = petersen.complement();
        for v in pc.vertices() {
            assert_eq!(pc.degree(v), 6);
        }
        let back = pc.complement();
        for u in 0..10 {
            for v in u + 1..10 {
                assert_eq!(petersen.is_adjacent(u, v), back.is_adjacent(u, v));
            }
        }
    }

    #[test]
    fn induced_subgraph_cases() {
        let k5 = generators::complete_simple(5);
        let (g, vmap, _) = k5.induced(&[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(g.m(), 10);
        assert_eq!(vmap, vec![0, 1, 2, 3, 4]);
        let (g, _, _) = k5.induced(&[]).unwrap();
        assert_eq!(g.n(), 0);
        let (g, _, _) = k5.induced(&[1, 3, 4]).unwrap();
        assert_eq!(g.m(), 3);
        assert!(k5.induced(&[7]).is_err());
    }

    #[test]
    fn codegree_values() {
        let k4 = generators::complete_simple(4);
        assert_eq!(k4.codegree(0, 1).unwrap(), 2);
        let c5 = generators::cycle(5);
        assert_eq!(c5.codegree(0, 1).unwrap(), 0);
        let k33 = generators::complete_bipartite(3, 3);
        assert_eq!(k33.codegree(0, 1).unwrap(), 3);
        assert!(k4.codegree(2, 2).is_err());
    }

    #[test]
    fn max_cut_guarantees() {
        let c4 = generators::cycle(4);
        let (a, b) = c4.max_cut_bipartition();
        assert_eq!(c4.crossing_edges(&a, &b), 4);

        // K4: brute force over all 2^4 bipartitions says the max cut is 4.
        let k4 = generators::complete_simple(4);
        let mut best = 0;
        for mask in 0u32..16 {
            let a: Vec<Vertex> = (0..4).filter(|&v| mask >> v & 1 == 1).collect();
            let b: Vec<Vertex> = (0..4).filter(|&v| mask >> v & 1 == 0).collect();
            best = best.max(k4.crossing_edges(&a, &b));
        }
        assert_eq!(best, 4);
        let (a, b) = k4.max_cut_bipartition();
        assert_eq!(k4.crossing_edges(&a, &b), 4);
    }

    #[test]
    fn stats_cases() {
        let k5 = generators::complete_simple(5);
        let s = k5.stats();
        assert_eq!(s.min_degree, 4);
        assert_eq!(s.avg_degree, Ratio::new(4, 1));
        assert!(s.is_all_degrees_even);
        let p3 = generators::path(3);
        assert_eq!(p3.stats().min_degree, 1);
    }

    #[test]
    fn digest_is_order_independent() {
        let g1 = MultiGraph::from_pairs(3, &[(0, 1), (1, 2)]);
        let g2 = MultiGraph::from_pairs(3, &[(2, 1), (1, 0)]);
        assert_eq!(g1.digest(), g2.digest());
        let g3 = MultiGraph::from_pairs(3, &[(0, 1), (0, 2)]);
        assert_ne!(g1.digest(), g3.digest());
    }

    #[test]
    fn find_clique_works() {
        let k5 = generators::complete_simple(5);
        assert_eq!(k5.find_clique(4).unwrap().len(), 4);
        let c5 = generators::cycle(5);
        assert!(c5.find_clique(3).is_none());
        assert_eq!(c5.find_clique(2).unwrap().len(), 2);
        let petersen = generators::petersen();
        assert!(petersen.find_clique(3).is_none());
    }

    #[test]
    fn simple_graph_rejects_violations() {
        let mut g = SimpleGraph::new(3);
        g.add_edge(0, 1).unwrap();
        assert!(g.add_edge(0, 1).is_err());
        assert!(g.add_edge(2, 2).is_err());
        let m = MultiGraph::from_pairs(2, &[(0, 1), (0, 1)]);
        assert!(SimpleGraph::from_multigraph(m).is_err());
    }
}
