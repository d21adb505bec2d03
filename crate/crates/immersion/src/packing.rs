//! Spanning-tree packing and global minimum edge cuts.
//!
//! `tree_packing` either produces `k` pairwise edge-disjoint spanning trees
//! or a partition of the vertex set with fewer than `k(t-1)` crossing edges,
//! which by the Nash-Williams/Tutte theorem certifies that no such packing
//! exists. The packing side runs a greedy forest-growing phase (union-find
//! per forest, with a rotating first-non-spanning pointer so dense instances
//! stay near-linear) followed by matroid-union augmentation; the witness
//! side reads the partition off the final failed label sets.

use crate::graph::{EdgeId, MultiGraph, Vertex};
use std::collections::{HashMap, VecDeque};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PackingError {
    #[error("graph is disconnected")]
    Disconnected,
    #[error("graph has fewer than two vertices")]
    TooSmall,
}

/// Result of a packing attempt.
#[derive(Clone, Debug)]
pub enum TreePacking {
    /// `k` pairwise edge-disjoint spanning trees, each a set of edge ids.
    Trees(Vec<Vec<EdgeId>>),
    /// Partition `{X_1, ..., X_t}` of the live vertices with fewer than
    /// `k (t - 1)` edges crossing between blocks.
    Witness {
        blocks: Vec<Vec<Vertex>>,
        crossing_edges: usize,
    },
}

struct UnionFind {
    parent: Vec<usize>,
    components: usize,
}

impl UnionFind {
    fn new(n: usize, live: &[bool]) -> Self {
        UnionFind {
            parent: (0..n).collect(),
            components: live.iter().filter(|&&l| l).count(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.components -= 1;
        true
    }
}

const NONE: usize = usize::MAX;

/// Forests indexed `0..k`. Each forest keeps a rooted parent representation
/// (parent vertex, parent edge, depth, component id) so that cycle queries
/// cost only the path length; the representation is rebuilt per forest
/// after augmentation chains touch it.
struct ForestState {
    slots: usize,
    live: Vec<Vertex>,
    /// forest_of[edge] = forest index or NONE.
    forest_of: Vec<usize>,
    adj: Vec<Vec<Vec<(Vertex, EdgeId)>>>, // adj[forest][vertex]
    edge_count: Vec<usize>,
    parent: Vec<Vec<(Vertex, EdgeId)>>, // parent[forest][vertex], NONE-edge at roots
    depth: Vec<Vec<u32>>,
    comp: Vec<Vec<u32>>,
}

impl ForestState {
    fn new(g: &MultiGraph, k: usize) -> Self {
        let slots = g.vertex_slots();
        let live: Vec<Vertex> = g.vertices().collect();
        let mut st = ForestState {
            slots,
            live,
            forest_of: vec![NONE; g.edge_slots()],
            adj: vec![vec![Vec::new(); slots]; k],
            edge_count: vec![0; k],
            parent: vec![vec![(NONE, NONE); slots]; k],
            depth: vec![vec![0; slots]; k],
            comp: vec![vec![0; slots]; k],
        };
        for f in 0..k {
            st.rebuild(f);
        }
        st
    }

    fn spanning(&self, f: usize) -> bool {
        self.edge_count[f] + 1 == self.live.len()
    }

    fn insert(&mut self, f: usize, e: EdgeId, u: Vertex, v: Vertex) {
        self.forest_of[e] = f;
        self.adj[f][u].push((v, e));
        self.adj[f][v].push((u, e));
        self.edge_count[f] += 1;
    }

    fn remove(&mut self, f: usize, e: EdgeId, u: Vertex, v: Vertex) {
        self.forest_of[e] = NONE;
        self.adj[f][u].retain(|&(_, id)| id != e);
        self.adj[f][v].retain(|&(_, id)| id != e);
        self.edge_count[f] -= 1;
    }

    /// Recomputes parents, depths and component ids of forest `f`.
    fn rebuild(&mut self, f: usize) {
        let mut comp_id = 0u32;
        let mut seen = vec![false; self.slots];
        for i in 0..self.live.len() {
            let root = self.live[i];
            if seen[root] {
                continue;
            }
            seen[root] = true;
            self.parent[f][root] = (NONE, NONE);
            self.depth[f][root] = 0;
            self.comp[f][root] = comp_id;
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for idx in 0..self.adj[f][x].len() {
                    let (y, e) = self.adj[f][x][idx];
                    if !seen[y] {
                        seen[y] = true;
                        self.parent[f][y] = (x, e);
                        self.depth[f][y] = self.depth[f][x] + 1;
                        self.comp[f][y] = comp_id;
                        queue.push_back(y);
                    }
                }
            }
            comp_id += 1;
        }
    }

    fn connected(&self, f: usize, u: Vertex, v: Vertex) -> bool {
        self.comp[f][u] == self.comp[f][v]
    }

    /// Edges of the path between `u` and `v` in forest `f` (which must be
    /// connected there), by climbing parents from both ends.
    fn tree_path(&mut self, f: usize, u: Vertex, v: Vertex, out: &mut Vec<EdgeId>) {
        out.clear();
        let (mut a, mut b) = (u, v);
        let mut b_edges: Vec<EdgeId> = Vec::new();
        while self.depth[f][a] > self.depth[f][b] {
            let (p, e) = self.parent[f][a];
            out.push(e);
            a = p;
        }
        while self.depth[f][b] > self.depth[f][a] {
            let (p, e) = self.parent[f][b];
            b_edges.push(e);
            b = p;
        }
        while a != b {
            let (pa, ea) = self.parent[f][a];
            let (pb, eb) = self.parent[f][b];
            out.push(ea);
            b_edges.push(eb);
            a = pa;
            b = pb;
        }
        out.extend(b_edges.into_iter().rev());
    }
}

/// One multi-source matroid-union augmentation: labels spread breadth-first
/// from every source edge simultaneously; an edge is labeled when evicting
/// it from its forest would admit the labeled predecessor. On success the
/// chain is executed and the consumed source edge is returned; on failure
/// the labeled set (sources included) is returned. The labeled set is
/// closed: every forest cycle of every labeled edge is fully labeled.
fn augment_multi(
    g: &MultiGraph,
    st: &mut ForestState,
    k: usize,
    sources: &[EdgeId],
) -> Result<EdgeId, Vec<EdgeId>> {
    let mut pred: HashMap<EdgeId, (EdgeId, usize)> = HashMap::new();
    let mut queue = VecDeque::new();
    for &e in sources {
        let (u, v) = g.endpoints(e).unwrap();
        if u == v {
            continue; // loops never help a spanning tree
        }
        if pred.insert(e, (NONE, NONE)).is_none() {
            queue.push_back(e);
        }
    }
    let mut cycle = Vec::new();
    while let Some(x) = queue.pop_front() {
        let (xu, xv) = g.endpoints(x).unwrap();
        for f in 0..k {
            if st.forest_of[x] == f {
                continue;
            }
            if !st.connected(f, xu, xv) {
                // x fits directly in forest f: unwind the chain.
                let mut touched = Vec::new();
                let mut cur = x;
                let mut target = f;
                let consumed;
                loop {
                    let (p, evict_from) = pred[&cur];
                    let (cu, cv) = g.endpoints(cur).unwrap();
                    if st.forest_of[cur] != NONE {
                        let old = st.forest_of[cur];
                        st.remove(old, cur, cu, cv);
                        touched.push(old);
                    }
                    st.insert(target, cur, cu, cv);
                    touched.push(target);
                    if p == NONE {
                        consumed = cur;
                        break;
                    }
                    target = evict_from;
                    cur = p;
                }
                touched.sort_unstable();
                touched.dedup();
                for f2 in touched {
                    st.rebuild(f2);
                }
                return Ok(consumed);
            }
            st.tree_path(f, xu, xv, &mut cycle);
            for i in 0..cycle.len() {
                let y = cycle[i];
                if let std::collections::hash_map::Entry::Vacant(slot) = pred.entry(y) {
                    slot.insert((x, f));
                    queue.push_back(y);
                }
            }
        }
    }
    Err(pred.keys().copied().collect())
}

/// Packs `k` edge-disjoint spanning trees or returns a witness partition.
/// One of the two outcomes always exists.
pub fn tree_packing(g: &MultiGraph, k: usize) -> TreePacking {
    assert!(k >= 1, "k must be positive");
    let live: Vec<Vertex> = g.vertices().collect();
    let n = live.len();
    if n <= 1 {
        // Empty trees span a single vertex (or nothing).
        return TreePacking::Trees(vec![Vec::new(); k]);
    }
    let mut st = ForestState::new(g, k);
    let mut unused: Vec<EdgeId> = Vec::new();
    // Greedy phase with plain union-finds (edges only get added here) and a
    // rotating start forest so the forests grow in parallel.
    {
        let mut live_flags = vec![false; g.vertex_slots()];
        for &v in &live {
            live_flags[v] = true;
        }
        let mut ufs: Vec<UnionFind> = (0..k).map(|_| UnionFind::new(g.vertex_slots(), &live_flags)).collect();
        let mut start = 0usize;
        for e in g.edge_ids() {
            let (u, v) = g.endpoints(e).unwrap();
            if u == v {
                continue; // loops never help
            }
            let mut placed = false;
            for off in 0..k {
                let f = (start + off) % k;
                if st.spanning(f) {
                    continue;
                }
                let (ru, rv) = (ufs[f].find(u), ufs[f].find(v));
                if ru != rv {
                    ufs[f].union(u, v);
                    st.insert(f, e, u, v);
                    start = (f + 1) % k;
                    placed = true;
                    break;
                }
            }
            if !placed {
                unused.push(e);
            }
        }
    }
    for f in 0..k {
        st.rebuild(f);
    }
    // Multi-source augmentation until all forests span or the state
    // saturates (one exhaustive failed search).
    let final_labels = loop {
        if (0..k).all(|f| st.spanning(f)) {
            let mut trees = vec![Vec::new(); k];
            for e in g.edge_ids() {
                if st.forest_of[e] != NONE {
                    trees[st.forest_of[e]].push(e);
                }
            }
            return TreePacking::Trees(trees);
        }
        match augment_multi(g, &mut st, k, &unused) {
            Ok(consumed) => {
                unused.retain(|&e| e != consumed);
            }
            Err(labels) => break labels,
        }
    };
    // Saturated: the labeled set (which includes every remaining unused
    // edge) spans each of its connected blocks inside every forest, so its
    // components form the deficiency witness.
    let mut in_r = vec![false; g.edge_slots()];
    for l in final_labels {
        in_r[l] = true;
    }
    for &e in &unused {
        let (u, v) = g.endpoints(e).unwrap();
        if u != v {
            in_r[e] = true;
        }
    }
    let mut uf = UnionFind::new(g.vertex_slots(), &{
        let mut l = vec![false; g.vertex_slots()];
        for &v in &live {
            l[v] = true;
        }
        l
    });
    for e in g.edge_ids() {
        if in_r[e] {
            let (u, v) = g.endpoints(e).unwrap();
            if u != v {
                uf.union(u, v);
            }
        }
    }
    let mut block_of: HashMap<usize, usize> = HashMap::new();
    let mut blocks: Vec<Vec<Vertex>> = Vec::new();
    for &v in &live {
        let r = uf.find(v);
        let idx = *block_of.entry(r).or_insert_with(|| {
            blocks.push(Vec::new());
            blocks.len() - 1
        });
        blocks[idx].push(v);
    }
    let crossing = count_crossing(g, &blocks);
    debug_assert!(
        blocks.len() >= 2 && crossing < k * (blocks.len() - 1),
        "witness partition fails the deficiency inequality"
    );
    TreePacking::Witness {
        blocks,
        crossing_edges: crossing,
    }
}

/// Edges of `g` whose endpoints lie in different blocks.
pub fn count_crossing(g: &MultiGraph, blocks: &[Vec<Vertex>]) -> usize {
    let mut block_of = vec![NONE; g.vertex_slots()];
    for (i, block) in blocks.iter().enumerate() {
        for &v in block {
            block_of[v] = i;
        }
    }
    g.edge_ids()
        .filter(|&e| {
            let (u, v) = g.endpoints(e).unwrap();
            block_of[u] != block_of[v]
        })
        .count()
}

/// Checks that the claimed trees are pairwise edge-disjoint spanning trees
/// of `g`'s live vertex set.
pub fn validate_tree_packing(g: &MultiGraph, trees: &[Vec<EdgeId>]) -> bool {
    let n = g.n();
    let mut used = vec![false; g.edge_slots()];
    let live: Vec<bool> = {
        let mut l = vec![false; g.vertex_slots()];
        for v in g.vertices() {
            l[v] = true;
        }
        l
    };
    for tree in trees {
        if n > 0 && tree.len() + 1 != n {
            return false;
        }
        let mut uf = UnionFind::new(g.vertex_slots(), &live);
        for &e in tree {
            let Some((u, v)) = g.endpoints(e) else {
                return false;
            };
            if used[e] || u == v {
                return false;
            }
            used[e] = true;
            if !uf.union(u, v) {
                return false; // cycle
            }
        }
        if uf.components != 1 {
            return false;
        }
    }
    true
}

/// Global minimum edge cut by maximum-adjacency contraction (Stoer-Wagner on
/// unit weights, parallel edges counting with multiplicity). Returns the cut
/// value and the smaller side.
pub fn min_edge_cut(g: &MultiGraph) -> Result<(usize, Vec<Vertex>), PackingError> {
    let live: Vec<Vertex> = g.vertices().collect();
    let n = live.len();
    if n < 2 {
        return Err(PackingError::TooSmall);
    }
    let index: HashMap<Vertex, usize> = live.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    // Dense weight matrix of parallel-edge multiplicities; loops ignored.
    let mut w = vec![vec![0u64; n]; n];
    for e in g.edge_ids() {
        let (u, v) = g.endpoints(e).unwrap();
        if u == v {
            continue;
        }
        let (iu, iv) = (index[&u], index[&v]);
        w[iu][iv] += 1;
        w[iv][iu] += 1;
    }
    // Connectivity check.
    {
        let mut seen = vec![false; n];
        let mut stack = vec![0usize];
        seen[0] = true;
        let mut count = 1;
        while let Some(x) = stack.pop() {
            for y in 0..n {
                if w[x][y] > 0 && !seen[y] {
                    seen[y] = true;
                    count += 1;
                    stack.push(y);
                }
            }
        }
        if count < n {
            return Err(PackingError::Disconnected);
        }
    }
    let mut groups: Vec<Vec<Vertex>> = live.iter().map(|&v| vec![v]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<Vertex>)> = None;
    while active.len() > 1 {
        // Maximum-adjacency order over the active supernodes.
        let mut in_a = vec![false; n];
        let mut weight_to_a = vec![0u64; n];
        let mut order = Vec::with_capacity(active.len());
        for _ in 0..active.len() {
            let &next = active
                .iter()
                .filter(|&&x| !in_a[x])
                .max_by_key(|&&x| (weight_to_a[x], std::cmp::Reverse(x)))
                .unwrap();
            in_a[next] = true;
            order.push(next);
            for &y in &active {
                if !in_a[y] {
                    weight_to_a[y] += w[next][y];
                }
            }
        }
        let t = *order.last().unwrap();
        let s = order[order.len() - 2];
        let cut_of_phase = weight_to_a[t];
        let candidate_side = groups[t].clone();
        match &best {
            Some((bv, _)) if *bv <= cut_of_phase => {}
            _ => best = Some((cut_of_phase, candidate_side)),
        }
        // Merge t into s.
        for &y in &active {
            if y != s && y != t {
                w[s][y] += w[t][y];
                w[y][s] = w[s][y];
            }
        }
        let moved = std::mem::take(&mut groups[t]);
        groups[s].extend(moved);
        active.retain(|&x| x != t);
    }
    let (value, mut side) = best.unwrap();
    side.sort_unstable();
    // Report the smaller side of the cut.
    if side.len() * 2 > n {
        let side_set: std::collections::HashSet<Vertex> = side.iter().copied().collect();
        side = live
            .iter()
            .copied()
            .filter(|v| !side_set.contains(v))
            .collect();
    }
    Ok((value as usize, side))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rng::SplitMix64;

    #[test]
    fn single_tree_of_a_tree() {
        let g = generators::path(6);
        match tree_packing(&g, 1) {
            TreePacking::Trees(trees) => {
                assert_eq!(trees.len(), 1);
                assert!(validate_tree_packing(&g, &trees));
            }
            TreePacking::Witness { .. } => panic!("a tree packs one spanning tree"),
        }
    }

    #[test]
    fn c4_cannot_pack_two_trees() {
        let g = generators::cycle(4);
        match tree_packing(&g, 2) {
            TreePacking::Trees(_) => panic!("C4 has only 4 edges, needs 6"),
            TreePacking::Witness {
                blocks,
                crossing_edges,
            } => {
                assert!(blocks.len() >= 2);
                assert!(crossing_edges < 2 * (blocks.len() - 1));
                assert_eq!(count_crossing(&g, &blocks), crossing_edges);
            }
        }
    }

    #[test]
    fn k4_packs_two_trees() {
        // Exhaustive search confirms a disjoint spanning-tree pair exists in
        // K4 (e.g. paths 0-1-2-3 and 2-0-3-1), so the packer must find one.
        let g = generators::complete(4);
        match tree_packing(&g, 2) {
            TreePacking::Trees(trees) => {
                assert_eq!(trees.len(), 2);
                assert!(validate_tree_packing(&g, &trees));
            }
            TreePacking::Witness { .. } => panic!("K4 packs two spanning trees"),
        }
    }

    #[test]
    fn k6_packs_two_trees_with_augmentation() {
        let g = generators::complete(6);
        match tree_packing(&g, 2) {
            TreePacking::Trees(trees) => assert!(validate_tree_packing(&g, &trees)),
            TreePacking::Witness { .. } => panic!("K6 packs 2 trees"),
        }
    }

    #[test]
    fn disconnected_witness() {
        let mut g = MultiGraph::new(6);
        g.add_edge(0, 1);
        g.add_edge(2, 3);
        g.add_edge(4, 5);
        match tree_packing(&g, 1) {
            TreePacking::Trees(_) => panic!("disconnected graph has no spanning tree"),
            TreePacking::Witness {
                blocks,
                crossing_edges,
            } => {
                assert!(blocks.len() >= 2);
                assert!(crossing_edges < blocks.len() - 1);
                assert_eq!(count_crossing(&g, &blocks), crossing_edges);
            }
        }
    }

    #[test]
    fn packing_outcomes_valid_on_random_graphs() {
        let mut rng = SplitMix64::new(5150);
        for _ in 0..30 {
            let n = 5 + rng.next_below(8) as usize;
            let g = generators::gnp(n, 1 + rng.next_below(9), 10, rng.next_u64());
            for k in 1..=3 {
                match tree_packing(&g, k) {
                    TreePacking::Trees(trees) => {
                        assert_eq!(trees.len(), k);
                        assert!(validate_tree_packing(&g, &trees));
                    }
                    TreePacking::Witness {
                        blocks,
                        crossing_edges,
                    } => {
                        assert!(blocks.len() >= 2);
                        assert!(crossing_edges < k * (blocks.len() - 1));
                        assert_eq!(count_crossing(&g, &blocks), crossing_edges);
                    }
                }
            }
        }
    }

    #[test]
    fn min_cut_values() {
        let (v, _) = min_edge_cut(&generators::cycle(7)).unwrap();
        assert_eq!(v, 2);
        let (v, _) = min_edge_cut(&generators::complete(5)).unwrap();
        assert_eq!(v, 4);
    }

    #[test]
    fn min_cut_bridge_between_cliques() {
        // Two K4s joined by one edge: cut value 1, side is one K4.
        let mut g = MultiGraph::new(8);
        for u in 0..4 {
            for v in u + 1..4 {
                g.add_edge(u, v);
                g.add_edge(u + 4, v + 4);
            }
        }
        g.add_edge(0, 4);
        // Brute force over all 2^8 sides confirms the minimum is 1.
        let mut best = usize::MAX;
        for mask in 1u32..255 {
            let side: Vec<Vertex> = (0..8).filter(|&v| mask >> v & 1 == 1).collect();
            let mut cut = 0;
            for e in g.edge_ids() {
                let (u, v) = g.endpoints(e).unwrap();
                if (mask >> u & 1) != (mask >> v & 1) {
                    cut += 1;
                }
            }
            let _ = side;
            best = best.min(cut);
        }
        assert_eq!(best, 1);
        let (v, side) = min_edge_cut(&g).unwrap();
        assert_eq!(v, 1);
        assert_eq!(side.len(), 4);
        assert!(side == vec![0, 1, 2, 3] || side == vec![4, 5, 6, 7]);
    }

    #[test]
    fn min_cut_errors() {
        let mut g = MultiGraph::new(4);
        g.add_edge(0, 1);
        assert_eq!(min_edge_cut(&g).unwrap_err(), PackingError::Disconnected);
        assert_eq!(
            min_edge_cut(&MultiGraph::new(1)).unwrap_err(),
            PackingError::TooSmall
        );
    }

    #[test]
    fn min_cut_respects_multiplicity() {
        let g = MultiGraph::from_pairs(3, &[(0, 1), (0, 1), (1, 2), (1, 2), (0, 2)]);
        let (v, _) = min_edge_cut(&g).unwrap();
        assert_eq!(v, 3);
    }
}
