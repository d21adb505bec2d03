//! Exhaustive ground truth on tiny instances: brute-force immersion search,
//! 1-immersion search, and minimum-degree forcing scans.
//!
//! The general search enumerates branch sets in lexicographic order. Within
//! a branch set, every adjacent branch pair is forced to use a direct edge
//! as its path: for plain immersions this loses nothing (an immersion using
//! the edge elsewhere can always be rerouted), and for strong immersions an
//! edge between two branch vertices cannot appear inside any other path at
//! all. Only the non-adjacent pairs are then routed, by depth-first
//! edge-disjoint path packing over an edge bitmask with failure caching.

use crate::cert::{verify_immersion, ImmersionCertificate, PathEntry};
use crate::graph::{EdgeId, MultiGraph, SimpleGraph, Vertex};
use std::collections::{HashMap, HashSet};
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance exceeds the oracle budget ({vertices} vertices, {edges} edges)")]
    BudgetExceeded { vertices: usize, edges: usize },
}

/// Hard instance-size limits. The edge count must stay within the 256-bit
/// usage mask.
#[derive(Clone, Copy, Debug)]
pub struct OracleBudget {
    pub max_vertices: usize,
    pub max_edges: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        OracleBudget {
            max_vertices: 14,
            max_edges: 60,
        }
    }
}

impl OracleBudget {
    /// Looser budget for the length-2-paths-only search.
    pub fn one_immersion() -> Self {
        OracleBudget {
            max_vertices: 20,
            max_edges: 256,
        }
    }
}

type Mask = [u64; 4];

fn mask_get(m: &Mask, i: usize) -> bool {
    m[i / 64] >> (i % 64) & 1 == 1
}

fn mask_set(m: &mut Mask, i: usize) {
    m[i / 64] |= 1 << (i % 64);
}

fn mask_clear(m: &mut Mask, i: usize) {
    m[i / 64] &= !(1 << (i % 64));
}

struct SearchCtx<'a> {
    g: &'a MultiGraph,
    branch: &'a [Vertex],
    in_branch: Vec<bool>,
    /// Non-adjacent pattern pairs to route, in fixed search order.
    pairs: Vec<(usize, usize)>,
    require_strong: bool,
    used: Mask,
    failed: HashSet<(usize, Mask)>,
    found_paths: Vec<Vec<EdgeId>>,
    incident_sorted: &'a [Vec<EdgeId>],
}

impl<'a> SearchCtx<'a> {
    fn solve(&mut self, pi: usize) -> bool {
        if pi == self.pairs.len() {
            return true;
        }
        if self.failed.contains(&(pi, self.used)) {
            return false;
        }
        let (i, j) = self.pairs[pi];
        let (a, b) = (self.branch[i], self.branch[j]);
        let mut visited = vec![false; self.g.vertex_slots()];
        visited[a] = true;
        let mut path = Vec::new();
        if self.dfs_paths(pi, a, b, &mut visited, &mut path) {
            return true;
        }
        self.failed.insert((pi, self.used));
        false
    }

    fn dfs_paths(
        &mut self,
        pi: usize,
        cur: Vertex,
        target: Vertex,
        visited: &mut Vec<bool>,
        path: &mut Vec<EdgeId>,
    ) -> bool {
        let incident = &self.incident_sorted[cur];
        for idx in 0..incident.len() {
            let e = incident[idx];
            if mask_get(&self.used, e) {
                continue;
            }
            let (x, y) = self.g.endpoints(e).unwrap();
            let next = if x == cur { y } else { x };
            if next == cur || visited[next] {
                continue; // loop edge or revisit
            }
            if next != target && self.require_strong && self.in_branch[next] {
                continue;
            }
            mask_set(&mut self.used, e);
            path.push(e);
            if next == target {
                self.found_paths[pi] = path.clone();
                if self.solve(pi + 1) {
                    return true;
                }
            } else {
                visited[next] = true;
                if self.dfs_paths(pi, next, target, visited, path) {
                    return true;
                }
                visited[next] = false;
            }
            path.pop();
            mask_clear(&mut self.used, e);
        }
        false
    }
}

fn check_budget(g: &MultiGraph, budget: &OracleBudget) -> Result<(), OracleError> {
    if g.n() > budget.max_vertices || g.m() > budget.max_edges || g.edge_slots() > 256 {
        return Err(OracleError::BudgetExceeded {
            vertices: g.n(),
            edges: g.m(),
        });
    }
    Ok(())
}

/// Decides whether `g` contains a (strong) immersion of `K_t`, returning a
/// certificate or `None` after exhausting all branch sets.
pub fn brute_force_immersion(
    g: &MultiGraph,
    t: usize,
    require_strong: bool,
    budget: &OracleBudget,
) -> Result<Option<ImmersionCertificate>, OracleError> {
    check_budget(g, budget)?;
    if t == 0 {
        return Ok(Some(
            ImmersionCertificate::build(g, Vec::new(), Vec::new()).unwrap(),
        ));
    }
    let live: Vec<Vertex> = g.vertices().collect();
    if t > live.len() {
        return Ok(None);
    }
    if t == 1 {
        return Ok(Some(
            ImmersionCertificate::build(g, vec![live[0]], Vec::new()).unwrap(),
        ));
    }
    let incident_sorted: Vec<Vec<EdgeId>> = (0..g.vertex_slots())
        .map(|v| {
            if g.is_live_vertex(v) {
                let mut inc = g.incident(v).to_vec();
                inc.sort_unstable();
                inc
            } else {
                Vec::new()
            }
        })
        .collect();
    // Distinct-neighbor codegrees for pair ordering.
    let codegree = |u: Vertex, v: Vertex| -> usize {
        let nu = g.neighbors(u);
        let nv: HashSet<Vertex> = g.neighbors(v).into_iter().collect();
        nu.iter().filter(|w| nv.contains(w)).count()
    };

    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        let branch: Vec<Vertex> = combo.iter().map(|&i| live[i]).collect();
        if let Some(cert) = try_branch_set(
            g,
            &branch,
            require_strong,
            &incident_sorted,
            &codegree,
        ) {
            return Ok(Some(cert));
        }
        // next lexicographic combination
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if combo[i] + (t - i) <= live.len() {
                combo[i] += 1;
                for j in i + 1..t {
                    combo[j] = combo[j - 1] + 1;
                }
                if combo[t - 1] < live.len() {
                    break;
                }
            }
        }
    }
}

fn try_branch_set(
    g: &MultiGraph,
    branch: &[Vertex],
    require_strong: bool,
    incident_sorted: &[Vec<EdgeId>],
    codegree: &dyn Fn(Vertex, Vertex) -> usize,
) -> Option<ImmersionCertificate> {
    let t = branch.len();
    let mut used: Mask = [0; 4];
    let mut direct: HashMap<(usize, usize), EdgeId> = HashMap::new();
    let mut open: Vec<(usize, usize)> = Vec::new();
    for i in 0..t {
        for j in i + 1..t {
            match g.first_edge_between(branch[i], branch[j]) {
                Some(e) => {
                    mask_set(&mut used, e);
                    direct.insert((i, j), e);
                }
                None => open.push((i, j)),
            }
        }
    }
    // Hardest first: decreasing codegree, ties by pair index.
    open.sort_by_key(|&(i, j)| (std::cmp::Reverse(codegree(branch[i], branch[j])), i, j));
    let mut in_branch = vec![false; g.vertex_slots()];
    for &v in branch {
        in_branch[v] = true;
    }
    let mut ctx = SearchCtx {
        g,
        branch,
        in_branch,
        pairs: open.clone(),
        require_strong,
        used,
        failed: HashSet::new(),
        found_paths: vec![Vec::new(); open.len()],
        incident_sorted,
    };
    if !ctx.solve(0) {
        return None;
    }
    let mut paths: Vec<PathEntry> = direct
        .into_iter()
        .map(|(pair, e)| PathEntry {
            pair,
            edges: vec![e],
        })
        .collect();
    for (pi, &pair) in open.iter().enumerate() {
        paths.push(PathEntry {
            pair,
            edges: ctx.found_paths[pi].clone(),
        });
    }
    let cert = ImmersionCertificate::build(g, branch.to_vec(), paths)
        .expect("search result must form a valid certificate");
    debug_assert!(verify_immersion(g, &cert).unwrap().valid);
    (!require_strong || cert.strong).then_some(cert)
}

/// Decides whether `g` contains a 1-immersion of `K_t` (every path exactly
/// two edges). With `require_strong`, middles must avoid the branch set.
pub fn brute_force_one_immersion(
    g: &MultiGraph,
    t: usize,
    require_strong: bool,
    budget: &OracleBudget,
) -> Result<Option<ImmersionCertificate>, OracleError> {
    check_budget(g, budget)?;
    if t == 0 {
        return Ok(Some(
            ImmersionCertificate::build(g, Vec::new(), Vec::new()).unwrap(),
        ));
    }
    let live: Vec<Vertex> = g.vertices().collect();
    if t > live.len() {
        return Ok(None);
    }
    if t == 1 {
        return Ok(Some(
            ImmersionCertificate::build(g, vec![live[0]], Vec::new()).unwrap(),
        ));
    }
    let mut combo: Vec<usize> = (0..t).collect();
    loop {
        let branch: Vec<Vertex> = combo.iter().map(|&i| live[i]).collect();
        if let Some(cert) = try_one_immersion_branch(g, &branch, require_strong) {
            return Ok(Some(cert));
        }
        let mut i = t;
        loop {
            if i == 0 {
                return Ok(None);
            }
            i -= 1;
            if combo[i] + (t - i) <= live.len() {
                combo[i] += 1;
                for j in i + 1..t {
                    combo[j] = combo[j - 1] + 1;
                }
                if combo[t - 1] < live.len() {
                    break;
                }
            }
        }
    }
}

fn try_one_immersion_branch(
    g: &MultiGraph,
    branch: &[Vertex],
    require_strong: bool,
) -> Option<ImmersionCertificate> {
    let t = branch.len();
    let mut in_branch = vec![false; g.vertex_slots()];
    for &v in branch {
        in_branch[v] = true;
    }
    // Candidate middles per pair: z with edges to both endpoints.
    let pairs: Vec<(usize, usize)> = (0..t)
        .flat_map(|i| (i + 1..t).map(move |j| (i, j)))
        .collect();
    let mut candidates: Vec<Vec<Vertex>> = Vec::with_capacity(pairs.len());
    for &(i, j) in &pairs {
        let cand: Vec<Vertex> = g
            .vertices()
            .filter(|&z| {
                z != branch[i]
                    && z != branch[j]
                    && !(require_strong && in_branch[z])
                    && g.is_adjacent(z, branch[i])
                    && g.is_adjacent(z, branch[j])
            })
            .collect();
        candidates.push(cand);
    }
    // Most-constrained pair first.
    let mut order: Vec<usize> = (0..pairs.len()).collect();
    order.sort_by_key(|&p| (candidates[p].len(), p));

    fn assign(
        g: &MultiGraph,
        branch: &[Vertex],
        pairs: &[(usize, usize)],
        candidates: &[Vec<Vertex>],
        order: &[usize],
        k: usize,
        used: &mut Mask,
        chosen: &mut Vec<(usize, EdgeId, EdgeId)>,
        failed: &mut HashSet<(usize, Mask)>,
    ) -> bool {
        if k == order.len() {
            return true;
        }
        if failed.contains(&(k, *used)) {
            return false;
        }
        let p = order[k];
        let (i, j) = pairs[p];
        for &z in &candidates[p] {
            let free1 = g
                .edges_between(branch[i], z)
                .into_iter()
                .find(|&e| !mask_get(used, e));
            let free2 = g
                .edges_between(z, branch[j])
                .into_iter()
                .find(|&e| !mask_get(used, e));
            if let (Some(e1), Some(e2)) = (free1, free2) {
                mask_set(used, e1);
                mask_set(used, e2);
                chosen.push((p, e1, e2));
                if assign(g, branch, pairs, candidates, order, k + 1, used, chosen, failed) {
                    return true;
                }
                chosen.pop();
                mask_clear(used, e1);
                mask_clear(used, e2);
            }
        }
        failed.insert((k, *used));
        false
    }

    let mut used: Mask = [0; 4];
    let mut chosen = Vec::new();
    let mut failed = HashSet::new();
    if !assign(
        g, branch, &pairs, &candidates, &order, 0, &mut used, &mut chosen, &mut failed,
    ) {
        return None;
    }
    let mut paths: Vec<PathEntry> = chosen
        .into_iter()
        .map(|(p, e1, e2)| PathEntry {
            pair: pairs[p],
            edges: vec![e1, e2],
        })
        .collect();
    paths.sort_by_key(|p| p.pair);
    let cert = ImmersionCertificate::build(g, branch.to_vec(), paths)
        .expect("one-immersion assignment must be valid");
    debug_assert_eq!(cert.k, Some(1));
    Some(cert)
}

/// All simple graphs on exactly `n` labeled-then-canonicalized vertices, one
/// representative per isomorphism class. Canonical form: the minimum
/// adjacency bitmask over all vertex permutations, built incrementally from
/// the classes on `n - 1` vertices.
pub fn enumerate_canonical_graphs(n: usize) -> Vec<SimpleGraph> {
    assert!(n <= 8, "canonical enumeration supported up to 8 vertices");
    let mut masks: Vec<u64> = vec![0]; // the 1-vertex graph
    for size in 2..=n {
        let perms = permutations(size);
        let mut next: HashSet<u64> = HashSet::new();
        for &base in &masks {
            // Pair indices depend on the vertex count: re-encode the base
            // graph's bits from (size-1)-indexing to size-indexing.
            let mut rebased = 0u64;
            for i in 0..size - 1 {
                for j in i + 1..size - 1 {
                    if base >> pair_index(i, j, size - 1) & 1 == 1 {
                        rebased |= 1 << pair_index(i, j, size);
                    }
                }
            }
            for nb in 0u64..(1 << (size - 1)) {
                // Attach vertex size-1 with neighborhood nb.
                let mut mask = rebased;
                for v in 0..size - 1 {
                    if nb >> v & 1 == 1 {
                        mask |= 1 << pair_index(v, size - 1, size);
                    }
                }
                next.insert(canonical_mask(mask, size, &perms));
            }
        }
        let mut sorted: Vec<u64> = next.into_iter().collect();
        sorted.sort_unstable();
        masks = sorted;
    }
    masks
        .into_iter()
        .map(|mask| {
            let mut g = SimpleGraph::new(n);
            for i in 0..n {
                for j in i + 1..n {
                    if mask >> pair_index(i, j, n) & 1 == 1 {
                        g.add_edge(i, j).unwrap();
                    }
                }
            }
            g
        })
        .collect()
}

fn pair_index(i: usize, j: usize, n: usize) -> usize {
    debug_assert!(i < j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut items: Vec<usize> = (0..n).collect();
    heap_permute(&mut items, n, &mut out);
    out
}

fn heap_permute(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == 1 {
        out.push(items.clone());
        return;
    }
    for i in 0..k {
        heap_permute(items, k - 1, out);
        if k % 2 == 0 {
            items.swap(i, k - 1);
        } else {
            items.swap(0, k - 1);
        }
    }
}

fn canonical_mask(mask: u64, n: usize, perms: &[Vec<usize>]) -> u64 {
    let mut best = u64::MAX;
    for perm in perms {
        let mut out = 0u64;
        for i in 0..n {
            for j in i + 1..n {
                if mask >> pair_index(i, j, n) & 1 == 1 {
                    let (a, b) = (perm[i].min(perm[j]), perm[i].max(perm[j]));
                    out |= 1 << pair_index(a, b, n);
                }
            }
        }
        best = best.min(out);
        if best == 0 {
            break;
        }
    }
    best
}

/// How the forcing scan picks its instances.
#[derive(Clone, Debug)]
pub enum ScanMode {
    /// Every isomorphism class with the required minimum degree.
    Exhaustive,
    /// Seeded random graphs conditioned on the minimum degree.
    Sample { count: usize, seed: u64 },
}

#[derive(Clone, Debug)]
pub struct ScanReport {
    pub t: usize,
    pub n_max: usize,
    pub graphs_checked: usize,
    /// Edge lists of graphs with `min degree >= t - 1` but no `K_t`
    /// immersion. Empty means the bound held everywhere scanned.
    pub counterexamples: Vec<(usize, Vec<(Vertex, Vertex)>)>,
}

/// Scans simple graphs of minimum degree `t - 1` for a `K_t` immersion.
pub fn min_degree_forcing_scan(
    t: usize,
    n_max: usize,
    mode: ScanMode,
    budget: &OracleBudget,
) -> Result<ScanReport, OracleError> {
    assert!(t >= 2 && t <= 4, "scan supports t in 2..=4");
    let mut checked = 0usize;
    let mut counterexamples = Vec::new();
    let consider = |g: &SimpleGraph,
                        checked: &mut usize,
                        counterexamples: &mut Vec<(usize, Vec<(Vertex, Vertex)>)>|
     -> Result<(), OracleError> {
        if g.n() == 0 || g.min_degree() < t - 1 {
            return Ok(());
        }
        *checked += 1;
        if brute_force_immersion(g, t, false, budget)?.is_none() {
            let edges = g.edge_ids().map(|e| g.endpoints(e).unwrap()).collect();
            counterexamples.push((g.n(), edges));
        }
        Ok(())
    };
    match mode {
        ScanMode::Exhaustive => {
            assert!(n_max <= 8, "exhaustive scan supported up to 8 vertices");
            for n in t..=n_max {
                for g in enumerate_canonical_graphs(n) {
                    consider(&g, &mut checked, &mut counterexamples)?;
                }
            }
        }
        ScanMode::Sample { count, seed } => {
            let mut rng = crate::rng::SplitMix64::new(seed);
            let mut produced = 0usize;
            let mut attempts = 0usize;
            while produced < count && attempts < count * 200 {
                attempts += 1;
                let g = crate::generators::gnp(n_max, 1 + rng.next_below(2), 2, rng.next_u64());
                if g.min_degree() >= t - 1 {
                    produced += 1;
                    consider(&g, &mut checked, &mut counterexamples)?;
                }
            }
        }
    }
    Ok(ScanReport {
        t,
        n_max,
        graphs_checked: checked,
        counterexamples,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;

    #[test]
    fn c5_contains_k3_immersion() {
        let g = generators::cycle(5);
        let cert = brute_force_immersion(&g, 3, false, &OracleBudget::default())
            .unwrap()
            .expect("C5 immerses K3");
        assert!(verify_immersion(&g, &cert).unwrap().valid);
        // Also findable strongly (branch {0,2,4}: paths 0-1-2, 2-3-4, 4-0).
        let strong = brute_force_immersion(&g, 3, true, &OracleBudget::default())
            .unwrap()
            .expect("C5 immerses K3 strongly");
        assert!(strong.strong);
    }

    #[test]
    fn star_has_no_k3_immersion() {
        // K_{1,3}: 3 edges cannot host three edge-disjoint paths.
        let g = generators::star(3);
        assert!(brute_force_immersion(&g, 3, false, &OracleBudget::default())
            .unwrap()
            .is_none());
    }

    #[test]
    fn budget_is_enforced() {
        let g = generators::complete(15);
        assert!(matches!(
            brute_force_immersion(&g, 3, false, &OracleBudget::default()),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn one_immersion_examples() {
        // K_{2,3} with the 2-side as branch: length-2 paths through the
        // 3-side exist.
        let g = generators::complete_bipartite(2, 3);
        let cert = brute_force_one_immersion(&g, 2, true, &OracleBudget::one_immersion())
            .unwrap()
            .expect("K_{2,3} has a strong 1-immersion of K_2");
        assert_eq!(cert.k, Some(1));

        // K_3 cannot route all three pairs by length-2 paths.
        let k3 = generators::complete(3);
        assert!(
            brute_force_one_immersion(&k3, 3, false, &OracleBudget::one_immersion())
                .unwrap()
                .is_none()
        );

        // K_5: a (non-strong) 1-immersion of K_3 exists; a strong one does
        // not (three pairwise-sharing pairs need three distinct outside
        // middles, but only two exist).
        let k5 = generators::complete(5);
        let plain = brute_force_one_immersion(&k5, 3, false, &OracleBudget::one_immersion())
            .unwrap();
        assert!(plain.is_some());
        let strong = brute_force_one_immersion(&k5, 3, true, &OracleBudget::one_immersion())
            .unwrap();
        assert!(strong.is_none());
    }

    #[test]
    fn canonical_counts_match_oeis() {
        // Numbers of graphs on n unlabeled vertices: 1, 2, 4, 11, 34, 156, 1044.
        assert_eq!(enumerate_canonical_graphs(1).len(), 1);
        assert_eq!(enumerate_canonical_graphs(2).len(), 2);
        assert_eq!(enumerate_canonical_graphs(3).len(), 4);
        assert_eq!(enumerate_canonical_graphs(4).len(), 11);
        assert_eq!(enumerate_canonical_graphs(5).len(), 34);
        assert_eq!(enumerate_canonical_graphs(6).len(), 156);
    }

    #[test]
    fn oracle_is_isomorphism_invariant() {
        // Relabeling must not change the decision.
        let g = generators::petersen();
        let budget = OracleBudget::default();
        let base = brute_force_immersion(&g, 4, false, &budget).unwrap().is_some();
        let perm: Vec<Vertex> = vec![3, 1, 4, 0, 2, 8, 6, 9, 5, 7];
        let mut h = SimpleGraph::new(10);
        for e in g.edge_ids() {
            let (u, v) = g.endpoints(e).unwrap();
            h.add_edge(perm[u], perm[v]).unwrap();
        }
        let relabeled = brute_force_immersion(&h, 4, false, &budget).unwrap().is_some();
        assert_eq!(base, relabeled);
    }

    #[test]
    fn forcing_scan_t2_trivial() {
        // Every graph of min degree 1 contains a K_2 immersion.
        let report = min_degree_forcing_scan(
            2,
            5,
            ScanMode::Exhaustive,
            &OracleBudget::default(),
        )
        .unwrap();
        assert!(report.graphs_checked > 0);
        assert!(report.counterexamples.is_empty());
    }
}
