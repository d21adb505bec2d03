//! Proper edge colorings: a fan-recoloring algorithm achieving the Vizing
//! bound of `max_degree + 1` colors on any simple graph, and the round-robin
//! coloring of a complete graph with at most `a` colors.

use crate::graph::{EdgeId, SimpleGraph, Vertex};

/// A proper edge coloring: `colors[edge] = color index`, colors `0..color_count`.
#[derive(Clone, Debug)]
pub struct EdgeColoring {
    pub colors: Vec<usize>,
    pub color_count: usize,
}

impl EdgeColoring {
    pub fn color_of(&self, e: EdgeId) -> usize {
        self.colors[e]
    }

    /// No two incident edges share a color.
    pub fn is_proper(&self, g: &SimpleGraph) -> bool {
        for v in g.vertices() {
            let mut seen = vec![false; self.color_count];
            for &e in g.incident(v) {
                let c = self.colors[e];
                if c >= self.color_count || seen[c] {
                    return false;
                }
                seen[c] = true;
            }
        }
        true
    }
}

const UNCOLORED: usize = usize::MAX;

struct FanColorer<'a> {
    g: &'a SimpleGraph,
    palette: usize,
    color: Vec<usize>,
    /// table[v][c] = edge at v colored c, or UNCOLORED.
    table: Vec<Vec<usize>>,
}

impl<'a> FanColorer<'a> {
    fn new(g: &'a SimpleGraph) -> Self {
        let palette = g.max_degree() + 1;
        FanColorer {
            g,
            palette,
            color: vec![UNCOLORED; g.edge_slots()],
            table: vec![vec![UNCOLORED; palette]; g.vertex_slots()],
        }
    }

    fn free_at(&self, v: Vertex, c: usize) -> bool {
        self.table[v][c] == UNCOLORED
    }

    fn smallest_free(&self, v: Vertex) -> usize {
        (0..self.palette)
            .find(|&c| self.free_at(v, c))
            .expect("a palette of size max_degree+1 always has a free color")
    }

    fn uncolor(&mut self, e: EdgeId) {
        let c = self.color[e];
        if c != UNCOLORED {
            let (u, v) = self.g.endpoints(e).unwrap();
            self.table[u][c] = UNCOLORED;
            self.table[v][c] = UNCOLORED;
            self.color[e] = UNCOLORED;
        }
    }

    fn assign(&mut self, e: EdgeId, c: usize) {
        let (u, v) = self.g.endpoints(e).unwrap();
        debug_assert!(self.free_at(u, c) && self.free_at(v, c));
        self.uncolor(e);
        self.color[e] = c;
        self.table[u][c] = e;
        self.table[v][c] = e;
    }

    fn color_edge(&mut self, eid: EdgeId) {
        let (u, v) = self.g.endpoints(eid).unwrap();
        // Shortcut: smallest color free at both endpoints.
        if let Some(c) = (0..self.palette).find(|&c| self.free_at(u, c) && self.free_at(v, c)) {
            self.assign(eid, c);
            return;
        }
        // Maximal fan of u starting at v: each next fan vertex is reached by
        // the u-edge whose color is the smallest free color of the previous
        // fan vertex.
        let mut fan = vec![v];
        let mut in_fan = vec![false; self.g.vertex_slots()];
        in_fan[v] = true;
        loop {
            let last = *fan.last().unwrap();
            let d_last = self.smallest_free(last);
            let e_next = self.table[u][d_last];
            if e_next == UNCOLORED {
                break;
            }
            let (a, b) = self.g.endpoints(e_next).unwrap();
            let x = if a == u { b } else { a };
            if in_fan[x] {
                break;
            }
            fan.push(x);
            in_fan[x] = true;
        }
        let c = self.smallest_free(u);
        let d = self.smallest_free(*fan.last().unwrap());
        if c != d {
            self.invert_path_swapping(u, c, d);
        }
        // Smallest fan prefix whose last vertex has d free; the prefix is
        // still a fan after the inversion (the path can have disturbed at
        // most the edge colors c and d, which no earlier fan edge carries).
        let mut w_idx = UNCOLORED;
        for (i, &x) in fan.iter().enumerate() {
            if i > 0 {
                let e_i = self.g.first_edge_between(u, fan[i]).unwrap();
                if !self.free_at(fan[i - 1], self.color[e_i]) {
                    break; // fan property broken beyond here
                }
            }
            if self.free_at(x, d) {
                w_idx = i;
                break;
            }
        }
        assert_ne!(w_idx, UNCOLORED, "fan recoloring found no rotation point");
        // Rotate the prefix: shift each fan edge's color one step toward v.
        for i in 0..w_idx {
            let e_next = self.g.first_edge_between(u, fan[i + 1]).unwrap();
            let shifted = self.color[e_next];
            self.uncolor(e_next);
            let e_i = if i == 0 {
                eid
            } else {
                self.g.first_edge_between(u, fan[i]).unwrap()
            };
            self.assign(e_i, shifted);
        }
        let e_w = if w_idx == 0 {
            eid
        } else {
            self.g.first_edge_between(u, fan[w_idx]).unwrap()
        };
        self.assign(e_w, d);
    }

    /// Swap colors `c` and `d` along the cd-path starting at `u`.
    fn invert_path_swapping(&mut self, u: Vertex, c: usize, d: usize) {
        let mut cur = u;
        let mut want = d;
        let mut path = Vec::new();
        loop {
            let e = self.table[cur][want];
            if e == UNCOLORED {
                break;
            }
            path.push((e, if want == d { c } else { d }));
            let (a, b) = self.g.endpoints(e).unwrap();
            cur = if a == cur { b } else { a };
            want = if want == d { c } else { d };
        }
        for &(e, _) in &path {
            self.uncolor(e);
        }
        for &(e, new_color) in &path {
            self.assign(e, new_color);
        }
    }
}

/// Proper edge coloring with at most `max_degree + 1` colors via fan
/// rotation and alternating-path inversion. When some color is free at both
/// endpoints the edge takes the smallest such color directly, which keeps
/// class-1 graphs like `K_4` at `max_degree` colors under the deterministic
/// edge order. The returned `color_count` counts the distinct colors
/// actually used (compacted to `0..k`).
pub fn vizing_edge_coloring(g: &SimpleGraph) -> EdgeColoring {
    let mut fc = FanColorer::new(g);
    let edge_ids: Vec<EdgeId> = g.edge_ids().collect();
    for &eid in &edge_ids {
        fc.color_edge(eid);
    }
    let mut used: Vec<usize> = edge_ids.iter().map(|&e| fc.color[e]).collect();
    used.sort_unstable();
    used.dedup();
    let remap: std::collections::HashMap<usize, usize> =
        used.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let mut out = vec![0usize; g.edge_slots()];
    for &e in &edge_ids {
        out[e] = remap[&fc.color[e]];
    }
    EdgeColoring {
        colors: out,
        color_count: used.len(),
    }
}

/// Round-robin proper coloring of `K_a` with at most `a` colors: `a - 1`
/// colors when `a` is even (a 1-factorization), `a` when odd. The edge
/// `(i, j)` of the complete graph built by [`crate::generators::complete`]
/// gets color `(i + j) mod (a - 1)` in the even case with the last vertex
/// spliced in as `2i mod (a - 1)`, and `(i + j) mod a` in the odd case.
pub fn clique_edge_coloring(a: usize) -> EdgeColoring {
    let m = a * a.saturating_sub(1) / 2;
    let mut colors = vec![0usize; m];
    if a <= 1 {
        return EdgeColoring {
            colors,
            color_count: 0,
        };
    }
    let color_count = if a % 2 == 0 { a - 1 } else { a };
    let mut id = 0usize;
    for i in 0..a {
        for j in i + 1..a {
            colors[id] = if a % 2 == 1 {
                (i + j) % a
            } else if j == a - 1 {
                (2 * i) % (a - 1)
            } else {
                (i + j) % (a - 1)
            };
            id += 1;
        }
    }
    EdgeColoring {
        colors,
        color_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators;
    use crate::rng::SplitMix64;

    /// Brute-force: can `g` be properly edge-colored with `k` colors?
    fn colorable_with(g: &SimpleGraph, k: usize) -> bool {
        let edges: Vec<EdgeId> = g.edge_ids().collect();
        fn go(
            g: &SimpleGraph,
            edges: &[EdgeId],
            i: usize,
            k: usize,
            assignment: &mut Vec<usize>,
        ) -> bool {
            if i == edges.len() {
                return true;
            }
            let (u, v) = g.endpoints(edges[i]).unwrap();
            'colors: for c in 0..k {
                for j in 0..i {
                    let (a, b) = g.endpoints(edges[j]).unwrap();
                    if assignment[j] == c && (a == u || b == u || a == v || b == v) {
                        continue 'colors;
                    }
                }
                assignment[i] = c;
                if go(g, edges, i + 1, k, assignment) {
                    return true;
                }
            }
            false
        }
        go(g, &edges, 0, k, &mut vec![0; edges.len()])
    }

    #[test]
    fn c5_needs_three_colors() {
        let g = generators::cycle(5);
        let col = vizing_edge_coloring(&g);
        assert!(col.is_proper(&g));
        assert_eq!(col.color_count, 3);
    }

    #[test]
    fn k4_gets_three_colors() {
        // Brute force confirms K4 is 3-edge-colorable and our deterministic
        // order achieves it.
        let g = generators::complete_simple(4);
        assert!(colorable_with(&g, 3));
        assert!(!colorable_with(&g, 2));
        let col = vizing_edge_coloring(&g);
        assert!(col.is_proper(&g));
        assert_eq!(col.color_count, 3);
    }

    #[test]
    fn star_uses_delta_colors() {
        let g = generators::star(5);
        let col = vizing_edge_coloring(&g);
        assert!(col.is_proper(&g));
        assert_eq!(col.color_count, 5);
    }

    #[test]
    fn vizing_bound_on_random_graphs() {
        let mut rng = SplitMix64::new(2024);
        for _ in 0..40 {
            let n = 5 + (rng.next_below(10) as usize);
            let g = generators::gnp(n, 1 + rng.next_below(9), 10, rng.next_u64());
            let col = vizing_edge_coloring(&g);
            assert!(col.is_proper(&g), "improper coloring on n={n}");
            assert!(
                col.color_count <= g.max_degree() + 1,
                "too many colors: {} > {} + 1",
                col.color_count,
                g.max_degree()
            );
        }
    }

    #[test]
    fn clique_coloring_counts() {
        // a=3: three colors, one edge each.
        let c3 = clique_edge_coloring(3);
        assert_eq!(c3.color_count, 3);
        let g3 = generators::complete_simple(3);
        assert!(c3.is_proper(&g3));
        let mut per_color = vec![0; 3];
        for e in g3.edge_ids() {
            per_color[c3.color_of(e)] += 1;
        }
        assert_eq!(per_color, vec![1, 1, 1]);

        // a=4: a 1-factorization with 3 colors.
        let c4 = clique_edge_coloring(4);
        assert_eq!(c4.color_count, 3);
        assert!(c4.is_proper(&generators::complete_simple(4)));

        // a=1: zero colors.
        assert_eq!(clique_edge_coloring(1).color_count, 0);
    }

    #[test]
    fn clique_coloring_proper_for_many_sizes() {
        for a in 2..=20 {
            let col = clique_edge_coloring(a);
            let g = generators::complete_simple(a);
            assert!(col.is_proper(&g), "improper for a={a}");
            assert!(col.color_count <= a);
        }
    }
}
