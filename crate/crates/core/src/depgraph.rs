//! Dependency graphs between attributes and minimum spanning arborescences.

use std::collections::BTreeSet;

use crate::bitmap::Bitmap;
use crate::dataset::ItemId;
use crate::error::{Error, Result};
use crate::mdlcost::Bits;

/// Edge `(t, s)` means the tree for attribute `t` tests attribute `s`, so `s`
/// must be transmitted first. Kept acyclic.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DependencyGraph {
    out: Vec<Bitmap>,
}

impl DependencyGraph {
    pub fn new(n_attrs: usize) -> Self {
        Self { out: vec![Bitmap::empty(n_attrs); n_attrs] }
    }

    pub fn n_vertices(&self) -> usize {
        self.out.len()
    }

    pub fn has_edge(&self, from: ItemId, to: ItemId) -> bool {
        self.out[from].contains(to)
    }

    pub fn edges(&self) -> Vec<(ItemId, ItemId)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(from, succ)| succ.iter().map(move |to| (from, to)))
            .collect()
    }

    pub fn successors(&self, v: ItemId) -> impl Iterator<Item = ItemId> + '_ {
        self.out[v].iter()
    }

    /// Is `target` reachable from `start` (a vertex reaches itself)?
    pub fn reaches(&self, start: ItemId, target: ItemId) -> bool {
        let mut seen = Bitmap::empty(self.n_vertices());
        let mut stack = vec![start];
        seen.insert(start);
        while let Some(v) = stack.pop() {
            if v == target {
                return true;
            }
            for w in self.out[v].iter() {
                if !seen.contains(w) {
                    seen.insert(w);
                    stack.push(w);
                }
            }
        }
        false
    }

    /// Would the graph stay acyclic after adding `from -> to`?
    pub fn would_be_acyclic(&self, from: ItemId, to: ItemId) -> bool {
        from != to && !self.reaches(to, from)
    }

    /// Adds an edge; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, from: ItemId, to: ItemId) -> Result<()> {
        if !self.would_be_acyclic(from, to) {
            return Err(Error::Cycle(from, to));
        }
        self.out[from].insert(to);
        Ok(())
    }

    /// A transmission order: every vertex comes after all of its successors.
    /// Among ready vertices the smallest index goes first.
    pub fn transmission_order(&self) -> Option<Vec<ItemId>> {
        let n = self.n_vertices();
        let mut pending: Vec<usize> = self.out.iter().map(Bitmap::count).collect();
        let mut preds: Vec<Vec<ItemId>> = vec![Vec::new(); n];
        for (from, to) in self.edges() {
            preds[to].push(from);
        }
        let mut ready: BTreeSet<ItemId> = (0..n).filter(|&v| pending[v] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(v) = ready.pop_first() {
            order.push(v);
            for &p in &preds[v] {
                pending[p] -= 1;
                if pending[p] == 0 {
                    ready.insert(p);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    pub fn is_acyclic(&self) -> bool {
        self.transmission_order().is_some()
    }

    /// Graphviz text; edges point from a tree's target to the attributes it tests.
    pub fn to_dot(&self, names: &[String]) -> String {
        let name = |v: usize| names.get(v).cloned().unwrap_or_else(|| v.to_string());
        let mut out = String::from("digraph dependencies {\n");
        for v in 0..self.n_vertices() {
            out.push_str(&format!("  n{v} [label={:?}];\n", name(v)));
        }
        for (from, to) in self.edges() {
            out.push_str(&format!("  n{from} -> n{to};\n"));
        }
        out.push_str("}\n");
        out
    }
}

/// Directed graph over `v_0..v_K`, `v_0` being the sink.
#[derive(Clone, Debug, Default)]
pub struct WeightedDigraph {
    n_vertices: usize,
    edges: Vec<(usize, usize, Bits)>,
}

impl WeightedDigraph {
    pub fn new(n_vertices: usize) -> Self {
        Self { n_vertices, edges: Vec::new() }
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn add_edge(&mut self, from: usize, to: usize, weight: Bits) {
        assert!(from < self.n_vertices && to < self.n_vertices, "edge ({from}, {to}) out of range");
        assert!(weight.is_finite(), "edge weight must be finite");
        if from != 0 && from != to {
            self.edges.push((from, to, weight));
        }
    }

    pub fn edges(&self) -> &[(usize, usize, Bits)] {
        &self.edges
    }
}

/// Spanning arborescence toward the sink: `parent[v]` is the head of the
/// single edge leaving `v` (`parent[0]` is unused and set to 0).
#[derive(Clone, Debug, PartialEq)]
pub struct Arborescence {
    pub parent: Vec<usize>,
    pub weight: Bits,
}

impl Arborescence {
    /// Vertices on the path from `v` to the sink, excluding `v` and the sink.
    pub fn path_to_sink(&self, v: usize) -> Vec<usize> {
        let mut out = Vec::new();
        let mut cur = self.parent[v];
        let mut guard = 0;
        while cur != 0 {
            out.push(cur);
            cur = self.parent[cur];
            guard += 1;
            assert!(guard <= self.parent.len(), "arborescence contains a cycle");
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        (1..self.parent.len()).all(|v| {
            let mut cur = v;
            for _ in 0..self.parent.len() {
                if cur == 0 {
                    return true;
                }
                cur = self.parent[cur];
            }
            cur == 0
        })
    }
}

/// Minimum-weight spanning arborescence with every path ending at `v_0`.
///
/// Chu-Liu/Edmonds on the reversed graph. Ties are broken toward the edge
/// with the lexicographically smallest `(tail, head)` pair.
///
/// Panics if some vertex cannot reach the sink.
pub fn dmst(h: &WeightedDigraph) -> Arborescence {
    let n = h.n_vertices();
    // Reverse: an edge tail -> head in H becomes head -> tail, so the problem
    // is the classic minimum arborescence rooted at 0 where every other
    // vertex selects one incoming edge.
    let mut edges: Vec<(usize, usize, Bits)> = h.edges().to_vec();
    edges.sort_by(|a, b| (a.0, a.1).cmp(&(b.0, b.1)));
    let reversed: Vec<Edge> = edges
        .iter()
        .enumerate()
        .map(|(id, &(tail, head, w))| Edge { from: head, to: tail, weight: w, id })
        .collect();
    let chosen = edmonds(n, 0, &reversed);
    let mut parent = vec![0; n];
    let mut weight = 0.0;
    for id in chosen {
        let (tail, head, w) = edges[id];
        parent[tail] = head;
        weight += w;
    }
    Arborescence { parent, weight }
}

#[derive(Clone, Copy, Debug)]
struct Edge {
    from: usize,
    to: usize,
    weight: Bits,
    id: usize,
}

/// Returns the ids of the chosen edges, one entering each non-root vertex.
fn edmonds(n: usize, root: usize, edges: &[Edge]) -> Vec<usize> {
    // Cheapest incoming edge per vertex; edges are visited in id order so the
    // first of several equal weights wins.
    let mut best: Vec<Option<Edge>> = vec![None; n];
    for e in edges {
        if e.to == root || e.from == e.to {
            continue;
        }
        match best[e.to] {
            Some(b) if b.weight <= e.weight => {}
            _ => best[e.to] = Some(e.clone()),
        }
    }
    for (v, b) in best.iter().enumerate() {
        assert!(v == root || b.is_some(), "vertex {v} cannot reach the sink");
    }

    // Find cycles among the selected edges.
    let mut cycle_of = vec![usize::MAX; n];
    let mut visit = vec![usize::MAX; n];
    let mut n_cycles = 0;
    for start in 0..n {
        let mut v = start;
        while v != root && visit[v] == usize::MAX && cycle_of[v] == usize::MAX {
            visit[v] = start;
            v = best[v].unwrap().from;
        }
        if v != root && visit[v] == start && cycle_of[v] == usize::MAX {
            let mut u = v;
            loop {
                cycle_of[u] = n_cycles;
                u = best[u].unwrap().from;
                if u == v {
                    break;
                }
            }
            n_cycles += 1;
        }
    }
    if n_cycles == 0 {
        return best.iter().flatten().map(|e| e.id).collect();
    }

    // Contract every cycle into one vertex.
    let mut comp = vec![usize::MAX; n];
    let mut next = n_cycles;
    for v in 0..n {
        comp[v] = if cycle_of[v] != usize::MAX {
            cycle_of[v]
        } else {
            next += 1;
            next - 1
        };
    }
    let new_root = comp[root];
    let mut contracted = Vec::new();
    // For each contracted edge remember the original edge it stands for.
    let mut origin = Vec::new();
    for e in edges {
        let (cu, cv) = (comp[e.from], comp[e.to]);
        if cu == cv {
            continue;
        }
        let w = if cycle_of[e.to] != usize::MAX { e.weight - best[e.to].unwrap().weight } else { e.weight };
        contracted.push(Edge { from: cu, to: cv, weight: w, id: origin.len() });
        origin.push(*e);
    }
    let sub = edmonds(next, new_root, &contracted);

    let mut result = Vec::new();
    let mut entered = vec![false; n_cycles];
    for cid in sub {
        let e = origin[cid];
        result.push(e.id);
        if cycle_of[e.to] != usize::MAX {
            entered[cycle_of[e.to]] = true;
            // The cycle edge into e.to is replaced by e.
            for v in 0..n {
                if cycle_of[v] == cycle_of[e.to] && v != e.to {
                    result.push(best[v].unwrap().id);
                }
            }
        }
    }
    debug_assert!(entered.iter().all(|&x| x), "every cycle must be entered once");
    result
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    #[test]
    fn acyclicity_examples() {
        // Acyclic graph: c tests a and b, b tests a.
        let mut g = DependencyGraph::new(3);
        for (f, t) in [(B, A), (C, A), (C, B)] {
            g.add_edge(f, t).unwrap();
        }
        assert!(!g.would_be_acyclic(A, C));
        for (f, t) in [(B, A), (C, A), (C, B)] {
            assert!(g.would_be_acyclic(f, t));
        }
        assert!(DependencyGraph::new(3).would_be_acyclic(A, B));
        assert!(!DependencyGraph::new(3).would_be_acyclic(B, B));
        assert!(matches!(g.add_edge(A, C), Err(Error::Cycle(A, C))));
    }

    #[test]
    fn transmission_order_puts_sources_first() {
        let mut g = DependencyGraph::new(3);
        g.add_edge(A, C).unwrap();
        g.add_edge(C, B).unwrap();
        assert_eq!(g.transmission_order().unwrap(), vec![B, C, A]);
    }

    #[test]
    fn dot_lists_edges() {
        let mut g = DependencyGraph::new(2);
        g.add_edge(1, 0).unwrap();
        let dot = g.to_dot(&["x".into(), "y".into()]);
        assert!(dot.contains("n1 -> n0;"));
        assert!(dot.contains("label=\"y\""));
    }

    #[test]
    fn dmst_three_vertices() {
        let mut h = WeightedDigraph::new(3);
        h.add_edge(1, 0, 10.0);
        h.add_edge(2, 0, 2.0);
        h.add_edge(1, 2, 3.0);
        let u = dmst(&h);
        assert_eq!(u.parent, vec![0, 2, 0]);
        assert_eq!(u.weight, 5.0);
    }

    #[test]
    fn dmst_only_sink_edges() {
        let mut h = WeightedDigraph::new(4);
        for v in 1..4 {
            h.add_edge(v, 0, v as f64);
        }
        let u = dmst(&h);
        assert_eq!(u.parent, vec![0, 0, 0, 0]);
        assert_eq!(u.weight, 6.0);
    }

    #[test]
    fn dmst_breaks_cycles() {
        // 1 and 2 prefer each other; the cycle must be broken at the cheaper exit.
        let mut h = WeightedDigraph::new(3);
        h.add_edge(1, 0, 10.0);
        h.add_edge(2, 0, 12.0);
        h.add_edge(1, 2, 1.0);
        h.add_edge(2, 1, 1.0);
        let u = dmst(&h);
        assert_eq!(u.parent, vec![0, 0, 1]);
        assert_eq!(u.weight, 11.0);
        assert!(u.is_valid());
    }

    #[test]
    fn dmst_tie_prefers_smallest_head() {
        let mut h = WeightedDigraph::new(3);
        h.add_edge(1, 0, 4.0);
        h.add_edge(2, 0, 1.0);
        h.add_edge(1, 2, 3.0);
        h.add_edge(2, 1, 5.0);
        // Edge (1,2) at 3 beats (1,0) at 4.
        assert_eq!(dmst(&h).parent, vec![0, 2, 0]);
        let mut h = WeightedDigraph::new(3);
        h.add_edge(1, 0, 3.0);
        h.add_edge(2, 0, 1.0);
        h.add_edge(1, 2, 3.0);
        assert_eq!(dmst(&h).parent, vec![0, 0, 0]);
    }

    fn brute_force_acyclic(n: usize, edges: &[(usize, usize, bool)]) -> DependencyGraph {
        let mut g = DependencyGraph::new(n);
        for &(f, t, keep) in edges {
            if keep && f != t && g.would_be_acyclic(f, t) {
                g.add_edge(f, t).unwrap();
            }
        }
        g
    }

    proptest! {
        #[test]
        fn would_be_acyclic_matches_materialized_check(
            n in 2usize..10,
            raw in prop::collection::vec((0usize..10, 0usize..10, any::<bool>()), 0..40),
        ) {
            let edges: Vec<_> = raw.into_iter().map(|(f, t, k)| (f % n, t % n, k)).collect();
            let g = brute_force_acyclic(n, &edges);
            prop_assert!(g.is_acyclic());
            for f in 0..n {
                for t in 0..n {
                    let mut h = g.clone();
                    h.out[f].insert(t);
                    prop_assert_eq!(g.would_be_acyclic(f, t), h.is_acyclic(), "edge {} -> {}", f, t);
                }
            }
        }
    }
}
