//! Greedy tree growing straight from the data.
//!
//! Start from trivial trees. Each round, find for every attribute the single
//! split that shrinks its tree the most while keeping the dependency graph
//! acyclic, then apply the best of those if it saves bits. Stop when no split
//! saves anything.

use crate::bitmap::RowSet;
use crate::dataset::{BinaryDataset, ItemId};
use crate::depgraph::DependencyGraph;
use crate::dtree::{DecisionTree, LeafRef, TreeModel};
use crate::mdlcost::{internal_node_cost, leaf_cost, Bits, CostReport};
use crate::par;

#[derive(Clone, Debug)]
pub struct GreedyOptions {
    /// Reuse each tree's best split across rounds until it can change.
    /// Output is identical either way.
    pub use_cache: bool,
    pub parallel: bool,
}

impl Default for GreedyOptions {
    fn default() -> Self {
        Self { use_cache: true, parallel: true }
    }
}

/// Best admissible split of one tree.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SplitCandidate {
    pub tree: ItemId,
    pub leaf: LeafRef,
    pub attr: ItemId,
    /// Tree cost after the split.
    pub new_cost: Bits,
    /// `new_cost` minus the current tree cost; always negative.
    pub delta: Bits,
}

/// One accepted split.
#[derive(Clone, Debug, PartialEq)]
pub struct GreedyStep {
    pub split: SplitCandidate,
    /// Model cost after the split, tracked incrementally.
    pub total_after: Bits,
}

#[derive(Clone, Debug, Default)]
pub struct GreedyTrace {
    pub baseline: Bits,
    pub steps: Vec<GreedyStep>,
    /// Number of per-tree best-split searches performed.
    pub searches: usize,
}

/// Runs the greedy search; returns the model and its cost.
pub fn greedy_pack(ds: &BinaryDataset, opts: &GreedyOptions) -> (TreeModel, CostReport) {
    let (model, cost, _) = greedy_pack_traced(ds, opts);
    (model, cost)
}

pub fn greedy_pack_traced(ds: &BinaryDataset, opts: &GreedyOptions) -> (TreeModel, CostReport, GreedyTrace) {
    let k = ds.n_attrs();
    let mut trees: Vec<DecisionTree> =
        (0..k).map(|t| DecisionTree::trivial(ds, t).expect("valid target")).collect();
    let mut tree_costs: Vec<Bits> = trees.iter().map(|t| t.root().cost(k).total).collect();
    let mut graph = DependencyGraph::new(k);
    let mut total: Bits = tree_costs.iter().sum();
    let mut trace = GreedyTrace { baseline: total, ..Default::default() };

    // cache[i] = Some(best) when tree i's best split is known to be current.
    let mut cache: Vec<Option<Option<SplitCandidate>>> = vec![None; k];
    loop {
        let stale: Vec<ItemId> = (0..k).filter(|&i| cache[i].is_none()).collect();
        trace.searches += stale.len();
        let fresh = par::map_slice(&stale, opts.parallel, |&i| {
            search_tree(ds, &trees[i], tree_costs[i], &graph)
        });
        for (&i, cand) in stale.iter().zip(fresh) {
            cache[i] = Some(cand);
        }

        // Largest saving; smallest attribute index on ties.
        let mut best: Option<SplitCandidate> = None;
        for cand in cache.iter().flatten().flatten() {
            if best.is_none_or(|b| cand.delta < b.delta) {
                best = Some(*cand);
            }
        }
        let Some(chosen) = best else { break };
        if chosen.delta >= 0.0 {
            break;
        }

        let i = chosen.tree;
        trees[i].split_leaf(ds, chosen.leaf, chosen.attr).expect("candidate was admissible");
        graph.add_edge(i, chosen.attr).expect("candidate kept the graph acyclic");
        debug_assert!(graph.is_acyclic());
        tree_costs[i] = chosen.new_cost;
        total += chosen.delta;
        trace.steps.push(GreedyStep { split: chosen, total_after: total });

        if opts.use_cache {
            cache[i] = None;
            // New edges only remove admissible splits. A cached best that is
            // still admissible therefore stays the best for its tree.
            for (j, slot) in cache.iter_mut().enumerate() {
                if let Some(Some(c)) = slot {
                    if j != i && !graph.would_be_acyclic(j, c.attr) {
                        *slot = None;
                    }
                }
            }
        } else {
            cache.iter_mut().for_each(|c| *c = None);
        }
    }

    let model = TreeModel::from_trees(trees).expect("greedy search keeps the graph acyclic");
    let cost = model.cost();
    (model, cost, trace)
}

/// The split of tree `i` in `model` that would save the most bits, if any saves bits.
pub fn best_split_for_tree(ds: &BinaryDataset, model: &TreeModel, i: ItemId) -> Option<SplitCandidate> {
    let tree = model.tree(i);
    search_tree(ds, tree, tree.root().cost(model.n_attrs()).total, model.graph())
}

/// Scans leaves in preorder and split attributes in index order; only a
/// strictly better candidate replaces the current one.
fn search_tree(ds: &BinaryDataset, tree: &DecisionTree, current: Bits, graph: &DependencyGraph) -> Option<SplitCandidate> {
    let k = ds.n_attrs();
    let target = tree.target();
    let split_overhead = internal_node_cost(k);
    let acyclic: Vec<bool> = (0..k).map(|j| graph.would_be_acyclic(target, j)).collect();
    let target_col = ds.column(target);
    let mut best: Option<SplitCandidate> = None;
    let mut best_delta = 0.0;
    for info in tree.leaves() {
        let rows: &RowSet = &info.leaf.rows;
        let table = info.leaf.table;
        let m = table.rows();
        let old = leaf_cost(table.n0, table.n1);
        let rows_one = rows.and(target_col);
        for j in 0..k {
            if !acyclic[j] || info.literals.iter().any(|l| l.attr == j) {
                continue;
            }
            let col = ds.column(j);
            let m_pos = rows.and_count(col);
            let n1_pos = rows_one.and_count(col);
            let (m_neg, n1_neg) = (m - m_pos, table.n1 - n1_pos);
            let new = split_overhead + leaf_cost(m_pos - n1_pos, n1_pos) + leaf_cost(m_neg - n1_neg, n1_neg);
            let delta = new - old;
            if delta < best_delta {
                best_delta = delta;
                best = Some(SplitCandidate { tree: target, leaf: info.index, attr: j, new_cost: current + delta, delta });
            }
        }
    }
    best
}
