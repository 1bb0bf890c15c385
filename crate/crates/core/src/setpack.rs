//! Tree selection restricted to a candidate family.
//!
//! [`generate`] finds the cheapest tree for one target whose splits use only
//! given source attributes and whose implied itemsets all lie in the family.
//! [`set_pack`] grows per-attribute source sets pass by pass: each pass
//! weighs "tree with current sources" against "tree with one more source",
//! takes a minimum spanning arborescence toward a sink, freezes the
//! attributes hanging directly off the sink and offers them as sources to
//! the attributes upstream.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitmap::RowSet;
use crate::candidates::ItemsetFamily;
use crate::dataset::{BinaryDataset, ItemId, SignedLiteral};
use crate::depgraph::{dmst, WeightedDigraph};
use crate::dtree::{DecisionTree, Leaf, Node, TreeModel};
use crate::error::{Error, Result};
use crate::mdlcost::{internal_node_cost, leaf_cost, Bits, CostReport};
use crate::par;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    /// Optimal over all admissible trees.
    #[default]
    Exhaustive,
    /// Best immediate split at each node, no backtracking.
    Greedy,
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exhaustive" => Ok(Self::Exhaustive),
            "greedy" => Ok(Self::Greedy),
            _ => Err(Error::InvalidArgument(format!("unknown search mode {s:?}"))),
        }
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Exhaustive => "exhaustive",
            Self::Greedy => "greedy",
        })
    }
}

/// Which arborescence nodes receive a newly frozen attribute as a source.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Propagation {
    /// Every unfrozen node whose sink path passes through it.
    #[default]
    Ancestors,
    /// Only unfrozen nodes pointing directly at it.
    Parents,
}

impl FromStr for Propagation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ancestors" => Ok(Self::Ancestors),
            "parents" => Ok(Self::Parents),
            _ => Err(Error::InvalidArgument(format!("unknown propagation {s:?}"))),
        }
    }
}

impl fmt::Display for Propagation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Ancestors => "ancestors",
            Self::Parents => "parents",
        })
    }
}

#[derive(Clone, Debug)]
pub struct SetPackOptions {
    pub mode: SearchMode,
    pub propagate: Propagation,
    /// Reuse tree searches while a target's sources are unchanged. Output is
    /// identical either way.
    pub use_cache: bool,
    pub parallel: bool,
}

impl Default for SetPackOptions {
    fn default() -> Self {
        Self { mode: SearchMode::Exhaustive, propagate: Propagation::Ancestors, use_cache: true, parallel: true }
    }
}

/// One tree search: the best tree for `target` over `rows`, splitting only
/// on `sources`, with every implied itemset in `family`.
///
/// Splitting on `b` below path `P` is admissible iff `P ∪ {b} ∪ {target}` is
/// in the family, which (for a downward-closed family) is exactly what
/// searching the family projected onto the target and then onto each path
/// attribute would allow.
#[derive(Clone, Debug)]
pub struct BestTreeQuery<'a> {
    pub target: ItemId,
    pub sources: BTreeSet<ItemId>,
    pub family: &'a ItemsetFamily,
    pub rows: RowSet,
}

impl<'a> BestTreeQuery<'a> {
    /// Query over all rows of `ds`.
    pub fn new(ds: &BinaryDataset, family: &'a ItemsetFamily, target: ItemId, sources: BTreeSet<ItemId>) -> Self {
        Self { target, sources, family, rows: ds.all_rows() }
    }
}

struct Generator<'a> {
    ds: &'a BinaryDataset,
    family: &'a ItemsetFamily,
    target: ItemId,
    sources: Vec<ItemId>,
    split_cost: Bits,
    mode: SearchMode,
    /// Signed path -> (chosen split attribute, subtree cost).
    memo: HashMap<Vec<SignedLiteral>, (Option<ItemId>, Bits)>,
}

impl Generator<'_> {
    fn admissible(&self, path: &[SignedLiteral], b: ItemId) -> bool {
        if path.iter().any(|l| l.attr == b) {
            return false;
        }
        let mut items: Vec<ItemId> = path.iter().map(|l| l.attr).collect();
        items.push(b);
        items.push(self.target);
        items.sort_unstable();
        self.family.contains_sorted(&items)
    }

    fn leaf_cost(&self, rows: &RowSet) -> Bits {
        let n1 = rows.and_count(self.ds.column(self.target));
        leaf_cost(rows.count() - n1, n1)
    }

    fn extend(path: &[SignedLiteral], lit: SignedLiteral) -> Vec<SignedLiteral> {
        let mut p = path.to_vec();
        let at = p.partition_point(|l| l.attr < lit.attr);
        p.insert(at, lit);
        p
    }

    fn branches(&self, rows: &RowSet, b: ItemId) -> (RowSet, RowSet) {
        let col = self.ds.column(b);
        (rows.and(col), rows.and_not(col))
    }

    /// Fills the memo for `path` and returns the subtree cost.
    fn solve(&mut self, path: &[SignedLiteral], rows: &RowSet) -> Bits {
        if let Some(&(_, c)) = self.memo.get(path) {
            return c;
        }
        let mut best = (None, self.leaf_cost(rows));
        if !rows.is_empty() {
            for idx in 0..self.sources.len() {
                let b = self.sources[idx];
                if !self.admissible(path, b) {
                    continue;
                }
                let (pos_rows, neg_rows) = self.branches(rows, b);
                let c = match self.mode {
                    SearchMode::Exhaustive => {
                        let pc = self.solve(&Self::extend(path, SignedLiteral::pos(b)), &pos_rows);
                        let nc = self.solve(&Self::extend(path, SignedLiteral::neg(b)), &neg_rows);
                        self.split_cost + pc + nc
                    }
                    SearchMode::Greedy => self.split_cost + self.leaf_cost(&pos_rows) + self.leaf_cost(&neg_rows),
                };
                if c < best.1 {
                    best = (Some(b), c);
                }
            }
        }
        if let (SearchMode::Greedy, Some(b)) = (self.mode, best.0) {
            let (pos_rows, neg_rows) = self.branches(rows, b);
            let pc = self.solve(&Self::extend(path, SignedLiteral::pos(b)), &pos_rows);
            let nc = self.solve(&Self::extend(path, SignedLiteral::neg(b)), &neg_rows);
            best.1 = self.split_cost + pc + nc;
        }
        self.memo.insert(path.to_vec(), best);
        best.1
    }

    fn build(&self, path: &[SignedLiteral], rows: RowSet) -> Node {
        match self.memo.get(path).and_then(|&(b, _)| b) {
            None => Node::Leaf(Leaf::new(self.ds, self.target, rows)),
            Some(b) => {
                let (pos_rows, neg_rows) = self.branches(&rows, b);
                Node::Split {
                    attr: b,
                    pos: Box::new(self.build(&Self::extend(path, SignedLiteral::pos(b)), pos_rows)),
                    neg: Box::new(self.build(&Self::extend(path, SignedLiteral::neg(b)), neg_rows)),
                }
            }
        }
    }
}

/// Runs one tree search. Ties go to the leaf, then to the smallest split
/// attribute.
pub fn generate(ds: &BinaryDataset, q: &BestTreeQuery<'_>, mode: SearchMode) -> DecisionTree {
    let mut g = Generator {
        ds,
        family: q.family,
        target: q.target,
        sources: q.sources.iter().copied().filter(|&s| s != q.target).collect(),
        split_cost: internal_node_cost(ds.n_attrs()),
        mode,
        memo: HashMap::new(),
    };
    g.solve(&[], &q.rows);
    DecisionTree::from_root(q.target, g.build(&[], q.rows.clone()))
}

/// [`generate`] over all rows.
pub fn best_tree(
    ds: &BinaryDataset,
    family: &ItemsetFamily,
    target: ItemId,
    sources: &BTreeSet<ItemId>,
    mode: SearchMode,
) -> DecisionTree {
    generate(ds, &BestTreeQuery::new(ds, family, target, sources.clone()), mode)
}

/// Per-attribute source sets and the order in which attributes were frozen.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceSets {
    pub sources: Vec<BTreeSet<ItemId>>,
    pub marked: Vec<bool>,
    pub marking_order: Vec<ItemId>,
}

impl SourceSets {
    fn new(k: usize) -> Self {
        Self { sources: vec![BTreeSet::new(); k], marked: vec![false; k], marking_order: Vec::new() }
    }

    fn add_source(&mut self, target: ItemId, source: ItemId) -> bool {
        debug_assert!(!self.marked[target] && self.marked[source]);
        self.sources[target].insert(source)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PassTrace {
    /// Cost of each attribute's best tree under its sources at pass start.
    pub sink_weights: Vec<Bits>,
    /// Tree searches run this pass (cache misses).
    pub generate_calls: usize,
    pub newly_marked: Vec<ItemId>,
    /// `(target, source)` pairs added at the end of the pass.
    pub added_sources: Vec<(ItemId, ItemId)>,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct SetPackTrace {
    pub passes: Vec<PassTrace>,
    /// Tree searches including the final model build.
    pub generate_calls: usize,
}

#[derive(Clone, Debug)]
pub struct SetPackResult {
    pub sources: SourceSets,
    pub model: TreeModel,
    pub cost: CostReport,
    pub trace: SetPackTrace,
}

type CacheKey = (ItemId, Vec<ItemId>);

struct TreeCache {
    enabled: bool,
    trees: HashMap<CacheKey, (DecisionTree, Bits)>,
    calls: usize,
}

impl TreeCache {
    /// Ensures every key is present, searching the missing ones in parallel.
    fn fill(&mut self, ds: &BinaryDataset, family: &ItemsetFamily, keys: &[CacheKey], opts: &SetPackOptions) {
        if !self.enabled {
            self.trees.clear();
        }
        let mut missing: Vec<CacheKey> = keys.iter().filter(|k| !self.trees.contains_key(*k)).cloned().collect();
        missing.sort();
        missing.dedup();
        self.calls += missing.len();
        let found = par::map_slice(&missing, opts.parallel, |(t, s)| {
            let tree = best_tree(ds, family, *t, &s.iter().copied().collect(), opts.mode);
            let cost = tree.root().cost(ds.n_attrs()).total;
            (tree, cost)
        });
        self.trees.extend(missing.into_iter().zip(found));
    }

    fn cost(&self, key: &CacheKey) -> Bits {
        self.trees[key].1
    }

    fn invalidate(&mut self, target: ItemId) {
        self.trees.retain(|(t, _), _| *t != target);
    }
}

fn key(target: ItemId, sources: &BTreeSet<ItemId>) -> CacheKey {
    (target, sources.iter().copied().collect())
}

/// Selects source sets and trees for every attribute of `ds`.
///
/// `family` must be downward closed and contain every singleton
/// (see [`ItemsetFamily::ensure_singletons`]).
pub fn set_pack(ds: &BinaryDataset, family: &ItemsetFamily, opts: &SetPackOptions) -> Result<SetPackResult> {
    let k = ds.n_attrs();
    let missing: Vec<String> =
        (0..k).filter(|&a| !family.contains_sorted(&[a])).map(|a| ds.names()[a].clone()).collect();
    if !missing.is_empty() {
        return Err(Error::Infeasible(format!("candidate family lacks singletons {}", missing.join(", "))));
    }
    if !family.is_downward_closed() {
        return Err(Error::InvalidArgument("candidate family is not downward closed".into()));
    }

    let mut state = SourceSets::new(k);
    let mut cache = TreeCache { enabled: opts.use_cache, trees: HashMap::new(), calls: 0 };
    let mut trace = SetPackTrace::default();
    let max_passes = k * (k + 1);

    while state.marking_order.len() < k {
        if trace.passes.len() >= max_passes {
            return Err(Error::Model(format!("source selection did not settle after {max_passes} passes")));
        }
        let calls_before = cache.calls;

        let sink_keys: Vec<CacheKey> = (0..k).map(|i| key(i, &state.sources[i])).collect();
        let mut edge_keys = Vec::new();
        for i in (0..k).filter(|&i| !state.marked[i]) {
            for j in (0..k).filter(|&j| j != i && !state.sources[i].contains(&j)) {
                let mut s = state.sources[i].clone();
                s.insert(j);
                edge_keys.push((i, j, key(i, &s)));
            }
        }
        let all_keys: Vec<CacheKey> =
            sink_keys.iter().cloned().chain(edge_keys.iter().map(|(_, _, q)| q.clone())).collect();
        cache.fill(ds, family, &all_keys, opts);

        // Vertex 0 is the sink, attribute i is vertex i + 1.
        let sink_weights: Vec<Bits> = sink_keys.iter().map(|q| cache.cost(q)).collect();
        let mut graph = WeightedDigraph::new(k + 1);
        for i in 0..k {
            graph.add_edge(i + 1, 0, sink_weights[i]);
        }
        for (i, j, q) in &edge_keys {
            let w = cache.cost(q);
            if w <= sink_weights[*i] {
                graph.add_edge(i + 1, j + 1, w);
            }
        }
        let arb = dmst(&graph);

        let was_marked = state.marked.clone();
        let newly: Vec<ItemId> = (0..k).filter(|&i| !was_marked[i] && arb.parent[i + 1] == 0).collect();
        for &i in &newly {
            state.marked[i] = true;
            state.marking_order.push(i);
        }

        let mut added = Vec::new();
        let unmarked: Vec<ItemId> = (0..k).filter(|&j| !state.marked[j]).collect();
        for j in unmarked {
            let path = arb.path_to_sink(j + 1);
            for &i in &newly {
                let reached = match opts.propagate {
                    Propagation::Ancestors => path.contains(&(i + 1)),
                    Propagation::Parents => path.first() == Some(&(i + 1)),
                };
                if reached && state.add_source(j, i) {
                    added.push((j, i));
                }
            }
            // An edge into an attribute frozen in an earlier pass.
            let b = arb.parent[j + 1];
            if b != 0 && was_marked[b - 1] && state.add_source(j, b - 1) {
                added.push((j, b - 1));
            }
        }
        added.sort_unstable();
        for &(j, _) in &added {
            cache.invalidate(j);
        }

        trace.passes.push(PassTrace {
            sink_weights,
            generate_calls: cache.calls - calls_before,
            newly_marked: newly,
            added_sources: added,
        });
    }

    let final_keys: Vec<CacheKey> = (0..k).map(|i| key(i, &state.sources[i])).collect();
    cache.fill(ds, family, &final_keys, opts);
    trace.generate_calls = cache.calls;
    let trees: Vec<DecisionTree> = final_keys.iter().map(|q| cache.trees[q].0.clone()).collect();
    let model = TreeModel::from_trees(trees)?;
    let cost = model.cost();
    Ok(SetPackResult { sources: state, model, cost, trace })
}
