//! Per-attribute decision trees and the tree model built from them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::bitmap::RowSet;
use crate::dataset::{BinaryDataset, ItemId, Itemset, SignedLiteral};
use crate::depgraph::DependencyGraph;
use crate::error::{Error, Result};
use crate::mdlcost::{self, Bits, CostReport};

/// Target-value counts among the rows that reach a leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub struct CodingTable {
    pub n0: usize,
    pub n1: usize,
}

impl CodingTable {
    pub fn rows(&self) -> usize {
        self.n0 + self.n1
    }

    pub fn count(&self, value: bool) -> usize {
        if value {
            self.n1
        } else {
            self.n0
        }
    }

    /// Code length for one occurrence of `value`.
    pub fn code_length(&self, value: bool, smoothing: Smoothing) -> Bits {
        let n = self.count(value) as f64;
        let m = self.rows() as f64;
        match smoothing {
            Smoothing::Ml if n == 0.0 => f64::INFINITY,
            Smoothing::Ml => -(n / m).log2(),
            Smoothing::Kt => -((n + 0.5) / (m + 1.0)).log2(),
        }
    }
}

/// Probability estimate used when scoring a single transaction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Smoothing {
    /// `n_v / M`; zero counts give an infinite code length.
    Ml,
    /// Krichevsky-Trofimov, `(n_v + 1/2) / (M + 1)`.
    Kt,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Leaf {
    pub table: CodingTable,
    pub rows: RowSet,
}

impl Leaf {
    pub fn new(ds: &BinaryDataset, target: ItemId, rows: RowSet) -> Self {
        let n1 = rows.and_count(ds.column(target));
        let table = CodingTable { n0: rows.count() - n1, n1 };
        Self { table, rows }
    }

    pub fn cost(&self) -> CostReport {
        CostReport::leaf(self.table.n0, self.table.n1)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Leaf(Leaf),
    Split { attr: ItemId, pos: Box<Node>, neg: Box<Node> },
}

impl Node {
    pub fn n_leaves(&self) -> usize {
        match self {
            Node::Leaf(_) => 1,
            Node::Split { pos, neg, .. } => pos.n_leaves() + neg.n_leaves(),
        }
    }

    fn uses(&self, attr: ItemId) -> bool {
        match self {
            Node::Leaf(_) => false,
            Node::Split { attr: a, pos, neg } => *a == attr || pos.uses(attr) || neg.uses(attr),
        }
    }

    /// Sum of node costs in this subtree.
    pub fn cost(&self, n_attrs: usize) -> CostReport {
        match self {
            Node::Leaf(l) => l.cost(),
            Node::Split { pos, neg, .. } => {
                CostReport::internal(n_attrs) + pos.cost(n_attrs) + neg.cost(n_attrs)
            }
        }
    }
}

/// Preorder index of a leaf (positive branch before negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LeafRef(pub usize);

/// A leaf together with the path that reaches it.
#[derive(Clone, Debug)]
pub struct LeafInfo<'a> {
    pub index: LeafRef,
    pub literals: Vec<SignedLiteral>,
    pub leaf: &'a Leaf,
}

impl LeafInfo<'_> {
    /// `(pospath, negpath)`: attributes tested positive and negative.
    pub fn path(&self) -> (Itemset, Itemset) {
        split_literals(&self.literals)
    }
}

pub fn split_literals(literals: &[SignedLiteral]) -> (Itemset, Itemset) {
    let pos = literals.iter().filter(|l| l.positive).map(|l| l.attr).collect();
    let neg = literals.iter().filter(|l| !l.positive).map(|l| l.attr).collect();
    (pos, neg)
}

#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    target: ItemId,
    root: Node,
}

impl DecisionTree {
    pub fn from_root(target: ItemId, root: Node) -> Self {
        Self { target, root }
    }

    /// Single leaf over all rows.
    pub fn trivial(ds: &BinaryDataset, target: ItemId) -> Result<Self> {
        ds.check_item(target)?;
        Ok(Self { target, root: Node::Leaf(Leaf::new(ds, target, ds.all_rows())) })
    }

    pub fn target(&self) -> ItemId {
        self.target
    }

    pub fn root(&self) -> &Node {
        &self.root
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self.root, Node::Leaf(_))
    }

    pub fn n_leaves(&self) -> usize {
        self.root.n_leaves()
    }

    /// Attributes tested anywhere in the tree.
    pub fn source(&self) -> BTreeSet<ItemId> {
        fn walk(n: &Node, out: &mut BTreeSet<ItemId>) {
            if let Node::Split { attr, pos, neg } = n {
                out.insert(*attr);
                walk(pos, out);
                walk(neg, out);
            }
        }
        let mut out = BTreeSet::new();
        walk(&self.root, &mut out);
        out
    }

    /// All leaves in preorder, with their paths.
    pub fn leaves(&self) -> Vec<LeafInfo<'_>> {
        fn walk<'a>(n: &'a Node, path: &mut Vec<SignedLiteral>, out: &mut Vec<LeafInfo<'a>>) {
            match n {
                Node::Leaf(leaf) => {
                    out.push(LeafInfo { index: LeafRef(out.len()), literals: path.clone(), leaf })
                }
                Node::Split { attr, pos, neg } => {
                    path.push(SignedLiteral::pos(*attr));
                    walk(pos, path, out);
                    path.pop();
                    path.push(SignedLiteral::neg(*attr));
                    walk(neg, path, out);
                    path.pop();
                }
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    pub fn leaf(&self, leaf: LeafRef) -> Option<LeafInfo<'_>> {
        self.leaves().into_iter().nth(leaf.0)
    }

    pub fn path(&self, leaf: LeafRef) -> Option<(Itemset, Itemset)> {
        self.leaf(leaf).map(|l| l.path())
    }

    /// Follows `row` from the root: positive branch iff the tested bit is set.
    pub fn route(&self, row: &[bool]) -> LeafRef {
        let mut node = &self.root;
        let mut index = 0;
        loop {
            match node {
                Node::Leaf(_) => return LeafRef(index),
                Node::Split { attr, pos, neg } => {
                    if row[*attr] {
                        node = pos;
                    } else {
                        index += pos.n_leaves();
                        node = neg;
                    }
                }
            }
        }
    }

    fn route_table(&self, row: &[bool]) -> &CodingTable {
        let mut node = &self.root;
        loop {
            match node {
                Node::Leaf(l) => return &l.table,
                Node::Split { attr, pos, neg } => node = if row[*attr] { pos } else { neg },
            }
        }
    }

    /// Replaces `leaf` by a test on `attr` with two fresh leaves.
    pub fn split_tree(&self, ds: &BinaryDataset, leaf: LeafRef, attr: ItemId) -> Result<Self> {
        let mut out = self.clone();
        out.split_leaf(ds, leaf, attr)?;
        Ok(out)
    }

    /// In-place form of [`split_tree`](Self::split_tree).
    pub fn split_leaf(&mut self, ds: &BinaryDataset, leaf: LeafRef, attr: ItemId) -> Result<()> {
        ds.check_item(attr)?;
        if attr == self.target {
            return Err(Error::InvalidSplit(format!("attribute {attr} is the tree's target")));
        }
        let target = self.target;
        let mut remaining = leaf.0;
        let mut node = &mut self.root;
        loop {
            match node {
                Node::Leaf(_) if remaining == 0 => break,
                Node::Leaf(_) => {
                    return Err(Error::InvalidSplit(format!("no leaf with index {}", leaf.0)))
                }
                Node::Split { attr: a, pos, neg } => {
                    if *a == attr {
                        return Err(Error::InvalidSplit(format!(
                            "attribute {attr} already tested on the path"
                        )));
                    }
                    let left = pos.n_leaves();
                    if remaining < left {
                        node = pos;
                    } else {
                        remaining -= left;
                        node = neg;
                    }
                }
            }
        }
        let Node::Leaf(old) = node else { unreachable!() };
        let pos_rows = old.rows.and(ds.column(attr));
        let neg_rows = old.rows.and_not(ds.column(attr));
        *node = Node::Split {
            attr,
            pos: Box::new(Node::Leaf(Leaf::new(ds, target, pos_rows))),
            neg: Box::new(Node::Leaf(Leaf::new(ds, target, neg_rows))),
        };
        Ok(())
    }

    /// Tree with `attr` at the root, `pos` on its positive branch and `neg`
    /// on its negative branch.
    pub fn join_tree(attr: ItemId, pos: DecisionTree, neg: DecisionTree) -> Result<Self> {
        if pos.target != neg.target {
            return Err(Error::TargetMismatch(pos.target, neg.target));
        }
        if attr == pos.target {
            return Err(Error::InvalidSplit(format!("attribute {attr} is the tree's target")));
        }
        if pos.root.uses(attr) || neg.root.uses(attr) {
            return Err(Error::InvalidSplit(format!("attribute {attr} already used in a branch")));
        }
        Ok(Self {
            target: pos.target,
            root: Node::Split { attr, pos: Box::new(pos.root), neg: Box::new(neg.root) },
        })
    }

    /// Checks that leaf rows partition the dataset, that rows agree with the
    /// paths, and that every coding table matches its rows.
    pub fn validate(&self, ds: &BinaryDataset) -> Result<()> {
        let mut covered = RowSet::empty(ds.n_rows());
        for info in self.leaves() {
            let expected = ds.select_rows(&info.literals)?;
            if expected != info.leaf.rows {
                return Err(Error::InconsistentCounts(format!(
                    "leaf {} rows do not match its path",
                    info.index.0
                )));
            }
            let (n0, n1) = ds.value_counts(&info.leaf.rows, self.target)?;
            if (CodingTable { n0, n1 }) != info.leaf.table {
                return Err(Error::InconsistentCounts(format!(
                    "leaf {} table {:?} but rows give ({n0}, {n1})",
                    info.index.0, info.leaf.table
                )));
            }
            if !covered.is_disjoint(&info.leaf.rows) {
                return Err(Error::InconsistentCounts("leaves overlap".into()));
            }
            covered = covered.or(&info.leaf.rows);
        }
        if covered.count() != ds.n_rows() {
            return Err(Error::InconsistentCounts("leaves do not cover every row".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> TreeJson {
        fn node(n: &Node) -> NodeJson {
            match n {
                Node::Leaf(l) => NodeJson::Leaf { leaf: [l.table.n0, l.table.n1] },
                Node::Split { attr, pos, neg } => {
                    NodeJson::Split { split: *attr, pos: Box::new(node(pos)), neg: Box::new(node(neg)) }
                }
            }
        }
        TreeJson { target: self.target, root: node(&self.root) }
    }

    /// Rebuilds a tree over `ds`; stored leaf counts must match the data.
    pub fn from_json(json: &TreeJson, ds: &BinaryDataset) -> Result<Self> {
        fn build(n: &NodeJson, ds: &BinaryDataset, target: ItemId, rows: RowSet) -> Result<Node> {
            match n {
                NodeJson::Leaf { leaf } => {
                    let l = Leaf::new(ds, target, rows);
                    if [l.table.n0, l.table.n1] != *leaf {
                        return Err(Error::InconsistentCounts(format!(
                            "tree {target}: stored leaf {leaf:?}, data gives [{}, {}]",
                            l.table.n0, l.table.n1
                        )));
                    }
                    Ok(Node::Leaf(l))
                }
                NodeJson::Split { split, pos, neg } => {
                    ds.check_item(*split)?;
                    let p = rows.and(ds.column(*split));
                    let q = rows.and_not(ds.column(*split));
                    Ok(Node::Split {
                        attr: *split,
                        pos: Box::new(build(pos, ds, target, p)?),
                        neg: Box::new(build(neg, ds, target, q)?),
                    })
                }
            }
        }
        ds.check_item(json.target)?;
        let root = build(&json.root, ds, json.target, ds.all_rows())?;
        let tree = Self { target: json.target, root };
        for info in tree.leaves() {
            if info.literals.iter().any(|l| l.attr == tree.target) {
                return Err(Error::Model(format!("tree {} splits on its own target", tree.target)));
            }
            let attrs: BTreeSet<_> = info.literals.iter().map(|l| l.attr).collect();
            if attrs.len() != info.literals.len() {
                return Err(Error::Model(format!("tree {} repeats a test on one path", tree.target)));
            }
        }
        Ok(tree)
    }
}

/// One tree per attribute plus the dependency graph they induce.
#[derive(Clone, Debug, PartialEq)]
pub struct TreeModel {
    trees: Vec<DecisionTree>,
    graph: DependencyGraph,
    order: Vec<ItemId>,
}

impl TreeModel {
    /// The baseline model of trivial trees.
    pub fn trivial(ds: &BinaryDataset) -> Self {
        let trees = (0..ds.n_attrs()).map(|t| DecisionTree::trivial(ds, t).expect("valid target")).collect();
        Self::from_trees(trees).expect("trivial trees are acyclic")
    }

    /// Tree `i` must encode attribute `i`.
    pub fn from_trees(trees: Vec<DecisionTree>) -> Result<Self> {
        let k = trees.len();
        let mut graph = DependencyGraph::new(k);
        for (i, t) in trees.iter().enumerate() {
            if t.target != i {
                return Err(Error::MissingTree(i));
            }
            for s in t.source() {
                if s >= k {
                    return Err(Error::ItemOutOfRange { item: s, n_attrs: k });
                }
                graph.add_edge(i, s)?;
            }
        }
        let order = graph.transmission_order().expect("graph checked acyclic");
        Ok(Self { trees, graph, order })
    }

    pub fn n_attrs(&self) -> usize {
        self.trees.len()
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn tree(&self, attr: ItemId) -> &DecisionTree {
        &self.trees[attr]
    }

    pub fn graph(&self) -> &DependencyGraph {
        &self.graph
    }

    pub fn order(&self) -> &[ItemId] {
        &self.order
    }

    pub fn cost(&self) -> CostReport {
        mdlcost::model_cost(self).expect("model invariants hold")
    }

    pub fn n_nontrivial(&self) -> usize {
        self.trees.iter().filter(|t| !t.is_trivial()).count()
    }

    /// Bits to send one transaction, attribute by attribute in transmission order.
    pub fn transaction_code_length(&self, row: &[bool], smoothing: Smoothing) -> Bits {
        assert_eq!(row.len(), self.n_attrs(), "row width does not match the model");
        self.order
            .iter()
            .map(|&t| self.trees[t].route_table(row).code_length(row[t], smoothing))
            .sum()
    }

    pub fn to_json(&self, names: &[String]) -> ModelJson {
        ModelJson {
            n_attrs: self.n_attrs(),
            attr_names: names.to_vec(),
            order: self.order.clone(),
            cost: self.cost(),
            trees: self.trees.iter().map(DecisionTree::to_json).collect(),
        }
    }

    pub fn from_json(json: &ModelJson, ds: &BinaryDataset) -> Result<Self> {
        if json.n_attrs != ds.n_attrs() || json.trees.len() != ds.n_attrs() {
            return Err(Error::Model(format!(
                "model has {} attributes, dataset has {}",
                json.n_attrs,
                ds.n_attrs()
            )));
        }
        let mut trees = json
            .trees
            .iter()
            .map(|t| DecisionTree::from_json(t, ds))
            .collect::<Result<Vec<_>>>()?;
        trees.sort_by_key(DecisionTree::target);
        Self::from_trees(trees)
    }
}

/// Serialized tree node: `{"split": id, "pos": ..., "neg": ...}` or `{"leaf": [n0, n1]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NodeJson {
    Split { split: ItemId, pos: Box<NodeJson>, neg: Box<NodeJson> },
    Leaf { leaf: [usize; 2] },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeJson {
    pub target: ItemId,
    pub root: NodeJson,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelJson {
    pub n_attrs: usize,
    pub attr_names: Vec<String>,
    pub order: Vec<ItemId>,
    pub cost: CostReport,
    pub trees: Vec<TreeJson>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::d0;
    use approx::assert_abs_diff_eq;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    fn tables(t: &DecisionTree) -> Vec<(usize, usize)> {
        t.leaves().iter().map(|l| (l.leaf.table.n0, l.leaf.table.n1)).collect()
    }

    /// Tree for c: a=1 -> L1; a=0 -> test b (b=1 -> L2, b=0 -> L3).
    fn t4(ds: &BinaryDataset) -> DecisionTree {
        let t = DecisionTree::trivial(ds, C).unwrap();
        let t = t.split_tree(ds, LeafRef(0), A).unwrap();
        t.split_tree(ds, LeafRef(1), B).unwrap()
    }

    #[test]
    fn trivial_tree_examples() {
        let ds = d0();
        assert_eq!(tables(&DecisionTree::trivial(&ds, A).unwrap()), vec![(2, 2)]);
        assert_eq!(tables(&DecisionTree::trivial(&ds, C).unwrap()), vec![(2, 2)]);
        let one = BinaryDataset::from_rows(&[vec![true, false]], 2).unwrap();
        assert_eq!(tables(&DecisionTree::trivial(&one, 0).unwrap()), vec![(0, 1)]);
        assert_eq!(tables(&DecisionTree::trivial(&one, 1).unwrap()), vec![(1, 0)]);
        assert!(DecisionTree::trivial(&ds, A).unwrap().source().is_empty());
    }

    #[test]
    fn split_examples() {
        let ds = d0();
        let t = DecisionTree::trivial(&ds, B).unwrap();
        let s = t.split_tree(&ds, LeafRef(0), A).unwrap();
        assert_eq!(tables(&s), vec![(1, 1), (1, 1)]);
        assert_eq!(s.source(), BTreeSet::from([A]));
        s.validate(&ds).unwrap();

        let t = DecisionTree::trivial(&ds, C).unwrap().split_tree(&ds, LeafRef(0), A).unwrap();
        let t = t.split_tree(&ds, LeafRef(0), B).unwrap();
        assert_eq!(tables(&t), vec![(1, 0), (1, 0), (0, 2)]);

        // No row has a = 1 and c = 1.
        let empty = DecisionTree::trivial(&ds, B).unwrap().split_tree(&ds, LeafRef(0), A).unwrap();
        let empty = empty.split_tree(&ds, LeafRef(0), C).unwrap();
        assert_eq!(tables(&empty)[0], (0, 0));
        empty.validate(&ds).unwrap();

        assert!(matches!(t.split_tree(&ds, LeafRef(0), C), Err(Error::InvalidSplit(_))));
        assert!(matches!(t.split_tree(&ds, LeafRef(0), A), Err(Error::InvalidSplit(_))));
        assert!(matches!(t.split_tree(&ds, LeafRef(7), B), Err(Error::InvalidSplit(_))));
    }

    #[test]
    fn join_examples() {
        let ds = d0();
        let pos_ds = ds.select_rows(&[SignedLiteral::pos(A)]).unwrap();
        let neg_ds = ds.select_rows(&[SignedLiteral::neg(A)]).unwrap();
        let pos = DecisionTree { target: B, root: Node::Leaf(Leaf::new(&ds, B, pos_ds)) };
        let neg = DecisionTree { target: B, root: Node::Leaf(Leaf::new(&ds, B, neg_ds)) };
        let joined = DecisionTree::join_tree(A, pos.clone(), neg.clone()).unwrap();
        let split = DecisionTree::trivial(&ds, B).unwrap().split_tree(&ds, LeafRef(0), A).unwrap();
        assert_eq!(joined, split);

        let with_a = split.clone();
        assert!(matches!(DecisionTree::join_tree(A, with_a, neg.clone()), Err(Error::InvalidSplit(_))));
        let other = DecisionTree::trivial(&ds, C).unwrap();
        assert!(matches!(DecisionTree::join_tree(A, pos, other), Err(Error::TargetMismatch(B, C))));

        // Two pure leaves: zero data bits.
        let p = DecisionTree { target: C, root: Node::Leaf(Leaf::new(&ds, C, RowSet::from_indices(4, [2, 3]))) };
        let n = DecisionTree { target: C, root: Node::Leaf(Leaf::new(&ds, C, RowSet::from_indices(4, [0, 1]))) };
        let j = DecisionTree::join_tree(B, p, n).unwrap();
        assert_eq!(j.n_leaves(), 2);
        assert_eq!(j.root.cost(3).data_bits, 0.0);
    }

    #[test]
    fn route_examples() {
        let ds = d0();
        let t = DecisionTree::trivial(&ds, B).unwrap();
        assert_eq!(t.route(&[true, false, true]), LeafRef(0));
        let s = t.split_tree(&ds, LeafRef(0), A).unwrap();
        assert_eq!(s.route(&[true, true, false]), LeafRef(0));
        assert_eq!(s.route(&[false, true, true]), LeafRef(1));
        let t = t4(&ds);
        assert_eq!(t.route(&[false, false, true]), LeafRef(2));
        assert_eq!(t.route(&[false, true, true]), LeafRef(1));
    }

    #[test]
    fn path_examples() {
        let ds = d0();
        let t = t4(&ds);
        let set = |v: &[usize]| Itemset::new(v.iter().copied());
        assert_eq!(t.path(LeafRef(0)).unwrap(), (set(&[A]), set(&[])));
        assert_eq!(t.path(LeafRef(1)).unwrap(), (set(&[B]), set(&[A])));
        assert_eq!(t.path(LeafRef(2)).unwrap(), (set(&[]), set(&[A, B])));
    }

    #[test]
    fn routing_reproduces_leaf_rows() {
        let ds = d0();
        let t = t4(&ds);
        let leaves = t.leaves();
        for r in 0..ds.n_rows() {
            let l = t.route(&ds.row(r));
            assert!(leaves[l.0].leaf.rows.contains(r));
        }
        t.validate(&ds).unwrap();
    }

    #[test]
    fn code_lengths() {
        let table = CodingTable { n0: 0, n1: 5 };
        assert_abs_diff_eq!(table.code_length(false, Smoothing::Kt), -(0.5f64 / 6.0).log2(), epsilon = 1e-12);
        assert_abs_diff_eq!(table.code_length(false, Smoothing::Kt), 3.584_962_500_721_156, epsilon = 1e-9);
        assert_eq!(table.code_length(false, Smoothing::Ml), f64::INFINITY);
        assert_eq!(table.code_length(true, Smoothing::Ml), 0.0);
    }

    #[test]
    fn fair_coin_model_costs_one_bit_per_attribute() {
        // Every column is half ones.
        let rows: Vec<Vec<bool>> = (0..4).map(|r| (0..10).map(|k| (r + k) % 2 == 0).collect()).collect();
        let ds = BinaryDataset::from_rows(&rows, 10).unwrap();
        let m = TreeModel::trivial(&ds);
        for r in 0..4 {
            assert_eq!(m.transaction_code_length(&ds.row(r), Smoothing::Ml), 10.0);
        }
    }

    #[test]
    fn model_rejects_cycles() {
        let ds = d0();
        let ta = DecisionTree::trivial(&ds, A).unwrap().split_tree(&ds, LeafRef(0), C).unwrap();
        let tc = DecisionTree::trivial(&ds, C).unwrap().split_tree(&ds, LeafRef(0), A).unwrap();
        let tb = DecisionTree::trivial(&ds, B).unwrap();
        assert!(matches!(TreeModel::from_trees(vec![ta, tb.clone(), tc.clone()]), Err(Error::Cycle(..))));
        let m = TreeModel::from_trees(vec![DecisionTree::trivial(&ds, A).unwrap(), tb, tc]).unwrap();
        assert_eq!(m.order(), &[A, B, C]);
        assert!(m.graph().has_edge(C, A));
    }

    #[test]
    fn json_round_trip() {
        let ds = d0();
        let m = TreeModel::from_trees(vec![
            DecisionTree::trivial(&ds, A).unwrap(),
            DecisionTree::trivial(&ds, B).unwrap(),
            t4(&ds),
        ])
        .unwrap();
        let json = serde_json::to_string(&m.to_json(ds.names())).unwrap();
        assert!(json.contains(r#"{"split":0,"pos":{"leaf":[2,0]}"#), "{json}");
        let back: ModelJson = serde_json::from_str(&json).unwrap();
        assert_eq!(TreeModel::from_json(&back, &ds).unwrap(), m);

        let tampered = json.replace(r#"{"leaf":[2,0]}"#, r#"{"leaf":[1,1]}"#);
        let back: ModelJson = serde_json::from_str(&tampered).unwrap();
        assert!(matches!(TreeModel::from_json(&back, &ds), Err(Error::InconsistentCounts(_))));
    }
}
