//! Itemsets implied by trees.
//!
//! A leaf reached by testing `pos` positive and `neg` negative, encoding
//! target `t`, needs the frequencies of `pos ∪ V` and `pos ∪ V ∪ {t}` for
//! every `V ⊆ neg`: inclusion-exclusion over those recovers both the leaf
//! probability and the probability of `t = 1` within it.

use std::collections::{BTreeSet, HashMap};

use crate::dataset::{BinaryDataset, ItemId, Itemset};
use crate::dtree::{DecisionTree, LeafInfo, ModelJson, NodeJson, TreeModel};
use crate::error::{Error, Result};
use crate::itemlist;

const BOUNDARY_TOLERANCE: f64 = 1e-9;

/// Deduplicated itemsets, iterated by cardinality then lexicographically.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtractedFamily {
    itemsets: BTreeSet<Itemset>,
}

impl ExtractedFamily {
    pub fn len(&self) -> usize {
        self.itemsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.itemsets.is_empty()
    }

    /// Count excluding the empty itemset.
    pub fn len_nonempty(&self) -> usize {
        self.itemsets.iter().filter(|s| !s.is_empty()).count()
    }

    pub fn contains(&self, set: &Itemset) -> bool {
        self.itemsets.contains(set)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Itemset> {
        self.itemsets.iter()
    }

    pub fn insert(&mut self, set: Itemset) {
        self.itemsets.insert(set);
    }

    pub fn extend(&mut self, other: ExtractedFamily) {
        self.itemsets.extend(other.itemsets);
    }

    pub fn without_empty(mut self) -> Self {
        self.itemsets.remove(&Itemset::empty());
        self
    }

    pub fn to_list(&self, names: &[String]) -> String {
        itemlist::write_list(self.itemsets.iter().map(|s| (s, None)), names)
    }
}

impl FromIterator<Itemset> for ExtractedFamily {
    fn from_iter<T: IntoIterator<Item = Itemset>>(iter: T) -> Self {
        Self { itemsets: iter.into_iter().collect() }
    }
}

/// `{pos ∪ V} ∪ {pos ∪ V ∪ {target}}` over all `V ⊆ neg`.
pub fn path_sets(pos: &Itemset, neg: &Itemset, target: ItemId) -> ExtractedFamily {
    neg.subsets()
        .flat_map(|v| {
            let base = pos.union(&v);
            let with_target = base.with(target);
            [base, with_target]
        })
        .collect()
}

pub fn leaf_sets(leaf: &LeafInfo<'_>, target: ItemId) -> ExtractedFamily {
    let (pos, neg) = leaf.path();
    path_sets(&pos, &neg, target)
}

pub fn tree_sets(tree: &DecisionTree) -> ExtractedFamily {
    let mut out = ExtractedFamily::default();
    for leaf in tree.leaves() {
        out.extend(leaf_sets(&leaf, tree.target()));
    }
    out
}

pub fn model_sets(model: &TreeModel) -> ExtractedFamily {
    let mut out = ExtractedFamily::default();
    for t in model.trees() {
        out.extend(tree_sets(t));
    }
    out
}

/// Same as [`model_sets`] for a serialized model, without the data.
pub fn json_sets(model: &ModelJson) -> ExtractedFamily {
    fn walk(n: &NodeJson, target: ItemId, pos: &mut Vec<ItemId>, neg: &mut Vec<ItemId>, out: &mut ExtractedFamily) {
        match n {
            NodeJson::Leaf { .. } => {
                let p = Itemset::new(pos.iter().copied());
                let q = Itemset::new(neg.iter().copied());
                out.extend(path_sets(&p, &q, target));
            }
            NodeJson::Split { split, pos: pn, neg: nn } => {
                pos.push(*split);
                walk(pn, target, pos, neg, out);
                pos.pop();
                neg.push(*split);
                walk(nn, target, pos, neg, out);
                neg.pop();
            }
        }
    }
    let mut out = ExtractedFamily::default();
    for t in &model.trees {
        walk(&t.root, t.target, &mut Vec::new(), &mut Vec::new(), &mut out);
    }
    out
}

pub type FrequencyMap = HashMap<Itemset, f64>;

/// Exact frequencies of the given itemsets.
pub fn exact_frequencies<'a, I>(ds: &BinaryDataset, sets: I) -> Result<FrequencyMap>
where
    I: IntoIterator<Item = &'a Itemset>,
{
    sets.into_iter().map(|s| Ok((s.clone(), ds.frequency(s)?))).collect()
}

fn clamp_probability(p: f64) -> Result<f64> {
    if (-BOUNDARY_TOLERANCE..=1.0 + BOUNDARY_TOLERANCE).contains(&p) {
        Ok(p.clamp(0.0, 1.0))
    } else {
        Err(Error::InconsistentFrequencies(p))
    }
}

fn alternating_sum(freqs: &FrequencyMap, pos: &Itemset, neg: &Itemset) -> Result<f64> {
    let mut sum = 0.0;
    for v in neg.subsets() {
        let set = pos.union(&v);
        let f = freqs.get(&set).ok_or_else(|| Error::MissingFrequency(format!("{set:?}")))?;
        if v.len() % 2 == 0 {
            sum += f;
        } else {
            sum -= f;
        }
    }
    Ok(sum)
}

/// Probability that a transaction has every item of `pos` and none of `neg`.
pub fn leaf_probability(freqs: &FrequencyMap, pos: &Itemset, neg: &Itemset) -> Result<f64> {
    clamp_probability(alternating_sum(freqs, pos, neg)?)
}

/// `q(target = 1 | leaf)` computed from itemset frequencies alone.
pub fn reconstruct_coding_table(
    freqs: &FrequencyMap,
    pos: &Itemset,
    neg: &Itemset,
    target: ItemId,
) -> Result<f64> {
    let leaf = leaf_probability(freqs, pos, neg)?;
    if leaf <= 0.0 {
        return Err(Error::UndefinedConditional);
    }
    let joint = leaf_probability(freqs, &pos.with(target), neg)?;
    Ok(joint / leaf)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::d0;
    use crate::dtree::LeafRef;
    use approx::assert_abs_diff_eq;

    const A: usize = 0;
    const B: usize = 1;
    const C: usize = 2;

    fn set(v: &[usize]) -> Itemset {
        Itemset::new(v.iter().copied())
    }

    fn fam(v: &[&[usize]]) -> ExtractedFamily {
        v.iter().map(|s| set(s)).collect()
    }

    #[test]
    fn leaf_sets_examples() {
        assert_eq!(path_sets(&set(&[A]), &set(&[]), C), fam(&[&[A], &[A, C]]));
        assert_eq!(path_sets(&set(&[B]), &set(&[A]), C), fam(&[&[B], &[A, B], &[B, C], &[A, B, C]]));
        assert_eq!(
            path_sets(&set(&[]), &set(&[A, B]), C),
            fam(&[&[], &[A], &[B], &[A, B], &[C], &[A, C], &[B, C], &[A, B, C]])
        );
    }

    #[test]
    fn leaf_sets_count_is_power_of_two() {
        for n in 0..6 {
            let neg = Itemset::new(1..=n);
            assert_eq!(path_sets(&set(&[10]), &neg, 0).len(), 1 << (n + 1));
        }
    }

    #[test]
    fn model_sets_examples() {
        let ds = d0();
        let trivial = TreeModel::trivial(&ds);
        assert_eq!(model_sets(&trivial), fam(&[&[], &[A], &[B], &[C]]));

        let tb = DecisionTree::trivial(&ds, B).unwrap().split_tree(&ds, LeafRef(0), A).unwrap();
        let m = TreeModel::from_trees(vec![
            DecisionTree::trivial(&ds, A).unwrap(),
            tb,
            DecisionTree::trivial(&ds, C).unwrap(),
        ])
        .unwrap();
        let sets = model_sets(&m);
        assert_eq!(sets, fam(&[&[], &[A], &[B], &[A, B], &[C]]));
        assert_eq!(sets.len_nonempty(), 4);
        assert_eq!(sets.to_list(ds.names()), "{}\na\nb\nc\na b\n");
        assert_eq!(json_sets(&m.to_json(ds.names())), sets);
    }

    #[test]
    fn leaf_probability_examples() {
        let ds = d0();
        let all = Itemset::new([A, B, C]);
        let freqs = exact_frequencies(&ds, &all.subsets().collect::<Vec<_>>()).unwrap();
        assert_abs_diff_eq!(leaf_probability(&freqs, &set(&[B]), &set(&[A])).unwrap(), 0.25);
        assert_eq!(leaf_probability(&freqs, &set(&[A]), &set(&[])).unwrap(), 0.5);
        assert_abs_diff_eq!(leaf_probability(&freqs, &set(&[]), &set(&[A, B])).unwrap(), 0.25);
    }

    #[test]
    fn leaf_probability_errors() {
        let mut freqs = FrequencyMap::new();
        freqs.insert(set(&[B]), 0.5);
        assert!(matches!(leaf_probability(&freqs, &set(&[B]), &set(&[A])), Err(Error::MissingFrequency(_))));
        freqs.insert(set(&[A, B]), 0.9);
        assert!(matches!(
            leaf_probability(&freqs, &set(&[B]), &set(&[A])),
            Err(Error::InconsistentFrequencies(_))
        ));
        freqs.insert(set(&[A, B]), 0.5 + 5e-10);
        assert_eq!(leaf_probability(&freqs, &set(&[B]), &set(&[A])).unwrap(), 0.0);
    }

    #[test]
    fn reconstruct_examples() {
        let ds = d0();
        let all = Itemset::new([A, B, C]);
        let freqs = exact_frequencies(&ds, &all.subsets().collect::<Vec<_>>()).unwrap();
        // Tree for b, leaf a = 0: (fr(b) - fr(ab)) / (1 - fr(a)).
        assert_abs_diff_eq!(reconstruct_coding_table(&freqs, &set(&[]), &set(&[A]), B).unwrap(), 0.5);
        // No row has a = 1 and c = 1.
        assert!(matches!(
            reconstruct_coding_table(&freqs, &set(&[A, C]), &set(&[]), B),
            Err(Error::UndefinedConditional)
        ));
    }
}
