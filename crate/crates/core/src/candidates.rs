//! Downward-closed candidate families: storage, mining and projection.

use std::collections::{BTreeMap, BTreeSet};

use crate::bitmap::RowSet;
use crate::dataset::{BinaryDataset, ItemId, Itemset};
use crate::error::{Error, Result};
use crate::itemlist;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct TrieNode {
    children: BTreeMap<ItemId, usize>,
    member: bool,
    support: Option<usize>,
}

/// Itemsets in a prefix tree keyed by ascending item id, with optional
/// support counts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ItemsetFamily {
    nodes: Vec<TrieNode>,
    len: usize,
}

impl Default for ItemsetFamily {
    fn default() -> Self {
        Self::empty()
    }
}

impl ItemsetFamily {
    /// A family with no members at all (not even the empty set).
    pub fn empty() -> Self {
        Self { nodes: vec![TrieNode::default()], len: 0 }
    }

    /// The family `{∅}`.
    pub fn trivial() -> Self {
        let mut f = Self::empty();
        f.insert(&Itemset::empty(), None);
        f
    }

    /// Every itemset over `n_attrs` attributes with at most `max_len` items.
    pub fn all_up_to(n_attrs: usize, max_len: usize) -> Self {
        fn rec(f: &mut ItemsetFamily, cur: &mut Vec<ItemId>, start: usize, n: usize, left: usize) {
            f.insert(&Itemset::new(cur.iter().copied()), None);
            if left == 0 {
                return;
            }
            for i in start..n {
                cur.push(i);
                rec(f, cur, i + 1, n, left - 1);
                cur.pop();
            }
        }
        let mut f = Self::empty();
        rec(&mut f, &mut Vec::new(), 0, n_attrs, max_len);
        f
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    fn find(&self, items: &[ItemId]) -> Option<usize> {
        let mut node = 0;
        for i in items {
            node = *self.nodes[node].children.get(i)?;
        }
        Some(node)
    }

    /// Inserts `set`; returns true if it was not yet a member. A given support
    /// overwrites any stored one.
    pub fn insert(&mut self, set: &Itemset, support: Option<usize>) -> bool {
        let mut node = 0;
        for &i in set.items() {
            node = match self.nodes[node].children.get(&i) {
                Some(&n) => n,
                None => {
                    self.nodes.push(TrieNode::default());
                    let n = self.nodes.len() - 1;
                    self.nodes[node].children.insert(i, n);
                    n
                }
            };
        }
        let n = &mut self.nodes[node];
        if support.is_some() {
            n.support = support;
        }
        let added = !n.member;
        n.member = true;
        self.len += added as usize;
        added
    }

    pub fn contains(&self, set: &Itemset) -> bool {
        self.contains_sorted(set.items())
    }

    /// Membership for an already ascending, duplicate-free slice.
    pub fn contains_sorted(&self, items: &[ItemId]) -> bool {
        self.find(items).is_some_and(|n| self.nodes[n].member)
    }

    pub fn support(&self, set: &Itemset) -> Option<usize> {
        self.find(set.items()).and_then(|n| self.nodes[n].support)
    }

    /// Members with their supports, by cardinality then lexicographically.
    pub fn iter(&self) -> Vec<(Itemset, Option<usize>)> {
        let mut out = Vec::with_capacity(self.len);
        let mut stack = vec![(0usize, Vec::new())];
        while let Some((node, items)) = stack.pop() {
            let n = &self.nodes[node];
            if n.member {
                out.push((Itemset::new(items.iter().copied()), n.support));
            }
            for (&i, &child) in &n.children {
                let mut next = items.clone();
                next.push(i);
                stack.push((child, next));
            }
        }
        out.sort_by(|a, b| a.0.cmp(&b.0));
        out
    }

    /// Items appearing in some member.
    pub fn universe(&self) -> BTreeSet<ItemId> {
        self.iter().into_iter().flat_map(|(s, _)| s.items().to_vec()).collect()
    }

    pub fn max_len(&self) -> usize {
        self.iter().iter().map(|(s, _)| s.len()).max().unwrap_or(0)
    }

    /// `{X - b : b ∈ X ∈ self}`.
    pub fn project(&self, b: ItemId) -> Self {
        let mut out = Self::empty();
        for (set, support) in self.iter() {
            if set.contains(b) {
                out.insert(&set.without(b), support);
            }
        }
        out
    }

    pub fn is_downward_closed(&self) -> bool {
        self.iter().iter().all(|(s, _)| s.items().iter().all(|&i| self.contains(&s.without(i))))
    }

    /// Adds every missing subset of every member; returns how many were added.
    pub fn close_downward(&mut self) -> usize {
        let mut added = 0;
        let mut work: Vec<Itemset> = self.iter().into_iter().map(|(s, _)| s).collect();
        while let Some(s) = work.pop() {
            for &i in s.items() {
                let sub = s.without(i);
                if self.insert(&sub, None) {
                    added += 1;
                    work.push(sub);
                }
            }
        }
        if !self.is_empty() && self.insert(&Itemset::empty(), None) {
            added += 1;
        }
        added
    }

    /// Adds `∅` and every singleton `{a}` for `a < n_attrs`; returns the
    /// attributes whose singleton was missing.
    pub fn ensure_singletons(&mut self, n_attrs: usize) -> Vec<ItemId> {
        self.insert(&Itemset::empty(), None);
        (0..n_attrs).filter(|&a| self.insert(&Itemset::singleton(a), None)).collect()
    }

    pub fn save(&self, names: &[String]) -> String {
        let members = self.iter();
        itemlist::write_list(members.iter().map(|(s, sup)| (s, *sup)), names)
    }
}

/// Result of reading a family file.
#[derive(Clone, Debug)]
pub struct LoadedFamily {
    pub family: ItemsetFamily,
    /// Subsets that were missing and had to be added.
    pub closure_added: usize,
}

/// Reads a family in the itemset-list format and closes it downward.
pub fn load_family<F>(text: &str, resolve: F) -> Result<LoadedFamily>
where
    F: Fn(&str) -> Option<ItemId>,
{
    let mut family = ItemsetFamily::empty();
    for (set, support) in itemlist::parse_list(text, resolve)? {
        family.insert(&set, support);
    }
    let closure_added = family.close_downward();
    Ok(LoadedFamily { family, closure_added })
}

pub fn save_family(family: &ItemsetFamily, names: &[String]) -> String {
    family.save(names)
}

/// All itemsets with support at least `minsup` (including `∅`).
pub fn mine_frequent(ds: &BinaryDataset, minsup: usize) -> Result<ItemsetFamily> {
    mine_frequent_bounded(ds, minsup, None)
}

/// Depth-first intersection mining over the column bitmaps, optionally
/// stopping at `max_len` items.
pub fn mine_frequent_bounded(ds: &BinaryDataset, minsup: usize, max_len: Option<usize>) -> Result<ItemsetFamily> {
    if minsup == 0 {
        return Err(Error::InvalidArgument("minsup must be at least 1".into()));
    }
    let mut family = ItemsetFamily::empty();
    if ds.n_rows() < minsup {
        family.insert(&Itemset::empty(), Some(ds.n_rows()));
        return Ok(family);
    }
    family.insert(&Itemset::empty(), Some(ds.n_rows()));
    let max_len = max_len.unwrap_or(usize::MAX);
    if max_len == 0 {
        return Ok(family);
    }
    let roots: Vec<(ItemId, RowSet)> = (0..ds.n_attrs())
        .filter(|&i| ds.column(i).count() >= minsup)
        .map(|i| (i, ds.column(i).clone()))
        .collect();
    let mut prefix = Vec::new();
    eclat(&mut family, &mut prefix, &roots, minsup, max_len);
    Ok(family)
}

fn eclat(family: &mut ItemsetFamily, prefix: &mut Vec<ItemId>, exts: &[(ItemId, RowSet)], minsup: usize, max_len: usize) {
    for (idx, (item, rows)) in exts.iter().enumerate() {
        prefix.push(*item);
        family.insert(&Itemset::new(prefix.iter().copied()), Some(rows.count()));
        if prefix.len() < max_len {
            let next: Vec<(ItemId, RowSet)> = exts[idx + 1..]
                .iter()
                .filter_map(|(j, other)| {
                    let both = rows.and(other);
                    (both.count() >= minsup).then_some((*j, both))
                })
                .collect();
            if !next.is_empty() {
                eclat(family, prefix, &next, minsup, max_len);
            }
        }
        prefix.pop();
    }
}
