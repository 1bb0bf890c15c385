//! Binary transaction data stored column-wise as row bitmaps.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::bitmap::RowSet;
use crate::error::{Error, Result};

/// Dense attribute index in `[0, K)`.
pub type ItemId = usize;

/// A set of attributes, kept strictly ascending.
///
/// Ordering is by cardinality first, then lexicographic, which is also the
/// order itemset lists are written in.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Itemset(Vec<ItemId>);

impl Itemset {
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn new<I: IntoIterator<Item = ItemId>>(items: I) -> Self {
        let mut v: Vec<ItemId> = items.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Self(v)
    }

    pub fn singleton(item: ItemId) -> Self {
        Self(vec![item])
    }

    pub fn items(&self) -> &[ItemId] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: ItemId) -> bool {
        self.0.binary_search(&item).is_ok()
    }

    pub fn with(&self, item: ItemId) -> Self {
        let mut out = self.clone();
        if let Err(pos) = out.0.binary_search(&item) {
            out.0.insert(pos, item);
        }
        out
    }

    pub fn without(&self, item: ItemId) -> Self {
        let mut out = self.clone();
        if let Ok(pos) = out.0.binary_search(&item) {
            out.0.remove(pos);
        }
        out
    }

    pub fn union(&self, other: &Self) -> Self {
        Self::new(self.0.iter().chain(other.0.iter()).copied())
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.0.iter().all(|&i| other.contains(i))
    }

    /// All subsets, including the empty set and `self`.
    pub fn subsets(&self) -> impl Iterator<Item = Itemset> + '_ {
        let n = self.0.len();
        assert!(n < 32, "refusing to enumerate 2^{n} subsets");
        (0u32..(1 << n)).map(move |mask| {
            Itemset((0..n).filter(|b| mask >> b & 1 == 1).map(|b| self.0[b]).collect())
        })
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "{}".to_string();
        }
        self.0
            .iter()
            .map(|&i| names.get(i).cloned().unwrap_or_else(|| i.to_string()))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl Ord for Itemset {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Itemset {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Debug for Itemset {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<ItemId> for Itemset {
    fn from_iter<T: IntoIterator<Item = ItemId>>(iter: T) -> Self {
        Itemset::new(iter)
    }
}

/// A test `attr = 1` (positive) or `attr = 0` (negative).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SignedLiteral {
    pub attr: ItemId,
    pub positive: bool,
}

impl SignedLiteral {
    pub fn pos(attr: ItemId) -> Self {
        Self { attr, positive: true }
    }

    pub fn neg(attr: ItemId) -> Self {
        Self { attr, positive: false }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Fimi,
    Csv01,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fimi" | "dat" => Ok(Format::Fimi),
            "csv01" | "csv" => Ok(Format::Csv01),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct BinaryDataset {
    n_rows: usize,
    columns: Vec<RowSet>,
    names: Vec<String>,
    renumbered: bool,
}

impl BinaryDataset {
    pub fn from_columns(columns: Vec<RowSet>, names: Option<Vec<String>>) -> Result<Self> {
        let Some(first) = columns.first() else {
            return Err(Error::EmptyInput);
        };
        let n_rows = first.n_bits();
        if n_rows == 0 {
            return Err(Error::EmptyInput);
        }
        if columns.iter().any(|c| c.n_bits() != n_rows) {
            return Err(Error::InvalidArgument("columns differ in length".into()));
        }
        let names = match names {
            Some(n) if n.len() == columns.len() => n,
            Some(n) => {
                return Err(Error::InvalidArgument(format!(
                    "{} names for {} columns",
                    n.len(),
                    columns.len()
                )))
            }
            None => (0..columns.len()).map(|i| i.to_string()).collect(),
        };
        Ok(Self { n_rows, columns, names, renumbered: false })
    }

    /// Builds a dataset from row-major boolean data.
    pub fn from_rows(rows: &[Vec<bool>], n_attrs: usize) -> Result<Self> {
        if rows.is_empty() || n_attrs == 0 {
            return Err(Error::EmptyInput);
        }
        let mut columns = vec![RowSet::empty(rows.len()); n_attrs];
        for (r, row) in rows.iter().enumerate() {
            if row.len() != n_attrs {
                return Err(Error::Parse {
                    line: r + 1,
                    message: format!("expected {n_attrs} values, found {}", row.len()),
                });
            }
            for (k, &v) in row.iter().enumerate() {
                if v {
                    columns[k].insert(r);
                }
            }
        }
        Self::from_columns(columns, None)
    }

    pub fn load<R: Read>(mut source: R, format: Format) -> Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        match format {
            Format::Fimi => parse_fimi(&text),
            Format::Csv01 => parse_csv01(&text),
        }
    }

    #[inline]
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    #[inline]
    pub fn n_attrs(&self) -> usize {
        self.columns.len()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// True when FIMI item ids had gaps and were renumbered densely; `names`
    /// then holds the original ids.
    pub fn renumbered(&self) -> bool {
        self.renumbered
    }

    pub fn item_by_name(&self, name: &str) -> Option<ItemId> {
        self.names.iter().position(|n| n == name)
    }

    #[inline]
    pub fn column(&self, attr: ItemId) -> &RowSet {
        &self.columns[attr]
    }

    pub fn all_rows(&self) -> RowSet {
        RowSet::full(self.n_rows)
    }

    pub fn check_item(&self, item: ItemId) -> Result<()> {
        if item < self.n_attrs() {
            Ok(())
        } else {
            Err(Error::ItemOutOfRange { item, n_attrs: self.n_attrs() })
        }
    }

    pub fn row(&self, r: usize) -> Vec<bool> {
        self.columns.iter().map(|c| c.contains(r)).collect()
    }

    /// Number of rows containing every item of `x`.
    pub fn support(&self, x: &Itemset) -> Result<usize> {
        for &i in x.items() {
            self.check_item(i)?;
        }
        Ok(match x.items() {
            [] => self.n_rows,
            [i] => self.columns[*i].count(),
            [i, j] => self.columns[*i].and_count(&self.columns[*j]),
            [first, rest @ ..] => {
                let mut acc = self.columns[*first].clone();
                for &i in rest {
                    acc.and_assign(&self.columns[i]);
                }
                acc.count()
            }
        })
    }

    pub fn frequency(&self, x: &Itemset) -> Result<f64> {
        Ok(self.support(x)? as f64 / self.n_rows as f64)
    }

    pub fn select_rows(&self, literals: &[SignedLiteral]) -> Result<RowSet> {
        let mut seen = BTreeSet::new();
        let mut rows = self.all_rows();
        for lit in literals {
            self.check_item(lit.attr)?;
            if !seen.insert(lit.attr) {
                return Err(Error::DuplicateAttribute(lit.attr));
            }
            if lit.positive {
                rows.and_assign(&self.columns[lit.attr]);
            } else {
                rows.and_not_assign(&self.columns[lit.attr]);
            }
        }
        Ok(rows)
    }

    /// `(n0, n1)`: how many of `rows` have `attr` = 0 and = 1.
    pub fn value_counts(&self, rows: &RowSet, attr: ItemId) -> Result<(usize, usize)> {
        self.check_item(attr)?;
        let n1 = rows.and_count(&self.columns[attr]);
        Ok((rows.count() - n1, n1))
    }

    /// Fraction of cells equal to 1.
    pub fn density(&self) -> f64 {
        let ones: usize = self.columns.iter().map(RowSet::count).sum();
        ones as f64 / (self.n_rows * self.n_attrs()) as f64
    }

    /// New dataset made of the given rows (in the given order).
    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyInput);
        }
        let columns = self
            .columns
            .iter()
            .map(|c| {
                RowSet::from_indices(
                    rows.len(),
                    rows.iter().enumerate().filter(|(_, &r)| c.contains(r)).map(|(k, _)| k),
                )
            })
            .collect();
        Ok(Self { n_rows: rows.len(), columns, names: self.names.clone(), renumbered: self.renumbered })
    }

    pub fn to_fimi(&self) -> String {
        let mut out = String::new();
        for r in 0..self.n_rows {
            let items: Vec<String> = (0..self.n_attrs())
                .filter(|&k| self.columns[k].contains(r))
                .map(|k| self.names[k].clone())
                .collect();
            out.push_str(&items.join(" "));
            out.push('\n');
        }
        out
    }

    pub fn to_csv01(&self) -> String {
        let mut out = self.names.join(",");
        out.push('\n');
        for r in 0..self.n_rows {
            let cells: Vec<&str> =
                self.columns.iter().map(|c| if c.contains(r) { "1" } else { "0" }).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

fn parse_fimi(text: &str) -> Result<BinaryDataset> {
    if text.trim().is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.strip_suffix('\r').unwrap_or(line);
        let mut items = Vec::new();
        for tok in line.split_whitespace() {
            let id: u64 = tok.parse().map_err(|_| Error::Parse {
                line: ln + 1,
                message: format!("invalid item id {tok:?}"),
            })?;
            items.push(id);
        }
        rows.push(items);
    }
    let distinct: BTreeSet<u64> = rows.iter().flatten().copied().collect();
    let Some(&max_id) = distinct.iter().next_back() else {
        return Err(Error::EmptyInput);
    };
    let dense = max_id as usize + 1 == distinct.len();
    let (n_attrs, index): (usize, Box<dyn Fn(u64) -> usize>) = if dense {
        (distinct.len(), Box::new(|id| id as usize))
    } else {
        let ids: Vec<u64> = distinct.iter().copied().collect();
        (ids.len(), Box::new(move |id| ids.binary_search(&id).expect("collected id")))
    };
    let mut columns = vec![RowSet::empty(rows.len()); n_attrs];
    for (r, items) in rows.iter().enumerate() {
        for &id in items {
            columns[index(id)].insert(r);
        }
    }
    let names = distinct.iter().map(|id| id.to_string()).collect();
    let mut ds = BinaryDataset::from_columns(columns, Some(names))?;
    ds.renumbered = !dense;
    Ok(ds)
}

fn parse_csv01(text: &str) -> Result<BinaryDataset> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
        .filter(|(_, l)| !l.trim().is_empty());
    let Some((_, header)) = lines.next() else {
        return Err(Error::EmptyInput);
    };
    let names: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
    let k = names.len();
    let mut rows = Vec::new();
    for (ln, line) in lines {
        let cells: Vec<&str> = line.split(',').map(str::trim).collect();
        if cells.len() != k {
            return Err(Error::Parse {
                line: ln,
                message: format!("expected {k} cells, found {}", cells.len()),
            });
        }
        let row = cells
            .iter()
            .map(|c| match *c {
                "0" => Ok(false),
                "1" => Ok(true),
                other => Err(Error::Parse {
                    line: ln,
                    message: format!("value {other:?} is not 0 or 1"),
                }),
            })
            .collect::<Result<Vec<bool>>>()?;
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ds = BinaryDataset::from_rows(&rows, k)?;
    ds.names = names;
    Ok(ds)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Rows (a,b,c): 110, 100, 011, 001.
    pub(crate) fn d0() -> BinaryDataset {
        let rows = [[1, 1, 0], [1, 0, 0], [0, 1, 1], [0, 0, 1]];
        let rows: Vec<Vec<bool>> = rows.iter().map(|r| r.iter().map(|&v| v == 1).collect()).collect();
        let mut ds = BinaryDataset::from_rows(&rows, 3).unwrap();
        ds.names = vec!["a".into(), "b".into(), "c".into()];
        ds
    }

    fn set(items: &[ItemId]) -> Itemset {
        Itemset::new(items.iter().copied())
    }

    #[test]
    fn load_fimi() {
        let ds = BinaryDataset::load("0 1\n0\n1 2\n2\n".as_bytes(), Format::Fimi).unwrap();
        assert_eq!((ds.n_rows(), ds.n_attrs()), (4, 3));
        assert_eq!(ds.frequency(&set(&[0])).unwrap(), 0.5);
        assert!(!ds.renumbered());
    }

    #[test]
    fn load_fimi_crlf_and_gaps() {
        let ds = BinaryDataset::load("3 10\r\n10\r\n".as_bytes(), Format::Fimi).unwrap();
        assert_eq!(ds.n_attrs(), 2);
        assert!(ds.renumbered());
        assert_eq!(ds.names(), ["3", "10"]);
        assert_eq!(ds.support(&set(&[1])).unwrap(), 2);
    }

    #[test]
    fn load_fimi_errors() {
        assert!(matches!(BinaryDataset::load("".as_bytes(), Format::Fimi), Err(Error::EmptyInput)));
        match BinaryDataset::load("0 1\n2 x\n".as_bytes(), Format::Fimi) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            BinaryDataset::load("0 -1\n".as_bytes(), Format::Fimi),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn load_csv01() {
        let ds = BinaryDataset::load("a,b\n1,0\n0,1\n".as_bytes(), Format::Csv01).unwrap();
        assert_eq!((ds.n_rows(), ds.n_attrs()), (2, 2));
        assert_eq!(ds.column(0).iter().collect::<Vec<_>>(), vec![0]);
        assert_eq!(ds.column(1).iter().collect::<Vec<_>>(), vec![1]);
        assert_eq!(ds.names(), ["a", "b"]);
    }

    #[test]
    fn load_csv01_rejects_non_binary() {
        match BinaryDataset::load("a,b\n1,0\n0,2\n".as_bytes(), Format::Csv01) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(BinaryDataset::load("a,b\n".as_bytes(), Format::Csv01), Err(Error::EmptyInput)));
    }

    #[test]
    fn round_trips_through_both_formats() {
        let ds = d0();
        let back = BinaryDataset::load(ds.to_csv01().as_bytes(), Format::Csv01).unwrap();
        assert_eq!(back.names(), ds.names());
        for k in 0..3 {
            assert_eq!(back.column(k), ds.column(k));
        }
        let ds = BinaryDataset::load("0 1\n0\n1 2\n2\n".as_bytes(), Format::Fimi).unwrap();
        assert_eq!(ds.to_fimi(), "0 1\n0\n1 2\n2\n");
    }

    #[test]
    fn frequency_examples() {
        let ds = d0();
        assert_eq!(ds.frequency(&Itemset::empty()).unwrap(), 1.0);
        assert_eq!(ds.frequency(&set(&[0, 1])).unwrap(), 0.25);
        assert_eq!(ds.frequency(&set(&[0, 2])).unwrap(), 0.0);
        assert!(matches!(ds.frequency(&set(&[3])), Err(Error::ItemOutOfRange { item: 3, .. })));
    }

    #[test]
    fn select_rows_examples() {
        let ds = d0();
        let rows = |l: &[SignedLiteral]| ds.select_rows(l).unwrap().iter().collect::<Vec<_>>();
        assert_eq!(rows(&[]), vec![0, 1, 2, 3]);
        assert_eq!(rows(&[SignedLiteral::pos(0)]), vec![0, 1]);
        assert_eq!(rows(&[SignedLiteral::neg(0), SignedLiteral::pos(1)]), vec![2]);
        assert!(matches!(
            ds.select_rows(&[SignedLiteral::pos(0), SignedLiteral::neg(0)]),
            Err(Error::DuplicateAttribute(0))
        ));
    }

    #[test]
    fn value_counts_examples() {
        let ds = d0();
        assert_eq!(ds.value_counts(&ds.all_rows(), 1).unwrap(), (2, 2));
        let a1 = ds.select_rows(&[SignedLiteral::pos(0)]).unwrap();
        assert_eq!(ds.value_counts(&a1, 1).unwrap(), (1, 1));
        assert_eq!(ds.value_counts(&RowSet::empty(4), 2).unwrap(), (0, 0));
    }

    #[test]
    fn itemset_order_is_cardinality_then_lex() {
        let mut v = vec![set(&[1, 2]), set(&[2]), Itemset::empty(), set(&[0, 2]), set(&[0])];
        v.sort();
        assert_eq!(v, vec![Itemset::empty(), set(&[0]), set(&[2]), set(&[0, 2]), set(&[1, 2])]);
    }

    fn dataset_strategy(max_k: usize) -> impl Strategy<Value = BinaryDataset> {
        (1..=max_k, 1usize..40).prop_flat_map(|(k, n)| {
            prop::collection::vec(prop::collection::vec(any::<bool>(), k), n)
                .prop_map(move |rows| BinaryDataset::from_rows(&rows, k).unwrap())
        })
    }

    proptest! {
        #[test]
        fn frequency_is_antimonotone(ds in dataset_strategy(6)) {
            let all = Itemset::new(0..ds.n_attrs());
            for x in all.subsets() {
                let fx = ds.frequency(&x).unwrap();
                for extra in 0..ds.n_attrs() {
                    prop_assert!(ds.frequency(&x.with(extra)).unwrap() <= fx);
                }
            }
        }

        #[test]
        fn signed_selection_partitions_rows(ds in dataset_strategy(5), attr in 0usize..5) {
            let attr = attr % ds.n_attrs();
            let p = ds.select_rows(&[SignedLiteral::pos(attr)]).unwrap();
            let n = ds.select_rows(&[SignedLiteral::neg(attr)]).unwrap();
            prop_assert!(p.is_disjoint(&n));
            prop_assert_eq!(p.or(&n), ds.all_rows());
            for t in 0..ds.n_attrs() {
                let (p0, p1) = ds.value_counts(&p, t).unwrap();
                let (n0, n1) = ds.value_counts(&n, t).unwrap();
                prop_assert_eq!((p0 + n0, p1 + n1), ds.value_counts(&ds.all_rows(), t).unwrap());
            }
        }
    }
}
