//! Classification by compression: one model per class, and a row goes to
//! the class whose model encodes it in the fewest bits.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::candidates::{mine_frequent_bounded, ItemsetFamily};
use crate::dataset::{BinaryDataset, Format};
use crate::dtree::{Smoothing, TreeModel};
use crate::error::{Error, Result};
use crate::greedypack::{greedy_pack, GreedyOptions};
use crate::mdlcost::Bits;
use crate::par;
use crate::setpack::{set_pack, SetPackOptions};

/// A dataset with one class label per row.
#[derive(Clone, Debug)]
pub struct LabeledDataset {
    pub dataset: BinaryDataset,
    pub labels: Vec<String>,
}

impl LabeledDataset {
    pub fn new(dataset: BinaryDataset, labels: Vec<String>) -> Result<Self> {
        if labels.len() != dataset.n_rows() {
            return Err(Error::InvalidArgument(format!(
                "{} labels for {} rows",
                labels.len(),
                dataset.n_rows()
            )));
        }
        Ok(Self { dataset, labels })
    }

    /// 0/1 CSV with a header; the column named `label_column` holds the class.
    pub fn load_csv<R: Read>(mut source: R, label_column: &str) -> Result<Self> {
        let mut text = String::new();
        source.read_to_string(&mut text)?;
        let mut lines = text.lines().map(|l| l.strip_suffix('\r').unwrap_or(l));
        let header = lines.find(|l| !l.trim().is_empty()).ok_or(Error::EmptyInput)?;
        let idx = header
            .split(',')
            .position(|c| c.trim() == label_column)
            .ok_or_else(|| Error::InvalidArgument(format!("no column named {label_column:?}")))?;
        let mut labels = Vec::new();
        let mut rest = String::new();
        let mut push = |line: &str, labels: Option<&mut Vec<String>>| {
            let mut cells: Vec<&str> = line.split(',').collect();
            if idx < cells.len() {
                let label = cells.remove(idx).trim().to_string();
                if let Some(l) = labels {
                    l.push(label);
                }
            }
            rest.push_str(&cells.join(","));
            rest.push('\n');
        };
        push(header, None);
        for line in lines {
            if line.trim().is_empty() {
                continue;
            }
            push(line, Some(&mut labels));
        }
        let dataset = BinaryDataset::load(rest.as_bytes(), Format::Csv01)?;
        Self::new(dataset, labels)
    }

    /// Transactions in FIMI format plus one label per line.
    pub fn load_fimi<R: Read, L: Read>(data: R, mut labels: L) -> Result<Self> {
        let dataset = BinaryDataset::load(data, Format::Fimi)?;
        let mut text = String::new();
        labels.read_to_string(&mut text)?;
        let labels = text.lines().map(str::trim).filter(|l| !l.is_empty()).map(String::from).collect();
        Self::new(dataset, labels)
    }

    pub fn n_rows(&self) -> usize {
        self.labels.len()
    }

    /// Distinct labels in string order.
    pub fn classes(&self) -> Vec<String> {
        self.labels.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect()
    }

    pub fn rows_of(&self, label: &str) -> Vec<usize> {
        (0..self.n_rows()).filter(|&r| self.labels[r] == label).collect()
    }

    pub fn subset(&self, rows: &[usize]) -> Result<Self> {
        let dataset = self.dataset.subset(rows)?;
        let labels = rows.iter().map(|&r| self.labels[r].clone()).collect();
        Self::new(dataset, labels)
    }
}

/// Where each class's candidate family comes from when selecting trees.
#[derive(Clone, Debug)]
pub enum CandidateSource {
    /// The same family for every class.
    Fixed(ItemsetFamily),
    /// Frequent itemsets of each class's rows; `minsup_frac` of that class's
    /// row count, rounded up, at least 1.
    Mine { minsup_frac: f64, max_len: Option<usize> },
}

#[derive(Clone, Debug)]
pub enum Algorithm {
    Greedy(GreedyOptions),
    Select { candidates: CandidateSource, options: SetPackOptions },
}

impl Default for Algorithm {
    fn default() -> Self {
        Self::Greedy(GreedyOptions::default())
    }
}

fn pack(ds: &BinaryDataset, alg: &Algorithm) -> Result<TreeModel> {
    match alg {
        Algorithm::Greedy(opts) => Ok(greedy_pack(ds, opts).0),
        Algorithm::Select { candidates, options } => {
            let mut family = match candidates {
                CandidateSource::Fixed(f) => f.clone(),
                CandidateSource::Mine { minsup_frac, max_len } => {
                    let minsup = ((minsup_frac * ds.n_rows() as f64).ceil() as usize).max(1);
                    mine_frequent_bounded(ds, minsup, *max_len)?
                }
            };
            family.ensure_singletons(ds.n_attrs());
            Ok(set_pack(ds, &family, options)?.model)
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassModel {
    pub label: String,
    pub model: TreeModel,
    pub n_train: usize,
}

/// One packed model per class, ordered by label.
#[derive(Clone, Debug, PartialEq)]
pub struct ClassifierModel {
    classes: Vec<ClassModel>,
}

impl ClassifierModel {
    pub fn from_parts(mut classes: Vec<ClassModel>) -> Result<Self> {
        if classes.len() < 2 {
            return Err(Error::TooFewClasses(classes.len()));
        }
        if let Some(c) = classes.iter().find(|c| c.n_train == 0) {
            return Err(Error::EmptyClass(c.label.clone()));
        }
        let k = classes[0].model.n_attrs();
        if classes.iter().any(|c| c.model.n_attrs() != k) {
            return Err(Error::InvalidArgument("class models differ in attribute count".into()));
        }
        classes.sort_by(|a, b| a.label.cmp(&b.label));
        Ok(Self { classes })
    }

    pub fn classes(&self) -> &[ClassModel] {
        &self.classes
    }

    fn n_total(&self) -> usize {
        self.classes.iter().map(|c| c.n_train).sum()
    }

    /// Code length of `row` under each class model, in class order; with
    /// `prior`, plus `-log2` of the class's share of the training rows.
    pub fn scores(&self, row: &[bool], prior: bool) -> Vec<Bits> {
        let n = self.n_total() as f64;
        self.classes
            .iter()
            .map(|c| {
                let bits = c.model.transaction_code_length(row, Smoothing::Kt);
                if prior {
                    bits - (c.n_train as f64 / n).log2()
                } else {
                    bits
                }
            })
            .collect()
    }

    /// The class with the shortest code; ties go to the class with more
    /// training rows, then to the smaller label.
    pub fn predict(&self, row: &[bool], prior: bool) -> &str {
        let scores = self.scores(row, prior);
        let mut best = 0;
        for i in 1..self.classes.len() {
            let (ci, cb) = (&self.classes[i], &self.classes[best]);
            if scores[i] < scores[best] || (scores[i] == scores[best] && ci.n_train > cb.n_train) {
                best = i;
            }
        }
        &self.classes[best].label
    }
}

/// Packs each class's rows separately.
pub fn train(data: &LabeledDataset, alg: &Algorithm, parallel: bool) -> Result<ClassifierModel> {
    let classes = data.classes();
    if classes.len() < 2 {
        return Err(Error::TooFewClasses(classes.len()));
    }
    let parts: Vec<Result<ClassModel>> = par::map_slice(&classes, parallel, |label| {
        let rows = data.rows_of(label);
        if rows.is_empty() {
            return Err(Error::EmptyClass(label.clone()));
        }
        let ds = data.dataset.subset(&rows)?;
        Ok(ClassModel { label: label.clone(), model: pack(&ds, alg)?, n_train: rows.len() })
    });
    ClassifierModel::from_parts(parts.into_iter().collect::<Result<_>>()?)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AccuracyReport {
    pub n_train: usize,
    pub n_test: usize,
    pub correct: usize,
    pub accuracy: f64,
    /// Every label seen in either part, in string order.
    pub classes: Vec<String>,
    /// `confusion[actual][predicted]`, indexed like `classes`.
    pub confusion: Vec<Vec<usize>>,
    /// Test rows per actual class.
    pub per_class: BTreeMap<String, usize>,
}

/// Seeded holdout: shuffle, train on `round(split * n)` rows, score the rest.
pub fn evaluate(data: &LabeledDataset, split: f64, seed: u64, alg: &Algorithm, prior: bool) -> Result<AccuracyReport> {
    if !(split > 0.0 && split < 1.0) {
        return Err(Error::InvalidArgument(format!("split {split} must lie strictly between 0 and 1")));
    }
    let n = data.n_rows();
    let n_train = (split * n as f64).round() as usize;
    if n_train == 0 || n_train >= n {
        return Err(Error::DegenerateSplit(split));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let (train_rows, test_rows) = order.split_at(n_train);
    let model = train(&data.subset(train_rows)?, alg, true)?;

    let classes = data.classes();
    let index = |l: &str| classes.binary_search_by(|c| c.as_str().cmp(l)).expect("label from data");
    let mut confusion = vec![vec![0; classes.len()]; classes.len()];
    let mut per_class = BTreeMap::new();
    let mut correct = 0;
    for &r in test_rows {
        let actual = &data.labels[r];
        let predicted = model.predict(&data.dataset.row(r), prior);
        confusion[index(actual)][index(predicted)] += 1;
        *per_class.entry(actual.clone()).or_insert(0) += 1;
        correct += (predicted == actual) as usize;
    }
    Ok(AccuracyReport {
        n_train,
        n_test: test_rows.len(),
        correct,
        accuracy: correct as f64 / test_rows.len() as f64,
        classes,
        confusion,
        per_class,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::tests::d0;
    use crate::synth;

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn d0_gives_trivial_two_row_models() {
        let data = LabeledDataset::new(d0(), labels(&["0", "0", "1", "1"])).unwrap();
        let m = train(&data, &Algorithm::default(), false).unwrap();
        assert_eq!(m.classes().len(), 2);
        for c in m.classes() {
            assert_eq!(c.n_train, 2);
            assert_eq!(c.model.n_nontrivial(), 0);
        }
    }

    #[test]
    fn single_class_is_rejected() {
        let data = LabeledDataset::new(d0(), labels(&["x"; 4])).unwrap();
        assert!(matches!(train(&data, &Algorithm::default(), false), Err(Error::TooFewClasses(1))));
        assert!(LabeledDataset::new(d0(), labels(&["x"; 3])).is_err());
    }

    #[test]
    fn equal_models_tie_break_by_size_then_label() {
        let ds = d0();
        let model = TreeModel::trivial(&ds);
        let mk = |label: &str, n| ClassModel { label: label.into(), model: model.clone(), n_train: n };
        let m = ClassifierModel::from_parts(vec![mk("b", 5), mk("a", 3)]).unwrap();
        assert_eq!(m.predict(&[true, false, true], false), "b");
        let m = ClassifierModel::from_parts(vec![mk("b", 3), mk("a", 3)]).unwrap();
        assert_eq!(m.predict(&[true, false, true], false), "a");
    }

    #[test]
    fn identical_classes_score_majority_frequency() {
        // Every class holds the same rows, so every model is identical and
        // every prediction is the tie-break winner.
        let base = synth::chain(40, 5, 0.1, 1);
        let rows: Vec<Vec<bool>> = (0..40).map(|r| base.row(r)).collect();
        let all: Vec<Vec<bool>> = rows.iter().chain(&rows).cloned().collect();
        let ds = BinaryDataset::from_rows(&all, 5).unwrap();
        let lab: Vec<String> = (0..80).map(|r| if r < 40 { "p" } else { "q" }.to_string()).collect();
        let data = LabeledDataset::new(ds, lab).unwrap();
        let m = train(&data, &Algorithm::default(), false).unwrap();
        assert_eq!(m.classes()[0].model, m.classes()[1].model);
        let hits = (0..80).filter(|&r| m.predict(&data.dataset.row(r), false) == data.labels[r]).count();
        assert_eq!(hits, 40);
    }

    #[test]
    fn kt_scores_are_finite() {
        let data = synth::two_class(100, 6, 3);
        let m = train(&data, &Algorithm::default(), true).unwrap();
        for bits in 0..64u32 {
            let row: Vec<bool> = (0..6).map(|b| bits >> b & 1 == 1).collect();
            assert!(m.scores(&row, true).iter().all(|s| s.is_finite()));
        }
    }

    #[test]
    fn two_class_synthetic_is_separable() {
        let data = synth::two_class(500, 10, 8);
        let m = train(&data.subset(&(0..800).collect::<Vec<_>>()).unwrap(), &Algorithm::default(), true).unwrap();
        assert!(m.classes()[0].model.n_nontrivial() >= 1);
        assert_eq!(m.classes()[1].model.n_nontrivial(), 0);
        let report = evaluate(&data, 0.5, 1, &Algorithm::default(), false).unwrap();
        assert!(report.accuracy >= 0.9, "{report:?}");
        assert_eq!(report.n_train + report.n_test, 1000);
        assert_eq!(report.confusion.iter().flatten().sum::<usize>(), report.n_test);
    }

    #[test]
    fn degenerate_splits_are_rejected() {
        let data = synth::two_class(5, 4, 1);
        assert!(matches!(evaluate(&data, 0.999, 0, &Algorithm::default(), false), Err(Error::DegenerateSplit(_))));
        assert!(evaluate(&data, 0.0, 0, &Algorithm::default(), false).is_err());
        assert!(evaluate(&data, 1.0, 0, &Algorithm::default(), false).is_err());
    }

    #[test]
    fn evaluation_is_seeded() {
        let data = synth::two_class(60, 6, 2);
        let a = evaluate(&data, 0.7, 9, &Algorithm::default(), false).unwrap();
        let b = evaluate(&data, 0.7, 9, &Algorithm::default(), false).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn loads_labeled_csv_and_fimi() {
        let csv = "a,cls,b\n1,x,0\n0,y,1\n";
        let data = LabeledDataset::load_csv(csv.as_bytes(), "cls").unwrap();
        assert_eq!(data.labels, labels(&["x", "y"]));
        assert_eq!(data.dataset.names(), &["a".to_string(), "b".to_string()]);
        assert_eq!(data.dataset.row(0), vec![true, false]);
        assert!(LabeledDataset::load_csv(csv.as_bytes(), "nope").is_err());

        let data = LabeledDataset::load_fimi("0 1\n1\n".as_bytes(), "p\nq\n".as_bytes()).unwrap();
        assert_eq!(data.classes(), labels(&["p", "q"]));
        assert!(LabeledDataset::load_fimi("0 1\n1\n".as_bytes(), "p\n".as_bytes()).is_err());
    }

    #[test]
    fn select_algorithm_trains() {
        let data = synth::two_class(150, 6, 4);
        let alg = Algorithm::Select {
            candidates: CandidateSource::Mine { minsup_frac: 0.1, max_len: Some(3) },
            options: SetPackOptions::default(),
        };
        let m = train(&data, &alg, true).unwrap();
        assert!(m.classes()[0].model.n_nontrivial() >= 1);
    }
}
