//! Compress binary transaction data with one decision tree per attribute,
//! scored by refined MDL, and read off the itemsets those trees depend on.
//!
//! Two ways to build a model:
//!
//! * [`greedypack::greedy_pack`] grows trees straight from the data, one
//!   split at a time, while a split still saves bits.
//! * [`setpack::set_pack`] restricts trees to a downward-closed candidate
//!   family (for instance frequent itemsets from [`candidates::mine_frequent`])
//!   and selects sources per attribute with a minimum spanning arborescence.
//!
//! [`extract::model_sets`] turns any model into its itemset family, and
//! [`classify`] uses per-class models as compression-based classifiers.
//!
//! ```
//! use packminer::dataset::{BinaryDataset, Format};
//! use packminer::greedypack::{greedy_pack, GreedyOptions};
//!
//! let ds = BinaryDataset::load("0 1\n0 1\n2\n0 1 2\n".as_bytes(), Format::Fimi).unwrap();
//! let (model, cost) = greedy_pack(&ds, &GreedyOptions::default());
//! assert!(cost.total <= packminer::dtree::TreeModel::trivial(&ds).cost().total);
//! assert_eq!(model.n_attrs(), 3);
//! ```

pub mod bitmap;
pub mod candidates;
pub mod classify;
pub mod cli;
pub mod dataset;
pub mod depgraph;
pub mod dtree;
pub mod error;
pub mod extract;
pub mod greedypack;
pub mod itemlist;
pub mod mdlcost;
pub mod par;
pub mod setpack;
pub mod synth;

pub use error::{Error, Result};
