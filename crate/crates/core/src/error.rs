use thiserror::Error;

use crate::dataset::ItemId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("empty input")]
    EmptyInput,

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("item {item} out of range (dataset has {n_attrs} attributes)")]
    ItemOutOfRange { item: ItemId, n_attrs: usize },

    #[error("attribute {0} appears more than once in a literal conjunction")]
    DuplicateAttribute(ItemId),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("tree targets differ: {0} vs {1}")]
    TargetMismatch(ItemId, ItemId),

    #[error("leaf counts inconsistent with the row partition: {0}")]
    InconsistentCounts(String),

    #[error("model is missing the tree for attribute {0}")]
    MissingTree(ItemId),

    #[error("dependency graph would contain a cycle through {0} -> {1}")]
    Cycle(ItemId, ItemId),

    #[error("no frequency available for itemset {0}")]
    MissingFrequency(String),

    #[error("inclusion-exclusion produced {0}, outside [0, 1]")]
    InconsistentFrequencies(f64),

    #[error("conditional probability undefined: leaf has probability zero")]
    UndefinedConditional,

    #[error("candidate family is infeasible: {0}")]
    Infeasible(String),

    #[error("class {0:?} has no training rows")]
    EmptyClass(String),

    #[error("training needs at least two classes, found {0}")]
    TooFewClasses(usize),

    #[error("split fraction {0} leaves one side empty")]
    DegenerateSplit(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed model: {0}")]
    Model(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}
