use crate::types::NodeId;
use crate::twin::TwinStatus;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown dataset profile `{0}`")]
    UnknownProfile(String),

    #[error("duplicate feature name `{0}` in profile")]
    DuplicateFeature(String),

    #[error("categorical code {code} assigned to both `{first}` and `{second}` of feature `{feature}`")]
    DictionaryCollision {
        feature: String,
        code: u32,
        first: String,
        second: String,
    },

    #[error("invalid profile `{profile}`: {reason}")]
    InvalidProfile { profile: String, reason: String },

    #[error("input row is missing feature `{0}`")]
    MissingFeature(String),

    #[error("feature `{feature}`: cannot parse `{value}` as a number")]
    BadNumeric { feature: String, value: String },

    #[error("unknown label `{0}` for this profile")]
    UnknownLabel(String),

    #[error("row {row}: {source}")]
    Row {
        row: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("pool has {have} {class} records but {need} are required")]
    InsufficientRecords {
        class: &'static str,
        need: usize,
        have: usize,
    },

    #[error("record is not labeled")]
    UnlabeledRecord,

    #[error("unknown node `{0}`")]
    UnknownNode(NodeId),

    #[error("node `{node}`: illegal status transition {from:?} -> {to:?}")]
    IllegalTransition {
        node: NodeId,
        from: TwinStatus,
        to: TwinStatus,
    },

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("training data contains a single class but `{0}` needs both")]
    SingleClassTrainingSet(&'static str),

    #[error("single-class data: `{0}` needs both classes present")]
    SingleClassData(&'static str),

    #[error("empty input data")]
    EmptyData,

    #[error("invalid feature indices: {0}")]
    InvalidFeatures(String),

    #[error("schema fingerprint mismatch: model built for {expected}, record carries {got}")]
    SchemaMismatch {
        expected: crate::types::SchemaFingerprint,
        got: crate::types::SchemaFingerprint,
    },

    #[error("batch holds {got} records but the configuration expects {want}")]
    BatchSizeMismatch { want: usize, got: usize },

    #[error("baseline dataset is empty")]
    EmptyBaseline,

    #[error("candidate model rejected: {0}")]
    InvalidModel(String),

    #[error("unknown approval request {0}")]
    UnknownApproval(u64),

    #[error("approval request {0} was already resolved")]
    AlreadyResolved(u64),

    #[error("unknown classifier id `{0}`")]
    UnknownClassifier(String),

    #[error("unknown feature-selection id `{0}`")]
    UnknownFsMethod(String),

    #[error("experiment spec invalid: {0}")]
    InvalidSpec(String),

    #[error("dataset shortfall: class `{class}` needs {need} records, dataset has {have}")]
    DataShortfall {
        class: String,
        need: usize,
        have: usize,
    },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("toml parse error: {0}")]
    Toml(#[from] toml::de::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Wrap a record-level error with the 1-based row it occurred on.
    pub fn at_row(self, row: usize) -> Error {
        Error::Row {
            row,
            source: Box::new(self),
        }
    }
}
