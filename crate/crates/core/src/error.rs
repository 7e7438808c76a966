use alloc::string::String;

pub type Result<T, E = Error> = core::result::Result<T, E>;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("duplicate {kind} id `{id}`")]
    DuplicateId { kind: &'static str, id: String },
    #[error("{kind} `{id}` references unknown {target} `{target_id}`")]
    DanglingReference { kind: &'static str, id: String, target: &'static str, target_id: String },
    #[error("invalid record: {0}")]
    InvalidRecord(String),
    #[error("rating {0} is outside 1..=5")]
    RatingOutOfRange(i64),
    #[error("unknown {kind} `{id}`")]
    Unknown { kind: &'static str, id: String },
    #[error("feedback for `{comment_id}` by `{reader_id}` conflicts with stored rating {rating}")]
    FeedbackConflict { reader_id: String, comment_id: String, rating: u8 },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("no embedding for pair ({news_id}, {comment_id})")]
    MissingEmbedding { news_id: String, comment_id: String },
    #[error("no commenter has more than {0} comments")]
    NoEligibleCommenters(usize),
    #[error("commenter `{0}` has no comments")]
    NoComments(String),
    #[error("reader `{0}` has no offensive feedback")]
    EmptyFeedback(String),
    #[error("no reader has at least {0} feedback records")]
    NoEligibleReaders(usize),
    #[error("a commenter model is required for the proposed model kind")]
    MissingCommenterModel,
    #[error("operation is not defined for model kind `{0}`")]
    UnsupportedKind(&'static str),
    #[error("empty {0}")]
    Empty(&'static str),
    #[error("loss became non-finite at epoch {epoch}")]
    NonFiniteLoss { epoch: usize },
    #[error("score {0} is outside [0, 1]")]
    InvalidScore(f64),
    #[error("no positive labels")]
    NoPositives,
    #[error("at least {required} values required, got {actual}")]
    TooFewValues { required: usize, actual: usize },
    #[error("{artifact} fingerprint mismatch: expected {expected:016x}, found {found:016x}")]
    FingerprintMismatch { artifact: &'static str, expected: u64, found: u64 },
}
