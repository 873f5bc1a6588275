use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]: {reason}")]
    InvalidInterval { lo: f64, hi: f64, reason: &'static str },

    #[error("act `{act}` has an infeasible probability box (sum of lower bounds {sum_lo}, sum of upper bounds {sum_hi})")]
    Infeasible { act: String, sum_lo: f64, sum_hi: f64 },

    #[error("act `{0}` has no outcomes")]
    EmptyAct(String),

    #[error("decision problem `{0}` has no acts")]
    EmptyProblem(String),

    #[error("duplicate name `{0}`")]
    Duplicate(String),

    #[error("unknown act `{0}`")]
    UnknownAct(String),

    #[error("act `{act}` has no outcome `{outcome}`")]
    UnknownOutcome { act: String, outcome: String },

    #[error("no utility intervals to order")]
    EmptyInput,

    #[error("parameter `{name}` = {value} is outside {range}")]
    OutOfRange { name: &'static str, value: f64, range: &'static str },

    #[error("invalid sample count: {successes} successes in {trials} trials")]
    InvalidSample { successes: u64, trials: u64 },

    #[error("body of knowledge at level {level} is inconsistent: `{first}` clashes with `{second}`")]
    InconsistentBody { level: usize, first: String, second: String },

    #[error("conditions `{first}` and `{second}` contradict each other")]
    ContradictoryConditions { first: String, second: String },

    #[error("conflicting constraints on outcome `{outcome}` of act `{act}`")]
    ConflictingOverrides { act: String, outcome: String },

    #[error("condition `{event}` applies to act `{act}`, whose partition is not binary")]
    NonBinaryCondition { act: String, event: String },

    #[error("no unique reference class for `{item}` and event `{event}`: {classes:?} are maximally specific and disagree")]
    AmbiguousReferenceClass { item: String, event: String, classes: Vec<String> },

    #[error("no reference class for `{item}` and event `{event}`")]
    NoReferenceClass { item: String, event: String },

    #[error("specificity order is not a strict partial order: `{0}` is more specific than itself")]
    CyclicSpecificity(String),

    #[error("credal sequence invalid: {0}")]
    InvalidSequence(String),

    #[error("credal level {level}: {source}")]
    Level {
        level: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("invalid mass function: {0}")]
    InvalidMass(String),

    #[error("total conflict between mass functions")]
    TotalConflict,

    #[error("target {target} is not bracketed on r in [0, 1] (values {at_zero} and {at_one})")]
    NotBracketed { target: f64, at_zero: f64, at_one: f64 },

    #[error("decision problem has no stakes: {0}")]
    NoStakes(&'static str),

    #[error("invalid weighting: {0}")]
    InvalidWeights(String),

    #[error("invalid parameterization: {0}")]
    InvalidParameterization(String),
}
