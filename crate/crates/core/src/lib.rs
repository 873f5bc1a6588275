//! Decisions under partial ignorance.
//!
//! Probabilities are given as intervals, so expected utilities are intervals
//! too. Acts are ordered by interval dominance. When the dominance order
//! leaves more than one candidate, the engine walks an error-indexed
//! sequence of credal levels (each generated from a body of accepted
//! statements) and decides with the least error-prone level that is
//! decisive, or reports that no level within the tolerable error mandates
//! anything.
//!
//! Modules:
//! - [`intervals`]: closed intervals, probability intervals, dominance.
//! - [`eu`]: acts, decision problems and exact interval expected utility.
//! - [`ordering`]: maximal sets and probability-free secondary criteria.
//! - [`confidence`]: exact binomial (Clopper-Pearson) intervals.
//! - [`acceptance`]: statements, bodies of knowledge, acceptance rules,
//!   direct inference and credal levels.
//! - [`belief`]: Dempster-Shafer masses, combination and discounting.
//! - [`sequence`]: best-first exploration, tolerable error, Starr's
//!   criterion and higher-order expectation.

pub mod acceptance;
pub mod belief;
pub mod confidence;
mod error;
pub mod eu;
pub mod intervals;
pub mod ordering;
pub mod sequence;

pub use acceptance::{
    accept_next_most_probable, accept_threshold, direct_inference, is_nested, level_from_body,
    BodyOfKnowledge, Claim, CredalLevel, CredalSequence, ReferenceClassTable, Statement,
};
pub use belief::{bel_pl_interval, dempster_combine, discount, discount_threshold, MassFunction};
pub use confidence::{clopper_pearson, clopper_pearson_bound, Bound, SampleCount};
pub use error::{Error, Result};
pub use eu::{eu_all, eu_interval, Act, DecisionProblem, EuTable, Outcome};
pub use intervals::{frechet_and, Interval, ProbInterval};
pub use ordering::{
    hurwicz, leximin, maximal_set, maximax, maximin, midpoint_rank, min_regret, secondary_criteria,
    CriteriaReport, MaximalSet,
};
pub use sequence::{
    explore, higher_order_eu, starr, tolerable_error, DecisionReport, DecisionStatus,
    ParameterizedCredal, StarrResult, ToleranceSpec, TraceRow, WeightedCredal,
};
