//! Best-first exploration of a credal sequence, plus two alternative
//! resolvers for indecisive problems: Starr's criterion and expectation
//! under a higher-order measure.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::acceptance::{CredalSequence, ReferenceClassTable};
use crate::error::{Error, Result};
use crate::eu::{eu_all, DecisionProblem, EuTable};
use crate::ordering::maximal_set;

/// Slack on weights and distributions that must sum to one.
pub const SUM_TOL: f64 = 1e-9;

/// How much error a decision problem tolerates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ToleranceSpec {
    /// Levels with error at or above `max_error` are not consulted.
    Explicit(f64),
    /// Derived from the problem's best gain and worst loss: with odds ratio
    /// `rho = max(gain, loss) / min(gain, loss)` and `w = rho / (rho + 1)`,
    /// the tolerance is `1 - w`.
    OddsDerived,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        ToleranceSpec::Explicit(0.5)
    }
}

pub fn odds_weight(problem: &DecisionProblem) -> Result<f64> {
    let utilities = || problem.acts().iter().flat_map(|a| a.outcomes()).map(|o| o.utility);
    let gain = utilities().fold(0.0f64, f64::max);
    let loss = utilities().fold(0.0f64, |m, u| m.max(-u));
    if gain <= 0.0 {
        return Err(Error::NoStakes("no outcome has positive utility"));
    }
    if loss <= 0.0 {
        return Err(Error::NoStakes("no outcome has negative utility"));
    }
    let rho = gain.max(loss) / gain.min(loss);
    Ok(rho / (rho + 1.0))
}

pub fn tolerable_error(problem: &DecisionProblem, spec: ToleranceSpec) -> Result<f64> {
    match spec {
        ToleranceSpec::Explicit(e) if (0.0..=1.0).contains(&e) => Ok(e),
        ToleranceSpec::Explicit(e) => Err(Error::OutOfRange { name: "max_error", value: e, range: "[0, 1]" }),
        ToleranceSpec::OddsDerived => Ok(1.0 - odds_weight(problem)?),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "act", rename_all = "snake_case")]
pub enum DecisionStatus {
    /// A level's maximal set is a single act.
    Decided(String),
    /// A level fixes every probability; the act maximizes point expected
    /// utility.
    RiskProblem(String),
    /// No tolerable level singles out an act.
    NoMandate,
}

impl DecisionStatus {
    pub fn act(&self) -> Option<&str> {
        match self {
            DecisionStatus::Decided(a) | DecisionStatus::RiskProblem(a) => Some(a),
            DecisionStatus::NoMandate => None,
        }
    }
}

/// What one explored level looked like.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub index: usize,
    pub error: f64,
    pub utilities: EuTable,
    pub maximal_set: Vec<String>,
    pub determinate: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub status: DecisionStatus,
    pub level_used: Option<usize>,
    pub error_used: Option<f64>,
    pub tolerance: f64,
    /// Set when a risk problem had several acts with the top expected
    /// utility; the first of them is reported.
    pub ambiguous: bool,
    pub trace: Vec<TraceRow>,
}

/// Walks `seq` in order and stops at the first level that decides.
///
/// A level is consulted only while its error is below the tolerance. At each
/// consulted level the interval expected utilities and maximal set are
/// computed; a level whose boxes are all points yields a risk problem,
/// otherwise a singleton maximal set decides. The sequence is never
/// modified.
pub fn explore(
    problem: &DecisionProblem,
    seq: &CredalSequence,
    refs: &ReferenceClassTable,
    spec: ToleranceSpec,
) -> Result<DecisionReport> {
    let tolerance = tolerable_error(problem, spec)?;
    let mut trace = Vec::new();
    for level in seq.levels() {
        if level.error >= tolerance {
            break;
        }
        let resolved = level.resolve(problem, refs)?;
        let utilities =
            eu_all(&resolved).map_err(|e| Error::Level { level: level.index, source: Box::new(e) })?;
        let maximal = maximal_set(&utilities)?;
        let determinate = resolved.is_determinate();
        trace.push(TraceRow {
            index: level.index,
            error: level.error,
            utilities: utilities.clone(),
            maximal_set: maximal.acts.clone(),
            determinate,
        });
        let finish = |status, ambiguous| DecisionReport {
            status,
            level_used: Some(level.index),
            error_used: Some(level.error),
            tolerance,
            ambiguous,
            trace: trace.clone(),
        };
        if determinate {
            let best = utilities.values().map(|i| i.lo()).fold(f64::NEG_INFINITY, f64::max);
            let mut top = utilities.iter().filter(|(_, i)| i.lo() == best).map(|(n, _)| n);
            let act = top.next().expect("problem has acts").clone();
            let ambiguous = top.next().is_some();
            return Ok(finish(DecisionStatus::RiskProblem(act), ambiguous));
        }
        if maximal.is_singleton() {
            return Ok(finish(DecisionStatus::Decided(maximal.acts[0].clone()), false));
        }
    }
    Ok(DecisionReport {
        status: DecisionStatus::NoMandate,
        level_used: None,
        error_used: None,
        tolerance,
        ambiguous: false,
        trace,
    })
}

/// Point probabilities for every outcome of every act, by label.
pub type Assignment = IndexMap<String, IndexMap<String, f64>>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedMember {
    pub assignment: Assignment,
    pub weight: f64,
}

/// A finite credal set with a higher-order measure on its members.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedCredal {
    pub members: Vec<WeightedMember>,
}

impl WeightedCredal {
    pub fn new(members: Vec<WeightedMember>) -> Result<Self> {
        if members.iter().any(|m| m.weight.is_nan() || m.weight < 0.0) {
            return Err(Error::InvalidWeights("negative weight".into()));
        }
        let total: f64 = members.iter().map(|m| m.weight).sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Ok(Self { members })
    }

    fn check_covers(&self, problem: &DecisionProblem) -> Result<()> {
        for (k, m) in self.members.iter().enumerate() {
            for act in problem.acts() {
                let dist = m
                    .assignment
                    .get(act.name())
                    .ok_or_else(|| Error::InvalidWeights(format!("member {k} has no assignment for `{}`", act.name())))?;
                let mut total = 0.0;
                for o in act.outcomes() {
                    let p = *dist.get(&o.label).ok_or_else(|| {
                        Error::InvalidWeights(format!("member {k} has no probability for `{}/{}`", act.name(), o.label))
                    })?;
                    if !(0.0..=1.0).contains(&p) {
                        return Err(Error::InvalidWeights(format!("member {k}: probability {p} outside [0, 1]")));
                    }
                    total += p;
                }
                if (total - 1.0).abs() > SUM_TOL {
                    return Err(Error::InvalidWeights(format!("member {k}: `{}` sums to {total}", act.name())));
                }
            }
        }
        Ok(())
    }

    /// The measure-weighted mixture of the members.
    pub fn mixture(&self, problem: &DecisionProblem) -> Result<Assignment> {
        self.check_covers(problem)?;
        Ok(problem
            .acts()
            .iter()
            .map(|act| {
                let dist = act
                    .outcomes()
                    .iter()
                    .map(|o| {
                        let p = self.members.iter().map(|m| m.weight * m.assignment[act.name()][&o.label]).sum();
                        (o.label.clone(), p)
                    })
                    .collect();
                (act.name().to_string(), dist)
            })
            .collect())
    }
}

/// Expected utility of each act averaged over the higher-order measure.
pub fn higher_order_eu(problem: &DecisionProblem, w: &WeightedCredal) -> Result<IndexMap<String, f64>> {
    w.check_covers(problem)?;
    Ok(problem
        .acts()
        .iter()
        .map(|act| {
            let eu = w
                .members
                .iter()
                .map(|m| {
                    let dist = &m.assignment[act.name()];
                    let point: f64 = act.outcomes().iter().map(|o| dist[&o.label] * o.utility).sum();
                    point * m.weight
                })
                .sum();
            (act.name().to_string(), eu)
        })
        .collect())
}

/// `P(act, outcome) = intercept + slope * theta`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThetaBinding {
    pub act: String,
    pub outcome: String,
    #[serde(default)]
    pub intercept: f64,
    #[serde(default)]
    pub slope: f64,
}

/// A one-parameter family of point distributions, measured by a uniform
/// prior on `[theta_lo, theta_hi]`.
///
/// Outcomes without a binding keep their declared probability, which must
/// then be a point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParameterizedCredal {
    pub theta_lo: f64,
    pub theta_hi: f64,
    pub resolution: usize,
    pub bindings: Vec<ThetaBinding>,
}

impl ParameterizedCredal {
    /// Grid cell midpoints.
    pub fn grid(&self) -> impl Iterator<Item = f64> + '_ {
        let h = (self.theta_hi - self.theta_lo) / self.resolution as f64;
        (0..self.resolution).map(move |k| self.theta_lo + (k as f64 + 0.5) * h)
    }

    /// Point expected utility of every act at `theta`.
    pub fn point_eus(&self, problem: &DecisionProblem, theta: f64) -> Result<Vec<f64>> {
        problem
            .acts()
            .iter()
            .map(|act| {
                let mut total = 0.0;
                let mut eu = 0.0;
                for o in act.outcomes() {
                    let bound = self.bindings.iter().find(|b| b.act == act.name() && b.outcome == o.label);
                    let p = match bound {
                        Some(b) => b.intercept + b.slope * theta,
                        None if o.prob.is_degenerate() => o.prob.lo(),
                        None => {
                            return Err(Error::InvalidParameterization(format!(
                                "`{}/{}` is neither bound to theta nor a point",
                                act.name(),
                                o.label
                            )))
                        }
                    };
                    if !(-SUM_TOL..=1.0 + SUM_TOL).contains(&p) {
                        return Err(Error::InvalidParameterization(format!(
                            "P({}/{}) = {p} at theta = {theta}",
                            act.name(),
                            o.label
                        )));
                    }
                    total += p;
                    eu += p * o.utility;
                }
                if (total - 1.0).abs() > SUM_TOL {
                    return Err(Error::InvalidParameterization(format!(
                        "`{}` sums to {total} at theta = {theta}",
                        act.name()
                    )));
                }
                Ok(eu)
            })
            .collect()
    }

    fn validate(&self, problem: &DecisionProblem) -> Result<()> {
        if self.theta_lo.is_nan() || self.theta_hi.is_nan() || self.theta_lo >= self.theta_hi {
            return Err(Error::InvalidParameterization("theta range is empty".into()));
        }
        if self.resolution < 100 {
            return Err(Error::InvalidParameterization(format!("resolution {} is below 100", self.resolution)));
        }
        for b in &self.bindings {
            let act = problem.act(&b.act).ok_or_else(|| Error::UnknownAct(b.act.clone()))?;
            if act.outcome(&b.outcome).is_none() {
                return Err(Error::UnknownOutcome { act: b.act.clone(), outcome: b.outcome.clone() });
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StarrResult {
    pub chosen: String,
    /// Share of the parameter range on which each act is optimal.
    pub measures: IndexMap<String, f64>,
}

/// Starr's criterion: choose the act that is expected-utility optimal on the
/// largest share of the parameter range. Ties at a grid point split the
/// cell evenly; ties in measure go to the earlier act.
pub fn starr(problem: &DecisionProblem, p: &ParameterizedCredal) -> Result<StarrResult> {
    p.validate(problem)?;
    let n = problem.acts().len();
    let mut counts = vec![0.0; n];
    for theta in p.grid() {
        let eus = p.point_eus(problem, theta)?;
        let best = eus.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let tol = 1e-12 * best.abs().max(1.0);
        let winners: Vec<usize> = (0..n).filter(|&i| eus[i] >= best - tol).collect();
        let share = 1.0 / winners.len() as f64;
        for i in winners {
            counts[i] += share;
        }
    }
    let measures: IndexMap<String, f64> = problem
        .acts()
        .iter()
        .zip(&counts)
        .map(|(a, c)| (a.name().to_string(), c / p.resolution as f64))
        .collect();
    let mut chosen = &problem.acts()[0];
    let mut top = measures[0];
    for (act, &m) in problem.acts().iter().zip(measures.values()) {
        if m > top {
            top = m;
            chosen = act;
        }
    }
    Ok(StarrResult { chosen: chosen.name().to_string(), measures })
}
