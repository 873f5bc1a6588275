//! Acts, decision problems, and interval expected utility.
//!
//! Each act carries its own outcome partition with a probability box per
//! outcome. The credal set of an act is every distribution on that
//! partition that respects the box. Expected utility over that set is a
//! linear program on the simplex with box constraints; it is solved
//! exactly by filling the residual mass greedily in utility order.

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::intervals::{Interval, ProbInterval};

/// Slack allowed when checking that probability boxes can sum to one.
pub const FEASIBILITY_TOL: f64 = 1e-9;

/// Interval expected utilities keyed by act name, in act order.
pub type EuTable = IndexMap<String, Interval>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Outcome {
    pub label: String,
    pub utility: f64,
    /// Omitted in input means `[0, 1]`.
    #[serde(default)]
    pub prob: ProbInterval,
}

impl Outcome {
    pub fn new(label: impl Into<String>, utility: f64, prob: ProbInterval) -> Self {
        Self { label: label.into(), utility, prob }
    }
}

/// An act with an exhaustive, mutually exclusive outcome partition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawAct")]
pub struct Act {
    name: String,
    outcomes: Vec<Outcome>,
}

#[derive(Deserialize)]
struct RawAct {
    name: String,
    outcomes: Vec<Outcome>,
}

impl TryFrom<RawAct> for Act {
    type Error = Error;

    fn try_from(raw: RawAct) -> Result<Self> {
        Act::new(raw.name, raw.outcomes)
    }
}

impl Act {
    pub fn new(name: impl Into<String>, outcomes: Vec<Outcome>) -> Result<Self> {
        let name = name.into();
        if outcomes.is_empty() {
            return Err(Error::EmptyAct(name));
        }
        for (i, o) in outcomes.iter().enumerate() {
            if outcomes[..i].iter().any(|p| p.label == o.label) {
                return Err(Error::Duplicate(format!("{name}/{}", o.label)));
            }
        }
        Ok(Self { name, outcomes })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn outcomes(&self) -> &[Outcome] {
        &self.outcomes
    }

    pub fn outcome(&self, label: &str) -> Option<&Outcome> {
        self.outcomes.iter().find(|o| o.label == label)
    }

    pub fn outcome_index(&self, label: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o.label == label)
    }

    /// Replaces the probability box of the outcome at `index`.
    pub fn set_prob(&mut self, index: usize, prob: ProbInterval) {
        self.outcomes[index].prob = prob;
    }

    pub fn is_feasible(&self) -> bool {
        let (lo, hi) = self.box_sums();
        lo <= 1.0 + FEASIBILITY_TOL && hi >= 1.0 - FEASIBILITY_TOL
    }

    pub fn check_feasible(&self) -> Result<()> {
        if self.is_feasible() {
            Ok(())
        } else {
            let (sum_lo, sum_hi) = self.box_sums();
            Err(Error::Infeasible { act: self.name.clone(), sum_lo, sum_hi })
        }
    }

    /// True when every outcome probability is a point.
    pub fn is_determinate(&self) -> bool {
        self.outcomes.iter().all(|o| o.prob.is_degenerate())
    }

    /// Expected utility under an explicit distribution over the outcomes.
    pub fn point_eu(&self, dist: &[f64]) -> f64 {
        self.outcomes.iter().zip(dist).map(|(o, p)| o.utility * p).sum()
    }

    fn box_sums(&self) -> (f64, f64) {
        self.outcomes
            .iter()
            .fold((0.0, 0.0), |(lo, hi), o| (lo + o.prob.lo(), hi + o.prob.hi()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawProblem")]
pub struct DecisionProblem {
    name: String,
    acts: Vec<Act>,
}

#[derive(Deserialize)]
struct RawProblem {
    name: String,
    acts: Vec<Act>,
}

impl TryFrom<RawProblem> for DecisionProblem {
    type Error = Error;

    fn try_from(raw: RawProblem) -> Result<Self> {
        DecisionProblem::new(raw.name, raw.acts)
    }
}

impl DecisionProblem {
    pub fn new(name: impl Into<String>, acts: Vec<Act>) -> Result<Self> {
        let name = name.into();
        if acts.is_empty() {
            return Err(Error::EmptyProblem(name));
        }
        for (i, a) in acts.iter().enumerate() {
            if acts[..i].iter().any(|b| b.name == a.name) {
                return Err(Error::Duplicate(a.name.clone()));
            }
        }
        Ok(Self { name, acts })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn acts(&self) -> &[Act] {
        &self.acts
    }

    pub fn act(&self, name: &str) -> Option<&Act> {
        self.acts.iter().find(|a| a.name == name)
    }

    pub(crate) fn acts_mut(&mut self) -> &mut [Act] {
        &mut self.acts
    }

    pub fn is_determinate(&self) -> bool {
        self.acts.iter().all(Act::is_determinate)
    }
}

/// The two extremal distributions of an act's box together with the
/// interval they attain.
#[derive(Debug, Clone, PartialEq)]
pub struct EuBounds {
    pub interval: Interval,
    /// Distribution attaining the infimum, aligned with the outcome list.
    pub argmin: Vec<f64>,
    /// Distribution attaining the supremum.
    pub argmax: Vec<f64>,
}

/// Exact lower and upper expected utility of `act` over its probability box.
pub fn eu_interval(act: &Act) -> Result<Interval> {
    eu_bounds(act).map(|b| b.interval)
}

pub fn eu_bounds(act: &Act) -> Result<EuBounds> {
    act.check_feasible()?;
    let mut order: Vec<usize> = (0..act.outcomes.len()).collect();
    // stable sort: equal utilities keep declaration order
    order.sort_by(|&i, &j| act.outcomes[i].utility.total_cmp(&act.outcomes[j].utility));
    let argmin = fill_greedy(act, order.iter().copied());
    let argmax = fill_greedy(act, order.iter().rev().copied());
    let lo = act.point_eu(&argmin);
    let hi = act.point_eu(&argmax);
    let interval = Interval::new(lo.min(hi), lo.max(hi))?;
    Ok(EuBounds { interval, argmin, argmax })
}

fn fill_greedy(act: &Act, order: impl Iterator<Item = usize>) -> Vec<f64> {
    let mut dist: Vec<f64> = act.outcomes.iter().map(|o| o.prob.lo()).collect();
    let mut residual = (1.0 - dist.iter().sum::<f64>()).max(0.0);
    for i in order {
        if residual <= 0.0 {
            break;
        }
        let room = act.outcomes[i].prob.width();
        let add = room.min(residual);
        dist[i] += add;
        residual -= add;
    }
    dist
}

/// Interval expected utility of every act, in act order.
pub fn eu_all(problem: &DecisionProblem) -> Result<EuTable> {
    problem
        .acts
        .iter()
        .map(|a| Ok((a.name.clone(), eu_interval(a)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pi(lo: f64, hi: f64) -> ProbInterval {
        ProbInterval::new(lo, hi).unwrap()
    }

    fn act(outcomes: &[(&str, f64, f64, f64)]) -> Act {
        Act::new(
            "a",
            outcomes.iter().map(|&(l, u, lo, hi)| Outcome::new(l, u, pi(lo, hi))).collect(),
        )
        .unwrap()
    }

    fn assert_iv(i: Interval, lo: f64, hi: f64) {
        assert!((i.lo() - lo).abs() < 1e-9 && (i.hi() - hi).abs() < 1e-9, "{i:?} != [{lo}, {hi}]");
    }

    #[test]
    fn jerrys_berries_boxes() {
        assert_iv(eu_interval(&act(&[("G", 10.0, 0.75, 1.0), ("~G", -30.0, 0.0, 0.25)])).unwrap(), 0.0, 10.0);
        assert_iv(eu_interval(&act(&[("H", -10.0, 0.0, 0.55), ("~H", 0.0, 0.45, 1.0)])).unwrap(), -5.5, 0.0);
    }

    #[test]
    fn point_distribution_collapses() {
        let i = eu_interval(&act(&[("x", 1.0, 0.5, 0.5), ("y", -1.0, 0.5, 0.5)])).unwrap();
        assert_eq!(i.width(), 0.0);
        assert_iv(i, 0.0, 0.0);
    }

    #[test]
    fn three_outcomes() {
        let a = act(&[("a", 0.0, 0.1, 0.5), ("b", 5.0, 0.2, 0.6), ("c", 10.0, 0.1, 0.4)]);
        let b = eu_bounds(&a).unwrap();
        assert_iv(b.interval, 3.0, 6.5);
        assert!((b.argmin.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((b.argmax[2] - 0.4).abs() < 1e-12);
    }

    #[test]
    fn infeasible_box_names_the_act() {
        let a = Act::new("eat", vec![Outcome::new("G", 1.0, pi(0.7, 1.0)), Outcome::new("~G", 0.0, pi(0.5, 1.0))]).unwrap();
        match eu_interval(&a) {
            Err(Error::Infeasible { act, .. }) => assert_eq!(act, "eat"),
            other => panic!("expected infeasible, got {other:?}"),
        }
        let a = Act::new("skip", vec![Outcome::new("G", 1.0, pi(0.0, 0.2)), Outcome::new("~G", 0.0, pi(0.0, 0.3))]).unwrap();
        assert!(matches!(eu_all(&DecisionProblem::new("p", vec![a]).unwrap()), Err(Error::Infeasible { .. })));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Act::new("a", vec![]), Err(Error::EmptyAct(_))));
        let o = Outcome::new("x", 0.0, ProbInterval::VACUOUS);
        assert!(matches!(Act::new("a", vec![o.clone(), o.clone()]), Err(Error::Duplicate(_))));
        let a = Act::new("a", vec![o]).unwrap();
        assert!(matches!(DecisionProblem::new("p", vec![a.clone(), a]), Err(Error::Duplicate(_))));
        assert!(matches!(DecisionProblem::new("p", vec![]), Err(Error::EmptyProblem(_))));
    }

    #[test]
    fn eu_all_keeps_act_order() {
        let p = DecisionProblem::new(
            "p",
            vec![
                Act::new("z", vec![Outcome::new("x", 1.0, ProbInterval::CERTAIN)]).unwrap(),
                Act::new("a", vec![Outcome::new("x", 2.0, ProbInterval::CERTAIN)]).unwrap(),
            ],
        )
        .unwrap();
        let t = eu_all(&p).unwrap();
        assert_eq!(t.keys().collect::<Vec<_>>(), ["z", "a"]);
        assert_eq!(t["a"], Interval::point(2.0));
    }
}
