//! Dominance ordering over interval utilities and the probability-free
//! secondary criteria (maximin, min-regret, Hurwicz, leximin) together with
//! midpoint ranking.
//!
//! Every tie is broken by act order, i.e. the order of the [`EuTable`] or of
//! the problem's act list.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eu::{DecisionProblem, EuTable};
use crate::intervals::Interval;

/// Acts that no other act strictly dominates.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalSet {
    pub acts: Vec<String>,
    pub by: String,
}

impl MaximalSet {
    pub fn is_singleton(&self) -> bool {
        self.acts.len() == 1
    }

    pub fn contains(&self, act: &str) -> bool {
        self.acts.iter().any(|a| a == act)
    }
}

pub fn maximal_set(eu: &EuTable) -> Result<MaximalSet> {
    if eu.is_empty() {
        return Err(Error::EmptyInput);
    }
    let acts = eu
        .iter()
        .filter(|(_, a)| !eu.values().any(|b| b.dominates(a)))
        .map(|(name, _)| name.clone())
        .collect();
    Ok(MaximalSet { acts, by: "interval dominance".into() })
}

/// First act (in table order) maximizing `score`.
fn argmax_by(eu: &EuTable, score: impl Fn(&Interval) -> f64) -> Result<String> {
    let mut best: Option<(&String, f64)> = None;
    for (name, i) in eu {
        let s = score(i);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((name, s));
        }
    }
    best.map(|(n, _)| n.clone()).ok_or(Error::EmptyInput)
}

/// The act with the best worst-case expected utility.
pub fn maximin(eu: &EuTable) -> Result<String> {
    argmax_by(eu, Interval::lo)
}

/// The act with the best best-case expected utility.
pub fn maximax(eu: &EuTable) -> Result<String> {
    argmax_by(eu, Interval::hi)
}

/// Worst-case regret of each act, in table order.
///
/// With independent per-act boxes the adversary can put every other act at
/// its upper bound while this act sits at its lower bound, so the regret of
/// `a` is `max(0, max_{b != a} hi(b) - lo(a))`.
pub fn regrets(eu: &EuTable) -> Vec<(String, f64)> {
    eu.iter()
        .enumerate()
        .map(|(i, (name, a))| {
            let best_other = eu
                .values()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, b)| b.hi())
                .fold(f64::NEG_INFINITY, f64::max);
            (name.clone(), (best_other - a.lo()).max(0.0))
        })
        .collect()
}

/// The act minimizing worst-case regret.
pub fn min_regret(eu: &EuTable) -> Result<String> {
    let mut best: Option<(String, f64)> = None;
    for (name, r) in regrets(eu) {
        if best.as_ref().is_none_or(|(_, b)| r < *b) {
            best = Some((name, r));
        }
    }
    best.map(|(n, _)| n).ok_or(Error::EmptyInput)
}

/// Optimism-pessimism index `alpha * hi + (1 - alpha) * lo`.
pub fn hurwicz(eu: &EuTable, alpha: f64) -> Result<String> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::OutOfRange { name: "alpha", value: alpha, range: "[0, 1]" });
    }
    argmax_by(eu, |i| alpha * i.hi() + (1.0 - alpha) * i.lo())
}

/// Acts sorted by descending interval midpoint.
pub fn midpoint_rank(eu: &EuTable) -> Result<Vec<String>> {
    if eu.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut ranked: Vec<(&String, f64)> = eu.iter().map(|(n, i)| (n, i.midpoint())).collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(ranked.into_iter().map(|(n, _)| n.clone()).collect())
}

/// Lexicographic maximin on outcome utilities, ignoring probabilities.
///
/// Each act's utilities are sorted ascending and compared position by
/// position over their common length. Acts equal on that prefix tie.
pub fn leximin(problem: &DecisionProblem) -> Result<String> {
    let sorted: Vec<(&str, Vec<f64>)> = problem
        .acts()
        .iter()
        .map(|a| {
            let mut u: Vec<f64> = a.outcomes().iter().map(|o| o.utility).collect();
            u.sort_by(f64::total_cmp);
            (a.name(), u)
        })
        .collect();
    let mut best = sorted.first().ok_or(Error::EmptyInput)?;
    for cand in &sorted[1..] {
        if leximin_cmp(&cand.1, &best.1) == Ordering::Greater {
            best = cand;
        }
    }
    Ok(best.0.to_string())
}

fn leximin_cmp(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Choices of every criterion on one utility table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriteriaReport {
    pub maximal_set: MaximalSet,
    /// Acts the secondary criteria were applied to.
    pub candidates: Vec<String>,
    pub maximin: String,
    pub min_regret: String,
    pub hurwicz_alpha: f64,
    pub hurwicz: String,
    pub midpoint_rank: Vec<String>,
    pub leximin: String,
}

/// Runs every criterion on `problem` with utilities `eu`.
///
/// With `within_maximal` the secondary criteria only see the maximal set
/// (expected utility first, weak method second); otherwise they see every
/// act.
pub fn secondary_criteria(
    problem: &DecisionProblem,
    eu: &EuTable,
    alpha: f64,
    within_maximal: bool,
) -> Result<CriteriaReport> {
    let maximal = maximal_set(eu)?;
    let (table, sub) = if within_maximal {
        let table: EuTable = eu
            .iter()
            .filter(|(n, _)| maximal.contains(n))
            .map(|(n, i)| (n.clone(), *i))
            .collect();
        let acts = problem.acts().iter().filter(|a| maximal.contains(a.name())).cloned().collect();
        (table, DecisionProblem::new(problem.name(), acts)?)
    } else {
        (eu.clone(), problem.clone())
    };
    Ok(CriteriaReport {
        candidates: table.keys().cloned().collect(),
        maximin: maximin(&table)?,
        min_regret: min_regret(&table)?,
        hurwicz_alpha: alpha,
        hurwicz: hurwicz(&table, alpha)?,
        midpoint_rank: midpoint_rank(&table)?,
        leximin: leximin(&sub)?,
        maximal_set: maximal,
    })
}
