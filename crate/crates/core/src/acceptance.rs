//! Bodies of knowledge, acceptance rules, direct inference, and the credal
//! levels they induce on a decision problem.
//!
//! A [`Claim`] is a single piece of accepted content: a probability interval
//! for an event (optionally conditional on accepted conditions), a condition
//! accepted as true, a class membership, a class frequency, a direct
//! per-act assignment, or a combined belief. A [`Statement`] is a claim
//! together with its probability relative to the initial body of knowledge;
//! acceptance rules use that probability to decide which bodies contain it.
//!
//! A [`CredalLevel`] is a set of claims with an error index. Resolving it
//! against a [`DecisionProblem`] turns the claims into per-outcome
//! probability boxes:
//!
//! * claims that touch an outcome replace its declared box by the
//!   intersection of everything they assert; an empty intersection is a
//!   conflict;
//! * in a two-outcome partition, a constraint on one outcome forces the
//!   complementary box on the other;
//! * a conditional event interval applies only when all of its conditions
//!   are accepted, and among applicable ones only the most specific
//!   condition sets are used;
//! * class memberships select a frequency interval by direct inference on
//!   the most specific accepted reference class.
//!
//! Labels starting with `~` denote the negation of the unprefixed label.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::belief::{bel_pl_interval, dempster_combine, discount, MassFunction};
use crate::error::{Error, Result};
use crate::eu::DecisionProblem;
use crate::intervals::ProbInterval;

/// The label of the negated event: `G` <-> `~G`.
pub fn negate(label: &str) -> String {
    match label.strip_prefix('~') {
        Some(rest) => rest.to_string(),
        None => format!("~{label}"),
    }
}

/// One evidence source feeding a [`Claim::Belief`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BeliefSource {
    pub masses: MassFunction,
    #[serde(default)]
    pub discount: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Claim {
    /// `P(event | given) in prob`.
    EventInterval {
        event: String,
        prob: ProbInterval,
        #[serde(default, skip_serializing_if = "BTreeSet::is_empty")]
        given: BTreeSet<String>,
    },
    /// `event` is accepted as true.
    Condition { event: String },
    /// `item` is accepted to belong to `class`.
    Membership { item: String, class: String },
    /// The frequency of `event` in `class` lies in `prob`.
    ClassFrequency { class: String, event: String, prob: ProbInterval },
    /// Direct assignment to one outcome of one act.
    OutcomeInterval { act: String, outcome: String, prob: ProbInterval },
    /// `[bel, pl]` of `event` under the Dempster combination of the
    /// (discounted) sources.
    Belief { event: String, sources: Vec<BeliefSource> },
}

impl Claim {
    pub fn event(event: impl Into<String>, prob: ProbInterval) -> Self {
        Claim::EventInterval { event: event.into(), prob, given: BTreeSet::new() }
    }

    pub fn conditional<S: Into<String>>(
        event: impl Into<String>,
        prob: ProbInterval,
        given: impl IntoIterator<Item = S>,
    ) -> Self {
        Claim::EventInterval {
            event: event.into(),
            prob,
            given: given.into_iter().map(Into::into).collect(),
        }
    }

    pub fn condition(event: impl Into<String>) -> Self {
        Claim::Condition { event: event.into() }
    }

    pub fn membership(item: impl Into<String>, class: impl Into<String>) -> Self {
        Claim::Membership { item: item.into(), class: class.into() }
    }

    pub fn outcome(act: impl Into<String>, outcome: impl Into<String>, prob: ProbInterval) -> Self {
        Claim::OutcomeInterval { act: act.into(), outcome: outcome.into(), prob }
    }

    /// True when `self` and `other` cannot both be accepted.
    fn clashes_with(&self, other: &Claim) -> bool {
        use Claim::*;
        match (self, other) {
            (EventInterval { event: e1, prob: p1, given: g1 }, EventInterval { event: e2, prob: p2, given: g2 }) => {
                e1 == e2 && g1 == g2 && p1.intersect(p2).is_none()
            }
            (Condition { event: a }, Condition { event: b }) => *a == negate(b),
            (ClassFrequency { class: c1, event: e1, prob: p1 }, ClassFrequency { class: c2, event: e2, prob: p2 }) => {
                c1 == c2 && e1 == e2 && p1.intersect(p2).is_none()
            }
            (
                OutcomeInterval { act: a1, outcome: o1, prob: p1 },
                OutcomeInterval { act: a2, outcome: o2, prob: p2 },
            ) => a1 == a2 && o1 == o2 && p1.intersect(p2).is_none(),
            _ => false,
        }
    }
}

/// A claim with its probability relative to the initial body of knowledge.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawStatement")]
pub struct Statement {
    pub id: String,
    #[serde(rename = "prob")]
    prob_given_init: f64,
    #[serde(flatten)]
    pub claim: Claim,
}

#[derive(Deserialize)]
struct RawStatement {
    id: String,
    prob: f64,
    #[serde(flatten)]
    claim: Claim,
}

impl TryFrom<RawStatement> for Statement {
    type Error = Error;

    fn try_from(raw: RawStatement) -> Result<Self> {
        Statement::new(raw.id, raw.claim, raw.prob)
    }
}

impl Statement {
    pub fn new(id: impl Into<String>, claim: Claim, prob_given_init: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&prob_given_init) {
            return Err(Error::OutOfRange { name: "prob", value: prob_given_init, range: "[0, 1]" });
        }
        Ok(Self { id: id.into(), prob_given_init, claim })
    }

    pub fn prob_given_init(&self) -> f64 {
        self.prob_given_init
    }

    /// Chance that accepting this statement introduces a falsehood.
    pub fn risk(&self) -> f64 {
        1.0 - self.prob_given_init
    }
}

/// A body of knowledge: accepted statements with an error index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BodyOfKnowledge {
    pub index: usize,
    pub error: f64,
    pub statements: Vec<Statement>,
}

impl BodyOfKnowledge {
    pub fn contains(&self, id: &str) -> bool {
        self.statements.iter().any(|s| s.id == id)
    }

    pub fn check_consistency(&self) -> Result<()> {
        for (i, a) in self.statements.iter().enumerate() {
            if let Some(b) = self.statements[..i].iter().find(|b| a.claim.clashes_with(&b.claim)) {
                return Err(Error::InconsistentBody {
                    level: self.index,
                    first: b.id.clone(),
                    second: a.id.clone(),
                });
            }
        }
        Ok(())
    }

    pub fn claims(&self) -> Vec<Claim> {
        self.statements.iter().map(|s| s.claim.clone()).collect()
    }
}

/// Threshold acceptance: body `j` holds every statement whose risk is below
/// `error_levels[j-1]`. Body 0 has error 0 and holds nothing.
pub fn accept_threshold(statements: &[Statement], error_levels: &[f64]) -> Result<Vec<BodyOfKnowledge>> {
    let mut prev = 0.0;
    for &e in error_levels {
        if !(e > prev && e <= 1.0) {
            return Err(Error::OutOfRange {
                name: "error level",
                value: e,
                range: "(0, 1], strictly increasing",
            });
        }
        prev = e;
    }
    let mut bodies = vec![BodyOfKnowledge { index: 0, error: 0.0, statements: vec![] }];
    for (j, &e) in error_levels.iter().enumerate() {
        let body = BodyOfKnowledge {
            index: j + 1,
            error: e,
            statements: statements.iter().filter(|s| s.risk() < e).cloned().collect(),
        };
        body.check_consistency()?;
        bodies.push(body);
    }
    Ok(bodies)
}

/// Next-most-probable acceptance: each body adds the most probable statement
/// not yet accepted. Equal probabilities keep declaration order. The error
/// of a body is the largest risk among its statements.
pub fn accept_next_most_probable(init: &[Statement]) -> Result<Vec<BodyOfKnowledge>> {
    let mut order: Vec<&Statement> = init.iter().collect();
    order.sort_by(|a, b| b.prob_given_init.total_cmp(&a.prob_given_init));
    let mut bodies = vec![BodyOfKnowledge { index: 0, error: 0.0, statements: vec![] }];
    for s in order {
        let last = bodies.last().expect("chain starts non-empty");
        let mut statements = last.statements.clone();
        statements.push(s.clone());
        let body = BodyOfKnowledge {
            index: last.index + 1,
            error: last.error.max(s.risk()),
            statements,
        };
        body.check_consistency()?;
        bodies.push(body);
    }
    Ok(bodies)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RefEntry {
    pub class: String,
    pub event: String,
    pub prob: ProbInterval,
}

/// Reference-class frequencies with an explicit specificity order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "RawRefs", into = "RawRefs")]
pub struct ReferenceClassTable {
    entries: Vec<RefEntry>,
    declared: Vec<(String, String)>,
    /// Transitive closure of `declared`: (more specific, less specific).
    closure: BTreeSet<(String, String)>,
}

#[derive(Serialize, Deserialize)]
struct RawRefs {
    #[serde(default)]
    entries: Vec<RefEntry>,
    /// Pairs `[more specific, less specific]`.
    #[serde(default)]
    more_specific: Vec<(String, String)>,
}

impl TryFrom<RawRefs> for ReferenceClassTable {
    type Error = Error;

    fn try_from(raw: RawRefs) -> Result<Self> {
        ReferenceClassTable::new(raw.entries, raw.more_specific)
    }
}

impl From<ReferenceClassTable> for RawRefs {
    fn from(t: ReferenceClassTable) -> Self {
        RawRefs { entries: t.entries, more_specific: t.declared }
    }
}

impl ReferenceClassTable {
    pub fn new(entries: Vec<RefEntry>, more_specific: Vec<(String, String)>) -> Result<Self> {
        for (i, e) in entries.iter().enumerate() {
            if entries[..i].iter().any(|f| f.class == e.class && f.event == e.event) {
                return Err(Error::Duplicate(format!("{}/{}", e.class, e.event)));
            }
        }
        let mut closure: BTreeSet<(String, String)> = more_specific.iter().cloned().collect();
        loop {
            let extra: Vec<(String, String)> = closure
                .iter()
                .flat_map(|(a, b)| {
                    closure
                        .iter()
                        .filter(move |(c, _)| c == b)
                        .map(move |(_, d)| (a.clone(), d.clone()))
                })
                .filter(|p| !closure.contains(p))
                .collect();
            if extra.is_empty() {
                break;
            }
            closure.extend(extra);
        }
        if let Some((a, _)) = closure.iter().find(|(a, b)| a == b) {
            return Err(Error::CyclicSpecificity(a.clone()));
        }
        Ok(Self { entries, declared: more_specific, closure })
    }

    pub fn entries(&self) -> &[RefEntry] {
        &self.entries
    }

    pub fn frequency(&self, class: &str, event: &str) -> Option<ProbInterval> {
        self.entries
            .iter()
            .find(|e| e.class == class && e.event == event)
            .map(|e| e.prob)
    }

    pub fn more_specific(&self, a: &str, b: &str) -> bool {
        self.closure.contains(&(a.to_string(), b.to_string()))
    }

    /// A copy with extra frequency entries. Entries already present for the
    /// same class and event are intersected with the new ones.
    fn with_frequencies(&self, extra: &[RefEntry]) -> Result<Self> {
        let mut t = self.clone();
        for e in extra {
            match t.entries.iter_mut().find(|f| f.class == e.class && f.event == e.event) {
                Some(f) => {
                    f.prob = f.prob.intersect(&e.prob).ok_or_else(|| Error::ConflictingOverrides {
                        act: format!("class {}", e.class),
                        outcome: e.event.clone(),
                    })?;
                }
                None => t.entries.push(e.clone()),
            }
        }
        Ok(t)
    }
}

/// The frequency interval of the most specific accepted class that has a
/// frequency for `target`.
///
/// Several maximally specific classes are allowed only when they agree.
pub fn direct_inference(
    item: &str,
    target: &str,
    accepted_classes: &[String],
    refs: &ReferenceClassTable,
) -> Result<ProbInterval> {
    let candidates: BTreeMap<&str, ProbInterval> = accepted_classes
        .iter()
        .filter_map(|c| refs.frequency(c, target).map(|p| (c.as_str(), p)))
        .collect();
    let maximal: Vec<(&str, ProbInterval)> = candidates
        .iter()
        .filter(|(c, _)| !candidates.keys().any(|d| refs.more_specific(d, c)))
        .map(|(c, p)| (*c, *p))
        .collect();
    match maximal.as_slice() {
        [] => Err(Error::NoReferenceClass { item: item.into(), event: target.into() }),
        [(_, p), rest @ ..] if rest.iter().all(|(_, q)| q == p) => Ok(*p),
        _ => Err(Error::AmbiguousReferenceClass {
            item: item.into(),
            event: target.into(),
            classes: maximal.iter().map(|(c, _)| c.to_string()).collect(),
        }),
    }
}

/// A credal level: the claims in force at one error index.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CredalLevel {
    pub index: usize,
    pub error: f64,
    #[serde(default)]
    pub claims: Vec<Claim>,
}

impl CredalLevel {
    pub fn new(index: usize, error: f64, claims: Vec<Claim>) -> Self {
        Self { index, error, claims }
    }

    /// The problem with this level's probability boxes in place.
    pub fn resolve(&self, problem: &DecisionProblem, refs: &ReferenceClassTable) -> Result<DecisionProblem> {
        apply_claims(&self.claims, problem, refs)
            .map_err(|e| Error::Level { level: self.index, source: Box::new(e) })
    }
}

/// Credal levels ordered by index with non-decreasing error.
///
/// Boxes at later levels need not be contained in earlier ones.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<CredalLevel>", into = "Vec<CredalLevel>")]
pub struct CredalSequence {
    levels: Vec<CredalLevel>,
}

impl TryFrom<Vec<CredalLevel>> for CredalSequence {
    type Error = Error;

    fn try_from(levels: Vec<CredalLevel>) -> Result<Self> {
        CredalSequence::new(levels)
    }
}

impl From<CredalSequence> for Vec<CredalLevel> {
    fn from(s: CredalSequence) -> Self {
        s.levels
    }
}

impl CredalSequence {
    pub fn new(levels: Vec<CredalLevel>) -> Result<Self> {
        for l in &levels {
            if !(0.0..=1.0).contains(&l.error) {
                return Err(Error::InvalidSequence(format!("level {} has error {} outside [0, 1]", l.index, l.error)));
            }
        }
        for w in levels.windows(2) {
            if w[1].index <= w[0].index {
                return Err(Error::InvalidSequence(format!(
                    "level indices must increase ({} then {})",
                    w[0].index, w[1].index
                )));
            }
            if w[1].error < w[0].error {
                return Err(Error::InvalidSequence(format!(
                    "level {} has smaller error than level {}",
                    w[1].index, w[0].index
                )));
            }
        }
        Ok(Self { levels })
    }

    pub fn levels(&self) -> &[CredalLevel] {
        &self.levels
    }

    pub fn level(&self, index: usize) -> Option<&CredalLevel> {
        self.levels.iter().find(|l| l.index == index)
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }
}

/// Rules that generate bodies of knowledge from statements.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AcceptanceRule {
    /// One body per error level, holding every statement with smaller risk.
    Threshold(Vec<f64>),
    /// Grow the body one most-probable statement at a time.
    NextMostProbable,
}

/// Bodies of knowledge for `rule`, in index order.
pub fn generate_bodies(statements: &[Statement], rule: &AcceptanceRule) -> Result<Vec<BodyOfKnowledge>> {
    match rule {
        AcceptanceRule::Threshold(levels) => accept_threshold(statements, levels),
        AcceptanceRule::NextMostProbable => accept_next_most_probable(statements),
    }
}

/// Generates bodies with `rule` and turns each into a credal level.
pub fn generate_sequence(
    statements: &[Statement],
    rule: &AcceptanceRule,
    problem: &DecisionProblem,
    refs: &ReferenceClassTable,
) -> Result<CredalSequence> {
    let levels = generate_bodies(statements, rule)?
        .iter()
        .map(|k| level_from_body(k, problem, refs))
        .collect::<Result<Vec<_>>>()?;
    CredalSequence::new(levels)
}

/// Takes the statements of `k` as constraints on `problem` and records the
/// resulting box of every outcome as a direct assignment.
pub fn level_from_body(
    k: &BodyOfKnowledge,
    problem: &DecisionProblem,
    refs: &ReferenceClassTable,
) -> Result<CredalLevel> {
    k.check_consistency()?;
    let resolved = CredalLevel::new(k.index, k.error, k.claims()).resolve(problem, refs)?;
    let claims = resolved
        .acts()
        .iter()
        .flat_map(|a| a.outcomes().iter().map(move |o| Claim::outcome(a.name(), &o.label, o.prob)))
        .collect();
    Ok(CredalLevel::new(k.index, k.error, claims))
}

/// True when every later level's boxes sit inside every earlier level's.
pub fn is_nested(seq: &CredalSequence, problem: &DecisionProblem, refs: &ReferenceClassTable) -> Result<bool> {
    let resolved = seq
        .levels()
        .iter()
        .map(|l| l.resolve(problem, refs))
        .collect::<Result<Vec<_>>>()?;
    for (j, earlier) in resolved.iter().enumerate() {
        for later in &resolved[j + 1..] {
            let contained = earlier.acts().iter().zip(later.acts()).all(|(a, b)| {
                a.outcomes()
                    .iter()
                    .zip(b.outcomes())
                    .all(|(x, y)| x.prob.contains_interval(&y.prob))
            });
            if !contained {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

fn combined_belief(event: &str, sources: &[BeliefSource]) -> Result<ProbInterval> {
    let (first, rest) = sources
        .split_first()
        .ok_or_else(|| Error::InvalidMass(format!("belief on `{event}` has no sources")))?;
    let mut m = discount(&first.masses, first.discount)?;
    for s in rest {
        m = dempster_combine(&m, &discount(&s.masses, s.discount)?)?;
    }
    let e = m.subset(&[event])?;
    bel_pl_interval(&m, e)
}

/// Applies `claims` to the declared boxes of `problem`.
pub fn apply_claims(
    claims: &[Claim],
    problem: &DecisionProblem,
    refs: &ReferenceClassTable,
) -> Result<DecisionProblem> {
    let conditions: BTreeSet<&str> = claims
        .iter()
        .filter_map(|c| match c {
            Claim::Condition { event } => Some(event.as_str()),
            _ => None,
        })
        .collect();
    for c in &conditions {
        let neg = negate(c);
        if conditions.contains(neg.as_str()) && !c.starts_with('~') {
            return Err(Error::ContradictoryConditions { first: c.to_string(), second: neg });
        }
    }

    let frequencies: Vec<RefEntry> = claims
        .iter()
        .filter_map(|c| match c {
            Claim::ClassFrequency { class, event, prob } => {
                Some(RefEntry { class: class.clone(), event: event.clone(), prob: *prob })
            }
            _ => None,
        })
        .collect();
    let refs = refs.with_frequencies(&frequencies)?;

    let mut event_constraints: Vec<(String, ProbInterval)> = Vec::new();

    // Conditional event intervals: the most specific applicable condition sets.
    let applicable: Vec<(&String, &ProbInterval, &BTreeSet<String>)> = claims
        .iter()
        .filter_map(|c| match c {
            Claim::EventInterval { event, prob, given }
                if given.iter().all(|g| conditions.contains(g.as_str())) =>
            {
                Some((event, prob, given))
            }
            _ => None,
        })
        .collect();
    for &(event, prob, given) in &applicable {
        let superseded = applicable
            .iter()
            .any(|&(e, _, g)| e == event && g.len() > given.len() && given.is_subset(g));
        if !superseded {
            event_constraints.push((event.clone(), *prob));
        }
    }

    // Direct inference, item by item.
    let mut memberships: BTreeMap<&str, Vec<String>> = BTreeMap::new();
    for c in claims {
        if let Claim::Membership { item, class } = c {
            memberships.entry(item).or_default().push(class.clone());
        }
    }
    for (item, classes) in &memberships {
        let events: BTreeSet<&str> = refs
            .entries()
            .iter()
            .filter(|e| classes.contains(&e.class))
            .map(|e| e.event.as_str())
            .collect();
        for event in events {
            let p = direct_inference(item, event, classes, &refs)?;
            event_constraints.push((event.to_string(), p));
        }
    }

    for c in claims {
        if let Claim::Belief { event, sources } = c {
            event_constraints.push((event.clone(), combined_belief(event, sources)?));
        }
    }

    let mut outcome_constraints: Vec<(&str, usize, ProbInterval)> = Vec::new();
    for c in claims {
        if let Claim::OutcomeInterval { act, outcome, prob } = c {
            let a = problem.act(act).ok_or_else(|| Error::UnknownAct(act.clone()))?;
            let i = a.outcome_index(outcome).ok_or_else(|| Error::UnknownOutcome {
                act: act.clone(),
                outcome: outcome.clone(),
            })?;
            outcome_constraints.push((act.as_str(), i, *prob));
        }
    }

    let mut resolved = problem.clone();
    for act in resolved.acts_mut() {
        let n = act.outcomes().len();
        let binary = n == 2;
        let mut boxes: Vec<Vec<ProbInterval>> = vec![Vec::new(); n];
        let mut push = |i: usize, p: ProbInterval| {
            boxes[i].push(p);
            if binary {
                boxes[1 - i].push(p.complement());
            }
        };
        for (event, p) in &event_constraints {
            if let Some(i) = act.outcome_index(event) {
                push(i, *p);
            }
        }
        for cond in &conditions {
            if let Some(i) = act.outcome_index(cond) {
                if !binary {
                    return Err(Error::NonBinaryCondition { act: act.name().into(), event: cond.to_string() });
                }
                push(i, ProbInterval::CERTAIN);
            }
        }
        for &(name, i, p) in &outcome_constraints {
            if name == act.name() {
                push(i, p);
            }
        }
        for (i, cs) in boxes.iter().enumerate() {
            let Some((first, rest)) = cs.split_first() else { continue };
            let merged = rest.iter().try_fold(*first, |acc, p| acc.intersect(p)).ok_or_else(|| {
                Error::ConflictingOverrides {
                    act: act.name().into(),
                    outcome: act.outcomes()[i].label.clone(),
                }
            })?;
            act.set_prob(i, merged);
        }
        act.check_feasible()?;
    }
    Ok(resolved)
}
