//! End-to-end runs of the berry examples with pass/fail checks.

use std::fmt::Write;
use std::str::FromStr;

use anyhow::{anyhow, bail, Context};
use credal::acceptance::{is_nested, BeliefSource, Claim};
use credal::belief::{bel_pl_interval, dempster_combine, discount_threshold, MassFunction};
use credal::{
    clopper_pearson, clopper_pearson_bound, direct_inference, eu_all, explore, maximal_set, midpoint_rank, Bound,
    DecisionStatus, EuTable, Interval, SampleCount,
};

use crate::file::{Loaded, ProblemFile};

pub const FIXTURE_A: &str = include_str!("../fixtures/example_a.json");
pub const FIXTURE_B: &str = include_str!("../fixtures/example_b.json");
pub const FIXTURE_C: &str = include_str!("../fixtures/example_c.json");
pub const FIXTURE_C_LOTTERY: &str = include_str!("../fixtures/example_c_lottery.json");
pub const FIXTURE_D: &str = include_str!("../fixtures/example_d.json");

const TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Example {
    A,
    B,
    C,
    D,
}

impl FromStr for Example {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.to_ascii_uppercase().as_str() {
            "A" => Ok(Example::A),
            "B" => Ok(Example::B),
            "C" => Ok(Example::C),
            "D" => Ok(Example::D),
            _ => Err(format!("unknown example `{s}` (expected A, B, C or D)")),
        }
    }
}

#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone)]
pub struct Replication {
    pub title: &'static str,
    pub checks: Vec<Check>,
    /// Places where the printed figures and the engine disagree.
    pub discrepancies: Vec<String>,
}

impl Replication {
    fn new(title: &'static str) -> Self {
        Self { title, checks: Vec::new(), discrepancies: Vec::new() }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.into(), passed, detail: detail.into() });
    }

    fn interval(&mut self, name: &str, got: Interval, lo: f64, hi: f64) {
        let ok = (got.lo() - lo).abs() <= TOL && (got.hi() - hi).abs() <= TOL;
        self.check(name, ok, format!("got {got}, expected {}", Interval::new(lo, hi).unwrap()));
    }

    fn set(&mut self, name: &str, got: &[String], expected: &[&str]) {
        let ok = got.iter().map(String::as_str).eq(expected.iter().copied());
        self.check(name, ok, format!("got {{{}}}, expected {{{}}}", got.join(", "), expected.join(", ")));
    }

    fn status(&mut self, name: &str, got: &DecisionStatus, level: Option<usize>, act: &str, want_level: usize) {
        let ok = got.act() == Some(act) && level == Some(want_level);
        let level = level.map_or("none".to_string(), |l| l.to_string());
        self.check(name, ok, format!("got {got:?} at level {level}, expected {act} at level {want_level}"));
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        writeln!(out, "{}", self.title).unwrap();
        for c in &self.checks {
            let mark = if c.passed { "PASS" } else { "FAIL" };
            writeln!(out, "  {mark}  {}: {}", c.name, c.detail).unwrap();
        }
        for d in &self.discrepancies {
            writeln!(out, "  NOTE  {d}").unwrap();
        }
        let n = self.checks.iter().filter(|c| c.passed).count();
        writeln!(out, "{n}/{} checks passed", self.checks.len()).unwrap();
        out
    }
}

pub fn load_fixture(text: &str) -> anyhow::Result<Loaded> {
    ProblemFile::parse(text)?.load()
}

fn utilities_at(l: &Loaded, index: usize) -> anyhow::Result<EuTable> {
    let level = l.sequence.level(index).ok_or_else(|| anyhow!("fixture has no level {index}"))?;
    Ok(eu_all(&level.resolve(&l.problem, &l.refs)?)?)
}

pub fn replicate(example: Example) -> anyhow::Result<Replication> {
    match example {
        Example::A => example_a(),
        Example::B => example_b(),
        Example::C => example_c(),
        Example::D => example_d(),
    }
}

fn example_a() -> anyhow::Result<Replication> {
    let mut r = Replication::new("Example A: confidence-interval levels (.99 and .75)");
    let l = load_fixture(FIXTURE_A)?;

    let eu1 = utilities_at(&l, 1)?;
    r.interval("u(a1) at .99", eu1["a1"], -16.0, 10.0);
    r.interval("u(a2) at .99", eu1["a2"], -5.5, 0.0);
    r.set("maximal set at .99", &maximal_set(&eu1)?.acts, &["a1", "a2"]);
    r.discrepancies.push(format!(
        "the printed u(a1) at .99 is [-16.8, 10]; P(G) = [.35, 1] gives .35*10 - .65*30 = {:.4}",
        eu1["a1"].lo()
    ));

    let eu2 = utilities_at(&l, 2)?;
    r.interval("u(a1) at .75", eu2["a1"], 0.0, 10.0);
    r.interval("u(a2) at .75", eu2["a2"], -3.0, -1.5);
    r.set("maximal set at .75", &maximal_set(&eu2)?.acts, &["a1"]);

    let report = explore(&l.problem, &l.sequence, &l.refs, l.tolerance)?;
    r.status("decision", &report.status, report.level_used, "a1", 2);

    let printed_mp1 = (-16.8 + 10.0) / 2.0;
    let mp2 = eu1["a2"].midpoint();
    r.check(
        "midpoints at .99 with the printed -16.8",
        (printed_mp1 - -3.4f64).abs() <= TOL && (mp2 - -2.75f64).abs() <= TOL,
        format!("mp1 = {printed_mp1:.4}, mp2 = {mp2:.4}"),
    );
    let rank = midpoint_rank(&eu1)?;
    r.check(
        "midpoint ranking at .99 reverses the decision",
        rank.first().map(String::as_str) == Some("a2"),
        format!("engine midpoints {:.4} and {:.4} rank {} first", eu1["a1"].midpoint(), mp2, rank[0]),
    );

    // The fixture takes the printed intervals as inputs; these are the exact
    // Clopper-Pearson intervals for the stated counts.
    for conf in [0.99, 0.75] {
        let g = clopper_pearson(SampleCount::new(4, 4)?, conf)?;
        let h = clopper_pearson(SampleCount::new(3, 14)?, conf)?;
        let h_upper = clopper_pearson_bound(SampleCount::new(3, 14)?, conf, Bound::Upper)?;
        r.discrepancies.push(format!(
            "at {conf}: two-sided Clopper-Pearson gives P(G) = {g} from 4/4 and P(H) = {h} from 3/14 \
             (one-sided upper {h_upper:.4})"
        ));
    }
    Ok(r)
}

fn example_b() -> anyhow::Result<Replication> {
    let mut r = Replication::new("Example B: direct inference after accepting membership");
    let l = load_fixture(FIXTURE_B)?;

    let classes = ["berries".to_string(), "soft berries".to_string()];
    let p = direct_inference("this berry", "G", &classes, &l.refs)?;
    r.interval("P(G) by direct inference", p.as_interval(), 0.84, 0.88);

    let levels = l.sequence.levels();
    let strict = levels.iter().find(|lv| (lv.error - 0.0005).abs() < 1e-12).context("no .0005 level")?;
    let eu_strict = eu_all(&strict.resolve(&l.problem, &l.refs)?)?;
    r.interval("u(a1) before accepting softness", eu_strict["a1"], -18.0, 2.0);
    r.set("maximal set before accepting softness", &maximal_set(&eu_strict)?.acts, &["a1", "a2"]);

    let loose = levels.iter().find(|lv| (lv.error - 0.005).abs() < 1e-12).context("no .005 level")?;
    let eu_loose = eu_all(&loose.resolve(&l.problem, &l.refs)?)?;
    r.interval("u(a1) after accepting softness", eu_loose["a1"], 3.6, 5.2);

    let report = explore(&l.problem, &l.sequence, &l.refs, l.tolerance)?;
    r.status("decision", &report.status, report.level_used, "a1", loose.index);
    r.check(
        "decided by dominance",
        matches!(report.status, DecisionStatus::Decided(_)),
        format!("{:?}", report.status),
    );
    Ok(r)
}

fn example_c() -> anyhow::Result<Replication> {
    let mut r = Replication::new("Example C: non-nested levels from conditioning");
    let berry = load_fixture(FIXTURE_C)?;

    let eu1 = utilities_at(&berry, 1)?;
    r.interval("u(a1) under level 1", eu1["a1"], -6.0, 2.0);
    r.set("maximal set under level 1", &maximal_set(&eu1)?.acts, &["a1", "a2"]);
    let eu2 = utilities_at(&berry, 2)?;
    r.interval("u(a1) under level 2", eu2["a1"], -18.0, -14.0);

    let report = explore(&berry.problem, &berry.sequence, &berry.refs, berry.tolerance)?;
    r.status("berry decision", &report.status, report.level_used, "a2", 2);

    let lottery = load_fixture(FIXTURE_C_LOTTERY)?;
    let report = explore(&lottery.problem, &lottery.sequence, &lottery.refs, lottery.tolerance)?;
    r.status("lottery decision", &report.status, report.level_used, "enter", 1);

    let nested = is_nested(&berry.sequence, &berry.problem, &berry.refs)?;
    r.check("levels are not nested", !nested, format!("is_nested = {nested}"));
    Ok(r)
}

/// The evidence sources of the belief claim in the Example D fixture.
pub fn example_d_sources(l: &Loaded) -> anyhow::Result<(MassFunction, MassFunction)> {
    for level in l.sequence.levels() {
        for c in &level.claims {
            if let Claim::Belief { sources, .. } = c {
                if let [a, b] = sources.as_slice() {
                    return Ok((a.masses.clone(), b.masses.clone()));
                }
            }
        }
    }
    bail!("fixture has no two-source belief claim")
}

/// The Example D problem with the given masses and the second source
/// discounted by `r`.
pub fn example_d_with(m1: &MassFunction, m2: &MassFunction, r: f64) -> anyhow::Result<Loaded> {
    let mut file = ProblemFile::parse(FIXTURE_D)?;
    for level in file.levels.iter_mut().flatten() {
        for c in &mut level.claims {
            if let Claim::Belief { sources, .. } = c {
                *sources = vec![
                    BeliefSource { masses: m1.clone(), discount: 0.0 },
                    BeliefSource { masses: m2.clone(), discount: r },
                ];
            }
        }
    }
    file.load()
}

/// The act mandated for the Example D problem at discount `r`.
pub fn example_d_act(m1: &MassFunction, m2: &MassFunction, r: f64) -> anyhow::Result<Option<String>> {
    let l = example_d_with(m1, m2, r)?;
    let report = explore(&l.problem, &l.sequence, &l.refs, l.tolerance)?;
    Ok(report.status.act().map(str::to_string))
}

fn example_d() -> anyhow::Result<Replication> {
    let mut r = Replication::new("Example D: discounting the second source");
    let l = load_fixture(FIXTURE_D)?;
    let (m1, m2) = example_d_sources(&l)?;
    let g = m1.subset(&["G"])?;

    let combined = bel_pl_interval(&dempster_combine(&m1, &m2)?, g)?;
    let want = 0.42 / 0.54;
    r.check(
        "undiscounted P(G)",
        (combined.lo() - want).abs() <= TOL && (combined.hi() - want).abs() <= TOL,
        format!("got {combined:.6}, expected .42/.54 = {want:.6}"),
    );

    let threshold = discount_threshold(&m1, &m2, g, 0.75)?;
    r.check(
        "discount at which P(G) = .75",
        (threshold - 3.0 / 13.0).abs() <= 1e-6,
        format!("r* = {threshold:.6}, expected 3/13 = {:.6}", 3.0 / 13.0),
    );

    for (rate, want) in [(0.2, "a1"), (0.25, "a2")] {
        let act = example_d_act(&m1, &m2, rate)?;
        r.check(
            format!("mandate at r = {rate}"),
            act.as_deref() == Some(want),
            format!("got {}, expected {want}", act.as_deref().unwrap_or("no mandate")),
        );
    }
    Ok(r)
}
