//! Library half of the `credal` command-line tool: problem files, report
//! rendering, and the command implementations. `main.rs` only parses
//! arguments and sets the exit code.

pub mod file;
pub mod replicate;
pub mod report;

use std::path::Path;

use anyhow::{bail, Context};
use credal::belief::{discount_threshold, MassFunction};
use credal::{clopper_pearson, eu_all, explore, secondary_criteria, DecisionReport, SampleCount, ToleranceSpec};

pub use file::{Loaded, ParseError, ProblemFile, StatementBlock};
pub use replicate::{replicate, Example, Replication};

/// What a command printed and the exit code it asks for.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub text: String,
    pub code: u8,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, code: 0 }
    }
}

/// Runs the best-first exploration for a problem file.
pub fn decide(path: &Path, tolerance: Option<ToleranceSpec>) -> anyhow::Result<(Loaded, DecisionReport)> {
    let loaded = ProblemFile::read(path)?.load()?;
    let spec = tolerance.unwrap_or(loaded.tolerance);
    let report = explore(&loaded.problem, &loaded.sequence, &loaded.refs, spec)?;
    Ok((loaded, report))
}

pub fn cmd_decide(path: &Path, tolerance: Option<ToleranceSpec>, json: bool) -> anyhow::Result<Outcome> {
    let (loaded, report) = decide(path, tolerance)?;
    let text = if json {
        let mut s = serde_json::to_string_pretty(&report)?;
        s.push('\n');
        s
    } else {
        report::render_decision(loaded.problem.name(), &report)
    };
    Ok(Outcome { text, code: report::exit_code(&report.status) })
}

/// Every criterion at one level; `level` defaults to the first.
pub fn cmd_compare(path: &Path, level: Option<usize>, alpha: f64, all_acts: bool) -> anyhow::Result<Outcome> {
    let loaded = ProblemFile::read(path)?.load()?;
    let lv = match level {
        Some(i) => loaded.sequence.level(i).with_context(|| format!("no level with index {i}"))?,
        None => loaded.sequence.levels().first().context("the file has no levels")?,
    };
    let resolved = lv.resolve(&loaded.problem, &loaded.refs)?;
    let eu = eu_all(&resolved)?;
    let criteria = secondary_criteria(&resolved, &eu, alpha, !all_acts)?;
    Ok(Outcome::ok(report::render_criteria(lv.index, &eu, &criteria)))
}

pub fn cmd_replicate(example: Example) -> anyhow::Result<Outcome> {
    let r = replicate(example)?;
    Ok(Outcome { text: r.render(), code: if r.passed() { 0 } else { 1 } })
}

pub fn cmd_cp(successes: u64, trials: u64, confidence: f64) -> anyhow::Result<Outcome> {
    let p = clopper_pearson(SampleCount::new(successes, trials)?, confidence)?;
    Ok(Outcome::ok(format!("{p}\n")))
}

/// Parses `g,ng` into a mass function on `{G, ~G}`; any remainder goes to
/// the whole frame.
pub fn parse_binary_mass(spec: &str) -> anyhow::Result<MassFunction> {
    let parts: Vec<&str> = spec.split(',').map(str::trim).collect();
    let [g, ng] = parts.as_slice() else {
        bail!("expected two masses `g,ng`, got `{spec}`");
    };
    let g: f64 = g.parse().with_context(|| format!("bad mass `{g}`"))?;
    let ng: f64 = ng.parse().with_context(|| format!("bad mass `{ng}`"))?;
    let rest = 1.0 - g - ng;
    if rest < -1e-9 {
        bail!("masses `{spec}` sum to more than 1");
    }
    let mut focal: Vec<(&[&str], f64)> = vec![(&["G"], g), (&["~G"], ng)];
    if rest > 1e-12 {
        focal.push((&["G", "~G"], rest));
    }
    Ok(MassFunction::new(vec!["G".into(), "~G".into()], &focal)?)
}

/// The discount on the second source at which belief in `G` reaches
/// `target`, with the berry act mandated on each side of it.
pub fn cmd_ds_threshold(m1: &str, m2: &str, target: f64) -> anyhow::Result<Outcome> {
    let (m1, m2) = (parse_binary_mass(m1)?, parse_binary_mass(m2)?);
    let g = m1.subset(&["G"])?;
    let r = discount_threshold(&m1, &m2, g, target)?;
    let mut text = format!("r* = {r:.4}\n");
    let describe = |at: f64| -> anyhow::Result<String> {
        let act = replicate::example_d_act(&m1, &m2, at)?;
        Ok(act.unwrap_or_else(|| "no mandate".into()))
    };
    if r > 0.0 {
        text.push_str(&format!("r < r*: {} (at r = {:.4})\n", describe(r / 2.0)?, r / 2.0));
    }
    if r < 1.0 {
        let above = (r + 1.0) / 2.0;
        text.push_str(&format!("r > r*: {} (at r = {above:.4})\n", describe(above)?));
    }
    Ok(Outcome::ok(text))
}
