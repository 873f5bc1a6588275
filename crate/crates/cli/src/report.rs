//! Plain-text rendering of engine results.

use std::fmt::Write;

use credal::{CriteriaReport, DecisionReport, DecisionStatus, EuTable};

/// Process exit code for a decision status.
pub fn exit_code(status: &DecisionStatus) -> u8 {
    match status {
        DecisionStatus::Decided(_) | DecisionStatus::RiskProblem(_) => 0,
        DecisionStatus::NoMandate => 2,
    }
}

fn act_width(utilities: &EuTable) -> usize {
    utilities.keys().map(|k| k.chars().count()).max().unwrap_or(3).max(3)
}

pub fn render_decision(problem: &str, report: &DecisionReport) -> String {
    let mut out = String::new();
    writeln!(out, "problem: {problem} (tolerable error {:.4})", report.tolerance).unwrap();
    writeln!(out).unwrap();

    let sets: Vec<String> = report.trace.iter().map(|r| r.maximal_set.join(", ")).collect();
    let set_w = sets.iter().map(|s| s.chars().count()).max().unwrap_or(0).max("maximal set".len());
    let act_w = report.trace.iter().map(|r| act_width(&r.utilities)).max().unwrap_or(3);
    writeln!(out, "{:>5}  {:<6}  {:<set_w$}  {:<act_w$}  expected utility", "level", "error", "maximal set", "act")
        .unwrap();
    for (row, set) in report.trace.iter().zip(&sets) {
        for (i, (act, eu)) in row.utilities.iter().enumerate() {
            if i == 0 {
                write!(out, "{:>5}  {:<6.4}  {:<set_w$}", row.index, row.error, set).unwrap();
            } else {
                write!(out, "{:>5}  {:<6}  {:<set_w$}", "", "", "").unwrap();
            }
            writeln!(out, "  {act:<act_w$}  {eu}").unwrap();
        }
    }
    if report.trace.is_empty() {
        writeln!(out, "(no level has error below the tolerance)").unwrap();
    }
    writeln!(out).unwrap();

    let at = || match (report.level_used, report.error_used) {
        (Some(l), Some(e)) => format!(" at level {l} (error {e:.4})"),
        _ => String::new(),
    };
    match &report.status {
        DecisionStatus::Decided(a) => writeln!(out, "decided: {a}{}", at()).unwrap(),
        DecisionStatus::RiskProblem(a) => {
            writeln!(out, "risk problem: {a}{}", at()).unwrap();
            if report.ambiguous {
                writeln!(out, "note: several acts share the top expected utility; the first is reported").unwrap();
            }
        }
        DecisionStatus::NoMandate => {
            writeln!(out, "no mandate: no level with error below {:.4} singles out an act", report.tolerance).unwrap()
        }
    }
    out
}

pub fn render_criteria(level: usize, utilities: &EuTable, report: &CriteriaReport) -> String {
    let mut out = String::new();
    writeln!(out, "level {level}").unwrap();
    let w = act_width(utilities);
    let shown: Vec<String> = utilities.values().map(|eu| eu.to_string()).collect();
    let iw = shown.iter().map(|s| s.len()).max().unwrap_or(0);
    for ((act, eu), s) in utilities.iter().zip(&shown) {
        writeln!(out, "  {act:<w$}  {s:<iw$}  midpoint {:.4}", eu.midpoint()).unwrap();
    }
    writeln!(out).unwrap();
    let rows = [
        ("maximal set".to_string(), report.maximal_set.acts.join(", ")),
        ("candidates".to_string(), report.candidates.join(", ")),
        ("maximin".to_string(), report.maximin.clone()),
        ("min-regret".to_string(), report.min_regret.clone()),
        (format!("hurwicz({})", report.hurwicz_alpha), report.hurwicz.clone()),
        ("midpoint".to_string(), report.midpoint_rank.first().cloned().unwrap_or_default()),
        ("leximin".to_string(), report.leximin.clone()),
    ];
    let w = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
    for (k, v) in rows {
        writeln!(out, "{k:<w$}  {v}").unwrap();
    }
    out
}
