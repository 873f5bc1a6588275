//! The JSON problem file.

use std::fmt;
use std::path::Path;

use anyhow::{bail, Context};
use credal::acceptance::{generate_sequence, AcceptanceRule};
use credal::{Act, CredalLevel, CredalSequence, DecisionProblem, ReferenceClassTable, Statement, ToleranceSpec};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub name: String,
    pub acts: Vec<Act>,
    /// Explicit credal levels. Exclusive with `statements`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub levels: Option<Vec<CredalLevel>>,
    /// Statements from which levels are generated by an acceptance rule.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statements: Option<StatementBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_classes: Option<ReferenceClassTable>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<ToleranceSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StatementBlock {
    pub rule: AcceptanceRule,
    pub items: Vec<Statement>,
}

/// A parse failure located in the source text.
#[derive(Debug)]
pub struct ParseError {
    pub path: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}", self.line, self.column)?;
        if !self.path.is_empty() && self.path != "." {
            write!(f, ", field `{}`", self.path)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

/// Everything the engine needs, with the sequence materialized.
#[derive(Debug, Clone, PartialEq)]
pub struct Loaded {
    pub problem: DecisionProblem,
    pub sequence: CredalSequence,
    pub refs: ReferenceClassTable,
    pub tolerance: ToleranceSpec,
}

impl ProblemFile {
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            // serde_json appends its own position to the message
            let message = inner.to_string();
            let message = match message.rfind(" at line ") {
                Some(i) => message[..i].to_string(),
                None => message,
            };
            ParseError { path, line: inner.line(), column: inner.column(), message }
        })
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("invalid problem file {}", path.display()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("problem files always serialize")
    }

    /// Builds the problem and its credal sequence.
    ///
    /// Without `levels` or `statements` the sequence has a single level at
    /// error 0 carrying the boxes declared on the acts.
    pub fn load(&self) -> anyhow::Result<Loaded> {
        let problem = DecisionProblem::new(self.name.clone(), self.acts.clone())?;
        let refs = self.reference_classes.clone().unwrap_or_default();
        let sequence = match (&self.levels, &self.statements) {
            (Some(_), Some(_)) => bail!("give either `levels` or `statements`, not both"),
            (Some(levels), None) => CredalSequence::new(levels.clone())?,
            (None, Some(block)) => generate_sequence(&block.items, &block.rule, &problem, &refs)?,
            (None, None) => CredalSequence::new(vec![CredalLevel::new(0, 0.0, Vec::new())])?,
        };
        Ok(Loaded { problem, sequence, refs, tolerance: self.tolerance.unwrap_or_default() })
    }
}
