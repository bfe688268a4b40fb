//! Named pass/fail checks with optional witnesses.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, passed: bool, witness: Option<String>) {
        self.checks.push(Check { name: name.into(), passed, witness });
    }

    /// Record a check that passes iff `witness` is `None`.
    pub fn expect_none(&mut self, name: impl Into<String>, witness: Option<String>) {
        let passed = witness.is_none();
        self.push(name, passed, witness);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.failures().next()
    }

    /// Whether some failed check's name starts with `prefix`.
    pub fn failed_with_prefix(&self, prefix: &str) -> bool {
        self.failures().any(|c| c.name.starts_with(prefix))
    }

    pub fn extend(&mut self, prefix: &str, other: Report) {
        for c in other.checks {
            self.checks.push(Check { name: format!("{prefix}{}", c.name), ..c });
        }
    }

    /// Sort by name, for canonical output.
    pub fn sorted(mut self) -> Self {
        self.checks.sort_by(|a, b| a.name.cmp(&b.name));
        self
    }
}
