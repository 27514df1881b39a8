//! Structured pass/fail records shared by all verification suites.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    /// Exact values backing the verdict, e.g. `lhs=36 rhs=36`.
    pub witness: String,
}

impl Check {
    pub fn new(id: impl Into<String>, passed: bool, witness: impl Into<String>) -> Self {
        Check { id: id.into(), passed, witness: witness.into() }
    }

    /// Equality check whose witness records both sides.
    pub fn equal<T: PartialEq + fmt::Display>(id: impl Into<String>, lhs: &T, rhs: &T) -> Self {
        Check::new(id, lhs == rhs, format!("lhs={lhs} rhs={rhs}"))
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{status} {} {}", self.id, self.witness)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Report {
    pub suite: String,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new(suite: impl Into<String>) -> Self {
        Report { suite: suite.into(), checks: Vec::new() }
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(f, "[{}] {c}", self.suite)?;
        }
        let failed = self.failures().count();
        write!(f, "[{}] {} checks, {} failed", self.suite, self.checks.len(), failed)
    }
}
