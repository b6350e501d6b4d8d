//! Structured outcome of an identity check over a parameter grid.

use serde::Serialize;

/// A single failing grid point, with both witness values rendered in the
/// canonical string form.
#[derive(Debug, Clone, Serialize, PartialEq, Eq)]
pub struct Failure {
    pub point: String,
    pub lhs: String,
    pub rhs: String,
}

/// Per-grid outcome of an exact identity check. Grid points where a side is
/// undefined are counted as skipped, never silently dropped.
#[derive(Debug, Clone, Serialize)]
pub struct VerificationReport {
    pub identity: String,
    pub grid: String,
    pub tested: usize,
    pub skipped: usize,
    pub failed: usize,
    pub failures: Vec<Failure>,
}

/// Outcome of checking one grid point.
#[derive(Debug, Clone)]
pub enum PointOutcome {
    Pass,
    Skip,
    Fail(Failure),
}

impl VerificationReport {
    pub fn new(identity: impl Into<String>, grid: impl Into<String>) -> Self {
        Self {
            identity: identity.into(),
            grid: grid.into(),
            tested: 0,
            skipped: 0,
            failed: 0,
            failures: Vec::new(),
        }
    }

    /// Merge per-point outcomes, sorted by grid point for determinism.
    pub fn collect(
        identity: impl Into<String>,
        grid: impl Into<String>,
        outcomes: Vec<PointOutcome>,
    ) -> Self {
        let mut report = Self::new(identity, grid);
        for o in outcomes {
            match o {
                PointOutcome::Pass => report.tested += 1,
                PointOutcome::Skip => report.skipped += 1,
                PointOutcome::Fail(f) => {
                    report.tested += 1;
                    report.failed += 1;
                    report.failures.push(f);
                }
            }
        }
        report.failures.sort_by(|a, b| a.point.cmp(&b.point));
        report
    }

    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn merge(mut self, other: VerificationReport) -> VerificationReport {
        self.tested += other.tested;
        self.skipped += other.skipped;
        self.failed += other.failed;
        self.failures.extend(other.failures);
        self.failures.sort_by(|a, b| a.point.cmp(&b.point));
        self
    }
}
