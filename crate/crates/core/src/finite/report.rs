use alloc::string::String;
use alloc::vec::Vec;

/// Keep at most this many violation messages per claim.
const MAX_RECORDED: usize = 20;

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ClaimReport {
    pub claim: String,
    pub instances: u64,
    /// Total number of violating instances.
    pub violation_count: u64,
    /// The first few violations, described.
    pub violations: Vec<String>,
}

impl ClaimReport {
    pub fn new(claim: &str) -> ClaimReport {
        ClaimReport { claim: String::from(claim), ..ClaimReport::default() }
    }

    /// Counts one instance, recording `describe()` when `ok` is false.
    pub fn check(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        self.instances += 1;
        if !ok {
            self.violation_count += 1;
            if self.violations.len() < MAX_RECORDED {
                self.violations.push(describe());
            }
        }
    }

    pub fn passed(&self) -> bool {
        self.violation_count == 0
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub size: usize,
    pub notes: Vec<String>,
    pub claims: Vec<ClaimReport>,
}

impl SuiteReport {
    pub fn new(suite: &str, size: usize) -> SuiteReport {
        SuiteReport { suite: String::from(suite), size, ..SuiteReport::default() }
    }

    pub fn total_violations(&self) -> u64 {
        self.claims.iter().map(|c| c.violation_count).sum()
    }

    pub fn total_instances(&self) -> u64 {
        self.claims.iter().map(|c| c.instances).sum()
    }

    pub fn passed(&self) -> bool {
        self.total_violations() == 0
    }

    pub fn claim(&self, name: &str) -> Option<&ClaimReport> {
        self.claims.iter().find(|c| c.claim == name)
    }

    pub fn merge(&mut self, other: SuiteReport) {
        self.notes.extend(other.notes);
        self.claims.extend(other.claims);
    }
}
