/// Outcome of one named numerical or symbolic identity check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_error: f64,
    pub tolerance: f64,
}

impl Check {
    /// Passes iff `max_error ≤ tolerance` (NaN fails).
    pub fn within(name: impl Into<String>, max_error: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            passed: max_error <= tolerance,
            max_error,
            tolerance,
        }
    }

    /// Exact boolean check; `max_error` is 0 on success and 1 on failure.
    pub fn exact(name: impl Into<String>, holds: bool) -> Self {
        Self {
            name: name.into(),
            passed: holds,
            max_error: if holds { 0.0 } else { 1.0 },
            tolerance: 0.0,
        }
    }
}

pub fn all_passed(checks: &[Check]) -> bool {
    checks.iter().all(|c| c.passed)
}
