//! Uniform result records for numerical checks.

use serde::{Deserialize, Serialize};

/// Outcome of one numerical verification: what was checked, what was
/// expected, what came out, and how far apart they are. All numbers are
/// rendered to strings so the record survives serialization without
/// carrying a precision context around.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub expected: String,
    pub computed: String,
    /// |computed − expected|, in scientific notation.
    pub residual: String,
    pub tolerance: String,
    pub pass: bool,
}

impl CheckReport {
    pub fn summary_line(&self) -> String {
        let tag = if self.pass { "ok" } else { "FAIL" };
        format!("{:4} {} (residual {}, tolerance {})", tag, self.check, self.residual, self.tolerance)
    }
}
