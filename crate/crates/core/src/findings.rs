use serde::{Deserialize, Serialize};

/// A data inconsistency or model mismatch. Findings are reported, not raised.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Finding {
    /// Short identifier of the check, e.g. `intubated_total`.
    pub check: String,
    /// What was checked: a locality, a matrix row, a table cell.
    pub subject: String,
    pub expected: f64,
    pub observed: f64,
    /// `observed - expected`.
    pub difference: f64,
}

impl Finding {
    pub fn new(check: impl Into<String>, subject: impl Into<String>, expected: f64, observed: f64) -> Self {
        Finding {
            check: check.into(),
            subject: subject.into(),
            expected,
            observed,
            difference: observed - expected,
        }
    }
}
