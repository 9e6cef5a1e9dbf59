//! Comparison results and identity reports.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub col: usize,
    pub coeff: usize,
}

/// Outcome of comparing two objects on a certified range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Agreement {
    /// Highest column (or index) on which the comparison was certified.
    pub window: usize,
    pub first_discrepancy: Option<Discrepancy>,
}

impl Agreement {
    pub fn holds(&self) -> bool {
        self.first_discrepancy.is_none()
    }

    /// Combines two comparisons: the window shrinks to the smaller one and
    /// the first discrepancy found (in either) is kept.
    pub fn and(self, other: Agreement) -> Agreement {
        Agreement {
            window: self.window.min(other.window),
            first_discrepancy: self.first_discrepancy.or(other.first_discrepancy),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ExactPass,
    /// Float-mode check that passed within its stated tolerance.
    ApproxPass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityReport {
    pub identity: String,
    /// The identity being certified, written out.
    pub statement: String,
    pub window: usize,
    pub status: Status,
    pub first_discrepancy: Option<Discrepancy>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl IdentityReport {
    pub fn from_agreement(identity: impl Into<String>, statement: impl Into<String>, a: Agreement) -> Self {
        IdentityReport {
            identity: identity.into(),
            statement: statement.into(),
            window: a.window,
            status: if a.holds() { Status::ExactPass } else { Status::Fail },
            first_discrepancy: a.first_discrepancy,
            note: None,
        }
    }

    pub fn approx(identity: impl Into<String>, statement: impl Into<String>, window: usize, ok: bool, note: String) -> Self {
        IdentityReport {
            identity: identity.into(),
            statement: statement.into(),
            window,
            status: if ok { Status::ApproxPass } else { Status::Fail },
            first_discrepancy: if ok { None } else { Some(Discrepancy { col: 0, coeff: 0 }) },
            note: Some(note),
        }
    }

    /// A check that could not run; reported as a failure with the reason.
    pub fn errored(identity: impl Into<String>, statement: impl Into<String>, err: &crate::Error) -> Self {
        IdentityReport {
            identity: identity.into(),
            statement: statement.into(),
            window: 0,
            status: Status::Fail,
            first_discrepancy: None,
            note: Some(err.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != Status::Fail
    }
}

/// Runs a fallible comparison; an error becomes a failed report carrying the reason.
pub fn check(
    identity: impl Into<String>,
    statement: impl Into<String>,
    f: impl FnOnce() -> crate::Result<Agreement>,
) -> IdentityReport {
    let (identity, statement) = (identity.into(), statement.into());
    match f() {
        Ok(a) => IdentityReport::from_agreement(identity, statement, a),
        Err(e) => IdentityReport::errored(identity, statement, &e),
    }
}
