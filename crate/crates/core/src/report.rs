//! Serializable pass/fail records for the command-line tools.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::exterior::{mask_label, MfFailure};
use crate::laurent::LaurentPoly;

/// Offending matrix entry of a failed check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    pub row: String,
    pub col: String,
    /// `found - expected`, canonical text.
    pub difference: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub subject: String,
    pub pass: bool,
    /// Canonical text of `λ` when the check passed.
    pub lambda: Option<String>,
    pub wall_time_ms: f64,
    pub message: Option<String>,
    pub counterexample: Option<Counterexample>,
}

impl VerificationReport {
    pub fn pass(subject: impl Into<String>, lambda: Option<&LaurentPoly>, elapsed: Duration) -> Self {
        Self {
            subject: subject.into(),
            pass: true,
            lambda: lambda.map(LaurentPoly::to_text),
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
            message: None,
            counterexample: None,
        }
    }

    /// A failure from an MF check. Shape errors have no entry, so the
    /// `(1, 1)` slot is reported with the message as its difference.
    pub fn from_mf_failure(subject: impl Into<String>, failure: &MfFailure, elapsed: Duration) -> Self {
        let counterexample = match failure.counterexample() {
            Some((row, col, diff)) => Counterexample {
                row: mask_label(row),
                col: mask_label(col),
                difference: diff.to_text(),
            },
            None => match failure {
                MfFailure::NotOdd { row, col } => Counterexample {
                    row: mask_label(*row),
                    col: mask_label(*col),
                    difference: "entry joins subsets of equal parity".into(),
                },
                other => Counterexample {
                    row: mask_label(0),
                    col: mask_label(0),
                    difference: other.to_string(),
                },
            },
        };
        Self::fail(subject, failure.to_string(), counterexample, elapsed)
    }

    pub fn fail(subject: impl Into<String>, message: String, counterexample: Counterexample, elapsed: Duration) -> Self {
        Self {
            subject: subject.into(),
            pass: false,
            lambda: None,
            wall_time_ms: elapsed.as_secs_f64() * 1e3,
            message: Some(message),
            counterexample: Some(counterexample),
        }
    }

    /// One line: `PASS subject (λ = ...)` or `FAIL subject: ...`.
    pub fn summary_line(&self) -> String {
        if self.pass {
            match &self.lambda {
                Some(l) => format!("PASS {} (lambda = {l}, {:.1} ms)", self.subject, self.wall_time_ms),
                None => format!("PASS {} ({:.1} ms)", self.subject, self.wall_time_ms),
            }
        } else {
            let entry = self
                .counterexample
                .as_ref()
                .map(|c| format!(" at ({}, {}): {}", c.row, c.col, c.difference))
                .unwrap_or_default();
            format!("FAIL {}{entry}", self.subject)
        }
    }
}

/// Run `f` and time it.
pub fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}
