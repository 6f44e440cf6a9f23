//! The JSON run report and exit-code mapping.

use serde::Serialize;
use serde_json::Value;

use qforms_core::Error;

use crate::specfile::SpecFile;

pub const SCHEMA: &str = "qforms/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Undecided,
    /// Bad arguments or an unusable spec; nothing was computed.
    Usage,
}

impl Verdict {
    pub fn exit_code(self) -> i32 {
        match self {
            Verdict::Pass => 0,
            Verdict::Fail => 1,
            Verdict::Undecided => 2,
            Verdict::Usage => 3,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
    pub threads: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ErrorEntry {
    pub kind: String,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
}

impl ErrorEntry {
    pub fn usage(message: impl Into<String>) -> Self {
        ErrorEntry {
            kind: "Usage".into(),
            message: message.into(),
            details: Value::Null,
        }
    }

    /// A computed quantity failed its acceptance check.
    pub fn check(message: impl Into<String>) -> Self {
        ErrorEntry {
            kind: "CheckFailed".into(),
            message: message.into(),
            details: Value::Null,
        }
    }
}

impl From<&Error> for ErrorEntry {
    fn from(e: &Error) -> Self {
        let details = match e {
            Error::RetryCapExceeded { attempts } => {
                serde_json::to_value(attempts).expect("attempts serialize")
            }
            _ => Value::Null,
        };
        ErrorEntry {
            kind: e.kind().into(),
            message: e.to_string(),
            details,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub spec: Option<SpecFile>,
    pub timing: Timing,
    pub verdict: Verdict,
    pub payload: Value,
    pub errors: Vec<ErrorEntry>,
}

impl RunReport {
    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    /// Payload as compact JSON; equal runs give equal bytes.
    pub fn payload_json(&self) -> String {
        serde_json::to_string(&self.payload).expect("payload serializes")
    }
}

/// Verdict for a module error raised while running a command on a
/// validated spec.
pub fn error_verdict(e: &Error) -> Verdict {
    if e.is_undecided() {
        return Verdict::Undecided;
    }
    match e {
        Error::NotApplicable => Verdict::Fail,
        _ => Verdict::Usage,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdicts_and_codes() {
        assert_eq!(error_verdict(&Error::NotApplicable), Verdict::Fail);
        assert_eq!(
            error_verdict(&Error::RetryCapExceeded { attempts: vec![] }),
            Verdict::Undecided
        );
        assert_eq!(
            error_verdict(&Error::PrecisionCapExceeded {
                cap: 1,
                what: String::new()
            }),
            Verdict::Undecided
        );
        assert_eq!(
            error_verdict(&Error::DimensionTooLargeForExhaustive { dim: 5 }),
            Verdict::Usage
        );
        assert_eq!(error_verdict(&Error::ZeroVector), Verdict::Usage);
        let codes: Vec<i32> = [
            Verdict::Pass,
            Verdict::Fail,
            Verdict::Undecided,
            Verdict::Usage,
        ]
        .iter()
        .map(|v| v.exit_code())
        .collect();
        assert_eq!(codes, vec![0, 1, 2, 3]);
        assert_eq!(
            serde_json::to_string(&Verdict::Undecided).unwrap(),
            "\"undecided\""
        );
    }
}
