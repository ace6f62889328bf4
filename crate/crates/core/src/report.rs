//! Uniform pass/fail records shared by the kernel checks, the acceptance
//! suite and the command-line reports.

use std::time::Instant;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Quantity {
    Real(f64),
    Complex { re: f64, im: f64 },
}

impl From<f64> for Quantity {
    fn from(x: f64) -> Self {
        Quantity::Real(x)
    }
}

impl From<Complex64> for Quantity {
    fn from(z: Complex64) -> Self {
        Quantity::Complex { re: z.re, im: z.im }
    }
}

impl Quantity {
    fn as_complex(self) -> Complex64 {
        match self {
            Quantity::Real(x) => Complex64::new(x, 0.0),
            Quantity::Complex { re, im } => Complex64::new(re, im),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expected {
    /// `|measured - value| <= tolerance`
    Value { value: Quantity },
    /// `measured <= bound + tolerance`
    AtMost { bound: f64 },
    /// `measured >= bound - tolerance`
    AtLeast { bound: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    /// Which statement the check exercises.
    pub anchor: String,
    pub measured: Quantity,
    pub expected: Expected,
    pub tolerance: f64,
    pub pass: bool,
    pub runtime_ms: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl CheckReport {
    fn build(name: &str, anchor: &str, measured: Quantity, expected: Expected, tolerance: f64) -> Self {
        let pass = match expected {
            Expected::Value { value } => (measured.as_complex() - value.as_complex()).norm() <= tolerance,
            Expected::AtMost { bound } => real(measured) <= bound + tolerance,
            Expected::AtLeast { bound } => real(measured) >= bound - tolerance,
        };
        Self {
            name: name.to_string(),
            anchor: anchor.to_string(),
            measured,
            expected,
            tolerance,
            pass,
            runtime_ms: None,
            note: None,
        }
    }

    pub fn close(name: &str, anchor: &str, measured: impl Into<Quantity>, expected: impl Into<Quantity>, tol: f64) -> Self {
        Self::build(name, anchor, measured.into(), Expected::Value { value: expected.into() }, tol)
    }

    pub fn at_most(name: &str, anchor: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, anchor, measured.into(), Expected::AtMost { bound }, 0.0)
    }

    pub fn at_least(name: &str, anchor: &str, measured: f64, bound: f64) -> Self {
        Self::build(name, anchor, measured.into(), Expected::AtLeast { bound }, 0.0)
    }

    /// A boolean outcome, recorded as `1` against an expected `1`.
    pub fn holds(name: &str, anchor: &str, ok: bool) -> Self {
        Self::close(name, anchor, if ok { 1.0 } else { 0.0 }, 1.0, 0.0)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.runtime_ms = Some(start.elapsed().as_millis() as u64);
        self
    }

    /// Fails the check regardless of its measurement (used when a sub-step errored).
    pub fn failed(mut self) -> Self {
        self.pass = false;
        self
    }
}

fn real(q: Quantity) -> f64 {
    match q {
        Quantity::Real(x) => x,
        Quantity::Complex { re, im } => {
            if im == 0.0 {
                re
            } else {
                f64::NAN
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rules() {
        assert!(CheckReport::close("a", "x", 1.0, 1.0 + 1e-9, 1e-8).pass);
        assert!(!CheckReport::close("a", "x", 1.0, 1.1, 1e-8).pass);
        assert!(CheckReport::close("a", "x", Complex64::new(0.0, 1.0), Complex64::new(0.0, 1.0), 0.0).pass);
        assert!(CheckReport::at_most("b", "x", 0.5, 1.0).pass);
        assert!(!CheckReport::at_most("b", "x", f64::NAN, 1.0).pass);
        assert!(!CheckReport::at_least("c", "x", 0.5, 1.0).pass);
        assert!(!CheckReport::holds("d", "x", false).pass);
    }

    #[test]
    fn json_shape() {
        let r = CheckReport::at_most("b", "x", 0.5, 1.0);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["expected"]["kind"], "at_most");
        assert_eq!(v["measured"], 0.5);
        assert!(v["runtime_ms"].is_null());
        let back: CheckReport = serde_json::from_value(v).unwrap();
        assert_eq!(back, r);
    }
}
