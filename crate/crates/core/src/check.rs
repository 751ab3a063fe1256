use std::fmt;

use serde::{Deserialize, Serialize};

/// Verdict of a numeric check. `worst` is the largest observed excess over
/// the requirement: negative means every item held with slack, and the
/// check passes when `worst <= tolerance`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub worst: f64,
    pub checked: usize,
    pub detail: String,
}

impl CheckResult {
    pub fn failed(name: impl Into<String>, detail: impl Into<String>) -> Self {
        CheckResult {
            name: name.into(),
            passed: false,
            worst: f64::INFINITY,
            checked: 0,
            detail: detail.into(),
        }
    }

    /// Conjunction of several checks; `worst` is the largest part's worst.
    pub fn all(name: impl Into<String>, parts: &[CheckResult]) -> Self {
        let passed = parts.iter().all(|p| p.passed);
        let worst = parts
            .iter()
            .map(|p| p.worst)
            .fold(f64::NEG_INFINITY, f64::max);
        let failing: Vec<&str> = parts
            .iter()
            .filter(|p| !p.passed)
            .map(|p| p.name.as_str())
            .collect();
        CheckResult {
            name: name.into(),
            passed,
            worst: if parts.is_empty() { 0.0 } else { worst },
            checked: parts.iter().map(|p| p.checked).sum(),
            detail: if failing.is_empty() {
                format!("{} parts passed", parts.len())
            } else {
                format!("failing: {}", failing.join(", "))
            },
        }
    }
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}] {} (worst {:.3e} over {} items) {}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.checked,
            self.detail
        )
    }
}

/// Accumulates per-item excesses for a [`CheckResult`].
#[derive(Debug)]
pub struct Tally {
    name: String,
    tol: f64,
    worst: f64,
    worst_at: String,
    checked: usize,
}

impl Tally {
    pub fn new(name: impl Into<String>, tol: f64) -> Self {
        Tally {
            name: name.into(),
            tol,
            worst: f64::NEG_INFINITY,
            worst_at: String::new(),
            checked: 0,
        }
    }

    /// Records one item; `excess > tol` is a violation. NaN counts as a
    /// violation.
    pub fn observe(&mut self, excess: f64, at: impl FnOnce() -> String) {
        self.checked += 1;
        let excess = if excess.is_nan() { f64::INFINITY } else { excess };
        if excess > self.worst {
            self.worst = excess;
            self.worst_at = at();
        }
    }

    pub fn finish(self) -> CheckResult {
        if self.checked == 0 {
            return CheckResult {
                name: self.name,
                passed: true,
                worst: 0.0,
                checked: 0,
                detail: "nothing to check".into(),
            };
        }
        let passed = self.worst <= self.tol;
        CheckResult {
            name: self.name,
            passed,
            worst: self.worst,
            checked: self.checked,
            detail: format!("tol {:e}; worst at {}", self.tol, self.worst_at),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tally_tracks_worst() {
        let mut t = Tally::new("demo", 0.1);
        t.observe(-1.0, || "a".into());
        t.observe(0.05, || "b".into());
        let r = t.finish();
        assert!(r.passed);
        assert_eq!(r.worst, 0.05);
        assert!(r.detail.contains("worst at b"));

        let mut t = Tally::new("nan", 0.1);
        t.observe(f64::NAN, || "x".into());
        assert!(!t.finish().passed);
    }

    #[test]
    fn conjunction() {
        let ok = Tally::new("ok", 0.0).finish();
        let bad = CheckResult::failed("bad", "boom");
        let all = CheckResult::all("both", &[ok.clone(), bad]);
        assert!(!all.passed);
        assert!(all.detail.contains("bad"));
        assert!(CheckResult::all("one", &[ok]).passed);
    }
}
