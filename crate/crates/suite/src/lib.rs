//! A small runner for acceptance criteria: each criterion prints one
//! `PASS`/`FAIL` line with its measured values, and the process exits
//! nonzero when any criterion fails.

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

/// What a criterion measured.
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

impl Outcome {
    pub fn new(passed: bool, detail: impl Into<String>) -> Self {
        Outcome {
            passed,
            detail: detail.into(),
        }
    }
}

pub struct Suite {
    filter: Vec<String>,
    passed: usize,
    failed: Vec<u32>,
}

impl Suite {
    /// Command-line arguments that are not flags select criteria by number.
    pub fn from_args() -> Self {
        let filter = std::env::args()
            .skip(1)
            .filter(|a| !a.starts_with('-'))
            .collect();
        Suite {
            filter,
            passed: 0,
            failed: Vec::new(),
        }
    }

    /// Runs one criterion. `budget` is its allowed wall-clock time; going
    /// over it fails the criterion.
    pub fn criterion(
        &mut self,
        id: u32,
        title: &str,
        budget: Duration,
        f: impl FnOnce() -> Outcome,
    ) {
        if !self.filter.is_empty() && !self.filter.iter().any(|a| *a == id.to_string()) {
            return;
        }
        let start = Instant::now();
        let result = panic::catch_unwind(AssertUnwindSafe(f));
        let elapsed = start.elapsed();
        let outcome = match result {
            Ok(o) => o,
            Err(e) => {
                let msg = e
                    .downcast_ref::<String>()
                    .cloned()
                    .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                    .unwrap_or_else(|| "panicked".into());
                Outcome::new(false, format!("panicked: {msg}"))
            }
        };
        let in_time = elapsed <= budget;
        let passed = outcome.passed && in_time;
        let mut detail = outcome.detail;
        if !in_time {
            detail.push_str(&format!("; over the {budget:?} budget"));
        }
        println!(
            "criterion {id} {} {title} ({:.2}s): {detail}",
            if passed { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64()
        );
        if passed {
            self.passed += 1;
        } else {
            self.failed.push(id);
        }
    }

    /// Prints the summary line and exits.
    pub fn finish(self) -> ! {
        println!(
            "acceptance: {} passed, {} failed{}",
            self.passed,
            self.failed.len(),
            if self.failed.is_empty() {
                String::new()
            } else {
                format!(" (criteria {:?})", self.failed)
            }
        );
        std::process::exit(if self.failed.is_empty() { 0 } else { 1 })
    }
}
