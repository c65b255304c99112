//! One pass/fail line per acceptance criterion.

use std::io::Write;
use std::time::Instant;

use skewinv::suite::{criterion, SuiteOptions, CRITERIA};

/// Wall-clock budget per criterion, in seconds.
const BUDGET_SECS: f64 = 600.0;

/// Written to the process stdout directly so the lines survive output capture.
fn line(s: String) {
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "{s}");
}

#[test]
fn acceptance() {
    let opts = SuiteOptions::default();
    let mut failed = Vec::new();
    for (id, _) in CRITERIA {
        let start = Instant::now();
        let r = criterion(id, &opts).expect("criterion runs");
        let secs = start.elapsed().as_secs_f64();
        let ok = r.passed && secs <= BUDGET_SECS;
        line(format!("criterion {id:>2} {} {} ({secs:.1}s)", if ok { "PASS" } else { "FAIL" }, r.title));
        if !ok {
            for c in r.checks.iter().filter(|c| !c.passed) {
                line(format!("    failed: {} {}", c.name, c.detail));
            }
            failed.push(id);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
