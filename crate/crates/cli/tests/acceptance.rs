//! One PASS/FAIL line per acceptance criterion, at full sample sizes and with
//! each criterion's runtime limit. Runs without the libtest harness so the
//! lines always reach stdout.

use costshare_cli::selftest::{run_criterion, Scale, CRITERIA};

fn main() {
    let mut failed = Vec::new();
    for id in CRITERIA {
        let v = run_criterion(id, Scale::Full);
        println!(
            "{} criterion {id}: {} ({:.2}s, limit {}s): {}",
            if v.passed { "PASS" } else { "FAIL" },
            v.title,
            v.seconds,
            v.limit_seconds,
            v.detail
        );
        if !v.passed {
            failed.push(id);
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
