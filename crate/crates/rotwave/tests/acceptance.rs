//! Acceptance suite: one line per criterion, nonzero exit on any failure.
//! Each criterion must pass its numerical check and finish within its
//! runtime budget.

use rotwave::checks::{self, CheckSettings, Status};
use std::process::ExitCode;

/// Runtime budgets in seconds, by criterion number.
const BUDGETS: [(u8, f64); 13] = [
    (1, 5.0),
    (2, 10.0),
    (3, 30.0),
    (4, 180.0),
    (5, 20.0),
    (6, 120.0),
    (7, 5.0),
    (8, 5.0),
    (9, 10.0),
    (10, 60.0),
    (11, 30.0),
    (12, 300.0),
    (13, 300.0),
];

const TOTAL_BUDGET: f64 = 1200.0;

fn main() -> ExitCode {
    let settings = CheckSettings::default();
    let mut failures = 0;
    let mut total = 0.0;
    for (id, budget) in BUDGETS {
        let r = checks::run(id, &settings);
        total += r.seconds;
        let in_time = r.seconds <= budget;
        let ok = r.status == Status::Pass && in_time;
        if !ok {
            failures += 1;
        }
        let note = if in_time { String::new() } else { format!(" [over budget {budget:.0}s]") };
        println!(
            "criterion {:2} {}: {} ({:.1}s of {budget:.0}s){note}: {}",
            id,
            if ok { "pass" } else { "FAIL" },
            r.name,
            r.seconds,
            r.detail
        );
    }
    let total_ok = total <= TOTAL_BUDGET;
    println!("total {:.1}s of {TOTAL_BUDGET:.0}s: {}", total, if total_ok { "pass" } else { "FAIL" });
    println!("acceptance: {} of 13 criteria passed", 13 - failures);
    if failures == 0 && total_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
