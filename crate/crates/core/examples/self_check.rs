//! Runs the named self-check battery twice: once on healthy field
//! contexts, where every identity must hold, and once with a corrupted
//! discrete-log table, where the battery must notice and say which
//! invariants broke. A battery that cannot fail checks nothing.

use boxcong::field::TableFault;
use boxcong::verify::{run_verify, VerifyPlan};

fn main() {
    let mut plan = VerifyPlan::new(9);
    plan.battery = 10;
    plan.primes = vec![7, 13, 101];

    let report = run_verify(&plan).unwrap();
    println!("healthy contexts:");
    for check in &report.checks {
        println!(
            "  {} {}",
            if check.passed { "PASS" } else { "FAIL" },
            check.name
        );
    }
    println!("overall: {}\n", if report.passed { "PASS" } else { "FAIL" });

    plan.fault = Some(TableFault::Dlog);
    let report = run_verify(&plan).unwrap();
    println!("one discrete-log entry corrupted:");
    for check in report.checks.iter().filter(|c| !c.passed) {
        println!("  FAIL {} ({})", check.name, check.detail);
    }
    println!(
        "overall: {} ({} checks tripped)",
        if report.passed { "PASS" } else { "FAIL" },
        report.checks.iter().filter(|c| !c.passed).count()
    );
}
