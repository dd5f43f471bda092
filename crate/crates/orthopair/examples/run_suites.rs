//! Run every property suite on the default instance and print the reports.
//! The same functionality is available from the command line:
//! `orthopair suite all --seed 42`.
//!
//! Run with `cargo run --example run_suites`.

use orthopair::suites::{run_all, SuiteConfig};

fn main() -> orthopair::Result<()> {
    let config = SuiteConfig::default();
    println!(
        "instance: blocks {:?}, rank {}, seed {}, {} cases, theta ({}, {})\n",
        config.blocks, config.rank, config.seed, config.cases, config.theta1, config.theta2
    );

    let reports = run_all(&config)?;
    for report in &reports {
        println!(
            "suite {:<18} {} ({} cases, {} failure(s), {:.0} ms)",
            report.suite,
            if report.passed() { "PASS" } else { "FAIL" },
            report.cases_run,
            report.failures.len(),
            report.wall_ms
        );
        for note in &report.notes {
            println!("    note: {note}");
        }
        for failure in &report.failures {
            println!(
                "    FAIL {}: measured {:.3e} > threshold {:.3e}",
                failure.case, failure.measured, failure.threshold
            );
        }
    }
    let passed = reports.iter().filter(|r| r.passed()).count();
    println!("\n{passed}/{} suites passed", reports.len());
    Ok(())
}
