//! Run the named verification suites through the library interface and
//! print a one-line summary per suite, the same reports the `verify`
//! subcommand serializes.
//!
//! Run with `cargo run --example verification_suites`. Pass a suite name
//! to run just that suite and list each check, e.g.
//! `cargo run --example verification_suites -- rearrangements`.

use antilap::suites::{run_suite, SUITE_NAMES};

fn main() {
    let seed = 0u64;
    let pick: Option<String> = std::env::args().nth(1);

    match pick {
        Some(name) => {
            let report = run_suite(&name, seed).unwrap();
            println!("suite {} (seed {}):", report.suite, report.seed);
            for check in &report.checks {
                println!(
                    "  {}  {}  ({})",
                    if check.pass { "pass" } else { "FAIL" },
                    check.name,
                    check.detail
                );
            }
            std::process::exit(if report.pass { 0 } else { 1 });
        }
        None => {
            let mut all_pass = true;
            for name in SUITE_NAMES {
                let report = run_suite(name, seed).unwrap();
                let failed = report.checks.iter().filter(|c| !c.pass).count();
                println!(
                    "{}  {:<14} {} checks, {} failed",
                    if report.pass { "pass" } else { "FAIL" },
                    report.suite,
                    report.checks.len(),
                    failed
                );
                all_pass &= report.pass;
            }
            std::process::exit(if all_pass { 0 } else { 1 });
        }
    }
}
