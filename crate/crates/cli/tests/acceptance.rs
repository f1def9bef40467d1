//! Prints one line per acceptance criterion and fails if any criterion fails.

use std::process::ExitCode;
use zsl_cli::certify::{run_criterion, CRITERIA};

fn main() -> ExitCode {
    let results: Vec<_> = CRITERIA.iter().map(|c| run_criterion(*c)).collect();
    for r in &results {
        match r.witness() {
            None if r.passed => println!("PASS {:<32} {}", r.name, r.description),
            w => println!("FAIL {:<32} {}", r.name, w.unwrap_or_default()),
        }
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} of {} criteria passed", results.len() - failed, results.len());
    if failed == 0 && results.len() == 11 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
