//! Runs every acceptance criterion at its stated tolerance and budget,
//! printing one PASS/FAIL line per criterion.

use std::process::ExitCode;

use posetlab::suite::{run_all, SuiteOptions};

fn main() -> ExitCode {
    let reports = run_all(&SuiteOptions::default());
    for r in &reports {
        println!("{r}");
    }
    let failed = reports.iter().filter(|r| !r.passed()).count();
    println!("acceptance: {} passed, {failed} failed", reports.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
