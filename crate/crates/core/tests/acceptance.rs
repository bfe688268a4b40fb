//! Runs every acceptance criterion and prints one line per criterion.

use std::process::ExitCode;
use std::time::Instant;

use powops::acceptance::{run_all, DEFAULT_SEED};

fn main() -> ExitCode {
    let start = Instant::now();
    let results = run_all(DEFAULT_SEED);
    for r in &results {
        println!("{r}");
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {}/{} passed in {:.2?}", results.len() - failed, results.len(), start.elapsed());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
