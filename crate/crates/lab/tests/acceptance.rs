//! All eleven criteria at full size. One line per criterion.
//!
//! Criteria recorded in the fixtures as unattainable print `FAIL (known)`
//! and do not fail the run; any other failure does.

use std::process::ExitCode;
use std::time::Instant;

use opuc_lab::fixtures::Fixtures;
use opuc_lab::suites::{run_all, Status};

fn main() -> ExitCode {
    let fx = Fixtures::load().expect("fixtures load");
    let start = Instant::now();
    let outcomes = run_all(&fx, false);
    for o in &outcomes {
        println!("{}", o.line());
    }
    let count = |s: Status| outcomes.iter().filter(|o| o.status == s).count();
    let bad: Vec<u8> = outcomes.iter().filter(|o| !o.acceptable()).map(|o| o.id).collect();
    println!(
        "acceptance: {} passed, {} failed ({} recorded as known), {} skipped in {:.1} s",
        count(Status::Pass),
        count(Status::Fail),
        outcomes.iter().filter(|o| o.status == Status::Fail && o.known_failure.is_some()).count(),
        count(Status::Skip),
        start.elapsed().as_secs_f64()
    );
    if bad.is_empty() {
        ExitCode::SUCCESS
    } else {
        println!("unexpected failures: {bad:?}");
        ExitCode::FAILURE
    }
}
