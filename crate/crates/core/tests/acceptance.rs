//! Runs the acceptance matrix, one line per criterion.

use std::process::ExitCode;

use poset_ramsey::acceptance::run_all;
use poset_ramsey::RunConfig;

fn main() -> ExitCode {
    let reports = run_all(&RunConfig::default());
    for r in &reports {
        println!("{r}");
    }
    let failed: Vec<usize> = reports.iter().filter(|r| !r.passed).map(|r| r.id).collect();
    if reports.len() != 9 || !failed.is_empty() {
        println!("acceptance: {} criteria, failed {failed:?}", reports.len());
        return ExitCode::FAILURE;
    }
    println!("acceptance: all {} criteria passed", reports.len());
    ExitCode::SUCCESS
}
