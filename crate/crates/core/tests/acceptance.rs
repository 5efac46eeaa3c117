use std::process::ExitCode;

use bgx_core::verify;

fn main() -> ExitCode {
    let mut failed = 0;
    for id in 1..=verify::CRITERIA.len() {
        let outcome = verify::run(id);
        println!("{outcome}");
        failed += usize::from(!outcome.passed);
    }
    println!("{} of {} criteria pass", verify::CRITERIA.len() - failed, verify::CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
