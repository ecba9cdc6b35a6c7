//! Runs every builtin scenario and prints the summary table.

use relmech::scenario::{batch, builtin, builtin_names};

fn main() {
    let jobs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(4);
    let inputs: Vec<_> = builtin_names().map(|n| (n.to_string(), Ok(builtin(n).unwrap()))).collect();
    let report = batch(&inputs, jobs, None, None);
    print!("{}", report.table());
    std::process::exit(report.status.code());
}
