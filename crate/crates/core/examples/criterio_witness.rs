//! Runs the force x metric matrix: for each cell the sampled contact test and
//! the energy-conservation test are run independently, and their verdicts
//! agree.
//!
//!     cargo run --release --example criterio_witness -- 4

use relmech::diagnostics::builtin_matrix;

fn main() {
    let jobs = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(2);
    let matrix = builtin_matrix(7);
    let cells = matrix.run(jobs).unwrap();
    println!("{:<20} {:<10} {:>12} {:>12} {:>8}", "force", "metric", "contact", "drift", "agree");
    for c in &cells {
        println!(
            "{:<20} {:<10} {:>12.3e} {:>12.3e} {:>8}",
            c.force,
            c.metric,
            c.report.contact.measured,
            c.report.energy.measured,
            if c.report.agree() { "yes" } else { "NO" }
        );
    }
    let agree = cells.iter().filter(|c| c.report.agree()).count();
    println!("{agree}/{} cells agree", cells.len());
}
