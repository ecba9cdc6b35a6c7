//! Loads a scenario (a file, or a builtin name), runs its checks and writes
//! trajectory.csv, report.txt and summary.txt.
//!
//!     cargo run --example run_scenario -- magnetic-uniform out/

use std::path::PathBuf;

use relmech::scenario::{builtin, load_scenario, run};

fn main() {
    let mut args = std::env::args().skip(1);
    let arg = args.next().unwrap_or_else(|| "polar-geodesic".to_string());
    let out = PathBuf::from(args.next().unwrap_or_else(|| "out".to_string()));

    let scenario = match builtin(&arg) {
        Some(s) => s,
        None => load_scenario(&arg).unwrap_or_else(|e| {
            eprintln!("{e}");
            std::process::exit(2);
        }),
    };
    println!("{}", scenario.summary());
    let summary = run(&scenario, &out, None).unwrap_or_else(|e| {
        eprintln!("{e}");
        std::process::exit(2);
    });
    for o in &summary.evaluation.outcomes {
        println!("{}: {} (expected {})", o.check, o.outcome.as_str(), o.expected);
    }
    for f in &summary.files {
        println!("wrote {}", f.display());
    }
    std::process::exit(summary.status().code());
}
