//! Runs every randomized property suite and prints a one-line summary per property.
//!
//! `cargo run --release --example theorem_suites -- 7 1000` uses seed 7 and 1000 trials.

use banach_ortho::verify::run_suite;

fn main() {
    let mut args = std::env::args().skip(1);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(42);
    let trials = args.next().and_then(|s| s.parse().ok()).unwrap_or(200);

    let report = run_suite("all", seed, trials).expect("known suite");
    for p in &report.properties {
        let kind = if p.theorem { "theorem" } else { "check" };
        println!(
            "{:<40} {kind:<7} {:>5} trials {:>3} failures  max violation {:.2e}",
            p.id, p.trials, p.failures, p.max_violation
        );
    }
    println!("theorem failures: {}", report.theorem_failures());
}
