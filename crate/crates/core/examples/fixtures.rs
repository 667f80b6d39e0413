//! Replays the hand-worked example operators and lists each checked claim.

use banach_ortho::fixtures::replay;

fn main() {
    let report = replay(None).expect("all fixtures");
    for fixture in &report.fixtures {
        println!("{} ({})", fixture.name, if fixture.reproduced { "ok" } else { "MISMATCH" });
        for c in &fixture.checks {
            let mark = if c.passed { "+" } else { "-" };
            println!("  {mark} {}  {}", c.claim, c.detail);
        }
    }
    println!("{}/{} reproduced", report.reproduced, report.total);
}
