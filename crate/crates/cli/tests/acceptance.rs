//! One line per acceptance criterion; exits nonzero if any fails.

use std::process::{Command, ExitCode};

use divfree_core::sample::DEFAULT_SEED;
use divfree_core::selftest::find_law;

fn main() -> ExitCode {
    let started = std::time::Instant::now();
    let mut all = true;
    for criterion in 1..=11u8 {
        let law = find_law(&criterion.to_string()).expect("every criterion has a suite");
        let outcome = law.run(DEFAULT_SEED);
        let mut passed = outcome.passed;
        let mut detail = format!("{} cases", outcome.cases);
        if criterion == 11 {
            let out = Command::new(env!("CARGO_BIN_EXE_divfree"))
                .arg("selftest")
                .output()
                .expect("cli binary runs");
            let code = out.status.code();
            passed &= code == Some(0);
            detail.push_str(&format!(", cli selftest exit {code:?}"));
        }
        if let Some(why) = &outcome.failure {
            detail.push_str(&format!(", {why}"));
        }
        for note in &outcome.notes {
            if note.contains("failed validation") {
                detail.push_str(&format!(", {note}"));
            }
        }
        all &= passed;
        println!(
            "criterion {criterion:>2} [{}] {}: {detail}",
            if passed { "PASS" } else { "FAIL" },
            law.name()
        );
    }
    println!("acceptance finished in {:.1}s", started.elapsed().as_secs_f64());
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
