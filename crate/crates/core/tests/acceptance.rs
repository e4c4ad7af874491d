//! Acceptance gate: runs every criterion at full scale and prints one
//! pass/fail line per criterion. `cargo test --test acceptance -- --nocapture`
//! shows the details.

use steerkit_core::verify::{run_all, VerifyConfig};

#[test]
fn acceptance_criteria() {
    let cfg = VerifyConfig::default();
    let results = run_all(&cfg);
    let mut all_pass = true;
    for r in &results {
        let status = if r.pass { "PASS" } else { "FAIL" };
        println!("{:4} {:4}  {} -- {}", r.id, status, r.description, r.detail);
        all_pass &= r.pass;
    }
    assert!(all_pass, "one or more acceptance criteria failed");
}
