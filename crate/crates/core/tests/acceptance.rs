//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Criteria and tolerances are pinned in `finq::verify`; the runtime bounds
//! are asserted here. Run with `cargo test --test acceptance` (add
//! `-- --nocapture` to see the per-criterion lines on success).

use std::time::{Duration, Instant};

use finq::verify::{self, FamilyOutcome};

fn report(criterion: usize, outcome: &FamilyOutcome, elapsed: Duration) {
    let status = if outcome.passed { "PASS" } else { "FAIL" };
    println!(
        "criterion {criterion} [{}]: {status} — {} checks, {}, {:.2?}",
        outcome.name, outcome.checks, outcome.detail, elapsed
    );
    assert!(
        outcome.passed,
        "criterion {criterion} ({}) failed: {}",
        outcome.name, outcome.detail
    );
}

#[test]
fn criterion_1_free_particle_exact_agreement() {
    let start = Instant::now();
    let outcome = verify::free_exact_agreement();
    let elapsed = start.elapsed();
    report(1, &outcome, elapsed);
    assert!(
        elapsed < Duration::from_secs(2),
        "criterion 1 exceeded its 2 s budget: {elapsed:.2?}"
    );
}

#[test]
fn criterion_2_continuum_kernel_match() {
    let start = Instant::now();
    let outcome = verify::continuum_match();
    report(2, &outcome, start.elapsed());
}

#[test]
fn criterion_3_gauss_reciprocity() {
    let start = Instant::now();
    let outcome = verify::gauss_reciprocity_fuzz();
    let elapsed = start.elapsed();
    report(3, &outcome, elapsed);
    assert!(
        elapsed < Duration::from_secs(1),
        "criterion 3 exceeded its 1 s budget: {elapsed:.2?}"
    );
}

#[test]
fn criterion_4_commutator_suite() {
    let start = Instant::now();
    let outcome = verify::commutator_suite();
    let elapsed = start.elapsed();
    report(4, &outcome, elapsed);
    assert!(
        elapsed < Duration::from_secs(30),
        "criterion 4 exceeded its 30 s budget: {elapsed:.2?}"
    );
}

#[test]
fn criterion_5_oscillator_methods_and_mehler() {
    let start = Instant::now();
    let outcome = verify::oscillator_methods();
    report(5, &outcome, start.elapsed());
}

#[test]
fn criterion_6_embedding() {
    let start = Instant::now();
    let outcome = verify::embedding_suite();
    report(6, &outcome, start.elapsed());
}

#[test]
fn criterion_7_weyl_failure() {
    let start = Instant::now();
    let outcome = verify::weyl_failure();
    report(7, &outcome, start.elapsed());
}

#[test]
fn criterion_8_space_size_figures() {
    let start = Instant::now();
    let outcome = verify::space_size_figures();
    report(8, &outcome, start.elapsed());
}

#[test]
fn supporting_sweep_stabilization() {
    let start = Instant::now();
    let outcome = verify::sweep_stabilization();
    report(0, &outcome, start.elapsed());
}

#[test]
fn supporting_unitarity() {
    let start = Instant::now();
    let outcome = verify::unitarity_suite();
    report(0, &outcome, start.elapsed());
}
