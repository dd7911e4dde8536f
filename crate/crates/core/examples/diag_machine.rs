//! Diagonalizing against opponent machines, and checking the trace.

use omega_sim::diag_machine::{run_diag, verify_diag_claims, Copying, DiagCase, Opponent, Overshooting, RandomOpponent};
use omega_sim::fixtures;
use omega_sim::streams::LeftCeStream;

fn summarize(opponent: &mut dyn Opponent, beta: &LeftCeStream, stages: u64) {
    let run = run_diag(opponent, beta, stages).unwrap();
    let last = run.records.last().unwrap();
    let report = verify_diag_claims(&run.records);
    println!(
        "{:<14} alpha = {:.12}  gamma = {:.12}  |Q| = {:<3} bailout at {:?}  checks {}",
        opponent.name(),
        last.alpha.to_f64(),
        last.gamma.to_f64(),
        run.q.len(),
        run.bailed_out_at(),
        if report.passed() { "pass" } else { "FAIL" }
    );
    for r in run.final_requirements.iter().take(4) {
        println!("    R_{} {} code {} witness {:?}", r.d, r.state, r.code, r.witness.as_ref().map(|w| w.to_string()));
    }
}

fn main() {
    let stages = 2000;
    let beta = LeftCeStream::default_beta(stages);
    summarize(&mut Copying::new(), &beta, stages);
    summarize(&mut Overshooting::new(500), &beta, stages);
    summarize(&mut RandomOpponent::new(3), &fixtures::diag_beta(3, stages), stages);

    // The first few stages against the copying opponent.
    let run = run_diag(&mut Copying::new(), &beta, 8).unwrap();
    for r in &run.records {
        let tag = if r.case == DiagCase::Start { "start".into() } else { format!("{:?}", r.case) };
        println!("stage {} {tag:<12} alpha {} gamma {} ({} events)", r.stage, r.alpha, r.gamma, r.events.len());
    }
}
