//! Restarting the diagonalization whenever the guess at the opponent
//! changes. Each restart moves into the next interval `[xi_i, xi_(i+1)]`.

use omega_sim::cli::default_xi;
use omega_sim::diag_machine::layerwise::IndexStream;
use omega_sim::diag_machine::{run_layerwise_diag, verify_layerwise, Copying, Opponent, Stalling};
use omega_sim::streams::LeftCeStream;

fn main() {
    let stages = 1500;
    let index = IndexStream::new(vec![(0, 0), (300, 1), (700, 0)]).unwrap();
    let mut opponents: Vec<Box<dyn Opponent>> = vec![Box::new(Copying::new()), Box::new(Stalling::new())];
    let xi = default_xi(8);
    let beta = LeftCeStream::default_beta(stages);
    let records = run_layerwise_diag(&index, &mut opponents, &xi, &beta, stages).unwrap();

    for r in records.iter().filter(|r| r.restarted || r.stage == 0 || r.stage == stages) {
        println!(
            "stage {:>4} layer {} opponent {} [{}, {}] alpha = {:.10}",
            r.stage,
            r.layer,
            r.opponent,
            r.lo,
            r.hi,
            r.inner.alpha.to_f64()
        );
    }
    let report = verify_layerwise(&records, Some(&xi));
    for c in &report.checks {
        println!("{c}");
    }
}
