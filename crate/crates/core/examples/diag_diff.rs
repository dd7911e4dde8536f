//! Making `alpha - beta` left-c.e. while steering `alpha` past right-c.e.
//! reals `theta^i` that come close.

use omega_sim::diag_diff::{run_diff, verify_diff_claims, Bootstrap, DiffCase, DiffMode, ThetaFamily};
use omega_sim::dyadic::dy;
use omega_sim::fixtures;
use omega_sim::streams::{LeftCeStream, RightCeStream};

fn main() {
    // A small hand-made case: beta creeps up, theta^0 sits just above alpha.
    let beta = LeftCeStream::scripted(&[(0, dy(1, 3)), (3, dy(3, 4)), (6, dy(5, 4))]).unwrap();
    let theta0 = RightCeStream::scripted(&[(0, dy(19, 5)), (5, dy(37, 6))]).unwrap();
    let theta1 = RightCeStream::constant(dy(15, 4), 0);
    let thetas = ThetaFamily::new(vec![theta0, theta1]);
    let records = run_diff(&beta, &thetas, &Bootstrap::at(dy(1, 1)), 12).unwrap();
    for r in &records {
        let mode = r.mode.map_or("-".to_string(), |m| m.to_string());
        println!(
            "stage {:>2} {mode:<9} {:<9} alpha {:<10} beta {:<8} delta {:<12} next {}",
            r.stage,
            format!("{:?}", r.case),
            r.alpha.to_string(),
            r.beta.to_string(),
            r.delta.to_string(),
            r.next
        );
    }

    // A randomized fixture over many stages.
    let (beta, thetas, alpha0) = fixtures::diff_fixture(17, 5000);
    let records = run_diff(&beta, &thetas, &Bootstrap::at(alpha0), 5000).unwrap();
    let follows = records.iter().filter(|r| matches!(r.mode, Some(DiffMode::Follow(_)))).count();
    let overtakes = records.iter().filter(|r| r.case == DiffCase::Overtake).count();
    println!("{} thetas, {follows} follow stages, {overtakes} overtakes", thetas.len());
    let last = records.last().unwrap();
    for (i, th) in last.thetas.iter().enumerate() {
        let side = if *th < last.alpha { "below" } else { "above" };
        println!("theta^{i} = {:.8} is {side} alpha = {:.8}", th.to_f64(), last.alpha.to_f64());
    }
    for c in verify_diff_claims(&records).checks {
        println!("{c}");
    }
}
