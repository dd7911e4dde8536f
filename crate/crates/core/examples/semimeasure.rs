//! A universal semi-measure whose total mass is a prescribed left-c.e.
//! real, built next to a Martin-Lof test that pays for it.

use omega_sim::fixtures;
use omega_sim::semimeasures::{mixture_universal, uniform_semimeasure_with_sum, verify_domination, verify_semimeasure};

fn main() {
    let k_max = 8;
    let (alpha, mu) = fixtures::semi_fixture(4, 4000);
    let run = uniform_semimeasure_with_sum(&alpha, &mu, k_max, 4000).unwrap();

    println!("alpha = {}", alpha.last());
    println!("sum m = {}", run.m.total());
    println!("alpha (1 - 2^-{k_max}) = {}", alpha.last() - alpha.last().shr(k_max as u64));
    for k in 1..=k_max {
        println!(
            "level {k}: {} intervals, measure {:.6} (bound {:.6}), paid {}",
            run.test.level(k).count(),
            run.test.measure_at(k, 4000).to_f64(),
            0.5f64.powi(k as i32),
            run.levels[k as usize - 1].total()
        );
    }
    let dom = verify_domination(&run.m, &mu, k_max, 4000);
    println!("m(i) >= 2^-{k_max} mu(i): first failure {:?}", dom.non_strict);

    for c in verify_semimeasure(&run.records, k_max).checks {
        println!("{c}");
    }

    let mixed = mixture_universal(&[mu.clone(), run.m.clone()]);
    println!("mixture of mu and m has total {:.8}", mixed.total().to_f64());
}
