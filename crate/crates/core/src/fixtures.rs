//! Seeded random inputs for the constructions. Every generator is a pure
//! function of its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bits::Bits;
use crate::diag_diff::ThetaFamily;
use crate::dyadic::Dyadic;
use crate::machines::{DescriptionEvent, MachineTape};
use crate::omega_diff::HSpec;
use crate::semimeasures::{Increment, SemiMeasureTape};
use crate::streams::{LeftCeStream, RightCeStream};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A dyadic in `[0, 1)` with at most `bits` binary digits.
pub fn unit_dyadic(rng: &mut impl Rng, bits: u64) -> Dyadic {
    Dyadic::new(rng.gen_range(0..1u64 << bits), bits)
}

/// Nondecreasing stream in `[0, 1)` over `0..=horizon`. Each stage grows with
/// probability `p` by a power of two well below the remaining room.
pub fn left_ce(rng: &mut impl Rng, horizon: u64, p: f64) -> LeftCeStream {
    let mut v = unit_dyadic(rng, 4).shr(1);
    let mut values = Vec::with_capacity(horizon as usize + 1);
    values.push(v.clone());
    for _ in 0..horizon {
        if rng.gen_bool(p) {
            let room = Dyadic::one() - &v;
            let lead = -room.floor_log2().expect("stays below 1");
            v = &v + Dyadic::pow2_neg(lead as u64 + rng.gen_range(1..5));
        }
        values.push(v.clone());
    }
    LeftCeStream::from_values(values).expect("nondecreasing by construction")
}

/// Nonincreasing stream that falls from `start` toward `limit` at random
/// stages, truncated to `precision` bits.
pub fn right_ce(rng: &mut impl Rng, horizon: u64, start: Dyadic, limit: &Dyadic, p: f64, precision: u64) -> RightCeStream {
    let mut v = start;
    let mut values = Vec::with_capacity(horizon as usize + 1);
    values.push(v.clone());
    for _ in 0..horizon {
        if rng.gen_bool(p) && v > *limit {
            let keep = Dyadic::new(rng.gen_range(0..8), 3);
            v = (limit + (&v - limit) * keep).floor_to(precision);
        }
        values.push(v.clone());
    }
    RightCeStream::from_values(values).expect("nonincreasing by construction")
}

/// Target for the machine diagonalization: a nondecreasing stream in
/// `[3/4, 1)` that keeps moving by visible steps, so waiting requirements
/// see `beta - gamma` reopen and restraints come into play.
pub fn diag_beta(seed: u64, horizon: u64) -> LeftCeStream {
    let mut rng = rng(seed);
    let p = rng.gen_range(0.0005..0.01);
    // Coarse values keep the reference values, which multiply by beta at
    // every reset, from growing long mantissas.
    let values = left_ce(&mut rng, horizon, p).values().iter().map(|v| v.floor_to(18)).collect();
    LeftCeStream::from_values(values)
        .expect("flooring keeps order")
        .affine(&Dyadic::pow2_neg(2), &Dyadic::new(3, 2))
        .expect("positive scale")
}

/// A target `beta`, a family of `theta`s, and a starting `alpha_0`.
///
/// About half the `theta`s head for a point just above `alpha_0 + (beta -
/// beta_0)`, where the construction's `alpha` tends to sit, so that follow
/// epochs, jumps and overtakes all occur.
pub fn diff_fixture(seed: u64, horizon: u64) -> (LeftCeStream, ThetaFamily, Dyadic) {
    let mut rng = rng(seed);
    let p = rng.gen_range(0.01..0.3);
    let beta = left_ce(&mut rng, horizon, p);
    let alpha0 = unit_dyadic(&mut rng, 6).shr(1);
    let drift = beta.last() - beta.at(0);
    let count = rng.gen_range(1..9);
    let thetas = (0..count)
        .map(|_| {
            let limit = if rng.gen_bool(0.5) {
                &alpha0 + &drift + unit_dyadic(&mut rng, 8).shr(rng.gen_range(0..12))
            } else {
                unit_dyadic(&mut rng, 10) + unit_dyadic(&mut rng, 2)
            };
            let start = &limit + unit_dyadic(&mut rng, 6) + Dyadic::pow2_neg(8);
            let p = rng.gen_range(0.005..0.2);
            right_ce(&mut rng, horizon, start, &limit, p, 40)
        })
        .collect();
    (beta, ThetaFamily::new(thetas), alpha0)
}

/// A target `alpha` that stops growing at 80% of the horizon, and a
/// reference `mu` that keeps growing to the end, so every level of the
/// semi-measure construction has paid out all of `alpha` by the last stage.
pub fn semi_fixture(seed: u64, horizon: u64) -> (LeftCeStream, SemiMeasureTape) {
    let mut rng = rng(seed);
    let settle = horizon * 4 / 5;
    let mut values = left_ce(&mut rng, settle, 0.1).values().to_vec();
    values.resize(horizon as usize + 1, values.last().expect("nonempty").clone());
    let alpha = LeftCeStream::from_values(values).expect("nondecreasing");
    let indices = rng.gen_range(4..64);
    let mut increments = Vec::new();
    for stage in 0..=horizon {
        if stage > settle || rng.gen_bool(0.3) {
            increments.push(Increment {
                stage,
                index: rng.gen_range(0..indices),
                amount: Dyadic::pow2_neg(rng.gen_range(15..20)),
            });
        }
    }
    (alpha, SemiMeasureTape::from_increments(increments).expect("total stays below 1"))
}

/// Prefix-free tape of about `events` descriptions over stages `1..=stages`,
/// with programs of length <= `max_len` and outputs of length <= 6.
pub fn machine_tape(rng: &mut impl Rng, events: usize, stages: u64, max_len: usize) -> MachineTape {
    let mut tape = MachineTape::new();
    let mut stage_marks: Vec<u64> = (0..events).map(|_| rng.gen_range(1..=stages)).collect();
    stage_marks.sort_unstable();
    for stage in stage_marks {
        for _ in 0..8 {
            let len = rng.gen_range(max_len.min(3)..=max_len);
            let program = Bits::from_iter((0..len).map(|_| rng.gen_bool(0.5)));
            if tape.conflict_with(&program).is_some() {
                continue;
            }
            let out_len = rng.gen_range(0..=6);
            let output = Bits::from_iter((0..out_len).map(|_| rng.gen_bool(0.5)));
            tape.push_strict(DescriptionEvent::new(stage, program, output)).expect("checked above");
            break;
        }
    }
    tape
}

/// `(U, Q, h, horizon)` with at most 200 `U` events. `h` is either an
/// offset of the output's rank or a table with small values, so both short
/// and long descriptions occur.
pub fn omega_fixture(seed: u64) -> (MachineTape, MachineTape, HSpec, u64) {
    let mut rng = rng(seed);
    let horizon = rng.gen_range(5..60);
    let (nu, nq) = (rng.gen_range(1..=200), rng.gen_range(0..40));
    let u = machine_tape(&mut rng, nu, horizon, 14);
    let q = machine_tape(&mut rng, nq, horizon, 10);
    let h = if rng.gen_bool(0.5) {
        HSpec::Offset(rng.gen_range(1..6))
    } else {
        let outputs: Vec<Bits> = (0..127).map(Bits::nth_length_lex).collect();
        HSpec::Table(outputs.into_iter().map(|o| (o, rng.gen_range(1..16))).collect())
    };
    (u, q, h, horizon)
}
