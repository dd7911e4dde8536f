//! Acceptance gate: twelve properties checked on randomized and canonical
//! inputs, one PASS/FAIL line each. Every comparison is exact.
//!
//! The oracles here recompute measures, complexities and per-stage
//! invariants from raw tapes and records; the library verifiers are run as
//! well, but a criterion never passes on their word alone.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use rand::Rng;

use omega_sim::bits::Bits;
use omega_sim::diag_diff::{run_diff, verify_diff_claims, Bootstrap, DiffCase, DiffMode, DiffRecord};
use omega_sim::diag_machine::layerwise::IndexStream;
use omega_sim::diag_machine::{
    run_diag, run_layerwise_diag, verify_diag_claims, verify_layerwise, Copying, DiagCase, DiagEvent, DiagRun,
    Opponent, Overshooting, RandomOpponent, ReqState, Stalling,
};
use omega_sim::dyadic::Dyadic;
use omega_sim::fixtures;
use omega_sim::kraft_chaitin::{kc_allocate, real_to_machine, Request};
use omega_sim::machines::{adjoin_universal, footnote_pad, MachineTape};
use omega_sim::omega_diff::{combine_w, transform_v, verify_omega_diff, Expansion, OmegaDiffRun};
use omega_sim::report::Report;
use omega_sim::semimeasures::{uniform_semimeasure_with_sum, verify_semimeasure};
use omega_sim::streams::LeftCeStream;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn library_passes(what: &str, report: &Report) -> Result<(), String> {
    match report.failed().next() {
        None => Ok(()),
        Some(c) => Err(format!("{what}: library verifier reports {c}")),
    }
}

// ---- oracles ----

fn weight(program: &Bits) -> Dyadic {
    Dyadic::pow2_neg(program.len() as u64)
}

/// Halting measure after each stage `0..=horizon`, summed from the raw events.
fn measures(tape: &MachineTape, horizon: u64) -> Vec<Dyadic> {
    let mut out = Vec::with_capacity(horizon as usize + 1);
    let mut events = tape.events().iter().peekable();
    let mut total = Dyadic::zero();
    for s in 0..=horizon {
        while let Some(e) = events.next_if(|e| e.stage <= s) {
            total += weight(&e.program);
        }
        out.push(total.clone());
    }
    out
}

/// First pair of comparable programs, found by sorting: in lexicographic
/// order a prefix sorts immediately before some string it is a prefix of.
fn comparable_pair(tape: &MachineTape) -> Option<(String, String)> {
    let mut programs: Vec<String> = tape.events().iter().map(|e| e.program.to_string()).collect();
    programs.sort();
    programs
        .windows(2)
        .find(|w| w[1].starts_with(w[0].as_str()))
        .map(|w| (w[0].clone(), w[1].clone()))
}

fn prefix_free(what: &str, tape: &MachineTape) -> Result<(), String> {
    match comparable_pair(tape) {
        None => Ok(()),
        Some((a, b)) => Err(format!("{what}: programs {a:?} and {b:?} are comparable")),
    }
}

/// Shortest program length per output among events up to `s`.
fn complexities(tape: &MachineTape, s: u64) -> BTreeMap<String, usize> {
    let mut k = BTreeMap::new();
    for e in tape.events().iter().take_while(|e| e.stage <= s) {
        let v = k.entry(e.output.to_string()).or_insert(usize::MAX);
        *v = (*v).min(e.program.len());
    }
    k
}

// ---- criteria ----

fn c1_prefix_free() -> Outcome {
    const N: u64 = 1000;
    let mut rng = fixtures::rng(0xC1);
    for n in 0..N {
        let count = rng.gen_range(1..40);
        let mut stage = 0;
        let requests: Vec<(u64, Request)> = (0..count)
            .map(|_| {
                stage += rng.gen_range(0..3);
                (stage, Request::of_length(rng.gen_range(0..12)))
            })
            .collect();
        let lengths: Vec<usize> = requests.iter().map(|r| r.1.length).collect();
        let alloc = kc_allocate(requests);
        prefix_free(&format!("kc_allocate #{n}"), &alloc.tape)?;
        for (p, len) in alloc.programs.iter().zip(&lengths) {
            if let Some(p) = p {
                ensure!(p.len() == *len, "kc_allocate #{n}: granted {p} for length {len}");
            }
        }

        let p = rng.gen_range(0.05..0.6);
        let alpha = fixtures::left_ce(&mut rng, 50, p);
        let tape = real_to_machine(&alpha, 50).map_err(|e| e.to_string())?;
        prefix_free(&format!("real_to_machine #{n}"), &tape)?;

        let parts = rng.gen_range(1..5);
        let components: Vec<MachineTape> = (0..parts)
            .map(|_| {
                let events = rng.gen_range(0..40);
                fixtures::machine_tape(&mut rng, events, 20, 10)
            })
            .collect();
        prefix_free(&format!("adjoin_universal #{n}"), &adjoin_universal(&components))?;
        prefix_free(&format!("footnote_pad #{n}"), &footnote_pad(&components[0]))?;
    }

    for seed in 0..N {
        let (u, q, h, horizon) = fixtures::omega_fixture(seed);
        let run = transform_v(&u, &h, &q, horizon, Expansion::Compact).map_err(|e| e.to_string())?;
        prefix_free(&format!("transform_v seed {seed}"), &run.v)?;
        prefix_free(&format!("combine_w seed {seed}"), &combine_w(&u, &run.v))?;
    }

    let beta = LeftCeStream::default_beta(200);
    for seed in 0..N {
        let run = run_diag(&mut RandomOpponent::new(seed), &beta, 200).map_err(|e| e.to_string())?;
        prefix_free(&format!("diag Q seed {seed}"), &run.q)?;
    }
    Ok(format!("{N} inputs for each of 7 producers, no comparable pair"))
}

fn c2_kc_exact() -> Outcome {
    let mut rng = fixtures::rng(0xC2);
    for n in 0..100 {
        let p = rng.gen_range(0.01..0.9);
        let alpha = fixtures::left_ce(&mut rng, 1000, p);
        let tape = real_to_machine(&alpha, 1000).map_err(|e| e.to_string())?;
        for (s, m) in measures(&tape, 1000).iter().enumerate() {
            ensure!(m == alpha.at(s as u64), "fixture {n}, stage {s}: Omega_M = {m}, alpha = {}", alpha.at(s as u64));
        }
    }
    Ok("100 streams x 1001 stages, Omega_M[s] = alpha_s".into())
}

struct DiagCase3 {
    name: String,
    run: DiagRun,
    opponent_tape: MachineTape,
}

/// The canonical opponents against the default target, then randomized
/// opponents against randomized targets (whose jumps make requirements
/// restrain and reset).
fn diag_runs(stages: u64) -> Result<Vec<DiagCase3>, String> {
    let default_beta = LeftCeStream::default_beta(stages);
    let mut opponents: Vec<(Box<dyn Opponent>, LeftCeStream)> = vec![
        (Box::new(Stalling::new()), default_beta.clone()),
        (Box::new(Copying::new()), default_beta.clone()),
        (Box::new(Overshooting::new(stages / 2)), default_beta),
    ];
    opponents.extend((0..100).map(|seed| (Box::new(RandomOpponent::new(seed)) as Box<dyn Opponent>, fixtures::diag_beta(seed, stages))));
    opponents
        .into_iter()
        .map(|(mut o, beta)| {
            let run = run_diag(o.as_mut(), &beta, stages).map_err(|e| e.to_string())?;
            Ok(DiagCase3 {
                name: o.name(),
                run,
                opponent_tape: o.tape().clone(),
            })
        })
        .collect()
}

/// Active requirements as `(state, restraint exponent)`, replayed from events.
fn replay_requirements(reqs: &mut Vec<(ReqState, u64)>, events: &[DiagEvent]) {
    for e in events {
        match e {
            DiagEvent::Activate { restraint_exp, .. } => reqs.push((ReqState::Preparing, *restraint_exp)),
            DiagEvent::Transition { d, to } => {
                if let Some(r) = reqs.get_mut(*d) {
                    r.0 = *to;
                }
            }
            DiagEvent::Cancel { d } => reqs.truncate(*d),
            _ => {}
        }
    }
}

/// `alpha <= beta` is a property of the construction proper. Once the
/// opponent passes `alpha` the run follows the bailout formula instead,
/// which criterion 6 covers, so those stages are counted but not compared.
fn c3_stage_invariants(runs: &[DiagCase3]) -> Outcome {
    let (mut restrained, mut bailout_stages) = (0u64, 0u64);
    for c in runs {
        let records = &c.run.records;
        let mut reqs = Vec::new();
        for (k, r) in records.iter().enumerate() {
            replay_requirements(&mut reqs, &r.events);
            if k == 0 {
                continue;
            }
            let p = &records[k - 1];
            ensure!(p.alpha <= r.alpha, "{}: alpha fell at stage {}", c.name, r.stage);
            if matches!(r.case, DiagCase::Bailout | DiagCase::BailedOut) {
                bailout_stages += 1;
                continue;
            }
            ensure!(r.alpha <= r.beta, "{}: alpha {} above beta {} at stage {}", c.name, r.alpha, r.beta, r.stage);
            let gap = &r.alpha - &r.gamma;
            for (d, (state, e)) in reqs.iter().enumerate() {
                if *state != ReqState::Preparing {
                    restrained += 1;
                    ensure!(gap < Dyadic::pow2_neg(*e), "{}: stage {}: R_{d} {state} but alpha - gamma = {gap} >= 2^-{e}", c.name, r.stage);
                }
            }
        }
        library_passes(&c.name, &verify_diag_claims(records))?;
    }
    Ok(format!(
        "{} runs x 10^4 stages; {restrained} restraint instances; {bailout_stages} post-bailout stages checked for monotonicity only",
        runs.len()
    ))
}

fn c4_incremental(runs: &[DiagCase3]) -> Outcome {
    let (mut total, mut pairs) = (0u64, 0u64);
    for c in runs {
        // Per active requirement: (restraint exponent, incremental count, gamma at last one).
        let mut reqs: Vec<(u64, u64, Option<Dyadic>)> = Vec::new();
        for r in &c.run.records {
            for e in &r.events {
                match e {
                    DiagEvent::Activate { restraint_exp, .. } => reqs.push((*restraint_exp, 0, None)),
                    DiagEvent::Cancel { d } => reqs.truncate(*d),
                    DiagEvent::Incremental { d } => {
                        let Some((e, n, last)) = reqs.get_mut(*d) else {
                            return Err(format!("{}: incremental stage for inactive R_{d}", c.name));
                        };
                        *n += 1;
                        total += 1;
                        ensure!(*e >= 62 || *n <= 1u64 << (*e + 1), "{}: R_{d} has {n} incremental stages > 2/r_d = 2^{}", c.name, *e + 1);
                        if let Some(g) = last {
                            pairs += 1;
                            let growth = &r.gamma - &*g;
                            ensure!(growth >= Dyadic::pow2_neg(*e + 1), "{}: stage {}: gamma grew {growth} < r_d/2", c.name, r.stage);
                        }
                        *last = Some(r.gamma.clone());
                    }
                    _ => {}
                }
            }
        }
    }
    ensure!(total > 0, "no incremental stage occurred in any run");
    Ok(format!("{total} incremental stages, {pairs} consecutive pairs"))
}

fn c5_copying_satisfies(runs: &[DiagCase3]) -> Outcome {
    let c = runs.iter().find(|c| c.name == "copying").ok_or("no copying run")?;
    let horizon = c.run.records.last().map(|r| r.stage).unwrap_or(0);
    let kq = complexities(&c.run.q, horizon);
    let km = complexities(&c.opponent_tape, horizon);
    for d in 0..=4 {
        let r = c.run.final_requirements.iter().find(|r| r.d == d).ok_or(format!("R_{d} is not active at the horizon"))?;
        ensure!(r.state != ReqState::Preparing, "R_{d} is still preparing");
        let sigma = r.witness.as_ref().ok_or(format!("R_{d} has no witness"))?.to_string();
        let tau = r.code.len();
        let q = kq.get(&sigma).copied();
        ensure!(q.is_some_and(|q| q <= tau), "R_{d}: K_Q({sigma}) = {q:?} > |tau_d| = {tau}");
        let m = km.get(&sigma).copied();
        ensure!(m.map_or(true, |m| m > tau + d), "R_{d}: K_M({sigma}) = {m:?} <= {}", tau + d);
    }
    Ok("R_0..R_4 settled with K_Q(sigma_d) <= |tau_d| and K_M(sigma_d) > |tau_d| + d".into())
}

fn c6_bailout(runs: &[DiagCase3]) -> Outcome {
    let mut bailed = Vec::new();
    for c in runs {
        let records = &c.run.records;
        let Some(k) = records.iter().position(|r| r.case == DiagCase::Bailout) else {
            ensure!(!c.name.starts_with("overshoot"), "{}: never bailed out", c.name);
            continue;
        };
        let gamma = &records[k].gamma;
        for r in &records[k..] {
            ensure!(r.alpha < *gamma, "{}: alpha {} >= gamma {gamma} at stage {}", c.name, r.alpha, r.stage);
        }
        bailed.push(c.name.clone());
    }
    ensure!(bailed.iter().any(|n| n.starts_with("overshoot")), "overshooting run did not bail out");
    Ok(format!("{} runs bailed out, alpha below the bailout gamma afterwards", bailed.len()))
}

fn c7_diff(records: &[DiffRecord], fixture: u64) -> Result<(u64, u64), String> {
    let (mut epochs, mut segments) = (0u64, 0u64);
    let first = &records[0];
    ensure!(first.slack().is_positive(), "fixture {fixture}: delta_0 <= alpha_0 - beta_0");
    let mut epoch: Option<(usize, Dyadic)> = None;
    let mut peak: Option<Dyadic> = None;
    for w in records.windows(2) {
        let (p, r) = (&w[0], &w[1]);
        let s = r.stage;
        let gap = &r.alpha - &r.beta;
        ensure!(r.delta > gap, "fixture {fixture}, stage {s}: delta {} <= alpha - beta {gap}", r.delta);
        match r.mode {
            Some(DiffMode::Wait) => {
                let upper = &gap + Dyadic::pow2_neg(s - 1);
                ensure!(gap <= r.delta && r.delta <= upper, "fixture {fixture}, stage {s}: wait sandwich fails");
                peak = None;
            }
            Some(DiffMode::Follow(i)) => {
                let gained = &r.alpha - &epoch.as_ref().ok_or(format!("fixture {fixture}: follow outside an epoch"))?.1;
                let budget = Dyadic::pow2_neg(i as u64) + Dyadic::pow2_neg(i as u64);
                ensure!(gained <= budget, "fixture {fixture}, stage {s}: follow({i}) epoch gained {gained} > 2^{}", 1 - i as i64);
                if r.case != DiffCase::Overtake {
                    let (da, db) = (&r.alpha - &p.alpha, &r.beta - &p.beta);
                    ensure!(da >= db, "fixture {fixture}, stage {s}: alpha grew {da} < beta's {db}");
                }
                let slack = r.slack();
                let top = match peak.take() {
                    Some(x) if x > slack => x,
                    _ => slack.clone(),
                };
                ensure!(slack >= top.half(), "fixture {fixture}, stage {s}: slack {slack} below half of {top}");
                peak = Some(top);
            }
            None => return Err(format!("fixture {fixture}: stage {s} has no mode")),
        }
        match (r.mode, r.next) {
            (Some(DiffMode::Follow(_)), DiffMode::Follow(_)) => {}
            (_, DiffMode::Follow(i)) => {
                epochs += 1;
                segments += 1;
                epoch = Some((i, r.alpha.clone()));
            }
            (_, DiffMode::Wait) => epoch = None,
        }
    }
    Ok((epochs, segments))
}

fn c7_diag_diff() -> Outcome {
    let mut epochs = 0;
    for seed in 0..100 {
        let (beta, thetas, alpha0) = fixtures::diff_fixture(seed, 10_000);
        let records = run_diff(&beta, &thetas, &Bootstrap::at(alpha0), 10_000).map_err(|e| e.to_string())?;
        epochs += c7_diff(&records, seed)?.0;
        library_passes(&format!("fixture {seed}"), &verify_diff_claims(&records))?;
    }
    ensure!(epochs > 0, "no follow epoch occurred in any fixture");
    Ok(format!("100 fixtures x 10^4 stages, {epochs} follow epochs"))
}

fn omega_runs() -> Result<Vec<(MachineTape, OmegaDiffRun, u64)>, String> {
    (0..100)
        .map(|seed| {
            let (u, q, h, horizon) = fixtures::omega_fixture(seed);
            let run = transform_v(&u, &h, &q, horizon, Expansion::Compact).map_err(|e| e.to_string())?;
            Ok((u, run, horizon))
        })
        .collect()
}

fn c8_ledger(runs: &[(MachineTape, OmegaDiffRun, u64)]) -> Outcome {
    let mut stages = 0;
    for (n, (u, run, horizon)) in runs.iter().enumerate() {
        let (mu, mv) = (measures(u, *horizon), measures(&run.v, *horizon));
        let first = run.ledger.first.clone();
        for s in 0..=*horizon {
            let predicted = match &first {
                Some((at, sigma0, _)) if *at <= s => {
                    let c = sigma0.len() as u64;
                    let copied = sigma0.with_bit(true);
                    // V(sigma0 1 p) = Q(p): the Q measure copied so far, undone of its 2^-(c+1) scale.
                    let gamma: Dyadic = run
                        .v
                        .events()
                        .iter()
                        .filter(|e| e.stage <= s && copied.is_prefix_of(&e.program))
                        .map(|e| Dyadic::pow2_neg(e.program.len() as u64 - c - 1))
                        .sum();
                    let withheld: Dyadic = run.ledger.short.iter().filter(|e| e.stage <= s).map(|e| Dyadic::pow2_neg(e.h)).sum();
                    let w = Dyadic::pow2_neg(c + 1);
                    &w - &w * &gamma + withheld
                }
                _ => Dyadic::zero(),
            };
            let diff = &mu[s as usize] - &mv[s as usize];
            ensure!(diff == predicted, "fixture {n}, stage {s}: Omega_U - Omega_V = {diff}, identity gives {predicted}");

            let (ku, kv) = (complexities(u, s), complexities(&run.v, s));
            for (tau, k) in &ku {
                let v = kv.get(tau).copied();
                ensure!(v.is_some_and(|v| v <= k + 1), "fixture {n}, stage {s}: K_V({tau}) = {v:?} > K_U + 1 = {}", k + 1);
            }
            stages += 1;
        }
        library_passes(&format!("fixture {n}"), &verify_omega_diff(&run.records))?;
    }
    let short: usize = runs.iter().map(|r| r.1.ledger.short.len()).sum();
    Ok(format!("100 fixtures, {stages} stages, {short} members of A in total"))
}

fn c9_combine(runs: &[(MachineTape, OmegaDiffRun, u64)]) -> Outcome {
    for (n, (u, run, horizon)) in runs.iter().enumerate() {
        let w = combine_w(u, &run.v);
        let (mu, mv, mw) = (measures(u, *horizon), measures(&run.v, *horizon), measures(&w, *horizon));
        for s in 0..=*horizon as usize {
            let expected = (&mu[s] + &mv[s]).half();
            ensure!(mw[s] == expected, "fixture {n}, stage {s}: Omega_W = {}, average = {expected}", mw[s]);
        }
    }
    Ok("Omega_W = (Omega_U + Omega_V) / 2 at every stage of 100 fixtures".into())
}

fn c10_semimeasure() -> Outcome {
    const K: u32 = 8;
    for seed in 0..50 {
        let (alpha, mu) = fixtures::semi_fixture(seed, 10_000);
        let run = uniform_semimeasure_with_sum(&alpha, &mu, K, 10_000).map_err(|e| e.to_string())?;
        for k in 1..=K {
            let measure: Dyadic = run.test.intervals.iter().filter(|t| t.k == k).map(|t| &t.hi - &t.lo).sum();
            ensure!(measure <= Dyadic::pow2_neg(k as u64), "fixture {seed}: U_{k} has measure {measure}");
            let mass: Dyadic = run.levels[k as usize - 1].increments().iter().map(|i| i.amount.clone()).sum();
            let owed = alpha.last().shr(k as u64);
            ensure!(mass == owed, "fixture {seed}: level {k} paid {mass}, expected 2^-{k} alpha = {owed}");
        }
        let total: Dyadic = run.m.increments().iter().map(|i| i.amount.clone()).sum();
        let expected = alpha.last() - alpha.last().shr(K as u64);
        ensure!(total == expected, "fixture {seed}: sum m = {total}, alpha (1 - 2^-8) = {expected}");
        let report = verify_semimeasure(&run.records, K);
        library_passes(&format!("fixture {seed}"), &report)?;
        ensure!(
            report.check("sum-at-quiescence").is_some_and(|c| c.examined == 1),
            "fixture {seed}: not every level had consumed alpha at the horizon"
        );
    }
    Ok("50 fixtures x 10^4 stages, kMax = 8".into())
}

fn c11_layerwise() -> Outcome {
    let stages = 3000;
    let xi = LeftCeStream::from_values((0..=stages + 2).map(|i| Dyadic::one() - Dyadic::pow2_neg(i)).collect()).unwrap();
    let beta = LeftCeStream::default_beta(stages);
    let fresh = || -> Vec<Box<dyn Opponent>> { vec![Box::new(Copying::new()), Box::new(Stalling::new())] };

    let index = IndexStream::new(vec![(0, 0), (400, 1), (1100, 0)]).map_err(|e| e.to_string())?;
    let records = run_layerwise_diag(&index, &mut fresh(), &xi, &beta, stages).map_err(|e| e.to_string())?;
    let restarts = records.iter().filter(|r| r.restarted).count();
    ensure!(restarts == 2, "{restarts} restarts, expected 2");
    for w in records.windows(2) {
        ensure!(w[0].inner.alpha <= w[1].inner.alpha, "alpha fell at stage {}", w[1].stage);
    }
    let (lo, hi) = (xi.at(2), xi.at(3));
    for r in records.iter().filter(|r| r.stage >= 1100) {
        ensure!(lo <= &r.inner.alpha && r.inner.alpha <= *hi, "stage {}: alpha {} outside [{lo}, {hi}]", r.stage, r.inner.alpha);
    }
    library_passes("stabilizing", &verify_layerwise(&records, Some(&xi)))?;

    // Alternates every 37 stages until the horizon.
    let changes: Vec<(u64, usize)> = (0..=stages / 37).map(|n| (n * 37, (n % 2) as usize)).collect();
    let index = IndexStream::new(changes).map_err(|e| e.to_string())?;
    let records = run_layerwise_diag(&index, &mut fresh(), &xi, &beta, stages).map_err(|e| e.to_string())?;
    let mut count = 0u64;
    for r in &records {
        if r.stage > 0 && index.at(r.stage) != index.at(r.stage - 1) {
            count += 1;
        }
        ensure!(r.inner.alpha >= *xi.at(count), "stage {}: alpha {} < xi_{count}", r.stage, r.inner.alpha);
    }
    library_passes("alternating", &verify_layerwise(&records, Some(&xi)))?;
    Ok(format!("2 restarts when stabilizing; {count} changes, alpha_s >= xi_changes(s) throughout"))
}

fn c12_footnote() -> Outcome {
    let mut rng = fixtures::rng(0xC12);
    for n in 0..100 {
        let events = rng.gen_range(1..200);
        let u = fixtures::machine_tape(&mut rng, events, 50, 12);
        let v = footnote_pad(&u);
        let odd = v.events().iter().find(|e| e.program.len() % 2 == 1);
        ensure!(odd.is_none(), "fixture {n}: odd-length program {}", odd.unwrap().program);
        ensure!(measures(&u, 50) == measures(&v, 50), "fixture {n}: Omega_V and Omega_U differ");
    }
    Ok("100 fixtures, equal measure at every stage, even lengths only".into())
}

fn main() -> ExitCode {
    let mut failed = 0;
    let mut report = |n: u32, what: &str, start: Instant, outcome: Outcome| {
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS criterion {n:>2} {what}: {detail} ({secs:.1}s)"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {n:>2} {what}: {why} ({secs:.1}s)");
            }
        }
    };

    let t = Instant::now();
    report(1, "prefix-free domains", t, c1_prefix_free());
    let t = Instant::now();
    report(2, "Kraft-Chaitin exactness", t, c2_kc_exact());

    let t = Instant::now();
    match diag_runs(10_000) {
        Ok(runs) => {
            report(3, "stagewise alpha and restraint bounds", t, c3_stage_invariants(&runs));
            let t = Instant::now();
            report(4, "incremental stages", t, c4_incremental(&runs));
            let t = Instant::now();
            report(5, "requirements satisfied against copying", t, c5_copying_satisfies(&runs));
            let t = Instant::now();
            report(6, "bailout soundness", t, c6_bailout(&runs));
        }
        Err(e) => {
            for (n, what) in [(3, "stagewise alpha and restraint bounds"), (4, "incremental stages"), (5, "requirements satisfied against copying"), (6, "bailout soundness")] {
                report(n, what, t, Err(e.clone()));
            }
        }
    }

    let t = Instant::now();
    report(7, "difference diagonalization", t, c7_diag_diff());

    let t = Instant::now();
    match omega_runs() {
        Ok(runs) => {
            report(8, "Omega difference identity", t, c8_ledger(&runs));
            let t = Instant::now();
            report(9, "W combination", t, c9_combine(&runs));
        }
        Err(e) => {
            report(8, "Omega difference identity", t, Err(e.clone()));
            report(9, "W combination", t, Err(e));
        }
    }

    let t = Instant::now();
    report(10, "semi-measure construction", t, c10_semimeasure());
    let t = Instant::now();
    report(11, "layerwise restarts", t, c11_layerwise());
    let t = Instant::now();
    report(12, "footnote padding", t, c12_footnote());

    if failed == 0 {
        println!("acceptance: all 12 criteria pass");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: {failed} of 12 criteria fail");
        ExitCode::FAILURE
    }
}
