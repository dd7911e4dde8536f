//! Replay a diagonalization trace and check the stagewise invariants.
//!
//! The verifier rebuilds the requirement states, the opponent's tape and `Q`
//! from the events in the trace alone; it never calls into the construction.

use std::collections::BTreeMap;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::machines::{DescriptionEvent, MachineTape};
use crate::report::{Report, Suite};

use super::layerwise::LayerRecord;
use super::{DiagCase, DiagEvent, DiagRecord, ReqState};

const CHECKS: &[&str] = &[
    "stage-sequence",
    "alpha-monotone",
    "alpha-below-target",
    "restraint-gap",
    "alpha-formula",
    "restraint-rule",
    "fresh-code",
    "reference-positive",
    "single-unsettled",
    "injury-rule",
    "incremental-bound",
    "incremental-growth",
    "gamma-step",
    "short-programs-blocked",
    "witness-fresh",
    "q-prefix-free",
    "opponent-prefix-free",
    "gamma-consistent",
    "bailout-trigger",
    "bailout-sound",
    "settled-q-description",
    "settled-m-complexity",
];

#[derive(Debug, Clone)]
struct ReqView {
    state: ReqState,
    exp: u64,
    code: Bits,
    witness: Option<Bits>,
    reference: Option<(Dyadic, Dyadic)>,
    incrementals: u64,
    last_incremental_gamma: Option<Dyadic>,
}

/// `x < 2^-e`.
fn below_pow2(x: &Dyadic, e: u64) -> bool {
    !x.is_positive() || x.floor_log2().expect("positive") < -(e as i64)
}

#[derive(Default)]
struct Replay {
    reqs: Vec<ReqView>,
    /// Multiset of restraint exponents over active non-preparing requirements.
    settled_exps: BTreeMap<u64, usize>,
    m: MachineTape,
    q: MachineTape,
    codes: MachineTape,
}

impl Replay {
    fn counts(state: ReqState) -> bool {
        state != ReqState::Preparing
    }

    fn add_exp(&mut self, e: u64) {
        *self.settled_exps.entry(e).or_default() += 1;
    }

    fn remove_exp(&mut self, e: u64) {
        if let Some(n) = self.settled_exps.get_mut(&e) {
            *n -= 1;
            if *n == 0 {
                self.settled_exps.remove(&e);
            }
        }
    }

    /// Largest restraint exponent (smallest restraint) among non-preparing requirements.
    fn tightest(&self) -> Option<u64> {
        self.settled_exps.keys().next_back().copied()
    }

    fn settled_checks(&self, suite: &mut Suite, stage: u64) {
        for (d, r) in self.reqs.iter().enumerate() {
            let Some(sigma) = &r.witness else { continue };
            if r.state == ReqState::Preparing {
                continue;
            }
            let kq = self.q.complexity(sigma);
            suite.record("settled-q-description", stage, kq.is_some_and(|k| k <= r.code.len()), || {
                format!("R_{d}: K_Q({sigma}) = {kq:?}, code length {}", r.code.len())
            });
            let km = self.m.complexity(sigma);
            let bound = r.code.len() + d;
            suite.record("settled-m-complexity", stage, km.map_or(true, |k| k > bound), || {
                format!("R_{d}: K_M({sigma}) = {km:?} <= {bound}")
            });
        }
    }
}

/// Check the per-stage invariants of one diagonalization run.
pub fn verify_diag_claims(records: &[DiagRecord]) -> Report {
    let mut suite = Suite::new(CHECKS);
    let mut st = Replay::default();
    let mut bailout_gamma: Option<Dyadic> = None;

    for (k, rec) in records.iter().enumerate() {
        let s = rec.stage;
        let prev = if k > 0 { Some(&records[k - 1]) } else { None };
        suite.record("stage-sequence", s, prev.map_or(s == 0 && rec.case == DiagCase::Start, |p| s == p.stage + 1 && rec.case != DiagCase::Start), || {
            format!("record {k} has stage {s} and case {:?}", rec.case)
        });

        if let Some(p) = prev {
            suite.record("alpha-monotone", s, p.alpha <= rec.alpha, || format!("alpha fell from {} to {}", p.alpha, rec.alpha));
        }

        if let Some(g) = &bailout_gamma {
            suite.record("bailout-sound", s, rec.alpha < *g, || format!("alpha {} not below gamma {g}", rec.alpha));
            continue;
        }

        if rec.case == DiagCase::Bailout {
            st.settled_checks(&mut suite, s.saturating_sub(1));
        }

        // The opponent's moves come first: they are what the stage reacts to.
        let gamma_prev = st.m.omega();
        for ev in &rec.events {
            if let DiagEvent::Opponent { program, output } = ev {
                let ok = st.m.push_strict(DescriptionEvent::new(s, program.clone(), output.clone())).is_ok();
                suite.record("opponent-prefix-free", s, ok, || format!("opponent program {program} is comparable with an earlier one"));
            }
        }
        suite.record("gamma-consistent", s, st.m.omega() == rec.gamma, || {
            format!("recorded gamma {} but replayed tape has {}", rec.gamma, st.m.omega())
        });

        if k > 0 && rec.case != DiagCase::Bailout {
            if let Some(e) = st.tightest() {
                let step = &rec.gamma - &gamma_prev;
                suite.record("gamma-step", s, below_pow2(&step, e), || format!("gamma grew by {step}, restraint 2^-{e}"));
                for ev in &rec.events {
                    if let DiagEvent::Opponent { program, .. } = ev {
                        suite.record("short-programs-blocked", s, program.len() as u64 > e, || {
                            format!("opponent converged on {program} of length <= {e}")
                        });
                    }
                }
            }
        }

        match (rec.case, prev) {
            (DiagCase::Start, _) | (_, None) => {}
            (DiagCase::Bailout, Some(p)) => {
                suite.record("bailout-trigger", s, rec.gamma > p.alpha, || format!("bailout with gamma {} <= alpha {}", rec.gamma, p.alpha));
            }
            (_, Some(p)) => {
                suite.record("bailout-trigger", s, rec.gamma <= p.alpha, || {
                    format!("gamma {} passed alpha {} without a bailout", rec.gamma, p.alpha)
                });
                suite.record("alpha-below-target", s, rec.alpha <= rec.beta, || format!("alpha {} above target {}", rec.alpha, rec.beta));
            }
        }

        let mut cancelled = false;
        for ev in &rec.events {
            match ev {
                DiagEvent::Opponent { .. } => {}
                DiagEvent::Bailout { gamma, .. } => {
                    suite.record("bailout-sound", s, rec.alpha < *gamma, || format!("alpha {} not below gamma {gamma}", rec.alpha));
                    bailout_gamma = Some(gamma.clone());
                }
                DiagEvent::Cancel { d } => {
                    cancelled = true;
                    let ok = *d + 1 == st.reqs.len();
                    suite.record("injury-rule", s, ok, || format!("cancelled R_{d} while {} are active", st.reqs.len()));
                    if ok {
                        let r = st.reqs.pop().expect("nonempty");
                        if Replay::counts(r.state) {
                            st.remove_exp(r.exp);
                        }
                    }
                }
                DiagEvent::Activate { d, code, restraint_exp } => {
                    suite.record("restraint-rule", s, *d == st.reqs.len() && *restraint_exp == (code.len() + d) as u64, || {
                        format!("R_{d} activated with code {code} and restraint 2^-{restraint_exp}")
                    });
                    let fresh = st.q.conflict_with(code).is_none() && st.codes.push_strict(DescriptionEvent::new(s, code.clone(), Bits::new())).is_ok();
                    suite.record("fresh-code", s, fresh, || format!("code {code} is comparable with an earlier code"));
                    st.reqs.push(ReqView {
                        state: ReqState::Preparing,
                        exp: *restraint_exp,
                        code: code.clone(),
                        witness: None,
                        reference: None,
                        incrementals: 0,
                        last_incremental_gamma: None,
                    });
                }
                DiagEvent::Transition { d, to } => {
                    let Some(r) = st.reqs.get_mut(*d) else {
                        suite.record("injury-rule", s, false, || format!("transition of inactive R_{d}"));
                        continue;
                    };
                    let (was, exp) = (r.state, r.exp);
                    r.state = *to;
                    if *to != ReqState::Restraining {
                        r.reference = None;
                    }
                    match (Replay::counts(was), Replay::counts(*to)) {
                        (false, true) => st.add_exp(exp),
                        (true, false) => st.remove_exp(exp),
                        _ => {}
                    }
                }
                DiagEvent::Reference { d, q, l } => {
                    suite.record("reference-positive", s, q.is_positive(), || format!("R_{d} got q = {q}"));
                    if let Some(r) = st.reqs.get_mut(*d) {
                        r.reference = Some((q.clone(), l.clone()));
                    }
                }
                DiagEvent::Incremental { d } => {
                    let Some(r) = st.reqs.get_mut(*d) else { continue };
                    r.incrementals += 1;
                    let (n, e) = (r.incrementals, r.exp);
                    suite.record("incremental-bound", s, e >= 62 || n <= 1u64 << (e + 1), || {
                        format!("R_{d} has {n} incremental stages, bound 2^{}", e + 1)
                    });
                    if let Some(last) = &r.last_incremental_gamma {
                        let growth = &rec.gamma - last;
                        let ok = growth >= Dyadic::pow2_neg(e + 1);
                        suite.record("incremental-growth", s, ok, || format!("R_{d}: gamma grew only {growth} since the last incremental stage"));
                    }
                    r.last_incremental_gamma = Some(rec.gamma.clone());
                }
                DiagEvent::Describe { d, program, output } => {
                    let Some(r) = st.reqs.get_mut(*d) else { continue };
                    let ok = st.q.push_strict(DescriptionEvent::new(s, program.clone(), output.clone())).is_ok() && *program == r.code;
                    suite.record("q-prefix-free", s, ok, || format!("Q({program}) clashes with the domain or the reserved code"));
                    let bound = r.code.len() + d;
                    let km = st.m.complexity(output);
                    suite.record("witness-fresh", s, km.map_or(true, |k| k > bound), || {
                        format!("witness {output} has K_M = {km:?} <= {bound}")
                    });
                    r.witness = Some(output.clone());
                }
            }
        }
        if bailout_gamma.is_some() || rec.case == DiagCase::Start {
            continue;
        }

        let non_waiting = st.reqs.iter().filter(|r| r.state != ReqState::Waiting).count();
        suite.record("single-unsettled", s, non_waiting <= 1 && st.reqs.len() == rec.active, || {
            format!("{non_waiting} non-waiting requirements, {} active (recorded {})", st.reqs.len(), rec.active)
        });

        // Every requirement above the lowest sees target - gamma < r_d; if
        // anything was cancelled, the lowest survivor sees target - gamma >= r_d.
        let diff = &rec.beta - &rec.gamma;
        if let Some((lowest, higher)) = st.reqs.split_last() {
            let ok = higher.iter().all(|r| below_pow2(&diff, r.exp)) && (!cancelled || !below_pow2(&diff, lowest.exp));
            suite.record("injury-rule", s, ok, || format!("target - gamma = {diff} inconsistent with the surviving requirements"));
            let expected = match (&lowest.state, &lowest.reference) {
                (ReqState::Restraining, Some((q, l))) => q * &rec.beta + l,
                _ => rec.beta.clone(),
            };
            suite.record("alpha-formula", s, rec.alpha == expected, || format!("alpha {} but the lowest requirement dictates {expected}", rec.alpha));
        }

        if let Some(e) = st.tightest() {
            let gap = &rec.alpha - &rec.gamma;
            suite.record("restraint-gap", s, below_pow2(&gap, e), || format!("alpha - gamma = {gap} not below 2^-{e}"));
        }
    }

    if bailout_gamma.is_none() {
        if let Some(last) = records.last() {
            st.settled_checks(&mut suite, last.stage);
        }
    }
    suite.into_report()
}

const LAYER_CHECKS: &[&str] = &["layer-sequence", "global-monotone", "confined", "restart-on-change", "ladder"];

/// Check a layerwise run: each segment as a run of its own, plus the
/// restart bookkeeping. With `xi`, interval endpoints are checked against it.
pub fn verify_layerwise(records: &[LayerRecord], xi: Option<&crate::streams::LeftCeStream>) -> Report {
    let mut suite = Suite::new(LAYER_CHECKS);
    let mut report = Report::default();
    let mut start = 0;
    for (k, rec) in records.iter().enumerate() {
        let s = rec.stage;
        if let Some(x) = xi {
            let ok = *x.at(rec.layer as u64) == rec.lo && *x.at(rec.layer as u64 + 1) == rec.hi;
            suite.record("ladder", s, ok, || format!("layer {} uses [{}, {}]", rec.layer, rec.lo, rec.hi));
        }
        suite.record("confined", s, rec.lo <= rec.inner.alpha && rec.inner.alpha <= rec.hi, || {
            format!("alpha {} outside [{}, {}]", rec.inner.alpha, rec.lo, rec.hi)
        });
        if k == 0 {
            suite.record("layer-sequence", s, s == 0 && rec.layer == 0 && !rec.restarted, || "run must open with layer 0".into());
            continue;
        }
        let p = &records[k - 1];
        suite.record("layer-sequence", s, s == p.stage + 1, || format!("stage {s} follows {}", p.stage));
        suite.record("global-monotone", s, p.inner.alpha <= rec.inner.alpha, || {
            format!("alpha fell from {} to {}", p.inner.alpha, rec.inner.alpha)
        });
        let changed = rec.opponent != p.opponent;
        let ok = rec.restarted == changed
            && rec.layer == p.layer + changed as usize
            && (!changed || (rec.lo == p.hi && rec.inner.stage == 0));
        suite.record("restart-on-change", s, ok, || {
            format!("opponent {} -> {}, restarted = {}, layer {} -> {}", p.opponent, rec.opponent, rec.restarted, p.layer, rec.layer)
        });
        if changed {
            let inner: Vec<DiagRecord> = records[start..k].iter().map(|r| r.inner.clone()).collect();
            report.absorb(verify_diag_claims(&inner));
            start = k;
        }
    }
    let inner: Vec<DiagRecord> = records[start..].iter().map(|r| r.inner.clone()).collect();
    report.absorb(verify_diag_claims(&inner));
    let mut out = suite.into_report();
    out.absorb(report);
    out
}
