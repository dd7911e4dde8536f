//! Left-c.e. discrete semi-measures, and a universal one whose total mass is
//! a prescribed left-c.e. real `alpha`.
//!
//! For each level `k = 1..=k_max` a loop hands out `2^-k alpha` to the
//! indices whose mass grows in a fixed reference semi-measure `mu`. When
//! `mu(i)` grows by `x`, the loop opens the interval
//! `(alpha_s, alpha_s + 2^-k x)` at level `k` of a test and pays every
//! subsequent increase of `alpha` into `m_k(i)` until `alpha` leaves the
//! interval. If `alpha` avoids some level `j`, every growth of `mu` is
//! matched by more than `2^-j` times as much in `m_j`.

use std::collections::{BTreeMap, BTreeSet};
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::jsonl::{self, JsonlError};
use crate::report::{Report, Suite};
use crate::streams::LeftCeStream;

#[derive(Debug, Error)]
pub enum SemiMeasureError {
    #[error("increment at stage {stage} for index {index} must be positive, got {amount}")]
    NonPositive { stage: u64, index: u64, amount: Dyadic },
    #[error("increment at stage {stage} comes after stage {last}")]
    OutOfOrder { stage: u64, last: u64 },
    #[error("total mass would reach {total} > 1 at stage {stage}")]
    OverOne { stage: u64, total: Dyadic },
    #[error("alpha must stay in [0, 1]; stage {stage} has {value}")]
    AlphaOutOfRange { stage: u64, value: Dyadic },
    #[error("need at least one level")]
    NoLevels,
    #[error(transparent)]
    Io(#[from] JsonlError),
}

/// `m(index)` grows by `amount` at `stage`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Increment {
    pub stage: u64,
    pub index: u64,
    pub amount: Dyadic,
}

/// A left-c.e. semi-measure as its stage-ordered increments.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SemiMeasureTape {
    increments: Vec<Increment>,
    total: Dyadic,
}

impl SemiMeasureTape {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_increments(increments: impl IntoIterator<Item = Increment>) -> Result<Self, SemiMeasureError> {
        let mut tape = Self::new();
        for inc in increments {
            tape.push(inc)?;
        }
        Ok(tape)
    }

    pub fn push(&mut self, inc: Increment) -> Result<(), SemiMeasureError> {
        if !inc.amount.is_positive() {
            return Err(SemiMeasureError::NonPositive {
                stage: inc.stage,
                index: inc.index,
                amount: inc.amount,
            });
        }
        if let Some(last) = self.last_stage().filter(|&l| l > inc.stage) {
            return Err(SemiMeasureError::OutOfOrder { stage: inc.stage, last });
        }
        let total = &self.total + &inc.amount;
        if total > Dyadic::one() {
            return Err(SemiMeasureError::OverOne { stage: inc.stage, total });
        }
        self.total = total;
        self.increments.push(inc);
        Ok(())
    }

    pub fn increments(&self) -> &[Increment] {
        &self.increments
    }

    pub fn last_stage(&self) -> Option<u64> {
        self.increments.last().map(|i| i.stage)
    }

    pub fn is_empty(&self) -> bool {
        self.increments.is_empty()
    }

    /// Increments visible at stage `s`.
    fn upto(&self, s: u64) -> &[Increment] {
        &self.increments[..self.increments.partition_point(|i| i.stage <= s)]
    }

    pub fn mass(&self, index: u64, s: u64) -> Dyadic {
        self.upto(s).iter().filter(|i| i.index == index).map(|i| &i.amount).sum()
    }

    pub fn masses_at(&self, s: u64) -> BTreeMap<u64, Dyadic> {
        let mut out: BTreeMap<u64, Dyadic> = BTreeMap::new();
        for inc in self.upto(s) {
            let e = out.entry(inc.index).or_insert_with(Dyadic::zero);
            *e = &*e + &inc.amount;
        }
        out
    }

    pub fn total_at(&self, s: u64) -> Dyadic {
        self.upto(s).iter().map(|i| &i.amount).sum()
    }

    pub fn total(&self) -> &Dyadic {
        &self.total
    }

    pub fn read<R: Read>(reader: R) -> Result<Self, SemiMeasureError> {
        Self::from_increments(jsonl::read::<Increment, _>(reader)?)
    }

    pub fn read_path(path: &Path) -> Result<Self, SemiMeasureError> {
        Self::read(jsonl::open(path)?)
    }

    pub fn write_path(&self, path: &Path) -> Result<(), JsonlError> {
        jsonl::write_path(path, &self.increments)
    }
}

/// `m = sum_e 2^-(e+1) mu_e`, stage by stage.
pub fn mixture_universal(components: &[SemiMeasureTape]) -> SemiMeasureTape {
    let mut all: Vec<(u64, usize, &Increment)> = components
        .iter()
        .enumerate()
        .flat_map(|(e, c)| c.increments().iter().map(move |inc| (inc.stage, e, inc)))
        .collect();
    // Stable within a stage: component order, then each component's own order.
    all.sort_by_key(|&(stage, e, _)| (stage, e));
    let mut m = SemiMeasureTape::new();
    for (stage, e, inc) in all {
        m.push(Increment {
            stage,
            index: inc.index,
            amount: inc.amount.shr(e as u64 + 1),
        })
        .expect("weights sum to below 1");
    }
    m
}

/// Open interval `(lo, hi)` put into test level `k` at `stage`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestInterval {
    pub k: u32,
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub stage: u64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MlTestTape {
    pub intervals: Vec<TestInterval>,
}

impl MlTestTape {
    pub fn level(&self, k: u32) -> impl Iterator<Item = &TestInterval> {
        self.intervals.iter().filter(move |iv| iv.k == k)
    }

    /// Sum of interval lengths at level `k` by stage `s`.
    pub fn measure_at(&self, k: u32, s: u64) -> Dyadic {
        self.level(k).filter(|iv| iv.stage <= s).map(|iv| &iv.hi - &iv.lo).sum()
    }

    pub fn covers(&self, k: u32, x: &Dyadic) -> bool {
        self.level(k).any(|iv| iv.lo < *x && *x < iv.hi)
    }

    pub fn read_path(path: &Path) -> Result<Self, JsonlError> {
        Ok(MlTestTape {
            intervals: jsonl::read_path(path)?,
        })
    }

    pub fn write_path(&self, path: &Path) -> Result<(), JsonlError> {
        jsonl::write_path(path, &self.intervals)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SemiEvent {
    /// The reference `mu(index)` grew by `amount`.
    Mu { index: u64, amount: Dyadic },
    /// Level `k` picked `i`, whose `mu` mass grew by `x`, and opened `(lo, hi)`.
    Trigger { k: u32, i: u64, x: Dyadic, lo: Dyadic, hi: Dyadic },
    /// `m_k(i)` grew by `amount`.
    Increase { k: u32, i: u64, amount: Dyadic },
    /// Level `k` saw `alpha` leave its interval and went back to waiting.
    Release { k: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemiRecord {
    pub stage: u64,
    pub alpha: Dyadic,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<SemiEvent>,
}

#[derive(Debug, Clone)]
enum Phase {
    /// Waiting for `mu` to grow; `alpha` was `base` on entry.
    Waiting { base: Dyadic },
    /// Paying `alpha`'s growth into `m_k(i)` until `alpha` passes `hi`.
    Paying { i: u64, hi: Dyadic },
}

/// One level's loop.
#[derive(Debug, Clone)]
struct Level {
    k: u32,
    phase: Phase,
    /// `mu(i)` as of the latest i-stage of this level.
    seen: BTreeMap<u64, Dyadic>,
    /// Latest i-stage, `-1` for never.
    last_stage: BTreeMap<u64, i64>,
    /// Indices whose `mu` mass exceeds `seen`, keyed by (latest i-stage, i).
    pending: BTreeSet<(i64, u64)>,
}

impl Level {
    fn new(k: u32) -> Self {
        Level {
            k,
            phase: Phase::Waiting { base: Dyadic::zero() },
            seen: BTreeMap::new(),
            last_stage: BTreeMap::new(),
            pending: BTreeSet::new(),
        }
    }

    fn mark(&mut self, i: u64) {
        let last = *self.last_stage.get(&i).unwrap_or(&-1);
        self.pending.insert((last, i));
    }

    fn step(&mut self, s: u64, alpha_prev: &Dyadic, alpha: &Dyadic, mu: &BTreeMap<u64, Dyadic>, events: &mut Vec<SemiEvent>) {
        let k = self.k;
        if let Phase::Paying { i, hi } = &self.phase {
            let i = *i;
            if alpha > alpha_prev {
                events.push(SemiEvent::Increase {
                    k,
                    i,
                    amount: (alpha - alpha_prev).shr(k as u64),
                });
            }
            if alpha > hi {
                events.push(SemiEvent::Release { k });
                self.phase = Phase::Waiting { base: alpha.clone() };
            }
        }
        let Phase::Waiting { base } = &self.phase else {
            return;
        };
        let Some(&(last, i)) = self.pending.iter().find(|&&(_, i)| i <= s) else {
            return;
        };
        self.pending.remove(&(last, i));
        let now = mu[&i].clone();
        let x = &now - self.seen.get(&i).unwrap_or(&Dyadic::zero());
        self.seen.insert(i, now);
        self.last_stage.insert(i, s as i64);
        let hi = alpha + x.shr(k as u64);
        let owed = (alpha - base).shr(k as u64);
        events.push(SemiEvent::Trigger {
            k,
            i,
            x,
            lo: alpha.clone(),
            hi: hi.clone(),
        });
        if owed.is_positive() {
            events.push(SemiEvent::Increase { k, i, amount: owed });
        }
        self.phase = Phase::Paying { i, hi };
    }
}

#[derive(Debug, Clone)]
pub struct SemiRun {
    pub records: Vec<SemiRecord>,
    /// `m = sum_k m_k`.
    pub m: SemiMeasureTape,
    /// `m_k` at position `k - 1`.
    pub levels: Vec<SemiMeasureTape>,
    pub test: MlTestTape,
}

/// Run levels `1..=k_max` over stages `0..=horizon`.
pub fn uniform_semimeasure_with_sum(alpha: &LeftCeStream, mu: &SemiMeasureTape, k_max: u32, horizon: u64) -> Result<SemiRun, SemiMeasureError> {
    if k_max == 0 {
        return Err(SemiMeasureError::NoLevels);
    }
    for s in [0, horizon] {
        let v = alpha.at(s);
        if v.is_negative() || *v > Dyadic::one() {
            return Err(SemiMeasureError::AlphaOutOfRange { stage: s, value: v.clone() });
        }
    }
    let mut levels: Vec<Level> = (1..=k_max).map(Level::new).collect();
    let mut mu_now: BTreeMap<u64, Dyadic> = BTreeMap::new();
    let mut cursor = 0;
    let mut records = Vec::with_capacity(horizon as usize + 1);
    let mut m = SemiMeasureTape::new();
    let mut per_level = vec![SemiMeasureTape::new(); k_max as usize];
    let mut test = MlTestTape::default();

    for s in 0..=horizon {
        let mut events = Vec::new();
        let incs = mu.increments();
        while cursor < incs.len() && incs[cursor].stage <= s {
            let inc = &incs[cursor];
            let e = mu_now.entry(inc.index).or_insert_with(Dyadic::zero);
            *e = &*e + &inc.amount;
            events.push(SemiEvent::Mu {
                index: inc.index,
                amount: inc.amount.clone(),
            });
            for level in &mut levels {
                level.mark(inc.index);
            }
            cursor += 1;
        }
        let a = alpha.at(s);
        let a_prev = alpha.at(s.saturating_sub(1));
        for level in &mut levels {
            level.step(s, a_prev, a, &mu_now, &mut events);
        }
        for e in &events {
            match e {
                SemiEvent::Increase { k, i, amount } => {
                    let inc = Increment {
                        stage: s,
                        index: *i,
                        amount: amount.clone(),
                    };
                    per_level[*k as usize - 1].push(inc.clone())?;
                    m.push(inc)?;
                }
                SemiEvent::Trigger { k, lo, hi, .. } => test.intervals.push(TestInterval {
                    k: *k,
                    lo: lo.clone(),
                    hi: hi.clone(),
                    stage: s,
                }),
                _ => {}
            }
        }
        records.push(SemiRecord {
            stage: s,
            alpha: a.clone(),
            events,
        });
    }
    Ok(SemiRun {
        records,
        m,
        levels: per_level,
        test,
    })
}

const CHECKS: &[&str] = &[
    "stage-sequence",
    "alpha-monotone",
    "alpha-range",
    "mu-total",
    "trigger-rule",
    "test-measure",
    "release-rule",
    "increase-rule",
    "mass-accounting",
    "sum-at-quiescence",
];

#[derive(Debug, Clone)]
enum Seen {
    Waiting { base: Dyadic },
    Paying { i: u64, hi: Dyadic },
}

/// Check a trace of [`uniform_semimeasure_with_sum`] with `k_max` levels.
///
/// `sum-at-quiescence` is examined only when, at the last stage, every level
/// has paid out all of `alpha`; it then requires `sum m = alpha (1 - 2^-k_max)`.
pub fn verify_semimeasure(records: &[SemiRecord], k_max: u32) -> Report {
    let mut suite = Suite::new(CHECKS);
    let levels = k_max as usize;
    let mut state = vec![Seen::Waiting { base: Dyadic::zero() }; levels];
    // Per level: alpha paid for so far, and sum of m_k.
    let mut paid_for = vec![Dyadic::zero(); levels];
    let mut mass = vec![Dyadic::zero(); levels];
    let mut measure = vec![Dyadic::zero(); levels];
    let mut seen: Vec<BTreeMap<u64, Dyadic>> = vec![BTreeMap::new(); levels];
    let mut last_stage: Vec<BTreeMap<u64, i64>> = vec![BTreeMap::new(); levels];
    let mut mu: BTreeMap<u64, Dyadic> = BTreeMap::new();
    let mut mu_total = Dyadic::zero();
    let mut alpha_prev = Dyadic::zero();

    for (n, r) in records.iter().enumerate() {
        let s = r.stage;
        suite.record("stage-sequence", s, s == n as u64, || format!("record {n} has stage {s}"));
        if n > 0 {
            suite.record("alpha-monotone", s, alpha_prev <= r.alpha, || format!("alpha fell from {alpha_prev} to {}", r.alpha));
        }
        let in_range = !r.alpha.is_negative() && r.alpha <= Dyadic::one();
        suite.record("alpha-range", s, in_range, || format!("alpha = {}", r.alpha));
        let a_prev = if n == 0 { r.alpha.clone() } else { alpha_prev.clone() };
        let grew = &r.alpha - &a_prev;

        for e in &r.events {
            if let SemiEvent::Mu { index, amount } = e {
                let v = mu.entry(*index).or_insert_with(Dyadic::zero);
                *v = &*v + amount;
                mu_total = &mu_total + amount;
            }
        }
        suite.record("mu-total", s, mu_total <= Dyadic::one(), || format!("mu has total {mu_total}"));

        // Growth since the last stage belongs to levels that were paying.
        for l in 0..levels {
            if matches!(state[l], Seen::Paying { .. }) {
                paid_for[l] = &paid_for[l] + &grew;
            }
        }
        let mut triggered = vec![false; levels];
        for e in &r.events {
            match e {
                SemiEvent::Mu { .. } => {}
                SemiEvent::Release { k } => {
                    let l = *k as usize - 1;
                    let ok = matches!(&state[l], Seen::Paying { hi, .. } if r.alpha > *hi) && !triggered[l];
                    suite.record("release-rule", s, ok, || format!("level {k} released while alpha = {} is inside its interval", r.alpha));
                    state[l] = Seen::Waiting { base: r.alpha.clone() };
                }
                SemiEvent::Trigger { k, i, x, lo, hi } => {
                    let l = *k as usize - 1;
                    let waiting = matches!(state[l], Seen::Waiting { .. });
                    let now = mu.get(i).cloned().unwrap_or_else(Dyadic::zero);
                    let grown = &now - seen[l].get(i).unwrap_or(&Dyadic::zero());
                    // The choice must be the eligible index with the oldest i-stage.
                    let key = |j: &u64| (*last_stage[l].get(j).unwrap_or(&-1), *j);
                    let best = mu
                        .iter()
                        .filter(|(j, v)| **j <= s && **v > *seen[l].get(*j).unwrap_or(&Dyadic::zero()))
                        .map(|(j, _)| key(j))
                        .min();
                    let ok = waiting
                        && *i <= s
                        && grown.is_positive()
                        && *x == grown
                        && best == Some(key(i))
                        && *lo == r.alpha
                        && *hi == &r.alpha + x.shr(*k as u64);
                    suite.record("trigger-rule", s, ok, || format!("level {k} trigger on {i} with x = {x} does not follow the rules"));
                    measure[l] = &measure[l] + (hi - lo);
                    seen[l].insert(*i, now);
                    last_stage[l].insert(*i, s as i64);
                    if let Seen::Waiting { base } = &state[l] {
                        paid_for[l] = &paid_for[l] + (&r.alpha - base);
                    }
                    triggered[l] = true;
                    state[l] = Seen::Paying { i: *i, hi: hi.clone() };
                }
                SemiEvent::Increase { k, i, amount } => {
                    let l = *k as usize - 1;
                    let ok = matches!(&state[l], Seen::Paying { i: paying, .. } if paying == i);
                    suite.record("increase-rule", s, ok, || format!("level {k} paid index {i}, which it is not paying"));
                    mass[l] = &mass[l] + amount;
                }
            }
        }
        for l in 0..levels {
            let k = l as u32 + 1;
            if let Seen::Paying { hi, .. } = &state[l] {
                if !triggered[l] {
                    suite.record("release-rule", s, r.alpha <= *hi, || format!("level {k} kept paying with alpha = {} past {hi}", r.alpha));
                }
            }
            let budget = Dyadic::pow2_neg(k as u64);
            suite.record("test-measure", s, measure[l] <= budget, || format!("level {k} has measure {} > 2^-{k}", measure[l]));
            let expected = paid_for[l].shr(k as u64);
            suite.record("mass-accounting", s, mass[l] == expected, || {
                format!("m_{k} has mass {} but 2^-{k} * paid = {expected}", mass[l])
            });
        }
        alpha_prev = r.alpha.clone();
    }

    if let Some(last) = records.last() {
        if paid_for.iter().all(|p| *p == last.alpha) {
            let total: Dyadic = mass.iter().sum();
            let expected = &last.alpha - last.alpha.shr(k_max as u64);
            suite.record("sum-at-quiescence", last.stage, total == expected, || {
                format!("sum m = {total} but alpha (1 - 2^-{k_max}) = {expected}")
            });
        }
    }
    suite.into_report()
}

/// Whether `m(i) > 2^-j mu(i)` (strict) and `m(i) >= 2^-j mu(i)` hold at
/// `horizon` for every `i` with `mu(i) > 0`; each field is the least index
/// that fails.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Domination {
    pub strict: Option<u64>,
    pub non_strict: Option<u64>,
}

impl Domination {
    pub fn strict_holds(&self) -> bool {
        self.strict.is_none()
    }

    pub fn non_strict_holds(&self) -> bool {
        self.non_strict.is_none()
    }
}

pub fn verify_domination(m: &SemiMeasureTape, mu: &SemiMeasureTape, j: u32, horizon: u64) -> Domination {
    let ms = m.masses_at(horizon);
    let zero = Dyadic::zero();
    let mut out = Domination {
        strict: None,
        non_strict: None,
    };
    for (i, v) in mu.masses_at(horizon) {
        if !v.is_positive() {
            continue;
        }
        let scaled = v.shr(j as u64);
        let have = ms.get(&i).unwrap_or(&zero);
        if out.strict.is_none() && *have <= scaled {
            out.strict = Some(i);
        }
        if out.non_strict.is_none() && *have < scaled {
            out.non_strict = Some(i);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dy;

    fn inc(stage: u64, index: u64, amount: Dyadic) -> Increment {
        Increment { stage, index, amount }
    }

    #[test]
    fn tape_rejects_bad_increments() {
        let mut t = SemiMeasureTape::new();
        assert!(t.push(inc(0, 0, Dyadic::zero())).is_err());
        t.push(inc(2, 0, dy(3, 2))).unwrap();
        assert!(matches!(t.push(inc(1, 0, dy(1, 3))), Err(SemiMeasureError::OutOfOrder { .. })));
        assert!(matches!(t.push(inc(2, 1, dy(1, 1))), Err(SemiMeasureError::OverOne { .. })));
        assert_eq!(t.mass(0, 2), dy(3, 2));
        assert_eq!(t.total_at(1), Dyadic::zero());
    }

    #[test]
    fn mixture_weights() {
        let mu = SemiMeasureTape::from_increments([inc(0, 0, dy(1, 1))]).unwrap();
        assert_eq!(mixture_universal(&[mu]).mass(0, 0), dy(1, 2));
        assert!(mixture_universal(&[]).is_empty());
        let full = SemiMeasureTape::from_increments([inc(0, 0, dy(1, 1)), inc(0, 1, dy(1, 1))]).unwrap();
        let m = mixture_universal(&[full.clone(), full]);
        assert_eq!(*m.total(), dy(3, 2));
    }

    #[test]
    fn first_trigger_by_hand() {
        // mu(3) += 1/4 at stage 3, alpha = 0 until then and 1/8 from stage 3.
        let alpha = LeftCeStream::scripted(&[(0, Dyadic::zero()), (3, dy(1, 3)), (5, dy(3, 4)), (7, dy(5, 4))]).unwrap();
        let mu = SemiMeasureTape::from_increments([inc(3, 3, dy(1, 2))]).unwrap();
        let run = uniform_semimeasure_with_sum(&alpha, &mu, 1, 8).unwrap();
        assert_eq!(run.test.intervals[0].lo, dy(1, 3));
        assert_eq!(run.test.intervals[0].hi, dy(1, 2));
        assert_eq!(run.levels[0].mass(3, 3), dy(1, 4));
        // alpha goes to 3/16 (still inside), then 5/16 (past 1/4): both paid, then release.
        assert_eq!(run.levels[0].mass(3, 5), dy(3, 5));
        assert_eq!(run.levels[0].mass(3, 8), dy(5, 5));
        assert!(run.records[7].events.contains(&SemiEvent::Release { k: 1 }));
        assert!(verify_semimeasure(&run.records, 1).passed());
    }

    #[test]
    fn silent_mu_gives_nothing() {
        let alpha = LeftCeStream::default_beta(50);
        let run = uniform_semimeasure_with_sum(&alpha, &SemiMeasureTape::new(), 4, 50).unwrap();
        assert!(run.m.is_empty() && run.test.intervals.is_empty());
        assert!(verify_semimeasure(&run.records, 4).passed());
    }

    #[test]
    fn older_indices_win_ties() {
        let alpha = LeftCeStream::constant(dy(1, 1), 10);
        let mu = SemiMeasureTape::from_increments([inc(2, 2, dy(1, 4)), inc(2, 1, dy(1, 4)), inc(3, 1, dy(1, 4)), inc(3, 2, dy(1, 4))]).unwrap();
        let run = uniform_semimeasure_with_sum(&alpha, &mu, 1, 10).unwrap();
        let order: Vec<u64> = run
            .records
            .iter()
            .flat_map(|r| &r.events)
            .filter_map(|e| match e {
                SemiEvent::Trigger { i, .. } => Some(*i),
                _ => None,
            })
            .collect();
        // Stage 2: both unseen, so 1 first. Alpha never moves, so level 1
        // stays paying and nothing else triggers.
        assert_eq!(order, vec![1]);
    }

    #[test]
    fn quiescent_sum() {
        let alpha = LeftCeStream::scripted(&[(0, Dyadic::zero()), (2, dy(1, 2)), (4, dy(5, 3))]).unwrap();
        let mu = SemiMeasureTape::from_increments((5..30).map(|s| inc(s, s % 3, Dyadic::pow2_neg(8)))).unwrap();
        let run = uniform_semimeasure_with_sum(&alpha, &mu, 3, 30).unwrap();
        assert_eq!(*run.m.total(), dy(5, 3) - dy(5, 6));
        let report = verify_semimeasure(&run.records, 3);
        assert!(report.passed(), "{report:?}");
        assert_eq!(report.check("sum-at-quiescence").unwrap().examined, 1);
    }

    #[test]
    fn tampered_increase_is_flagged() {
        let alpha = LeftCeStream::default_beta(40);
        let mu = SemiMeasureTape::from_increments((1..40).map(|s| inc(s, s % 5, Dyadic::pow2_neg(7)))).unwrap();
        let mut run = uniform_semimeasure_with_sum(&alpha, &mu, 2, 40).unwrap();
        let r = run.records.iter_mut().find(|r| r.events.iter().any(|e| matches!(e, SemiEvent::Increase { .. }))).unwrap();
        for e in &mut r.events {
            if let SemiEvent::Increase { amount, .. } = e {
                *amount = amount.clone() + amount.clone();
                break;
            }
        }
        assert!(!verify_semimeasure(&run.records, 2).check("mass-accounting").unwrap().passed());
    }

    #[test]
    fn domination_verdicts() {
        let mu = SemiMeasureTape::from_increments([inc(0, 0, dy(1, 1))]).unwrap();
        let m = mixture_universal(std::slice::from_ref(&mu));
        let d = verify_domination(&m, &mu, 1, 0);
        assert!(d.non_strict_holds() && !d.strict_holds());
        assert!(verify_domination(&m, &SemiMeasureTape::new(), 1, 0).strict_holds());
        assert_eq!(verify_domination(&SemiMeasureTape::new(), &mu, 3, 0).non_strict, Some(0));
    }
}
