//! A left-c.e. `alpha` that avoids every listed right-c.e. real while keeping
//! `alpha - beta` either right-c.e. (through a witness `delta`) or left-c.e.
//!
//! Each stage runs as `wait` or `follow(i)`. Waiting holds `alpha` and pulls
//! the right-c.e. `delta` down toward `alpha - beta`. Following `i` lets
//! `alpha` grow at least as fast as `beta` until it passes `theta^i`, and
//! along the way jumps over any `theta^j` that comes close enough that the
//! jump cannot push `alpha - beta` above `delta`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::report::{Report, Suite};
use crate::streams::{self, LeftCeStream, RightCeStream, StreamError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DiffMode {
    Wait,
    Follow(usize),
}

impl fmt::Display for DiffMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffMode::Wait => f.write_str("wait"),
            DiffMode::Follow(i) => write!(f, "follow({i})"),
        }
    }
}

impl FromStr for DiffMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        if s == "wait" {
            return Ok(DiffMode::Wait);
        }
        s.strip_prefix("follow(")
            .and_then(|r| r.strip_suffix(')'))
            .and_then(|n| n.parse().ok())
            .map(DiffMode::Follow)
            .ok_or_else(|| format!("bad mode {s:?}; expected wait or follow(N)"))
    }
}

impl Serialize for DiffMode {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DiffMode {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        String::deserialize(deserializer)?.parse().map_err(serde::de::Error::custom)
    }
}

/// Which rule produced a stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiffCase {
    Start,
    Wait,
    /// `alpha + (beta increment)` passed `theta^i`; `alpha` moves just above it.
    Overtake,
    /// `alpha` jumped over a nearby `theta^j`.
    Jump,
    /// `alpha` grew by exactly the `beta` increment.
    Track,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffRecord {
    pub stage: u64,
    /// Mode the stage ran in; absent at stage 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<DiffMode>,
    pub case: DiffCase,
    /// The index jumped over, for [`DiffCase::Jump`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub j: Option<usize>,
    pub alpha: Dyadic,
    pub beta: Dyadic,
    pub delta: Dyadic,
    /// `theta^i_s` for every index.
    pub thetas: Vec<Dyadic>,
    pub next: DiffMode,
}

impl DiffRecord {
    /// `delta_s - (alpha_s - beta_s)`, positive throughout a correct run.
    pub fn slack(&self) -> Dyadic {
        &self.delta - (&self.alpha - &self.beta)
    }
}

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("run needs at least one stage")]
    NoStages,
    #[error("theta family: {0}")]
    Theta(#[from] StreamError),
    #[error("theta file {path}: {source}")]
    ThetaFile {
        path: PathBuf,
        #[source]
        source: StreamError,
    },
    #[error("theta directory {path}: {source}")]
    ThetaDir {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0} is not a nonincreasing stream")]
    NotRightCe(PathBuf),
}

/// Finitely many right-c.e. reals, indexed from 0.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ThetaFamily {
    streams: Vec<RightCeStream>,
}

impl ThetaFamily {
    pub fn new(streams: Vec<RightCeStream>) -> Self {
        ThetaFamily { streams }
    }

    pub fn len(&self) -> usize {
        self.streams.len()
    }

    pub fn is_empty(&self) -> bool {
        self.streams.is_empty()
    }

    pub fn at(&self, i: usize, s: u64) -> &Dyadic {
        self.streams[i].at(s)
    }

    pub fn snapshot(&self, s: u64) -> Vec<Dyadic> {
        self.streams.iter().map(|t| t.at(s).clone()).collect()
    }

    pub fn streams(&self) -> &[RightCeStream] {
        &self.streams
    }

    /// Every `*.jsonl` script in `dir`, ordered by the number in the file
    /// name (`theta0.jsonl`, `theta1.jsonl`, ...), then by name.
    pub fn read_dir(dir: &Path) -> Result<Self, DiffError> {
        let io_err = |source| DiffError::ThetaDir {
            path: dir.to_path_buf(),
            source,
        };
        let mut paths = Vec::new();
        for entry in std::fs::read_dir(dir).map_err(io_err)? {
            let path = entry.map_err(io_err)?.path();
            if path.extension().is_some_and(|e| e == "jsonl") {
                paths.push(path);
            }
        }
        let key = |p: &PathBuf| {
            let name = p.file_name().unwrap_or_default().to_string_lossy().into_owned();
            let digits: String = name.chars().filter(char::is_ascii_digit).collect();
            (digits.parse::<u64>().unwrap_or(u64::MAX), name)
        };
        paths.sort_by_key(key);
        let mut streams = Vec::with_capacity(paths.len());
        for path in paths {
            let any = streams::read_script_path(&path).map_err(|source| DiffError::ThetaFile {
                path: path.clone(),
                source,
            })?;
            streams.push(any.into_right().map_err(|_| DiffError::NotRightCe(path))?);
        }
        Ok(ThetaFamily::new(streams))
    }
}

/// The stand-in `gamma` that `alpha` copies before `beta_0` is available.
/// The construction proper starts from `alpha_0 = gamma_{handoff}`.
#[derive(Debug, Clone)]
pub struct Bootstrap {
    pub gamma: LeftCeStream,
    pub handoff: u64,
}

impl Bootstrap {
    pub fn at(value: Dyadic) -> Self {
        Bootstrap {
            gamma: LeftCeStream::constant(value, 0),
            handoff: 0,
        }
    }

    pub fn alpha0(&self) -> &Dyadic {
        self.gamma.at(self.handoff)
    }
}

impl Default for Bootstrap {
    fn default() -> Self {
        Bootstrap::at(Dyadic::zero())
    }
}

/// Largest power of two at most half of `bound`, or zero if `bound <= 0`.
fn epsilon_below(bound: &Dyadic) -> Dyadic {
    match bound.floor_log2().filter(|_| bound.is_positive()) {
        Some(e) => shift(e - 1),
        None => Dyadic::zero(),
    }
}

fn shift(e: i64) -> Dyadic {
    if e >= 0 {
        Dyadic::pow2(e as u64)
    } else {
        Dyadic::pow2_neg((-e) as u64)
    }
}

#[derive(Debug, Clone)]
pub struct DiffState {
    pub stage: u64,
    pub mode: DiffMode,
    pub alpha: Dyadic,
    pub delta: Dyadic,
}

/// Stage 0: `alpha_0` from the bootstrap, `delta_0 = 1 + alpha_0 - beta_0`.
pub fn diff_init(bootstrap: &Bootstrap, beta: &LeftCeStream, thetas: &ThetaFamily) -> (DiffState, DiffRecord) {
    let alpha = bootstrap.alpha0().clone();
    let delta = Dyadic::one() + &alpha - beta.at(0);
    let record = DiffRecord {
        stage: 0,
        mode: None,
        case: DiffCase::Start,
        j: None,
        alpha: alpha.clone(),
        beta: beta.at(0).clone(),
        delta: delta.clone(),
        thetas: thetas.snapshot(0),
        next: DiffMode::Wait,
    };
    let state = DiffState {
        stage: 0,
        mode: DiffMode::Wait,
        alpha,
        delta,
    };
    (state, record)
}

/// Stage `s + 1` from the state after stage `s`.
pub fn diff_step(state: &mut DiffState, beta: &LeftCeStream, thetas: &ThetaFamily) -> DiffRecord {
    let s = state.stage;
    let t = s + 1;
    let (beta_s, beta_t) = (beta.at(s), beta.at(t));
    let increment = beta_t - beta_s;
    let mode = state.mode;
    let mut j_used = None;

    let (case, next) = match mode {
        DiffMode::Wait => {
            let cap = &state.alpha - beta_t + Dyadic::pow2_neg(s);
            if cap < state.delta {
                state.delta = cap;
            }
            let limit = (thetas.len() as u64).min(s + 1) as usize;
            let entry = (0..limit).find(|&i| {
                let above = thetas.at(i, t) - &state.alpha;
                !above.is_negative() && above < Dyadic::pow2_neg(i as u64)
            });
            (DiffCase::Wait, entry.map_or(DiffMode::Wait, DiffMode::Follow))
        }
        DiffMode::Follow(i) => {
            let reach = &state.alpha + &increment;
            let theta_i = thetas.at(i, t);
            if reach > *theta_i {
                // Land just above max(theta^i, alpha_s), staying within reach.
                let base = if *theta_i > state.alpha { theta_i.clone() } else { state.alpha.clone() };
                let room = &reach - &base;
                let cap = Dyadic::pow2_neg(i as u64 + 1);
                let eps = epsilon_below(if room < cap { &room } else { &cap });
                state.alpha = base + eps;
                (DiffCase::Overtake, DiffMode::Wait)
            } else {
                let gap = &state.delta - (&state.alpha - beta_s);
                let jump = (0..thetas.len()).find_map(|j| {
                    let above = thetas.at(j, s) - &state.alpha;
                    let bound = gap.shr(j as u64 + 2);
                    (!above.is_negative() && above < bound).then(|| (j, bound - above))
                });
                match jump {
                    Some((j, room)) => {
                        let cap = Dyadic::pow2_neg(j as u64 + 1);
                        let eps = epsilon_below(if room < cap { &room } else { &cap });
                        let over = thetas.at(j, s) + eps;
                        state.alpha = if over > reach { over } else { reach };
                        j_used = Some(j);
                        (DiffCase::Jump, if j == i { DiffMode::Wait } else { mode })
                    }
                    None => {
                        state.alpha = reach;
                        (DiffCase::Track, mode)
                    }
                }
            }
        }
    };

    state.stage = t;
    state.mode = next;
    DiffRecord {
        stage: t,
        mode: Some(mode),
        case,
        j: j_used,
        alpha: state.alpha.clone(),
        beta: beta_t.clone(),
        delta: state.delta.clone(),
        thetas: thetas.snapshot(t),
        next,
    }
}

/// Stages `0..=stages`.
pub fn run_diff(beta: &LeftCeStream, thetas: &ThetaFamily, bootstrap: &Bootstrap, stages: u64) -> Result<Vec<DiffRecord>, DiffError> {
    if stages == 0 {
        return Err(DiffError::NoStages);
    }
    let (mut state, first) = diff_init(bootstrap, beta, thetas);
    let mut records = Vec::with_capacity(stages as usize + 1);
    records.push(first);
    for _ in 0..stages {
        records.push(diff_step(&mut state, beta, thetas));
    }
    Ok(records)
}

const CHECKS: &[&str] = &[
    "stage-sequence",
    "beta-monotone",
    "theta-monotone",
    "alpha-monotone",
    "delta-monotone",
    "delta-above-gap",
    "wait-rule",
    "wait-sandwich",
    "entry-rule",
    "follow-rule",
    "epoch-budget",
    "jump-once",
    "increment-domination",
    "half-bound",
    "factor-identity",
    "overtake-permanence",
];

fn is_entry(i: usize, stage: u64, alpha: &Dyadic, theta: &Dyadic) -> bool {
    let above = theta - alpha;
    (i as u64) < stage && !above.is_negative() && above < Dyadic::pow2_neg(i as u64)
}

/// Check a trace against the construction's rules and its guarantees.
///
/// A follow(i) epoch may raise `alpha` by at most `2 * 2^-i`: the slack at
/// entry is at most `2^-i` (the last wait stage was after stage `i`), so
/// tracking stays under `theta^i` and every jump and the final overtake add
/// only a fraction of that.
pub fn verify_diff_claims(records: &[DiffRecord]) -> Report {
    let mut suite = Suite::new(CHECKS);
    let Some(first) = records.first() else {
        suite.record("stage-sequence", 0, false, || "empty trace".into());
        return suite.into_report();
    };
    suite.record("stage-sequence", first.stage, first.stage == 0 && first.case == DiffCase::Start, || {
        "trace must open with the stage-0 record".into()
    });
    suite.record("delta-above-gap", 0, first.slack().is_positive(), || {
        format!("delta_0 = {} but alpha_0 - beta_0 = {}", first.delta, &first.alpha - &first.beta)
    });

    // Open follow epoch: (index, alpha at entry).
    let mut epoch: Option<(usize, Dyadic)> = None;
    // Largest slack seen so far in the current follow segment.
    let mut segment_peak: Option<Dyadic> = None;
    // Indices alpha has been pushed past, with the stage it happened.
    let mut overtaken: Vec<(usize, u64)> = Vec::new();

    for w in records.windows(2) {
        let (p, r) = (&w[0], &w[1]);
        let t = r.stage;
        suite.record("stage-sequence", t, t == p.stage + 1 && r.mode == Some(p.next) && r.thetas.len() == p.thetas.len(), || {
            format!("stage {t} does not continue stage {} (mode {:?}, expected {})", p.stage, r.mode, p.next)
        });
        suite.record("beta-monotone", t, p.beta <= r.beta, || format!("beta fell from {} to {}", p.beta, r.beta));
        let theta_ok = p.thetas.iter().zip(&r.thetas).all(|(a, b)| b <= a);
        suite.record("theta-monotone", t, theta_ok, || "some theta increased".into());
        suite.record("alpha-monotone", t, p.alpha <= r.alpha, || format!("alpha fell from {} to {}", p.alpha, r.alpha));
        suite.record("delta-monotone", t, r.delta <= p.delta, || format!("delta rose from {} to {}", p.delta, r.delta));
        let slack = r.slack();
        suite.record("delta-above-gap", t, slack.is_positive(), || {
            format!("delta = {} but alpha - beta = {}", r.delta, &r.alpha - &r.beta)
        });
        let increment = &r.beta - &p.beta;

        match r.mode {
            Some(DiffMode::Wait) => {
                let cap = &r.alpha - &r.beta + Dyadic::pow2_neg(p.stage);
                let delta = if cap < p.delta { cap } else { p.delta.clone() };
                suite.record("wait-rule", t, r.case == DiffCase::Wait && r.alpha == p.alpha && r.delta == delta, || {
                    format!("wait stage should hold alpha = {} and set delta = {delta}", p.alpha)
                });
                let upper = &r.alpha - &r.beta + Dyadic::pow2_neg(t - 1);
                suite.record("wait-sandwich", t, slack >= Dyadic::zero() && r.delta <= upper, || {
                    format!("delta = {} outside [alpha - beta, alpha - beta + 2^{}]", r.delta, 1 - t as i64)
                });
                let entry = (0..r.thetas.len()).find(|&i| is_entry(i, t, &r.alpha, &r.thetas[i]));
                let expected = entry.map_or(DiffMode::Wait, DiffMode::Follow);
                suite.record("entry-rule", t, r.next == expected, || format!("next mode {} but the entry scan gives {expected}", r.next));
                if let DiffMode::Follow(i) = r.next {
                    epoch = Some((i, r.alpha.clone()));
                }
                segment_peak = None;
            }
            Some(DiffMode::Follow(i)) => {
                let reach = &p.alpha + &increment;
                let theta_i = &r.thetas[i];
                let rule_ok = r.delta == p.delta
                    && match r.case {
                        DiffCase::Overtake => reach > *theta_i && r.alpha > *theta_i && r.alpha <= reach && r.next == DiffMode::Wait,
                        DiffCase::Jump => {
                            let gap = p.slack();
                            let least = (0..p.thetas.len()).find(|&j| {
                                let above = &p.thetas[j] - &p.alpha;
                                !above.is_negative() && above < gap.shr(j as u64 + 2)
                            });
                            let j = r.j.unwrap_or(usize::MAX);
                            reach <= *theta_i
                                && least == r.j
                                && r.alpha > p.thetas[j]
                                && r.alpha >= reach
                                && (r.alpha == reach || &r.alpha - &p.alpha < gap.shr(j as u64 + 2))
                                && r.next == if j == i { DiffMode::Wait } else { DiffMode::Follow(i) }
                        }
                        DiffCase::Track => reach <= *theta_i && r.alpha == reach && r.next == DiffMode::Follow(i),
                        _ => false,
                    };
                suite.record("follow-rule", t, rule_ok, || format!("follow({i}) stage with case {:?} breaks its rule", r.case));

                let gain = &r.alpha - &p.alpha;
                match &epoch {
                    Some((e, start)) if *e == i => {
                        let own = &r.alpha - start;
                        let budget = Dyadic::pow2_neg(i as u64) + Dyadic::pow2_neg(i as u64);
                        suite.record("epoch-budget", t, own <= budget, || format!("follow({i}) epoch has gained {own} > {budget}"));
                    }
                    _ => {
                        suite.record("epoch-budget", t, false, || format!("follow({i}) stage outside a follow({i}) epoch"));
                        epoch = Some((i, p.alpha.clone()));
                    }
                }

                if r.case != DiffCase::Overtake {
                    suite.record("increment-domination", t, gain >= increment, || {
                        format!("alpha grew {gain} while beta grew {increment}")
                    });
                }
                let peak = match segment_peak.take() {
                    Some(x) if x > slack => x,
                    _ => slack.clone(),
                };
                suite.record("half-bound", t, slack >= peak.half(), || {
                    format!("slack {slack} fell below half of the segment's {peak}")
                });
                segment_peak = Some(peak);

                if r.case == DiffCase::Jump {
                    let j = r.j.unwrap_or(0) as u64;
                    let gap = p.slack();
                    let floor = &gap - gap.shr(j + 2);
                    suite.record("factor-identity", t, slack >= floor, || format!("slack {slack} < (1 - 2^-{}) * {gap}", j + 2));
                }
                if r.next == DiffMode::Wait {
                    epoch = None;
                    segment_peak = None;
                }
            }
            None => suite.record("stage-sequence", t, false, || "only stage 0 may omit its mode".into()),
        }

        for &(j, since) in &overtaken {
            let ok = r.thetas.get(j).is_some_and(|th| *th < r.alpha);
            suite.record("overtake-permanence", t, ok, || format!("theta^{j}, passed at stage {since}, is back above alpha"));
        }
        match (r.mode, r.case) {
            (Some(DiffMode::Follow(i)), DiffCase::Overtake) => overtaken.push((i, t)),
            (_, DiffCase::Jump) => {
                let j = r.j.unwrap_or(0);
                let again = overtaken.iter().any(|&(k, _)| k == j);
                suite.record("jump-once", t, !again, || format!("theta^{j} jumped over twice"));
                if r.thetas.get(j).is_some_and(|th| *th < r.alpha) {
                    overtaken.push((j, t));
                }
            }
            _ => {}
        }
    }
    suite.into_report()
}
