//! Priority diagonalization building a left-c.e. `alpha` that no opponent
//! machine can match with an optimal machine of halting probability `alpha`.
//!
//! Requirement `R_d` wants a string `sigma` with `K_M(sigma) > K_Q(sigma) + d`
//! for the opponent `M` and an auxiliary machine `Q` we build. Each active
//! requirement owns a reserved code `tau_d` (drawn from the antichain
//! `0^n 1`) and a restraint `r_d = 2^-(|tau_d| + d)`. At most the lowest
//! priority active requirement is ever in a state other than waiting.
//!
//! `alpha` copies the target `beta` except while the lowest requirement is
//! restraining, when it follows `q_d beta + l_d`. If the opponent's measure
//! ever exceeds `alpha_{s-1}`, the construction bails out and
//! `alpha_t = alpha_{s-1} + (gamma_s - alpha_{s-1}) beta_t` from then on.
//!
//! The same machinery runs confined to an interval `[a, b]` by targeting
//! `a + (b - a) beta` and starting from `alpha_0 = a`; see [`layerwise`].

pub mod layerwise;
pub mod opponents;
pub mod verify;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::machines::{DescriptionEvent, MachineTape};
use crate::streams::LeftCeStream;

pub use layerwise::{run_layerwise_diag, LayerRecord, LayerwiseError};
pub use opponents::{parse_opponent, Copying, Opponent, OpponentError, Overshooting, RandomOpponent, Scripted, Stalling};
pub use verify::{verify_diag_claims, verify_layerwise};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReqState {
    Preparing,
    Waiting,
    Restraining,
}

impl fmt::Display for ReqState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReqState::Preparing => "preparing",
            ReqState::Waiting => "waiting",
            ReqState::Restraining => "restraining",
        })
    }
}

/// An active requirement. Inactive requirements are simply absent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Requirement {
    pub d: usize,
    pub state: ReqState,
    pub code: Bits,
    /// The restraint is `2^-restraint_exp`.
    pub restraint_exp: u64,
    /// Reference values `(q_d, l_d)` while restraining.
    pub reference: Option<(Dyadic, Dyadic)>,
    pub witness: Option<Bits>,
    pub activated_at: u64,
}

impl Requirement {
    pub fn restraint(&self) -> Dyadic {
        Dyadic::pow2_neg(self.restraint_exp)
    }
}

/// Which branch of the stage body ran.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiagCase {
    Start,
    /// The opponent's measure passed `alpha_{s-1}` this stage.
    Bailout,
    /// Holding the bailout formula after an earlier bailout.
    BailedOut,
    Preparing,
    Activate,
    Restrain,
    Restraining,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DiagEvent {
    /// The opponent converged on `program` at this stage.
    Opponent { program: Bits, output: Bits },
    Activate { d: usize, code: Bits, restraint_exp: u64 },
    Cancel { d: usize },
    Transition { d: usize, to: ReqState },
    Reference { d: usize, q: Dyadic, l: Dyadic },
    Incremental { d: usize },
    /// `Q(program) = output`.
    Describe { d: usize, program: Bits, output: Bits },
    Bailout { base: Dyadic, gap: Dyadic, gamma: Dyadic },
}

/// One stage of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagRecord {
    pub stage: u64,
    pub case: DiagCase,
    /// The requirement whose state chose the case.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dispatched: Option<usize>,
    pub alpha: Dyadic,
    /// Target value at this stage (`beta_s`, or its affine image when confined).
    pub beta: Dyadic,
    pub gamma: Dyadic,
    pub active: usize,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<DiagEvent>,
}

#[derive(Debug, Error)]
pub enum DiagError {
    #[error("stage {stage}: {source}")]
    Opponent {
        stage: u64,
        #[source]
        source: OpponentError,
    },
    #[error("target stream must satisfy 0 <= beta_s < 1; stage {stage} has {value}")]
    TargetOutOfRange { stage: u64, value: Dyadic },
    #[error("run needs at least one stage")]
    NoStages,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Mode {
    Running,
    BailedOut { base: Dyadic, gap: Dyadic },
}

/// The construction's state between stages.
#[derive(Debug, Clone)]
pub struct Diagonalizer {
    offset: Dyadic,
    scale: Dyadic,
    ceiling: Dyadic,
    alpha: Dyadic,
    reqs: Vec<Requirement>,
    codes_issued: usize,
    q: MachineTape,
    mode: Mode,
    opponent_seen: usize,
    /// Last witness search as (bound, rank); see [`Diagonalizer::find_witness`].
    witness_cursor: (usize, u64),
}

impl Diagonalizer {
    /// Unconfined run starting from `alpha_0 = 0` and targeting `beta`.
    pub fn new() -> Self {
        Self::confined(Dyadic::zero(), Dyadic::one())
    }

    /// Run inside `[lo, hi]`, targeting `lo + (hi - lo) beta`.
    pub fn confined(lo: Dyadic, hi: Dyadic) -> Self {
        let scale = &hi - &lo;
        Diagonalizer {
            alpha: lo.clone(),
            offset: lo,
            scale,
            ceiling: hi,
            reqs: Vec::new(),
            codes_issued: 0,
            q: MachineTape::new(),
            mode: Mode::Running,
            opponent_seen: 0,
            witness_cursor: (0, 0),
        }
    }

    pub fn alpha(&self) -> &Dyadic {
        &self.alpha
    }

    pub fn requirements(&self) -> &[Requirement] {
        &self.reqs
    }

    pub fn q_tape(&self) -> &MachineTape {
        &self.q
    }

    pub fn is_running(&self) -> bool {
        self.mode == Mode::Running
    }

    fn target(&self, beta: &Dyadic) -> Dyadic {
        if self.offset.is_zero() && self.scale == Dyadic::one() {
            beta.clone()
        } else {
            &self.offset + &self.scale * beta
        }
    }

    fn opponent_events(&mut self, tape: &MachineTape, tape_stage: u64, events: &mut Vec<DiagEvent>) {
        let upto = tape.count_at(tape_stage);
        for e in &tape.events()[self.opponent_seen.min(upto)..upto] {
            events.push(DiagEvent::Opponent {
                program: e.program.clone(),
                output: e.output.clone(),
            });
        }
        self.opponent_seen = self.opponent_seen.max(upto);
    }

    fn activate(&mut self, d: usize, stage: u64, events: &mut Vec<DiagEvent>) {
        let code = Bits::unary(self.codes_issued);
        self.codes_issued += 1;
        let restraint_exp = (code.len() + d) as u64;
        events.push(DiagEvent::Activate {
            d,
            code: code.clone(),
            restraint_exp,
        });
        self.reqs.push(Requirement {
            d,
            state: ReqState::Preparing,
            code,
            restraint_exp,
            reference: None,
            witness: None,
            activated_at: stage,
        });
    }

    /// Stage 0: `alpha_0` is the interval floor and `R_0` starts preparing.
    pub fn start(&mut self, beta: &Dyadic, tape: &MachineTape, tape_stage: u64) -> DiagRecord {
        let mut events = Vec::new();
        self.opponent_events(tape, tape_stage, &mut events);
        self.activate(0, 0, &mut events);
        DiagRecord {
            stage: 0,
            case: DiagCase::Start,
            dispatched: None,
            alpha: self.alpha.clone(),
            beta: self.target(beta),
            gamma: tape.omega_at(tape_stage),
            active: self.reqs.len(),
            events,
        }
    }

    fn set_state(&mut self, i: usize, to: ReqState, events: &mut Vec<DiagEvent>) {
        if self.reqs[i].state != to {
            self.reqs[i].state = to;
            events.push(DiagEvent::Transition { d: i, to });
        }
        if to != ReqState::Restraining {
            self.reqs[i].reference = None;
        }
    }

    fn set_reference(&mut self, i: usize, alpha_prev: &Dyadic, gamma: &Dyadic, events: &mut Vec<DiagEvent>) -> (Dyadic, Dyadic) {
        let l = alpha_prev.clone();
        let q = self.reqs[i].restraint() - (alpha_prev - gamma);
        events.push(DiagEvent::Reference {
            d: i,
            q: q.clone(),
            l: l.clone(),
        });
        self.reqs[i].reference = Some((q.clone(), l.clone()));
        (q, l)
    }

    /// Least string in length-lexicographic order with `K_M(sigma)[s] > bound`.
    ///
    /// Complexities only fall as stages pass, so the answer for a larger
    /// bound at a later stage is never earlier in the order; the search
    /// resumes from the previous answer when the bound has not dropped.
    fn find_witness(&mut self, tape: &MachineTape, tape_stage: u64, bound: usize) -> Bits {
        let from = if bound >= self.witness_cursor.0 { self.witness_cursor.1 } else { 0 };
        // Every rejected candidate has a description of length <= bound, so
        // this stops within (number of outputs + 1) candidates.
        let rank = (from..)
            .find(|&n| tape.complexity_at(&Bits::nth_length_lex(n), tape_stage).map_or(true, |k| k > bound))
            .expect("finitely many outputs");
        self.witness_cursor = (bound, rank);
        Bits::nth_length_lex(rank)
    }

    /// One stage `s > 0`. `beta` is the unconfined `beta_s`; the opponent has
    /// already been advanced and its tape is read up to `tape_stage`.
    pub fn step(&mut self, stage: u64, beta: &Dyadic, tape: &MachineTape, tape_stage: u64) -> DiagRecord {
        let mut events = Vec::new();
        let target = self.target(beta);
        let alpha_prev = self.alpha.clone();

        if let Mode::BailedOut { base, gap } = &self.mode {
            self.alpha = base + gap * beta;
            return DiagRecord {
                stage,
                case: DiagCase::BailedOut,
                dispatched: None,
                alpha: self.alpha.clone(),
                beta: target,
                gamma: tape.omega_at(tape_stage),
                active: self.reqs.len(),
                events,
            };
        }

        self.opponent_events(tape, tape_stage, &mut events);
        let gamma = tape.omega_at(tape_stage);

        if gamma > alpha_prev {
            let capped = if gamma > self.ceiling { &self.ceiling } else { &gamma };
            let gap = capped - &alpha_prev;
            events.push(DiagEvent::Bailout {
                base: alpha_prev.clone(),
                gap: gap.clone(),
                gamma: gamma.clone(),
            });
            self.alpha = &alpha_prev + &gap * beta;
            self.mode = Mode::BailedOut {
                base: alpha_prev,
                gap,
            };
            return DiagRecord {
                stage,
                case: DiagCase::Bailout,
                dispatched: None,
                alpha: self.alpha.clone(),
                beta: target,
                gamma,
                active: self.reqs.len(),
                events,
            };
        }

        // Highest-priority active R_d with target - gamma >= r_d. Restraints
        // strictly decrease with priority, so this is a binary search.
        let diff = &target - &gamma;
        let found = match diff.floor_log2().filter(|_| diff.is_positive()) {
            None => None,
            Some(f) => {
                let need = (-f).max(0) as u64;
                let i = self.reqs.partition_point(|r| r.restraint_exp < need);
                (i < self.reqs.len()).then_some(i)
            }
        };
        if let Some(i) = found {
            // Lowest priority first, so each cancellation removes the current bottom.
            for r in self.reqs.drain(i + 1..).rev() {
                events.push(DiagEvent::Cancel { d: r.d });
            }
        }

        let i = self.reqs.len() - 1;
        let r = self.reqs[i].restraint();
        let case = match self.reqs[i].state {
            ReqState::Preparing => {
                self.alpha = target.clone();
                if diff < r {
                    let code = self.reqs[i].code.clone();
                    let sigma = self.find_witness(tape, tape_stage, code.len() + i);
                    self.q
                        .push_strict(DescriptionEvent::new(stage, code.clone(), sigma.clone()))
                        .expect("reserved codes form an antichain and are used once");
                    events.push(DiagEvent::Describe {
                        d: i,
                        program: code,
                        output: sigma.clone(),
                    });
                    self.reqs[i].witness = Some(sigma);
                    self.set_state(i, ReqState::Waiting, &mut events);
                }
                // diff == r_d leaves the requirement preparing.
                DiagCase::Preparing
            }
            ReqState::Waiting if diff < r => {
                self.alpha = target.clone();
                self.activate(i + 1, stage, &mut events);
                DiagCase::Activate
            }
            ReqState::Waiting => {
                let (q, l) = self.set_reference(i, &alpha_prev, &gamma, &mut events);
                self.set_state(i, ReqState::Restraining, &mut events);
                self.alpha = q * &target + l;
                DiagCase::Restrain
            }
            ReqState::Restraining => {
                let (q, l) = self.reqs[i].reference.clone().expect("restraining requirements carry reference values");
                if gamma <= &l + q.half() {
                    self.alpha = q * &target + l;
                } else {
                    events.push(DiagEvent::Incremental { d: i });
                    if diff < r {
                        self.alpha = target.clone();
                        self.set_state(i, ReqState::Waiting, &mut events);
                    } else {
                        let (q, l) = self.set_reference(i, &alpha_prev, &gamma, &mut events);
                        self.alpha = q * &target + l;
                    }
                }
                DiagCase::Restraining
            }
        };
        DiagRecord {
            stage,
            case,
            dispatched: Some(i),
            alpha: self.alpha.clone(),
            beta: target,
            gamma,
            active: self.reqs.len(),
            events,
        }
    }
}

impl Default for Diagonalizer {
    fn default() -> Self {
        Self::new()
    }
}

/// Outcome of [`run_diag`].
#[derive(Debug, Clone)]
pub struct DiagRun {
    pub records: Vec<DiagRecord>,
    pub q: MachineTape,
    pub final_requirements: Vec<Requirement>,
}

impl DiagRun {
    pub fn bailed_out_at(&self) -> Option<u64> {
        self.records.iter().find(|r| r.case == DiagCase::Bailout).map(|r| r.stage)
    }
}

pub(crate) fn check_target(beta: &LeftCeStream, stages: u64) -> Result<(), DiagError> {
    for s in [0, stages] {
        let v = beta.at(s);
        if v.is_negative() || *v >= Dyadic::one() {
            return Err(DiagError::TargetOutOfRange { stage: s, value: v.clone() });
        }
    }
    Ok(())
}

/// Run stages `0..=stages` against `opponent`.
pub fn run_diag(opponent: &mut dyn Opponent, beta: &LeftCeStream, stages: u64) -> Result<DiagRun, DiagError> {
    if stages == 0 {
        return Err(DiagError::NoStages);
    }
    check_target(beta, stages)?;
    let mut diag = Diagonalizer::new();
    let mut records = Vec::with_capacity(stages as usize + 1);
    records.push(diag.start(beta.at(0), opponent.tape(), 0));
    for s in 1..=stages {
        if diag.is_running() {
            opponent
                .advance(s, diag.alpha())
                .map_err(|source| DiagError::Opponent { stage: s, source })?;
        }
        records.push(diag.step(s, beta.at(s), opponent.tape(), s));
    }
    Ok(DiagRun {
        records,
        q: diag.q.clone(),
        final_requirements: diag.reqs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::dyadic::dy;

    fn tape(events: &[(u64, &str, &str)]) -> MachineTape {
        MachineTape::from_prefix_free(events.iter().map(|&(s, p, o)| DescriptionEvent::new(s, bits(p), bits(o)))).unwrap()
    }

    #[test]
    fn start_state() {
        let mut d = Diagonalizer::new();
        let rec = d.start(&dy(9, 4), &MachineTape::new(), 0);
        assert_eq!(rec.alpha, Dyadic::zero());
        assert_eq!(d.requirements().len(), 1);
        let r0 = &d.requirements()[0];
        assert_eq!((r0.state, r0.code.to_string(), r0.restraint()), (ReqState::Preparing, "1".to_string(), dy(1, 1)));
        assert!(d.q_tape().is_empty());
    }

    #[test]
    fn bailout_formula() {
        // alpha_{s-1} = 1/2 and the opponent reaches 5/8.
        let mut d = Diagonalizer::new();
        d.alpha = dy(1, 1);
        d.reqs.push(Requirement {
            d: 0,
            state: ReqState::Waiting,
            code: bits("1"),
            restraint_exp: 1,
            reference: None,
            witness: None,
            activated_at: 0,
        });
        let m = tape(&[(3, "0", ""), (3, "100", "0")]);
        let rec = d.step(3, &dy(13, 4), &m, 3);
        assert_eq!(rec.case, DiagCase::Bailout);
        assert_eq!(rec.alpha, dy(1, 1) + dy(1, 3) * dy(13, 4));
        for (t, b) in [(4, dy(27, 5)), (5, dy(255, 8))] {
            let rec = d.step(t, &b, &m, t);
            assert_eq!(rec.case, DiagCase::BailedOut);
            assert!(rec.alpha < dy(5, 3));
        }
    }

    #[test]
    fn restrain_entry_values() {
        // r_d = 1/8, alpha_{s-1} = 1/2, gamma_s = 7/16, beta_s = 13/16.
        let mut d = Diagonalizer::new();
        d.alpha = dy(1, 1);
        d.reqs.push(Requirement {
            d: 0,
            state: ReqState::Waiting,
            code: bits("001"),
            restraint_exp: 3,
            reference: None,
            witness: Some(bits("")),
            activated_at: 0,
        });
        let m = tape(&[(1, "01", ""), (1, "001", "0"), (1, "0001", "1")]);
        assert_eq!(m.omega(), dy(7, 4));
        let rec = d.step(1, &dy(13, 4), &m, 1);
        assert_eq!(rec.case, DiagCase::Restrain);
        assert!(rec.events.contains(&DiagEvent::Reference { d: 0, q: dy(1, 4), l: dy(1, 1) }));
        assert_eq!(rec.alpha, dy(141, 8));
        assert!(&rec.alpha - dy(7, 4) < dy(1, 3));
    }

    #[test]
    fn stalling_keeps_alpha_on_beta() {
        let beta = LeftCeStream::default_beta(300);
        let run = run_diag(&mut Stalling::new(), &beta, 300).unwrap();
        for r in &run.records[1..] {
            assert_eq!(r.case, DiagCase::Preparing);
            assert_eq!(&r.alpha, beta.at(r.stage));
        }
        assert_eq!(run.final_requirements.len(), 1);
    }

    #[test]
    fn copying_settles_requirements() {
        let beta = LeftCeStream::default_beta(400);
        let run = run_diag(&mut Copying::new(), &beta, 400).unwrap();
        assert!(run.bailed_out_at().is_none());
        let waiting = run.final_requirements.iter().filter(|r| r.state == ReqState::Waiting).count();
        assert!(waiting >= 5, "only {waiting} settled");
        assert_eq!(run.q.len(), run.final_requirements.iter().filter(|r| r.witness.is_some()).count());
    }

    #[test]
    fn overshooting_bails_out() {
        let beta = LeftCeStream::default_beta(100);
        let run = run_diag(&mut Overshooting::new(40), &beta, 100).unwrap();
        assert_eq!(run.bailed_out_at(), Some(40));
    }
}
