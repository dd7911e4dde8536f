//! Online Kraft-Chaitin allocation: turning a stream of length requests into
//! a prefix-free machine, and a left-c.e. real into a machine whose halting
//! probability tracks it exactly.
//!
//! The unallocated part of `[0, 1)` is kept as disjoint dyadic intervals, at
//! most one per length, so the free lengths are exactly the 1-bits of the
//! free measure. A request for length `n` takes the free interval with the
//! largest length `l <= n`, keeps its leftmost length-`n` piece and returns
//! the remaining pieces `p 0^k 1` (lengths `l+1..=n`) to the free set. None
//! of those lengths can already be free, since `l` was the largest free
//! length not exceeding `n`.
//!
//! A request is refused only when every free length exceeds `n`, which
//! means the free measure is below `2^-n`.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::machines::{DescriptionEvent, MachineTape};
use crate::streams::LeftCeStream;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum KcError {
    #[error("request weight {0} is not of the form 2^-n")]
    NotPowerOfTwo(Dyadic),
    #[error("value {value} at stage {stage} lies outside [0, 1]")]
    OutOfRange { stage: u64, value: Dyadic },
    #[error("request for length {length} at stage {stage} exceeds the free measure {free}")]
    OverBudget { stage: u64, length: usize, free: Dyadic },
    #[error("stage {stage} comes after stage {previous}")]
    OutOfOrder { stage: u64, previous: u64 },
}

/// A request for one program of weight `2^-length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub length: usize,
    /// Output to attach; a fresh token is chosen when absent.
    pub target: Option<Bits>,
}

impl Request {
    pub fn of_length(length: usize) -> Self {
        Request {
            length,
            target: None,
        }
    }

    pub fn from_weight(weight: &Dyadic) -> Result<Self, KcError> {
        match weight.log2_exact() {
            Some(e) if e <= 0 => Ok(Request::of_length((-e) as usize)),
            _ => Err(KcError::NotPowerOfTwo(weight.clone())),
        }
    }

    pub fn with_target(mut self, target: Bits) -> Self {
        self.target = Some(target);
        self
    }

    pub fn weight(&self) -> Dyadic {
        Dyadic::pow2_neg(self.length as u64)
    }
}

/// Incremental allocator that writes granted requests to a machine tape.
#[derive(Debug, Clone)]
pub struct KraftChaitin {
    free: BTreeMap<usize, Bits>,
    tape: MachineTape,
    next_token: u64,
    last_stage: u64,
}

impl Default for KraftChaitin {
    fn default() -> Self {
        Self::new()
    }
}

impl KraftChaitin {
    pub fn new() -> Self {
        KraftChaitin {
            free: BTreeMap::from([(0, Bits::new())]),
            tape: MachineTape::new(),
            next_token: 0,
            last_stage: 0,
        }
    }

    pub fn free_measure(&self) -> Dyadic {
        self.free.keys().map(|&l| Dyadic::pow2_neg(l as u64)).sum()
    }

    pub fn granted(&self) -> Dyadic {
        self.tape.omega()
    }

    pub fn tape(&self) -> &MachineTape {
        &self.tape
    }

    pub fn into_tape(self) -> MachineTape {
        self.tape
    }

    /// Next output from the length-lexicographic enumeration.
    pub fn fresh_token(&mut self) -> Bits {
        let t = Bits::nth_length_lex(self.next_token);
        self.next_token += 1;
        t
    }

    /// Grant `request` at `stage`, returning the allocated program.
    pub fn allocate(&mut self, stage: u64, request: Request) -> Result<Bits, KcError> {
        if stage < self.last_stage {
            return Err(KcError::OutOfOrder {
                stage,
                previous: self.last_stage,
            });
        }
        let n = request.length;
        let Some((&l, _)) = self.free.range(..=n).next_back() else {
            return Err(KcError::OverBudget {
                stage,
                length: n,
                free: self.free_measure(),
            });
        };
        let base = self.free.remove(&l).expect("key just found");
        let mut program = base;
        for k in l..n {
            self.free.insert(k + 1, program.with_bit(true));
            program.push(false);
        }
        let output = match request.target {
            Some(t) => t,
            None => self.fresh_token(),
        };
        self.last_stage = stage;
        self.tape
            .push_strict(DescriptionEvent::new(stage, program.clone(), output))
            .expect("allocated intervals are disjoint");
        Ok(program)
    }

    /// Grant programs whose weights sum to `amount` (its binary expansion).
    pub fn allocate_measure(&mut self, stage: u64, amount: &Dyadic) -> Result<Vec<Bits>, KcError> {
        let lengths = amount.binary_expansion().map_err(|_| KcError::OutOfRange {
            stage,
            value: amount.clone(),
        })?;
        lengths
            .into_iter()
            .map(|n| self.allocate(stage, Request::of_length(n as usize)))
            .collect()
    }
}

/// Outcome of [`kc_allocate`]: the machine plus the requests that were refused.
#[derive(Debug, Clone)]
pub struct Allocation {
    pub tape: MachineTape,
    pub programs: Vec<Option<Bits>>,
    pub rejected: Vec<(usize, KcError)>,
}

/// Run the allocator over stage-ordered requests. Over-budget requests are
/// refused and recorded; the rest are granted.
pub fn kc_allocate(requests: impl IntoIterator<Item = (u64, Request)>) -> Allocation {
    let mut kc = KraftChaitin::new();
    let mut programs = Vec::new();
    let mut rejected = Vec::new();
    for (i, (stage, req)) in requests.into_iter().enumerate() {
        match kc.allocate(stage, req) {
            Ok(p) => programs.push(Some(p)),
            Err(e) => {
                programs.push(None);
                rejected.push((i, e));
            }
        }
    }
    Allocation {
        tape: kc.into_tape(),
        programs,
        rejected,
    }
}

/// A machine with `omega_at(s) == alpha(s)` for every `s <= horizon`.
pub fn real_to_machine(alpha: &LeftCeStream, horizon: u64) -> Result<MachineTape, KcError> {
    let mut kc = KraftChaitin::new();
    let mut previous = Dyadic::zero();
    for s in 0..=horizon {
        let value = alpha.at(s);
        if value.is_negative() || *value > Dyadic::one() {
            return Err(KcError::OutOfRange {
                stage: s,
                value: value.clone(),
            });
        }
        let step = value - &previous;
        if !step.is_zero() {
            kc.allocate_measure(s, &step)?;
        }
        previous = value.clone();
    }
    Ok(kc.into_tape())
}
