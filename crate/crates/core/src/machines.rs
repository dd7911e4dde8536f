//! Prefix-free machines as append-only logs of description events.
//!
//! A tape records each convergence `M(program) = output` with the stage at
//! which it happened. The domain is kept as an ordered set so a new program
//! is checked against its two lexicographic neighbours only.

use std::collections::{BTreeSet, HashMap};
use std::io::{Read, Write};
use std::ops::Bound;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::jsonl::{self, JsonlError};

/// One convergence `M(program) = output` observed at `stage`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptionEvent {
    pub stage: u64,
    pub program: Bits,
    pub output: Bits,
}

impl DescriptionEvent {
    pub fn new(stage: u64, program: Bits, output: Bits) -> Self {
        DescriptionEvent {
            stage,
            program,
            output,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Admission {
    Accepted,
    /// The program is comparable with the already-accepted `conflict`.
    Rejected { conflict: Bits },
}

#[derive(Debug, Error)]
pub enum MachineError {
    #[error("event at stage {stage} arrives after stage {previous}")]
    OutOfOrder { stage: u64, previous: u64 },
    #[error("program {program} is comparable with accepted program {conflict}")]
    NotPrefixFree { program: Bits, conflict: Bits },
    #[error(transparent)]
    Io(#[from] JsonlError),
}

/// A stage-ordered log of accepted descriptions with a prefix-free domain.
#[derive(Debug, Clone, Default)]
pub struct MachineTape {
    events: Vec<DescriptionEvent>,
    /// `omega[i]` is the halting probability after accepting `events[..=i]`.
    omega: Vec<Dyadic>,
    rejected: Vec<(DescriptionEvent, Bits)>,
    domain: BTreeSet<Bits>,
    /// Per output, the stages at which its shortest description got shorter.
    shortest: HashMap<Bits, Vec<(u64, usize)>>,
}

impl PartialEq for MachineTape {
    fn eq(&self, other: &Self) -> bool {
        self.events == other.events
    }
}

impl Eq for MachineTape {}

impl MachineTape {
    pub fn new() -> Self {
        Self::default()
    }

    /// Keep each event whose program is incomparable with everything accepted
    /// so far; log the rest.
    pub fn enforce_prefix_free(raw: impl IntoIterator<Item = DescriptionEvent>) -> Result<Self, MachineError> {
        let mut tape = MachineTape::new();
        for e in raw {
            tape.push(e)?;
        }
        Ok(tape)
    }

    /// Like [`MachineTape::enforce_prefix_free`] but a comparable pair is an error.
    pub fn from_prefix_free(events: impl IntoIterator<Item = DescriptionEvent>) -> Result<Self, MachineError> {
        let mut tape = MachineTape::new();
        for e in events {
            tape.push_strict(e)?;
        }
        Ok(tape)
    }

    pub fn last_stage(&self) -> Option<u64> {
        self.events.last().map(|e| e.stage)
    }

    fn check_order(&self, stage: u64) -> Result<(), MachineError> {
        let previous = self
            .events
            .last()
            .map(|e| e.stage)
            .into_iter()
            .chain(self.rejected.last().map(|(e, _)| e.stage))
            .max();
        match previous {
            Some(previous) if stage < previous => Err(MachineError::OutOfOrder { stage, previous }),
            _ => Ok(()),
        }
    }

    /// An accepted program comparable with `program`, if any.
    pub fn conflict_with(&self, program: &Bits) -> Option<&Bits> {
        // In prefix-first lexicographic order, an accepted prefix of `program`
        // is its predecessor and an accepted extension is its successor.
        if let Some(before) = self.domain.range(..=program).next_back() {
            if before.is_prefix_of(program) {
                return Some(before);
            }
        }
        if let Some(after) = self.domain.range((Bound::Excluded(program), Bound::Unbounded)).next() {
            if program.is_prefix_of(after) {
                return Some(after);
            }
        }
        None
    }

    pub fn push(&mut self, event: DescriptionEvent) -> Result<Admission, MachineError> {
        self.check_order(event.stage)?;
        if let Some(conflict) = self.conflict_with(&event.program).cloned() {
            self.rejected.push((event, conflict.clone()));
            return Ok(Admission::Rejected { conflict });
        }
        self.accept(event);
        Ok(Admission::Accepted)
    }

    pub fn push_strict(&mut self, event: DescriptionEvent) -> Result<(), MachineError> {
        self.check_order(event.stage)?;
        if let Some(conflict) = self.conflict_with(&event.program) {
            return Err(MachineError::NotPrefixFree {
                program: event.program,
                conflict: conflict.clone(),
            });
        }
        self.accept(event);
        Ok(())
    }

    fn accept(&mut self, event: DescriptionEvent) {
        let total = self.omega() + Dyadic::pow2_neg(event.program.len() as u64);
        let history = self.shortest.entry(event.output.clone()).or_default();
        let len = event.program.len();
        match history.last_mut() {
            Some(&mut (_, best)) if best <= len => {}
            Some(last) if last.0 == event.stage => *last = (event.stage, len),
            _ => history.push((event.stage, len)),
        }
        self.domain.insert(event.program.clone());
        self.omega.push(total);
        self.events.push(event);
    }

    pub fn events(&self) -> &[DescriptionEvent] {
        &self.events
    }

    pub fn rejected(&self) -> &[(DescriptionEvent, Bits)] {
        &self.rejected
    }

    pub fn domain(&self) -> &BTreeSet<Bits> {
        &self.domain
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Halting probability over everything accepted so far.
    pub fn omega(&self) -> Dyadic {
        self.omega.last().cloned().unwrap_or_else(Dyadic::zero)
    }

    /// Halting probability counting events with stage `<= s`.
    pub fn omega_at(&self, s: u64) -> Dyadic {
        let n = self.events.partition_point(|e| e.stage <= s);
        if n == 0 {
            Dyadic::zero()
        } else {
            self.omega[n - 1].clone()
        }
    }

    /// Number of accepted events with stage `<= s`.
    pub fn count_at(&self, s: u64) -> usize {
        self.events.partition_point(|e| e.stage <= s)
    }

    /// Length of the shortest description of `target` so far.
    pub fn complexity(&self, target: &Bits) -> Option<usize> {
        self.shortest.get(target).and_then(|h| h.last()).map(|&(_, len)| len)
    }

    /// Length of the shortest description of `target` among events with
    /// stage `<= s`; `None` stands for infinity.
    pub fn complexity_at(&self, target: &Bits, s: u64) -> Option<usize> {
        let history = self.shortest.get(target)?;
        let n = history.partition_point(|&(stage, _)| stage <= s);
        if n == 0 {
            None
        } else {
            Some(history[n - 1].1)
        }
    }

    /// Distinct outputs described so far.
    pub fn outputs(&self) -> impl Iterator<Item = &Bits> {
        self.shortest.keys()
    }
}

/// Indices of some comparable pair among `programs`, if the set is not an
/// antichain. Duplicates count as comparable.
pub fn first_comparable_pair(programs: &[Bits]) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..programs.len()).collect();
    order.sort_by(|&a, &b| programs[a].cmp(&programs[b]));
    // Sorted prefix-first, any comparable pair forces an adjacent one.
    order
        .windows(2)
        .find(|w| programs[w[0]].is_prefix_of(&programs[w[1]]))
        .map(|w| (w[0], w[1]))
}

/// Universal machine by adjunction: component `e`'s program `p` becomes
/// `0^e 1 p`. Events are merged by stage, then by component.
pub fn adjoin_universal(components: &[MachineTape]) -> MachineTape {
    let mut merged: Vec<(u64, usize, &DescriptionEvent)> = components
        .iter()
        .enumerate()
        .flat_map(|(e, tape)| tape.events().iter().map(move |ev| (ev.stage, e, ev)))
        .collect();
    merged.sort_by_key(|&(stage, e, _)| (stage, e));
    let codes: Vec<Bits> = (0..components.len()).map(Bits::unary).collect();
    let mut out = MachineTape::new();
    for (stage, e, ev) in merged {
        out.push_strict(DescriptionEvent::new(stage, codes[e].concat(&ev.program), ev.output.clone()))
            .expect("codes 0^e1 form an antichain, so adjunction preserves prefix-freeness");
    }
    out
}

/// Turn a machine into one with only even-length programs and the same
/// halting probability: an odd-length `p` is replaced by `p0` and `p1`.
pub fn footnote_pad(u: &MachineTape) -> MachineTape {
    let mut out = MachineTape::new();
    for ev in u.events() {
        let programs = if ev.program.len() % 2 == 1 {
            vec![ev.program.with_bit(false), ev.program.with_bit(true)]
        } else {
            vec![ev.program.clone()]
        };
        for p in programs {
            out.push_strict(DescriptionEvent::new(ev.stage, p, ev.output.clone()))
                .expect("padding refines an antichain into an antichain");
        }
    }
    out
}

pub fn read_events<R: Read>(reader: R) -> Result<Vec<DescriptionEvent>, JsonlError> {
    jsonl::read(reader)
}

pub fn read_events_path(path: &Path) -> Result<Vec<DescriptionEvent>, JsonlError> {
    jsonl::read_path(path)
}

/// Read a tape file whose programs must already form an antichain.
pub fn read_tape_path(path: &Path) -> Result<MachineTape, MachineError> {
    MachineTape::from_prefix_free(read_events_path(path)?)
}

pub fn write_tape<W: Write>(writer: W, tape: &MachineTape) -> Result<(), JsonlError> {
    jsonl::write(writer, tape.events())
}

pub fn write_tape_path(path: &Path, tape: &MachineTape) -> Result<(), JsonlError> {
    jsonl::write_path(path, tape.events())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bits::bits;
    use crate::dyadic::dy;
    use proptest::prelude::*;

    fn ev(stage: u64, program: &str, output: &str) -> DescriptionEvent {
        DescriptionEvent::new(stage, bits(program), bits(output))
    }

    fn accepted(tape: &MachineTape) -> Vec<String> {
        tape.events().iter().map(|e| e.program.to_string()).collect()
    }

    #[test]
    fn enforce_examples() {
        let t = MachineTape::enforce_prefix_free([ev(1, "0", "0"), ev(2, "01", "1"), ev(3, "1", "00")]).unwrap();
        assert_eq!(accepted(&t), ["0", "1"]);
        assert_eq!(t.rejected()[0].1, bits("0"));

        let t = MachineTape::enforce_prefix_free([ev(1, "00", "0"), ev(2, "0", "1")]).unwrap();
        assert_eq!(accepted(&t), ["00"]);

        let t = MachineTape::enforce_prefix_free([ev(1, "10", "0"), ev(1, "11", "1")]).unwrap();
        assert_eq!(accepted(&t), ["10", "11"]);

        assert!(MachineTape::enforce_prefix_free([ev(2, "0", ""), ev(1, "1", "")]).is_err());
        assert!(MachineTape::from_prefix_free([ev(1, "0", ""), ev(1, "0", "")]).is_err());
    }

    #[test]
    fn omega_examples() {
        let t = MachineTape::from_prefix_free([ev(0, "0", ""), ev(3, "10", "")]).unwrap();
        assert_eq!(t.omega_at(5), dy(3, 2));
        assert_eq!(t.omega_at(2), dy(1, 1));
        assert_eq!(MachineTape::new().omega_at(9), Dyadic::zero());
        let full = MachineTape::from_prefix_free(["00", "01", "10", "11"].map(|p| ev(0, p, ""))).unwrap();
        assert_eq!(full.omega(), Dyadic::one());
    }

    #[test]
    fn complexity_examples() {
        let t = MachineTape::from_prefix_free([ev(0, "00", "1"), ev(0, "111", "1")]).unwrap();
        assert_eq!(t.complexity_at(&bits("1"), 0), Some(2));
        assert_eq!(t.complexity_at(&bits("0"), 0), None);

        let t = MachineTape::from_prefix_free([ev(5, "0", "1")]).unwrap();
        assert_eq!(t.complexity_at(&bits("1"), 4), None);
        assert_eq!(t.complexity_at(&bits("1"), 5), Some(1));

        let t = MachineTape::from_prefix_free([ev(1, "111", "1"), ev(4, "10", "1"), ev(6, "0", "1")]).unwrap();
        let staged: Vec<_> = (0..8).map(|s| t.complexity_at(&bits("1"), s)).collect();
        assert_eq!(staged, [None, Some(3), Some(3), Some(3), Some(2), Some(2), Some(1), Some(1)]);
    }

    #[test]
    fn adjoin_examples() {
        let m0 = MachineTape::from_prefix_free([ev(0, "1", "0")]).unwrap();
        let m1 = MachineTape::new();
        let m2 = MachineTape::from_prefix_free([ev(0, "0", "0")]).unwrap();
        let u = adjoin_universal(&[m0, m1, m2]);
        assert_eq!(accepted(&u), ["11", "0010"]);
        assert!(adjoin_universal(&[]).is_empty());
    }

    #[test]
    fn pad_examples() {
        let u = MachineTape::from_prefix_free([ev(0, "110", "0"), ev(1, "01", "1")]).unwrap();
        let v = footnote_pad(&u);
        assert_eq!(accepted(&v), ["1100", "1101", "01"]);
        for s in 0..3 {
            assert_eq!(v.omega_at(s), u.omega_at(s));
        }
    }

    #[test]
    fn tape_file_round_trip() {
        let t = MachineTape::from_prefix_free([ev(0, "0", "1"), ev(2, "10", "")]).unwrap();
        let mut buf = Vec::new();
        write_tape(&mut buf, &t).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap().lines().next().unwrap(),
            r#"{"stage":0,"program":"0","output":"1"}"#
        );
        let back = MachineTape::from_prefix_free(read_events(buf.as_slice()).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    fn arb_program() -> impl Strategy<Value = Bits> {
        proptest::collection::vec(any::<bool>(), 0..9).prop_map(|v| {
            let mut b = Bits::new();
            v.into_iter().for_each(|x| b.push(x));
            b
        })
    }

    fn brute_antichain(programs: &[Bits]) -> bool {
        programs
            .iter()
            .enumerate()
            .all(|(i, a)| programs.iter().skip(i + 1).all(|b| !a.comparable(b)))
    }

    proptest! {
        #[test]
        fn enforcement_agrees_with_brute_force(progs in proptest::collection::vec(arb_program(), 0..40)) {
            let raw: Vec<_> = progs.iter().map(|p| DescriptionEvent::new(0, p.clone(), Bits::new())).collect();
            let tape = MachineTape::enforce_prefix_free(raw).unwrap();
            // Greedy oracle: accept iff incomparable with all previously accepted.
            let mut kept: Vec<Bits> = Vec::new();
            for p in &progs {
                if kept.iter().all(|k| !k.comparable(p)) {
                    kept.push(p.clone());
                }
            }
            let got: Vec<Bits> = tape.events().iter().map(|e| e.program.clone()).collect();
            prop_assert_eq!(&got, &kept);
            prop_assert!(brute_antichain(&got));
            let sum: Dyadic = got.iter().map(|p| Dyadic::pow2_neg(p.len() as u64)).sum();
            prop_assert_eq!(tape.omega(), sum);
            prop_assert!(tape.omega() <= Dyadic::one());
        }

        #[test]
        fn comparable_pair_search_matches_brute_force(progs in proptest::collection::vec(arb_program(), 0..20)) {
            prop_assert_eq!(first_comparable_pair(&progs).is_none(), brute_antichain(&progs));
        }

        #[test]
        fn adjoin_bounds_complexity(
            comps in proptest::collection::vec(proptest::collection::vec((0u64..5, arb_program(), 0u64..6), 0..10), 0..5)
        ) {
            let tapes: Vec<MachineTape> = comps.iter().map(|evs| {
                let mut evs = evs.clone();
                evs.sort_by_key(|e| e.0);
                MachineTape::enforce_prefix_free(evs.into_iter().map(|(s, p, o)| DescriptionEvent::new(s, p, Bits::nth_length_lex(o)))).unwrap()
            }).collect();
            let u = adjoin_universal(&tapes);
            let progs: Vec<Bits> = u.events().iter().map(|e| e.program.clone()).collect();
            prop_assert!(brute_antichain(&progs));
            for (e, m) in tapes.iter().enumerate() {
                for o in 0..6 {
                    let tau = Bits::nth_length_lex(o);
                    for s in 0..6 {
                        if let Some(k) = m.complexity_at(&tau, s) {
                            let ku = u.complexity_at(&tau, s).unwrap();
                            prop_assert!(ku <= k + e + 1);
                        }
                    }
                }
            }
        }

        #[test]
        fn padding_preserves_omega(progs in proptest::collection::vec((0u64..6, arb_program()), 0..30)) {
            let mut progs = progs;
            progs.sort_by_key(|p| p.0);
            let u = MachineTape::enforce_prefix_free(progs.into_iter().map(|(s, p)| DescriptionEvent::new(s, p, Bits::new()))).unwrap();
            let v = footnote_pad(&u);
            for s in 0..6 {
                prop_assert_eq!(v.omega_at(s), u.omega_at(s));
            }
            prop_assert!(v.events().iter().all(|e| e.program.len() % 2 == 0));
            let vp: Vec<Bits> = v.events().iter().map(|e| e.program.clone()).collect();
            prop_assert!(brute_antichain(&vp));
        }
    }
}
