//! Machines the diagonalization plays against.
//!
//! An opponent is consulted once per stage, after the construction has fixed
//! `alpha_{s-1}`, and may add descriptions stamped with that stage. The
//! construction then reads `gamma_s` and `K_M(.)[s]` off the opponent's tape.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::kraft_chaitin::{KcError, KraftChaitin};
use crate::machines::{self, MachineError, MachineTape};

#[derive(Debug, Error)]
pub enum OpponentError {
    #[error("opponent could not allocate: {0}")]
    Allocation(#[from] KcError),
    #[error("opponent tape: {0}")]
    Tape(#[from] MachineError),
    #[error("unknown opponent {0:?}; expected copying, stalling, overshoot@N, random:SEED or a tape file")]
    Unknown(String),
}

pub trait Opponent {
    fn name(&self) -> String;

    /// Add the stage-`stage` descriptions, having seen `alpha_prev`.
    fn advance(&mut self, stage: u64, alpha_prev: &Dyadic) -> Result<(), OpponentError>;

    fn tape(&self) -> &MachineTape;
}

/// A fixed tape, read stage by stage.
#[derive(Debug, Clone)]
pub struct Scripted {
    name: String,
    tape: MachineTape,
}

impl Scripted {
    pub fn new(name: impl Into<String>, tape: MachineTape) -> Self {
        Scripted {
            name: name.into(),
            tape,
        }
    }

    pub fn from_path(path: &Path) -> Result<Self, OpponentError> {
        Ok(Scripted::new(path.display().to_string(), machines::read_tape_path(path)?))
    }
}

impl Opponent for Scripted {
    fn name(&self) -> String {
        self.name.clone()
    }

    fn advance(&mut self, _stage: u64, _alpha_prev: &Dyadic) -> Result<(), OpponentError> {
        Ok(())
    }

    fn tape(&self) -> &MachineTape {
        &self.tape
    }
}

/// Never converges anywhere.
#[derive(Debug, Clone, Default)]
pub struct Stalling {
    tape: MachineTape,
}

impl Stalling {
    pub fn new() -> Self {
        Self::default()
    }
}

impl Opponent for Stalling {
    fn name(&self) -> String {
        "stalling".into()
    }

    fn advance(&mut self, _stage: u64, _alpha_prev: &Dyadic) -> Result<(), OpponentError> {
        Ok(())
    }

    fn tape(&self) -> &MachineTape {
        &self.tape
    }
}

/// Keeps `gamma_s = alpha_{s-1}` exactly, describing fresh outputs.
#[derive(Debug, Clone, Default)]
pub struct Copying {
    kc: KraftChaitin,
}

impl Copying {
    pub fn new() -> Self {
        Self::default()
    }
}

fn top_up(kc: &mut KraftChaitin, stage: u64, to: &Dyadic) -> Result<(), KcError> {
    let gap = to - kc.granted();
    if gap.is_positive() {
        kc.allocate_measure(stage, &gap)?;
    }
    Ok(())
}

/// Add powers of two until the granted measure exceeds `above`.
fn overshoot(kc: &mut KraftChaitin, stage: u64, above: &Dyadic) -> Result<(), KcError> {
    while kc.granted() <= *above {
        let room = Dyadic::one() - kc.granted();
        let e = room.floor_log2().expect("granted measure stays below alpha < 1");
        kc.allocate_measure(stage, &Dyadic::pow2_neg((-e) as u64))?;
    }
    Ok(())
}

impl Opponent for Copying {
    fn name(&self) -> String {
        "copying".into()
    }

    fn advance(&mut self, stage: u64, alpha_prev: &Dyadic) -> Result<(), OpponentError> {
        Ok(top_up(&mut self.kc, stage, alpha_prev)?)
    }

    fn tape(&self) -> &MachineTape {
        self.kc.tape()
    }
}

/// Copies until stage `at`, then pushes its measure past `alpha_{at-1}`.
#[derive(Debug, Clone)]
pub struct Overshooting {
    at: u64,
    kc: KraftChaitin,
}

impl Overshooting {
    pub fn new(at: u64) -> Self {
        Overshooting {
            at,
            kc: KraftChaitin::new(),
        }
    }
}

impl Opponent for Overshooting {
    fn name(&self) -> String {
        format!("overshoot@{}", self.at)
    }

    fn advance(&mut self, stage: u64, alpha_prev: &Dyadic) -> Result<(), OpponentError> {
        top_up(&mut self.kc, stage, alpha_prev)?;
        if stage >= self.at {
            overshoot(&mut self.kc, stage, alpha_prev)?;
        }
        Ok(())
    }

    fn tape(&self) -> &MachineTape {
        self.kc.tape()
    }
}

/// Chases `alpha` loosely: idles, grants single powers of two or a truncated
/// copy of the gap, and with some seeds overshoots once.
///
/// Grants are kept to a few bits each so the opponent's measure, and with it
/// the construction's reference values, stay at modest precision.
#[derive(Debug, Clone)]
pub struct RandomOpponent {
    seed: u64,
    rng: ChaCha8Rng,
    idle: f64,
    overshoot_at: Option<u64>,
    kc: KraftChaitin,
}

impl RandomOpponent {
    pub fn new(seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let idle = rng.gen_range(0.05..0.6);
        let overshoot_at = rng.gen_bool(0.3).then(|| rng.gen_range(1..3000));
        RandomOpponent {
            seed,
            rng,
            idle,
            overshoot_at,
            kc: KraftChaitin::new(),
        }
    }

    pub fn overshoot_at(&self) -> Option<u64> {
        self.overshoot_at
    }
}

impl Opponent for RandomOpponent {
    fn name(&self) -> String {
        format!("random:{}", self.seed)
    }

    fn advance(&mut self, stage: u64, alpha_prev: &Dyadic) -> Result<(), OpponentError> {
        if self.overshoot_at == Some(stage) {
            overshoot(&mut self.kc, stage, alpha_prev)?;
            return Ok(());
        }
        if self.rng.gen_bool(self.idle) {
            return Ok(());
        }
        let gap = alpha_prev - self.kc.granted();
        let Some(lead) = gap.floor_log2().filter(|_| gap.is_positive()) else {
            return Ok(());
        };
        let lead = (-lead) as u64;
        let grant = match self.rng.gen_range(0..3) {
            0 => Dyadic::pow2_neg(lead + self.rng.gen_range(0..4)),
            1 => gap.floor_to(lead + self.rng.gen_range(1..7)),
            _ if gap.binary_expansion().map_or(false, |b| b.len() <= 6) => gap,
            _ => gap.floor_to(lead + 3),
        };
        self.kc.allocate_measure(stage, &grant)?;
        Ok(())
    }

    fn tape(&self) -> &MachineTape {
        self.kc.tape()
    }
}

/// Build an opponent from a command-line spec.
pub fn parse_opponent(spec: &str) -> Result<Box<dyn Opponent>, OpponentError> {
    if spec == "copying" {
        return Ok(Box::new(Copying::new()));
    }
    if spec == "stalling" {
        return Ok(Box::new(Stalling::new()));
    }
    if let Some(at) = spec.strip_prefix("overshoot@") {
        let at = at.parse().map_err(|_| OpponentError::Unknown(spec.into()))?;
        return Ok(Box::new(Overshooting::new(at)));
    }
    if let Some(seed) = spec.strip_prefix("random:") {
        let seed = seed.parse().map_err(|_| OpponentError::Unknown(spec.into()))?;
        return Ok(Box::new(RandomOpponent::new(seed)));
    }
    let path = Path::new(spec);
    if path.exists() {
        return Ok(Box::new(Scripted::from_path(path)?));
    }
    Err(OpponentError::Unknown(spec.into()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyadic::dy;

    #[test]
    fn copying_matches_previous_alpha() {
        let mut o = Copying::new();
        for (s, a) in [(1, dy(11, 4)), (2, dy(3, 2)), (3, dy(3, 2))] {
            o.advance(s, &a).unwrap();
            assert_eq!(o.tape().omega_at(s), a);
        }
    }

    #[test]
    fn overshooting_passes_alpha_once_due() {
        let mut o = Overshooting::new(2);
        o.advance(1, &dy(1, 1)).unwrap();
        assert_eq!(o.tape().omega(), dy(1, 1));
        o.advance(2, &dy(5, 3)).unwrap();
        assert!(o.tape().omega() > dy(5, 3));
        assert!(o.tape().omega() <= Dyadic::one());
    }

    #[test]
    fn random_stays_below_alpha_until_overshoot() {
        for seed in 0..20 {
            let mut o = RandomOpponent::new(seed);
            let mut alpha = Dyadic::zero();
            for s in 1..200 {
                alpha = &alpha + Dyadic::pow2_neg(s + 2);
                o.advance(s, &alpha).unwrap();
                if o.overshoot_at().map_or(true, |at| s < at) {
                    assert!(o.tape().omega() <= alpha);
                }
            }
        }
    }

    #[test]
    fn specs_parse() {
        assert_eq!(parse_opponent("copying").unwrap().name(), "copying");
        assert_eq!(parse_opponent("overshoot@7").unwrap().name(), "overshoot@7");
        assert_eq!(parse_opponent("random:3").unwrap().name(), "random:3");
        assert!(parse_opponent("nonsense").is_err());
    }
}
