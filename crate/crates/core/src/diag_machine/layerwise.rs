//! Diagonalizing against a guessed opponent whose guess may change.
//!
//! `index(s)` names the opponent currently believed to be the right one.
//! While it stays the same, the construction runs confined to
//! `[xi_i, xi_{i+1}]`; when it changes, the run is abandoned and a fresh one
//! starts in the next interval `[xi_{i+1}, xi_{i+2}]`. Increases already
//! made to `alpha` are never undone, so `alpha` climbs the `xi` ladder if the
//! guess never settles.

use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{check_target, DiagError, DiagRecord, Diagonalizer, Opponent};
use crate::dyadic::Dyadic;
use crate::jsonl::{self, JsonlError};
use crate::streams::LeftCeStream;

#[derive(Debug, Error)]
pub enum LayerwiseError {
    #[error("stage {stage}: restart {layer} needs endpoint xi_{needed}, but only {available} are supplied")]
    IntervalsExhausted {
        stage: u64,
        layer: usize,
        needed: usize,
        available: usize,
    },
    #[error("stage {stage}: opponent index {index} has no opponent ({count} supplied)")]
    UnknownOpponent { stage: u64, index: usize, count: usize },
    #[error("xi must be strictly increasing in [0, 1]; endpoint {0} breaks this")]
    BadEndpoints(usize),
    #[error(transparent)]
    Diag(#[from] DiagError),
    #[error("index script: {0}")]
    Script(#[from] JsonlError),
    #[error("index script must start at stage 0 and be stage-sorted")]
    BadScript,
}

/// One global stage of a layerwise run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LayerRecord {
    pub stage: u64,
    pub layer: usize,
    pub opponent: usize,
    pub restarted: bool,
    pub lo: Dyadic,
    pub hi: Dyadic,
    /// The confined run's record, with its local stage.
    pub inner: DiagRecord,
}

/// Step function `stage -> opponent index`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexStream {
    changes: Vec<(u64, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct IndexEvent {
    stage: u64,
    index: usize,
}

impl IndexStream {
    pub fn new(changes: Vec<(u64, usize)>) -> Result<Self, LayerwiseError> {
        if changes.first().map(|c| c.0) != Some(0) || changes.windows(2).any(|w| w[0].0 >= w[1].0) {
            return Err(LayerwiseError::BadScript);
        }
        Ok(IndexStream { changes })
    }

    pub fn constant(index: usize) -> Self {
        IndexStream {
            changes: vec![(0, index)],
        }
    }

    pub fn at(&self, s: u64) -> usize {
        let i = self.changes.partition_point(|c| c.0 <= s);
        self.changes[i - 1].1
    }

    pub fn read<R: Read>(reader: R) -> Result<Self, LayerwiseError> {
        let events: Vec<IndexEvent> = jsonl::read(reader)?;
        Self::new(events.into_iter().map(|e| (e.stage, e.index)).collect())
    }

    pub fn read_path(path: &Path) -> Result<Self, LayerwiseError> {
        Self::read(jsonl::open(path)?)
    }
}

fn endpoint(xi: &LeftCeStream, i: usize, stage: u64, layer: usize) -> Result<Dyadic, LayerwiseError> {
    if i as u64 > xi.horizon() {
        return Err(LayerwiseError::IntervalsExhausted {
            stage,
            layer,
            needed: i,
            available: xi.horizon() as usize + 1,
        });
    }
    let v = xi.at(i as u64).clone();
    if i > 0 && *xi.at(i as u64 - 1) >= v || v.is_negative() || v > Dyadic::one() {
        return Err(LayerwiseError::BadEndpoints(i));
    }
    Ok(v)
}

/// Run global stages `0..=stages`, restarting whenever `index` changes.
pub fn run_layerwise_diag(
    index: &IndexStream,
    opponents: &mut [Box<dyn Opponent>],
    xi: &LeftCeStream,
    beta: &LeftCeStream,
    stages: u64,
) -> Result<Vec<LayerRecord>, LayerwiseError> {
    if stages == 0 {
        return Err(DiagError::NoStages.into());
    }
    check_target(beta, stages)?;
    let count = opponents.len();
    let opponent_at = |s: u64| {
        let i = index.at(s);
        if i < count {
            Ok(i)
        } else {
            Err(LayerwiseError::UnknownOpponent { stage: s, index: i, count })
        }
    };

    let mut layer = 0;
    let mut current = opponent_at(0)?;
    let (mut lo, mut hi) = (endpoint(xi, 0, 0, 0)?, endpoint(xi, 1, 0, 0)?);
    let mut diag = Diagonalizer::confined(lo.clone(), hi.clone());
    let mut local = 0u64;
    let mut records = Vec::with_capacity(stages as usize + 1);
    let inner = diag.start(beta.at(0), opponents[current].tape(), 0);
    records.push(LayerRecord {
        stage: 0,
        layer,
        opponent: current,
        restarted: false,
        lo: lo.clone(),
        hi: hi.clone(),
        inner,
    });

    for s in 1..=stages {
        let guess = opponent_at(s)?;
        if guess != current {
            layer += 1;
            current = guess;
            lo = hi;
            hi = endpoint(xi, layer + 1, s, layer)?;
            diag = Diagonalizer::confined(lo.clone(), hi.clone());
            local = 0;
            let inner = diag.start(beta.at(0), opponents[current].tape(), s);
            records.push(LayerRecord {
                stage: s,
                layer,
                opponent: current,
                restarted: true,
                lo: lo.clone(),
                hi: hi.clone(),
                inner,
            });
            continue;
        }
        local += 1;
        if diag.is_running() {
            opponents[current]
                .advance(s, diag.alpha())
                .map_err(|source| DiagError::Opponent { stage: s, source })?;
        }
        let inner = diag.step(local, beta.at(local), opponents[current].tape(), s);
        records.push(LayerRecord {
            stage: s,
            layer,
            opponent: current,
            restarted: false,
            lo: lo.clone(),
            hi: hi.clone(),
            inner,
        });
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diag_machine::{run_diag, Copying, Stalling};

    fn ladder(n: u64) -> LeftCeStream {
        // xi_i = 1 - 2^-(i+1): 1/2, 3/4, 7/8, ...
        LeftCeStream::from_values((0..=n).map(|i| Dyadic::one() - Dyadic::pow2_neg(i + 1)).collect()).unwrap()
    }

    #[test]
    fn unit_interval_constant_index_matches_plain_run() {
        let beta = LeftCeStream::default_beta(200);
        let xi = LeftCeStream::from_values(vec![Dyadic::zero(), Dyadic::one()]).unwrap();
        let mut ops: Vec<Box<dyn Opponent>> = vec![Box::new(Copying::new())];
        let layered = run_layerwise_diag(&IndexStream::constant(0), &mut ops, &xi, &beta, 200).unwrap();
        let plain = run_diag(&mut Copying::new(), &beta, 200).unwrap();
        let inner: Vec<_> = layered.into_iter().map(|r| r.inner).collect();
        assert_eq!(inner, plain.records);
    }

    #[test]
    fn changing_index_climbs_ladder() {
        let beta = LeftCeStream::default_beta(30);
        let index = IndexStream::new((0..=30).map(|s| (s, s as usize % 2)).collect()).unwrap();
        let mut ops: Vec<Box<dyn Opponent>> = vec![Box::new(Stalling::new()), Box::new(Copying::new())];
        let xi = ladder(40);
        let recs = run_layerwise_diag(&index, &mut ops, &xi, &beta, 30).unwrap();
        for r in &recs {
            assert_eq!(r.layer as u64, r.stage);
            assert!(r.inner.alpha >= *xi.at(r.stage));
        }
        assert!(recs.windows(2).all(|w| w[0].inner.alpha <= w[1].inner.alpha));
    }

    #[test]
    fn exhausting_intervals_is_an_error() {
        let beta = LeftCeStream::default_beta(10);
        let index = IndexStream::new((0..=10).map(|s| (s, s as usize % 2)).collect()).unwrap();
        let mut ops: Vec<Box<dyn Opponent>> = vec![Box::new(Stalling::new()), Box::new(Stalling::new())];
        let err = run_layerwise_diag(&index, &mut ops, &ladder(3), &beta, 10).unwrap_err();
        assert!(matches!(err, LayerwiseError::IntervalsExhausted { stage: 3, .. }), "{err}");
    }

    #[test]
    fn index_script_parses() {
        let text = "{\"stage\":0,\"index\":2}\n{\"stage\":5,\"index\":0}\n";
        let idx = IndexStream::read(text.as_bytes()).unwrap();
        assert_eq!((idx.at(4), idx.at(5), idx.at(99)), (2, 0, 0));
        assert!(IndexStream::new(vec![(1, 0)]).is_err());
    }
}
