//! Stage-indexed monotone approximations of left-c.e. and right-c.e. reals.
//!
//! A stream is total on `0..=horizon` and holds its last value beyond the
//! horizon, so a finite script describes a real that has "converged" by the
//! end of the script. Monotonicity is checked when the stream is built.

use std::fmt;
use std::io::{Read, Write};
use std::marker::PhantomData;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dyadic::Dyadic;
use crate::jsonl::{self, JsonlError};
use crate::report::Verdict;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

impl Monotonicity {
    pub fn allows(self, previous: &Dyadic, next: &Dyadic) -> bool {
        match self {
            Monotonicity::Nondecreasing => previous <= next,
            Monotonicity::Nonincreasing => previous >= next,
        }
    }
}

impl fmt::Display for Monotonicity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Monotonicity::Nondecreasing => "nondecreasing",
            Monotonicity::Nonincreasing => "nonincreasing",
        })
    }
}

#[derive(Debug, Error)]
pub enum StreamError {
    #[error("stream has no values")]
    Empty,
    #[error("first event must be at stage 0, found stage {0}")]
    MissingStageZero(u64),
    #[error("event {index} at stage {stage} does not come after stage {previous}")]
    UnsortedEvents { index: usize, stage: u64, previous: u64 },
    #[error("stream must be {direction}: stage {stage} moves from {previous} to {next}")]
    NotMonotone {
        direction: Monotonicity,
        stage: u64,
        previous: Dyadic,
        next: Dyadic,
    },
    #[error("value {value} at stage {stage} lies outside [{lo}, {hi}]")]
    OutOfBounds {
        stage: u64,
        value: Dyadic,
        lo: Dyadic,
        hi: Dyadic,
    },
    #[error("bounds [{0}, {1}] are inverted")]
    InvertedBounds(Dyadic, Dyadic),
    #[error("affine scale must be positive, got {0}")]
    NonPositiveScale(Dyadic),
    #[error("expected a {expected} stream, script declares {found}")]
    DirectionMismatch {
        expected: Monotonicity,
        found: Monotonicity,
    },
    #[error(transparent)]
    Script(#[from] JsonlError),
}

/// Direction marker for [`Stream`].
pub trait Direction: Clone + fmt::Debug {
    const MONOTONICITY: Monotonicity;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Up;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Down;

impl Direction for Up {
    const MONOTONICITY: Monotonicity = Monotonicity::Nondecreasing;
}

impl Direction for Down {
    const MONOTONICITY: Monotonicity = Monotonicity::Nonincreasing;
}

/// A monotone stage-indexed sequence of dyadics.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Stream<D: Direction> {
    values: Vec<Dyadic>,
    bounds: Option<(Dyadic, Dyadic)>,
    _direction: PhantomData<D>,
}

/// Nondecreasing approximation from below.
pub type LeftCeStream = Stream<Up>;
/// Nonincreasing approximation from above.
pub type RightCeStream = Stream<Down>;

impl<D: Direction> Stream<D> {
    pub fn from_values(values: Vec<Dyadic>) -> Result<Self, StreamError> {
        if values.is_empty() {
            return Err(StreamError::Empty);
        }
        for (s, w) in values.windows(2).enumerate() {
            if !D::MONOTONICITY.allows(&w[0], &w[1]) {
                return Err(StreamError::NotMonotone {
                    direction: D::MONOTONICITY,
                    stage: s as u64 + 1,
                    previous: w[0].clone(),
                    next: w[1].clone(),
                });
            }
        }
        Ok(Stream {
            values,
            bounds: None,
            _direction: PhantomData,
        })
    }

    /// Step function through stage-sorted `(stage, value)` events, holding
    /// each value until the next event.
    pub fn scripted(events: &[(u64, Dyadic)]) -> Result<Self, StreamError> {
        let Some((first_stage, _)) = events.first() else {
            return Err(StreamError::Empty);
        };
        if *first_stage != 0 {
            return Err(StreamError::MissingStageZero(*first_stage));
        }
        let mut values: Vec<Dyadic> = Vec::new();
        for (index, (stage, value)) in events.iter().enumerate() {
            if index > 0 {
                let previous = events[index - 1].0;
                if *stage <= previous {
                    return Err(StreamError::UnsortedEvents {
                        index,
                        stage: *stage,
                        previous,
                    });
                }
                let held = values.last().cloned().expect("nonempty");
                values.resize(*stage as usize, held);
            }
            values.push(value.clone());
        }
        Self::from_values(values)
    }

    pub fn constant(value: Dyadic, horizon: u64) -> Self {
        Stream {
            values: vec![value; horizon as usize + 1],
            bounds: None,
            _direction: PhantomData,
        }
    }

    /// Value at stage `s`; stages past the horizon hold the final value.
    pub fn at(&self, s: u64) -> &Dyadic {
        let i = (s as usize).min(self.values.len() - 1);
        &self.values[i]
    }

    pub fn horizon(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn last(&self) -> &Dyadic {
        self.values.last().expect("streams are nonempty")
    }

    pub fn values(&self) -> &[Dyadic] {
        &self.values
    }

    pub fn direction(&self) -> Monotonicity {
        D::MONOTONICITY
    }

    pub fn bounds(&self) -> Option<&(Dyadic, Dyadic)> {
        self.bounds.as_ref()
    }

    /// Declare a closed interval every value must lie in.
    pub fn with_bounds(mut self, lo: Dyadic, hi: Dyadic) -> Result<Self, StreamError> {
        if lo > hi {
            return Err(StreamError::InvertedBounds(lo, hi));
        }
        for (s, v) in self.values.iter().enumerate() {
            if *v < lo || *v > hi {
                return Err(StreamError::OutOfBounds {
                    stage: s as u64,
                    value: v.clone(),
                    lo,
                    hi,
                });
            }
        }
        self.bounds = Some((lo, hi));
        Ok(self)
    }

    /// Stages where the value changes (plus stage 0): the inverse of [`Stream::scripted`].
    pub fn change_points(&self) -> Vec<(u64, Dyadic)> {
        let mut out = vec![(0, self.values[0].clone())];
        for (s, w) in self.values.windows(2).enumerate() {
            if w[0] != w[1] {
                out.push((s as u64 + 1, w[1].clone()));
            }
        }
        out
    }

    pub fn into_any(self) -> AnyStream
    where
        Self: Into<AnyStream>,
    {
        self.into()
    }
}

impl LeftCeStream {
    /// `s -> q * base(s) + l`, for `q > 0`.
    pub fn affine(&self, q: &Dyadic, l: &Dyadic) -> Result<LeftCeStream, StreamError> {
        if !q.is_positive() {
            return Err(StreamError::NonPositiveScale(q.clone()));
        }
        let values = self.values.iter().map(|v| q * v + l).collect();
        let bounds = self
            .bounds
            .as_ref()
            .map(|(lo, hi)| (q * lo + l, q * hi + l));
        Ok(Stream {
            values,
            bounds,
            _direction: PhantomData,
        })
    }

    /// The fixed target used by the machine diagonalization:
    /// `13/16 - 2^-(s+2)`, rising strictly to `13/16`.
    pub fn default_beta(horizon: u64) -> LeftCeStream {
        let limit = Dyadic::new(13, 4);
        let values = (0..=horizon).map(|s| &limit - Dyadic::pow2_neg(s + 2)).collect();
        Stream {
            values,
            bounds: Some((Dyadic::new(9, 4), limit)),
            _direction: PhantomData,
        }
    }
}

/// A stream whose direction is only known at run time (e.g. read from a script).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AnyStream {
    Left(LeftCeStream),
    Right(RightCeStream),
}

impl From<LeftCeStream> for AnyStream {
    fn from(s: LeftCeStream) -> Self {
        AnyStream::Left(s)
    }
}

impl From<RightCeStream> for AnyStream {
    fn from(s: RightCeStream) -> Self {
        AnyStream::Right(s)
    }
}

impl AnyStream {
    pub fn direction(&self) -> Monotonicity {
        match self {
            AnyStream::Left(_) => Monotonicity::Nondecreasing,
            AnyStream::Right(_) => Monotonicity::Nonincreasing,
        }
    }

    pub fn into_left(self) -> Result<LeftCeStream, StreamError> {
        match self {
            AnyStream::Left(s) => Ok(s),
            AnyStream::Right(_) => Err(StreamError::DirectionMismatch {
                expected: Monotonicity::Nondecreasing,
                found: Monotonicity::Nonincreasing,
            }),
        }
    }

    pub fn into_right(self) -> Result<RightCeStream, StreamError> {
        match self {
            AnyStream::Right(s) => Ok(s),
            AnyStream::Left(_) => Err(StreamError::DirectionMismatch {
                expected: Monotonicity::Nonincreasing,
                found: Monotonicity::Nondecreasing,
            }),
        }
    }

    fn parts(&self) -> (Vec<(u64, Dyadic)>, Option<&(Dyadic, Dyadic)>) {
        match self {
            AnyStream::Left(s) => (s.change_points(), s.bounds()),
            AnyStream::Right(s) => (s.change_points(), s.bounds()),
        }
    }
}

/// Build a stream of the requested direction from stage-sorted events.
pub fn scripted_stream(events: &[(u64, Dyadic)], direction: Monotonicity) -> Result<AnyStream, StreamError> {
    Ok(match direction {
        Monotonicity::Nondecreasing => AnyStream::Left(LeftCeStream::scripted(events)?),
        Monotonicity::Nonincreasing => AnyStream::Right(RightCeStream::scripted(events)?),
    })
}

/// Finite-prefix surrogate for `alpha <=_S beta` with witness `n`: checks
/// `n (beta_t - beta_s) >= alpha_t - alpha_s` for all `s < t <= horizon`.
///
/// The pairwise condition telescopes, so consecutive stages suffice; the
/// verdict names the first stage `t` whose step breaks it.
pub fn solovay_domination_check(alpha: &LeftCeStream, beta: &LeftCeStream, n: u64, horizon: u64) -> Verdict {
    let n = Dyadic::from_int(n as i64);
    for t in 1..=horizon {
        let d_beta = beta.at(t) - beta.at(t - 1);
        let d_alpha = alpha.at(t) - alpha.at(t - 1);
        if &n * &d_beta < d_alpha {
            return Verdict::ViolatedAt(t);
        }
    }
    Verdict::Holds
}

#[derive(Debug, Serialize, Deserialize)]
struct ScriptHeader {
    direction: Monotonicity,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    lo: Option<Dyadic>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    hi: Option<Dyadic>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ScriptEvent {
    stage: u64,
    value: Dyadic,
}

/// Read a stream script: a direction header line followed by
/// `{"stage": .., "value": ..}` lines.
pub fn read_script<R: Read>(reader: R) -> Result<AnyStream, StreamError> {
    let lines = jsonl::lines(reader).map_err(|source| JsonlError::Io {
        path: "<stream script>".into(),
        source,
    })?;
    let Some(((n, head), rest)) = lines.split_first() else {
        return Err(StreamError::Empty);
    };
    let header: ScriptHeader = jsonl::parse_line(*n, head)?;
    let events = rest
        .iter()
        .map(|(n, l)| jsonl::parse_line::<ScriptEvent>(*n, l).map(|e| (e.stage, e.value)))
        .collect::<Result<Vec<_>, _>>()?;
    let stream = scripted_stream(&events, header.direction)?;
    match (header.lo, header.hi) {
        (Some(lo), Some(hi)) => Ok(match stream {
            AnyStream::Left(s) => AnyStream::Left(s.with_bounds(lo, hi)?),
            AnyStream::Right(s) => AnyStream::Right(s.with_bounds(lo, hi)?),
        }),
        _ => Ok(stream),
    }
}

pub fn read_script_path(path: &Path) -> Result<AnyStream, StreamError> {
    read_script(jsonl::open(path)?)
}

pub fn write_script<W: Write>(writer: W, stream: &AnyStream) -> Result<(), JsonlError> {
    let (events, bounds) = stream.parts();
    let header = ScriptHeader {
        direction: stream.direction(),
        lo: bounds.map(|b| b.0.clone()),
        hi: bounds.map(|b| b.1.clone()),
    };
    let mut lines = vec![serde_json::to_value(header).map_err(std::io::Error::from)?];
    for (stage, value) in events {
        lines.push(serde_json::to_value(ScriptEvent { stage, value }).map_err(std::io::Error::from)?);
    }
    jsonl::write(writer, lines)
}

pub fn write_script_path(path: &Path, stream: &AnyStream) -> Result<(), JsonlError> {
    write_script(jsonl::create(path)?, stream)
}
