//! JSON-lines traces: one record per stage, tagged with the construction
//! that produced it.

use std::io::{Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::diag_diff::DiffRecord;
use crate::diag_machine::{DiagRecord, LayerRecord};
use crate::jsonl::{self, JsonlError};
use crate::omega_diff::OmegaDiffRecord;
use crate::semimeasures::SemiRecord;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "kebab-case")]
pub enum TraceLine {
    DiagMachine(DiagRecord),
    DiagMachineLayerwise(LayerRecord),
    DiagDiff(DiffRecord),
    Semimeasure(SemiRecord),
    OmegaDiff(OmegaDiffRecord),
}

impl TraceLine {
    pub fn construction(&self) -> Construction {
        match self {
            TraceLine::DiagMachine(_) => Construction::DiagMachine,
            TraceLine::DiagMachineLayerwise(_) => Construction::DiagMachineLayerwise,
            TraceLine::DiagDiff(_) => Construction::DiagDiff,
            TraceLine::Semimeasure(_) => Construction::Semimeasure,
            TraceLine::OmegaDiff(_) => Construction::OmegaDiff,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Construction {
    DiagMachine,
    DiagMachineLayerwise,
    DiagDiff,
    Semimeasure,
    OmegaDiff,
}

impl std::fmt::Display for Construction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let value = clap::ValueEnum::to_possible_value(self).expect("no skipped variants");
        f.write_str(value.get_name())
    }
}

/// A whole trace, split by construction. Mixed traces are rejected.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Trace {
    DiagMachine(Vec<DiagRecord>),
    DiagMachineLayerwise(Vec<LayerRecord>),
    DiagDiff(Vec<DiffRecord>),
    Semimeasure(Vec<SemiRecord>),
    OmegaDiff(Vec<OmegaDiffRecord>),
}

macro_rules! collect_as {
    ($lines:expr, $variant:ident) => {
        $lines
            .into_iter()
            .enumerate()
            .map(|(n, l)| match l {
                TraceLine::$variant(r) => Ok(r),
                _ => Err(n + 1),
            })
            .collect::<Result<Vec<_>, usize>>()
            .map(Trace::$variant)
    };
}

impl Trace {
    pub fn from_lines(lines: Vec<TraceLine>) -> Result<Self, JsonlError> {
        let Some(first) = lines.first() else {
            return Err(JsonlError::Schema {
                line: 0,
                message: "trace is empty".into(),
            });
        };
        let mixed = |line: usize| JsonlError::Schema {
            line,
            message: "trace mixes constructions".into(),
        };
        match first.construction() {
            Construction::DiagMachine => collect_as!(lines, DiagMachine),
            Construction::DiagMachineLayerwise => collect_as!(lines, DiagMachineLayerwise),
            Construction::DiagDiff => collect_as!(lines, DiagDiff),
            Construction::Semimeasure => collect_as!(lines, Semimeasure),
            Construction::OmegaDiff => collect_as!(lines, OmegaDiff),
        }
        .map_err(mixed)
    }

    pub fn into_lines(self) -> Vec<TraceLine> {
        match self {
            Trace::DiagMachine(v) => v.into_iter().map(TraceLine::DiagMachine).collect(),
            Trace::DiagMachineLayerwise(v) => v.into_iter().map(TraceLine::DiagMachineLayerwise).collect(),
            Trace::DiagDiff(v) => v.into_iter().map(TraceLine::DiagDiff).collect(),
            Trace::Semimeasure(v) => v.into_iter().map(TraceLine::Semimeasure).collect(),
            Trace::OmegaDiff(v) => v.into_iter().map(TraceLine::OmegaDiff).collect(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Trace::DiagMachine(v) => v.len(),
            Trace::DiagMachineLayerwise(v) => v.len(),
            Trace::DiagDiff(v) => v.len(),
            Trace::Semimeasure(v) => v.len(),
            Trace::OmegaDiff(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn read<R: Read>(reader: R) -> Result<Self, JsonlError> {
        Self::from_lines(jsonl::read(reader)?)
    }

    pub fn read_path(path: &Path) -> Result<Self, JsonlError> {
        Self::read(jsonl::open(path)?)
    }

    pub fn write<W: Write>(self, writer: W) -> Result<(), JsonlError> {
        jsonl::write(writer, self.into_lines())
    }

    pub fn write_path(self, path: &Path) -> Result<(), JsonlError> {
        jsonl::write_path(path, self.into_lines())
    }
}
