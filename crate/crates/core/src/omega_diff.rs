//! From a machine `U`, a machine `Q` and a length bound `h`, build a machine
//! `V` that describes everything `U` does at most one bit less efficiently,
//! while `Omega_U - Omega_V` is pinned to an exact formula:
//!
//! ```text
//! Omega_U - Omega_V = 2^-(c+1) - 2^-(c+1) Omega_Q + sum over tau in A of 2^-h(tau)
//! ```
//!
//! Here `c` is the length of `U`'s first program and `A` is the set of
//! outputs (other than the first) that `U` ever describes in fewer than
//! `h(tau)` bits. The rules:
//!
//! * `U`'s first description `U(sigma0) = tau0` becomes `V(sigma0 0) = tau0`,
//!   and every `Q(p)` is copied as `V(sigma0 1 p)`.
//! * The first description `U(sigma) = tau` with `|sigma| < h(tau)` is
//!   replaced by `V(sigma 0) = tau` plus programs under `sigma 1` of total
//!   measure `2^-(|sigma|+1) - 2^-h(tau)`.
//! * Every other description is copied unchanged.
//!
//! [`combine_w`] then interleaves `U` and `V` into a machine `W` with
//! `Omega_W = (Omega_U + Omega_V) / 2`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bits::Bits;
use crate::dyadic::Dyadic;
use crate::machines::{DescriptionEvent, MachineError, MachineTape};
use crate::report::{Report, Suite};

#[derive(Debug, Error)]
pub enum OmegaDiffError {
    #[error("h({output}) = {value}; h must be positive")]
    NonPositiveH { output: Bits, value: i64 },
    #[error("h has no entry for output {0:?}")]
    MissingH(Bits),
    #[error("output {0:?} is too long to rank")]
    Unrankable(Bits),
    #[error("bad h specification {0:?}; expected n+K, n-K, n or a JSON table file")]
    BadSpec(String),
    #[error("h table {path}: {message}")]
    Table { path: String, message: String },
    #[error("literal expansion of 2^{0} programs is too large; use the compact form")]
    TooWide(u64),
    #[error(transparent)]
    Machine(#[from] MachineError),
}

/// The length bound `h`, applied to outputs through their length-lex rank.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum HSpec {
    /// `h(tau) = rank(tau) + K`.
    Offset(i64),
    /// Explicit values; outputs not listed are an error.
    Table(BTreeMap<Bits, i64>),
}

impl HSpec {
    pub fn eval(&self, output: &Bits) -> Result<u64, OmegaDiffError> {
        let value = match self {
            HSpec::Offset(k) => {
                let rank = output.length_lex_rank().ok_or_else(|| OmegaDiffError::Unrankable(output.clone()))?;
                i64::try_from(rank).map_err(|_| OmegaDiffError::Unrankable(output.clone()))?.saturating_add(*k)
            }
            HSpec::Table(t) => *t.get(output).ok_or_else(|| OmegaDiffError::MissingH(output.clone()))?,
        };
        if value <= 0 {
            return Err(OmegaDiffError::NonPositiveH {
                output: output.clone(),
                value,
            });
        }
        Ok(value as u64)
    }

    /// `n+K`, `n-K` or `n`, else a JSON object file `{"<output>": h, ...}`.
    pub fn parse(spec: &str) -> Result<Self, OmegaDiffError> {
        if let Ok(h) = spec.parse::<HSpec>() {
            return Ok(h);
        }
        let path = Path::new(spec);
        if !path.exists() {
            return Err(OmegaDiffError::BadSpec(spec.into()));
        }
        let table_err = |message: String| OmegaDiffError::Table {
            path: spec.into(),
            message,
        };
        let text = std::fs::read_to_string(path).map_err(|e| table_err(e.to_string()))?;
        let raw: BTreeMap<String, i64> = serde_json::from_str(&text).map_err(|e| table_err(e.to_string()))?;
        let mut table = BTreeMap::new();
        for (k, v) in raw {
            let output: Bits = k.parse().map_err(|_| table_err(format!("{k:?} is not a bit string")))?;
            table.insert(output, v);
        }
        Ok(HSpec::Table(table))
    }
}

impl FromStr for HSpec {
    type Err = OmegaDiffError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || OmegaDiffError::BadSpec(s.into());
        let rest = compact.strip_prefix('n').ok_or_else(bad)?;
        if rest.is_empty() {
            return Ok(HSpec::Offset(0));
        }
        let k: i64 = rest.strip_prefix('+').unwrap_or(rest).parse().map_err(|_| bad())?;
        Ok(HSpec::Offset(k))
    }
}

impl fmt::Display for HSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            HSpec::Offset(k) if *k >= 0 => write!(f, "n+{k}"),
            HSpec::Offset(k) => write!(f, "n{k}"),
            HSpec::Table(t) => write!(f, "table of {} entries", t.len()),
        }
    }
}

/// How a short description's `sigma 1` half is filled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Expansion {
    /// Every length-`h` extension of `sigma 1` except `sigma 1^(h-|sigma|)`.
    Literal,
    /// The same measure as `sigma 1^k 0` for `0 < k < h - |sigma|`: one
    /// program per level instead of exponentially many.
    #[default]
    Compact,
}

/// Largest `h - |sigma|` the literal expansion accepts.
pub const LITERAL_LIMIT: u64 = 16;

/// Programs that replace a short description `U(sigma)`, given `h`.
pub fn replacement_programs(sigma: &Bits, h: u64, expansion: Expansion) -> Result<Vec<Bits>, OmegaDiffError> {
    let n = h - sigma.len() as u64;
    let mut out = vec![sigma.with_bit(false)];
    let head = sigma.with_bit(true);
    match expansion {
        Expansion::Compact => {
            let mut p = head;
            for _ in 1..n {
                out.push(p.with_bit(false));
                p.push(true);
            }
        }
        Expansion::Literal => {
            if n > LITERAL_LIMIT {
                return Err(OmegaDiffError::TooWide(n - 1));
            }
            let tail = n - 1;
            // All tails except 1^tail, in lexicographic order.
            for m in 0..(1u64 << tail) - 1 {
                let mut p = head.clone();
                for b in (0..tail).rev() {
                    p.push(m >> b & 1 == 1);
                }
                out.push(p);
            }
        }
    }
    Ok(out)
}

/// Why `V` issued a description.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    First,
    QCopy,
    Copy,
    Replace,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum OdEvent {
    /// `U(program) = output` was read; `h` is `h(output)`.
    U { program: Bits, output: Bits, h: u64 },
    /// `Q(program) = output` was read.
    Q { program: Bits, output: Bits },
    /// `V(program) = output` was issued.
    V { program: Bits, output: Bits, rule: Rule },
    /// `output` joined `A` through the short description `U(program)`.
    Short { output: Bits, program: Bits, h: u64 },
}

/// End-of-stage state; every stage is quiescent once it is recorded.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OmegaDiffRecord {
    pub stage: u64,
    /// Length of `U`'s first program, once seen.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<u64>,
    pub omega_u: Dyadic,
    pub omega_v: Dyadic,
    /// `Omega_Q` copied so far.
    pub gamma: Dyadic,
    /// Sum of `2^-h(tau)` over `A`.
    pub withheld: Dyadic,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub events: Vec<OdEvent>,
}

impl OmegaDiffRecord {
    /// Right-hand side of the difference identity.
    pub fn predicted_difference(&self) -> Dyadic {
        predicted(self.c, &self.gamma, &self.withheld)
    }
}

fn predicted(c: Option<u64>, gamma: &Dyadic, withheld: &Dyadic) -> Dyadic {
    match c {
        None => Dyadic::zero(),
        Some(c) => {
            let w = Dyadic::pow2_neg(c + 1);
            &w - &w * gamma + withheld
        }
    }
}

/// Member of `A`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ShortEntry {
    pub stage: u64,
    pub output: Bits,
    pub program: Bits,
    pub h: u64,
}

/// What the difference identity needs, stage by stage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DiffLedger {
    /// `(stage, sigma0, tau0)` of `U`'s first description.
    pub first: Option<(u64, Bits, Bits)>,
    /// `(stage, Omega_Q copied)` after each change.
    pub gamma: Vec<(u64, Dyadic)>,
    /// `A` in order of entry.
    pub short: Vec<ShortEntry>,
    /// `Q` events not yet copied at the horizon (before `U` says anything).
    pub pending: usize,
}

impl DiffLedger {
    pub fn c(&self) -> Option<u64> {
        self.first.as_ref().map(|f| f.1.len() as u64)
    }

    pub fn gamma_at(&self, s: u64) -> Dyadic {
        let n = self.gamma.partition_point(|g| g.0 <= s);
        if n == 0 {
            Dyadic::zero()
        } else {
            self.gamma[n - 1].1.clone()
        }
    }

    pub fn withheld_at(&self, s: u64) -> Dyadic {
        self.short.iter().filter(|e| e.stage <= s).map(|e| Dyadic::pow2_neg(e.h)).sum()
    }

    /// `Omega_U[s] - Omega_V[s]` as the formula has it.
    pub fn predicted_at(&self, s: u64) -> Dyadic {
        let c = self.first.as_ref().filter(|f| f.0 <= s).map(|f| f.1.len() as u64);
        predicted(c, &self.gamma_at(s), &self.withheld_at(s))
    }
}

#[derive(Debug, Clone)]
pub struct OmegaDiffRun {
    pub v: MachineTape,
    pub ledger: DiffLedger,
    pub records: Vec<OmegaDiffRecord>,
}

/// Build `V` from `U` and `Q` over stages `0..=horizon`.
pub fn transform_v(u: &MachineTape, h: &HSpec, q: &MachineTape, horizon: u64, expansion: Expansion) -> Result<OmegaDiffRun, OmegaDiffError> {
    let mut v = MachineTape::new();
    let mut ledger = DiffLedger::default();
    let mut records = Vec::with_capacity(horizon as usize + 1);
    let mut in_a: HashSet<Bits> = HashSet::new();
    let (mut ui, mut qi) = (0, 0);
    let mut gamma = Dyadic::zero();
    let mut withheld = Dyadic::zero();

    let issue = |v: &mut MachineTape, events: &mut Vec<OdEvent>, stage, program: Bits, output: Bits, rule| {
        events.push(OdEvent::V {
            program: program.clone(),
            output: output.clone(),
            rule,
        });
        v.push_strict(DescriptionEvent::new(stage, program, output))
    };

    for s in 0..=horizon {
        let mut events = Vec::new();
        while ui < u.len() && u.events()[ui].stage <= s {
            let ev = &u.events()[ui];
            ui += 1;
            let hv = h.eval(&ev.output)?;
            events.push(OdEvent::U {
                program: ev.program.clone(),
                output: ev.output.clone(),
                h: hv,
            });
            match &ledger.first {
                None => {
                    ledger.first = Some((s, ev.program.clone(), ev.output.clone()));
                    issue(&mut v, &mut events, s, ev.program.with_bit(false), ev.output.clone(), Rule::First)?;
                }
                Some((_, _, tau0)) if *tau0 != ev.output && !in_a.contains(&ev.output) && (ev.program.len() as u64) < hv => {
                    in_a.insert(ev.output.clone());
                    events.push(OdEvent::Short {
                        output: ev.output.clone(),
                        program: ev.program.clone(),
                        h: hv,
                    });
                    ledger.short.push(ShortEntry {
                        stage: s,
                        output: ev.output.clone(),
                        program: ev.program.clone(),
                        h: hv,
                    });
                    withheld = &withheld + Dyadic::pow2_neg(hv);
                    for p in replacement_programs(&ev.program, hv, expansion)? {
                        issue(&mut v, &mut events, s, p, ev.output.clone(), Rule::Replace)?;
                    }
                }
                Some(_) => issue(&mut v, &mut events, s, ev.program.clone(), ev.output.clone(), Rule::Copy)?,
            }
        }
        if let Some((_, sigma0, _)) = &ledger.first {
            let under = sigma0.with_bit(true);
            let before = qi;
            while qi < q.len() && q.events()[qi].stage <= s {
                let ev = &q.events()[qi];
                qi += 1;
                events.push(OdEvent::Q {
                    program: ev.program.clone(),
                    output: ev.output.clone(),
                });
                gamma = &gamma + Dyadic::pow2_neg(ev.program.len() as u64);
                issue(&mut v, &mut events, s, under.concat(&ev.program), ev.output.clone(), Rule::QCopy)?;
            }
            if qi > before {
                ledger.gamma.push((s, gamma.clone()));
            }
        }
        records.push(OmegaDiffRecord {
            stage: s,
            c: ledger.c(),
            omega_u: u.omega_at(s),
            omega_v: v.omega(),
            gamma: gamma.clone(),
            withheld: withheld.clone(),
            events,
        });
    }
    ledger.pending = q.count_at(horizon) - qi;
    Ok(OmegaDiffRun { v, ledger, records })
}

/// `W(0 sigma) = U(sigma)`, `W(1 sigma) = V(sigma)`, merged by stage.
pub fn combine_w(u: &MachineTape, v: &MachineTape) -> MachineTape {
    let mut merged: Vec<(u64, bool, &DescriptionEvent)> = u
        .events()
        .iter()
        .map(|e| (e.stage, false, e))
        .chain(v.events().iter().map(|e| (e.stage, true, e)))
        .collect();
    merged.sort_by_key(|&(stage, side, _)| (stage, side));
    let mut w = MachineTape::new();
    for (stage, side, e) in merged {
        let program = Bits::new().with_bit(side).concat(&e.program);
        w.push_strict(DescriptionEvent::new(stage, program, e.output.clone()))
            .expect("distinct first bits keep the two halves apart");
    }
    w
}

const LEDGER_CHECKS: &[&str] = &["ledger-identity", "complexity-bound"];

fn complexity_bound(suite: &mut Suite, u: &MachineTape, v: &MachineTape, s: u64) {
    for tau in u.outputs() {
        let ku = u.complexity_at(tau, s);
        let kv = v.complexity_at(tau, s);
        let ok = match (ku, kv) {
            (None, _) => true,
            (Some(ku), Some(kv)) => kv <= ku + 1,
            (Some(_), None) => false,
        };
        suite.record("complexity-bound", s, ok, || format!("K_V({tau}) = {kv:?} but K_U({tau}) = {ku:?}"));
    }
}

/// The difference identity and `K_V <= K_U + 1` at stage `s`.
pub fn ledger_check(u: &MachineTape, v: &MachineTape, ledger: &DiffLedger, s: u64) -> Report {
    let mut suite = Suite::new(LEDGER_CHECKS);
    let diff = u.omega_at(s) - v.omega_at(s);
    let expected = ledger.predicted_at(s);
    suite.record("ledger-identity", s, diff == expected, || {
        format!("Omega_U - Omega_V = {diff} but the ledger gives {expected}")
    });
    complexity_bound(&mut suite, u, v, s);
    suite.into_report()
}

const TRACE_CHECKS: &[&str] = &[
    "stage-sequence",
    "omega-consistent",
    "ledger-identity",
    "withheld-sum",
    "short-rule",
    "single-replacement",
    "v-prefix-free",
    "complexity-bound",
];

/// Rebuild `U`, `Q` and `V` from a trace and check the construction's
/// guarantees at every stage.
pub fn verify_omega_diff(records: &[OmegaDiffRecord]) -> Report {
    let mut suite = Suite::new(TRACE_CHECKS);
    let mut u = MachineTape::new();
    let mut q = MachineTape::new();
    let mut v = MachineTape::new();
    let mut first: Option<(Bits, Bits)> = None;
    let mut short: HashMap<Bits, u64> = HashMap::new();
    let mut withheld = Dyadic::zero();
    let mut copied_q = Dyadic::zero();

    for (n, r) in records.iter().enumerate() {
        let s = r.stage;
        suite.record("stage-sequence", s, s == n as u64, || format!("record {n} has stage {s}"));
        let mut last_u: Option<(Bits, Bits, u64)> = None;
        for e in &r.events {
            match e {
                OdEvent::U { program, output, h } => {
                    let _ = u.push(DescriptionEvent::new(s, program.clone(), output.clone()));
                    if first.is_none() {
                        first = Some((program.clone(), output.clone()));
                    } else {
                        let must_replace = first.as_ref().is_some_and(|f| f.1 != *output) && !short.contains_key(output) && (program.len() as u64) < *h;
                        let replaced = r.events.iter().any(|x| matches!(x, OdEvent::Short { program: p, output: o, .. } if p == program && o == output));
                        suite.record("short-rule", s, must_replace == replaced, || {
                            format!("U({program}) = {output} with h = {h}: replacement expected {must_replace}, found {replaced}")
                        });
                    }
                    last_u = Some((program.clone(), output.clone(), *h));
                }
                OdEvent::Q { program, output } => {
                    let _ = q.push(DescriptionEvent::new(s, program.clone(), output.clone()));
                    copied_q = &copied_q + Dyadic::pow2_neg(program.len() as u64);
                }
                OdEvent::V { program, output, .. } => {
                    let admitted = v.push(DescriptionEvent::new(s, program.clone(), output.clone()));
                    let ok = matches!(admitted, Ok(crate::machines::Admission::Accepted));
                    suite.record("v-prefix-free", s, ok, || format!("V program {program} clashes with an earlier one"));
                }
                OdEvent::Short { output, program, h } => {
                    let fresh = short.insert(output.clone(), *h).is_none();
                    let matches_u = last_u.as_ref().is_some_and(|(p, o, hh)| p == program && o == output && hh == h);
                    suite.record("single-replacement", s, fresh && matches_u, || {
                        format!("{output} replaced again or without its U description")
                    });
                    withheld = &withheld + Dyadic::pow2_neg(*h);
                }
            }
        }
        let omegas_ok = r.omega_u == u.omega() && r.omega_v == v.omega() && r.gamma == copied_q;
        suite.record("omega-consistent", s, omegas_ok, || "recorded measures disagree with the events".into());
        suite.record("withheld-sum", s, r.withheld == withheld, || format!("withheld {} but A sums to {withheld}", r.withheld));
        let c = first.as_ref().map(|f| f.0.len() as u64);
        let diff = u.omega() - v.omega();
        let expected = predicted(c, &copied_q, &withheld);
        suite.record("ledger-identity", s, diff == expected && r.c == c, || {
            format!("Omega_U - Omega_V = {diff} but the formula gives {expected}")
        });
        complexity_bound(&mut suite, &u, &v, s);
    }
    suite.into_report()
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
    fn h_specs() {
        assert_eq!("n+2".parse::<HSpec>().unwrap(), HSpec::Offset(2));
        assert_eq!("n - 1".parse::<HSpec>().unwrap(), HSpec::Offset(-1));
        assert_eq!(HSpec::Offset(2).eval(&bits("0")).unwrap(), 3);
        assert!(matches!(HSpec::Offset(-1).eval(&bits("")), Err(OmegaDiffError::NonPositiveH { .. })));
        assert!(HSpec::parse("m+1").is_err());
    }

    #[test]
    fn first_description_split() {
        // U("10") = tau0 with Omega_Q = 1/2: V gets 1/8 + 1/8 * 1/2 = 3/16.
        let u = tape(&[(1, "10", "0")]);
        let q = tape(&[(0, "1", "")]);
        let run = transform_v(&u, &HSpec::Offset(1), &q, 3, Expansion::Compact).unwrap();
        assert_eq!(run.v.omega(), dy(3, 4));
        assert_eq!(u.omega() - run.v.omega(), dy(1, 4));
        assert_eq!(run.ledger.predicted_at(3), dy(1, 4));
        assert!(run.v.domain().contains(&bits("100")) && run.v.domain().contains(&bits("1011")));
    }

    #[test]
    fn short_description_expansions() {
        let sigma = bits("01");
        let lit = replacement_programs(&sigma, 4, Expansion::Literal).unwrap();
        let compact = replacement_programs(&sigma, 4, Expansion::Compact).unwrap();
        assert_eq!(lit, vec![bits("010"), bits("0110")]);
        assert_eq!(lit, compact);
        let measure = |ps: &[Bits]| ps.iter().map(|p| Dyadic::pow2_neg(p.len() as u64)).sum::<Dyadic>();
        assert_eq!(measure(&lit), dy(1, 2) - dy(1, 4));
        for h in 3..10 {
            let lit = replacement_programs(&sigma, h, Expansion::Literal).unwrap();
            let compact = replacement_programs(&sigma, h, Expansion::Compact).unwrap();
            let want = dy(1, 2) - Dyadic::pow2_neg(h);
            assert_eq!((measure(&lit), measure(&compact)), (want.clone(), want));
            assert!(crate::machines::first_comparable_pair(&lit).is_none());
            assert!(crate::machines::first_comparable_pair(&compact).is_none());
        }
    }

    #[test]
    fn long_descriptions_are_copied() {
        let u = tape(&[(0, "0", ""), (1, "10110", "1")]);
        // h("1") = rank 2 + 2 = 4 <= 5.
        let run = transform_v(&u, &HSpec::Offset(2), &MachineTape::new(), 2, Expansion::Compact).unwrap();
        assert!(run.v.domain().contains(&bits("10110")));
        assert!(run.ledger.short.is_empty());
    }

    #[test]
    fn identity_and_bound_hold() {
        let u = tape(&[(0, "00", "1"), (1, "01", "0"), (1, "100", "11"), (2, "101", "0"), (3, "1100", "")]);
        let q = tape(&[(0, "0", "1"), (2, "10", "1")]);
        let run = transform_v(&u, &HSpec::Offset(3), &q, 4, Expansion::Compact).unwrap();
        for s in 0..=4 {
            assert!(ledger_check(&u, &run.v, &run.ledger, s).passed(), "stage {s}");
        }
        assert!(verify_omega_diff(&run.records).passed());
    }

    #[test]
    fn missing_replacement_program_breaks_identity_by_its_weight() {
        let u = tape(&[(0, "00", "1"), (1, "01", "0")]);
        // h("0") = 1 + 4 = 5 > 2: replaced by 010, 01100, 01101, 01110.
        let run = transform_v(&u, &HSpec::Offset(4), &MachineTape::new(), 1, Expansion::Literal).unwrap();
        let dropped = bits("01101");
        let v = MachineTape::from_prefix_free(run.v.events().iter().filter(|e| e.program != dropped).cloned()).unwrap();
        let diff = u.omega() - v.omega();
        assert_eq!(diff - run.ledger.predicted_at(1), Dyadic::pow2_neg(5));
        assert!(!ledger_check(&u, &v, &run.ledger, 1).passed());
    }

    #[test]
    fn no_short_descriptions_leaves_first_term() {
        let u = tape(&[(0, "0", "1"), (0, "10", "0"), (1, "110", "11")]);
        let h = HSpec::Table([("1", 1), ("0", 1), ("11", 1)].into_iter().map(|(o, v)| (bits(o), v)).collect());
        let run = transform_v(&u, &h, &MachineTape::new(), 1, Expansion::Compact).unwrap();
        assert!(run.ledger.short.is_empty());
        assert_eq!(u.omega() - run.v.omega(), dy(1, 2));
    }

    #[test]
    fn w_is_the_average() {
        let u = tape(&[(0, "0", "")]);
        let v = tape(&[(0, "1", "")]);
        let w = combine_w(&u, &v);
        let domain: Vec<String> = w.domain().iter().map(|b| b.to_string()).collect();
        assert_eq!(domain, vec!["00", "11"]);
        assert_eq!(w.omega(), dy(1, 1));
        assert!(combine_w(&MachineTape::new(), &MachineTape::new()).is_empty());
    }
}
