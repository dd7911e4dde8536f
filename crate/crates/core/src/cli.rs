//! Command-line front end.
//!
//! Exit codes: 0 success, 1 a verified property failed, 2 usage or parse
//! error, 3 an input broke its contract (non-monotone stream, value out of
//! range, overlapping programs, ...).

use std::ffi::OsString;
use std::fmt::Display;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::diag_diff::{self, Bootstrap, DiffError, ThetaFamily};
use crate::diag_machine::{
    self, parse_opponent, run_layerwise_diag, DiagError, LayerwiseError, Opponent, OpponentError,
};
use crate::diag_machine::layerwise::IndexStream;
use crate::dyadic::Dyadic;
use crate::jsonl::{self, JsonlError};
use crate::kraft_chaitin::{real_to_machine, KcError};
use crate::machines::{self, MachineError, MachineTape};
use crate::omega_diff::{self, Expansion, HSpec, OmegaDiffError};
use crate::report::{Check, Report};
use crate::semimeasures::{self, SemiMeasureError, SemiMeasureTape};
use crate::streams::{self, LeftCeStream, StreamError};
use crate::trace::{Construction, Trace, TraceLine};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CONTRACT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "omega-sim", version, about = "Stage-by-stage simulation of constructions on left-c.e. reals")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a construction and write its JSON-lines trace.
    Simulate(SimulateArgs),
    /// Check a trace against the properties its construction guarantees.
    Verify(VerifyArgs),
    /// Build a prefix-free machine whose halting measure follows a left-c.e. stream.
    Kc {
        #[arg(long)]
        alpha: PathBuf,
        #[arg(long)]
        stages: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Machine-to-machine transformations.
    #[command(subcommand)]
    Transform(Transform),
    /// Interleave two machines: W(0p) = U(p), W(1p) = V(p).
    CombineW {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        v: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Re-encode a machine so every program has even length and the same weight.
    PadFootnote {
        #[arg(long)]
        u: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Universal machine by adjunction: component e gets the prefix 0^e 1.
    Adjoin {
        #[arg(required = true)]
        tapes: Vec<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Debug, Subcommand)]
enum Transform {
    /// Build V from U so that Omega_U - Omega_V is accounted for by the ledger.
    OmegaDiff(OmegaDiffArgs),
}

#[derive(Debug, Args)]
struct OmegaDiffArgs {
    #[arg(long)]
    u: PathBuf,
    /// Machine whose descriptions are copied behind the first one. Empty if omitted.
    #[arg(long)]
    q: Option<PathBuf>,
    /// `n+K`, `n-K`, `n`, or a JSON table file of output -> h.
    #[arg(long, default_value = "n+2")]
    h: String,
    #[arg(long, value_enum, default_value_t = Expansion::Compact)]
    expansion: Expansion,
    /// Last stage to process; defaults to the last stage of U and Q.
    #[arg(long)]
    stages: Option<u64>,
    /// Where to write V.
    #[arg(long)]
    out: PathBuf,
    /// Also write the per-stage trace here.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SimulateArgs {
    #[arg(value_enum)]
    construction: Construction,
    #[arg(long)]
    stages: u64,
    #[arg(long)]
    out: PathBuf,
    /// Opponent spec: copying, stalling, overshoot@N, random:SEED or a tape
    /// file. Repeat for the layerwise run.
    #[arg(long)]
    opponent: Vec<String>,
    /// Target stream script.
    #[arg(long)]
    beta: Option<PathBuf>,
    /// Index stream script selecting the opponent per stage (layerwise).
    #[arg(long)]
    index: Option<PathBuf>,
    /// Interval endpoints stream (layerwise); default xi_i = 1 - 2^-i.
    #[arg(long)]
    xi: Option<PathBuf>,
    /// Directory of theta stream scripts (diag-diff).
    #[arg(long)]
    theta_dir: Option<PathBuf>,
    /// Starting alpha: a dyadic value or a stream script (diag-diff).
    #[arg(long)]
    bootstrap: Option<String>,
    /// Stage of the bootstrap stream taken as alpha_0.
    #[arg(long, default_value_t = 0)]
    handoff: u64,
    /// Target stream script (semimeasure).
    #[arg(long)]
    alpha: Option<PathBuf>,
    /// Reference semi-measure tape (semimeasure).
    #[arg(long)]
    mu: Option<PathBuf>,
    #[arg(long, default_value_t = 8)]
    kmax: u32,
    #[arg(long)]
    u: Option<PathBuf>,
    #[arg(long)]
    q: Option<PathBuf>,
    #[arg(long, default_value = "n+2")]
    h: String,
    #[arg(long, value_enum, default_value_t = Expansion::Compact)]
    expansion: Expansion,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[arg(long)]
    trace: PathBuf,
    /// `claims`, `all` (claims plus a serialization round trip), or the name
    /// of a single check.
    #[arg(long, default_value = "claims")]
    suite: String,
    /// Number of test levels the semimeasure run used.
    #[arg(long, default_value_t = 8)]
    kmax: u32,
    /// Endpoint stream to check a layerwise trace against.
    #[arg(long)]
    xi: Option<PathBuf>,
}

/// Why a command stopped early, and the exit code it maps to.
#[derive(Debug)]
enum Failure {
    Usage(String),
    Contract(String),
}

impl Failure {
    fn usage(e: impl Display) -> Self {
        Failure::Usage(e.to_string())
    }

    fn contract(e: impl Display) -> Self {
        Failure::Contract(e.to_string())
    }

    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Contract(_) => EXIT_CONTRACT,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Contract(m) => m,
        }
    }
}

impl From<JsonlError> for Failure {
    fn from(e: JsonlError) -> Self {
        Failure::usage(e)
    }
}

impl From<StreamError> for Failure {
    fn from(e: StreamError) -> Self {
        match e {
            StreamError::Script(_) | StreamError::Empty => Failure::usage(e),
            _ => Failure::contract(e),
        }
    }
}

impl From<MachineError> for Failure {
    fn from(e: MachineError) -> Self {
        match e {
            MachineError::Io(_) => Failure::usage(e),
            _ => Failure::contract(e),
        }
    }
}

impl From<KcError> for Failure {
    fn from(e: KcError) -> Self {
        Failure::contract(e)
    }
}

impl From<OpponentError> for Failure {
    fn from(e: OpponentError) -> Self {
        match e {
            OpponentError::Unknown(_) => Failure::usage(e),
            OpponentError::Tape(m) => m.into(),
            OpponentError::Allocation(_) => Failure::contract(e),
        }
    }
}

impl From<DiagError> for Failure {
    fn from(e: DiagError) -> Self {
        match e {
            DiagError::NoStages => Failure::usage(e),
            _ => Failure::contract(e),
        }
    }
}

impl From<LayerwiseError> for Failure {
    fn from(e: LayerwiseError) -> Self {
        match e {
            LayerwiseError::Diag(d) => d.into(),
            LayerwiseError::Script(_) => Failure::usage(e),
            _ => Failure::contract(e),
        }
    }
}

impl From<DiffError> for Failure {
    fn from(e: DiffError) -> Self {
        match e {
            DiffError::Theta(s) => s.into(),
            DiffError::ThetaFile { path, source } => match Failure::from(source) {
                Failure::Usage(m) => Failure::Usage(format!("{}: {m}", path.display())),
                Failure::Contract(m) => Failure::Contract(format!("{}: {m}", path.display())),
            },
            DiffError::NoStages | DiffError::ThetaDir { .. } => Failure::usage(e),
            DiffError::NotRightCe(_) => Failure::contract(e),
        }
    }
}

impl From<SemiMeasureError> for Failure {
    fn from(e: SemiMeasureError) -> Self {
        match e {
            SemiMeasureError::Io(_) | SemiMeasureError::NoLevels => Failure::usage(e),
            _ => Failure::contract(e),
        }
    }
}

impl From<OmegaDiffError> for Failure {
    fn from(e: OmegaDiffError) -> Self {
        match e {
            OmegaDiffError::BadSpec(_) | OmegaDiffError::Table { .. } => Failure::usage(e),
            OmegaDiffError::Machine(m) => m.into(),
            _ => Failure::contract(e),
        }
    }
}

/// Parse `args` (including the program name) and run. Returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let outcome = match cli.command {
        Command::Simulate(a) => simulate(a).map(|()| EXIT_OK),
        Command::Verify(a) => verify(a),
        Command::Kc { alpha, stages, out } => kc(&alpha, stages, &out).map(|()| EXIT_OK),
        Command::Transform(Transform::OmegaDiff(a)) => transform_omega_diff(a).map(|()| EXIT_OK),
        Command::CombineW { u, v, out } => combine_w(&u, &v, &out).map(|()| EXIT_OK),
        Command::PadFootnote { u, out } => pad_footnote(&u, &out).map(|()| EXIT_OK),
        Command::Adjoin { tapes, out } => adjoin(&tapes, &out).map(|()| EXIT_OK),
    };
    outcome.unwrap_or_else(|f| {
        eprintln!("error: {}", f.message());
        f.code()
    })
}

fn require<'a, T>(value: &'a Option<T>, flag: &str, construction: &str) -> Result<&'a T, Failure> {
    value
        .as_ref()
        .ok_or_else(|| Failure::Usage(format!("{construction} needs --{flag}")))
}

fn read_left(path: &Path) -> Result<LeftCeStream, Failure> {
    Ok(streams::read_script_path(path)?.into_left()?)
}

fn read_tape(path: &Path) -> Result<MachineTape, Failure> {
    Ok(machines::read_tape_path(path)?)
}

fn beta_or_default(beta: &Option<PathBuf>, stages: u64) -> Result<LeftCeStream, Failure> {
    match beta {
        Some(p) => read_left(p),
        None => Ok(LeftCeStream::default_beta(stages)),
    }
}

/// `xi_i = 1 - 2^-i` for `i <= count`.
pub fn default_xi(count: u64) -> LeftCeStream {
    let values = (0..=count).map(|i| Dyadic::one() - Dyadic::pow2_neg(i)).collect();
    LeftCeStream::from_values(values).expect("increasing")
}

fn simulate(a: SimulateArgs) -> Result<(), Failure> {
    let trace = match a.construction {
        Construction::DiagMachine => {
            if a.opponent.len() > 1 {
                return Err(Failure::usage("diag-machine takes a single --opponent"));
            }
            let spec = a.opponent.first().map_or("copying", String::as_str);
            let mut opponent = parse_opponent(spec)?;
            let beta = beta_or_default(&a.beta, a.stages)?;
            let run = diag_machine::run_diag(opponent.as_mut(), &beta, a.stages)?;
            Trace::DiagMachine(run.records)
        }
        Construction::DiagMachineLayerwise => {
            let index_path = require(&a.index, "index", "diag-machine-layerwise")?;
            let index = IndexStream::read_path(index_path)?;
            let specs = if a.opponent.is_empty() {
                vec!["copying".to_string()]
            } else {
                a.opponent.clone()
            };
            let mut opponents = specs
                .iter()
                .map(|s| parse_opponent(s))
                .collect::<Result<Vec<Box<dyn Opponent>>, _>>()?;
            let xi = match &a.xi {
                Some(p) => read_left(p)?,
                None => default_xi(a.stages + 2),
            };
            let beta = beta_or_default(&a.beta, a.stages)?;
            Trace::DiagMachineLayerwise(run_layerwise_diag(&index, &mut opponents, &xi, &beta, a.stages)?)
        }
        Construction::DiagDiff => {
            let beta = read_left(require(&a.beta, "beta", "diag-diff")?)?;
            let thetas = ThetaFamily::read_dir(require(&a.theta_dir, "theta-dir", "diag-diff")?)?;
            let bootstrap = match &a.bootstrap {
                None => Bootstrap::default(),
                Some(spec) => match spec.parse::<Dyadic>() {
                    Ok(v) => Bootstrap::at(v),
                    Err(_) => Bootstrap {
                        gamma: read_left(Path::new(spec))?,
                        handoff: a.handoff,
                    },
                },
            };
            Trace::DiagDiff(diag_diff::run_diff(&beta, &thetas, &bootstrap, a.stages)?)
        }
        Construction::Semimeasure => {
            let alpha = read_left(require(&a.alpha, "alpha", "semimeasure")?)?;
            let mu = SemiMeasureTape::read_path(require(&a.mu, "mu", "semimeasure")?)?;
            let run = semimeasures::uniform_semimeasure_with_sum(&alpha, &mu, a.kmax, a.stages)?;
            Trace::Semimeasure(run.records)
        }
        Construction::OmegaDiff => {
            let u = read_tape(require(&a.u, "u", "omega-diff")?)?;
            let q = match &a.q {
                Some(p) => read_tape(p)?,
                None => MachineTape::new(),
            };
            let h = HSpec::parse(&a.h)?;
            let run = omega_diff::transform_v(&u, &h, &q, a.stages, a.expansion)?;
            Trace::OmegaDiff(run.records)
        }
    };
    let n = trace.len();
    trace.write_path(&a.out)?;
    println!("wrote {n} records to {}", a.out.display());
    Ok(())
}

fn suite_report(trace: &Trace, kmax: u32, xi: Option<&LeftCeStream>) -> Report {
    match trace {
        Trace::DiagMachine(r) => diag_machine::verify_diag_claims(r),
        Trace::DiagMachineLayerwise(r) => diag_machine::verify_layerwise(r, xi),
        Trace::DiagDiff(r) => diag_diff::verify_diff_claims(r),
        Trace::Semimeasure(r) => semimeasures::verify_semimeasure(r, kmax),
        Trace::OmegaDiff(r) => omega_diff::verify_omega_diff(r),
    }
}

/// Every line must re-serialize to a record that parses back identically.
fn round_trip(lines: &[TraceLine]) -> Check {
    let mut check = Check::new("round-trip");
    for line in lines {
        let stage = match line {
            TraceLine::DiagMachine(r) => r.stage,
            TraceLine::DiagMachineLayerwise(r) => r.stage,
            TraceLine::DiagDiff(r) => r.stage,
            TraceLine::Semimeasure(r) => r.stage,
            TraceLine::OmegaDiff(r) => r.stage,
        };
        let again = serde_json::to_string(line)
            .ok()
            .and_then(|text| serde_json::from_str::<TraceLine>(&text).ok());
        check.record(stage, again.as_ref() == Some(line), || "record does not round-trip".into());
    }
    check
}

fn verify(a: VerifyArgs) -> Result<i32, Failure> {
    let lines: Vec<TraceLine> = jsonl::read_path(&a.trace)?;
    let trace = Trace::from_lines(lines.clone())?;
    let xi = a.xi.as_deref().map(read_left).transpose()?;
    let mut report = suite_report(&trace, a.kmax, xi.as_ref());
    match a.suite.as_str() {
        "claims" => {}
        "all" => report.checks.push(round_trip(&lines)),
        name => {
            report.checks.retain(|c| c.name == name);
            if report.checks.is_empty() {
                let construction = lines[0].construction();
                return Err(Failure::Usage(format!(
                    "unknown suite {name:?} for a {construction} trace; use claims, all or a check name"
                )));
            }
        }
    }
    for check in &report.checks {
        println!("{check}");
    }
    if report.passed() {
        println!("PASS {} checks over {} stages", report.checks.len(), trace.len());
        Ok(EXIT_OK)
    } else {
        println!("FAIL {} of {} checks", report.failed().count(), report.checks.len());
        Ok(EXIT_FAILED)
    }
}

fn kc(alpha: &Path, stages: u64, out: &Path) -> Result<(), Failure> {
    let alpha = read_left(alpha)?;
    let tape = real_to_machine(&alpha, stages)?;
    machines::write_tape_path(out, &tape)?;
    println!("wrote {} programs, final measure {}", tape.len(), tape.omega());
    Ok(())
}

fn transform_omega_diff(a: OmegaDiffArgs) -> Result<(), Failure> {
    let u = read_tape(&a.u)?;
    let q = match &a.q {
        Some(p) => read_tape(p)?,
        None => MachineTape::new(),
    };
    let h = HSpec::parse(&a.h)?;
    let stages = a
        .stages
        .unwrap_or_else(|| u.last_stage().max(q.last_stage()).unwrap_or(0));
    let run = omega_diff::transform_v(&u, &h, &q, stages, a.expansion)?;
    machines::write_tape_path(&a.out, &run.v)?;
    if let Some(path) = &a.trace {
        Trace::OmegaDiff(run.records).write_path(path)?;
    }
    println!(
        "wrote {} programs; Omega_U - Omega_V = {}",
        run.v.len(),
        u.omega_at(stages) - run.v.omega_at(stages)
    );
    Ok(())
}

fn combine_w(u: &Path, v: &Path, out: &Path) -> Result<(), Failure> {
    let w = omega_diff::combine_w(&read_tape(u)?, &read_tape(v)?);
    machines::write_tape_path(out, &w)?;
    println!("wrote {} programs, measure {}", w.len(), w.omega());
    Ok(())
}

fn pad_footnote(u: &Path, out: &Path) -> Result<(), Failure> {
    let v = machines::footnote_pad(&read_tape(u)?);
    machines::write_tape_path(out, &v)?;
    println!("wrote {} programs, measure {}", v.len(), v.omega());
    Ok(())
}

fn adjoin(tapes: &[PathBuf], out: &Path) -> Result<(), Failure> {
    let components = tapes.iter().map(|p| read_tape(p)).collect::<Result<Vec<_>, _>>()?;
    let u = machines::adjoin_universal(&components);
    machines::write_tape_path(out, &u)?;
    println!("wrote {} programs, measure {}", u.len(), u.omega());
    Ok(())
}
