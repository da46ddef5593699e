//! Command-line pipeline around the schwinger library.
//!
//! Every subcommand reads and writes the JSON report formats from
//! `schwinger::report`, so the output of one stage feeds the next:
//! `simulate` produces a state dump, `postselect` turns it into a sector
//! dump, and `measure`/`entangle` consume either. All output is
//! byte-stable: sorted keys, fixed float formatting, deterministic
//! sampling.

use std::fs;
use std::io::Read;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use schwinger::accept;
use schwinger::entangle;
use schwinger::focksim::{
    alternating_relabel, casimir_postselect, evolve_vacuum, measure_spins, FockError, FockVector,
    MeasureSetting,
};
use schwinger::hgraph::{builtin, parse_hgraph};
use schwinger::nullifiers::{spin_nullifiers, verify_nullifiers};
use schwinger::report::{
    entanglement_report_json, measurement_report, nullifier_report, parse_sector_dump,
    parse_state_dump, sector_dump_json, state_dump_json, to_json_string, NullifierVerification,
    SectorDump, StateDump,
};
use schwinger::{HGraph, SpinPairing};

const DEFAULT_R: f64 = 0.1;
const DEFAULT_CUTOFF: usize = 10;
const DEFAULT_R_GRID: [f64; 3] = [0.05, 0.1, 0.2];

#[derive(Parser)]
#[command(
    name = "schwinger",
    version,
    about = "Spin nullifiers, squeezed-state simulation, and entanglement reports \
             for multimode pair-creation graphs"
)]
struct RunConfig {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Derive the exact and asymptotic spin nullifiers of a graph
    Nullifiers(NullifiersArgs),
    /// Squeeze the vacuum and dump the truncated Fock state
    Simulate(SimulateArgs),
    /// Project a state dump onto fixed per-pair spin magnitudes
    Postselect(PostselectArgs),
    /// Photon statistics of rotated pair measurements on a dumped state
    Measure(MeasureArgs),
    /// Bipartition spectra and multipartite classification of a sector dump
    Entangle(EntangleArgs),
    /// Run the full verification suite and emit the pass/fail table
    Reproduce(ReproduceArgs),
}

#[derive(Args)]
struct NullifiersArgs {
    /// Graph source: a JSON file path or builtin:NAME
    #[arg(long)]
    graph: String,
    /// Spin pairing as 1-based mode pairs, e.g. 1:5,2:6,3:7,4:8
    #[arg(long)]
    pairing: Option<String>,
    /// Squeezing values for the numeric verification table
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    r_grid: Option<Vec<f64>>,
    /// Photon cutoff for verification (default: adapted to the largest r)
    #[arg(long)]
    cutoff: Option<usize>,
    /// Also print each exact nullifier in the swapped-and-phased relabeling
    #[arg(long)]
    relabel: bool,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SimulateArgs {
    /// Graph source: a JSON file path or builtin:NAME
    #[arg(long)]
    graph: String,
    /// Spin pairing as 1-based mode pairs, stored in the dump for later stages
    #[arg(long)]
    pairing: Option<String>,
    /// Squeezing parameter
    #[arg(long, default_value_t = DEFAULT_R)]
    r: f64,
    /// Total-photon cutoff (even, at least 2)
    #[arg(long, default_value_t = DEFAULT_CUTOFF)]
    cutoff: usize,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PostselectArgs {
    /// Input state dump (stdin when absent)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Per-pair spin magnitudes, e.g. 0.5,0.5,0.5,0.5
    #[arg(long)]
    j: String,
    /// Override the pairing stored in the dump (1-based, e.g. 1:3,2:4)
    #[arg(long)]
    pairing: Option<String>,
    /// Emit the sector in the relabeled convention (every second pair
    /// swapped and phase-shifted)
    #[arg(long)]
    relabel: bool,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct MeasureArgs {
    /// Input state or sector dump (stdin when absent)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Polar angle per pair, repeatable (defaults to 0 for every pair)
    #[arg(long)]
    theta: Vec<f64>,
    /// Azimuthal angle per pair, repeatable (defaults to 0 for every pair)
    #[arg(long)]
    phi: Vec<f64>,
    /// Number of outcome samples to draw from the distribution
    #[arg(long, default_value_t = 0)]
    samples: usize,
    /// Seed for the sample draws
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct EntangleArgs {
    /// Input sector dump (stdin when absent)
    #[arg(long = "in")]
    input: Option<PathBuf>,
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReproduceArgs {
    /// Output file (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
}

struct CliError(String);

impl CliError {
    fn new(message: impl Into<String>) -> Self {
        CliError(message.into())
    }
}

fn main() -> ExitCode {
    let config = match RunConfig::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(config) {
        Ok(code) => ExitCode::from(code),
        Err(CliError(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(config: RunConfig) -> Result<u8, CliError> {
    match config.command {
        Command::Nullifiers(args) => cmd_nullifiers(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Postselect(args) => cmd_postselect(args),
        Command::Measure(args) => cmd_measure(args),
        Command::Entangle(args) => cmd_entangle(args),
        Command::Reproduce(args) => cmd_reproduce(args),
    }
}

/// Resolves --graph: either builtin:NAME or a JSON file.
fn load_graph(source: &str) -> Result<(HGraph, Option<SpinPairing>, String), CliError> {
    if let Some(name) = source.strip_prefix("builtin:") {
        let (g, p) = builtin(name).map_err(|e| CliError::new(format!("--graph: {e}")))?;
        return Ok((g, Some(p), name.to_string()));
    }
    let text = fs::read_to_string(source)
        .map_err(|e| CliError::new(format!("--graph: cannot read {source}: {e}")))?;
    let (g, p) = parse_hgraph(&text).map_err(|e| CliError::new(format!("--graph: {e}")))?;
    Ok((g, p, source.to_string()))
}

/// Parses a pairing flag of the form 1:5,2:6,3:7,4:8 (1-based modes).
fn parse_pairing_flag(text: &str) -> Result<SpinPairing, CliError> {
    let mut pairs = Vec::new();
    for entry in text.split(',') {
        let (a, b) = entry
            .split_once(':')
            .ok_or_else(|| CliError::new(format!("--pairing: entry {entry:?} is not a:b")))?;
        let parse = |s: &str| -> Result<usize, CliError> {
            let v: usize = s
                .trim()
                .parse()
                .map_err(|_| CliError::new(format!("--pairing: {s:?} is not a mode number")))?;
            if v == 0 {
                return Err(CliError::new("--pairing: modes are numbered from 1"));
            }
            Ok(v - 1)
        };
        pairs.push((parse(a)?, parse(b)?));
    }
    SpinPairing::new(pairs).map_err(|e| CliError::new(format!("--pairing: {e}")))
}

/// Parses --j: comma-separated half-integers, returned as doubled values.
fn parse_j_flag(text: &str) -> Result<Vec<u8>, CliError> {
    text.split(',')
        .map(|entry| {
            let v: f64 = entry
                .trim()
                .parse()
                .map_err(|_| CliError::new(format!("--j: {entry:?} is not a number")))?;
            let doubled = (2.0 * v).round();
            if (2.0 * v - doubled).abs() > 1e-9 || !(0.0..=255.0).contains(&doubled) {
                return Err(CliError::new(format!(
                    "--j: {entry} is not a half-integer in range"
                )));
            }
            Ok(doubled as u8)
        })
        .collect()
}

fn read_input(path: &Option<PathBuf>) -> Result<String, CliError> {
    match path {
        Some(p) => fs::read_to_string(p)
            .map_err(|e| CliError::new(format!("--in: cannot read {}: {e}", p.display()))),
        None => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::new(format!("stdin: {e}")))?;
            Ok(text)
        }
    }
}

fn write_output(path: &Option<PathBuf>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, text)
            .map_err(|e| CliError::new(format!("--out: cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

/// Smallest verification cutoff that keeps the truncation tail under the
/// tolerance for the builtin spectra at the given squeezing.
fn default_cutoff(r_max: f64) -> usize {
    if r_max <= 0.05 {
        8
    } else if r_max <= 0.1 {
        12
    } else if r_max <= 0.2 {
        16
    } else {
        20
    }
}

fn cmd_nullifiers(args: NullifiersArgs) -> Result<u8, CliError> {
    let (g, embedded, label) = load_graph(&args.graph)?;
    let pairing = match &args.pairing {
        Some(text) => parse_pairing_flag(text)?,
        None => embedded.ok_or_else(|| {
            CliError::new("--pairing: required when the graph source does not embed one")
        })?,
    };
    for &(a, b) in pairing.pairs() {
        let high = a.max(b);
        if high >= g.n_modes() {
            return Err(CliError::new(format!(
                "--pairing: mode {} exceeds the graph's {} modes",
                high + 1,
                g.n_modes()
            )));
        }
    }
    let grid = args.r_grid.clone().unwrap_or_else(|| DEFAULT_R_GRID.to_vec());
    for &r in &grid {
        if r < 0.0 {
            return Err(CliError::new(format!("--r-grid: {r} is negative")));
        }
    }
    let set = spin_nullifiers(&g, &pairing);
    let max_r = grid.iter().cloned().fold(0.0f64, f64::max);
    let cutoff = match args.cutoff {
        Some(c) => validated_cutoff(c)?,
        None => default_cutoff(max_r),
    };
    let ops: Vec<_> = set
        .exact
        .iter()
        .map(|n| n.op.to_float())
        .chain(set.asymptotic.iter().map(|n| n.op.clone()))
        .collect();
    // Verification runs one grid point at a time so a single r whose tail
    // exceeds the tolerance is skipped (with a warning) instead of sinking
    // the whole report.
    let mut kept_r = Vec::new();
    let mut rows_per_op: Vec<Vec<schwinger::nullifiers::VerifyRow>> =
        vec![Vec::new(); ops.len()];
    for &r in &grid {
        match verify_nullifiers(&ops, &g, &[r], cutoff) {
            Ok(tables) => {
                kept_r.push(r);
                for (acc, mut rows) in rows_per_op.iter_mut().zip(tables) {
                    acc.append(&mut rows);
                }
            }
            Err(FockError::CutoffInsufficient { deficit, limit }) => {
                eprintln!(
                    "warning: r={r} skipped; the truncation tail {deficit:.2e} exceeds \
                     {limit:.0e} at cutoff {cutoff}; raise --cutoff to include it"
                );
            }
            Err(e) => return Err(CliError::new(format!("verification at r={r}: {e}"))),
        }
    }
    let n_exact = set.exact.len();
    let verification = NullifierVerification {
        r_grid: kept_r,
        cutoff,
        exact_rows: rows_per_op[..n_exact].to_vec(),
        asymptotic_rows: rows_per_op[n_exact..].to_vec(),
    };
    let doc = nullifier_report(&label, &g, &set, args.relabel, Some(&verification));
    write_output(&args.out, &to_json_string(&doc))?;
    Ok(0)
}

fn validated_cutoff(c: usize) -> Result<usize, CliError> {
    if c < 2 || c % 2 != 0 {
        return Err(CliError::new(format!(
            "--cutoff: {c} must be an even number of at least 2"
        )));
    }
    Ok(c)
}

fn cmd_simulate(args: SimulateArgs) -> Result<u8, CliError> {
    let (g, embedded, label) = load_graph(&args.graph)?;
    let pairing = match &args.pairing {
        Some(text) => Some(parse_pairing_flag(text)?),
        None => embedded,
    };
    if args.r < 0.0 {
        return Err(CliError::new(format!("--r: {} is negative", args.r)));
    }
    let cutoff = validated_cutoff(args.cutoff)?;
    let state = evolve_vacuum(&g, args.r, cutoff)
        .map_err(|e| CliError::new(format!("evolution: {e}")))?;
    let dump = StateDump {
        graph_label: label,
        r: args.r,
        cutoff,
        pairing,
        state,
    };
    write_output(&args.out, &to_json_string(&state_dump_json(&dump)))?;
    Ok(0)
}

fn cmd_postselect(args: PostselectArgs) -> Result<u8, CliError> {
    let text = read_input(&args.input)?;
    let dump = parse_state_dump(&text).map_err(|e| CliError::new(format!("--in: {e}")))?;
    let pairing = match &args.pairing {
        Some(flag) => parse_pairing_flag(flag)?,
        None => dump.pairing.clone().ok_or_else(|| {
            CliError::new("--pairing: the state dump carries no pairing; provide one")
        })?,
    };
    let j2 = parse_j_flag(&args.j)?;
    let mut sector = casimir_postselect(&dump.state, &pairing, &j2)
        .map_err(|e| CliError::new(format!("post-selection: {e}")))?;
    if args.relabel {
        sector = alternating_relabel(&sector);
    }
    let j_text = args.j.replace(' ', "");
    let state_id = format!("{}|r={}|j=[{}]", dump.graph_label, dump.r, j_text);
    let out = SectorDump {
        state_id,
        state: sector,
    };
    write_output(&args.out, &to_json_string(&sector_dump_json(&out)))?;
    Ok(0)
}

/// Loads a state dump or a sector dump, returning the Fock vector, the
/// pairing to measure along, and an identifying label.
fn load_any_state(text: &str) -> Result<(FockVector, SpinPairing, String), CliError> {
    let doc: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| CliError::new(format!("--in: not valid JSON: {e}")))?;
    match doc.get("kind").and_then(serde_json::Value::as_str) {
        Some("state") => {
            let dump = parse_state_dump(text).map_err(|e| CliError::new(format!("--in: {e}")))?;
            let pairing = dump.pairing.clone().ok_or_else(|| {
                CliError::new("--in: the state dump carries no pairing to measure along")
            })?;
            let label = format!("{}|r={}", dump.graph_label, dump.r);
            Ok((dump.state, pairing, label))
        }
        Some("sector") => {
            let dump = parse_sector_dump(text).map_err(|e| CliError::new(format!("--in: {e}")))?;
            let pairing = dump.state.pairing().clone();
            Ok((dump.state.to_fock(), pairing, dump.state_id))
        }
        other => Err(CliError::new(format!(
            "--in: expected a state or sector dump, found kind {other:?}"
        ))),
    }
}

fn cmd_measure(args: MeasureArgs) -> Result<u8, CliError> {
    let text = read_input(&args.input)?;
    let (state, pairing, state_id) = load_any_state(&text)?;
    let n_pairs = pairing.pairs().len();
    let angles = |name: &str, given: &[f64]| -> Result<Vec<f64>, CliError> {
        if given.is_empty() {
            Ok(vec![0.0; n_pairs])
        } else if given.len() == n_pairs {
            Ok(given.to_vec())
        } else {
            Err(CliError::new(format!(
                "--{name}: got {} values for {n_pairs} pairs",
                given.len()
            )))
        }
    };
    let thetas = angles("theta", &args.theta)?;
    let phis = angles("phi", &args.phi)?;
    let settings: Vec<MeasureSetting> = pairing
        .pairs()
        .iter()
        .zip(thetas.iter().zip(&phis))
        .map(|(&pair, (&theta, &phi))| MeasureSetting { pair, theta, phi })
        .collect();
    let table =
        measure_spins(&state, &settings).map_err(|e| CliError::new(format!("measure: {e}")))?;
    let samples = if args.samples > 0 {
        Some(draw_samples(&table.outcomes, args.samples, args.seed))
    } else {
        None
    };
    let doc = measurement_report(
        &state_id,
        &settings,
        &table,
        samples.as_ref().map(|s| (args.seed, s.as_slice())),
    );
    write_output(&args.out, &to_json_string(&doc))?;
    Ok(0)
}

/// Inverse-CDF draws over the (deterministically ordered) outcome table.
fn draw_samples(
    outcomes: &std::collections::BTreeMap<Vec<u8>, f64>,
    n: usize,
    seed: u64,
) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let u: f64 = rng.gen();
            let mut acc = 0.0;
            for (key, p) in outcomes {
                acc += p;
                if u < acc {
                    return key.clone();
                }
            }
            outcomes.keys().next_back().cloned().unwrap_or_default()
        })
        .collect()
}

fn cmd_entangle(args: EntangleArgs) -> Result<u8, CliError> {
    let text = read_input(&args.input)?;
    let dump = parse_sector_dump(&text).map_err(|e| CliError::new(format!("--in: {e}")))?;
    let rep = entangle::report(&dump.state_id, &dump.state)
        .map_err(|e| CliError::new(format!("entangle: {e}")))?;
    write_output(&args.out, &to_json_string(&entanglement_report_json(&rep)))?;
    Ok(0)
}

fn cmd_reproduce(args: ReproduceArgs) -> Result<u8, CliError> {
    let (doc, all_passed) = accept::reproduce_report();
    write_output(&args.out, &to_json_string(&doc))?;
    Ok(if all_passed { 0 } else { 3 })
}
