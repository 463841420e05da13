//! Command-line front end: state coherence, channel powers, figure tables,
//! parameter sweeps and the verification suites.

pub mod input;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use cohpower::channels::{ChannelKind, SpecType};
use cohpower::coherence::coherence;
use cohpower::figures::{self, format_value, Figure, FigureTable};
use cohpower::power::{self, Method, PowerResult, Witness};
use cohpower::verify::{self, Suite};
use cohpower::{Channel, ChannelSpec, Measure, Observable, SearchConfig, Vec3};
use rayon::prelude::*;
use serde_json::{json, Value};

use input::{build_channel, load_channel_spec, parse_direction, parse_observable, parse_state};

/// Environment variable capping the worker pool.
pub const THREADS_ENV: &str = "COHERENCE_POWER_THREADS";

#[derive(Debug)]
pub enum CliError {
    /// Malformed input; exit code 2.
    Spec(String),
    /// Valid input the library does not support; exit code 3.
    Unsupported(String),
    /// File system failure; exit code 4.
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Spec(_) => 2,
            CliError::Unsupported(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Spec(m) => write!(f, "invalid input: {m}"),
            CliError::Unsupported(m) => write!(f, "unsupported: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl From<cohpower::Error> for CliError {
    fn from(e: cohpower::Error) -> Self {
        use cohpower::Error as E;
        match e {
            E::Unsupported(m) => CliError::Unsupported(m),
            E::SearchDimension(_) | E::NotQubit(_) => CliError::Unsupported(e.to_string()),
            _ => CliError::Spec(e.to_string()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum PowerKind {
    Cohering,
    Decohering,
}

#[derive(Parser, Debug)]
#[command(name = "cohpower", version, about = "Coherence and cohering/decohering power of quantum channels")]
pub struct Cli {
    /// Output format; tables default to CSV when `text` is chosen.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Coherence of a state with respect to an observable's eigenbasis.
    Coherence {
        /// plus | minus | zero | one | bloch:x,y,z | mixed:x,y,z | ket:[[re,im],...]
        #[arg(long)]
        state: String,
        /// x | y | z | kx,ky,kz | x*z | matrix:[[re,im],...]
        #[arg(long, visible_alias = "k", default_value = "z")]
        obs: String,
        #[arg(long, default_value = "skew")]
        measure: Measure,
    },
    /// Cohering or decohering power of a channel.
    Power {
        /// hadamard | identity | cnot | inline JSON | path to a JSON file
        #[arg(long)]
        channel: String,
        #[arg(long, visible_alias = "k", default_value = "z")]
        obs: String,
        #[arg(long, default_value = "skew")]
        measure: Measure,
        #[arg(long, value_enum)]
        kind: PowerKind,
        /// Print the closed form, the numeric value and their gap.
        #[arg(long)]
        certify: bool,
        /// Coarse grid points per phase for the decohering search.
        #[arg(long)]
        grid: Option<usize>,
    },
    /// Tabulate a figure's curves as CSV.
    Figure {
        #[arg(value_parser = parse_figure)]
        name: Figure,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites; exits 1 if any check fails.
    Verify {
        #[arg(long, default_value = "all", value_parser = parse_suite)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Sweep a channel parameter and tabulate both powers.
    Sweep {
        /// Channel stages applied in order; repeat for a pipeline.
        #[arg(long, required = true)]
        channel: Vec<String>,
        /// Field substituted in every stage that uses it (p or theta).
        #[arg(long)]
        param: String,
        /// lo:hi:steps, steps ≥ 2, endpoints included.
        #[arg(long)]
        range: String,
        /// Directions (x | y | z | kx,ky,kz); repeatable.
        #[arg(long, default_value = "z")]
        k: Vec<String>,
        #[arg(long, default_value = "skew")]
        measure: Measure,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn parse_figure(s: &str) -> Result<Figure, String> {
    s.parse().map_err(|e: cohpower::Error| e.to_string())
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: cohpower::Error| e.to_string())
}

/// What a command prints and the process exit code.
#[derive(Debug, PartialEq)]
pub struct Outcome {
    pub stdout: String,
    pub exit: i32,
}

impl Outcome {
    fn ok(stdout: String) -> Self {
        Self { stdout, exit: 0 }
    }
}

pub fn run(cli: &Cli) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Coherence { state, obs, measure } => cmd_coherence(state, obs, *measure, cli.format),
        Command::Power {
            channel,
            obs,
            measure,
            kind,
            certify,
            grid,
        } => cmd_power(
            &PowerArgs {
                channel,
                obs,
                measure: *measure,
                kind: *kind,
                certify: *certify,
                grid: *grid,
            },
            cli.format,
        ),
        Command::Figure { name, out } => cmd_figure(*name, out.as_ref(), cli.format),
        Command::Verify { suite, seed } => cmd_verify(*suite, *seed, cli.format),
        Command::Sweep {
            channel,
            param,
            range,
            k,
            measure,
            out,
        } => cmd_sweep(
            &SweepArgs {
                channels: channel,
                param,
                range,
                directions: k,
                measure: *measure,
            },
            out.as_ref(),
            cli.format,
        ),
    }
}

fn fixed(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.9}")
}

fn cmd_coherence(state: &str, obs: &str, measure: Measure, format: Format) -> Result<Outcome, CliError> {
    let rho = parse_state(state)?;
    let k = parse_observable(obs)?.observable;
    let c = coherence(&rho, &k, measure)?;
    Ok(Outcome::ok(match format {
        Format::Text => format!("coherence: {}\nmeasure: {}\nbasis: {}\n", fixed(c.value), c.measure, c.basis_label),
        Format::Json => format!("{}\n", serde_json::to_string(&c).expect("serializable")),
        Format::Csv => format!("value,measure,basis\n{},{},{}\n", format_value(c.value), c.measure, c.basis_label),
    }))
}

struct PowerArgs<'a> {
    channel: &'a str,
    obs: &'a str,
    measure: Measure,
    kind: PowerKind,
    certify: bool,
    grid: Option<usize>,
}

/// Closed forms for named qubit families under the skew measure.
struct ClosedForms {
    value: f64,
    /// The two-branch bit-flip formula, reported alongside the exact value.
    piecewise: Option<f64>,
}

fn closed_form(ch: &Channel, k: &Vec3, kind: PowerKind) -> Result<Option<ClosedForms>, CliError> {
    let plain = |value| Some(ClosedForms { value, piecewise: None });
    let bitflip = |p: f64, axis_sq: f64| -> Result<Option<ClosedForms>, CliError> {
        let axis_sq = axis_sq.min(1.0);
        Ok(match kind {
            PowerKind::Cohering => plain(power::bitflip_cohering_closed(p, axis_sq)?),
            PowerKind::Decohering => Some(ClosedForms {
                value: power::bitflip_decohering_exact(p, axis_sq)?,
                piecewise: Some(power::bitflip_decohering_closed(p, axis_sq)?),
            }),
        })
    };
    Ok(match ch.kind() {
        ChannelKind::Identity => plain(0.0),
        // cohering and decohering powers coincide for unitaries
        ChannelKind::Rotation { axis, theta } => plain(power::unitary_cohering_closed(axis, *theta, k)?),
        ChannelKind::Depolarizing { p } => match kind {
            PowerKind::Cohering => plain(0.0),
            PowerKind::Decohering => plain(power::depolarizing_decohering_closed(*p)?),
        },
        ChannelKind::BitFlip { p } => bitflip(*p, k[0] * k[0])?,
        // the phase flip is the bit flip with x̂ and ẑ exchanged
        ChannelKind::PhaseFlip { p } => bitflip(*p, k[2] * k[2])?,
        _ => None,
    })
}

fn search_for(dim: usize, grid: Option<usize>) -> SearchConfig {
    let base = if dim == 2 { SearchConfig::circle() } else { SearchConfig::torus() };
    match grid {
        Some(n) => base.with_points(n),
        None => base,
    }
}

fn numeric_power(ch: &Channel, k: &Observable, args: &PowerArgs) -> Result<PowerResult, CliError> {
    Ok(match args.kind {
        PowerKind::Cohering => power::cohering_power(ch, k, args.measure)?,
        PowerKind::Decohering => power::decohering_power(ch, k, args.measure, &search_for(k.dim(), args.grid))?,
    })
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::BasisIndex(i) => format!("basis state {i}"),
        Witness::Phases(p) => format!("phases [{}]", p.iter().map(|x| fixed(*x)).collect::<Vec<_>>().join(", ")),
        Witness::InputBloch(m) => format!("input bloch ({}, {}, {})", fixed(m[0]), fixed(m[1]), fixed(m[2])),
        Witness::None => "none".into(),
    }
}

fn method_name(m: Method) -> &'static str {
    match m {
        Method::ClosedForm => "closed_form",
        Method::DiscreteMax => "discrete_max",
        Method::NumericMin => "numeric_min",
    }
}

fn cmd_power(args: &PowerArgs, format: Format) -> Result<Outcome, CliError> {
    let spec = load_channel_spec(args.channel)?;
    let ch = build_channel(&spec)?;
    let parsed = parse_observable(args.obs)?;
    let k = &parsed.observable;
    if k.dim() != ch.dim() {
        return Err(CliError::Spec(format!(
            "obs: dimension {} does not match the channel dimension {}",
            k.dim(),
            ch.dim()
        )));
    }
    let closed = match (parsed.direction, args.measure) {
        (Some(dir), Measure::Skew) if ch.dim() == 2 => closed_form(&ch, &dir, args.kind)?,
        _ => None,
    };
    let numeric = if closed.is_none() || args.certify {
        Some(numeric_power(&ch, k, args)?)
    } else {
        None
    };
    let reported = match (&closed, &numeric) {
        (Some(c), _) => PowerResult::closed_form(c.value),
        (None, Some(n)) => n.clone(),
        (None, None) => unreachable!("numeric path runs when no closed form exists"),
    };
    let kind = match args.kind {
        PowerKind::Cohering => "cohering",
        PowerKind::Decohering => "decohering",
    };
    let gap = match (&closed, &numeric) {
        (Some(c), Some(n)) => Some((c.value - n.value).abs()),
        _ => None,
    };

    let stdout = match format {
        Format::Text => {
            let mut s = String::new();
            writeln!(s, "{kind} power: {}", fixed(reported.value)).unwrap();
            writeln!(s, "measure: {}", args.measure).unwrap();
            writeln!(s, "basis: {}", k.label()).unwrap();
            writeln!(s, "channel: {}", ch.label()).unwrap();
            writeln!(s, "method: {}", method_name(reported.method)).unwrap();
            let witness = numeric.as_ref().map(|n| &n.witness).unwrap_or(&reported.witness);
            writeln!(s, "witness: {}", witness_text(witness)).unwrap();
            if args.certify {
                match &closed {
                    Some(c) => {
                        writeln!(s, "closed form: {}", fixed(c.value)).unwrap();
                        if let Some(pw) = c.piecewise {
                            writeln!(s, "two-branch formula: {}", fixed(pw)).unwrap();
                        }
                    }
                    None => writeln!(s, "closed form: none").unwrap(),
                }
                if let Some(n) = &numeric {
                    writeln!(s, "numeric: {}", fixed(n.value)).unwrap();
                }
                if let Some(g) = gap {
                    writeln!(s, "gap: {g:.3e}").unwrap();
                }
            }
            s
        }
        Format::Json | Format::Csv => {
            let numeric_json = numeric.as_ref().map(|n| {
                json!({"value": n.value, "method": method_name(n.method), "witness": n.witness})
            });
            let doc = json!({
                "kind": kind,
                "value": reported.value,
                "measure": args.measure,
                "basis": k.label(),
                "channel": ch.label(),
                "method": method_name(reported.method),
                "closed_form": closed.as_ref().map(|c| c.value),
                "two_branch_formula": closed.as_ref().and_then(|c| c.piecewise),
                "numeric": numeric_json,
                "gap": gap,
            });
            if format == Format::Json {
                format!("{doc}\n")
            } else {
                let opt = |x: Option<f64>| x.map(format_value).unwrap_or_default();
                format!(
                    "kind,measure,basis,value,closed_form,numeric,gap\n{kind},{},{},{},{},{},{}\n",
                    args.measure,
                    k.label(),
                    format_value(reported.value),
                    opt(closed.as_ref().map(|c| c.value)),
                    opt(numeric.as_ref().map(|n| n.value)),
                    opt(gap)
                )
            }
        }
    };
    Ok(Outcome::ok(stdout))
}

fn table_json(header: &[&str], rows: &[Vec<f64>]) -> String {
    let objects: Vec<Value> = rows
        .iter()
        .map(|row| {
            let map = header.iter().zip(row).map(|(h, v)| (h.to_string(), json!(v))).collect();
            Value::Object(map)
        })
        .collect();
    format!("{}\n", Value::Array(objects))
}

fn write_or_print(text: String, out: Option<&PathBuf>) -> Result<Outcome, CliError> {
    match out {
        Some(path) => {
            std::fs::write(path, &text).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(Outcome::ok(String::new()))
        }
        None => Ok(Outcome::ok(text)),
    }
}

fn render_table(table: &FigureTable, format: Format) -> String {
    match format {
        Format::Json => {
            let rows: Vec<Vec<f64>> = table.rows.iter().map(|r| r.to_vec()).collect();
            table_json(&table.header, &rows)
        }
        Format::Text | Format::Csv => table.to_csv(),
    }
}

fn cmd_figure(name: Figure, out: Option<&PathBuf>, format: Format) -> Result<Outcome, CliError> {
    let table = figures::table(name)?;
    write_or_print(render_table(&table, format), out)
}

fn cmd_verify(suite: Suite, seed: u64, format: Format) -> Result<Outcome, CliError> {
    let checks = verify::run(suite, seed)?;
    let failed = checks.iter().filter(|c| !c.passed).count();
    let stdout = match format {
        Format::Text => {
            let mut s = String::new();
            for c in &checks {
                writeln!(s, "{c}").unwrap();
            }
            writeln!(s, "{} checks, {} failed", checks.len(), failed).unwrap();
            s
        }
        Format::Json => format!("{}\n", serde_json::to_string(&checks).expect("serializable")),
        Format::Csv => {
            let mut s = String::from("name,max_deviation,tolerance,passed\n");
            for c in &checks {
                writeln!(s, "\"{}\",{},{},{}", c.name, format_value(c.max_deviation), format_value(c.tolerance), c.passed)
                    .unwrap();
            }
            s
        }
    };
    Ok(Outcome {
        stdout,
        exit: if failed == 0 { 0 } else { 1 },
    })
}

struct SweepArgs<'a> {
    channels: &'a [String],
    param: &'a str,
    range: &'a str,
    directions: &'a [String],
    measure: Measure,
}

/// `(lo, hi, steps)` from `lo:hi:steps`.
pub fn parse_range(text: &str) -> Result<(f64, f64, usize), CliError> {
    let parts: Vec<&str> = text.split(':').collect();
    let bad = |why: &str| CliError::Spec(format!("range: {why} in {text:?}, expected lo:hi:steps"));
    if parts.len() != 3 {
        return Err(bad("three fields needed"));
    }
    let lo: f64 = parts[0].trim().parse().map_err(|_| bad("lo is not a number"))?;
    let hi: f64 = parts[1].trim().parse().map_err(|_| bad("hi is not a number"))?;
    let steps: usize = parts[2].trim().parse().map_err(|_| bad("steps is not an integer"))?;
    if steps < 2 {
        return Err(bad("steps must be at least 2"));
    }
    if !lo.is_finite() || !hi.is_finite() {
        return Err(bad("bounds must be finite"));
    }
    Ok((lo, hi, steps))
}

/// Copy of `spec` with `param` set wherever the stage type uses it;
/// returns how many fields were set.
fn substitute(spec: &ChannelSpec, param: &str, value: f64) -> (ChannelSpec, usize) {
    let mut out = spec.clone();
    let mut hits = 0;
    match (param, spec.kind) {
        ("p", SpecType::Depolarizing | SpecType::Bitflip | SpecType::Phaseflip) => {
            out.p = Some(value);
            hits += 1;
        }
        ("theta", SpecType::Unitary) => {
            out.theta = Some(value);
            hits += 1;
        }
        (_, SpecType::Tensor) => {
            if let Some(factors) = &spec.factors {
                let mut new = Vec::with_capacity(factors.len());
                for f in factors {
                    let (g, h) = substitute(f, param, value);
                    hits += h;
                    new.push(g);
                }
                out.factors = Some(new);
            }
        }
        _ => {}
    }
    (out, hits)
}

fn build_pipeline(specs: &[ChannelSpec], param: &str, value: f64) -> Result<Channel, CliError> {
    let mut stages = specs.iter().map(|s| build_channel(&substitute(s, param, value).0));
    let first = stages.next().expect("at least one stage")?;
    stages.try_fold(first, |acc, next| Ok(acc.then(&next?)?))
}

fn cmd_sweep(args: &SweepArgs, out: Option<&PathBuf>, format: Format) -> Result<Outcome, CliError> {
    if !matches!(args.param, "p" | "theta") {
        return Err(CliError::Spec(format!("param: {:?} is not sweepable, use p or theta", args.param)));
    }
    let (lo, hi, steps) = parse_range(args.range)?;
    let specs = args
        .channels
        .iter()
        .map(|c| load_channel_spec(c))
        .collect::<Result<Vec<_>, _>>()?;
    let uses: usize = specs.iter().map(|s| substitute(s, args.param, 0.0).1).sum();
    if uses == 0 {
        return Err(CliError::Spec(format!("param: no channel stage uses {:?}", args.param)));
    }
    let dirs = args
        .directions
        .iter()
        .map(|d| parse_direction("k", d))
        .collect::<Result<Vec<_>, _>>()?;

    let values: Vec<f64> = (0..steps)
        .map(|i| if i + 1 == steps { hi } else { lo + (hi - lo) * i as f64 / (steps - 1) as f64 })
        .collect();
    // validate the whole pipeline once before fanning out
    let probe = build_pipeline(&specs, args.param, values[0])?;
    if probe.dim() != 2 {
        return Err(CliError::Unsupported(format!(
            "sweeps tabulate qubit directions, the pipeline has dimension {}",
            probe.dim()
        )));
    }
    let grid: Vec<(f64, Vec3)> = values.iter().flat_map(|v| dirs.iter().map(move |k| (*v, *k))).collect();
    let rows = grid
        .par_iter()
        .map(|(value, k)| {
            let ch = build_pipeline(&specs, args.param, *value)?;
            let obs = Observable::pauli_axis(k)?;
            let c = power::cohering_power(&ch, &obs, args.measure)?.value;
            let d = power::decohering_power(&ch, &obs, args.measure, &SearchConfig::circle())?.value;
            Ok(vec![*value, k[0], k[1], k[2], c, d])
        })
        .collect::<Result<Vec<_>, CliError>>()?;

    let header = ["param", "kx", "ky", "kz", "cohering_power", "decohering_power"];
    let text = match format {
        Format::Json => table_json(&header, &rows),
        Format::Text | Format::Csv => {
            let mut s = header.join(",");
            s.push('\n');
            for row in &rows {
                s.push_str(&row.iter().map(|v| format_value(*v)).collect::<Vec<_>>().join(","));
                s.push('\n');
            }
            s
        }
    };
    write_or_print(text, out)
}

/// Caps the global worker pool from [`THREADS_ENV`] when it is set.
pub fn configure_threads(value: Option<&str>) -> Result<(), CliError> {
    let Some(raw) = value else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|n| *n > 0)
        .ok_or_else(|| CliError::Spec(format!("{THREADS_ENV}: expected a positive integer, got {raw:?}")))?;
    // a second call in the same process keeps the first pool
    let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    Ok(())
}
