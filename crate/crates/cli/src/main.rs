use std::fs::{self, File};
use std::io::{self as stdio, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use coldec::algorithms::{dj_run, grover_run, LabeledState, BUILTIN_ORACLES};
use coldec::basis::MAX_BASIS_QUBITS;
use coldec::coherent::q_function;
use coldec::io;
use coldec::metrics::{dephasing_fidelity, p_jm, t1_rate, t2_rate, trace_metrics, JmEntry};
use coldec::statevector::MAX_QUBITS;
use coldec::{GroverConfig, OracleSpec, QMesh, StateVector, SymmetrizedBasis};

/// Worker count for the parallel sections; defaults to all cores.
const THREADS_ENV: &str = "COLDEC_THREADS";

#[derive(Parser)]
#[command(name = "coldec", version, about = "Collective decoherence scoring for quantum algorithm runs")]
struct Cli {
    /// Reserved. Nothing in the tool is stochastic.
    #[arg(long, global = true)]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Deutsch-Jozsa run with per-step T1/T2 rates.
    Dj(DjArgs),
    /// Grover search run with per-step T1/T2 rates.
    Grover(GroverArgs),
    /// Symmetrized basis as a Clebsch-Gordan table (CSV).
    Basis(BasisArgs),
    /// Q(θ, φ) map of a state (CSV, optional PGM image).
    Qfunc(QfuncArgs),
    /// T1/T2 report for a state file (JSON).
    Analyze(AnalyzeArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct TraceOut {
    /// Trace path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include P(j, m) for every step (JSON only).
    #[arg(long)]
    pjm: bool,
    /// Defaults to csv for a .csv path, json otherwise.
    #[arg(long, value_enum)]
    format: Option<Format>,
}

#[derive(Args)]
struct DjArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    /// Built-in name (parity, parity-low4, constant0, constant1) or a file
    /// holding a 2^n-character 0/1 truth table.
    #[arg(long)]
    oracle: String,
    #[arg(long, default_value_t = 0)]
    initial: usize,
    #[command(flatten)]
    out: TraceOut,
}

#[derive(Args)]
struct GroverArgs {
    #[arg(long, default_value_t = 8)]
    n: usize,
    #[arg(long)]
    target: usize,
    #[arg(long, default_value_t = 0)]
    start: usize,
    /// Defaults to round((π/4)·√(2^n)).
    #[arg(long)]
    iters: Option<usize>,
    #[command(flatten)]
    out: TraceOut,
}

#[derive(Args)]
struct BasisArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["state", "n"]))]
struct QfuncArgs {
    /// State file: 2^n lines of "re im".
    #[arg(long)]
    state: Option<PathBuf>,
    /// Build the state instead: H|0…0⟩ unless --cat or --dicke is given.
    #[arg(long)]
    n: Option<usize>,
    /// (|0…0⟩ + |1…1⟩)/√2.
    #[arg(long, requires = "n", conflicts_with = "dicke")]
    cat: bool,
    /// Symmetric Dicke state with this m (may be a half-integer).
    #[arg(long, requires = "n", allow_negative_numbers = true)]
    dicke: Option<f64>,
    #[arg(long, default_value_t = 181)]
    theta_samples: usize,
    #[arg(long, default_value_t = 361)]
    phi_samples: usize,
    /// CSV path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a grayscale PGM image.
    #[arg(long)]
    pgm: Option<PathBuf>,
    /// Scale the image so the grid maximum is black.
    #[arg(long, requires = "pgm")]
    normalize: bool,
}

#[derive(Args)]
struct AnalyzeArgs {
    #[arg(long)]
    state: PathBuf,
    #[arg(long)]
    pjm: bool,
    /// Also report the dephasing fidelity at this Γ₀t.
    #[arg(long)]
    fidelity_t: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Errors that exit with status 2.
#[derive(Debug)]
struct UsageError(String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(UsageError(msg.into()).into())
}

fn sink(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(stdio::stdout().lock())),
    })
}

fn check_trace_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_BASIS_QUBITS {
        return usage(format!("--n must be in 1..={MAX_BASIS_QUBITS} for per-step T1 scoring, got {n}"));
    }
    Ok(())
}

fn write_trace(n: usize, states: &[LabeledState], out: &TraceOut) -> Result<()> {
    let format = out.format.unwrap_or(match out.out.as_deref().and_then(Path::extension) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => Format::Csv,
        _ => Format::Json,
    });
    if out.pjm && matches!(format, Format::Csv) {
        return usage("--pjm needs the json format");
    }
    let basis = SymmetrizedBasis::build(n)?;
    let trace = trace_metrics(states, &basis, out.pjm)?;
    let mut w = sink(out.out.as_deref())?;
    match format {
        Format::Json => io::write_trace_json(&trace, &mut w)?,
        Format::Csv => io::write_trace_csv(&trace, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn load_oracle(spec: &str, n: usize) -> Result<OracleSpec> {
    if BUILTIN_ORACLES.contains(&spec) {
        return Ok(OracleSpec::builtin(spec, n)?);
    }
    let path = Path::new(spec);
    if !path.is_file() {
        return usage(format!(
            "unknown oracle '{spec}': not one of {} and not a file",
            BUILTIN_ORACLES.join(", ")
        ));
    }
    let text = fs::read_to_string(path).with_context(|| format!("reading {spec}"))?;
    OracleSpec::parse(n, &text).with_context(|| format!("oracle file {spec}"))
}

fn cmd_dj(a: &DjArgs) -> Result<()> {
    check_trace_n(a.n)?;
    let f = load_oracle(&a.oracle, a.n)?;
    if a.initial >= 1 << a.n {
        return usage(format!("--initial {} out of range for {} qubits", a.initial, a.n));
    }
    let states = dj_run(&f, a.initial)?;
    write_trace(a.n, &states, &a.out)
}

fn cmd_grover(a: &GroverArgs) -> Result<()> {
    check_trace_n(a.n)?;
    for (name, v) in [("--target", a.target), ("--start", a.start)] {
        if v >= 1 << a.n {
            return usage(format!("{name} {v} out of range for {} qubits", a.n));
        }
    }
    let cfg = GroverConfig {
        n: a.n,
        target: a.target,
        start: a.start,
        iterations: a.iters.unwrap_or_else(|| GroverConfig::default_iterations(a.n)),
    };
    let states = grover_run(&cfg)?;
    write_trace(a.n, &states, &a.out)
}

fn cmd_basis(a: &BasisArgs) -> Result<()> {
    if a.n == 0 || a.n > MAX_BASIS_QUBITS {
        return usage(format!("--n must be in 1..={MAX_BASIS_QUBITS}, got {}", a.n));
    }
    let basis = SymmetrizedBasis::build(a.n)?;
    let mut w = sink(a.out.as_deref())?;
    io::write_cg_csv(&basis, &mut w)?;
    w.flush()?;
    Ok(())
}

fn dicke_state(n: usize, m: f64) -> Result<StateVector> {
    let k = m + n as f64 / 2.0;
    if k.fract() != 0.0 || k < 0.0 || k > n as f64 {
        return usage(format!("--dicke {m} is not a valid m for {n} qubits"));
    }
    let k = k as u32;
    let amps = (0..1usize << n)
        .map(|x| if x.count_ones() == k { 1.0.into() } else { 0.0.into() })
        .collect();
    Ok(StateVector::normalized(amps)?)
}

fn cmd_qfunc(a: &QfuncArgs) -> Result<()> {
    let s = match (&a.state, a.n) {
        (Some(path), _) => io::read_state_file(path).with_context(|| format!("reading {}", path.display()))?,
        (None, Some(n)) => {
            if n == 0 || n > MAX_QUBITS {
                return usage(format!("--n must be in 1..={MAX_QUBITS}, got {n}"));
            }
            if a.cat {
                let mut amps = vec![0.0.into(); 1 << n];
                amps[0] = 1.0.into();
                amps[(1 << n) - 1] = 1.0.into();
                StateVector::normalized(amps)?
            } else if let Some(m) = a.dicke {
                dicke_state(n, m)?
            } else {
                StateVector::basis_state(n, 0)?.hadamard_all()
            }
        }
        (None, None) => bail!("no state source"),
    };
    if a.theta_samples == 0 || a.phi_samples == 0 {
        return usage("sample counts must be positive");
    }
    let mesh = QMesh { theta_samples: a.theta_samples, phi_samples: a.phi_samples };
    let grid = q_function(&s, &mesh);
    let mut w = sink(a.out.as_deref())?;
    io::write_q_csv(&grid, &mut w)?;
    w.flush()?;
    if let Some(p) = &a.pgm {
        let mut img = sink(Some(p))?;
        io::write_q_pgm(&grid, a.normalize, &mut img)?;
        img.flush()?;
    }
    Ok(())
}

#[derive(Serialize)]
struct Fidelity {
    gamma0_t: f64,
    value: f64,
}

#[derive(Serialize)]
struct Report {
    n: usize,
    /// Absent above the basis ceiling.
    t1: Option<f64>,
    t2: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    fidelity: Option<Fidelity>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pjm: Option<Vec<JmEntry>>,
}

fn cmd_analyze(a: &AnalyzeArgs) -> Result<()> {
    let s = io::read_state_file(&a.state).with_context(|| format!("reading {}", a.state.display()))?;
    let n = s.n();
    let dist = if n <= MAX_BASIS_QUBITS {
        Some(p_jm(&s, &SymmetrizedBasis::build(n)?)?)
    } else if a.pjm {
        return usage(format!("--pjm needs at most {MAX_BASIS_QUBITS} qubits, state has {n}"));
    } else {
        None
    };
    let fidelity = match a.fidelity_t {
        Some(t) => Some(Fidelity { gamma0_t: t, value: dephasing_fidelity(&s, t)? }),
        None => None,
    };
    let report = Report {
        n,
        t1: dist.as_ref().map(t1_rate),
        t2: t2_rate(&s),
        fidelity,
        pjm: if a.pjm { dist.map(|d| d.entries().to_vec()) } else { None },
    };
    let mut w = sink(a.out.as_deref())?;
    io::to_json_writer(&report, &mut w)?;
    w.flush()?;
    Ok(())
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = match raw.trim().parse() {
        Ok(t) if t > 0 => t,
        _ => return usage(format!("{THREADS_ENV} must be a positive integer, got '{raw}'")),
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("starting worker pool")
}

fn run(cli: &Cli) -> Result<()> {
    configure_threads()?;
    match &cli.command {
        Command::Dj(a) => cmd_dj(a),
        Command::Grover(a) => cmd_grover(a),
        Command::Basis(a) => cmd_basis(a),
        Command::Qfunc(a) => cmd_qfunc(a),
        Command::Analyze(a) => cmd_analyze(a),
    }
}

fn is_usage(e: &anyhow::Error) -> bool {
    e.chain().any(|c| {
        c.is::<UsageError>() || matches!(c.downcast_ref::<coldec::Error>(), Some(coldec::Error::Usage(_)))
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
