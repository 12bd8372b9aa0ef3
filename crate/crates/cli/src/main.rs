//! `heqvpe`: build the He qubit Hamiltonian, run VQE on it, and compute
//! Fock-state distributions of the interferometer chip.
//!
//! Exit codes: 0 success, 1 usage, 2 input, 3 numeric.

mod error;
mod svg;

use std::f64::consts::FRAC_PI_2;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use heqvpe_core::integrals::{MolecularIntegrals, HE_631G, HE_STO3G};
use heqvpe_core::jw::{PauliSum, MAX_MATRIX_QUBITS};
use heqvpe_core::photonic::{
    matrix_from_json, permanent_naive, permanent_ryser, transition_distribution, ChipLayout,
    FockState, ModeUnitary,
};
use heqvpe_core::qsim::HERMITIAN_TOL;
use heqvpe_core::vqe::{
    ground_truth, qubit_hamiltonian, run_vqe, AnsatzSpec, Method, OptimizerConfig, VqeConfig,
    VqeTrace, DEFAULT_HISTOGRAM_SHOTS, DEFAULT_MAX_ITER, DEFAULT_THETA0, DEFAULT_TOLERANCE,
};

use crate::error::CliError;
use crate::svg::{bar_chart, line_chart, Series};

const THREADS_ENV: &str = "HEQVPE_THREADS";
/// Most bars drawn in a distribution plot; the CSV keeps every row.
const MAX_BARS: usize = 64;

#[derive(Parser)]
#[command(name = "heqvpe", version, about = "He VQE pipeline and photonic chip model")]
struct Cli {
    /// Print extra detail to standard output.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Qubit Hamiltonian construction.
    #[command(subcommand)]
    Ham(HamCommand),
    /// Variational eigensolver runs.
    #[command(subcommand)]
    Vqe(VqeCommand),
    /// Mode-level interferometer model.
    #[command(subcommand)]
    Photonic(PhotonicCommand),
    /// Permanent of a square matrix.
    Perm(PermArgs),
}

#[derive(Subcommand)]
enum HamCommand {
    /// Integrals → Jordan-Wigner Pauli sum (JSON).
    Build(HamBuildArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum Bundled {
    #[value(name = "he-sto3g")]
    HeSto3g,
    #[value(name = "he-631g")]
    He631g,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true))]
struct HamBuildArgs {
    /// FCIDUMP-style integral file.
    #[arg(long, group = "source")]
    integrals: Option<PathBuf>,
    /// Use a bundled He dataset instead of a file.
    #[arg(long, group = "source", value_enum)]
    bundled: Option<Bundled>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum VqeCommand {
    /// Optimize the ansatz energy and write traces, histogram and plots.
    Run(VqeRunArgs),
}

#[derive(Copy, Clone, ValueEnum)]
enum AnsatzKind {
    Fig1,
    Layered,
}

#[derive(Copy, Clone, ValueEnum)]
enum OptimizerKind {
    Simplex,
    Spsa,
}

#[derive(Args)]
struct VqeRunArgs {
    /// Pauli-sum JSON written by `ham build`.
    #[arg(long)]
    ham: PathBuf,
    #[arg(long, value_enum, default_value = "layered")]
    ansatz: AnsatzKind,
    /// Entangling layers of the layered ansatz.
    #[arg(long)]
    layers: Option<usize>,
    #[arg(long, value_enum, default_value = "simplex")]
    optimizer: OptimizerKind,
    /// Shots for the final histogram pass.
    #[arg(long, default_value_t = DEFAULT_HISTOGRAM_SHOTS)]
    shots: usize,
    /// Shots per objective evaluation; 0 evaluates exactly.
    #[arg(long, default_value_t = 0)]
    objective_shots: usize,
    #[arg(long, default_value_t = DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Simplex stopping spread in Hartree.
    #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Starting value of every parameter (radians).
    #[arg(long, default_value_t = DEFAULT_THETA0, allow_negative_numbers = true)]
    theta0: f64,
    /// Fixed coupler φ of the fig1 ansatz.
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    phi: f64,
    /// Fixed coupler λ of the fig1 ansatz.
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    lambda: f64,
    /// Output directory.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum PhotonicCommand {
    /// Output Fock-state distribution for one input state.
    Dist(DistArgs),
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("unitary_source").required(true))]
struct DistArgs {
    /// Unitary JSON `{"m", "re", "im"}`.
    #[arg(long, group = "unitary_source")]
    unitary: Option<PathBuf>,
    /// Use the four-mode chip layout.
    #[arg(long, group = "unitary_source")]
    from_fig1: bool,
    /// Input occupations, e.g. `0,0,0,3`.
    #[arg(long)]
    input: FockState,
    /// Distribution CSV; the bar chart goes next to it with an `.svg` extension.
    #[arg(long)]
    out: PathBuf,
    /// Coupling ratio of the first interferometer block (chip layout only).
    #[arg(long, default_value_t = 0.5)]
    ratio1: f64,
    /// Coupling ratio of the second interferometer block (chip layout only).
    #[arg(long, default_value_t = 0.5)]
    ratio2: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    phi: f64,
    #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
    lambda: f64,
}

#[derive(Copy, Clone, ValueEnum)]
enum Algo {
    Ryser,
    Naive,
}

#[derive(Args)]
struct PermArgs {
    /// Matrix JSON `{"re", "im"}`.
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long, value_enum, default_value = "ryser")]
    algo: Algo,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads()?;
    match cli.command {
        Command::Ham(HamCommand::Build(a)) => ham_build(&a, cli.verbose),
        Command::Vqe(VqeCommand::Run(a)) => vqe_run(&a, cli.verbose),
        Command::Photonic(PhotonicCommand::Dist(a)) => photonic_dist(&a),
        Command::Perm(a) => perm(&a),
    }
}

fn configure_threads() -> Result<(), CliError> {
    let Some(raw) = std::env::var_os(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Usage(format!("{THREADS_ENV}: {e}")))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| CliError::read(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| CliError::write(path, e))
}

fn ham_build(a: &HamBuildArgs, verbose: bool) -> Result<(), CliError> {
    let mi = match (&a.integrals, a.bundled) {
        (Some(path), _) => MolecularIntegrals::load(path)?,
        (None, Some(Bundled::HeSto3g)) => MolecularIntegrals::parse(HE_STO3G)?,
        (None, Some(Bundled::He631g)) => MolecularIntegrals::parse(HE_631G)?,
        (None, None) => unreachable!("clap requires a source"),
    };
    let h = qubit_hamiltonian(&mi)?;
    write(&a.out, &h.to_json())?;
    println!("qubits: {}", h.n_qubits());
    println!("terms: {}", h.len());
    if h.n_qubits() <= MAX_MATRIX_QUBITS {
        let g = ground_truth(&h)?;
        println!("E0: {:.12} Ha", g.e0);
    } else {
        println!("E0: not computed ({} qubits > {MAX_MATRIX_QUBITS})", h.n_qubits());
    }
    if verbose {
        for (c, p) in h.terms() {
            println!("  {:+.12} {p}", c.re);
        }
    }
    Ok(())
}

fn load_hamiltonian(path: &Path) -> Result<PauliSum, CliError> {
    let h = PauliSum::from_json(&read(path)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if h.max_imag() >= HERMITIAN_TOL {
        return Err(CliError::Numeric(format!(
            "{}: Hamiltonian is not Hermitian (imaginary coefficient {:e})",
            path.display(),
            h.max_imag()
        )));
    }
    if h.n_qubits() > MAX_MATRIX_QUBITS {
        return Err(CliError::Input(format!(
            "{}: {} qubits exceeds the ground-truth limit of {MAX_MATRIX_QUBITS}",
            path.display(),
            h.n_qubits()
        )));
    }
    Ok(h)
}

fn vqe_run(a: &VqeRunArgs, verbose: bool) -> Result<(), CliError> {
    let h = load_hamiltonian(&a.ham)?;
    let ansatz = match a.ansatz {
        AnsatzKind::Fig1 => {
            if a.layers.is_some() {
                return Err(CliError::Usage("--layers applies to the layered ansatz only".into()));
            }
            AnsatzSpec::Fig1 {
                phi: a.phi,
                lambda: a.lambda,
            }
        }
        AnsatzKind::Layered => AnsatzSpec::layered(h.n_qubits(), a.layers.unwrap_or(2)),
    };
    let method = match a.optimizer {
        OptimizerKind::Simplex => Method::simplex(),
        OptimizerKind::Spsa => Method::spsa(),
    };
    let cfg = VqeConfig {
        theta0: Some(vec![a.theta0; ansatz.n_params()]),
        optimizer: OptimizerConfig {
            method,
            max_iterations: a.max_iter,
            tolerance: a.tol,
            seed: a.seed,
        },
        objective_shots: a.objective_shots,
        histogram_shots: a.shots,
        seed: a.seed,
        ansatz,
    };
    let trace = run_vqe(&h, &cfg)?;
    fs::create_dir_all(&a.out).map_err(|e| CliError::write(&a.out, e))?;
    write(&a.out.join("trace.csv"), &trace.trace_csv())?;
    write(&a.out.join("histogram.csv"), &trace.histogram_csv())?;
    write(&a.out.join("summary.json"), &(trace.summary_json(&cfg) + "\n"))?;
    write_vqe_plots(&a.out, &trace)?;
    println!("E0: {:.12} Ha", trace.e0);
    println!("E*: {:.12} Ha", trace.e_star);
    println!("F*: {:.9}", trace.f_star);
    println!("iterations: {}", trace.records.len());
    println!("evaluations: {}", trace.evaluations);
    if verbose {
        println!("converged: {}", trace.converged);
        println!("histogram mean: {:.9} ± {:.9}", trace.histogram_mean, trace.histogram_stderr);
    }
    Ok(())
}

fn write_vqe_plots(dir: &Path, trace: &VqeTrace) -> Result<(), CliError> {
    let energy: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (r.iteration as f64, r.energy))
        .collect();
    let last = trace.records.last().map_or(0, |r| r.iteration) as f64;
    let reference = [(0.0, trace.e0), (last, trace.e0)];
    let convergence = line_chart(
        "VQE convergence",
        "iteration",
        "energy (Ha)",
        &[
            Series {
                points: &energy,
                color: "#1f4e8c",
                dashed: false,
            },
            Series {
                points: &reference,
                color: "#b03030",
                dashed: true,
            },
        ],
    );
    write(&dir.join("convergence.svg"), &convergence)?;

    let fidelity: Vec<(f64, f64)> = trace
        .records
        .iter()
        .map(|r| (r.iteration as f64, r.fidelity))
        .collect();
    let fid = line_chart(
        "Fidelity to ground state",
        "iteration",
        "fidelity",
        &[Series {
            points: &fidelity,
            color: "#2e7d32",
            dashed: false,
        }],
    );
    write(&dir.join("fidelity.svg"), &fid)?;

    let hist = &trace.histogram;
    let total = hist.total().max(1) as f64;
    let bars: Vec<(String, f64)> = hist
        .counts
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mid = 0.5 * (hist.edges[i] + hist.edges[i + 1]);
            (format!("{mid:.3}"), c as f64 / total)
        })
        .collect();
    let histogram = bar_chart("Measured energies", "energy (Ha)", "probability", &bars);
    write(&dir.join("histogram.svg"), &histogram)
}

fn photonic_dist(a: &DistArgs) -> Result<(), CliError> {
    let u = match &a.unitary {
        Some(path) => ModeUnitary::from_json(&read(path)?).map_err(|e| {
            let e = CliError::from(e);
            match e {
                CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
                other => other,
            }
        })?,
        None => ChipLayout {
            ratio_1: a.ratio1,
            ratio_2: a.ratio2,
            phi: a.phi,
            lambda: a.lambda,
            ..ChipLayout::default()
        }
        .unitary()?,
    };
    let dist = transition_distribution(&u, &a.input)?;
    let total: f64 = dist.values().sum();
    let mut rows: Vec<(&FockState, f64)> =
        dist.iter().filter(|(_, &p)| p != 0.0).map(|(s, &p)| (s, p)).collect();
    rows.sort_by(|x, y| y.1.total_cmp(&x.1).then_with(|| x.0.cmp(y.0)));
    let mut csv = String::from("input,output,probability\n");
    for (s, p) in &rows {
        csv.push_str(&format!("{},{},{p:?}\n", a.input, s));
    }
    write(&a.out, &csv)?;
    let bars: Vec<(String, f64)> = rows
        .iter()
        .take(MAX_BARS)
        .map(|(s, p)| (format!("|{s}⟩"), *p))
        .collect();
    let title = format!("Output Fock states for input |{}⟩", a.input);
    write(
        &a.out.with_extension("svg"),
        &bar_chart(&title, "output state", "probability", &bars),
    )?;
    println!("output states: {} ({} nonzero)", dist.len(), rows.len());
    println!("total probability: {total:.15}");
    Ok(())
}

fn perm(a: &PermArgs) -> Result<(), CliError> {
    let m = matrix_from_json(&read(&a.matrix)?)
        .map_err(|e| CliError::Input(format!("{}: {e}", a.matrix.display())))?;
    let start = Instant::now();
    let p = match a.algo {
        Algo::Ryser => permanent_ryser(&m)?,
        Algo::Naive => permanent_naive(&m)?,
    };
    let elapsed = start.elapsed();
    println!("{:?} {:?}", p.re, p.im);
    println!("time: {:.6} s", elapsed.as_secs_f64());
    Ok(())
}
