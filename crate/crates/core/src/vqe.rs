//! VQE driver: ansatz construction, classical optimizers over `E(θ)`,
//! dense ground truth, and per-iteration trace recording.

use std::f64::consts::FRAC_PI_2;
use std::fmt::Write as _;

use nalgebra::SymmetricEigen;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use serde::Serialize;
use thiserror::Error;

use crate::fermion::build_hamiltonian;
use crate::integrals::{expand_to_spin_orbitals, MolecularIntegrals};
use crate::jw::{jw_transform, pauli_to_matrix, JwError, PauliSum, MAX_MATRIX_QUBITS};
use crate::qsim::{
    coupler_theta, expectation, sample_energy, subspace_fidelity, Circuit, Gate, Param, QsimError,
    SimRng, StateVector, RNG_ALGORITHM,
};

pub const SUMMARY_SCHEMA_VERSION: u32 = 1;
pub const DEFAULT_THETA0: f64 = 0.3;
pub const DEFAULT_MAX_ITER: usize = 500;
pub const DEFAULT_TOLERANCE: f64 = 1e-8;
pub const DEFAULT_HISTOGRAM_SHOTS: usize = 10_000;
pub const HISTOGRAM_BINS: usize = 40;
/// Eigenvalues this close to the minimum count as ground space.
pub const DEGENERACY_TOL: f64 = 1e-8;

#[derive(Debug, Error)]
pub enum VqeError {
    #[error("fig1 ansatz needs 4 qubits, got {0}")]
    Fig1Qubits(usize),
    #[error("ansatz needs at least one qubit")]
    NoQubits,
    #[error("ansatz has {ansatz} qubits, Hamiltonian has {hamiltonian}")]
    QubitMismatch { ansatz: usize, hamiltonian: usize },
    #[error("objective is {value} at evaluation {evaluation}, θ = {theta:?}")]
    NonFinite {
        value: f64,
        evaluation: usize,
        theta: Vec<f64>,
    },
    #[error("invalid optimizer config: {0}")]
    Config(String),
    #[error("initial point has {got} entries, ansatz has {expected} parameters")]
    Theta0Length { expected: usize, got: usize },
    #[error(transparent)]
    Qsim(#[from] QsimError),
    #[error(transparent)]
    Jw(#[from] JwError),
}

/// Circuit family plus its shape.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum AnsatzSpec {
    /// The four-qubit chip circuit. Coupler angles and phases are free;
    /// `phi` and `lambda` are fixed coupler angles.
    Fig1 { phi: f64, lambda: f64 },
    /// Real-amplitude layers: `U3(θ, 0, 0)` on every qubit, then a CNOT
    /// ladder; a last rotation layer closes the circuit.
    Layered { n_qubits: usize, layers: usize },
}

impl AnsatzSpec {
    pub fn fig1() -> Self {
        AnsatzSpec::Fig1 {
            phi: FRAC_PI_2,
            lambda: FRAC_PI_2,
        }
    }

    pub fn layered(n_qubits: usize, layers: usize) -> Self {
        AnsatzSpec::Layered { n_qubits, layers }
    }

    pub fn n_qubits(&self) -> usize {
        match self {
            AnsatzSpec::Fig1 { .. } => 4,
            AnsatzSpec::Layered { n_qubits, .. } => *n_qubits,
        }
    }

    pub fn n_params(&self) -> usize {
        match self {
            AnsatzSpec::Fig1 { .. } => 8,
            AnsatzSpec::Layered { n_qubits, layers } => (layers + 1) * n_qubits,
        }
    }
}

/// Default parameters of the chip circuit: couplers at `arccos(0.5)`,
/// phases `π/2` then `0` in each block.
pub fn fig1_defaults() -> Vec<f64> {
    let t = coupler_theta(0.5).expect("0.5 is a valid ratio");
    vec![t, FRAC_PI_2, t, 0.0, t, FRAC_PI_2, t, 0.0]
}

pub fn build_ansatz(spec: &AnsatzSpec) -> Result<Circuit, VqeError> {
    match *spec {
        AnsatzSpec::Fig1 { phi, lambda } => build_fig1(phi, lambda),
        AnsatzSpec::Layered { n_qubits, layers } => build_layered(n_qubits, layers),
    }
}

fn build_fig1(phi: f64, lambda: f64) -> Result<Circuit, VqeError> {
    let mut c = Circuit::new(4);
    c.push(Gate::h(0))?.push(Gate::h(2))?;
    c.push(Gate::cnot(0, 1))?.push(Gate::cnot(2, 3))?;
    for (block, (upper, lower)) in [(1usize, 2usize), (2, 3)].into_iter().enumerate() {
        let b = block + 1;
        let t_a = c.add_param(format!("mzi{b}_coupler_a"));
        let p_a = c.add_param(format!("mzi{b}_phase_a"));
        let t_b = c.add_param(format!("mzi{b}_coupler_b"));
        let p_b = c.add_param(format!("mzi{b}_phase_b"));
        c.push(Gate::u3(upper, t_a, phi, lambda))?;
        c.push(Gate::cnot(upper, lower))?;
        c.push(Gate::rz(lower, p_a))?;
        c.push(Gate::cnot(upper, lower))?;
        c.push(Gate::u3(upper, t_b, phi, lambda))?;
        c.push(Gate::rz(lower, p_b))?;
    }
    Ok(c)
}

fn build_layered(n: usize, layers: usize) -> Result<Circuit, VqeError> {
    if n == 0 {
        return Err(VqeError::NoQubits);
    }
    let mut c = Circuit::new(n);
    for layer in 0..=layers {
        for q in 0..n {
            let t = c.add_param(format!("l{layer}_q{q}"));
            c.push(Gate::u3(q, t, Param::Value(0.0), Param::Value(0.0)))?;
        }
        if layer < layers {
            for q in 0..n.saturating_sub(1) {
                c.push(Gate::cnot(q, q + 1))?;
            }
        }
    }
    Ok(c)
}

/// Electron integrals → qubit Hamiltonian.
pub fn qubit_hamiltonian(mi: &MolecularIntegrals) -> Result<PauliSum, JwError> {
    let soi = expand_to_spin_orbitals(mi);
    Ok(jw_transform(&build_hamiltonian(&soi))?.simplify())
}

/// `E(θ)`: exact expectation for `shots = 0`, otherwise a sampled mean.
pub fn energy_objective(
    h: &PauliSum,
    circuit: &Circuit,
    theta: &[f64],
    shots: usize,
    seed: u64,
) -> Result<f64, QsimError> {
    let state = circuit.run(theta)?;
    if shots == 0 {
        expectation(&state, h)
    } else {
        Ok(sample_energy(&state, h, shots, seed)?.mean)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub e0: f64,
    /// Orthonormal basis of the ground space.
    pub ground_space: Vec<StateVector>,
    /// All eigenvalues, ascending.
    pub spectrum: Vec<f64>,
}

impl GroundTruth {
    pub fn psi0(&self) -> &StateVector {
        &self.ground_space[0]
    }

    /// First eigenvalue above the ground space, if any.
    pub fn first_excited(&self) -> Option<f64> {
        self.spectrum.get(self.ground_space.len()).copied()
    }

    /// `1 / (E1 − E0)`: bounds `1 − F ≤ κ (E − E0)` for any normalized state.
    pub fn kappa(&self) -> Option<f64> {
        self.first_excited().map(|e1| 1.0 / (e1 - self.e0))
    }

    pub fn fidelity(&self, state: &StateVector) -> f64 {
        subspace_fidelity(state, &self.ground_space)
    }
}

/// Dense Hermitian eigensolve of `h`.
pub fn ground_truth(h: &PauliSum) -> Result<GroundTruth, VqeError> {
    let n = h.n_qubits();
    if n > MAX_MATRIX_QUBITS {
        return Err(JwError::Capacity {
            n_qubits: n,
            max: MAX_MATRIX_QUBITS,
        }
        .into());
    }
    let m = pauli_to_matrix(h)?;
    let eig = SymmetricEigen::new(m);
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let spectrum: Vec<f64> = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let e0 = spectrum[0];
    let ground_space = order
        .iter()
        .take_while(|&&i| eig.eigenvalues[i] - e0 <= DEGENERACY_TOL)
        .map(|&i| {
            let col: Vec<Complex64> = eig.eigenvectors.column(i).iter().copied().collect();
            StateVector::from_amplitudes(col).expect("eigenvectors are normalized")
        })
        .collect();
    Ok(GroundTruth {
        e0,
        ground_space,
        spectrum,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "method", rename_all = "lowercase")]
pub enum Method {
    /// Downhill simplex; `step` is the initial edge length along each axis.
    Simplex { step: f64 },
    /// Simultaneous perturbation: `a_k = a/(k+1+A)^0.602`, `c_k = c/(k+1)^0.101`.
    Spsa { a: f64, c: f64, big_a: f64 },
}

impl Method {
    pub fn simplex() -> Self {
        Method::Simplex { step: 0.5 }
    }

    pub fn spsa() -> Self {
        Method::Spsa {
            a: 0.2,
            c: 0.1,
            big_a: 10.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_iterations: usize,
    pub tolerance: f64,
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::simplex(),
            max_iterations: DEFAULT_MAX_ITER,
            tolerance: DEFAULT_TOLERANCE,
            seed: 0,
        }
    }
}

impl OptimizerConfig {
    fn validate(&self, dim: usize) -> Result<(), VqeError> {
        if !(self.tolerance > 0.0) {
            return Err(VqeError::Config(format!("tolerance {} must be > 0", self.tolerance)));
        }
        if self.max_iterations == 0 {
            return Err(VqeError::Config("max_iterations must be ≥ 1".into()));
        }
        if dim == 0 {
            return Err(VqeError::Config("no parameters to optimize".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Evaluation {
    pub theta: Vec<f64>,
    pub value: f64,
}

/// Incumbent after an iteration. Record 0 is the initial point.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IterationRecord {
    pub iteration: usize,
    pub theta: Vec<f64>,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MinimizeResult {
    pub theta: Vec<f64>,
    pub value: f64,
    pub evaluations: Vec<Evaluation>,
    pub trace: Vec<IterationRecord>,
    pub converged: bool,
}

struct Counted<F> {
    f: F,
    log: Vec<Evaluation>,
}

impl<F: FnMut(&[f64]) -> Result<f64, VqeError>> Counted<F> {
    fn eval(&mut self, x: &[f64]) -> Result<f64, VqeError> {
        let value = (self.f)(x)?;
        if !value.is_finite() {
            return Err(VqeError::NonFinite {
                value,
                evaluation: self.log.len(),
                theta: x.to_vec(),
            });
        }
        self.log.push(Evaluation {
            theta: x.to_vec(),
            value,
        });
        Ok(value)
    }
}

/// Minimizes `f` from `theta0`.
///
/// The trace holds one record per iteration: record 0 is `theta0` with
/// `f(theta0)`, and record `k` the best point after `k` update steps, so
/// `max_iterations` bounds the record count.
pub fn minimize<F>(f: F, theta0: &[f64], cfg: &OptimizerConfig) -> Result<MinimizeResult, VqeError>
where
    F: FnMut(&[f64]) -> Result<f64, VqeError>,
{
    cfg.validate(theta0.len())?;
    let mut obj = Counted { f, log: Vec::new() };
    match cfg.method {
        Method::Simplex { step } => nelder_mead(&mut obj, theta0, step, cfg),
        Method::Spsa { a, c, big_a } => spsa(&mut obj, theta0, a, c, big_a, cfg),
    }
    .map(|(theta, value, trace, converged)| MinimizeResult {
        theta,
        value,
        evaluations: obj.log,
        trace,
        converged,
    })
}

type Outcome = (Vec<f64>, f64, Vec<IterationRecord>, bool);

fn nelder_mead<F>(
    obj: &mut Counted<F>,
    theta0: &[f64],
    step: f64,
    cfg: &OptimizerConfig,
) -> Result<Outcome, VqeError>
where
    F: FnMut(&[f64]) -> Result<f64, VqeError>,
{
    const ALPHA: f64 = 1.0;
    const GAMMA: f64 = 2.0;
    const RHO: f64 = 0.5;
    const SIGMA: f64 = 0.5;
    let n = theta0.len();
    let f0 = obj.eval(theta0)?;
    let mut trace = vec![IterationRecord {
        iteration: 0,
        theta: theta0.to_vec(),
        value: f0,
    }];
    if cfg.max_iterations == 1 {
        return Ok((theta0.to_vec(), f0, trace, false));
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = vec![(theta0.to_vec(), f0)];
    for i in 0..n {
        let mut x = theta0.to_vec();
        x[i] += step;
        let fx = obj.eval(&x)?;
        simplex.push((x, fx));
    }
    let mut converged = false;
    for iteration in 1..cfg.max_iterations {
        // Stable sort keeps ties in insertion order.
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let spread = simplex[n].1 - simplex[0].1;
        if spread < cfg.tolerance {
            converged = true;
            break;
        }
        let centroid: Vec<f64> = (0..n)
            .map(|j| simplex[..n].iter().map(|v| v.0[j]).sum::<f64>() / n as f64)
            .collect();
        let along = |t: f64, worst: &[f64]| -> Vec<f64> {
            centroid
                .iter()
                .zip(worst)
                .map(|(c, w)| c + t * (c - w))
                .collect()
        };
        let worst = simplex[n].0.clone();
        let xr = along(ALPHA, &worst);
        let fr = obj.eval(&xr)?;
        if fr < simplex[0].1 {
            let xe = along(GAMMA, &worst);
            let fe = obj.eval(&xe)?;
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let (xc, fc) = if fr < simplex[n].1 {
                let xc = along(RHO, &worst);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            } else {
                let xc = along(-RHO, &worst);
                let fc = obj.eval(&xc)?;
                (xc, fc)
            };
            if fc < fr.min(simplex[n].1) {
                simplex[n] = (xc, fc);
            } else {
                let best = simplex[0].0.clone();
                for v in simplex.iter_mut().skip(1) {
                    let x: Vec<f64> = best
                        .iter()
                        .zip(&v.0)
                        .map(|(b, x)| b + SIGMA * (x - b))
                        .collect();
                    let fx = obj.eval(&x)?;
                    *v = (x, fx);
                }
            }
        }
        let best = simplex
            .iter()
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("simplex is non-empty");
        let prev = trace.last().expect("trace starts with θ0").value;
        let record = if best.1 <= prev {
            IterationRecord {
                iteration,
                theta: best.0.clone(),
                value: best.1,
            }
        } else {
            // θ0 itself may beat every vertex after a shrink.
            let last = trace.last().expect("trace starts with θ0");
            IterationRecord {
                iteration,
                theta: last.theta.clone(),
                value: last.value,
            }
        };
        trace.push(record);
    }
    let last = trace.last().expect("trace starts with θ0");
    Ok((last.theta.clone(), last.value, trace, converged))
}

fn spsa<F>(
    obj: &mut Counted<F>,
    theta0: &[f64],
    a: f64,
    c: f64,
    big_a: f64,
    cfg: &OptimizerConfig,
) -> Result<Outcome, VqeError>
where
    F: FnMut(&[f64]) -> Result<f64, VqeError>,
{
    let mut rng = SimRng::seed_from_u64(cfg.seed);
    let f0 = obj.eval(theta0)?;
    let mut trace = vec![IterationRecord {
        iteration: 0,
        theta: theta0.to_vec(),
        value: f0,
    }];
    let mut x = theta0.to_vec();
    let (mut best_x, mut best_f) = (x.clone(), f0);
    for iteration in 1..cfg.max_iterations {
        let k = (iteration - 1) as f64;
        let ak = a / (k + 1.0 + big_a).powf(0.602);
        let ck = c / (k + 1.0).powf(0.101);
        let delta: Vec<f64> = x
            .iter()
            .map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 })
            .collect();
        let plus: Vec<f64> = x.iter().zip(&delta).map(|(x, d)| x + ck * d).collect();
        let minus: Vec<f64> = x.iter().zip(&delta).map(|(x, d)| x - ck * d).collect();
        let diff = obj.eval(&plus)? - obj.eval(&minus)?;
        for (xi, d) in x.iter_mut().zip(&delta) {
            *xi -= ak * diff / (2.0 * ck * d);
        }
        let fx = obj.eval(&x)?;
        if fx < best_f {
            best_f = fx;
            best_x = x.clone();
        }
        trace.push(IterationRecord {
            iteration,
            theta: best_x.clone(),
            value: best_f,
        });
    }
    Ok((best_x, best_f, trace, false))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeConfig {
    pub ansatz: AnsatzSpec,
    pub optimizer: OptimizerConfig,
    /// Shots per objective evaluation; 0 means exact expectations.
    pub objective_shots: usize,
    /// Shots for the post-optimization histogram pass.
    pub histogram_shots: usize,
    pub seed: u64,
    /// Starting point; every parameter at [`DEFAULT_THETA0`] when absent.
    pub theta0: Option<Vec<f64>>,
}

impl VqeConfig {
    pub fn new(ansatz: AnsatzSpec) -> Self {
        Self {
            ansatz,
            optimizer: OptimizerConfig::default(),
            objective_shots: 0,
            histogram_shots: DEFAULT_HISTOGRAM_SHOTS,
            seed: 0,
            theta0: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    pub iteration: usize,
    pub theta: Vec<f64>,
    pub energy: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Histogram {
    /// `bins + 1` ascending edges.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
}

impl Histogram {
    /// Equal-width bins over `[min, max]`; the top edge is inclusive.
    pub fn from_samples(samples: &[f64], bins: usize) -> Self {
        if samples.is_empty() || bins == 0 {
            return Self {
                edges: Vec::new(),
                counts: Vec::new(),
            };
        }
        let lo = samples.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = samples.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if hi <= lo {
            return Self {
                edges: vec![lo, hi],
                counts: vec![samples.len() as u64],
            };
        }
        let width = (hi - lo) / bins as f64;
        let edges = (0..=bins)
            .map(|i| if i == bins { hi } else { lo + width * i as f64 })
            .collect();
        let mut counts = vec![0u64; bins];
        for &s in samples {
            let i = (((s - lo) / width) as usize).min(bins - 1);
            counts[i] += 1;
        }
        Self { edges, counts }
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VqeTrace {
    pub records: Vec<TraceRecord>,
    pub histogram: Histogram,
    pub histogram_mean: f64,
    pub histogram_stderr: f64,
    pub theta_star: Vec<f64>,
    /// Exact energy at `theta_star`.
    pub e_star: f64,
    pub f_star: f64,
    pub e0: f64,
    pub kappa: Option<f64>,
    pub evaluations: usize,
    pub converged: bool,
    pub param_names: Vec<String>,
}

pub fn run_vqe(h: &PauliSum, cfg: &VqeConfig) -> Result<VqeTrace, VqeError> {
    let circuit = build_ansatz(&cfg.ansatz)?;
    if circuit.n_qubits() != h.n_qubits() {
        return Err(VqeError::QubitMismatch {
            ansatz: circuit.n_qubits(),
            hamiltonian: h.n_qubits(),
        });
    }
    let truth = ground_truth(h)?;
    let theta0 = match &cfg.theta0 {
        Some(t) if t.len() != circuit.n_params() => {
            return Err(VqeError::Theta0Length {
                expected: circuit.n_params(),
                got: t.len(),
            })
        }
        Some(t) => t.clone(),
        None => vec![DEFAULT_THETA0; circuit.n_params()],
    };
    let mut calls = 0u64;
    let objective = |theta: &[f64]| -> Result<f64, VqeError> {
        // Each sampled evaluation gets its own stream derived from the run seed.
        let seed = cfg.seed.wrapping_add(calls);
        calls += 1;
        Ok(energy_objective(h, &circuit, theta, cfg.objective_shots, seed)?)
    };
    let result = minimize(objective, &theta0, &cfg.optimizer)?;
    let mut records = Vec::with_capacity(result.trace.len());
    for r in &result.trace {
        let state = circuit.run(&r.theta)?;
        let energy = if cfg.objective_shots == 0 {
            r.value
        } else {
            expectation(&state, h)?
        };
        records.push(TraceRecord {
            iteration: r.iteration,
            theta: r.theta.clone(),
            energy,
            fidelity: truth.fidelity(&state),
        });
    }
    let final_state = circuit.run(&result.theta)?;
    let e_star = expectation(&final_state, h)?;
    let (histogram, histogram_mean, histogram_stderr) = if cfg.histogram_shots == 0 {
        (Histogram::from_samples(&[], HISTOGRAM_BINS), e_star, 0.0)
    } else {
        let est = sample_energy(&final_state, h, cfg.histogram_shots, cfg.seed)?;
        (
            Histogram::from_samples(&est.shot_energies, HISTOGRAM_BINS),
            est.mean,
            est.stderr,
        )
    };
    Ok(VqeTrace {
        records,
        histogram,
        histogram_mean,
        histogram_stderr,
        theta_star: result.theta,
        e_star,
        f_star: truth.fidelity(&final_state),
        e0: truth.e0,
        kappa: truth.kappa(),
        evaluations: result.evaluations.len(),
        converged: result.converged,
        param_names: circuit.param_names().to_vec(),
    })
}

impl VqeTrace {
    /// `iteration,energy,fidelity,theta_0,…`
    pub fn trace_csv(&self) -> String {
        let n = self.theta_star.len();
        let mut out = String::from("iteration,energy,fidelity");
        for i in 0..n {
            let _ = write!(out, ",theta_{i}");
        }
        out.push('\n');
        for r in &self.records {
            let _ = write!(out, "{},{:?},{:?}", r.iteration, r.energy, r.fidelity);
            for t in &r.theta {
                let _ = write!(out, ",{t:?}");
            }
            out.push('\n');
        }
        out
    }

    /// `bin_lo,bin_hi,count`
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("bin_lo,bin_hi,count\n");
        for (i, c) in self.histogram.counts.iter().enumerate() {
            let _ = writeln!(
                out,
                "{:?},{:?},{c}",
                self.histogram.edges[i],
                self.histogram.edges[i + 1]
            );
        }
        out
    }

    pub fn summary_json(&self, cfg: &VqeConfig) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            schema_version: u32,
            rng_algorithm: &'a str,
            config: &'a VqeConfig,
            e0: f64,
            e_star: f64,
            f_star: f64,
            kappa: Option<f64>,
            iterations: usize,
            evaluations: usize,
            converged: bool,
            histogram_mean: f64,
            histogram_stderr: f64,
            param_names: &'a [String],
            theta_star: &'a [f64],
        }
        let s = Summary {
            schema_version: SUMMARY_SCHEMA_VERSION,
            rng_algorithm: RNG_ALGORITHM,
            config: cfg,
            e0: self.e0,
            e_star: self.e_star,
            f_star: self.f_star,
            kappa: self.kappa,
            iterations: self.records.len(),
            evaluations: self.evaluations,
            converged: self.converged,
            histogram_mean: self.histogram_mean,
            histogram_stderr: self.histogram_stderr,
            param_names: &self.param_names,
            theta_star: &self.theta_star,
        };
        serde_json::to_string_pretty(&s).expect("summary serializes")
    }
}
