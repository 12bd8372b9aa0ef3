//! Dense statevector simulation over the four-gate set used by the chip
//! model: Hadamard, CNOT, `RZ(β)` and the coupler unitary `U3(θ, φ, λ)`.
//!
//! Basis index bit `k` is qubit `k` (qubit 0 least significant).

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::jw::PauliSum;

/// Generator behind every seeded sampling routine.
pub type SimRng = ChaCha8Rng;
pub const RNG_ALGORITHM: &str = "chacha8";

pub const NORM_TOL: f64 = 1e-10;
/// Largest imaginary residue tolerated in an expectation value.
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Above this many amplitudes single-qubit updates are split across workers.
const PARALLEL_MIN_LEN: usize = 1 << 14;

#[derive(Debug, Error, PartialEq)]
pub enum QsimError {
    #[error("qubit {qubit} out of range for {n_qubits} qubits")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("CNOT control and target are both qubit {0}")]
    ControlIsTarget(usize),
    #[error("gate parameter #{0} is unbound")]
    Unbound(usize),
    #[error("expected {expected} parameters, got {got}")]
    ParameterCount { expected: usize, got: usize },
    #[error("coupling ratio {0} outside [0, 1]")]
    RatioOutOfRange(f64),
    #[error("qubit count mismatch: state has {state}, operator has {operator}")]
    QubitMismatch { state: usize, operator: usize },
    #[error("operator is not Hermitian: imaginary residue {0:e}")]
    NonHermitian(f64),
    #[error("state norm² {0} differs from 1")]
    NotNormalized(f64),
    #[error("amplitude count {0} is not a power of two")]
    BadLength(usize),
    #[error("shot count must be positive")]
    NoShots,
}

/// A gate angle: fixed, or an index into the circuit's free parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Param {
    Value(f64),
    Free(usize),
}

impl Param {
    fn resolve(self, values: &[f64]) -> Result<f64, QsimError> {
        match self {
            Param::Value(v) => Ok(v),
            Param::Free(i) => values.get(i).copied().ok_or(QsimError::Unbound(i)),
        }
    }

    fn value(self) -> Result<f64, QsimError> {
        match self {
            Param::Value(v) => Ok(v),
            Param::Free(i) => Err(QsimError::Unbound(i)),
        }
    }
}

impl From<f64> for Param {
    fn from(v: f64) -> Self {
        Param::Value(v)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Value(v) => write!(f, "{v:?}"),
            Param::Free(i) => write!(f, "θ[{i}]"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    H { qubit: usize },
    Cnot { control: usize, target: usize },
    Rz { qubit: usize, beta: Param },
    U3 {
        qubit: usize,
        theta: Param,
        phi: Param,
        lambda: Param,
    },
}

impl Gate {
    pub fn h(qubit: usize) -> Self {
        Gate::H { qubit }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::Cnot { control, target }
    }

    pub fn rz(qubit: usize, beta: impl Into<Param>) -> Self {
        Gate::Rz {
            qubit,
            beta: beta.into(),
        }
    }

    pub fn u3(
        qubit: usize,
        theta: impl Into<Param>,
        phi: impl Into<Param>,
        lambda: impl Into<Param>,
    ) -> Self {
        Gate::U3 {
            qubit,
            theta: theta.into(),
            phi: phi.into(),
            lambda: lambda.into(),
        }
    }

    /// Directional coupler with splitting ratio `ratio`: `U3(arccos R, φ, λ)`.
    pub fn coupler(qubit: usize, ratio: f64, phi: f64, lambda: f64) -> Result<Self, QsimError> {
        Ok(Gate::u3(qubit, coupler_theta(ratio)?, phi, lambda))
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::H { qubit } | Gate::Rz { qubit, .. } | Gate::U3 { qubit, .. } => vec![qubit],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Replaces free parameters by their values.
    pub fn bind(&self, values: &[f64]) -> Result<Gate, QsimError> {
        Ok(match *self {
            Gate::Rz { qubit, beta } => Gate::rz(qubit, beta.resolve(values)?),
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => Gate::u3(
                qubit,
                theta.resolve(values)?,
                phi.resolve(values)?,
                lambda.resolve(values)?,
            ),
            g => g,
        })
    }

    /// The 2×2 matrix of a bound single-qubit gate, or the 4×4 CNOT in the
    /// `|control, target⟩` basis (control is the high bit).
    pub fn matrix(&self) -> Result<DMatrix<Complex64>, QsimError> {
        let r = |x: f64| Complex64::new(x, 0.0);
        Ok(match *self {
            Gate::H { .. } => DMatrix::from_row_slice(2, 2, &single_h()),
            Gate::Rz { beta, .. } => DMatrix::from_row_slice(2, 2, &rz_matrix(beta.value()?)),
            Gate::U3 {
                theta, phi, lambda, ..
            } => DMatrix::from_row_slice(
                2,
                2,
                &u3_matrix(theta.value()?, phi.value()?, lambda.value()?),
            ),
            Gate::Cnot { .. } => {
                let mut m = DMatrix::zeros(4, 4);
                m[(0, 0)] = r(1.0);
                m[(1, 1)] = r(1.0);
                m[(2, 3)] = r(1.0);
                m[(3, 2)] = r(1.0);
                m
            }
        })
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::H { qubit } => write!(f, "H q{qubit}"),
            Gate::Cnot { control, target } => write!(f, "CNOT q{control} -> q{target}"),
            Gate::Rz { qubit, beta } => write!(f, "RZ({beta}) q{qubit}"),
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => write!(f, "U3({theta}, {phi}, {lambda}) q{qubit}"),
        }
    }
}

/// `θ = arccos R` for a coupler with splitting ratio `R ∈ [0, 1]`.
pub fn coupler_theta(ratio: f64) -> Result<f64, QsimError> {
    if !(0.0..=1.0).contains(&ratio) {
        return Err(QsimError::RatioOutOfRange(ratio));
    }
    Ok(ratio.acos())
}

fn single_h() -> [Complex64; 4] {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    [s, s, s, -s]
}

/// Row-major `diag(e^{-iβ/2}, e^{iβ/2})`.
pub fn rz_matrix(beta: f64) -> [Complex64; 4] {
    let zero = Complex64::default();
    [
        Complex64::from_polar(1.0, -beta / 2.0),
        zero,
        zero,
        Complex64::from_polar(1.0, beta / 2.0),
    ]
}

/// Row-major coupler matrix
/// `[[cos(θ/2), −e^{iλ} sin(θ/2)], [e^{iφ} sin(θ/2), e^{i(φ+λ)} cos(θ/2)]]`.
pub fn u3_matrix(theta: f64, phi: f64, lambda: f64) -> [Complex64; 4] {
    let (s, c) = (theta / 2.0).sin_cos();
    [
        Complex64::new(c, 0.0),
        -Complex64::from_polar(s, lambda),
        Complex64::from_polar(s, phi),
        Complex64::from_polar(c, phi + lambda),
    ]
}

/// An ordered gate list over `n_qubits` with named free parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    n_qubits: usize,
    gates: Vec<Gate>,
    param_names: Vec<String>,
}

impl Circuit {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            gates: Vec::new(),
            param_names: Vec::new(),
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn param_names(&self) -> &[String] {
        &self.param_names
    }

    pub fn n_params(&self) -> usize {
        self.param_names.len()
    }

    /// Registers a free parameter and returns a handle to it.
    pub fn add_param(&mut self, name: impl Into<String>) -> Param {
        self.param_names.push(name.into());
        Param::Free(self.param_names.len() - 1)
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self, QsimError> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(QsimError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        if let Gate::Cnot { control, target } = gate {
            if control == target {
                return Err(QsimError::ControlIsTarget(control));
            }
        }
        let params = match gate {
            Gate::Rz { beta, .. } => vec![beta],
            Gate::U3 {
                theta, phi, lambda, ..
            } => vec![theta, phi, lambda],
            _ => vec![],
        };
        for p in params {
            if let Param::Free(i) = p {
                if i >= self.param_names.len() {
                    return Err(QsimError::Unbound(i));
                }
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    pub fn bind(&self, values: &[f64]) -> Result<Vec<Gate>, QsimError> {
        if values.len() != self.n_params() {
            return Err(QsimError::ParameterCount {
                expected: self.n_params(),
                got: values.len(),
            });
        }
        self.gates.iter().map(|g| g.bind(values)).collect()
    }

    /// Runs the circuit on `|0…0⟩`.
    pub fn run(&self, values: &[f64]) -> Result<StateVector, QsimError> {
        let mut state = StateVector::zero(self.n_qubits);
        for gate in self.bind(values)? {
            state.apply(&gate)?;
        }
        Ok(state)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// `|0…0⟩`.
    pub fn zero(n_qubits: usize) -> Self {
        Self::basis(n_qubits, 0)
    }

    pub fn basis(n_qubits: usize, index: usize) -> Self {
        let mut amps = vec![Complex64::default(); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Self { n_qubits, amps }
    }

    /// Checks length and normalization.
    pub fn from_amplitudes(amps: Vec<Complex64>) -> Result<Self, QsimError> {
        if !amps.len().is_power_of_two() {
            return Err(QsimError::BadLength(amps.len()));
        }
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QsimError::NotNormalized(norm));
        }
        Ok(Self {
            n_qubits: amps.len().trailing_zeros() as usize,
            amps,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Multiplies every amplitude by `e^{iγ}`.
    pub fn with_global_phase(&self, gamma: f64) -> Self {
        let ph = Complex64::from_polar(1.0, gamma);
        Self {
            n_qubits: self.n_qubits,
            amps: self.amps.iter().map(|a| a * ph).collect(),
        }
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    pub fn apply(&mut self, gate: &Gate) -> Result<(), QsimError> {
        for q in gate.qubits() {
            if q >= self.n_qubits {
                return Err(QsimError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
        }
        match *gate {
            Gate::H { qubit } => self.apply_single(qubit, single_h()),
            Gate::Rz { qubit, beta } => self.apply_single(qubit, rz_matrix(beta.value()?)),
            Gate::U3 {
                qubit,
                theta,
                phi,
                lambda,
            } => self.apply_single(
                qubit,
                u3_matrix(theta.value()?, phi.value()?, lambda.value()?),
            ),
            Gate::Cnot { control, target } => {
                if control == target {
                    return Err(QsimError::ControlIsTarget(control));
                }
                let (c, t) = (1usize << control, 1usize << target);
                for i in 0..self.amps.len() {
                    if i & c != 0 && i & t == 0 {
                        self.amps.swap(i, i | t);
                    }
                }
            }
        }
        Ok(())
    }

    /// Applies a row-major 2×2 matrix to `qubit`. Blocks of `2^(q+1)`
    /// amplitudes are independent, so they may be processed concurrently.
    pub fn apply_single(&mut self, qubit: usize, m: [Complex64; 4]) {
        let stride = 1usize << qubit;
        let kernel = |block: &mut [Complex64]| {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a0, *a1);
                *a0 = m[0] * x + m[1] * y;
                *a1 = m[2] * x + m[3] * y;
            }
        };
        if self.amps.len() >= PARALLEL_MIN_LEN {
            self.amps.par_chunks_mut(2 * stride).for_each(kernel);
        } else {
            self.amps.chunks_mut(2 * stride).for_each(kernel);
        }
    }
}

/// `|⟨a|b⟩|²`, clamped into `[0, 1]` against rounding.
pub fn fidelity(a: &StateVector, b: &StateVector) -> f64 {
    a.inner(b).norm_sqr().min(1.0)
}

/// Fidelity against a subspace: `Σ_k |⟨g_k|ψ⟩|²` for an orthonormal basis `g_k`.
pub fn subspace_fidelity(state: &StateVector, basis: &[StateVector]) -> f64 {
    basis
        .iter()
        .map(|g| g.inner(state).norm_sqr())
        .sum::<f64>()
        .min(1.0)
}

fn check_operator(s: &StateVector, h: &PauliSum) -> Result<(), QsimError> {
    if s.n_qubits != h.n_qubits() {
        return Err(QsimError::QubitMismatch {
            state: s.n_qubits,
            operator: h.n_qubits(),
        });
    }
    Ok(())
}

/// `⟨s|h|s⟩` for a Hermitian Pauli sum.
pub fn expectation(s: &StateVector, h: &PauliSum) -> Result<f64, QsimError> {
    check_operator(s, h)?;
    // Per-term values first, then a fixed-order sum: the result does not
    // depend on how the terms were scheduled.
    let per_term: Vec<Complex64> = h
        .terms()
        .par_iter()
        .map(|(c, p)| {
            let v: Complex64 = s
                .amps
                .iter()
                .enumerate()
                .map(|(b, amp)| {
                    let (phase, b2) = p.apply(b);
                    s.amps[b2].conj() * phase * amp
                })
                .sum();
            c * v
        })
        .collect();
    let total: Complex64 = per_term.iter().sum();
    if total.im.abs() >= HERMITIAN_TOL {
        return Err(QsimError::NonHermitian(total.im.abs()));
    }
    Ok(total.re)
}

/// Outcome tallies for one measured Pauli term.
#[derive(Debug, Clone, PartialEq)]
pub struct TermCounts {
    pub string: String,
    pub coeff: f64,
    /// Samples with eigenvalue +1.
    pub plus: u64,
    /// Samples with eigenvalue −1.
    pub minus: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub mean: f64,
    pub stderr: f64,
    pub shots: usize,
    pub per_term_counts: Vec<TermCounts>,
    /// Shot `i` combines outcome `i` of every term: `Σ_t c_t · o_{t,i}`.
    pub shot_energies: Vec<f64>,
}

/// Shot-based estimate of `⟨s|h|s⟩`.
///
/// Each non-identity term is measured separately: rotate a copy of the state
/// into the term's eigenbasis (X: H, Y: S† then H), sample `shots`
/// bitstrings from `|amp|²`, and read the parity over the term's support.
/// Terms are visited in order with one [`SimRng`] stream seeded by `seed`.
pub fn sample_energy(
    s: &StateVector,
    h: &PauliSum,
    shots: usize,
    seed: u64,
) -> Result<EnergyEstimate, QsimError> {
    check_operator(s, h)?;
    if shots == 0 {
        return Err(QsimError::NoShots);
    }
    if h.max_imag() >= HERMITIAN_TOL {
        return Err(QsimError::NonHermitian(h.max_imag()));
    }
    let mut rng = SimRng::seed_from_u64(seed);
    let mut mean = 0.0;
    let mut variance = 0.0;
    let mut shot_energies = vec![0.0; shots];
    let mut per_term_counts = Vec::with_capacity(h.len());
    let s_dag = rz_matrix(-std::f64::consts::FRAC_PI_2);
    for (c, p) in h.terms() {
        let coeff = c.re;
        if p.is_identity() {
            mean += coeff;
            shot_energies.iter_mut().for_each(|e| *e += coeff);
            per_term_counts.push(TermCounts {
                string: p.to_string(),
                coeff,
                plus: shots as u64,
                minus: 0,
            });
            continue;
        }
        let mut rotated = s.clone();
        for k in 0..s.n_qubits {
            match p.get(k) {
                crate::jw::Pauli::X => rotated.apply_single(k, single_h()),
                crate::jw::Pauli::Y => {
                    // RZ(−π/2) equals S† up to a global phase.
                    rotated.apply_single(k, s_dag);
                    rotated.apply_single(k, single_h());
                }
                _ => {}
            }
        }
        let mut cumulative = Vec::with_capacity(rotated.amps.len());
        let mut acc = 0.0;
        for a in &rotated.amps {
            acc += a.norm_sqr();
            cumulative.push(acc);
        }
        let support = p.support();
        let (mut plus, mut minus) = (0u64, 0u64);
        for e in shot_energies.iter_mut() {
            let u: f64 = rng.gen::<f64>() * acc;
            let b = cumulative
                .partition_point(|&x| x <= u)
                .min(cumulative.len() - 1);
            if (b as u64 & support).count_ones() % 2 == 0 {
                plus += 1;
                *e += coeff;
            } else {
                minus += 1;
                *e -= coeff;
            }
        }
        let term_mean = (plus as f64 - minus as f64) / shots as f64;
        mean += coeff * term_mean;
        variance += coeff * coeff * (1.0 - term_mean * term_mean);
        per_term_counts.push(TermCounts {
            string: p.to_string(),
            coeff,
            plus,
            minus,
        });
    }
    Ok(EnergyEstimate {
        mean,
        stderr: (variance / shots as f64).sqrt(),
        shots,
        per_term_counts,
        shot_energies,
    })
}
