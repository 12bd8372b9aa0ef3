//! Mode-level model of the interferometer chip: directional couplers and
//! phase shifters composed into an `m×m` unitary, matrix permanents, and
//! Fock-state transition probabilities.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::qsim::{coupler_theta, u3_matrix, QsimError};

pub const UNITARY_TOL: f64 = 1e-10;
pub const MAX_NAIVE_N: usize = 9;
pub const MAX_RYSER_N: usize = 32;
pub const MAX_DISTRIBUTION_LEN: u128 = 1_000_000;
/// Ryser sweeps at or above this size are split into fixed chunks.
const RYSER_PARALLEL_MIN_N: usize = 16;
const RYSER_CHUNKS: u64 = 64;

#[derive(Debug, Error, PartialEq)]
pub enum PhotonicError {
    #[error("matrix is {rows}×{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unitary: max |U†U − I| = {residual:e}")]
    NotUnitary { residual: f64 },
    #[error("{n}×{n} exceeds the {algorithm} permanent limit of {max}")]
    Capacity {
        algorithm: &'static str,
        n: usize,
        max: usize,
    },
    #[error("coupling ratio {0} outside [0, 1]")]
    RatioOutOfRange(f64),
    #[error("mode {mode} out of range for {m} modes")]
    ModeOutOfRange { mode: usize, m: usize },
    #[error("photon number mismatch: input has {input}, output has {output}")]
    PhotonMismatch { input: usize, output: usize },
    #[error("state has {state} modes, unitary has {m}")]
    ModeMismatch { state: usize, m: usize },
    #[error("distribution would have {0} entries (limit {MAX_DISTRIBUTION_LEN})")]
    DistributionTooLarge(u128),
    #[error("invalid Fock state {0:?}")]
    BadState(String),
    #[error("matrix JSON: {0}")]
    Json(String),
}

impl From<QsimError> for PhotonicError {
    fn from(e: QsimError) -> Self {
        match e {
            QsimError::RatioOutOfRange(r) => PhotonicError::RatioOutOfRange(r),
            other => PhotonicError::Json(other.to_string()),
        }
    }
}

/// An `m×m` unitary over optical modes.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeUnitary {
    matrix: DMatrix<Complex64>,
}

impl ModeUnitary {
    pub fn identity(m: usize) -> Self {
        Self {
            matrix: DMatrix::identity(m, m),
        }
    }

    /// Checks squareness and `U†U = I` within [`UNITARY_TOL`].
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self, PhotonicError> {
        if !matrix.is_square() {
            return Err(PhotonicError::NotSquare {
                rows: matrix.nrows(),
                cols: matrix.ncols(),
            });
        }
        let residual = unitarity_residual(&matrix);
        if residual > UNITARY_TOL {
            return Err(PhotonicError::NotUnitary { residual });
        }
        Ok(Self { matrix })
    }

    pub fn m(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn from_json(text: &str) -> Result<Self, PhotonicError> {
        let matrix = matrix_from_json(text)?;
        Self::new(matrix)
    }

    pub fn to_json(&self) -> String {
        matrix_to_json(&self.matrix)
    }
}

/// Max entry of `|U†U − I|`.
pub fn unitarity_residual(u: &DMatrix<Complex64>) -> f64 {
    let id = DMatrix::<Complex64>::identity(u.ncols(), u.ncols());
    (u.adjoint() * u - id)
        .iter()
        .map(|x| if x.norm().is_nan() { f64::INFINITY } else { x.norm() })
        .fold(0.0, f64::max)
}

#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    #[serde(default)]
    m: Option<usize>,
    re: Vec<Vec<f64>>,
    #[serde(default)]
    im: Option<Vec<Vec<f64>>>,
}

/// Parses `{"m": m, "re": [[…]], "im": [[…]]}`. `m` and `im` are optional;
/// the matrix must be square.
pub fn matrix_from_json(text: &str) -> Result<DMatrix<Complex64>, PhotonicError> {
    let doc: MatrixDoc = serde_json::from_str(text).map_err(|e| PhotonicError::Json(e.to_string()))?;
    let rows = doc.re.len();
    let cols = doc.re.first().map_or(0, Vec::len);
    if doc.re.iter().any(|r| r.len() != cols) {
        return Err(PhotonicError::Json("ragged \"re\" rows".into()));
    }
    if rows != cols {
        return Err(PhotonicError::NotSquare { rows, cols });
    }
    if let Some(m) = doc.m {
        if m != rows {
            return Err(PhotonicError::Json(format!("\"m\" is {m} but matrix is {rows}×{cols}")));
        }
    }
    let im = match doc.im {
        Some(im) => {
            if im.len() != rows || im.iter().any(|r| r.len() != cols) {
                return Err(PhotonicError::Json("\"im\" shape differs from \"re\"".into()));
            }
            im
        }
        None => vec![vec![0.0; cols]; rows],
    };
    let mat = DMatrix::from_fn(rows, cols, |i, j| Complex64::new(doc.re[i][j], im[i][j]));
    if mat.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(PhotonicError::Json("non-finite entry".into()));
    }
    Ok(mat)
}

pub fn matrix_to_json(matrix: &DMatrix<Complex64>) -> String {
    let grid = |f: fn(&Complex64) -> f64| -> Vec<Vec<f64>> {
        (0..matrix.nrows())
            .map(|i| (0..matrix.ncols()).map(|j| f(&matrix[(i, j)])).collect())
            .collect()
    };
    let doc = MatrixDoc {
        m: Some(matrix.nrows()),
        re: grid(|z| z.re),
        im: Some(grid(|z| z.im)),
    };
    serde_json::to_string(&doc).expect("matrix serializes")
}

/// Two-mode coupler with splitting ratio `R`: the coupler matrix at `θ = arccos R`.
pub fn coupler_unitary(ratio: f64, phi: f64, lambda: f64) -> Result<ModeUnitary, PhotonicError> {
    Ok(coupler_from_angle(coupler_theta(ratio)?, phi, lambda))
}

/// Same element parameterized by the raw rotation angle; `θ = π/2` is the
/// 50:50 splitter.
pub fn coupler_from_angle(theta: f64, phi: f64, lambda: f64) -> ModeUnitary {
    ModeUnitary {
        matrix: DMatrix::from_row_slice(2, 2, &u3_matrix(theta, phi, lambda)),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Element {
    /// Coupler on modes `(mode, mode + 1)` with `θ = arccos(ratio)`.
    Coupler { ratio: f64, phi: f64, lambda: f64 },
    /// Coupler on modes `(mode, mode + 1)` with an explicit angle.
    CouplerAngle { theta: f64, phi: f64, lambda: f64 },
    /// `e^{iβ}` on a single mode.
    Phase { beta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementPlacement {
    pub element: Element,
    /// Single mode for a phase; first of the adjacent pair for a coupler.
    pub mode: usize,
}

impl ElementPlacement {
    pub fn coupler(mode: usize, ratio: f64, phi: f64, lambda: f64) -> Self {
        Self {
            element: Element::Coupler { ratio, phi, lambda },
            mode,
        }
    }

    pub fn phase(mode: usize, beta: f64) -> Self {
        Self {
            element: Element::Phase { beta },
            mode,
        }
    }
}

/// Multiplies the embedded elements in sequence order (later on the left).
pub fn compose_interferometer(
    placements: &[ElementPlacement],
    m: usize,
) -> Result<ModeUnitary, PhotonicError> {
    let mut u = DMatrix::<Complex64>::identity(m, m);
    for p in placements {
        let (block, width) = match p.element {
            Element::Coupler { ratio, phi, lambda } => {
                (coupler_unitary(ratio, phi, lambda)?.matrix, 2)
            }
            Element::CouplerAngle { theta, phi, lambda } => {
                (coupler_from_angle(theta, phi, lambda).matrix, 2)
            }
            Element::Phase { beta } => (
                DMatrix::from_element(1, 1, Complex64::from_polar(1.0, beta)),
                1,
            ),
        };
        if p.mode + width > m {
            return Err(PhotonicError::ModeOutOfRange {
                mode: p.mode + width - 1,
                m,
            });
        }
        // Left-multiplying by the embedding only touches rows mode..mode+width.
        let rows = u.rows(p.mode, width).into_owned();
        u.rows_mut(p.mode, width).copy_from(&(block * rows));
    }
    Ok(ModeUnitary { matrix: u })
}

/// Passive-element layout of the four-waveguide chip.
#[derive(Debug, Clone, PartialEq)]
pub struct ChipLayout {
    /// Splitting ratio of the two couplers in the first (modes 1–2) block.
    pub ratio_1: f64,
    /// Splitting ratio of the two couplers in the second (modes 2–3) block.
    pub ratio_2: f64,
    pub phi: f64,
    pub lambda: f64,
    /// Phase after the first coupler of each block, then after the second.
    pub phases: [f64; 2],
}

impl Default for ChipLayout {
    fn default() -> Self {
        use std::f64::consts::FRAC_PI_2;
        Self {
            ratio_1: 0.5,
            ratio_2: 0.5,
            phi: FRAC_PI_2,
            lambda: FRAC_PI_2,
            phases: [FRAC_PI_2, 0.0],
        }
    }
}

impl ChipLayout {
    /// Maps each interferometer block of the four-qubit circuit onto
    /// waveguide modes: coupler on the pair, phase on the lower mode,
    /// coupler, phase. Hadamards and CNOTs have no passive linear-optical
    /// counterpart and are left out.
    pub fn placements(&self) -> Vec<ElementPlacement> {
        let mut out = Vec::with_capacity(8);
        for (first, ratio) in [(1, self.ratio_1), (2, self.ratio_2)] {
            out.push(ElementPlacement::coupler(first, ratio, self.phi, self.lambda));
            out.push(ElementPlacement::phase(first + 1, self.phases[0]));
            out.push(ElementPlacement::coupler(first, ratio, self.phi, self.lambda));
            out.push(ElementPlacement::phase(first + 1, self.phases[1]));
        }
        out
    }

    pub fn unitary(&self) -> Result<ModeUnitary, PhotonicError> {
        compose_interferometer(&self.placements(), 4)
    }
}

fn check_square(a: &DMatrix<Complex64>) -> Result<usize, PhotonicError> {
    if !a.is_square() {
        return Err(PhotonicError::NotSquare {
            rows: a.nrows(),
            cols: a.ncols(),
        });
    }
    Ok(a.nrows())
}

/// Permanent by direct expansion over all `n!` permutations.
pub fn permanent_naive(a: &DMatrix<Complex64>) -> Result<Complex64, PhotonicError> {
    let n = check_square(a)?;
    if n > MAX_NAIVE_N {
        return Err(PhotonicError::Capacity {
            algorithm: "naive",
            n,
            max: MAX_NAIVE_N,
        });
    }
    fn expand(a: &DMatrix<Complex64>, row: usize, used: &mut [bool], prod: Complex64) -> Complex64 {
        if row == a.nrows() {
            return prod;
        }
        let mut total = Complex64::default();
        for col in 0..a.ncols() {
            if !used[col] {
                used[col] = true;
                total += expand(a, row + 1, used, prod * a[(row, col)]);
                used[col] = false;
            }
        }
        total
    }
    Ok(expand(a, 0, &mut vec![false; n], Complex64::new(1.0, 0.0)))
}

/// Neumaier-compensated complex accumulator.
#[derive(Debug, Default, Clone, Copy)]
struct CompensatedSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl CompensatedSum {
    fn add(&mut self, z: Complex64) {
        fn step(acc: &mut (f64, f64), x: f64) {
            let t = acc.0 + x;
            if acc.0.abs() >= x.abs() {
                acc.1 += (acc.0 - t) + x;
            } else {
                acc.1 += (x - t) + acc.0;
            }
            acc.0 = t;
        }
        step(&mut self.re, z.re);
        step(&mut self.im, z.im);
    }

    fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

/// Ryser's formula `perm A = (−1)^n Σ_S (−1)^{|S|} Π_i Σ_{j∈S} a_ij`,
/// enumerating column subsets in Gray-code order so each step adds or
/// removes one column from the running row sums.
///
/// The empty matrix has permanent 1.
pub fn permanent_ryser(a: &DMatrix<Complex64>) -> Result<Complex64, PhotonicError> {
    let n = check_square(a)?;
    if n == 0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if n > MAX_RYSER_N {
        return Err(PhotonicError::Capacity {
            algorithm: "Ryser",
            n,
            max: MAX_RYSER_N,
        });
    }
    // Column-major copy so a column update is a contiguous slice.
    let cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j).iter().copied().collect()).collect();
    let total: u64 = 1 << n;
    let chunks = if n >= RYSER_PARALLEL_MIN_N { RYSER_CHUNKS } else { 1 };
    let bounds: Vec<(u64, u64)> = (0..chunks)
        .map(|c| {
            let lo = 1 + (total - 1) * c / chunks;
            let hi = 1 + (total - 1) * (c + 1) / chunks;
            (lo, hi)
        })
        .collect();
    let partials: Vec<CompensatedSum> = if chunks > 1 {
        bounds.par_iter().map(|&(lo, hi)| ryser_sweep(&cols, lo, hi)).collect()
    } else {
        bounds.iter().map(|&(lo, hi)| ryser_sweep(&cols, lo, hi)).collect()
    };
    let mut acc = CompensatedSum::default();
    for p in &partials {
        acc.add(p.value());
    }
    let sum = acc.value();
    let signed = if n % 2 == 1 { -sum } else { sum };
    // `+ 0.0` turns a negated zero back into `+0.0`.
    Ok(Complex64::new(signed.re + 0.0, signed.im + 0.0))
}

/// Sums `(−1)^{|S|} Π_i rowsum_i(S)` over Gray-code steps `k ∈ [lo, hi)`.
fn ryser_sweep(cols: &[Vec<Complex64>], lo: u64, hi: u64) -> CompensatedSum {
    let n = cols.len();
    let gray = |k: u64| k ^ (k >> 1);
    let mut row_sums = vec![Complex64::default(); n];
    let start = gray(lo - 1);
    for (j, col) in cols.iter().enumerate() {
        if start >> j & 1 == 1 {
            for (s, x) in row_sums.iter_mut().zip(col) {
                *s += x;
            }
        }
    }
    let mut subset = start;
    let mut acc = CompensatedSum::default();
    for k in lo..hi {
        let j = k.trailing_zeros() as usize;
        subset ^= 1 << j;
        if subset >> j & 1 == 1 {
            for (s, x) in row_sums.iter_mut().zip(&cols[j]) {
                *s += x;
            }
        } else {
            for (s, x) in row_sums.iter_mut().zip(&cols[j]) {
                *s -= x;
            }
        }
        let prod: Complex64 = row_sums.iter().product();
        if subset.count_ones() % 2 == 1 {
            acc.add(-prod);
        } else {
            acc.add(prod);
        }
    }
    acc
}

/// Occupation numbers `|n_1, …, n_m⟩`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState(pub Vec<usize>);

impl FockState {
    pub fn modes(&self) -> usize {
        self.0.len()
    }

    pub fn photons(&self) -> usize {
        self.0.iter().sum()
    }

    /// Single photon in `mode`.
    pub fn single(m: usize, mode: usize) -> Self {
        let mut occ = vec![0; m];
        occ[mode] = 1;
        FockState(occ)
    }

    fn factorial_product(&self) -> f64 {
        self.0
            .iter()
            .map(|&k| (1..=k).map(|x| x as f64).product::<f64>())
            .product()
    }
}

impl fmt::Display for FockState {
    /// Digits concatenated, e.g. `(0, 3)` → `03`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in &self.0 {
            write!(f, "{k}")?;
        }
        Ok(())
    }
}

impl FromStr for FockState {
    type Err = PhotonicError;

    /// Comma-separated occupations, e.g. `0,0,0,3`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let occ = s
            .split(',')
            .map(|t| t.trim().parse::<usize>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| PhotonicError::BadState(s.to_string()))?;
        if occ.is_empty() {
            return Err(PhotonicError::BadState(s.to_string()));
        }
        Ok(FockState(occ))
    }
}

fn check_states(
    u: &ModeUnitary,
    input: &FockState,
    output: &FockState,
) -> Result<(), PhotonicError> {
    for s in [input, output] {
        if s.modes() != u.m() {
            return Err(PhotonicError::ModeMismatch {
                state: s.modes(),
                m: u.m(),
            });
        }
    }
    if input.photons() != output.photons() {
        return Err(PhotonicError::PhotonMismatch {
            input: input.photons(),
            output: output.photons(),
        });
    }
    Ok(())
}

/// `U_{in,out}`: column `j` of `U` repeated `in_j` times, row `i` repeated
/// `out_i` times.
pub fn fock_submatrix(
    u: &ModeUnitary,
    input: &FockState,
    output: &FockState,
) -> Result<DMatrix<Complex64>, PhotonicError> {
    check_states(u, input, output)?;
    let expand = |s: &FockState| -> Vec<usize> {
        s.0.iter()
            .enumerate()
            .flat_map(|(mode, &k)| std::iter::repeat_n(mode, k))
            .collect()
    };
    let (cols, rows) = (expand(input), expand(output));
    Ok(DMatrix::from_fn(rows.len(), cols.len(), |a, b| {
        u.matrix[(rows[a], cols[b])]
    }))
}

/// `|perm U_{in,out}|² / (Π in_i! Π out_j!)`.
pub fn transition_probability(
    u: &ModeUnitary,
    input: &FockState,
    output: &FockState,
) -> Result<f64, PhotonicError> {
    let sub = fock_submatrix(u, input, output)?;
    let perm = permanent_ryser(&sub)?;
    Ok(perm.norm_sqr() / (input.factorial_product() * output.factorial_product()))
}

/// Every `m`-mode occupation vector with `n` photons, lexicographically ascending.
pub fn fock_states(m: usize, n: usize) -> Vec<FockState> {
    fn fill(m: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<FockState>) {
        if prefix.len() == m - 1 {
            prefix.push(left);
            out.push(FockState(prefix.clone()));
            prefix.pop();
            return;
        }
        for k in 0..=left {
            prefix.push(k);
            fill(m, left - k, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if m > 0 {
        fill(m, n, &mut Vec::with_capacity(m), &mut out);
    }
    out
}

/// `C(n + m − 1, n)`, saturating.
pub fn fock_space_size(m: usize, n: usize) -> u128 {
    if m == 0 {
        return 0;
    }
    let mut c: u128 = 1;
    for i in 1..=n as u128 {
        c = c.saturating_mul(m as u128 - 1 + i) / i;
    }
    c
}

/// Probabilities of every output state reachable from `input`.
pub fn transition_distribution(
    u: &ModeUnitary,
    input: &FockState,
) -> Result<BTreeMap<FockState, f64>, PhotonicError> {
    if input.modes() != u.m() {
        return Err(PhotonicError::ModeMismatch {
            state: input.modes(),
            m: u.m(),
        });
    }
    let size = fock_space_size(u.m(), input.photons());
    if size > MAX_DISTRIBUTION_LEN {
        return Err(PhotonicError::DistributionTooLarge(size));
    }
    fock_states(u.m(), input.photons())
        .into_iter()
        .map(|out| {
            let p = transition_probability(u, input, &out)?;
            Ok((out, p))
        })
        .collect()
}
