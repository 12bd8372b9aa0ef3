//! Pauli algebra and the Jordan-Wigner mapping of fermionic operators onto
//! qubits. Qubit `k` carries spin orbital `k`; qubit 0 is the least
//! significant bit of every basis index.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fermion::{FermionOperator, LadderKind};

/// Coefficients below this magnitude are dropped by [`PauliSum::simplify`].
pub const PAULI_CUTOFF: f64 = 1e-12;
pub const MAX_MATRIX_QUBITS: usize = 12;
/// Bit masks limit a string to 64 qubits.
pub const MAX_QUBITS: usize = 64;
pub const PAULI_SUM_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Error, PartialEq)]
pub enum JwError {
    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("{n_qubits} qubits exceeds the limit of {max}")]
    Capacity { n_qubits: usize, max: usize },
    #[error("invalid Pauli string {0:?}")]
    BadString(String),
    #[error("Pauli sum JSON: {0}")]
    Json(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    /// `self · other = phase · result`.
    fn product(self, other: Pauli) -> (Complex64, Pauli) {
        use Pauli::*;
        let i = Complex64::i();
        let one = Complex64::new(1.0, 0.0);
        match (self, other) {
            (I, p) | (p, I) => (one, p),
            (a, b) if a == b => (one, I),
            (X, Y) => (i, Z),
            (Y, X) => (-i, Z),
            (Y, Z) => (i, X),
            (Z, Y) => (-i, X),
            (Z, X) => (i, Y),
            (X, Z) => (-i, Y),
            _ => unreachable!(),
        }
    }

    fn to_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Paulis, stored as X/Z bit masks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n_qubits: usize,
    x: u64,
    z: u64,
}

impl PauliString {
    pub fn identity(n_qubits: usize) -> Self {
        assert!(n_qubits <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            n_qubits,
            x: 0,
            z: 0,
        }
    }

    /// A string with `op` on `qubit` and identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, op: Pauli) -> Self {
        let mut s = Self::identity(n_qubits);
        s.set(qubit, op);
        s
    }

    pub fn from_ops(ops: &[Pauli]) -> Self {
        let mut s = Self::identity(ops.len());
        for (k, &op) in ops.iter().enumerate() {
            s.set(k, op);
        }
        s
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn get(&self, qubit: usize) -> Pauli {
        Pauli::from_bits(self.x >> qubit & 1 == 1, self.z >> qubit & 1 == 1)
    }

    pub fn set(&mut self, qubit: usize, op: Pauli) {
        assert!(qubit < self.n_qubits, "qubit {qubit} out of range");
        let (x, z) = op.bits();
        let bit = 1u64 << qubit;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Qubits on which the string acts non-trivially.
    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// `P|b⟩ = phase · |b'⟩`; returns `(phase, b')`.
    pub fn apply(&self, basis: usize) -> (Complex64, usize) {
        let b = basis as u64;
        let n_y = (self.x & self.z).count_ones();
        let mut phase = match n_y % 4 {
            0 => Complex64::new(1.0, 0.0),
            1 => Complex64::i(),
            2 => Complex64::new(-1.0, 0.0),
            _ => -Complex64::i(),
        };
        if (b & self.z).count_ones() % 2 == 1 {
            phase = -phase;
        }
        (phase, (b ^ self.x) as usize)
    }

    /// Qubit-wise product with phase tracking.
    pub fn product(&self, other: &PauliString) -> (Complex64, PauliString) {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        let mut phase = Complex64::new(1.0, 0.0);
        let mut out = PauliString::identity(self.n_qubits);
        let active = self.support() | other.support();
        for k in (0..self.n_qubits).filter(|k| active >> k & 1 == 1) {
            let (ph, p) = self.get(k).product(other.get(k));
            phase *= ph;
            out.set(k, p);
        }
        (phase, out)
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // Same order as comparing the printed strings.
        self.n_qubits.cmp(&other.n_qubits).then_with(|| {
            (0..self.n_qubits)
                .map(|k| self.get(k).cmp(&other.get(k)))
                .find(|o| o.is_ne())
                .unwrap_or(std::cmp::Ordering::Equal)
        })
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PauliString {
    /// Qubit 0 is the first character.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for k in 0..self.n_qubits {
            write!(f, "{}", self.get(k).to_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = JwError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.len() > MAX_QUBITS {
            return Err(JwError::BadString(s.to_string()));
        }
        let ops = s
            .chars()
            .map(|c| match c {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(JwError::BadString(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ops.is_empty() {
            return Err(JwError::BadString(s.to_string()));
        }
        Ok(PauliString::from_ops(&ops))
    }
}

/// A weighted sum of Pauli strings on a fixed number of qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSum {
    n_qubits: usize,
    terms: Vec<(Complex64, PauliString)>,
}

impl PauliSum {
    pub fn zero(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_qubits: usize, coeff: Complex64) -> Self {
        Self::from_terms(n_qubits, vec![(coeff, PauliString::identity(n_qubits))])
    }

    pub fn from_terms(n_qubits: usize, terms: Vec<(Complex64, PauliString)>) -> Self {
        assert!(
            terms.iter().all(|(_, s)| s.n_qubits == n_qubits),
            "qubit count mismatch"
        );
        Self { n_qubits, terms }
    }

    /// Convenience for real-weighted sums written as strings, e.g. `[(0.5, "ZI")]`.
    pub fn from_labels(labels: &[(f64, &str)]) -> Result<Self, JwError> {
        let strings = labels
            .iter()
            .map(|(c, s)| Ok((Complex64::new(*c, 0.0), s.parse::<PauliString>()?)))
            .collect::<Result<Vec<_>, JwError>>()?;
        let n = strings.first().map_or(0, |(_, s)| s.n_qubits);
        if strings.iter().any(|(_, s)| s.n_qubits != n) {
            return Err(JwError::BadString("strings of unequal length".into()));
        }
        Ok(Self::from_terms(n, strings))
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[(Complex64, PauliString)] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_qubits: self.n_qubits,
            terms: self.terms.iter().map(|(c, s)| (c * factor, *s)).collect(),
        }
    }

    pub fn add(&self, other: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    /// Operator product `self · other`, unsimplified.
    pub fn mul(&self, other: &PauliSum) -> PauliSum {
        assert_eq!(self.n_qubits, other.n_qubits, "qubit count mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ca, a) in &self.terms {
            for (cb, b) in &other.terms {
                let (phase, s) = a.product(b);
                terms.push((ca * cb * phase, s));
            }
        }
        Self {
            n_qubits: self.n_qubits,
            terms,
        }
    }

    /// Merges equal strings (sorted by string) and drops `|c| < 1e-12`.
    pub fn simplify(&self) -> PauliSum {
        let mut merged: BTreeMap<PauliString, Complex64> = BTreeMap::new();
        for (c, s) in &self.terms {
            *merged.entry(*s).or_default() += c;
        }
        Self::from_merged(self.n_qubits, merged)
    }

    fn from_merged(n_qubits: usize, merged: BTreeMap<PauliString, Complex64>) -> Self {
        Self {
            n_qubits,
            terms: merged
                .into_iter()
                .filter(|(_, c)| c.norm() >= PAULI_CUTOFF)
                .map(|(s, c)| (c, s))
                .collect(),
        }
    }

    /// Largest imaginary part over all coefficients. A simplified sum is
    /// Hermitian exactly when this is zero.
    pub fn max_imag(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c.im.abs()).fold(0.0, f64::max)
    }

    pub fn to_json(&self) -> String {
        let doc = PauliSumDoc {
            schema_version: PAULI_SUM_SCHEMA_VERSION,
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|(c, s)| PauliTermDoc {
                    coeff: [c.re, c.im],
                    string: s.to_string(),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("pauli sum serializes")
    }

    /// Accepts the versioned object or a bare list of `{coeff, string}`.
    pub fn from_json(text: &str) -> Result<Self, JwError> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Doc {
            Versioned(PauliSumDoc),
            Bare(Vec<PauliTermDoc>),
        }
        let doc: Doc = serde_json::from_str(text).map_err(|e| JwError::Json(e.to_string()))?;
        let (n_qubits, items) = match doc {
            Doc::Versioned(d) => {
                if d.schema_version > PAULI_SUM_SCHEMA_VERSION {
                    return Err(JwError::Json(format!(
                        "unsupported schema_version {}",
                        d.schema_version
                    )));
                }
                (Some(d.n_qubits), d.terms)
            }
            Doc::Bare(t) => (None, t),
        };
        let n_qubits = match n_qubits.or_else(|| items.first().map(|t| t.string.len())) {
            Some(n) => n,
            None => return Err(JwError::Json("cannot infer qubit count".into())),
        };
        if n_qubits > MAX_QUBITS {
            return Err(JwError::Capacity {
                n_qubits,
                max: MAX_QUBITS,
            });
        }
        let mut terms = Vec::with_capacity(items.len());
        for item in items {
            let s: PauliString = item.string.parse()?;
            if s.n_qubits != n_qubits {
                return Err(JwError::BadString(item.string));
            }
            let c = Complex64::new(item.coeff[0], item.coeff[1]);
            if !(c.re.is_finite() && c.im.is_finite()) {
                return Err(JwError::Json(format!("non-finite coefficient on {s}")));
            }
            terms.push((c, s));
        }
        Ok(Self { n_qubits, terms })
    }
}

#[derive(Serialize, Deserialize)]
struct PauliSumDoc {
    schema_version: u32,
    n_qubits: usize,
    terms: Vec<PauliTermDoc>,
}

#[derive(Serialize, Deserialize)]
struct PauliTermDoc {
    coeff: [f64; 2],
    string: String,
}

/// `Z_0 ⋯ Z_{p-1} · ½(X_p − iY_p)` for a raise, `½(X_p + iY_p)` for a lower.
///
/// An occupied mode is bit 1 (Z eigenvalue −1), so the raise is `|1⟩⟨0|`
/// and `a_p^ a_p = ½(I − Z_p)`.
pub fn jw_ladder(p: usize, kind: LadderKind, n: usize) -> Result<PauliSum, JwError> {
    if p >= n {
        return Err(JwError::ModeOutOfRange { mode: p, n_modes: n });
    }
    if n > MAX_QUBITS {
        return Err(JwError::Capacity {
            n_qubits: n,
            max: MAX_QUBITS,
        });
    }
    let mut chain = PauliString::identity(n);
    for k in 0..p {
        chain.set(k, Pauli::Z);
    }
    let mut xs = chain;
    xs.set(p, Pauli::X);
    let mut ys = chain;
    ys.set(p, Pauli::Y);
    let y_coeff = match kind {
        LadderKind::Raise => Complex64::new(0.0, -0.5),
        LadderKind::Lower => Complex64::new(0.0, 0.5),
    };
    Ok(PauliSum::from_terms(
        n,
        vec![(Complex64::new(0.5, 0.0), xs), (y_coeff, ys)],
    ))
}

/// Maps every term through [`jw_ladder`] products and simplifies.
///
/// Each term is expanded independently (in parallel) into its own sorted
/// map; the maps are then merged in term order, so the result does not
/// depend on the worker count.
pub fn jw_transform(f: &FermionOperator) -> Result<PauliSum, JwError> {
    let n = f.n_modes();
    let per_term: Vec<BTreeMap<PauliString, Complex64>> = f
        .terms()
        .par_iter()
        .map(|term| {
            let mut acc = PauliSum::identity(n, term.coefficient);
            for l in &term.ops {
                acc = acc.mul(&jw_ladder(l.mode, l.kind, n)?);
            }
            let mut local = BTreeMap::new();
            for (c, s) in acc.terms {
                *local.entry(s).or_default() += c;
            }
            Ok(local)
        })
        .collect::<Result<_, JwError>>()?;
    let mut merged: BTreeMap<PauliString, Complex64> = BTreeMap::new();
    for local in per_term {
        for (s, c) in local {
            *merged.entry(s).or_default() += c;
        }
    }
    Ok(PauliSum::from_merged(n, merged))
}

/// Dense `Σ c · P` with qubit 0 least significant.
pub fn pauli_to_matrix(ps: &PauliSum) -> Result<DMatrix<Complex64>, JwError> {
    let n = ps.n_qubits;
    if n > MAX_MATRIX_QUBITS {
        return Err(JwError::Capacity {
            n_qubits: n,
            max: MAX_MATRIX_QUBITS,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for (c, s) in &ps.terms {
        for col in 0..dim {
            let (phase, row) = s.apply(col);
            m[(row, col)] += c * phase;
        }
    }
    Ok(m)
}
