//! Second-quantized operators and the molecular Hamiltonian builder, plus an
//! occupation-number matrix representation that does not go through any
//! qubit mapping.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul};

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

use crate::integrals::SpinOrbitalIntegrals;

/// Coefficients below this magnitude are dropped by [`FermionOperator::simplify`].
pub const COEFF_CUTOFF: f64 = 1e-14;
/// Largest mode count accepted by [`fermion_to_matrix`].
pub const MAX_MATRIX_MODES: usize = 12;

#[derive(Debug, Error, PartialEq)]
pub enum FermionError {
    #[error("mode {mode} out of range for {n_modes} modes")]
    ModeOutOfRange { mode: usize, n_modes: usize },
    #[error("{n_modes} modes exceeds the dense-matrix limit of {max}")]
    Capacity { n_modes: usize, max: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum LadderKind {
    Raise,
    Lower,
}

/// A single creation (`Raise`) or annihilation (`Lower`) operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ladder {
    pub kind: LadderKind,
    pub mode: usize,
}

impl Ladder {
    pub fn raise(mode: usize) -> Self {
        Self {
            kind: LadderKind::Raise,
            mode,
        }
    }

    pub fn lower(mode: usize) -> Self {
        Self {
            kind: LadderKind::Lower,
            mode,
        }
    }
}

impl fmt::Display for Ladder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            LadderKind::Raise => write!(f, "a{}^", self.mode),
            LadderKind::Lower => write!(f, "a{}", self.mode),
        }
    }
}

/// `coefficient · ops[0] ops[1] …` (leftmost acts last).
#[derive(Debug, Clone, PartialEq)]
pub struct FermionTerm {
    pub coefficient: Complex64,
    pub ops: Vec<Ladder>,
}

impl FermionTerm {
    pub fn new(coefficient: Complex64, ops: Vec<Ladder>) -> Self {
        Self { coefficient, ops }
    }

    /// Reorders to raises-then-lowers with ascending modes, tracking the
    /// anticommutation sign. Returns `None` when the string vanishes. If a
    /// lower has to pass a raise on the same mode the given order is kept.
    fn canonical(&self) -> Option<(Vec<Ladder>, f64)> {
        let mut ops = self.ops.clone();
        let mut sign = 1.0;
        let rank = |l: &Ladder| (l.kind, l.mode);
        // Bubble sort: every swap is one anticommutation.
        for end in (1..ops.len()).rev() {
            for i in 0..end {
                if rank(&ops[i]) > rank(&ops[i + 1]) {
                    if ops[i].mode == ops[i + 1].mode {
                        return Some((self.ops.clone(), 1.0)).filter(|_| !has_repeat(&self.ops));
                    }
                    ops.swap(i, i + 1);
                    sign = -sign;
                }
            }
        }
        if has_repeat(&ops) {
            return None;
        }
        Some((ops, sign))
    }
}

// `a_p a_p` or `a_p^ a_p^` adjacent: identically zero.
fn has_repeat(ops: &[Ladder]) -> bool {
    ops.windows(2).any(|w| w[0] == w[1])
}

/// A weighted sum of ladder-operator strings over `n_modes` fermionic modes.
#[derive(Debug, Clone, PartialEq)]
pub struct FermionOperator {
    n_modes: usize,
    terms: Vec<FermionTerm>,
}

impl FermionOperator {
    pub fn zero(n_modes: usize) -> Self {
        Self {
            n_modes,
            terms: Vec::new(),
        }
    }

    pub fn identity(n_modes: usize, coefficient: Complex64) -> Self {
        Self {
            n_modes,
            terms: vec![FermionTerm::new(coefficient, Vec::new())],
        }
    }

    /// A single term; fails if any mode index is out of range.
    pub fn from_term(
        n_modes: usize,
        coefficient: Complex64,
        ops: Vec<Ladder>,
    ) -> Result<Self, FermionError> {
        let mut op = Self::zero(n_modes);
        op.push(FermionTerm::new(coefficient, ops))?;
        Ok(op)
    }

    pub fn push(&mut self, term: FermionTerm) -> Result<(), FermionError> {
        if let Some(l) = term.ops.iter().find(|l| l.mode >= self.n_modes) {
            return Err(FermionError::ModeOutOfRange {
                mode: l.mode,
                n_modes: self.n_modes,
            });
        }
        self.terms.push(term);
        Ok(())
    }

    pub fn n_modes(&self) -> usize {
        self.n_modes
    }

    pub fn terms(&self) -> &[FermionTerm] {
        &self.terms
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            n_modes: self.n_modes,
            terms: self
                .terms
                .iter()
                .map(|t| FermionTerm::new(t.coefficient * factor, t.ops.clone()))
                .collect(),
        }
    }

    /// Hermitian conjugate: reverse each string, swap raise/lower, conjugate.
    pub fn adjoint(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| {
                let ops = t
                    .ops
                    .iter()
                    .rev()
                    .map(|l| Ladder {
                        mode: l.mode,
                        kind: match l.kind {
                            LadderKind::Raise => LadderKind::Lower,
                            LadderKind::Lower => LadderKind::Raise,
                        },
                    })
                    .collect();
                FermionTerm::new(t.coefficient.conj(), ops)
            })
            .collect();
        Self {
            n_modes: self.n_modes,
            terms,
        }
    }

    /// Merges terms with the same canonical string and drops negligible ones.
    pub fn simplify(&self) -> Self {
        let mut merged: BTreeMap<Vec<Ladder>, Complex64> = BTreeMap::new();
        for term in &self.terms {
            if let Some((ops, sign)) = term.canonical() {
                *merged.entry(ops).or_default() += term.coefficient * sign;
            }
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| c.norm() >= COEFF_CUTOFF)
            .map(|(ops, c)| FermionTerm::new(c, ops))
            .collect();
        Self {
            n_modes: self.n_modes,
            terms,
        }
    }
}

impl Add for &FermionOperator {
    type Output = FermionOperator;

    fn add(self, rhs: &FermionOperator) -> FermionOperator {
        assert_eq!(self.n_modes, rhs.n_modes, "mode count mismatch");
        let mut terms = self.terms.clone();
        terms.extend(rhs.terms.iter().cloned());
        FermionOperator {
            n_modes: self.n_modes,
            terms,
        }
    }
}

impl Mul for &FermionOperator {
    type Output = FermionOperator;

    fn mul(self, rhs: &FermionOperator) -> FermionOperator {
        assert_eq!(self.n_modes, rhs.n_modes, "mode count mismatch");
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for a in &self.terms {
            for b in &rhs.terms {
                let mut ops = a.ops.clone();
                ops.extend_from_slice(&b.ops);
                terms.push(FermionTerm::new(a.coefficient * b.coefficient, ops));
            }
        }
        FermionOperator {
            n_modes: self.n_modes,
            terms,
        }
    }
}

/// `H = Σ h_pq a_p^ a_q + ½ Σ <pq|rs> a_p^ a_q^ a_s a_r + E_core`.
///
/// Terms come out as: identity, one-body in `(p, q)` order, two-body in
/// `(p, q, r, s)` order. Zero coefficients are skipped.
pub fn build_hamiltonian(soi: &SpinOrbitalIntegrals) -> FermionOperator {
    let n = soi.n_spin_orbitals();
    let mut terms = Vec::new();
    if soi.e_core().abs() >= COEFF_CUTOFF {
        terms.push(FermionTerm::new(Complex64::new(soi.e_core(), 0.0), Vec::new()));
    }
    for p in 0..n {
        for q in 0..n {
            let h = soi.h(p, q);
            if h.norm() >= COEFF_CUTOFF {
                terms.push(FermionTerm::new(h, vec![Ladder::raise(p), Ladder::lower(q)]));
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            if p == q {
                continue;
            }
            for r in 0..n {
                for s in 0..n {
                    let v = soi.v(p, q, r, s);
                    if r == s || v.norm() < COEFF_CUTOFF {
                        continue;
                    }
                    terms.push(FermionTerm::new(
                        0.5 * v,
                        vec![
                            Ladder::raise(p),
                            Ladder::raise(q),
                            Ladder::lower(s),
                            Ladder::lower(r),
                        ],
                    ));
                }
            }
        }
    }
    FermionOperator { n_modes: n, terms }
}

/// Applies a ladder string (rightmost first) to occupation basis state `state`.
/// Mode `k` is bit `k`. Returns the sign and the resulting state, or `None`.
pub(crate) fn apply_ladders(ops: &[Ladder], mut state: usize) -> Option<(f64, usize)> {
    let mut sign = 1.0;
    for l in ops.iter().rev() {
        let bit = 1usize << l.mode;
        let occupied = state & bit != 0;
        match (l.kind, occupied) {
            (LadderKind::Raise, true) | (LadderKind::Lower, false) => return None,
            _ => {}
        }
        if (state & (bit - 1)).count_ones() % 2 == 1 {
            sign = -sign;
        }
        state ^= bit;
    }
    Some((sign, state))
}

/// Dense matrix of `f` in the occupation-number basis (mode 0 = least
/// significant bit), built directly from fermionic parity signs.
pub fn fermion_to_matrix(f: &FermionOperator) -> Result<DMatrix<Complex64>, FermionError> {
    let n = f.n_modes;
    if n > MAX_MATRIX_MODES {
        return Err(FermionError::Capacity {
            n_modes: n,
            max: MAX_MATRIX_MODES,
        });
    }
    let dim = 1usize << n;
    let mut m = DMatrix::zeros(dim, dim);
    for term in &f.terms {
        for col in 0..dim {
            if let Some((sign, row)) = apply_ladders(&term.ops, col) {
                m[(row, col)] += term.coefficient * sign;
            }
        }
    }
    Ok(m)
}

/// `Σ_p a_p^ a_p`.
pub fn number_operator(n_modes: usize) -> FermionOperator {
    FermionOperator {
        n_modes,
        terms: (0..n_modes)
            .map(|p| FermionTerm::new(Complex64::new(1.0, 0.0), vec![Ladder::raise(p), Ladder::lower(p)]))
            .collect(),
    }
}
