//! Molecular electron integrals: FCIDUMP-style ingest, validation and the
//! spatial → spin-orbital expansion.
//!
//! Two-electron values use physicist ordering `<pq|rs>`, i.e.
//! `∫ φp*(1) φq*(2) r12⁻¹ φr(1) φs(2)`. Files use 1-based orbital indices;
//! everything in memory is 0-based.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use num_complex::Complex64;
use thiserror::Error;

/// Tolerance for the hermiticity / permutational symmetry checks.
pub const SYMMETRY_TOL: f64 = 1e-12;

/// He, STO-3G, one spatial orbital (two spin orbitals).
pub const HE_STO3G: &str = include_str!("../data/he_sto3g.fcidump");
/// He, 6-31G, two spatial orbitals (four spin orbitals).
pub const HE_631G: &str = include_str!("../data/he_631g.fcidump");

#[derive(Debug, Error)]
pub enum IntegralsError {
    #[error("cannot read integral file {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: orbital index {index} out of range 1..={n_orbitals}")]
    Bounds {
        line: usize,
        index: usize,
        n_orbitals: usize,
    },
    #[error("{symmetry} violated at {indices:?}: {lhs} vs {rhs}")]
    Validation {
        symmetry: &'static str,
        indices: Vec<usize>,
        lhs: Complex64,
        rhs: Complex64,
    },
    #[error("NELEC={n_electrons} exceeds 2*NORB={}", 2 * n_orbitals)]
    TooManyElectrons {
        n_electrons: usize,
        n_orbitals: usize,
    },
}

/// Spatial-orbital integrals `h_pq`, `<pq|rs>` and a constant core energy.
#[derive(Debug, Clone, PartialEq)]
pub struct MolecularIntegrals {
    n_orbitals: usize,
    n_electrons: usize,
    e_core: f64,
    h: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl MolecularIntegrals {
    /// All-zero integrals for `n_orbitals` spatial orbitals.
    pub fn zeros(n_orbitals: usize, n_electrons: usize, e_core: f64) -> Self {
        Self {
            n_orbitals,
            n_electrons,
            e_core,
            h: vec![Complex64::default(); n_orbitals.pow(2)],
            v: vec![Complex64::default(); n_orbitals.pow(4)],
        }
    }

    pub fn n_orbitals(&self) -> usize {
        self.n_orbitals
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn h(&self, p: usize, q: usize) -> Complex64 {
        self.h[p * self.n_orbitals + q]
    }

    pub fn v(&self, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
        self.v[idx4(self.n_orbitals, p, q, r, s)]
    }

    pub fn set_h(&mut self, p: usize, q: usize, value: Complex64) {
        self.h[p * self.n_orbitals + q] = value;
    }

    pub fn set_v(&mut self, p: usize, q: usize, r: usize, s: usize, value: Complex64) {
        let i = idx4(self.n_orbitals, p, q, r, s);
        self.v[i] = value;
    }

    pub fn set_e_core(&mut self, e_core: f64) {
        self.e_core = e_core;
    }

    /// Reads and validates an integral file.
    pub fn load(path: impl AsRef<Path>) -> Result<Self, IntegralsError> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|source| IntegralsError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text)
    }

    /// Parses and validates integral file contents.
    pub fn parse(text: &str) -> Result<Self, IntegralsError> {
        let mut ints: Option<Self> = None;
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some(ints) = ints.as_mut() else {
                ints = Some(parse_header(line, line_no)?);
                continue;
            };
            if line.eq_ignore_ascii_case("&end") || line == "/" {
                continue;
            }
            let (value, indices) = parse_body_line(line, line_no)?;
            let norb = ints.n_orbitals;
            for &i in &indices {
                if i > norb {
                    return Err(IntegralsError::Bounds {
                        line: line_no,
                        index: i,
                        n_orbitals: norb,
                    });
                }
            }
            match indices {
                [0, 0, 0, 0] => {
                    if value.im != 0.0 {
                        return Err(parse_err(line_no, "core energy must be real"));
                    }
                    ints.e_core = value.re;
                }
                [p, q, 0, 0] if p > 0 && q > 0 => ints.set_h(p - 1, q - 1, value),
                [p, q, r, s] if p > 0 && q > 0 && r > 0 && s > 0 => {
                    ints.set_v(p - 1, q - 1, r - 1, s - 1, value)
                }
                _ => {
                    return Err(parse_err(
                        line_no,
                        format!("invalid index pattern {indices:?}"),
                    ))
                }
            }
        }
        let ints = ints.ok_or_else(|| parse_err(0, "missing &FCI header"))?;
        ints.validate()?;
        Ok(ints)
    }

    /// Checks hermiticity of `h`, the `<pq|rs>` symmetries and the electron count.
    pub fn validate(&self) -> Result<(), IntegralsError> {
        let n = self.n_orbitals;
        if self.n_electrons > 2 * n {
            return Err(IntegralsError::TooManyElectrons {
                n_electrons: self.n_electrons,
                n_orbitals: n,
            });
        }
        check_symmetries(n, &self.h, &self.v)
    }

    /// Writes every nonzero entry back out in the file format.
    pub fn to_fcidump(&self) -> String {
        let n = self.n_orbitals;
        let mut out = format!(
            "&FCI NORB={} NELEC={} E_CORE={}\n",
            n,
            self.n_electrons,
            fmt_real(self.e_core)
        );
        for p in 0..n {
            for q in 0..n {
                for r in 0..n {
                    for s in 0..n {
                        let x = self.v(p, q, r, s);
                        if x != Complex64::default() {
                            let _ = writeln!(
                                out,
                                "{} {} {} {} {}",
                                fmt_value(x),
                                p + 1,
                                q + 1,
                                r + 1,
                                s + 1
                            );
                        }
                    }
                }
            }
        }
        for p in 0..n {
            for q in 0..n {
                let x = self.h(p, q);
                if x != Complex64::default() {
                    let _ = writeln!(out, "{} {} {} 0 0", fmt_value(x), p + 1, q + 1);
                }
            }
        }
        out
    }
}

/// Spin-orbital integrals. Spatial orbital `i` maps to spin orbitals `2i`
/// (up) and `2i + 1` (down).
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOrbitalIntegrals {
    n_spin_orbitals: usize,
    n_electrons: usize,
    e_core: f64,
    h: Vec<Complex64>,
    v: Vec<Complex64>,
}

impl SpinOrbitalIntegrals {
    pub fn n_spin_orbitals(&self) -> usize {
        self.n_spin_orbitals
    }

    pub fn n_electrons(&self) -> usize {
        self.n_electrons
    }

    pub fn e_core(&self) -> f64 {
        self.e_core
    }

    pub fn h(&self, p: usize, q: usize) -> Complex64 {
        self.h[p * self.n_spin_orbitals + q]
    }

    pub fn v(&self, p: usize, q: usize, r: usize, s: usize) -> Complex64 {
        self.v[idx4(self.n_spin_orbitals, p, q, r, s)]
    }

    pub fn set_h(&mut self, p: usize, q: usize, value: Complex64) {
        self.h[p * self.n_spin_orbitals + q] = value;
    }

    /// Overwrites one raw entry; no spin delta is enforced here.
    pub fn set_v(&mut self, p: usize, q: usize, r: usize, s: usize, value: impl Into<Complex64>) {
        let i = idx4(self.n_spin_orbitals, p, q, r, s);
        self.v[i] = value.into();
    }

    pub fn validate(&self) -> Result<(), IntegralsError> {
        check_symmetries(self.n_spin_orbitals, &self.h, &self.v)
    }
}

/// Expands spatial integrals onto spin orbitals with spin-conservation deltas.
pub fn expand_to_spin_orbitals(mi: &MolecularIntegrals) -> SpinOrbitalIntegrals {
    let m = mi.n_orbitals;
    let n = 2 * m;
    let mut h = vec![Complex64::default(); n * n];
    let mut v = vec![Complex64::default(); n.pow(4)];
    for p in 0..n {
        for q in 0..n {
            if p % 2 == q % 2 {
                h[p * n + q] = mi.h(p / 2, q / 2);
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                if p % 2 != r % 2 {
                    continue;
                }
                for s in 0..n {
                    if q % 2 == s % 2 {
                        v[idx4(n, p, q, r, s)] = mi.v(p / 2, q / 2, r / 2, s / 2);
                    }
                }
            }
        }
    }
    SpinOrbitalIntegrals {
        n_spin_orbitals: n,
        n_electrons: mi.n_electrons,
        e_core: mi.e_core,
        h,
        v,
    }
}

fn idx4(n: usize, p: usize, q: usize, r: usize, s: usize) -> usize {
    ((p * n + q) * n + r) * n + s
}

fn check_symmetries(n: usize, h: &[Complex64], v: &[Complex64]) -> Result<(), IntegralsError> {
    for p in 0..n {
        for q in 0..n {
            let a = h[p * n + q];
            let b = h[q * n + p].conj();
            if (a - b).norm() > SYMMETRY_TOL {
                return Err(IntegralsError::Validation {
                    symmetry: "hermiticity h_pq = conj(h_qp)",
                    indices: vec![p, q],
                    lhs: a,
                    rhs: b,
                });
            }
        }
    }
    for p in 0..n {
        for q in 0..n {
            for r in 0..n {
                for s in 0..n {
                    let a = v[idx4(n, p, q, r, s)];
                    let b = v[idx4(n, s, r, q, p)].conj();
                    if (a - b).norm() > SYMMETRY_TOL {
                        return Err(IntegralsError::Validation {
                            symmetry: "hermiticity v_pqrs = conj(v_srqp)",
                            indices: vec![p, q, r, s],
                            lhs: a,
                            rhs: b,
                        });
                    }
                    let c = v[idx4(n, q, p, s, r)];
                    if (a - c).norm() > SYMMETRY_TOL {
                        return Err(IntegralsError::Validation {
                            symmetry: "particle exchange v_pqrs = v_qpsr",
                            indices: vec![p, q, r, s],
                            lhs: a,
                            rhs: c,
                        });
                    }
                }
            }
        }
    }
    Ok(())
}

fn parse_err(line: usize, message: impl Into<String>) -> IntegralsError {
    IntegralsError::Parse {
        line,
        message: message.into(),
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<MolecularIntegrals, IntegralsError> {
    let mut tokens = line.split(|c: char| c.is_whitespace() || c == ',');
    if !tokens
        .next()
        .is_some_and(|t| t.eq_ignore_ascii_case("&fci"))
    {
        return Err(parse_err(line_no, "expected header starting with &FCI"));
    }
    let (mut norb, mut nelec, mut e_core) = (None, None, 0.0);
    for tok in tokens.filter(|t| !t.is_empty()) {
        if tok == "/" || tok.eq_ignore_ascii_case("&end") {
            continue;
        }
        let Some((key, value)) = tok.split_once('=') else {
            return Err(parse_err(line_no, format!("malformed header token {tok:?}")));
        };
        let bad = |_| parse_err(line_no, format!("bad value for {key}: {value:?}"));
        match key.to_ascii_uppercase().as_str() {
            "NORB" => norb = Some(value.parse::<usize>().map_err(bad)?),
            "NELEC" => nelec = Some(value.parse::<usize>().map_err(bad)?),
            "E_CORE" => {
                e_core = value
                    .parse::<f64>()
                    .map_err(|_| parse_err(line_no, format!("bad value for E_CORE: {value:?}")))?
            }
            // MS2, ORBSYM, ISYM and friends carry nothing we use.
            _ => {}
        }
    }
    let norb = norb.ok_or_else(|| parse_err(line_no, "header lacks NORB"))?;
    if norb == 0 {
        return Err(parse_err(line_no, "NORB must be positive"));
    }
    let nelec = nelec.ok_or_else(|| parse_err(line_no, "header lacks NELEC"))?;
    if nelec == 0 {
        return Err(parse_err(line_no, "NELEC must be positive"));
    }
    Ok(MolecularIntegrals::zeros(norb, nelec, e_core))
}

fn parse_body_line(line: &str, line_no: usize) -> Result<(Complex64, [usize; 4]), IntegralsError> {
    // The value may be `x`, `(x)` or `(re,im)`; split it off before the indices.
    let (value_str, rest) = if let Some(stripped) = line.strip_prefix('(') {
        let close = stripped
            .find(')')
            .ok_or_else(|| parse_err(line_no, "unclosed parenthesis"))?;
        (&stripped[..close], &stripped[close + 1..])
    } else {
        line.split_once(char::is_whitespace)
            .ok_or_else(|| parse_err(line_no, "expected a value followed by four indices"))?
    };
    let value = parse_value(value_str.trim())
        .ok_or_else(|| parse_err(line_no, format!("bad numeric value {value_str:?}")))?;
    let idx: Vec<&str> = rest.split_whitespace().collect();
    if idx.len() != 4 {
        return Err(parse_err(
            line_no,
            format!("expected 4 indices, found {}", idx.len()),
        ));
    }
    let mut out = [0usize; 4];
    for (slot, tok) in out.iter_mut().zip(&idx) {
        *slot = tok
            .parse()
            .map_err(|_| parse_err(line_no, format!("bad index {tok:?}")))?;
    }
    Ok((value, out))
}

fn parse_value(s: &str) -> Option<Complex64> {
    let parse = |t: &str| t.trim().replace(['d', 'D'], "e").parse::<f64>().ok();
    let value = match s.split_once(',') {
        Some((re, im)) => Complex64::new(parse(re)?, parse(im)?),
        None => Complex64::new(parse(s)?, 0.0),
    };
    (value.re.is_finite() && value.im.is_finite()).then_some(value)
}

fn fmt_real(x: f64) -> String {
    // `{:?}` gives the shortest round-tripping form and always keeps a decimal point.
    format!("{x:?}")
}

fn fmt_value(x: Complex64) -> String {
    if x.im == 0.0 {
        fmt_real(x.re)
    } else {
        format!("({},{})", fmt_real(x.re), fmt_real(x.im))
    }
}
