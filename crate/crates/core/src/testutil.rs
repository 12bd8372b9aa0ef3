use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::fermion::{FermionOperator, FermionTerm, Ladder, LadderKind};

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Random ladder strings of length 0..=max_len with complex coefficients.
pub fn random_fermion_operator<R: Rng>(
    rng: &mut R,
    n_modes: usize,
    n_terms: usize,
    max_len: usize,
) -> FermionOperator {
    let mut f = FermionOperator::zero(n_modes);
    for _ in 0..n_terms {
        let len = rng.gen_range(0..=max_len);
        let ops = (0..len)
            .map(|_| Ladder {
                kind: if rng.gen_bool(0.5) { LadderKind::Raise } else { LadderKind::Lower },
                mode: rng.gen_range(0..n_modes),
            })
            .collect();
        let c = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
        f.push(FermionTerm::new(c, ops)).unwrap();
    }
    f
}
