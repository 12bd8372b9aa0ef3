#![allow(dead_code)]

use heqvpe_core::fermion::{FermionOperator, FermionTerm, Ladder, LadderKind};
use heqvpe_core::photonic::ModeUnitary;
use heqvpe_core::Complex64;
use nalgebra::DMatrix;
use rand::Rng;

pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn random_complex_matrix<R: Rng>(rng: &mut R, n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |_, _| {
        Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
    })
}

/// Q factor of a random complex matrix.
pub fn random_unitary<R: Rng>(rng: &mut R, m: usize) -> ModeUnitary {
    let q = random_complex_matrix(rng, m).qr().q();
    ModeUnitary::new(q).expect("Q is unitary")
}

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
