use heqvpe_core::jw::PauliSum;
use heqvpe_core::qsim::{expectation, sample_energy, Circuit, Gate, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn plus_state() -> StateVector {
    let mut s = StateVector::zero(1);
    s.apply(&Gate::h(0)).unwrap();
    s
}

fn z() -> PauliSum {
    PauliSum::from_labels(&[(1.0, "Z")]).unwrap()
}

#[test]
fn plus_state_z_mean_within_five_sigma() {
    let est = sample_energy(&plus_state(), &z(), 100_000, 1).unwrap();
    assert!(est.mean.abs() < 5.0 * est.stderr, "{} vs {}", est.mean, est.stderr);
}

#[test]
fn stderr_scales_as_inverse_root_shots() {
    let small = sample_energy(&plus_state(), &z(), 1_000, 2).unwrap();
    let large = sample_energy(&plus_state(), &z(), 100_000, 3).unwrap();
    let ratio = small.stderr / large.stderr;
    assert!((8.0..=12.0).contains(&ratio), "{ratio}");
}

#[test]
fn fixed_seed_reproduces_counts() {
    let h = PauliSum::from_labels(&[(0.5, "ZI"), (-0.3, "XX"), (0.2, "YY"), (1.0, "II")]).unwrap();
    let mut c = Circuit::new(2);
    c.push(Gate::u3(0, 0.7, 0.1, 0.2)).unwrap();
    c.push(Gate::cnot(0, 1)).unwrap();
    let s = c.run(&[]).unwrap();
    let a = sample_energy(&s, &h, 5_000, 42).unwrap();
    let b = sample_energy(&s, &h, 5_000, 42).unwrap();
    assert_eq!(a, b);
    let other = sample_energy(&s, &h, 5_000, 43).unwrap();
    assert_ne!(a.per_term_counts, other.per_term_counts);
}

#[test]
fn sampled_mean_tracks_expectation() {
    let h = PauliSum::from_labels(&[(0.8, "ZZ"), (-0.4, "XI"), (0.3, "IY"), (-1.0, "II")]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let trials = 200;
    let mut inside = 0;
    for seed in 0..trials {
        let mut c = Circuit::new(2);
        for q in 0..2 {
            c.push(Gate::u3(q, rng.gen_range(0.0..3.0), rng.gen_range(0.0..3.0), 0.0))
                .unwrap();
        }
        c.push(Gate::cnot(1, 0)).unwrap();
        let s = c.run(&[]).unwrap();
        let exact = expectation(&s, &h).unwrap();
        let est = sample_energy(&s, &h, 2_000, seed).unwrap();
        if (est.mean - exact).abs() < 6.0 * est.stderr.max(1e-12) {
            inside += 1;
        }
    }
    assert!(inside as f64 >= 0.99 * trials as f64, "{inside}/{trials}");
}
