//! Smoke benchmark: Gray-code Ryser costs ~2^n·n, so each extra row about
//! doubles the wall time.

mod common;

use std::time::{Duration, Instant};

use common::random_complex_matrix;
use heqvpe_core::photonic::permanent_ryser;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Min over interleaved rounds: each round times every size once, so a
/// noisy stretch of wall time cannot land on a single size only.
fn best_times(sizes: &[usize], rounds: usize) -> Vec<Duration> {
    let mats: Vec<_> = sizes
        .iter()
        .map(|&n| random_complex_matrix(&mut ChaCha8Rng::seed_from_u64(n as u64), n))
        .collect();
    let mut best = vec![Duration::MAX; sizes.len()];
    for _ in 0..rounds {
        for (a, b) in mats.iter().zip(best.iter_mut()) {
            let t = Instant::now();
            std::hint::black_box(permanent_ryser(std::hint::black_box(a)).unwrap());
            *b = (*b).min(t.elapsed());
        }
    }
    best
}

#[test]
fn runtime_doubles_per_row() {
    // One worker, so the ratio reflects the algorithm rather than scheduling.
    let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    pool.install(|| {
        let sizes: Vec<usize> = (16..=22).collect();
        let times: Vec<(usize, Duration)> =
            sizes.iter().copied().zip(best_times(&sizes, 7)).collect();
        for w in times.windows(2) {
            let ratio = w[1].1.as_secs_f64() / w[0].1.as_secs_f64();
            println!("n={} -> {}: ratio {ratio:.2}", w[0].0, w[1].0);
            assert!((1.6..=2.8).contains(&ratio), "n={}: {ratio}", w[0].0);
        }
    });
}
