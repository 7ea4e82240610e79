#![allow(dead_code)]

use proptest::test_runner::{Config, RngSeed};
use quadcong::charsum::ComplexValue;
use quadcong::conic::TernaryForm;
use quadcong::MASTER_SEED;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Thirty forms admissible for every p in {3, 5, 7, 11, 13}; both signs of
/// ((b^2 - 4ac)/p) occur for each of those primes.
pub const CORPUS: [[i64; 6]; 30] = [
    [1, 0, 1, 0, 0, 1],
    [-1, -4, 0, 4, -6, -5],
    [-4, 3, -5, 1, -6, -3],
    [-1, 5, -6, -6, 6, -2],
    [-1, -4, -2, -4, 1, -3],
    [4, -2, 0, -4, 2, 2],
    [-2, 5, -3, -3, -1, -3],
    [-2, 1, -6, -2, -1, -1],
    [-1, -4, -6, -1, 0, -5],
    [1, -2, 2, 4, -3, -3],
    [2, 6, -4, 4, 5, 6],
    [1, -5, 2, 1, -2, 0],
    [4, -4, -3, -2, 0, 2],
    [1, 0, -1, -2, -2, -2],
    [1, -2, -1, 4, -3, 1],
    [1, 3, -2, 6, 6, 4],
    [2, 4, -6, -6, 4, -4],
    [-2, -5, 6, 2, -6, 4],
    [-2, 3, -4, -2, -3, 5],
    [4, 5, -3, 2, -3, -2],
    [-1, -4, -3, -1, -3, -2],
    [2, 4, -2, 1, -6, -4],
    [-4, 4, -5, 1, 0, -1],
    [-2, 0, 1, 1, -6, 3],
    [-2, -1, -3, 4, -2, -1],
    [1, 1, 0, 3, 4, -5],
    [-2, -3, 1, 5, -3, 2],
    [1, 3, 2, 6, -2, -5],
    [-1, 0, 2, 2, 3, 0],
    [-1, 2, 0, 4, 2, 3],
];

pub fn corpus() -> Vec<TernaryForm> {
    CORPUS.iter().map(|&[a, b, c, d, e, f]| TernaryForm::new(a, b, c, d, e, f)).collect()
}

pub fn rng(stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(MASTER_SEED);
    r.set_stream(stream);
    r
}

pub fn proptest_config(cases: u32) -> Config {
    Config { cases, rng_seed: RngSeed::Fixed(MASTER_SEED), failure_persistence: None, ..Config::default() }
}

pub fn close(a: ComplexValue, b: ComplexValue, tol: f64) -> bool {
    (a - b).norm() <= tol
}
