//! Shared fixtures for the pipeline benchmarks.

use duality_core::sampling::{detectors_haar, mixed_random_rank};
use duality_core::states::rng_from_seed;
use duality_core::{DensityMatrix, DetectorConfig};

pub fn fixture(n: usize, m: usize, seed: u64) -> (DensityMatrix, DetectorConfig) {
    let mut rng = rng_from_seed(seed);
    let rho = mixed_random_rank(n, m, &mut rng).expect("valid dims");
    let det = detectors_haar(n, &mut rng);
    (rho, det)
}
