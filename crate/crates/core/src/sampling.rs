//! Random instances for Monte Carlo campaigns: detector Grams from random
//! unit vectors, constrained detector families, and pure states with the
//! branch structure the limiting relations require. Everything takes an
//! explicit generator so trials can run on independent seed streams.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::interferometer::DetectorConfig;
use crate::qmat::C64;
use crate::states::{random_mixed_with, DensityMatrix, PureBipartite};

/// Haar-random unit vector in C^dim.
pub fn unit_vector<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> Vec<C64> {
    loop {
        let v: Vec<C64> = (0..dim)
            .map(|_| C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let norm_sq: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if norm_sq > 1e-12 {
            let s = 1.0 / norm_sq.sqrt();
            return v.into_iter().map(|z| z.scale(s)).collect();
        }
    }
}

/// Detector configuration from n random unit vectors in C^n; the Gram is PSD
/// by construction.
pub fn detectors_haar<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DetectorConfig {
    let vectors: Vec<Vec<C64>> = (0..n).map(|_| unit_vector(n, rng)).collect();
    DetectorConfig::from_vectors(&vectors).expect("Gram of unit vectors is valid")
}

/// Two detectors with fixed squared overlap c and random phases.
pub fn detectors_two_fixed_overlap<R: Rng + ?Sized>(c: f64, rng: &mut R) -> Result<DetectorConfig> {
    if !(0.0..=1.0).contains(&c) {
        return Err(Error::parameter("c", "squared overlap must lie in [0, 1]"));
    }
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    let chi = rng.gen_range(0.0..std::f64::consts::TAU);
    let d1 = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    let d2 = vec![
        C64::from_polar(c.sqrt(), phi),
        C64::from_polar((1.0 - c).sqrt(), chi),
    ];
    DetectorConfig::from_vectors(&[d1, d2])
}

/// Pure state whose branch vectors all coincide up to phase
/// (|⟨u_j|u_i⟩| = 1): Σ c_i e^{iθ_i} |i⟩ ⊗ |u⟩.
pub fn pure_equal_branches<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<PureBipartite> {
    if n < 2 {
        return Err(Error::parameter("n", "need at least 2 paths"));
    }
    let path = unit_vector(n, rng);
    let memory = unit_vector(m, rng);
    let amps: Vec<C64> = (0..n)
        .flat_map(|i| (0..m).map(move |j| (i, j)))
        .map(|(i, j)| path[i] * memory[j])
        .collect();
    PureBipartite::new(n, m, amps)
}

/// Pure state whose branch vectors are orthonormal (⟨u_j|u_i⟩ = δ_ij);
/// requires memory dimension at least n.
pub fn pure_orthonormal_branches<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<PureBipartite> {
    if n < 2 {
        return Err(Error::parameter("n", "need at least 2 paths"));
    }
    if m < n {
        return Err(Error::parameter(
            "m",
            "orthonormal branches need memory dimension >= path count",
        ));
    }
    let path = unit_vector(n, rng);
    let mut amps = vec![C64::new(0.0, 0.0); n * m];
    for i in 0..n {
        // u_i = e_i up to the phase already carried by path[i]
        amps[i * m + i] = path[i];
    }
    PureBipartite::new(n, m, amps)
}

/// Ginibre state with rank drawn uniformly from 1..=n·m.
pub fn mixed_random_rank<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    let rank = rng.gen_range(1..=n * m);
    random_mixed_with(n, m, rank, rng)
}
