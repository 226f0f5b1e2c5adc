//! Input states for the interferometer: bipartite density matrices, pure
//! bipartite states in branch form, seeded random sampling (Haar pure /
//! Ginibre mixed), and the named one-parameter families used by the worked
//! examples.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{eigvals_hermitian, partial_trace, CMatrix, HermitianMatrix, Keep, C64};
use crate::tolerances::Tolerances;

/// The fixed, platform-independent generator behind every seeded sampler.
pub type StreamRng = rand_chacha::ChaCha8Rng;

/// Root generator for a seed.
pub fn rng_from_seed(seed: u64) -> StreamRng {
    StreamRng::seed_from_u64(seed)
}

/// Independent generator for one trial of a seeded campaign: same key,
/// distinct stream. Results are reproducible regardless of how trials are
/// scheduled across workers.
pub fn rng_stream(seed: u64, stream: u64) -> StreamRng {
    let mut rng = StreamRng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Bipartite density matrix on C^(dim_a) ⊗ C^(dim_b), A-major index order.
/// `dim_b = 1` encodes the no-memory scenario.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    dim_a: usize,
    dim_b: usize,
    mat: HermitianMatrix,
}

impl DensityMatrix {
    /// Full validation: shape, Hermiticity, unit trace, positive
    /// semi-definiteness (the latter via eigendecomposition).
    pub fn new(dim_a: usize, dim_b: usize, mat: CMatrix) -> Result<Self> {
        Self::new_with(dim_a, dim_b, mat, &Tolerances::DEFAULT)
    }

    pub fn new_with(dim_a: usize, dim_b: usize, mat: CMatrix, tol: &Tolerances) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::parameter(
                "dims",
                "subsystem dimensions must be >= 1",
            ));
        }
        if mat.rows() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                got: mat.rows(),
            });
        }
        let herm = HermitianMatrix::new_with(mat, tol)?;
        let trace = herm.trace_real();
        if (trace - 1.0).abs() > tol.trace_one {
            return Err(Error::InvalidTrace { got: trace });
        }
        let min = eigvals_hermitian(&herm)
            .last()
            .copied()
            .unwrap_or(f64::INFINITY);
        if min < -tol.state_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(DensityMatrix {
            dim_a,
            dim_b,
            mat: herm,
        })
    }

    /// For matrices that are PSD by construction; skips the eigendecomposition
    /// but still checks the trace.
    pub(crate) fn trusted(dim_a: usize, dim_b: usize, mat: HermitianMatrix) -> Self {
        debug_assert_eq!(mat.dim(), dim_a * dim_b);
        debug_assert!((mat.trace_real() - 1.0).abs() < 1e-9);
        DensityMatrix { dim_a, dim_b, mat }
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn total_dim(&self) -> usize {
        self.dim_a * self.dim_b
    }

    pub fn matrix(&self) -> &HermitianMatrix {
        &self.mat
    }

    /// ρ_A = Tr_B(ρ_AB)
    pub fn reduced_a(&self) -> HermitianMatrix {
        partial_trace(&self.mat, (self.dim_a, self.dim_b), Keep::A)
            .expect("dims are consistent by construction")
    }

    /// ρ_B = Tr_A(ρ_AB)
    pub fn reduced_b(&self) -> HermitianMatrix {
        partial_trace(&self.mat, (self.dim_a, self.dim_b), Keep::B)
            .expect("dims are consistent by construction")
    }

    /// Tr ρ²
    pub fn purity(&self) -> f64 {
        self.mat.frobenius_sq()
    }

    /// q_i = (ρ_A)_ii, the path populations.
    pub fn path_populations(&self) -> Vec<f64> {
        let m = self.mat.as_matrix();
        (0..self.dim_a)
            .map(|i| {
                (0..self.dim_b)
                    .map(|j| m[(i * self.dim_b + j, i * self.dim_b + j)].re)
                    .sum()
            })
            .collect()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        eigvals_hermitian(&self.mat)
            .last()
            .copied()
            .unwrap_or(f64::INFINITY)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.total_dim();
        let m = self.mat.as_matrix();
        let re: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| m[(i, j)].im).collect())
            .collect();
        serde_json::to_value(StateJson {
            dim_a: self.dim_a,
            dim_b: self.dim_b,
            re,
            im,
        })
        .expect("state serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: StateJson = serde_json::from_str(s)?;
        raw.into_state()
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let raw: StateJson = serde_json::from_value(v)?;
        raw.into_state()
    }
}

/// Wire format for density matrices: row-major real/imaginary parts.
#[derive(Serialize, Deserialize)]
struct StateJson {
    dim_a: usize,
    dim_b: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

impl StateJson {
    fn into_state(self) -> Result<DensityMatrix> {
        let n = self.dim_a * self.dim_b;
        let shape_ok = self.re.len() == n
            && self.im.len() == n
            && self.re.iter().all(|r| r.len() == n)
            && self.im.iter().all(|r| r.len() == n);
        if !shape_ok {
            return Err(Error::parameter(
                "re/im",
                "matrix shape must be (dim_a*dim_b)^2",
            ));
        }
        let mat = CMatrix::from_fn(n, n, |i, j| C64::new(self.re[i][j], self.im[i][j]));
        DensityMatrix::new(self.dim_a, self.dim_b, mat)
    }
}

/// Pure bipartite state in branch form: amplitudes a_ij over path i and
/// memory basis j, with branch probabilities p_i = Σ_j |a_ij|² and branch
/// vectors |u_i⟩ = Σ_j a_ij |e_j⟩ / √p_i.
#[derive(Clone, Debug)]
pub struct PureBipartite {
    dim_a: usize,
    dim_b: usize,
    amps: Vec<C64>,
}

impl PureBipartite {
    pub fn new(dim_a: usize, dim_b: usize, amps: Vec<C64>) -> Result<Self> {
        Self::new_with(dim_a, dim_b, amps, &Tolerances::DEFAULT)
    }

    pub fn new_with(dim_a: usize, dim_b: usize, amps: Vec<C64>, tol: &Tolerances) -> Result<Self> {
        if dim_a == 0 || dim_b == 0 {
            return Err(Error::parameter(
                "dims",
                "subsystem dimensions must be >= 1",
            ));
        }
        if amps.len() != dim_a * dim_b {
            return Err(Error::DimensionMismatch {
                expected: dim_a * dim_b,
                got: amps.len(),
            });
        }
        if !amps.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if (norm_sq - 1.0).abs() > tol.pure_norm {
            return Err(Error::NotNormalized { got: norm_sq });
        }
        Ok(PureBipartite { dim_a, dim_b, amps })
    }

    /// Rescales the amplitudes to unit norm before constructing.
    pub fn normalized(dim_a: usize, dim_b: usize, amps: Vec<C64>) -> Result<Self> {
        let norm_sq: f64 = amps.iter().map(|z| z.norm_sqr()).sum();
        if !(norm_sq.is_finite() && norm_sq > 0.0) {
            return Err(Error::NotNormalized { got: norm_sq });
        }
        let scale = 1.0 / norm_sq.sqrt();
        let amps = amps.into_iter().map(|z| z.scale(scale)).collect();
        PureBipartite::new(dim_a, dim_b, amps)
    }

    pub fn dim_a(&self) -> usize {
        self.dim_a
    }

    pub fn dim_b(&self) -> usize {
        self.dim_b
    }

    pub fn amplitude(&self, i: usize, j: usize) -> C64 {
        self.amps[i * self.dim_b + j]
    }

    /// p_i = Σ_j |a_ij|²
    pub fn branch_probability(&self, i: usize) -> f64 {
        (0..self.dim_b)
            .map(|j| self.amplitude(i, j).norm_sqr())
            .sum()
    }

    pub fn branch_probabilities(&self) -> Vec<f64> {
        (0..self.dim_a)
            .map(|i| self.branch_probability(i))
            .collect()
    }

    /// |u_i⟩; a zero-probability branch returns the first memory basis vector
    /// so that overlap sums stay well-defined (it never contributes, p_i = 0).
    pub fn branch_vector(&self, i: usize) -> Vec<C64> {
        let p = self.branch_probability(i);
        if p < f64::MIN_POSITIVE {
            let mut e0 = vec![C64::new(0.0, 0.0); self.dim_b];
            e0[0] = C64::new(1.0, 0.0);
            return e0;
        }
        let scale = 1.0 / p.sqrt();
        (0..self.dim_b)
            .map(|j| self.amplitude(i, j).scale(scale))
            .collect()
    }

    /// ⟨u_k|u_i⟩
    pub fn branch_overlap(&self, i: usize, k: usize) -> C64 {
        let ui = self.branch_vector(i);
        let uk = self.branch_vector(k);
        uk.iter().zip(&ui).map(|(a, b)| a.conj() * b).sum()
    }

    /// (ρ_A)_ik = Σ_j a_ij conj(a_kj) = √(p_i p_k) ⟨u_k|u_i⟩
    pub fn reduced_a_entry(&self, i: usize, k: usize) -> C64 {
        (0..self.dim_b)
            .map(|j| self.amplitude(i, j) * self.amplitude(k, j).conj())
            .sum()
    }

    /// Tr ρ_A² computed directly from the amplitudes.
    pub fn marginal_purity_a(&self) -> f64 {
        let n = self.dim_a;
        let mut s = 0.0;
        for i in 0..n {
            for k in 0..n {
                s += self.reduced_a_entry(i, k).norm_sqr();
            }
        }
        s
    }

    pub fn to_density(&self) -> DensityMatrix {
        let outer = CMatrix::outer(&self.amps, &self.amps);
        DensityMatrix::trusted(self.dim_a, self.dim_b, HermitianMatrix::trusted(outer))
    }
}

fn gaussian_complex<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im)
}

/// Haar-random pure state on C^n ⊗ C^m (normalized complex Gaussian vector).
pub fn random_pure(n: usize, m: usize, seed: u64) -> Result<PureBipartite> {
    random_pure_with(n, m, &mut rng_from_seed(seed))
}

pub fn random_pure_with<R: Rng + ?Sized>(n: usize, m: usize, rng: &mut R) -> Result<PureBipartite> {
    if n < 2 {
        return Err(Error::parameter("n", "need at least 2 paths"));
    }
    if m < 1 {
        return Err(Error::parameter("m", "memory dimension must be >= 1"));
    }
    let amps: Vec<C64> = (0..n * m).map(|_| gaussian_complex(rng)).collect();
    PureBipartite::normalized(n, m, amps)
}

/// Ginibre-induced random density matrix G·G†/Tr(G·G†) with G of shape
/// (n·m) × rank.
pub fn random_mixed(n: usize, m: usize, rank: usize, seed: u64) -> Result<DensityMatrix> {
    random_mixed_with(n, m, rank, &mut rng_from_seed(seed))
}

pub fn random_mixed_with<R: Rng + ?Sized>(
    n: usize,
    m: usize,
    rank: usize,
    rng: &mut R,
) -> Result<DensityMatrix> {
    if n < 2 {
        return Err(Error::parameter("n", "need at least 2 paths"));
    }
    if m < 1 {
        return Err(Error::parameter("m", "memory dimension must be >= 1"));
    }
    let d = n * m;
    if rank < 1 || rank > d {
        return Err(Error::parameter("rank", format!("rank must be in 1..={d}")));
    }
    let g = CMatrix::from_fn(d, rank, |_, _| gaussian_complex(rng));
    let gg = g.matmul(&g.adjoint());
    let trace = gg.trace().re;
    // Gaussian trace is positive with probability one.
    let rho = gg.scale(C64::new(1.0 / trace, 0.0));
    Ok(DensityMatrix::trusted(n, m, HermitianMatrix::trusted(rho)))
}

/// Werner family on 2 ⊗ 2: p |ψ⁻⟩⟨ψ⁻| + (1-p)/4 I ⊗ I.
pub fn werner(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::parameter("p", "must lie in [0, 1]"));
    }
    let mut m = CMatrix::zeros(4, 4);
    let iso = (1.0 - p) / 4.0;
    m[(0, 0)] = C64::new(iso, 0.0);
    m[(3, 3)] = C64::new(iso, 0.0);
    m[(1, 1)] = C64::new(iso + p / 2.0, 0.0);
    m[(2, 2)] = C64::new(iso + p / 2.0, 0.0);
    m[(1, 2)] = C64::new(-p / 2.0, 0.0);
    m[(2, 1)] = C64::new(-p / 2.0, 0.0);
    Ok(DensityMatrix::trusted(2, 2, HermitianMatrix::trusted(m)))
}

/// Two-path pure family √p |1⟩|u₁⟩ + √(1-p) |2⟩|u₂⟩ with |⟨u₁|u₂⟩|² = c_u
/// and relative phase `phase` on the overlap.
pub fn example1_state(p: f64, c_u: f64, phase: f64) -> Result<PureBipartite> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::parameter("p", "must lie in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&c_u) {
        return Err(Error::parameter("c_u", "must lie in [0, 1]"));
    }
    let u2_0 = C64::from_polar(c_u.sqrt(), phase);
    let u2_1 = C64::new((1.0 - c_u).sqrt(), 0.0);
    let sp = p.sqrt();
    let sq = (1.0 - p).sqrt();
    let amps = vec![C64::new(sp, 0.0), C64::new(0.0, 0.0), sq * u2_0, sq * u2_1];
    PureBipartite::new(2, 2, amps)
}

/// Three-path pure family √(p/3)|1⟩|e₁⟩ + √(q/3)|2⟩|e₁⟩ + √((3-p-q)/3)|3⟩|e₃⟩.
pub fn threepath_example_state(p: f64, q: f64) -> Result<PureBipartite> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::parameter("p", "must lie in [0, 1]"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(Error::parameter("q", "must lie in [0, 1]"));
    }
    let mut amps = vec![C64::new(0.0, 0.0); 9];
    amps[0] = C64::new((p / 3.0).sqrt(), 0.0);
    amps[3] = C64::new((q / 3.0).sqrt(), 0.0);
    amps[8] = C64::new(((3.0 - p - q) / 3.0).sqrt(), 0.0);
    PureBipartite::new(3, 3, amps)
}
