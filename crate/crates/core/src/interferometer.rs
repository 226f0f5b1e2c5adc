//! The detector interaction: a controlled coupling that tags path |i⟩ with
//! detector state |d_i⟩. Every post-interaction quantity the relations need
//! depends only on the detector overlaps, so the canonical representation is
//! the Gram matrix G_ik = ⟨d_k|d_i⟩; explicit vectors are materialized lazily
//! for the oracles that need them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qmat::{
    eigvals_hermitian, gram_of_vectors, gram_to_vectors, CMatrix, HermitianMatrix, C64,
};
use crate::states::DensityMatrix;
use crate::tolerances::Tolerances;

/// Configuration of the n path detectors as a Gram matrix of overlaps.
#[derive(Clone, Debug)]
pub struct DetectorConfig {
    n: usize,
    gram: CMatrix,
}

impl DetectorConfig {
    /// Validates Hermiticity, unit diagonal and positive semi-definiteness.
    pub fn from_gram(gram: CMatrix) -> Result<Self> {
        Self::from_gram_with(gram, &Tolerances::DEFAULT)
    }

    pub fn from_gram_with(gram: CMatrix, tol: &Tolerances) -> Result<Self> {
        let n = gram.rows();
        if n == 0 {
            return Err(Error::parameter("gram", "need at least one detector"));
        }
        let herm = HermitianMatrix::new_with(gram, tol)?;
        for i in 0..n {
            let d = herm.as_matrix()[(i, i)].re;
            if (d - 1.0).abs() > tol.gram_diag {
                return Err(Error::GramDiagonal { index: i, got: d });
            }
        }
        let min = eigvals_hermitian(&herm)
            .last()
            .copied()
            .unwrap_or(f64::INFINITY);
        if min < -tol.gram_psd {
            return Err(Error::NotPsd {
                min_eigenvalue: min,
            });
        }
        Ok(DetectorConfig {
            n,
            gram: herm.into_matrix(),
        })
    }

    /// Orthogonal detectors: G = I (full which-path information).
    pub fn orthogonal(n: usize) -> Self {
        DetectorConfig {
            n,
            gram: CMatrix::identity(n),
        }
    }

    /// Identical detectors: G_ik = 1 (no which-path information).
    pub fn identical(n: usize) -> Self {
        DetectorConfig {
            n,
            gram: CMatrix::from_fn(n, n, |_, _| C64::new(1.0, 0.0)),
        }
    }

    /// All off-diagonal overlaps share the same squared modulus c, realized
    /// with the real nonnegative overlap √c.
    pub fn uniform_overlap(n: usize, c: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&c) {
            return Err(Error::parameter("c", "squared overlap must lie in [0, 1]"));
        }
        let x = c.sqrt();
        let gram = CMatrix::from_fn(n, n, |i, k| {
            if i == k {
                C64::new(1.0, 0.0)
            } else {
                C64::new(x, 0.0)
            }
        });
        Self::from_gram(gram)
    }

    /// Gram of explicit unit vectors (PSD by construction).
    pub fn from_vectors(vectors: &[Vec<C64>]) -> Result<Self> {
        Self::from_gram(gram_of_vectors(vectors))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gram(&self) -> &CMatrix {
        &self.gram
    }

    /// G_ik = ⟨d_k|d_i⟩
    pub fn overlap(&self, i: usize, k: usize) -> C64 {
        self.gram[(i, k)]
    }

    /// |⟨d_k|d_i⟩|²
    pub fn overlap_sq(&self, i: usize, k: usize) -> f64 {
        self.gram[(i, k)].norm_sqr()
    }

    /// Unit vectors realizing the Gram, in a space of dimension equal to its
    /// numerical rank.
    pub fn vectors(&self) -> Result<Vec<Vec<C64>>> {
        gram_to_vectors(&self.gram, &Tolerances::DEFAULT)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let n = self.n;
        let re: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|k| self.gram[(i, k)].re).collect())
            .collect();
        let im: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|k| self.gram[(i, k)].im).collect())
            .collect();
        serde_json::to_value(DetectorJson {
            n,
            gram_re: re,
            gram_im: im,
        })
        .expect("detector serialization cannot fail")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let raw: DetectorJson = serde_json::from_str(s)?;
        raw.into_config()
    }
}

#[derive(Serialize, Deserialize)]
struct DetectorJson {
    n: usize,
    gram_re: Vec<Vec<f64>>,
    gram_im: Vec<Vec<f64>>,
}

impl DetectorJson {
    fn into_config(self) -> Result<DetectorConfig> {
        let n = self.n;
        let shape_ok = self.gram_re.len() == n
            && self.gram_im.len() == n
            && self.gram_re.iter().all(|r| r.len() == n)
            && self.gram_im.iter().all(|r| r.len() == n);
        if !shape_ok {
            return Err(Error::parameter("gram_re/gram_im", "shape must be n x n"));
        }
        let gram = CMatrix::from_fn(n, n, |i, k| {
            C64::new(self.gram_re[i][k], self.gram_im[i][k])
        });
        DetectorConfig::from_gram(gram)
    }
}

/// Post-interaction reduced quantities.
#[derive(Clone, Debug)]
pub struct InterferometerOutput {
    /// ρ̃_AB: blockwise G_ik · B_ik
    pub rho_ab_tilde: DensityMatrix,
    /// ρ̃_A: entrywise G_ik · (ρ_A)_ik
    pub rho_a_tilde: HermitianMatrix,
    /// q_i = (ρ_A)_ii
    pub q: Vec<f64>,
    /// Tr ρ̃_D² = Σ q_i q_k |G_ik|²
    pub purity_d: f64,
    /// Tr ρ̃_A²
    pub purity_a: f64,
    /// Tr ρ̃_AB²
    pub purity_ab: f64,
}

/// Applies the detector coupling to ρ_AB and reduces.
///
/// The entrywise (Schur) form is the reference implementation; the explicit
/// tripartite construction in [`build_tripartite`] serves as its test oracle.
pub fn apply_detectors(rho: &DensityMatrix, det: &DetectorConfig) -> Result<InterferometerOutput> {
    let n = rho.dim_a();
    let m = rho.dim_b();
    if det.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: det.n(),
        });
    }
    let full = rho.matrix().as_matrix();
    let tilde_ab = CMatrix::from_fn(n * m, n * m, |r, c| {
        let (i, k) = (r / m, c / m);
        det.overlap(i, k) * full[(r, c)]
    });
    let rho_ab_tilde = DensityMatrix::trusted(n, m, HermitianMatrix::trusted(tilde_ab));

    let rho_a = rho.reduced_a();
    let tilde_a = CMatrix::from_fn(n, n, |i, k| det.overlap(i, k) * rho_a.as_matrix()[(i, k)]);
    let rho_a_tilde = HermitianMatrix::trusted(tilde_a);

    let q: Vec<f64> = (0..n).map(|i| rho_a.as_matrix()[(i, i)].re).collect();
    let mut purity_d = 0.0;
    for i in 0..n {
        for k in 0..n {
            purity_d += q[i] * q[k] * det.overlap_sq(i, k);
        }
    }
    let purity_a = rho_a_tilde.frobenius_sq();
    let purity_ab = rho_ab_tilde.purity();

    Ok(InterferometerOutput {
        rho_ab_tilde,
        rho_a_tilde,
        q,
        purity_d,
        purity_a,
        purity_ab,
    })
}

/// Explicit post-interaction tripartite state Σ |i⟩⟨k| ⊗ B_ik ⊗ |d_i⟩⟨d_k|,
/// with detector vectors realized from the Gram. Returned grouped as
/// (A⊗B | D): `dim_a = n·m`, `dim_b = rank(G)`.
pub fn build_tripartite(rho: &DensityMatrix, det: &DetectorConfig) -> Result<DensityMatrix> {
    let n = rho.dim_a();
    let m = rho.dim_b();
    if det.n() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: det.n(),
        });
    }
    let d = det.vectors()?;
    let r = d[0].len();
    let full = rho.matrix().as_matrix();
    let dim = n * m * r;
    let out = CMatrix::from_fn(dim, dim, |row, col| {
        let (ab_r, alpha) = (row / r, row % r);
        let (ab_c, beta) = (col / r, col % r);
        let i = ab_r / m;
        let k = ab_c / m;
        full[(ab_r, ab_c)] * d[i][alpha] * d[k][beta].conj()
    });
    Ok(DensityMatrix::trusted(
        n * m,
        r,
        HermitianMatrix::trusted(out),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmat::{partial_trace, Keep};
    use crate::states::{random_mixed, random_pure, werner};

    fn random_gram(n: usize, seed: u64) -> DetectorConfig {
        crate::sampling::detectors_haar(n, &mut crate::states::rng_from_seed(seed))
    }

    #[test]
    fn orthogonal_detectors_fully_decohere() {
        let rho = random_mixed(3, 2, 4, 11).unwrap();
        let out = apply_detectors(&rho, &DetectorConfig::orthogonal(3)).unwrap();
        for i in 0..3 {
            for k in 0..3 {
                if i != k {
                    assert!(out.rho_a_tilde.as_matrix()[(i, k)].norm() < 1e-15);
                }
            }
        }
        let q_purity: f64 = out.q.iter().map(|x| x * x).sum();
        assert!((out.purity_d - q_purity).abs() < 1e-12);
    }

    #[test]
    fn identical_detectors_leave_marginal_unchanged() {
        let rho = random_mixed(3, 2, 2, 5).unwrap();
        let out = apply_detectors(&rho, &DetectorConfig::identical(3)).unwrap();
        assert!(
            out.rho_a_tilde
                .as_matrix()
                .max_abs_diff(rho.reduced_a().as_matrix())
                < 1e-14
        );
    }

    #[test]
    fn werner_joint_purity_closed_form() {
        // Tr ρ̃_AB² = (1+p²)/4 + p²x²/2, from expanding the blocks by hand.
        for &(p, x) in &[(0.0, 0.3), (0.75, 0.5), (1.0, 1.0), (0.4, 0.0)] {
            let rho = werner(p).unwrap();
            let det = DetectorConfig::uniform_overlap(2, x * x).unwrap();
            let out = apply_detectors(&rho, &det).unwrap();
            let expect = (1.0 + p * p) / 4.0 + p * p * x * x / 2.0;
            assert!((out.purity_ab - expect).abs() < 1e-12);
            // cross-check against the closed form 5/8 - p²(1+2x²)/8 via ¾ - ½·purity
            let rhs = 0.75 - 0.5 * out.purity_ab;
            let expect_rhs = 5.0 / 8.0 - p * p * (1.0 + 2.0 * x * x) / 8.0;
            assert!((rhs - expect_rhs).abs() < 1e-12);
        }
    }

    #[test]
    fn dimension_mismatch_rejected() {
        let rho = random_mixed(3, 2, 2, 5).unwrap();
        assert!(apply_detectors(&rho, &DetectorConfig::orthogonal(2)).is_err());
        assert!(build_tripartite(&rho, &DetectorConfig::orthogonal(2)).is_err());
    }

    #[test]
    fn output_invariants_on_random_inputs() {
        for seed in 0..60 {
            let n = 2 + (seed as usize) % 3;
            let m = 1 + (seed as usize) % 3;
            let rho = random_mixed(n, m, 1 + (seed as usize) % (n * m), seed).unwrap();
            let det = random_gram(n, seed + 1000);
            let out = apply_detectors(&rho, &det).unwrap();

            let q_sum: f64 = out.q.iter().sum();
            assert!((q_sum - 1.0).abs() < 1e-10);
            assert!(out.purity_a <= 1.0 + 1e-10 && out.purity_a >= 1.0 / n as f64 - 1e-10);
            assert!(out.purity_ab <= 1.0 + 1e-10);
            assert!(out.purity_d <= 1.0 + 1e-10 && out.purity_d >= 1.0 / n as f64 - 1e-10);

            // trace and PSD are preserved
            assert!((out.rho_ab_tilde.matrix().trace_real() - 1.0).abs() < 1e-10);
            assert!(out.rho_ab_tilde.min_eigenvalue() >= -1e-10);

            // reduction consistency: ρ̃_A = Tr_B(ρ̃_AB)
            let reduced = out.rho_ab_tilde.reduced_a();
            assert!(
                out.rho_a_tilde
                    .as_matrix()
                    .max_abs_diff(reduced.as_matrix())
                    < 1e-12
            );

            // decoherence monotonicity under |G_ik| <= 1
            let pre_purity = rho.reduced_a().frobenius_sq();
            assert!(out.purity_a <= pre_purity + 1e-10);
        }
    }

    #[test]
    fn pure_inputs_match_detector_purity() {
        for seed in 0..60 {
            let n = 2 + (seed as usize) % 3;
            let m = 1 + (seed as usize) % 3;
            let psi = random_pure(n, m, seed).unwrap();
            let det = random_gram(n, seed + 500);
            let out = apply_detectors(&psi.to_density(), &det).unwrap();
            assert!(
                (out.purity_ab - out.purity_d).abs() < 1e-10,
                "Tr ρ̃_AB² and Tr ρ̃_D² must agree for pure inputs"
            );
        }
    }

    #[test]
    fn tripartite_oracle_agrees_with_schur_form() {
        for seed in 0..25 {
            let n = 2 + (seed as usize) % 3;
            let m = 1 + (seed as usize) % 2;
            let rho = random_mixed(n, m, 1 + (seed as usize) % (n * m), seed).unwrap();
            let det = random_gram(n, seed + 77);
            let out = apply_detectors(&rho, &det).unwrap();
            let tri = build_tripartite(&rho, &det).unwrap();

            // tracing out D reproduces ρ̃_AB
            let ab = tri.reduced_a();
            assert!(
                ab.as_matrix()
                    .max_abs_diff(out.rho_ab_tilde.matrix().as_matrix())
                    < 1e-10
            );
            // tracing out AB reproduces the detector purity of the Gram form
            let d_state = tri.reduced_b();
            assert!((d_state.frobenius_sq() - out.purity_d).abs() < 1e-10);
            // and the A marginal chain matches
            let a_only = partial_trace(&ab, (n, m), Keep::A).unwrap();
            assert!(a_only.as_matrix().max_abs_diff(out.rho_a_tilde.as_matrix()) < 1e-10);
        }
    }

    #[test]
    fn tripartite_pure_bell_with_orthogonal_detectors() {
        let mut amps = vec![C64::new(0.0, 0.0); 4];
        amps[0] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[3] = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let psi = crate::states::PureBipartite::new(2, 2, amps).unwrap();
        let tri = build_tripartite(&psi.to_density(), &DetectorConfig::orthogonal(2)).unwrap();
        assert!((tri.matrix().trace_real() - 1.0).abs() < 1e-12);
        assert!(
            (tri.purity() - 1.0).abs() < 1e-10,
            "controlled unitary keeps purity"
        );
    }

    #[test]
    fn uniform_overlap_validation() {
        assert!(DetectorConfig::uniform_overlap(3, 1.2).is_err());
        assert!(DetectorConfig::uniform_overlap(3, -0.1).is_err());
        let det = DetectorConfig::uniform_overlap(4, 0.49).unwrap();
        assert!((det.overlap(1, 3).re - 0.7).abs() < 1e-15);
    }

    #[test]
    fn gram_json_round_trip() {
        let det = random_gram(3, 4242);
        let json = det.to_json();
        let back = DetectorConfig::from_json_str(&json.to_string()).unwrap();
        assert!(back.gram().max_abs_diff(det.gram()) < 1e-15);
    }
}
